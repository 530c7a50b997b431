//! Douglas-Rachford prox against the identity-dictionary closed form and an
//! independent dual projected-gradient minimiser.

mod common;

use common::{prox_objective, prox_oracle_dual_pg, random_coeffs};
use pdeconv_core::prox::{prox_f2, ProxConfig};
use pdeconv_core::rng::SplitMix64;
use pdeconv_core::{Dictionary, WaveletFamily};

fn tight_cfg() -> ProxConfig {
    ProxConfig {
        nu: 0.5,
        max_inner: 20_000,
        tol: 1e-12,
    }
}

#[test]
fn identity_dictionary_matches_closed_form() {
    let d = Dictionary::identity(10, 10);
    let mut rng = SplitMix64::new(31);
    for trial in 0..100 {
        let alpha = random_coeffs(&d, &mut rng, -4.0, 4.0);
        let mu_lambda = 2.0 * rng.next_f64();
        let out = prox_f2(&d, &alpha, mu_lambda, &tight_cfg()).unwrap();
        assert!(out.converged, "trial {trial}");
        for (got, &a) in out.coeffs.data().iter().zip(alpha.data()) {
            let expect = (a - mu_lambda).max(0.0);
            assert!(
                (got - expect).abs() < 1e-8,
                "trial {trial}: a={a} μλ={mu_lambda} got={got} expect={expect}"
            );
        }
    }
}

#[test]
fn haar_matches_dual_projected_gradient_oracle() {
    let d = Dictionary::orthogonal_wavelet(4, 4, WaveletFamily::Haar, 2).unwrap();
    let mut rng = SplitMix64::new(32);
    for trial in 0..20 {
        let alpha = random_coeffs(&d, &mut rng, -2.0, 2.0);
        let mu_lambda = 0.05 + rng.next_f64();
        let got = prox_f2(&d, &alpha, mu_lambda, &tight_cfg()).unwrap();
        let oracle = prox_oracle_dual_pg(&d, &alpha, mu_lambda);
        let err = got.coeffs.sub(&oracle).unwrap().norm_l2();
        assert!(err < 1e-6, "trial {trial}: {err}");

        // Optimality: our objective is no worse than the oracle's.
        let ours = prox_objective(&d, &got.coeffs, &alpha, mu_lambda).expect("feasible");
        let theirs = prox_objective(&d, &oracle, &alpha, mu_lambda).expect("feasible");
        assert!(ours <= theirs + 1e-6, "trial {trial}: {ours} vs {theirs}");
    }
}

#[test]
fn output_is_feasible_for_tight_frames() {
    let mut rng = SplitMix64::new(33);
    for d in [
        Dictionary::orthogonal_wavelet(8, 8, WaveletFamily::Db2, 2).unwrap(),
        Dictionary::undecimated_wavelet(8, 8, WaveletFamily::Haar, 2).unwrap(),
    ] {
        for _ in 0..10 {
            let alpha = random_coeffs(&d, &mut rng, -3.0, 3.0);
            let out = prox_f2(&d, &alpha, 0.4, &ProxConfig::default()).unwrap();
            let synth = d.synthesize(&out.coeffs).unwrap();
            assert!(
                synth.min_value() >= -1e-8 * out.coeffs.norm_l2().max(1.0),
                "min {}",
                synth.min_value()
            );
        }
    }
}
