//! Oracles shared by the integration tests. Everything here is deliberately
//! independent of the library's computational paths: direct summation instead
//! of FFTs, dual projected gradient instead of Douglas-Rachford, spatial
//! projected gradient instead of the coefficient-domain solver.

#![allow(dead_code)]

use pdeconv_core::rng::SplitMix64;
use pdeconv_core::{CoeffVector, Dictionary, Image};

/// Direct O(n²) circular convolution in the spatial domain.
pub fn naive_circular_conv(x: &Image, kernel: &Image) -> Image {
    let (w, h) = (x.width(), x.height());
    Image::from_fn(w, h, |r, c| {
        let mut acc = 0.0;
        for kr in 0..h {
            for kc in 0..w {
                let sr = (r + h - kr) % h;
                let sc = (c + w - kc) % w;
                acc += kernel.get(kr, kc) * x.get(sr, sc);
            }
        }
        acc
    })
}

pub fn random_image(w: usize, h: usize, rng: &mut SplitMix64, lo: f64, hi: f64) -> Image {
    Image::from_fn(w, h, |_, _| lo + (hi - lo) * rng.next_f64())
}

pub fn random_coeffs(d: &Dictionary, rng: &mut SplitMix64, lo: f64, hi: f64) -> CoeffVector {
    CoeffVector::from_vec(
        d.layout(),
        (0..d.coeff_len())
            .map(|_| lo + (hi - lo) * rng.next_f64())
            .collect(),
    )
    .unwrap()
}

/// Central finite differences of a scalar function over a flat vector.
pub fn finite_difference_gradient(
    f: &mut dyn FnMut(&[f64]) -> f64,
    at: &[f64],
    step: f64,
) -> Vec<f64> {
    let mut point = at.to_vec();
    let mut grad = Vec::with_capacity(at.len());
    for i in 0..at.len() {
        let orig = point[i];
        point[i] = orig + step;
        let fp = f(&point);
        point[i] = orig - step;
        let fm = f(&point);
        point[i] = orig;
        grad.push((fp - fm) / (2.0 * step));
    }
    grad
}

pub fn rel_l2_error(a: &[f64], b: &[f64]) -> f64 {
    let diff: f64 = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt();
    let scale: f64 = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    diff / scale.max(1e-300)
}

/// Independent minimiser of `μλ‖u‖₁ + ½‖u − α‖²  s.t.  Φu ≥ 0` by projected
/// gradient ascent on the dual: the multiplier update is
/// `ρ ← max(ρ − s·Φ u*(ρ), 0)` with `u*(ρ) = soft(α + Φᵀρ, μλ)`.
/// Runs until the primal iterate is stationary to ~1e-12.
pub fn prox_oracle_dual_pg(d: &Dictionary, alpha: &CoeffVector, mu_lambda: f64) -> CoeffVector {
    let step = 1.0 / d.frame_constant();
    let mut rho = Image::zeros(d.width(), d.height());
    let mut u_prev: Option<CoeffVector> = None;
    for _ in 0..500_000 {
        let pulled = d.analyze(&rho).unwrap();
        let u = alpha
            .add_scaled(1.0, &pulled)
            .unwrap()
            .map(|v| soft(v, mu_lambda));
        let phi_u = d.synthesize(&u).unwrap();
        rho = rho
            .zip_map(&phi_u, |r, s| (r - step * s).max(0.0))
            .unwrap();
        if let Some(prev) = &u_prev {
            let delta = u.sub(prev).unwrap().norm_l2();
            if delta <= 1e-13 * (1.0 + u.norm_l2()) {
                return u;
            }
        }
        u_prev = Some(u);
    }
    u_prev.expect("at least one dual iteration")
}

fn soft(v: f64, delta: f64) -> f64 {
    if v > delta {
        v - delta
    } else if v < -delta {
        v + delta
    } else {
        0.0
    }
}

/// Objective of the prox subproblem (for optimality comparisons); returns
/// None when `Φu` is meaningfully negative somewhere.
pub fn prox_objective(
    d: &Dictionary,
    u: &CoeffVector,
    alpha: &CoeffVector,
    mu_lambda: f64,
) -> Option<f64> {
    let synth = d.synthesize(u).unwrap();
    if synth.min_value() < -1e-7 * (1.0 + u.norm_l2()) {
        return None;
    }
    let tie = u.sub(alpha).unwrap().norm_l2();
    Some(mu_lambda * u.l1_norm() + 0.5 * tie * tie)
}
