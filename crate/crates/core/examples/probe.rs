use pdeconv_core::conv::{make_gaussian_psf, ConvOperator};
use pdeconv_core::rng::Seed;
use pdeconv_core::simulate::{degrade, make_phantom};
use pdeconv_core::solver::gradient_f1;
use pdeconv_core::prox::project_cprime;
use pdeconv_core::{CoeffVector, Dictionary, FidelityContext, Phantom, PhantomKind, WaveletFamily};

fn soft(v: f64, d: f64) -> f64 { if v > d { v - d } else if v < -d { v + d } else { 0.0 } }

fn main() {
    let (w, h) = (32, 32);
    let truth = make_phantom(&Phantom { kind: PhantomKind::Blobs, width: w, height: h, peak: 30.0 }).unwrap();
    let psf = make_gaussian_psf(w, h, 1.5, 1.5).unwrap();
    let (_, y) = degrade(&truth, &psf, Seed(777)).unwrap();
    let d = Dictionary::orthogonal_wavelet(w, h, WaveletFamily::Db2, 3).unwrap();
    let op = ConvOperator::new(&psf);
    let ctx = FidelityContext::from_counts(&y, &op).unwrap();
    let bound = ctx.step_size_bound(d.frame_constant()).unwrap();
    let mu = 0.5 * bound;
    let lambda = 8.0;
    let delta = 0.5 * mu * lambda;

    // Inner problem from the first outer step (the hardest one).
    let alpha0 = CoeffVector::zeros(d.layout());
    let g = gradient_f1(&ctx, &d, &alpha0).unwrap();
    let beta = alpha0.add_scaled(-mu, &g).unwrap();

    // Manual DR with full instrumentation.
    let nu = 0.5;
    let mut gamma = beta.clone();
    let mut p_prev: Option<CoeffVector> = None;
    let mut shadow_prev: Option<CoeffVector> = None;
    // Reference: run 20000 iterations first.
    let mut gref = beta.clone();
    for _ in 0..20000 {
        let proj = project_cprime(&d, &gref).unwrap();
        let r1 = proj.add_scaled(-0.5, &gref).unwrap().map(|v| 2.0 * v);
        let next = {
            let a = beta.data(); let r = r1.data(); let gd = gref.data();
            CoeffVector::from_vec(gref.layout().clone(), (0..gd.len()).map(|i| {
                let p = soft(0.5 * (a[i] + r[i]), delta);
                gd[i] + nu * (2.0 * p - r[i] - gd[i])
            }).collect()).unwrap()
        };
        gref = next;
    }
    let shadow_ref = project_cprime(&d, &gref).unwrap();

    for t in 0..2000 {
        let proj = project_cprime(&d, &gamma).unwrap();
        let r1 = proj.add_scaled(-0.5, &gamma).unwrap().map(|v| 2.0 * v);
        let (next, p) = {
            let a = beta.data(); let r = r1.data(); let gd = gamma.data();
            let mut pv = Vec::with_capacity(gd.len());
            let nx: Vec<f64> = (0..gd.len()).map(|i| {
                let p = soft(0.5 * (a[i] + r[i]), delta);
                pv.push(p);
                gd[i] + nu * (2.0 * p - r[i] - gd[i])
            }).collect();
            (CoeffVector::from_vec(gamma.layout().clone(), nx).unwrap(),
             CoeffVector::from_vec(gamma.layout().clone(), pv).unwrap())
        };
        let gstep = next.sub(&gamma).unwrap().norm_l2();
        let pstep = p_prev.as_ref().map(|q| p.sub(q).unwrap().norm_l2()).unwrap_or(f64::NAN);
        gamma = next;
        if t % 100 == 0 || t == 1999 {
            let shadow = project_cprime(&d, &gamma).unwrap();
            let sstep = shadow_prev.as_ref().map(|q| shadow.sub(q).unwrap().norm_l2()).unwrap_or(f64::NAN);
            let dist = shadow.sub(&shadow_ref).unwrap().norm_l2();
            println!("t={t:4} γstep={gstep:.2e} pstep={pstep:.2e} shadowΔ(100)={sstep:.2e} dist_to_ref={dist:.2e}");
            shadow_prev = Some(shadow);
        }
        p_prev = Some(p);
    }
}
