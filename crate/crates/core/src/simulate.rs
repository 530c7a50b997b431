//! Synthetic scenes, seeded Poisson sampling, and the degradation pipeline.
//!
//! Sampling is per-pixel independent: pixel `i` draws from its own SplitMix64
//! stream derived from `(seed, i)` (see [`crate::rng`]), so the noisy image is
//! bit-identical for a given seed no matter how the loop is scheduled.
//! Draws use inversion by sequential search below mean 10 and Hörmann's
//! transformed rejection (PTRS) above it.

use crate::conv::ConvOperator;
use crate::error::{Error, Result};
use crate::image::Image;
use crate::math;
use crate::rng::{Seed, SplitMix64};

/// Mean below which Poisson draws use CDF inversion instead of rejection.
const INVERSION_CUTOFF: f64 = 10.0;

/// Negative intensities within this relative tolerance (FFT round-off from a
/// blurring step) are treated as zero by the sampler.
const NEG_INTENSITY_REL_TOL: f64 = 1e-9;

/// Synthetic scene families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhantomKind {
    /// Sum of isotropic Gaussian bumps.
    Blobs,
    /// Smoothed deterministic random-walk curves.
    Filaments,
    /// A stem with a mushroom-shaped head.
    Spine,
}

impl PhantomKind {
    pub fn name(&self) -> &'static str {
        match self {
            PhantomKind::Blobs => "blobs",
            PhantomKind::Filaments => "filaments",
            PhantomKind::Spine => "spine",
        }
    }

    pub fn from_name(name: &str) -> Option<PhantomKind> {
        match name {
            "blobs" => Some(PhantomKind::Blobs),
            "filaments" => Some(PhantomKind::Filaments),
            "spine" => Some(PhantomKind::Spine),
            _ => None,
        }
    }
}

/// Parameters of a synthetic scene; generation is fully deterministic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Phantom {
    pub kind: PhantomKind,
    pub width: usize,
    pub height: usize,
    /// Target maximum intensity (photon counts at the brightest pixel).
    pub peak: f64,
}

/// Generates the scene and rescales it so the maximum pixel equals `peak`.
pub fn make_phantom(p: &Phantom) -> Result<Image> {
    if p.width == 0 || p.height == 0 {
        return Err(Error::InvalidParameter("phantom dimensions must be positive"));
    }
    if !(p.peak > 0.0) {
        return Err(Error::InvalidParameter("phantom peak must be positive"));
    }
    let base = match p.kind {
        PhantomKind::Blobs => blobs(p.width, p.height),
        PhantomKind::Filaments => filaments(p.width, p.height)?,
        PhantomKind::Spine => spine(p.width, p.height),
    };
    let max = base.max_value();
    debug_assert!(max > 0.0);
    let s = p.peak / max;
    Ok(base.map(|v| (v * s).max(0.0)))
}

fn fract(x: f64) -> f64 {
    x - math::floor(x)
}

fn blobs(w: usize, h: usize) -> Image {
    let scale = w.min(h) as f64;
    let bumps = 6;
    let mut centers = [(0.0f64, 0.0f64, 0.0f64, 0.0f64); 6];
    for (i, c) in centers.iter_mut().enumerate() {
        let t = i as f64;
        let cx = (0.12 + 0.76 * fract(0.17 + t * 0.618_033_988_749_895)) * w as f64;
        let cy = (0.12 + 0.76 * fract(0.39 + t * 0.754_877_666_246_693)) * h as f64;
        let sigma = scale * (0.035 + 0.045 * fract(0.11 + t * 0.356_8));
        let amp = 0.35 + 0.65 * fract(0.83 + t * 0.911_3);
        *c = (cx, cy, sigma, amp);
    }
    Image::from_fn(w, h, |r, cix| {
        let (x, y) = (cix as f64, r as f64);
        let mut v = 0.0;
        for &(cx, cy, sigma, amp) in &centers[..bumps] {
            let d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
            v += amp * math::exp(-d2 / (2.0 * sigma * sigma));
        }
        v
    })
}

fn filaments(w: usize, h: usize) -> Result<Image> {
    let mut canvas = Image::zeros(w, h);
    // Internal constant seed: the phantom is a fixed scene, not a random one.
    let mut rng = SplitMix64::new(0x66696C61_6D656E74);
    let walks = 3;
    let steps = 4 * (w + h);
    for walk in 0..walks {
        let mut x = (0.15 + 0.7 * fract(0.21 + walk as f64 * 0.618)) * w as f64;
        let mut y = (0.15 + 0.7 * fract(0.47 + walk as f64 * 0.755)) * h as f64;
        let mut angle = rng.next_f64() * core::f64::consts::TAU;
        for _ in 0..steps {
            angle += 0.35 * (rng.next_f64() - 0.5);
            x += 0.7 * math::cos(angle);
            y += 0.7 * math::sin(angle);
            // Reflect off the borders to stay in frame.
            if x < 1.0 || x > w as f64 - 2.0 {
                angle = core::f64::consts::PI - angle;
                x = x.clamp(1.0, w as f64 - 2.0);
            }
            if y < 1.0 || y > h as f64 - 2.0 {
                angle = -angle;
                y = y.clamp(1.0, h as f64 - 2.0);
            }
            let (c, r) = (x as usize, y as usize);
            canvas.data_mut()[r * w + c] += 1.0;
        }
    }
    // Soften the deposited track into a smooth tube.
    let psf = crate::conv::make_gaussian_psf(w, h, 1.0, 1.0)?;
    let smoothed = ConvOperator::new(&psf).apply(&canvas)?;
    Ok(smoothed.map(|v| v.max(0.0)))
}

fn spine(w: usize, h: usize) -> Image {
    let (wf, hf) = (w as f64, h as f64);
    // Stem endpoints and head centre, in relative coordinates.
    let (ax, ay) = (0.48 * wf, 0.85 * hf);
    let (bx, by) = (0.56 * wf, 0.38 * hf);
    let stem_width = 0.035 * wf.min(hf);
    let (hx, hy) = (0.58 * wf, 0.26 * hf);
    let (hsx, hsy) = (0.11 * wf, 0.075 * hf);
    Image::from_fn(w, h, |r, c| {
        let (x, y) = (c as f64, r as f64);
        // Distance to the stem segment.
        let (dx, dy) = (bx - ax, by - ay);
        let t = (((x - ax) * dx + (y - ay) * dy) / (dx * dx + dy * dy)).clamp(0.0, 1.0);
        let (px, py) = (ax + t * dx, ay + t * dy);
        let d2 = (x - px) * (x - px) + (y - py) * (y - py);
        let stem = 0.8 * math::exp(-d2 / (2.0 * stem_width * stem_width));
        let ex = (x - hx) / hsx;
        let ey = (y - hy) / hsy;
        let head = math::exp(-0.5 * (ex * ex + ey * ey));
        stem + head
    })
}

/// Draws `y_i ~ Poisson(x_i)` independently per pixel, reproducibly from the
/// seed.
pub fn poisson_sample(x: &Image, seed: Seed) -> Result<Image> {
    let tol = NEG_INTENSITY_REL_TOL * (1.0 + x.max_value().max(0.0));
    let mut out = alloc::vec::Vec::with_capacity(x.len());
    for (i, &v) in x.data().iter().enumerate() {
        if v < -tol {
            return Err(Error::NegativeIntensity { index: i, value: v });
        }
        let lambda = v.max(0.0);
        let mut rng = SplitMix64::pixel_stream(seed, i as u64);
        out.push(poisson_draw(lambda, &mut rng) as f64);
    }
    Image::from_vec(x.width(), x.height(), out)
}

/// `blurred = H x`, `noisy ~ Poisson(blurred)`: the full degradation model.
pub fn degrade(x: &Image, psf: &Image, seed: Seed) -> Result<(Image, Image)> {
    for (i, &v) in x.data().iter().enumerate() {
        if v < 0.0 {
            return Err(Error::NegativeIntensity { index: i, value: v });
        }
    }
    let op = ConvOperator::new(psf);
    let blurred = op.apply(x)?;
    let noisy = poisson_sample(&blurred, seed)?;
    Ok((blurred, noisy))
}

/// One Poisson draw with the given mean.
pub fn poisson_draw(lambda: f64, rng: &mut SplitMix64) -> u64 {
    if lambda <= 0.0 {
        return 0;
    }
    if lambda < INVERSION_CUTOFF {
        poisson_inversion(lambda, rng)
    } else {
        poisson_ptrs(lambda, rng)
    }
}

/// CDF inversion by sequential search; exact and fast for small means.
fn poisson_inversion(lambda: f64, rng: &mut SplitMix64) -> u64 {
    let u = rng.next_f64();
    let mut k = 0u64;
    let mut p = math::exp(-lambda);
    let mut cdf = p;
    // The tail beyond ~20·λ+200 carries less mass than one ulp of the CDF.
    while u > cdf && k < 1000 {
        k += 1;
        p *= lambda / k as f64;
        cdf += p;
    }
    k
}

/// Hörmann's transformed rejection with squeeze (PTRS), valid for mean ≥ 10.
fn poisson_ptrs(lambda: f64, rng: &mut SplitMix64) -> u64 {
    let slam = math::sqrt(lambda);
    let loglam = math::ln(lambda);
    let b = 0.931 + 2.53 * slam;
    let a = -0.059 + 0.02483 * b;
    let inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    let v_r = 0.9277 - 3.6224 / (b - 2.0);

    loop {
        let u = rng.next_f64() - 0.5;
        let v = rng.next_f64();
        let us = 0.5 - u.abs();
        let kf = math::floor((2.0 * a / us + b) * u + lambda + 0.43);
        if us >= 0.07 && v <= v_r {
            return kf as u64;
        }
        if kf < 0.0 || (us < 0.013 && v > us) {
            continue;
        }
        let k = kf as u64;
        let lhs = math::ln(v) + math::ln(inv_alpha) - math::ln(a / (us * us) + b);
        let rhs = -lambda + kf * loglam - ln_factorial(k);
        if lhs <= rhs {
            return k;
        }
    }
}

/// ln(k!): exact accumulation for small k, Stirling series beyond.
fn ln_factorial(k: u64) -> f64 {
    if k < 16 {
        let mut acc = 0.0;
        for i in 2..=k {
            acc += math::ln(i as f64);
        }
        return acc;
    }
    let x = (k + 1) as f64;
    let ln_sqrt_tau = 0.918_938_533_204_672_7; // ln(2π)/2
    (x - 0.5) * math::ln(x) - x
        + ln_sqrt_tau
        + 1.0 / (12.0 * x)
        - 1.0 / (360.0 * x * x * x)
        + 1.0 / (1260.0 * x * x * x * x * x)
}
