//! Anscombe variance-stabilising transform and the non-linear data fidelity.
//!
//! Stabilising the counts with `z = 2√(y + 3/8)` turns Poisson noise into
//! approximately unit-variance Gaussian noise, but leaves `z` non-linearly
//! related to the unknown intensity: `z_i ≈ 2√((h⊛x)_i + 3/8) + ε`. The
//! fidelity used by the solver is therefore
//!
//! ```text
//!   F(x) = Σ_i ½ (z_i − 2√(η_i + 3/8))²,    η = h ⊛ x,
//! ```
//!
//! whose gradient in x is `Hᵀ g` with `g_i = 2 − z_i/√(η_i + 3/8)`. On the
//! positive orthant the gradient is Lipschitz, which is what licenses the
//! forward-backward outer iteration and its step-size bound.

use crate::conv::ConvOperator;
use crate::error::{Error, Result};
use crate::image::Image;
use crate::math;

/// Offset inside the square root of the Anscombe transform.
pub const ANSCOMBE_OFFSET: f64 = 3.0 / 8.0;

/// Negative blurred means within this relative tolerance are clamped to zero;
/// anything more negative indicates a solver bug and is reported as an error.
const NEG_MEAN_REL_TOL: f64 = 1e-6;

/// `z_i = 2√(y_i + 3/8)` elementwise. Fails on negative counts.
pub fn anscombe(y: &Image) -> Result<Image> {
    for (i, &v) in y.data().iter().enumerate() {
        if v < 0.0 {
            return Err(Error::NegativeCount { index: i, value: v });
        }
    }
    Ok(y.map(|v| 2.0 * math::sqrt(v + ANSCOMBE_OFFSET)))
}

/// Algebraic inverse `(z/2)² − 3/8`, clamped at zero.
pub fn inverse_anscombe(z: &Image) -> Image {
    z.map(|v| (v * 0.5 * (v * 0.5) - ANSCOMBE_OFFSET).max(0.0))
}

/// Stabilised observation plus the cached quantities the solver needs.
pub struct FidelityContext<'a> {
    z: Image,
    conv: &'a ConvOperator,
    z_inf: f64,
}

impl<'a> FidelityContext<'a> {
    /// Wraps an already-stabilised observation.
    pub fn new(z: Image, conv: &'a ConvOperator) -> Result<Self> {
        if z.width() != conv.width() || z.height() != conv.height() {
            return Err(Error::DimensionMismatch {
                expected: (conv.width(), conv.height()),
                got: (z.width(), z.height()),
            });
        }
        let z_inf = z.max_value();
        Ok(FidelityContext { z, conv, z_inf })
    }

    /// Stabilises a count image and wraps it.
    pub fn from_counts(y: &Image, conv: &'a ConvOperator) -> Result<Self> {
        FidelityContext::new(anscombe(y)?, conv)
    }

    pub fn z(&self) -> &Image {
        &self.z
    }

    /// Cached ‖z‖_∞.
    pub fn z_inf(&self) -> f64 {
        self.z_inf
    }

    pub fn conv(&self) -> &ConvOperator {
        self.conv
    }

    /// `F(x) = Σ ½(z_i − 2√((h⊛x)_i + 3/8))²`.
    ///
    /// Blurred means slightly below zero (FFT round-off at intermediate
    /// iterates) are clamped; strongly negative means are an error.
    pub fn value(&self, x: &Image) -> Result<f64> {
        let eta = self.conv.apply(x)?;
        let tol = self.neg_tolerance(&eta);
        let mut acc = 0.0;
        for (i, (&e, &z)) in eta.data().iter().zip(self.z.data()).enumerate() {
            if e < -tol {
                return Err(Error::NegativeMean { index: i, value: e });
            }
            let r = z - 2.0 * math::sqrt(e.max(0.0) + ANSCOMBE_OFFSET);
            acc += 0.5 * r * r;
        }
        Ok(acc)
    }

    /// `∇F(x) = Hᵀ g`, `g_i = 2 − z_i/√(max(η_i,0) + 3/8)`.
    pub fn gradient(&self, x: &Image) -> Result<Image> {
        let eta = self.conv.apply(x)?;
        let g = eta.zip_map(&self.z, |e, z| {
            2.0 - z / math::sqrt(e.max(0.0) + ANSCOMBE_OFFSET)
        })?;
        self.conv.apply_adjoint(&g)
    }

    /// Theorem step-size bound `(3/2)^{3/2} / (2·A·‖H‖²·‖z‖_∞)`.
    ///
    /// Any constant sequence `μ_t` strictly below this keeps the outer
    /// forward-backward iteration convergent; half of it is the classical
    /// majorisation (monotone-descent) regime.
    pub fn step_size_bound(&self, frame_constant: f64) -> Result<f64> {
        if frame_constant <= 0.0 {
            return Err(Error::InvalidParameter("frame constant must be positive"));
        }
        let h = self.conv.operator_norm();
        if h <= 0.0 {
            return Err(Error::InvalidParameter("operator norm must be positive"));
        }
        if self.z_inf <= 0.0 {
            return Err(Error::BlankObservation);
        }
        Ok(math::powf(1.5, 1.5) / (2.0 * frame_constant * h * h * self.z_inf))
    }

    fn neg_tolerance(&self, eta: &Image) -> f64 {
        let m = eta.data().iter().fold(0.0f64, |a, &v| a.max(v.abs()));
        NEG_MEAN_REL_TOL * (1.0 + m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conv::make_gaussian_psf;
    use alloc::vec;

    fn identity_op(w: usize, h: usize) -> ConvOperator {
        let mut data = vec![0.0; w * h];
        data[0] = 1.0;
        ConvOperator::new(&Image::from_vec(w, h, data).unwrap())
    }

    #[test]
    fn anscombe_point_values() {
        let y = Image::from_vec(3, 1, vec![0.0, 1.0, 10.0]).unwrap();
        let z = anscombe(&y).unwrap();
        assert!((z.data()[0] - 1.2247448714).abs() < 1e-9);
        assert!((z.data()[1] - 2.3452078799).abs() < 1e-9);
        assert!((z.data()[2] - 6.4420493634).abs() < 1e-9);
    }

    #[test]
    fn anscombe_rejects_negative_counts() {
        let y = Image::from_vec(2, 1, vec![1.0, -0.5]).unwrap();
        assert!(matches!(anscombe(&y), Err(Error::NegativeCount { index: 1, .. })));
    }

    #[test]
    fn inverse_round_trip_on_counts() {
        let y = Image::from_vec(5, 1, vec![0.0, 1.0, 2.0, 17.0, 65535.0]).unwrap();
        let back = inverse_anscombe(&anscombe(&y).unwrap());
        for (a, b) in back.data().iter().zip(y.data()) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn inverse_clamps_at_zero() {
        let z = Image::from_vec(2, 1, vec![0.0, 2.0 * (0.375f64).sqrt()]).unwrap();
        let x = inverse_anscombe(&z);
        assert_eq!(x.data()[0], 0.0);
        assert!(x.data()[1].abs() < 1e-12);
    }

    #[test]
    fn value_zero_at_perfect_fit() {
        let op = identity_op(4, 4);
        let y = Image::from_fn(4, 4, |r, c| (r * 4 + c) as f64);
        let ctx = FidelityContext::from_counts(&y, &op).unwrap();
        // H = I, so eta = y and the fit is exact.
        let v = ctx.value(&y).unwrap();
        assert!(v.abs() < 1e-20);
        // Empty scene.
        let zero = Image::zeros(4, 4);
        let ctx0 = FidelityContext::from_counts(&zero, &op).unwrap();
        assert!(ctx0.value(&zero).unwrap().abs() < 1e-20);
    }

    #[test]
    fn gradient_zero_at_stationary_point() {
        let psf = make_gaussian_psf(8, 8, 1.2, 1.2).unwrap();
        let op = ConvOperator::new(&psf);
        let x = Image::from_fn(8, 8, |r, c| 1.0 + ((r + 2 * c) % 5) as f64);
        // Manufacture z so the fit is exact at x.
        let eta = op.apply(&x).unwrap();
        let z = eta.map(|e| 2.0 * (e + ANSCOMBE_OFFSET).sqrt());
        let ctx = FidelityContext::new(z, &op).unwrap();
        let g = ctx.gradient(&x).unwrap();
        assert!(g.norm_l2() < 1e-9);
    }

    #[test]
    fn gradient_is_two_for_zero_observation() {
        let op = identity_op(4, 4);
        let ctx = FidelityContext::new(Image::zeros(4, 4), &op).unwrap();
        let x = Image::constant(4, 4, 2.5);
        let g = ctx.gradient(&x).unwrap();
        for &v in g.data() {
            assert!((v - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn step_bound_values() {
        let op = identity_op(2, 2);
        let z_star = 1.5f64.powf(1.5);
        let ctx = FidelityContext::new(Image::constant(2, 2, z_star), &op).unwrap();
        assert!((ctx.step_size_bound(1.0).unwrap() - 0.5).abs() < 1e-12);

        let ctx1 = FidelityContext::new(Image::constant(2, 2, 1.0), &op).unwrap();
        assert!((ctx1.step_size_bound(1.0).unwrap() - z_star / 2.0).abs() < 1e-9);
        // Doubling A halves the bound.
        assert!(
            (ctx1.step_size_bound(2.0).unwrap() - ctx1.step_size_bound(1.0).unwrap() / 2.0).abs()
                < 1e-15
        );
    }

    #[test]
    fn blank_observation_rejected() {
        let op = identity_op(2, 2);
        let ctx = FidelityContext::new(Image::zeros(2, 2), &op).unwrap();
        assert!(matches!(ctx.step_size_bound(1.0), Err(Error::BlankObservation)));
    }

    #[test]
    fn strongly_negative_mean_is_an_error() {
        let op = identity_op(2, 2);
        let y = Image::constant(2, 2, 4.0);
        let ctx = FidelityContext::from_counts(&y, &op).unwrap();
        let bad = Image::from_vec(2, 2, vec![1.0, -2.0, 1.0, 1.0]).unwrap();
        assert!(matches!(ctx.value(&bad), Err(Error::NegativeMean { .. })));
        // The gradient clamps instead of failing.
        assert!(ctx.gradient(&bad).is_ok());
    }
}
