//! Circular convolution by a point-spread function, via the DFT.
//!
//! The operator is circulant, so its spectrum is the DFT of the kernel and
//! the spectral norm is exactly `max_k |spectrum_k|`. The adjoint applies the
//! conjugate spectrum.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fft::{self, C64};
use crate::image::Image;
use crate::math;

/// Circular convolution operator `H` with cached kernel spectrum.
#[derive(Debug, Clone)]
pub struct ConvOperator {
    width: usize,
    height: usize,
    spectrum: Vec<C64>,
    norm: f64,
}

impl ConvOperator {
    /// Builds the operator from a kernel laid out on the full image grid,
    /// centred at the origin with circular wrap (as produced by
    /// [`make_gaussian_psf`]).
    pub fn new(psf: &Image) -> ConvOperator {
        let (w, h) = (psf.width(), psf.height());
        let mut spectrum: Vec<C64> = psf.data().iter().map(|&v| C64::new(v, 0.0)).collect();
        fft::fft2(&mut spectrum, w, h);
        let norm = spectrum
            .iter()
            .map(|c| math::sqrt(c.norm_sqr()))
            .fold(0.0, f64::max);
        ConvOperator {
            width: w,
            height: h,
            spectrum,
            norm,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Exact spectral norm ‖H‖₂ of the circulant operator.
    pub fn operator_norm(&self) -> f64 {
        self.norm
    }

    /// `H x`: circular convolution of `x` with the kernel.
    pub fn apply(&self, x: &Image) -> Result<Image> {
        self.filter(x, false)
    }

    /// `Hᵀ x`: convolution with the conjugate spectrum.
    pub fn apply_adjoint(&self, x: &Image) -> Result<Image> {
        self.filter(x, true)
    }

    fn filter(&self, x: &Image, adjoint: bool) -> Result<Image> {
        if x.width() != self.width || x.height() != self.height {
            return Err(Error::DimensionMismatch {
                expected: (self.width, self.height),
                got: (x.width(), x.height()),
            });
        }
        let mut buf: Vec<C64> = x.data().iter().map(|&v| C64::new(v, 0.0)).collect();
        fft::fft2(&mut buf, self.width, self.height);
        if adjoint {
            for (v, s) in buf.iter_mut().zip(&self.spectrum) {
                *v *= s.conj();
            }
        } else {
            for (v, s) in buf.iter_mut().zip(&self.spectrum) {
                *v *= *s;
            }
        }
        fft::ifft2(&mut buf, self.width, self.height);
        // Real input, real kernel: the imaginary residue is FFT round-off only.
        let data: Vec<f64> = buf.iter().map(|c| c.re).collect();
        Image::from_vec(self.width, self.height, data)
    }
}

/// Anisotropic Gaussian kernel centred at the origin with circular wrap,
/// normalised to unit sum.
pub fn make_gaussian_psf(
    width: usize,
    height: usize,
    sigma_x: f64,
    sigma_y: f64,
) -> Result<Image> {
    if sigma_x <= 0.0 {
        return Err(Error::NonPositiveSigma(sigma_x));
    }
    if sigma_y <= 0.0 {
        return Err(Error::NonPositiveSigma(sigma_y));
    }
    let mut img = Image::from_fn(width, height, |r, c| {
        let dy = wrapped_displacement(r, height);
        let dx = wrapped_displacement(c, width);
        math::exp(-0.5 * (dx * dx / (sigma_x * sigma_x) + dy * dy / (sigma_y * sigma_y)))
    });
    let total = img.sum();
    let inv = 1.0 / total;
    for v in img.data_mut() {
        *v *= inv;
    }
    Ok(img)
}

/// Signed distance from the origin under periodic wrap: 0, 1, ..., n/2, then
/// negative back down to -1.
fn wrapped_displacement(i: usize, n: usize) -> f64 {
    let i = i as isize;
    let n = n as isize;
    let d = if i <= n / 2 { i } else { i - n };
    d as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn impulse(w: usize, h: usize) -> Image {
        let mut data = vec![0.0; w * h];
        data[0] = 1.0;
        Image::from_vec(w, h, data).unwrap()
    }

    #[test]
    fn gaussian_psf_normalised_and_positive() {
        for sigma in [1e-6, 0.5, 1.5, 4.0] {
            let psf = make_gaussian_psf(16, 16, sigma, sigma).unwrap();
            assert!((psf.sum() - 1.0).abs() < 1e-12, "sigma={sigma}");
            assert!(psf.min_value() >= 0.0);
        }
    }

    #[test]
    fn tiny_sigma_is_unit_impulse() {
        let psf = make_gaussian_psf(8, 8, 1e-6, 1e-6).unwrap();
        assert!((psf.get(0, 0) - 1.0).abs() < 1e-12);
        assert!(psf.data()[1..].iter().all(|&v| v.abs() < 1e-12));
    }

    #[test]
    fn isotropic_psf_rotation_symmetric() {
        let n = 12;
        let psf = make_gaussian_psf(n, n, 1.3, 1.3).unwrap();
        for r in 0..n {
            for c in 0..n {
                // 90-degree rotation on the periodic grid: (r, c) -> (c, n-r mod n).
                let rot = psf.get(c, (n - r) % n);
                assert!((psf.get(r, c) - rot).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn non_positive_sigma_rejected() {
        assert!(make_gaussian_psf(8, 8, 0.0, 1.0).is_err());
        assert!(make_gaussian_psf(8, 8, 1.0, -2.0).is_err());
    }

    #[test]
    fn impulse_kernel_is_identity() {
        let op = ConvOperator::new(&impulse(8, 6));
        let x = Image::from_fn(8, 6, |r, c| (r * 13 + c * 7) as f64 * 0.1 - 2.0);
        let y = op.apply(&x).unwrap();
        for (a, b) in y.data().iter().zip(x.data()) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((op.operator_norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn scaled_impulse_norm() {
        let op = ConvOperator::new(&impulse(8, 8).scale(2.0));
        assert!((op.operator_norm() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn sum_one_kernel_preserves_dc() {
        let psf = make_gaussian_psf(16, 16, 2.0, 1.0).unwrap();
        let op = ConvOperator::new(&psf);
        assert!((op.operator_norm() - 1.0).abs() < 1e-12);
        let c = Image::constant(16, 16, 3.25);
        let y = op.apply(&c).unwrap();
        for &v in y.data() {
            assert!((v - 3.25).abs() < 1e-10);
        }
    }

    #[test]
    fn apply_recovers_centred_psf_from_impulse() {
        let psf = make_gaussian_psf(10, 10, 1.5, 0.8).unwrap();
        let op = ConvOperator::new(&psf);
        let y = op.apply(&impulse(10, 10)).unwrap();
        for (a, b) in y.data().iter().zip(psf.data()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let op = ConvOperator::new(&impulse(8, 8));
        assert!(op.apply(&Image::zeros(4, 4)).is_err());
    }
}
