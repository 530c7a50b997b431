//! Decimated 2-D orthogonal wavelet transform, periodic boundary.
//!
//! Coefficients use the classic packed quadrant layout: at every level the
//! current low-low block is split in place into [approx | detail] along rows
//! and then columns. Because the filters are orthonormal and the boundary is
//! periodic with even block sizes, the transform matrix is exactly orthogonal
//! and synthesis is its transpose.

use alloc::vec;
use alloc::vec::Vec;

use super::filters::WaveletFamily;

/// One 1-D analysis step on `src` (length must be even): approximation into
/// the first half of `dst`, detail into the second half.
fn analyze_1d(src: &[f64], dst: &mut [f64], lo: &[f64], hi: &[f64]) {
    let m = src.len();
    let half = m / 2;
    let f = lo.len();
    for k in 0..half {
        let mut a = 0.0;
        let mut d = 0.0;
        let base = 2 * k;
        if base + f <= m {
            // Interior: no wrap.
            for (j, (&l, &h)) in lo.iter().zip(hi).enumerate() {
                let v = src[base + j];
                a += l * v;
                d += h * v;
            }
        } else {
            for (j, (&l, &h)) in lo.iter().zip(hi).enumerate() {
                let v = src[(base + j) % m];
                a += l * v;
                d += h * v;
            }
        }
        dst[k] = a;
        dst[half + k] = d;
    }
}

/// Transpose of [`analyze_1d`]: scatter [approx | detail] back to a signal.
fn synthesize_1d(src: &[f64], dst: &mut [f64], lo: &[f64], hi: &[f64]) {
    let m = dst.len();
    let half = m / 2;
    let f = lo.len();
    dst.fill(0.0);
    for k in 0..half {
        let a = src[k];
        let d = src[half + k];
        let base = 2 * k;
        if base + f <= m {
            for (j, (&l, &h)) in lo.iter().zip(hi).enumerate() {
                dst[base + j] += l * a + h * d;
            }
        } else {
            for (j, (&l, &h)) in lo.iter().zip(hi).enumerate() {
                dst[(base + j) % m] += l * a + h * d;
            }
        }
    }
}

/// Forward transform of a row-major image; returns the packed coefficients.
pub fn forward(
    data: &[f64],
    width: usize,
    height: usize,
    family: WaveletFamily,
    levels: usize,
) -> Vec<f64> {
    let lo = family.scaling_filter();
    let hi = family.wavelet_filter();
    let mut buf = data.to_vec();
    let mut row_in = vec![0.0; width.max(height)];
    let mut row_out = vec![0.0; width.max(height)];

    for level in 0..levels {
        let wb = width >> level;
        let hb = height >> level;
        for r in 0..hb {
            let start = r * width;
            row_in[..wb].copy_from_slice(&buf[start..start + wb]);
            analyze_1d(&row_in[..wb], &mut row_out[..wb], lo, &hi);
            buf[start..start + wb].copy_from_slice(&row_out[..wb]);
        }
        for c in 0..wb {
            for r in 0..hb {
                row_in[r] = buf[r * width + c];
            }
            analyze_1d(&row_in[..hb], &mut row_out[..hb], lo, &hi);
            for r in 0..hb {
                buf[r * width + c] = row_out[r];
            }
        }
    }
    buf
}

/// Inverse (= transpose) of [`forward`].
pub fn inverse(
    coeffs: &[f64],
    width: usize,
    height: usize,
    family: WaveletFamily,
    levels: usize,
) -> Vec<f64> {
    let lo = family.scaling_filter();
    let hi = family.wavelet_filter();
    let mut buf = coeffs.to_vec();
    let mut col_in = vec![0.0; width.max(height)];
    let mut col_out = vec![0.0; width.max(height)];

    for level in (0..levels).rev() {
        let wb = width >> level;
        let hb = height >> level;
        for c in 0..wb {
            for r in 0..hb {
                col_in[r] = buf[r * width + c];
            }
            synthesize_1d(&col_in[..hb], &mut col_out[..hb], lo, &hi);
            for r in 0..hb {
                buf[r * width + c] = col_out[r];
            }
        }
        for r in 0..hb {
            let start = r * width;
            col_in[..wb].copy_from_slice(&buf[start..start + wb]);
            synthesize_1d(&col_in[..wb], &mut col_out[..wb], lo, &hi);
            buf[start..start + wb].copy_from_slice(&col_out[..wb]);
        }
    }
    buf
}
