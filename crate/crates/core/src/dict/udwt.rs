//! Undecimated (à-trous) 2-D wavelet transform, normalised as a tight frame.
//!
//! Level j uses the orthonormal filters upsampled by 2^(j−1). With subband
//! weights 2^(1−j) on the three detail bands of level j and on the final
//! approximation, the analysis operator satisfies ΦΦᵀ = 4·I exactly (the
//! per-level quadrature identity |H|² + |G|² = 2 telescopes across levels),
//! so the frame constant is A = 4 for any depth. Level-1 atoms keep unit
//! norm; deeper atoms carry the tightness weight.
//!
//! Subband order: LH₁, HL₁, HH₁, LH₂, …, HH_J, LL_J — each of image size.

use alloc::vec;
use alloc::vec::Vec;

use super::filters::WaveletFamily;

/// Frame constant of the 2-D construction.
pub const FRAME_CONSTANT: f64 = 4.0;

/// Coefficient count for a `width` x `height` image at `levels` levels.
pub fn coeff_len(width: usize, height: usize, levels: usize) -> usize {
    (3 * levels + 1) * width * height
}

/// Tightness weight 2^(1−j) of level j, exact in f64.
#[inline]
fn pow2_weight(level: usize) -> f64 {
    1.0 / (1u64 << (level - 1)) as f64
}

#[derive(Clone, Copy)]
enum Axis {
    Rows,
    Cols,
}

/// Correlation with the stride-upsampled filter along one axis:
/// `dst[k] = Σ_j f[j] · src[k + dir·stride·j (periodic)]`.
/// `dir = +1` is the analysis direction; `dir = −1` is its exact transpose.
fn atrous_filter(
    src: &[f64],
    dst: &mut [f64],
    width: usize,
    height: usize,
    filter: &[f64],
    stride: usize,
    dir: isize,
    axis: Axis,
) {
    let (m, lines) = match axis {
        Axis::Rows => (width, height),
        Axis::Cols => (height, width),
    };
    // Per-tap periodic offsets, reduced once.
    let offsets: Vec<usize> = (0..filter.len())
        .map(|j| {
            let o = dir * (stride as isize) * (j as isize);
            o.rem_euclid(m as isize) as usize
        })
        .collect();

    match axis {
        Axis::Rows => {
            for line in 0..lines {
                let base = line * width;
                for k in 0..m {
                    let mut acc = 0.0;
                    for (j, &f) in filter.iter().enumerate() {
                        let idx = k + offsets[j];
                        let idx = if idx >= m { idx - m } else { idx };
                        acc += f * src[base + idx];
                    }
                    dst[base + k] = acc;
                }
            }
        }
        Axis::Cols => {
            for line in 0..lines {
                for k in 0..m {
                    let mut acc = 0.0;
                    for (j, &f) in filter.iter().enumerate() {
                        let idx = k + offsets[j];
                        let idx = if idx >= m { idx - m } else { idx };
                        acc += f * src[idx * width + line];
                    }
                    dst[k * width + line] = acc;
                }
            }
        }
    }
}

/// Forward transform: returns stacked subbands of length
/// `coeff_len(width, height, levels)`.
pub fn forward(
    data: &[f64],
    width: usize,
    height: usize,
    family: WaveletFamily,
    levels: usize,
) -> Vec<f64> {
    let lo = family.scaling_filter();
    let hi = family.wavelet_filter();
    let n = width * height;
    let mut out = vec![0.0; coeff_len(width, height, levels)];

    let mut approx = data.to_vec();
    let mut rl = vec![0.0; n];
    let mut rh = vec![0.0; n];
    let mut band = vec![0.0; n];

    for level in 1..=levels {
        let stride = 1usize << (level - 1);
        let weight = pow2_weight(level);
        atrous_filter(&approx, &mut rl, width, height, lo, stride, 1, Axis::Rows);
        atrous_filter(&approx, &mut rh, width, height, &hi, stride, 1, Axis::Rows);

        let base = 3 * (level - 1) * n;
        // LH: lowpass rows, highpass cols.
        atrous_filter(&rl, &mut band, width, height, &hi, stride, 1, Axis::Cols);
        for (o, &b) in out[base..base + n].iter_mut().zip(&band) {
            *o = weight * b;
        }
        // HL: highpass rows, lowpass cols.
        atrous_filter(&rh, &mut band, width, height, lo, stride, 1, Axis::Cols);
        for (o, &b) in out[base + n..base + 2 * n].iter_mut().zip(&band) {
            *o = weight * b;
        }
        // HH.
        atrous_filter(&rh, &mut band, width, height, &hi, stride, 1, Axis::Cols);
        for (o, &b) in out[base + 2 * n..base + 3 * n].iter_mut().zip(&band) {
            *o = weight * b;
        }
        // New approximation (unweighted; the weight is applied on output only).
        atrous_filter(&rl, &mut band, width, height, lo, stride, 1, Axis::Cols);
        approx.copy_from_slice(&band);
    }

    let weight = pow2_weight(levels);
    let base = 3 * levels * n;
    for (o, &a) in out[base..base + n].iter_mut().zip(&approx) {
        *o = weight * a;
    }
    out
}

/// Exact adjoint of [`forward`] (synthesis operator Φ).
pub fn adjoint(
    coeffs: &[f64],
    width: usize,
    height: usize,
    family: WaveletFamily,
    levels: usize,
) -> Vec<f64> {
    let lo = family.scaling_filter();
    let hi = family.wavelet_filter();
    let n = width * height;
    debug_assert_eq!(coeffs.len(), coeff_len(width, height, levels));

    let mut rl = vec![0.0; n];
    let mut rh = vec![0.0; n];
    let mut tmp = vec![0.0; n];

    // Adjoint of the final approximation output.
    let weight = pow2_weight(levels);
    let base = 3 * levels * n;
    let mut acc: Vec<f64> = coeffs[base..base + n].iter().map(|&v| weight * v).collect();

    for level in (1..=levels).rev() {
        let stride = 1usize << (level - 1);
        let weight = pow2_weight(level);
        let base = 3 * (level - 1) * n;
        let (lh, rest) = coeffs[base..base + 3 * n].split_at(n);
        let (hl, hh) = rest.split_at(n);

        // Column-adjoint into the two row-filtered channels.
        // rl' = loᵀ(acc) + hiᵀ(w·lh)
        atrous_filter(&acc, &mut rl, width, height, lo, stride, -1, Axis::Cols);
        for (i, &v) in lh.iter().enumerate() {
            tmp[i] = weight * v;
        }
        atrous_filter(&tmp, &mut acc, width, height, &hi, stride, -1, Axis::Cols);
        for (a, &b) in rl.iter_mut().zip(&acc) {
            *a += b;
        }
        // rh' = loᵀ(w·hl) + hiᵀ(w·hh)
        for (i, &v) in hl.iter().enumerate() {
            tmp[i] = weight * v;
        }
        atrous_filter(&tmp, &mut rh, width, height, lo, stride, -1, Axis::Cols);
        for (i, &v) in hh.iter().enumerate() {
            tmp[i] = weight * v;
        }
        atrous_filter(&tmp, &mut acc, width, height, &hi, stride, -1, Axis::Cols);
        for (a, &b) in rh.iter_mut().zip(&acc) {
            *a += b;
        }
        // Row-adjoint back to the image grid.
        atrous_filter(&rl, &mut acc, width, height, lo, stride, -1, Axis::Rows);
        atrous_filter(&rh, &mut tmp, width, height, &hi, stride, -1, Axis::Rows);
        for (a, &b) in acc.iter_mut().zip(&tmp) {
            *a += b;
        }
    }
    acc
}
