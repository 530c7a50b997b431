//! Complex DFT used by the circular-convolution operator.
//!
//! Power-of-two lengths use an iterative radix-2 transform; other lengths go
//! through Bluestein's chirp-z reduction to a padded power-of-two transform,
//! so any rectangle is supported. Everything here is exact-length DFT
//! (no approximation), which keeps the circulant spectral norm exact.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex;

use crate::math;

pub type C64 = Complex<f64>;

const TAU: f64 = 6.283185307179586476925286766559;

/// In-place forward DFT.
pub fn fft(buf: &mut [C64]) {
    transform(buf, false);
}

/// In-place inverse DFT, including the 1/n normalisation.
pub fn ifft(buf: &mut [C64]) {
    transform(buf, true);
    let scale = 1.0 / buf.len() as f64;
    for v in buf.iter_mut() {
        *v *= scale;
    }
}

/// Row-column 2-D forward DFT of a row-major buffer.
pub fn fft2(data: &mut [C64], width: usize, height: usize) {
    assert_eq!(data.len(), width * height);
    for row in data.chunks_mut(width) {
        fft(row);
    }
    let mut col = vec![C64::new(0.0, 0.0); height];
    for c in 0..width {
        for r in 0..height {
            col[r] = data[r * width + c];
        }
        fft(&mut col);
        for r in 0..height {
            data[r * width + c] = col[r];
        }
    }
}

/// Row-column 2-D inverse DFT (normalised).
pub fn ifft2(data: &mut [C64], width: usize, height: usize) {
    assert_eq!(data.len(), width * height);
    for row in data.chunks_mut(width) {
        ifft(row);
    }
    let mut col = vec![C64::new(0.0, 0.0); height];
    for c in 0..width {
        for r in 0..height {
            col[r] = data[r * width + c];
        }
        ifft(&mut col);
        for r in 0..height {
            data[r * width + c] = col[r];
        }
    }
}

fn transform(buf: &mut [C64], inverse: bool) {
    let n = buf.len();
    if n <= 1 {
        return;
    }
    if n.is_power_of_two() {
        fft_pow2(buf, inverse);
    } else if inverse {
        // ifft(x) = conj(fft(conj(x))); caller applies 1/n.
        for v in buf.iter_mut() {
            *v = v.conj();
        }
        bluestein(buf);
        for v in buf.iter_mut() {
            *v = v.conj();
        }
    } else {
        bluestein(buf);
    }
}

/// Iterative radix-2 Cooley-Tukey with a per-call twiddle table.
fn fft_pow2(buf: &mut [C64], inverse: bool) {
    let n = buf.len();
    debug_assert!(n.is_power_of_two());

    // Bit-reversal permutation.
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            buf.swap(i, j);
        }
    }

    // Twiddles computed directly per index: no recurrence drift.
    let sign = if inverse { 1.0 } else { -1.0 };
    let half = n / 2;
    let mut tw = Vec::with_capacity(half);
    for k in 0..half {
        let ang = sign * TAU * k as f64 / n as f64;
        tw.push(C64::new(math::cos(ang), math::sin(ang)));
    }

    let mut len = 2;
    while len <= n {
        let stride = n / len;
        for start in (0..n).step_by(len) {
            for k in 0..len / 2 {
                let w = tw[k * stride];
                let u = buf[start + k];
                let v = buf[start + k + len / 2] * w;
                buf[start + k] = u + v;
                buf[start + k + len / 2] = u - v;
            }
        }
        len <<= 1;
    }
}

/// Bluestein chirp-z: DFT of arbitrary length via a padded convolution.
fn bluestein(buf: &mut [C64]) {
    let n = buf.len();
    let m = (2 * n - 1).next_power_of_two();

    // w[j] = exp(-i*pi*j^2/n), with j^2 reduced mod 2n to keep the angle small.
    let chirp: Vec<C64> = (0..n)
        .map(|j| {
            let e = ((j as u64 * j as u64) % (2 * n as u64)) as f64;
            let ang = -core::f64::consts::PI * e / n as f64;
            C64::new(math::cos(ang), math::sin(ang))
        })
        .collect();

    let mut a = vec![C64::new(0.0, 0.0); m];
    for j in 0..n {
        a[j] = buf[j] * chirp[j];
    }
    let mut b = vec![C64::new(0.0, 0.0); m];
    for j in 0..n {
        let c = chirp[j].conj();
        b[j] = c;
        if j != 0 {
            b[m - j] = c;
        }
    }

    fft_pow2(&mut a, false);
    fft_pow2(&mut b, false);
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= *y;
    }
    fft_pow2(&mut a, true);
    let scale = 1.0 / m as f64;

    for k in 0..n {
        buf[k] = a[k] * chirp[k] * scale;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force O(n^2) DFT oracle.
    fn dft_naive(x: &[C64]) -> Vec<C64> {
        let n = x.len();
        (0..n)
            .map(|k| {
                let mut acc = C64::new(0.0, 0.0);
                for (j, &v) in x.iter().enumerate() {
                    let ang = -TAU * (j * k % n) as f64 / n as f64;
                    acc += v * C64::new(ang.cos(), ang.sin());
                }
                acc
            })
            .collect()
    }

    fn test_signal(n: usize) -> Vec<C64> {
        (0..n)
            .map(|i| {
                let t = i as f64;
                C64::new((t * 0.7).sin() + 0.3 * t, (t * 1.3).cos() - 0.1 * t)
            })
            .collect()
    }

    #[test]
    fn matches_naive_dft_all_small_sizes() {
        for n in 1..=33 {
            let x = test_signal(n);
            let expect = dft_naive(&x);
            let mut got = x.clone();
            fft(&mut got);
            let scale = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt().max(1.0);
            for (g, e) in got.iter().zip(&expect) {
                assert!(
                    (g - e).norm_sqr().sqrt() <= 1e-10 * scale,
                    "n={n}: {g} vs {e}"
                );
            }
        }
    }

    #[test]
    fn round_trip() {
        for n in [1usize, 2, 3, 8, 12, 20, 24, 45, 64, 100] {
            let x = test_signal(n);
            let mut buf = x.clone();
            fft(&mut buf);
            ifft(&mut buf);
            for (a, b) in buf.iter().zip(&x) {
                assert!((a - b).norm_sqr().sqrt() < 1e-10, "n={n}");
            }
        }
    }

    #[test]
    fn fft2_matches_separable_naive() {
        let (w, h) = (6, 4);
        let mut img: Vec<C64> = (0..w * h)
            .map(|i| C64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
            .collect();
        // Naive 2-D DFT.
        let mut expect = vec![C64::new(0.0, 0.0); w * h];
        for kr in 0..h {
            for kc in 0..w {
                let mut acc = C64::new(0.0, 0.0);
                for r in 0..h {
                    for c in 0..w {
                        let ang = -TAU * ((r * kr) as f64 / h as f64 + (c * kc) as f64 / w as f64);
                        acc += img[r * w + c] * C64::new(ang.cos(), ang.sin());
                    }
                }
                expect[kr * w + kc] = acc;
            }
        }
        fft2(&mut img, w, h);
        for (g, e) in img.iter().zip(&expect) {
            assert!((g - e).norm_sqr().sqrt() < 1e-9);
        }
    }

    #[test]
    fn fft2_round_trip() {
        let (w, h) = (12, 10);
        let orig: Vec<C64> = (0..w * h)
            .map(|i| C64::new((i as f64).sin(), 0.0))
            .collect();
        let mut buf = orig.clone();
        fft2(&mut buf, w, h);
        ifft2(&mut buf, w, h);
        for (a, b) in buf.iter().zip(&orig) {
            assert!((a - b).norm_sqr().sqrt() < 1e-10);
        }
    }
}
