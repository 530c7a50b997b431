//! Synthesis/analysis operators Φ, Φᵀ for orthobases and tight frames.
//!
//! A [`Dictionary`] couples an image grid with a transform pair and its frame
//! constant `A` (so that ΦΦᵀ = A·I). Supported kinds: the identity (used by
//! tests and degenerate configurations), a decimated orthogonal wavelet basis
//! (A = 1), an undecimated wavelet tight frame (A = 4), and concatenations,
//! whose analysis stacks, synthesis sums, and constants add.

mod dwt;
mod filters;
mod udwt;

pub use filters::WaveletFamily;

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::image::Image;
use crate::rng::SplitMix64;

/// Structural description of a coefficient vector: which subbands live where.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoeffLayout {
    Identity {
        width: usize,
        height: usize,
    },
    /// Packed quadrant layout of the decimated transform (length = n).
    Dwt {
        width: usize,
        height: usize,
        levels: usize,
    },
    /// Stacked full-size subbands LH₁,HL₁,HH₁,…,HH_J,LL_J (length = (3J+1)·n).
    Udwt {
        width: usize,
        height: usize,
        levels: usize,
    },
    Concat(Box<CoeffLayout>, Box<CoeffLayout>),
}

impl CoeffLayout {
    pub fn len(&self) -> usize {
        match self {
            CoeffLayout::Identity { width, height } => width * height,
            CoeffLayout::Dwt { width, height, .. } => width * height,
            CoeffLayout::Udwt {
                width,
                height,
                levels,
            } => udwt::coeff_len(*width, *height, *levels),
            CoeffLayout::Concat(a, b) => a.len() + b.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Length-L vector of dictionary coefficients with its subband layout.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffVector {
    data: Vec<f64>,
    layout: CoeffLayout,
}

impl CoeffVector {
    pub fn zeros(layout: CoeffLayout) -> CoeffVector {
        let len = layout.len();
        CoeffVector {
            data: vec![0.0; len],
            layout,
        }
    }

    pub fn from_vec(layout: CoeffLayout, data: Vec<f64>) -> Result<CoeffVector> {
        if data.len() != layout.len() {
            return Err(Error::LengthMismatch {
                expected: layout.len(),
                got: data.len(),
            });
        }
        Ok(CoeffVector { data, layout })
    }

    pub fn layout(&self) -> &CoeffLayout {
        &self.layout
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn l1_norm(&self) -> f64 {
        self.data.iter().map(|v| v.abs()).sum()
    }

    pub fn norm_l2(&self) -> f64 {
        crate::math::sqrt(self.data.iter().map(|v| v * v).sum())
    }

    pub fn dot(&self, other: &CoeffVector) -> Result<f64> {
        self.check_layout(other)?;
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum())
    }

    /// `self + s · other`.
    pub fn add_scaled(&self, s: f64, other: &CoeffVector) -> Result<CoeffVector> {
        self.check_layout(other)?;
        Ok(CoeffVector {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + s * b)
                .collect(),
            layout: self.layout.clone(),
        })
    }

    pub fn sub(&self, other: &CoeffVector) -> Result<CoeffVector> {
        self.add_scaled(-1.0, other)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> CoeffVector {
        CoeffVector {
            data: self.data.iter().map(|&v| f(v)).collect(),
            layout: self.layout.clone(),
        }
    }

    fn check_layout(&self, other: &CoeffVector) -> Result<()> {
        if self.layout == other.layout {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                expected: self.len(),
                got: other.len(),
            })
        }
    }
}

#[derive(Debug, Clone)]
enum DictKind {
    Identity,
    Dwt {
        family: WaveletFamily,
        levels: usize,
    },
    Udwt {
        family: WaveletFamily,
        levels: usize,
    },
    Concat(Box<Dictionary>, Box<Dictionary>),
}

/// Synthesis operator Φ for an image grid, together with Φᵀ and the frame
/// constant A.
#[derive(Debug, Clone)]
pub struct Dictionary {
    kind: DictKind,
    width: usize,
    height: usize,
    frame_constant: f64,
    coeff_len: usize,
}

impl Dictionary {
    /// Φ = I; coefficients are the pixels themselves.
    pub fn identity(width: usize, height: usize) -> Dictionary {
        Dictionary {
            kind: DictKind::Identity,
            width,
            height,
            frame_constant: 1.0,
            coeff_len: width * height,
        }
    }

    /// Orthogonal wavelet basis (A = 1, L = n). Dimensions must be divisible
    /// by 2^levels; `levels = 0` degenerates to the identity transform.
    pub fn orthogonal_wavelet(
        width: usize,
        height: usize,
        family: WaveletFamily,
        levels: usize,
    ) -> Result<Dictionary> {
        check_divisible(width, height, levels)?;
        let d = Dictionary {
            kind: DictKind::Dwt { family, levels },
            width,
            height,
            frame_constant: 1.0,
            coeff_len: width * height,
        };
        debug_assert!(d.tightness_deviation(2) < 1e-8);
        Ok(d)
    }

    /// Undecimated wavelet tight frame (A = 4, L = (3·levels+1)·n).
    pub fn undecimated_wavelet(
        width: usize,
        height: usize,
        family: WaveletFamily,
        levels: usize,
    ) -> Result<Dictionary> {
        if levels == 0 || levels > 20 {
            return Err(Error::InvalidParameter("UDWT levels must be in 1..=20"));
        }
        let d = Dictionary {
            kind: DictKind::Udwt { family, levels },
            width,
            height,
            frame_constant: udwt::FRAME_CONSTANT,
            coeff_len: udwt::coeff_len(width, height, levels),
        };
        debug_assert!(d.tightness_deviation(2) < 1e-8);
        Ok(d)
    }

    /// Concatenation: analysis stacks, synthesis sums, A = A₁ + A₂.
    pub fn concatenate(d1: Dictionary, d2: Dictionary) -> Result<Dictionary> {
        if d1.width != d2.width || d1.height != d2.height {
            return Err(Error::DimensionMismatch {
                expected: (d1.width, d1.height),
                got: (d2.width, d2.height),
            });
        }
        let d = Dictionary {
            width: d1.width,
            height: d1.height,
            frame_constant: d1.frame_constant + d2.frame_constant,
            coeff_len: d1.coeff_len + d2.coeff_len,
            kind: DictKind::Concat(Box::new(d1), Box::new(d2)),
        };
        debug_assert!(d.tightness_deviation(2) < 1e-8);
        Ok(d)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Pixel count n.
    pub fn pixel_count(&self) -> usize {
        self.width * self.height
    }

    /// Coefficient count L ≥ n.
    pub fn coeff_len(&self) -> usize {
        self.coeff_len
    }

    /// Frame constant A with ΦΦᵀ = A·I.
    pub fn frame_constant(&self) -> f64 {
        self.frame_constant
    }

    pub fn layout(&self) -> CoeffLayout {
        match &self.kind {
            DictKind::Identity => CoeffLayout::Identity {
                width: self.width,
                height: self.height,
            },
            DictKind::Dwt { levels, .. } => CoeffLayout::Dwt {
                width: self.width,
                height: self.height,
                levels: *levels,
            },
            DictKind::Udwt { levels, .. } => CoeffLayout::Udwt {
                width: self.width,
                height: self.height,
                levels: *levels,
            },
            DictKind::Concat(a, b) => {
                CoeffLayout::Concat(Box::new(a.layout()), Box::new(b.layout()))
            }
        }
    }

    /// Φᵀ x: forward (analysis) transform.
    pub fn analyze(&self, x: &Image) -> Result<CoeffVector> {
        if x.width() != self.width || x.height() != self.height {
            return Err(Error::DimensionMismatch {
                expected: (self.width, self.height),
                got: (x.width(), x.height()),
            });
        }
        let data = match &self.kind {
            DictKind::Identity => x.data().to_vec(),
            DictKind::Dwt { family, levels } => {
                dwt::forward(x.data(), self.width, self.height, *family, *levels)
            }
            DictKind::Udwt { family, levels } => {
                udwt::forward(x.data(), self.width, self.height, *family, *levels)
            }
            DictKind::Concat(a, b) => {
                let mut data = a.analyze(x)?.into_data();
                data.extend_from_slice(&b.analyze(x)?.into_data());
                data
            }
        };
        CoeffVector::from_vec(self.layout(), data)
    }

    /// Φ α: synthesis transform (exact adjoint of [`Dictionary::analyze`]).
    pub fn synthesize(&self, alpha: &CoeffVector) -> Result<Image> {
        if *alpha.layout() != self.layout() {
            return Err(Error::LengthMismatch {
                expected: self.coeff_len,
                got: alpha.len(),
            });
        }
        match &self.kind {
            DictKind::Identity => Image::from_vec(self.width, self.height, alpha.data().to_vec()),
            DictKind::Dwt { family, levels } => {
                let data = dwt::inverse(alpha.data(), self.width, self.height, *family, *levels);
                Image::from_vec(self.width, self.height, data)
            }
            DictKind::Udwt { family, levels } => {
                let data = udwt::adjoint(alpha.data(), self.width, self.height, *family, *levels);
                Image::from_vec(self.width, self.height, data)
            }
            DictKind::Concat(a, b) => {
                let (da, db) = alpha.data().split_at(a.coeff_len);
                let ia = a.synthesize(&CoeffVector::from_vec(a.layout(), da.to_vec())?)?;
                let ib = b.synthesize(&CoeffVector::from_vec(b.layout(), db.to_vec())?)?;
                ia.add(&ib)
            }
        }
    }

    /// Maximum relative deviation of ‖Φᵀx‖² from A‖x‖² over deterministic
    /// pseudo-random probes. Diagnostic used by constructor debug checks.
    pub fn tightness_deviation(&self, probes: usize) -> f64 {
        let mut rng = SplitMix64::new(0x7161_7400_0000_0001);
        let mut worst = 0.0f64;
        for _ in 0..probes.max(1) {
            let x = Image::from_fn(self.width, self.height, |_, _| rng.next_f64() - 0.5);
            let c = self.analyze(&x).expect("probe dims match");
            let ex = x.data().iter().map(|v| v * v).sum::<f64>();
            let ec = c.data().iter().map(|v| v * v).sum::<f64>();
            let dev = (ec - self.frame_constant * ex).abs() / (self.frame_constant * ex).max(1e-300);
            worst = worst.max(dev);
        }
        worst
    }
}

fn check_divisible(width: usize, height: usize, levels: usize) -> Result<()> {
    let div = 1usize << levels;
    if width == 0 || height == 0 || width % div != 0 || height % div != 0 {
        return Err(Error::BadWaveletSize {
            width,
            height,
            levels,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_round_trip() {
        let d = Dictionary::identity(4, 3);
        let x = Image::from_fn(4, 3, |r, c| (r * 4 + c) as f64);
        let a = d.analyze(&x).unwrap();
        assert_eq!(a.data(), x.data());
        let back = d.synthesize(&a).unwrap();
        assert_eq!(back.data(), x.data());
    }

    #[test]
    fn zero_image_zero_coeffs_zero_image() {
        let d = Dictionary::orthogonal_wavelet(8, 8, WaveletFamily::Db2, 2).unwrap();
        let a = d.analyze(&Image::zeros(8, 8)).unwrap();
        assert!(a.data().iter().all(|&v| v == 0.0));
        let x = d.synthesize(&a).unwrap();
        assert!(x.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn dwt_size_validation() {
        assert!(Dictionary::orthogonal_wavelet(12, 8, WaveletFamily::Haar, 3).is_err());
        assert!(Dictionary::orthogonal_wavelet(12, 8, WaveletFamily::Haar, 2).is_ok());
    }

    #[test]
    fn concat_constants_add() {
        let d1 = Dictionary::orthogonal_wavelet(8, 8, WaveletFamily::Haar, 2).unwrap();
        let d2 = Dictionary::orthogonal_wavelet(8, 8, WaveletFamily::Db2, 2).unwrap();
        let c = Dictionary::concatenate(d1, d2).unwrap();
        assert_eq!(c.frame_constant(), 2.0);
        assert_eq!(c.coeff_len(), 128);
    }

    #[test]
    fn concat_synthesis_is_sum() {
        let d1 = Dictionary::orthogonal_wavelet(8, 8, WaveletFamily::Haar, 1).unwrap();
        let d2 = Dictionary::undecimated_wavelet(8, 8, WaveletFamily::Db2, 2).unwrap();
        let cat = Dictionary::concatenate(d1.clone(), d2.clone()).unwrap();

        let mut rng = SplitMix64::new(99);
        let a1 = CoeffVector::from_vec(
            d1.layout(),
            (0..d1.coeff_len()).map(|_| rng.next_f64() - 0.5).collect(),
        )
        .unwrap();
        let a2 = CoeffVector::from_vec(
            d2.layout(),
            (0..d2.coeff_len()).map(|_| rng.next_f64() - 0.5).collect(),
        )
        .unwrap();
        let mut stacked = a1.data().to_vec();
        stacked.extend_from_slice(a2.data());
        let a = CoeffVector::from_vec(cat.layout(), stacked).unwrap();

        let sum = d1
            .synthesize(&a1)
            .unwrap()
            .add(&d2.synthesize(&a2).unwrap())
            .unwrap();
        let direct = cat.synthesize(&a).unwrap();
        for (x, y) in direct.data().iter().zip(sum.data()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn mismatched_concat_rejected() {
        let d1 = Dictionary::identity(8, 8);
        let d2 = Dictionary::identity(4, 4);
        assert!(Dictionary::concatenate(d1, d2).is_err());
    }

    #[test]
    fn layout_guard_on_synthesize() {
        let d = Dictionary::orthogonal_wavelet(8, 8, WaveletFamily::Haar, 1).unwrap();
        let other = Dictionary::identity(8, 8);
        let a = CoeffVector::zeros(other.layout());
        assert!(d.synthesize(&a).is_err());
    }

    #[test]
    fn tightness_probe_is_small_for_all_kinds() {
        let dwt = Dictionary::orthogonal_wavelet(16, 16, WaveletFamily::Db3, 2).unwrap();
        let udwt = Dictionary::undecimated_wavelet(16, 16, WaveletFamily::Db3, 2).unwrap();
        let cat = Dictionary::concatenate(dwt.clone(), udwt.clone()).unwrap();
        assert!(dwt.tightness_deviation(3) < 1e-10);
        assert!(udwt.tightness_deviation(3) < 1e-10);
        assert!(cat.tightness_deviation(3) < 1e-10);
    }
}
