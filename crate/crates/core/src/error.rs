//! Error type shared by all modules of the core crate.

use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two images (or an image and an operator) disagree on dimensions.
    DimensionMismatch {
        expected: (usize, usize),
        got: (usize, usize),
    },
    /// A coefficient vector does not match the dictionary's length.
    LengthMismatch { expected: usize, got: usize },
    /// Image buffer length does not equal width * height.
    BadImageBuffer {
        width: usize,
        height: usize,
        len: usize,
    },
    /// Gaussian PSF requested with a non-positive standard deviation.
    NonPositiveSigma(f64),
    /// A count image contains a negative (or non-integer where required) entry.
    NegativeCount { index: usize, value: f64 },
    /// An intensity image contains a negative entry where positivity is required.
    NegativeIntensity { index: usize, value: f64 },
    /// The blurred mean passed to the fidelity is negative beyond the clamping
    /// tolerance; this indicates a solver bug, not a data problem.
    NegativeMean { index: usize, value: f64 },
    /// ‖z‖_inf is zero, so the step-size bound is undefined.
    BlankObservation,
    /// Requested step size is not inside (0, bound) required for convergence.
    StepSizeTooLarge { mu: f64, bound: f64 },
    /// Image dimensions are not divisible by 2^levels.
    BadWaveletSize {
        width: usize,
        height: usize,
        levels: usize,
    },
    /// Soft-thresholding called with a negative threshold.
    NegativeThreshold(f64),
    /// A scalar parameter is outside its documented range.
    InvalidParameter(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, got } => write!(
                f,
                "dimension mismatch: expected {}x{}, got {}x{}",
                expected.0, expected.1, got.0, got.1
            ),
            Error::LengthMismatch { expected, got } => {
                write!(f, "coefficient length mismatch: expected {expected}, got {got}")
            }
            Error::BadImageBuffer { width, height, len } => write!(
                f,
                "image buffer of length {len} does not match {width}x{height}"
            ),
            Error::NonPositiveSigma(s) => write!(f, "PSF sigma must be positive, got {s}"),
            Error::NegativeCount { index, value } => {
                write!(f, "count image has invalid entry {value} at index {index}")
            }
            Error::NegativeIntensity { index, value } => {
                write!(f, "intensity image has negative entry {value} at index {index}")
            }
            Error::NegativeMean { index, value } => write!(
                f,
                "blurred mean is negative beyond tolerance ({value} at index {index}); \
                 this indicates a solver bug"
            ),
            Error::BlankObservation => write!(f, "observation is identically zero"),
            Error::StepSizeTooLarge { mu, bound } => {
                write!(f, "step size {mu} is not in (0, {bound})")
            }
            Error::BadWaveletSize {
                width,
                height,
                levels,
            } => write!(
                f,
                "image dimensions {width}x{height} are not divisible by 2^{levels}"
            ),
            Error::NegativeThreshold(d) => write!(f, "threshold must be nonnegative, got {d}"),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
        }
    }
}

impl core::error::Error for Error {}
