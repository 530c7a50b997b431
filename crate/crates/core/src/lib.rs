//! Restoration of images blurred by a known point-spread function and
//! degraded by Poisson noise.
//!
//! The observation model is `y_i ~ Poisson((h ⊛ x)_i)` with `⊛` circular
//! convolution. The estimator minimises, over dictionary coefficients `α`,
//!
//! ```text
//!   J(α) = F(HΦα) + ι_{≥0}(Φα) + λ‖α‖₁
//! ```
//!
//! where `F` is the Anscombe-stabilised least-squares fidelity
//! `Σ ½(z_i − 2√(η_i + 3/8))²`, `z = 2√(y + 3/8)`, and `Φ` is an orthogonal
//! wavelet basis, an undecimated wavelet tight frame, or a concatenation of
//! both. The outer loop is forward-backward splitting; the proximity operator
//! of the non-smooth part is computed by an inner Douglas-Rachford iteration.
//!
//! The crate is `no_std`-compatible (`alloc` required); disable the default
//! `std` feature and enable `libm` for embedded use. File formats, the CLI,
//! and comparison harnesses live in the companion `pdeconv` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("pdeconv-core requires either the `std` or the `libm` feature");

pub mod conv;
pub mod dict;
pub mod error;
pub mod fft;
pub mod image;
mod math;
pub mod prox;
pub mod rng;
pub mod simulate;
pub mod solver;
pub mod vst;

pub use conv::ConvOperator;
pub use dict::{CoeffVector, Dictionary, WaveletFamily};
pub use error::{Error, Result};
pub use image::{Image, Metrics};
pub use prox::ProxConfig;
pub use rng::Seed;
pub use simulate::{Phantom, PhantomKind};
pub use solver::{Method, Objective, SolveResult, SolverConfig};
pub use vst::FidelityContext;
