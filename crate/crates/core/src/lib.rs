//! Two continuous sets of mutually unbiased bases for the planar rotor, and
//! the operator machinery behind them, on truncated Hilbert spaces.
//!
//! The rotor pairs a 2 pi periodic angle with integer angular momentum; its
//! conjugate bases are unbiased but admit no third unbiased companion.
//! Continuous unbiased families exist nevertheless, and this crate builds
//! the two known constructions side by side:
//!
//! - [`mub_stereo`]: transplant the rotated-line bases onto the circle
//!   through the stereographic substitution q = tan(phi/2). Simple wave
//!   functions, but no Heisenberg pair underneath; [`stereo_ops`] makes the
//!   obstruction quantitative (continuous spectrum, sinc overlaps,
//!   overcompleteness, a shift flow without a uniform generator limit).
//! - [`mub_fock`]: pair the angular-momentum basis with the oscillator
//!   number basis ([`fock`]), build a genuine Heisenberg pair (Q, P) from
//!   the rotor shift and angular momentum, and rotate it into the family
//!   Y_theta = Q cos theta + P sin theta.
//!
//! Everything numeric is generic over the floating-point scalar through
//! [`scalar::Scalar`]; the aliases below fix the concrete double-precision
//! types the command-line tools and the verification suites use.
//! [`verify`] runs every machine-checkable identity and reports one row per
//! check.

pub mod error;
pub mod fft;
pub mod fock;
pub mod grid;
pub mod hilbert;
pub mod linalg;
pub mod mub_fock;
pub mod mub_stereo;
pub mod operator;
pub mod quadrature;
pub mod report;
pub mod scalar;
pub mod special;
pub mod stereo_ops;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Concrete scalar used by the CLI and the acceptance suite.
pub type Real = f64;
/// Concrete complex number over [`Real`].
pub type C64 = num_complex::Complex<f64>;

pub type RotorState = hilbert::RotorState<Real>;
pub type PhiWaveFunction = hilbert::PhiWaveFunction<Real>;
pub type TruncatedOperator = operator::TruncatedOperator<Real>;
pub type StereoMubLabel = mub_stereo::StereoMubLabel<Real>;
pub type FockMubLabel = mub_fock::FockMubLabel<Real>;
pub type AbelParams = mub_fock::AbelParams<Real>;
pub type LineGrid = grid::LineGrid<Real>;
