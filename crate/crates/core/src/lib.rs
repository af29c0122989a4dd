//! Three-state Grover walk on the integer line with a single phase defect.
//!
//! The walker carries a three-valued chirality (left, stay, right). Every site
//! applies the Grover coin; the origin additionally multiplies by a phase
//! ω = e^{iθ}. This crate provides
//!
//! - the truncated-lattice evolution operator and the measure map φ
//!   ([`lattice`]),
//! - the generating-function spectral machinery: the 3×3 system matrix, its
//!   determinant factorization, the six amplitude-ratio formulas with their
//!   equality conditions, and the eigenvalue case analysis ([`spectral`]),
//! - closed-form eigenvector and stationary-measure families together with
//!   the homogeneous-walk limit measure ([`closed_form`]),
//! - verification harnesses: eigen-residuals, stationarity under iterated
//!   evolution, truncated generating-function identities, time-averaged
//!   convergence, and the stationary-vs-limit scaling relation ([`verify`]),
//! - the end-to-end acceptance suite ([`acceptance`]).
//!
//! All numerics are generic over the floating-point scalar through [`Real`];
//! the `*64`/`*32` aliases below select concrete precisions.

pub mod acceptance;
pub mod closed_form;
pub mod error;
pub mod lattice;
pub mod poly;
pub mod scalar;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Real;

use num_complex::Complex;

/// Double-precision complex scalar.
pub type C64 = Complex<f64>;
/// Single-precision complex scalar.
pub type C32 = Complex<f32>;

/// Double-precision state window.
pub type WaveWindow64 = lattice::WaveWindow<f64>;
/// Single-precision state window.
pub type WaveWindow32 = lattice::WaveWindow<f32>;
/// Double-precision measure.
pub type Measure64 = lattice::Measure<f64>;
/// Double-precision coin configuration.
pub type CoinConfig64 = lattice::CoinConfig<f64>;
/// Double-precision eigen-parameter bundle.
pub type EigenParams64 = spectral::EigenParams<f64>;
