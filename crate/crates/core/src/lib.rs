//! Tomita-Takesaki modular data for finite-dimensional operator algebras, and
//! the modular conjugation `J` used as a concurrence measure.
//!
//! The crate is organized bottom-up:
//!
//! * [`linalg`] dense complex kernel (tensor products, Hermitian spectra,
//!   antilinear operators and their polar decomposition)
//! * [`fock`] truncated bosonic Fock spaces, smeared ladder operators, Weyl
//!   operators
//! * [`modular`] algebra generation, commutants, cyclic/separating tests and
//!   the `(S, Δ, J)` engine
//! * [`entanglement`] pure, Wootters and modular concurrence, Bell-CHSH tools
//! * [`susy`] the two-mode supersymmetric Landau-level model and its `J`
//! * [`udw`] an entangled pair of gapless Unruh-DeWitt detectors dephased by a
//!   scalar field
//!
//! All matrices are [`ComplexMatrix`] (`nalgebra::DMatrix<Complex64>`); tensor
//! products put the left factor on the most significant index.

// `!(x <= tol)` style comparisons deliberately reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod entanglement;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod modular;
pub mod random;
pub mod susy;
pub mod tolerance;
pub mod udw;

pub use error::{Error, Result};
pub use linalg::{AntilinearOperator, ComplexMatrix, ComplexVector, Spectrum};
pub use num_complex::Complex64;
pub use tolerance::Tolerances;
