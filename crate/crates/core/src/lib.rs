//! Exact symbolic-numeric kernel for regularized multiple Eisenstein series.
//!
//! The crate computes the Goncharov coproduct on the quotient Hopf algebra
//! of iterated integral symbols over `{0,1}`, shuffle-regularized multiple
//! zeta values, generating q-series of multiple divisor sums, and the
//! regularized multiple Eisenstein series built from them, together with
//! the double shuffle relations they satisfy.
//!
//! All symbolic work is exact over the rationals. Numeric evaluation is
//! used only for multiple zeta values and lattice sums.

pub mod error;
pub mod words;
pub mod hopf;
pub mod mzv;
pub mod qseries;
pub mod eisenstein;
pub mod linalg;
pub mod relations;
pub mod output;
pub mod cli;

pub use error::{Error, Result};
pub use words::{BinaryWord, Composition, LinComb, Rational};
