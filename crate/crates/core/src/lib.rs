//! Numerical laboratory for quantified Tauberian decay rates.
//!
//! The crate is organised around the objects that appear when one asks how
//! fast a bounded function (or a `C0`-semigroup orbit) decays given the growth
//! of its Laplace transform (or resolvent) near the imaginary axis:
//!
//! * [`growth`]: growth functions `M`, the logarithmic rate `M_log`, the
//!   two-function rate `M_K`, right inverses and structural predicates.
//! * [`regions`]: the continuation regions `Ω_M`, `Ω'_M`, the strip `S_M`
//!   and the semigroup region, with membership tests and sampling grids.
//! * [`xforms`]: Laplace and Fourier quadrature, weighted suprema and
//!   mean-value analyticity checks.
//! * [`specialfn`]: the strip-decaying entire function `H` and its kernel `h`.
//! * [`witness`]: the modulated translates `g_{R,t}`, their norms, the bound
//!   chain and the optimised sharpness certificates.
//! * [`truncate`]: half-line truncations and their transform bounds.
//! * [`semigroup`]: multiplication and shift semigroup decay simulators.
//! * [`cli`] and [`verify`]: the command-line front end and its self-check suite.

// `!(x > 0.0)` is used deliberately so that NaN is rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod growth;
pub mod regions;
pub mod search;
pub mod semigroup;
pub mod specialfn;
pub mod truncate;
pub mod verify;
pub mod witness;
pub mod xforms;

pub use error::{Error, Result};
pub use num_complex::Complex64;
