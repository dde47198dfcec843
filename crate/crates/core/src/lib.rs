//! WENO-JS, CWENO-LPR and global-average-weight CWENO reconstructions of
//! arbitrary odd order, with a conservative finite-difference Euler solver
//! and a harness for convergence and benchmark studies.

// Negated comparisons are how NaN states are caught; indexed loops mirror
// the component formulas.
#![allow(
    clippy::neg_cmp_op_on_partial_ord,
    clippy::needless_range_loop,
    clippy::type_complexity,
    clippy::wrong_self_convention
)]

pub mod error;
pub mod euler;
pub mod exact;
pub mod exec;
pub mod export;
pub mod harness;
pub mod mpfr;
pub mod reconstruct;
pub mod scalar;
pub mod solver;
pub mod stencil;

pub use error::{Error, Result};
pub use exact::Rational;
pub use exec::Execution;
pub use mpfr::{MpFloat, Precision};
pub use scalar::Scalar;
pub use stencil::{build_tables, ideal_weights, lpr_extra, LprTables, StencilTables};
