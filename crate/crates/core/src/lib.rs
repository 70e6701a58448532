//! Bilateral q-ultraspherical functions and the q-series machinery behind
//! them: q-shifted factorials, unilateral and bilateral basic hypergeometric
//! series, the Askey–Wilson divided-difference operator, and quadrature
//! against the q-ultraspherical weight.

pub mod accum;
pub mod awoperator;
pub mod error;
pub mod hyperseries;
pub mod qcore;
pub mod quadrature;
pub mod ultraspherical;

pub use error::{Error, Result};
pub use hyperseries::{
    closed_form, eval_phi, eval_psi, transform_residual, ClosedForm, SeriesKind, SeriesSpec, Transform,
};
pub use qcore::{
    poch, poch_multi, poch_pm, poch_ratio_inf, ComplexScalar, Order, QBase, SpectralPoint, TruncationPolicy,
};
