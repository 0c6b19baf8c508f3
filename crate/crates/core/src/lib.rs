//! Numerical toolkit for conformally constrained variational problems on
//! surfaces in R³ and S³.
//!
//! Surfaces are conformal immersions sampled on structured charts
//! ([`surface::ParamSurface`]). On top of their pointwise geometry the crate
//! evaluates Area, Volume and Willmore energy with their gradient 2-forms,
//! implements the operators `δ(u) = 2uÅJ`, its adjoint `δ*`, and the
//! `∂̄`-operators on vector fields and quadratic differentials, and certifies
//! constrained criticality by solving `grad(F) = δ*(q)` for a holomorphic
//! quadratic differential `q` in the least-squares sense.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod builders;
pub mod conformal;
pub mod curves;
pub mod diff;
pub mod error;
pub mod export;
pub mod field;
pub mod functionals;
pub mod grid;
pub mod multiplier;
pub mod surface;
pub mod variation;

pub use error::{Error, Result};
pub use field::{EndoField, ScalarField, TwoForm, VectorField};
pub use grid::{Axis, ChartKind, Grid2D};
pub use surface::{fundamental_data, DerivStrategy, FundamentalData, Orientation, ParamSurface, SpaceForm};
