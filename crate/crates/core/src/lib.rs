//! Refined BPS invariants of local del Pezzo surfaces in the cohomologically
//! stable range.
//!
//! The crate computes the stability bounds `N₁(β)`, `N₂(β)`, `N(β)` of an
//! ample curve class and the table `n^{i,j}_β = [H(q,t)]^{i,j}` for
//! `i + j <= N(β)` along three independent routes:
//!
//! - [`genfun`]: expansion of the product formula `H(q,t)`,
//! - [`extract`]: inversion of Betti numbers of relative Hilbert schemes,
//! - [`cherncount`]: counting monomials in tautological generators.
//!
//! All arithmetic is exact.

pub mod bounds;
pub mod cherncount;
pub mod cli;
pub mod extract;
pub mod genfun;
pub mod qseries;
pub mod surface;

pub use bounds::{CodimResult, Extended, StabilityBounds};
pub use genfun::{BpsTable, Route};
pub use qseries::{BiSeries, Factor, Monomial, ProductForm};
pub use surface::{CurveClass, Surface, SurfaceKind};

use thiserror::Error;

/// Any domain error; `Display` starts with the name of the failing condition.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Series(#[from] qseries::SeriesError),
    #[error(transparent)]
    Surface(#[from] surface::SurfaceError),
    #[error(transparent)]
    Bounds(#[from] bounds::BoundsError),
    #[error(transparent)]
    Genfun(#[from] genfun::GenfunError),
    #[error(transparent)]
    Extract(#[from] extract::ExtractError),
    #[error(transparent)]
    Chern(#[from] cherncount::ChernError),
}
