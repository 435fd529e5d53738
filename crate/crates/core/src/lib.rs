//! Perturbation-series construction of approximating sequences for
//! Painlevé II boundary value problems on finite real intervals.
//!
//! The pipeline: solve the supplementary (electrodiffusion) problem
//! numerically ([`reference`]), expand it order by order in Airy functions
//! ([`series`]), and map every partial sum to a Painlevé II approximant on
//! its own interval ([`extraordinary`]). [`direct`] holds the ordinary
//! perturbation series of Painlevé II itself for comparison.

mod banded;
pub mod direct;
pub mod error;
pub mod experiment;
pub mod extraordinary;
pub mod mesh;
pub mod params;
pub mod reference;
pub mod series;
pub mod specfun;

pub use direct::{direct_partial_sums, DirectReport, DirectSeriesState, Verdict};
pub use error::{Error, Result};
pub use extraordinary::{convert, convert_profile, extraordinary_sequence, pii_residual, ExtraordinaryApproximant, PiiInstance, PiiProfile};
pub use mesh::{cumulative_integral, max_abs_combined, Grid, GridFunction};
pub use params::Parameters;
pub use reference::{classify_type, solve_reference, ReferenceSolution, SolutionType};
pub use series::{SeriesState, SeriesTerm};
pub use specfun::{airy_eval, scaled_basis, AiryQuad, ScaledAiryBasis};
