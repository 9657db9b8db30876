//! Exact rational calculus for Markov kernels on finite outcome spaces.
//!
//! Everything here is computed in arbitrary-precision rational arithmetic:
//! independence and equality of conditional expectations are decided by exact
//! comparisons, never by tolerances. The crate provides
//!
//! - the kernel calculus itself ([`calculus`]): diagonal products, image
//!   laws, expectations, mean measures, conditional expectation of one kernel
//!   given another, and independence tests;
//! - a second computation route through joint densities ([`density`]), used
//!   to cross-validate the kernel route;
//! - the 2x8 contingency-table application ([`diagnosis`]): induced kernels,
//!   diagnostic-test metrics, closed-form conditional expectations, and the
//!   classification of tables by (independence, equality);
//! - seeded random generation and category search ([`gen`]);
//! - a randomized self-check driver ([`crosscheck`]).

pub mod calculus;
pub mod crosscheck;
pub mod density;
pub mod diagnosis;
pub mod dist;
pub mod embedding;
pub mod error;
pub mod gen;
pub mod kernel;
pub mod partial;
pub mod rational;
pub mod space;
pub mod vector_measure;

mod vecops;

pub use calculus::{
    are_independent, conditional_expectation, diagonal_product, expectation,
    image_distribution, independence_equality_report, independence_via_functionals,
    mean_measure, Category, FunctionalCheckMode, FunctionalCheckOptions,
    IndependenceEqualityReport,
};
pub use dist::Distribution;
pub use embedding::Embedding;
pub use error::{Error, Result};
pub use kernel::MarkovKernel;
pub use partial::PartialVectorFunction;
pub use rational::Rat;
pub use space::FiniteSpace;
pub use vector_measure::VectorMeasure;
