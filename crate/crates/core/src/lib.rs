//! Numerical laboratory for the 2D exterior wave equation: weight
//! functions and weighted norms, free-space propagators by quadrature,
//! wave-kernel inequality certification, an exterior finite-difference
//! solver with decay diagnostics, and blow-up lifespan sweeps.

pub mod certificate;
pub mod error;
pub mod free_propagator;
pub mod geometry;
pub mod quadrature;
pub mod sources;
pub mod weights;

pub use certificate::BoundCertificate;
pub use error::{Error, Result};
pub use geometry::{Cutoff, Obstacle};
pub use sources::{CauchyData, SpacetimeSource, SpatialProfile};
pub use weights::{SpacetimePoint, WeightParams};
