//! Natural lifts of Kähler structures to the cotangent bundle of a space
//! form: scalar profiles, the lifted almost complex structure and metric,
//! their closed-form Levi-Civita connection and curvature, and a
//! finite-difference oracle that checks all of it independently.

pub mod base;
pub mod connection;
pub mod error;
pub mod expr;
pub mod fd;
pub mod jet;
pub mod lift;
pub mod oracle;
pub mod phase;
pub mod profiles;
pub mod tensor;

/// Version of this crate, reported by the scenario runner.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use base::{BaseGeometry, SpaceForm};
pub use connection::{
    connection_block_derivatives, connection_blocks, curvature_blocks, curvature_difference,
    model_curvature_blocks, BlockName, ConnectionBlocks, ConnectionDerivatives, CurvatureBlocks,
    ModelCurvatureBlocks,
};
pub use error::{Error, Result};
pub use expr::ScalarExpr;
pub use jet::Jet;
pub use lift::{LambdaSpec, LiftPoint, MuSpec, NaturalLift, Perturbation};
pub use phase::{closedness_residual, nijenhuis_at, PhasePoint, StructureBlocks};
pub use profiles::{CoefficientBundle, MetricCoefficients};
