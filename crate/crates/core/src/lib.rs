pub mod basis;
pub mod chart;
pub mod cubic;
pub mod engine;
pub mod error;
pub mod finite_diff;
pub mod immersion;
pub mod jet;
pub mod report;
pub mod sampling;
pub mod sasaki;
pub mod solver;
pub mod suite;
pub mod tolerances;

pub use error::{GeomError, Result};
pub use immersion::{
    ExponentialImmersion, FlatFamilyParams, ImmersionId, NonFlatFamilyParams, ProductSource,
};
pub use report::{CheckRecord, Summary, VerificationReport};
pub use sasaki::{AmbientPoint, AmbientVector, CurvatureParams, SasakiStructure};
pub use solver::{FlatSystemVariant, SolverConfig};
pub use suite::{ImmersionParams, Profile, SuiteOptions};
