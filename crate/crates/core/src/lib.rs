//! Block-design and RPBD mechanisms for local differential privacy.
//!
//! The crate builds combinatorial block designs and regular pairwise-balanced
//! designs, compiles them into epsilon-LDP mechanisms with canonical unbiased
//! estimators, evaluates exact privacy-utility-communication trade-offs,
//! searches for (near-)optimal schemes, and validates every closed form by
//! simulation.

pub mod designs;
pub mod ff;
pub mod mech;
pub mod risk;
pub mod search;
pub mod sim;

pub use designs::{
    Classification, Construction, DesignError, DesignParams, FamilyKind, IncidenceStructure,
    RpbdParams, SymmetricFeasibility, Verification, VerificationProfile,
};
pub use ff::{FfError, FieldElement, FiniteField};
pub use mech::{CountVector, EstimatorCoeffs, LdpReport, MechError, Mechanism, Output};
pub use risk::{LossSpec, RiskError, RiskPoint, RiskReport, SchemeParams};
pub use search::{FamilySel, Recipe, SchemeCandidate, SearchError, SearchOptions, SweepRow};
pub use sim::{PSpec, SimConfig, SimError, SimResult};
