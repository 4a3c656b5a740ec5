//! Deterministic derivative-free minimization and the phase manifolds it
//! searches over.

mod manifold;
mod nelder_mead;

pub use manifold::{constrained_phase_manifold, markovian_phase_relations, PhaseManifold, PhaseRelation};
pub use nelder_mead::{minimize, Bound, OptimizationResult, OptimizerConfig, StartTrace};
