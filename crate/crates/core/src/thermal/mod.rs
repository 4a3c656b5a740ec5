//! Hamiltonians, Gibbs states, energy-preserving unitaries, thermal
//! operations, Markovianity checks and system perturbations.

mod gibbs;
mod hamiltonian;
mod mto;
mod operation;
mod perturbation;
pub mod phase;
mod unitary;

pub use gibbs::{beta_from_temperature, gibbs_state, GibbsState};
pub use hamiltonian::{product_eigenbasis, total_hamiltonian, Hamiltonian, DEGENERACY_TOL};
pub use mto::{mto_check, mto_check_operator, AmplitudeResidual, MtoConstraintReport, PhaseResidual, Residual};
pub use operation::{Evolution, ThermalOperation};
pub use perturbation::{
    coefficients_of, first_order_coefficients, first_order_correction, perturbed_eigenkets, perturbed_hamiltonian,
    perturbed_state_exact, perturbed_state_first_order, state_from_coefficients, PerturbationSpec, MIN_OVERLAP,
};
pub use unitary::{build_block_unitary, commutator_norm, BlockParams, EnergyBlock, EnergyBlockUnitary, UNITARY_TOL};
