//! Channels of the form `ρ ↦ Tr_B[U(ρ⊗τ_B)U†]`.

use crate::error::{Error, Result};
use crate::linalg::{kron, partial_trace_op, Subsystem};
use crate::thermal::{EnergyBlockUnitary, GibbsState, Hamiltonian};
use crate::{ComplexMatrix, DensityMatrix};

/// Global unitary acting on system ⊗ thermal bath.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalOperation {
    unitary: EnergyBlockUnitary,
    bath: GibbsState,
    h_sys: Hamiltonian,
}

/// Outputs of one application.
#[derive(Debug, Clone)]
pub struct Evolution {
    pub system: DensityMatrix,
    pub bath: DensityMatrix,
    pub joint: DensityMatrix,
}

impl ThermalOperation {
    pub fn new(unitary: EnergyBlockUnitary, bath: GibbsState, h_sys: Hamiltonian) -> Result<Self> {
        let d = h_sys.dim() * bath.source().dim();
        if unitary.dim() != d {
            return Err(Error::DimensionMismatch(format!(
                "{}-dimensional unitary for a {}⊗{} system",
                unitary.dim(),
                h_sys.dim(),
                bath.source().dim()
            )));
        }
        Ok(Self { unitary, bath, h_sys })
    }

    pub fn unitary(&self) -> &EnergyBlockUnitary {
        &self.unitary
    }

    pub fn bath(&self) -> &GibbsState {
        &self.bath
    }

    pub fn h_sys(&self) -> &Hamiltonian {
        &self.h_sys
    }

    pub fn d_sys(&self) -> usize {
        self.h_sys.dim()
    }

    pub fn d_bath(&self) -> usize {
        self.bath.source().dim()
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.d_sys(), self.d_bath())
    }

    /// Same bath and system, different unitary.
    pub fn with_unitary(&self, unitary: EnergyBlockUnitary) -> Result<Self> {
        Self::new(unitary, self.bath.clone(), self.h_sys.clone())
    }

    /// `U(X⊗τ)U†` for any system operator `X`.
    pub fn joint_operator(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if !x.is_square() || x.rows() != self.d_sys() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} operator for a {}-level system",
                x.rows(),
                x.cols(),
                self.d_sys()
            )));
        }
        let u = self.unitary.matrix();
        Ok(u.conjugate(&kron(x, self.bath.state().matrix())))
    }

    /// Linear extension `X ↦ Tr_B[U(X⊗τ)U†]`.
    pub fn apply_operator(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        partial_trace_op(&self.joint_operator(x)?, self.dims(), Subsystem::First)
    }

    pub fn apply(&self, rho_sys: &DensityMatrix) -> Result<Evolution> {
        let joint = self.joint_operator(rho_sys.matrix())?.hermitian_part();
        let dims = self.dims();
        let system = partial_trace_op(&joint, dims, Subsystem::First)?;
        let bath = partial_trace_op(&joint, dims, Subsystem::Second)?;
        Ok(Evolution {
            system: DensityMatrix::from_matrix_unchecked(system, vec![dims.0])?,
            bath: DensityMatrix::from_matrix_unchecked(bath, vec![dims.1])?,
            joint: DensityMatrix::from_matrix_unchecked(joint, vec![dims.0, dims.1])?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::thermal::gibbs_state;

    #[test]
    fn identity_unitary_returns_product() {
        let z = Hamiltonian::pauli_z();
        let tau = gibbs_state(&z, 0.7).unwrap();
        let op = ThermalOperation::new(EnergyBlockUnitary::identity(4), tau.clone(), z).unwrap();
        let rho = DensityMatrix::single(Matrix::from_real_rows(&[&[0.6, 0.2], &[0.2, 0.4]])).unwrap();
        let ev = op.apply(&rho).unwrap();
        assert!(ev.system.matrix().approx_eq(rho.matrix(), 1e-15));
        assert!(ev.bath.matrix().approx_eq(tau.state().matrix(), 1e-15));
        assert!(ev.joint.matrix().approx_eq(&kron(rho.matrix(), tau.state().matrix()), 1e-15));
    }

    #[test]
    fn rejects_wrong_dimension() {
        let z = Hamiltonian::pauli_z();
        let tau = gibbs_state(&z, 0.7).unwrap();
        assert!(ThermalOperation::new(EnergyBlockUnitary::identity(6), tau, z).is_err());
    }
}
