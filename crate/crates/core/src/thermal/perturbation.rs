//! Perturbed system Hamiltonians and the matching perturbed states.
//!
//! Density-matrix coefficients `P_ij` always refer to the ascending-energy
//! eigenbasis `{|i⟩}` of the unperturbed system Hamiltonian.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::thermal::Hamiltonian;
use crate::{ComplexMatrix, DensityMatrix, Ket};

/// Minimum `|⟨i|i′⟩|²` accepted when matching perturbed to unperturbed levels.
pub const MIN_OVERLAP: f64 = 0.5;

/// `H′_S = H_S + εH′`.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationSpec {
    h_prime: Hamiltonian,
    epsilon: f64,
}

impl PerturbationSpec {
    pub fn new(h_prime: Hamiltonian, epsilon: f64) -> Result<Self> {
        if !epsilon.is_finite() || epsilon < 0.0 {
            return Err(Error::config("epsilon", format!("must be finite and ≥ 0, got {epsilon}")));
        }
        Ok(Self { h_prime, epsilon })
    }

    pub fn h_prime(&self) -> &Hamiltonian {
        &self.h_prime
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        Self::new(self.h_prime.clone(), epsilon)
    }
}

pub fn perturbed_hamiltonian(h_sys: &Hamiltonian, pert: &PerturbationSpec) -> Result<Hamiltonian> {
    h_sys.plus(pert.epsilon, &pert.h_prime)
}

fn require_nondegenerate(h: &Hamiltonian) -> Result<()> {
    if !h.is_nondegenerate() {
        return Err(Error::DegenerateSpectrum(format!("system energies {:?}", h.energies())));
    }
    Ok(())
}

/// Exact eigenkets `|i′⟩` of `H_S + εH′`, listed in the order of the
/// unperturbed levels they overlap most with and phased so `⟨i|i′⟩ > 0`.
pub fn perturbed_eigenkets(h_sys: &Hamiltonian, pert: &PerturbationSpec) -> Result<Vec<Ket>> {
    require_nondegenerate(h_sys)?;
    let hp = perturbed_hamiltonian(h_sys, pert)?;
    let old = h_sys.eigenkets();
    let new = hp.eigenkets();
    let mut taken = vec![false; new.len()];
    let mut out = Vec::with_capacity(old.len());
    for (i, ki) in old.iter().enumerate() {
        let (best, overlap) = new
            .iter()
            .enumerate()
            .map(|(k, kk)| (k, ki.inner(kk)))
            .max_by(|a, b| a.1.norm_sqr().partial_cmp(&b.1.norm_sqr()).unwrap().then(b.0.cmp(&a.0)))
            .expect("non-empty basis");
        let w = overlap.norm_sqr();
        if w < MIN_OVERLAP || taken[best] {
            return Err(Error::PerturbationTooStrong { level: i, overlap: w });
        }
        taken[best] = true;
        let phase = overlap.conj().unscale(overlap.norm());
        out.push(new[best].scale_phase(phase));
    }
    Ok(out)
}

fn ket_matrix(kets: &[Ket]) -> ComplexMatrix {
    let d = kets.len();
    Matrix::from_fn(d, d, |r, c| kets[c].amplitudes()[r])
}

/// `P = V†ρV` for the unperturbed eigenvector matrix `V`.
pub fn coefficients_of(h_sys: &Hamiltonian, rho: &ComplexMatrix) -> ComplexMatrix {
    let v = h_sys.eigenvector_matrix();
    v.adjoint().conjugate(rho)
}

/// `Σ P_ij |i⟩⟨j|`
pub fn state_from_coefficients(h_sys: &Hamiltonian, p: &ComplexMatrix) -> ComplexMatrix {
    h_sys.eigenvector_matrix().conjugate(p)
}

/// `Σ P_ij |i′⟩⟨j′|` with exact perturbed eigenkets.
pub fn perturbed_state_exact(
    rho_coeffs: &ComplexMatrix,
    h_sys: &Hamiltonian,
    pert: &PerturbationSpec,
) -> Result<DensityMatrix> {
    let p = DensityMatrix::single(rho_coeffs.clone())?;
    if p.dim() != h_sys.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} coefficients for a {}-level system",
            p.dim(),
            p.dim(),
            h_sys.dim()
        )));
    }
    let v = ket_matrix(&perturbed_eigenkets(h_sys, pert)?);
    DensityMatrix::from_matrix_unchecked(v.conjugate(p.matrix()).hermitian_part(), vec![h_sys.dim()])
}

/// First-order ket coefficients `C_ki = ⟨k|H′|i⟩/(E_i − E_k)` (zero diagonal),
/// so that `|i′⟩ ≈ |i⟩ + ε Σ_k C_ki |k⟩`.
pub fn first_order_coefficients(h_sys: &Hamiltonian, h_prime: &Hamiltonian) -> Result<ComplexMatrix> {
    require_nondegenerate(h_sys)?;
    if h_prime.dim() != h_sys.dim() {
        return Err(Error::DimensionMismatch(format!("{}-level H′ for a {}-level system", h_prime.dim(), h_sys.dim())));
    }
    let hp = coefficients_of(h_sys, h_prime.matrix());
    let e = h_sys.energies();
    Ok(Matrix::from_fn(
        e.len(),
        e.len(),
        |k, i| {
            if k == i {
                Complex::new(0.0, 0.0)
            } else {
                hp[(k, i)].unscale(e[i] - e[k])
            }
        },
    ))
}

/// `ρ̃ = Σ_ij P_ij (Σ_{k≠i} C_ki |k⟩⟨j| + Σ_{l≠j} C*_lj |i⟩⟨l|)` in the
/// computational basis. Hermitian and traceless.
pub fn first_order_correction(
    rho_coeffs: &ComplexMatrix,
    h_sys: &Hamiltonian,
    h_prime: &Hamiltonian,
) -> Result<ComplexMatrix> {
    let c = first_order_coefficients(h_sys, h_prime)?;
    if rho_coeffs.rows() != c.rows() || !rho_coeffs.is_square() {
        return Err(Error::DimensionMismatch("coefficient matrix does not match the system".into()));
    }
    let tilde = &(&c * rho_coeffs) + &(rho_coeffs * &c.adjoint());
    Ok(state_from_coefficients(h_sys, &tilde))
}

/// `ρ_S + ερ̃`. May have negative eigenvalues of order ε².
pub fn perturbed_state_first_order(
    rho_coeffs: &ComplexMatrix,
    h_sys: &Hamiltonian,
    pert: &PerturbationSpec,
) -> Result<ComplexMatrix> {
    let tilde = first_order_correction(rho_coeffs, h_sys, &pert.h_prime)?;
    Ok(&state_from_coefficients(h_sys, rho_coeffs) + &tilde.scale_real(pert.epsilon))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_level_perturbed_spectrum() {
        let hp = perturbed_hamiltonian(
            &Hamiltonian::pauli_z(),
            &PerturbationSpec::new(Hamiltonian::pauli_x(), 0.2).unwrap(),
        )
        .unwrap();
        let r = 1.04f64.sqrt();
        assert!((hp.energies()[0] + r).abs() < 1e-14 && (hp.energies()[1] - r).abs() < 1e-14);
    }

    #[test]
    fn kets_follow_unperturbed_levels() {
        let z = Hamiltonian::pauli_z();
        let kets = perturbed_eigenkets(&z, &PerturbationSpec::new(Hamiltonian::pauli_x(), 0.1).unwrap()).unwrap();
        for (k, old) in kets.iter().zip(z.eigenkets()) {
            let o = old.inner(k);
            assert!(o.im.abs() < 1e-15 && o.re > 0.99);
        }
    }

    #[test]
    fn strong_perturbation_is_rejected() {
        let h = Hamiltonian::new(Matrix::from_real_diagonal(&[0.0, 1.0, 2.5])).unwrap();
        let ones =
            Hamiltonian::new(Matrix::from_real_rows(&[&[1.0, 1.0, 1.0], &[1.0, 1.0, 1.0], &[1.0, 1.0, 1.0]])).unwrap();
        let weak = PerturbationSpec::new(ones.clone(), 0.01).unwrap();
        assert!(perturbed_eigenkets(&h, &weak).is_ok());
        let strong = PerturbationSpec::new(ones, 100.0).unwrap();
        assert!(matches!(perturbed_eigenkets(&h, &strong), Err(Error::PerturbationTooStrong { .. })));
        assert!(matches!(
            perturbed_eigenkets(
                &Hamiltonian::identity(2),
                &PerturbationSpec::new(Hamiltonian::pauli_x(), 0.1).unwrap()
            ),
            Err(Error::DegenerateSpectrum(_))
        ));
    }

    #[test]
    fn first_order_state_is_hermitian_unit_trace() {
        let z = Hamiltonian::pauli_z();
        let p = Matrix::from_real_diagonal(&[0.1, 0.9]);
        let pert = PerturbationSpec::new(Hamiltonian::pauli_x(), 0.1).unwrap();
        let m = perturbed_state_first_order(&p, &z, &pert).unwrap();
        assert!(m.is_hermitian(1e-15));
        assert!((m.trace().re - 1.0).abs() < 1e-15);
    }
}
