//! First-order response of the correlation measures to a perturbation.
//!
//! With `A = U(ρ⊗τ)U†` and `B = U(ρ̃⊗τ)U†` (`ρ̃` the first-order state
//! correction), the mutual information changes at rate `θ_Λ = C̄ − Ā − B̄`.

use crate::error::{Error, Result};
use crate::linalg::{eigh, partial_trace_op, Matrix, Subsystem, LOG_CUTOFF};
use crate::thermal::{first_order_correction, state_from_coefficients, PerturbationSpec, ThermalOperation};
use crate::{ComplexMatrix, DensityMatrix};

/// Largest kernel-block entry of the perturbation tolerated by the
/// log-on-support convention.
const KERNEL_TOL: f64 = 1e-10;

/// `θ_Λ` with its three traces.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaReport {
    pub value: f64,
    /// `Tr[β₁(I + log₂ρ′_S)]`
    pub a_bar: f64,
    /// `Tr[β₂(I + log₂ρ′_B)]`
    pub b_bar: f64,
    /// `Tr[β₃(I + log₂ρ_SB)]`
    pub c_bar: f64,
    /// Some evolved state was rank-deficient and the logarithm was taken on
    /// its support.
    pub on_support: bool,
}

/// `Tr[β(I + log₂ρ)]` on the support of `ρ`; fails when `β` has weight in
/// the kernel block of `ρ`.
fn entropy_slope(rho: &ComplexMatrix, beta: &ComplexMatrix, what: &str) -> Result<(f64, bool)> {
    let e = eigh(&rho.hermitian_part())?;
    let cutoff = LOG_CUTOFF;
    let kernel: Vec<usize> = (0..e.values.len()).filter(|&k| e.values[k] <= cutoff).collect();
    for &a in &kernel {
        for &b in &kernel {
            let w = e.vectors[a].amplitudes();
            let v = beta.apply(e.vectors[b].amplitudes());
            let x: num_complex::Complex<f64> = w.iter().zip(&v).map(|(p, q)| p.conj() * q).sum();
            if x.norm() > KERNEL_TOL {
                return Err(Error::ThetaUndefined(format!(
                    "{what} is rank-deficient and the perturbation has weight {:e} outside its support",
                    x.norm()
                )));
            }
        }
    }
    let log = e.reconstruct_with(|x| if x > cutoff { x.log2() } else { 0.0 });
    let id = Matrix::identity(rho.rows());
    Ok(((beta * &(&id + &log)).trace().re, !kernel.is_empty()))
}

fn joints(
    op: &ThermalOperation,
    rho_coeffs: &ComplexMatrix,
    pert: &PerturbationSpec,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let h = op.h_sys();
    DensityMatrix::single(rho_coeffs.clone())?;
    let rho = state_from_coefficients(h, rho_coeffs);
    let tilde = first_order_correction(rho_coeffs, h, pert.h_prime())?;
    Ok((op.joint_operator(&rho)?.hermitian_part(), op.joint_operator(&tilde)?.hermitian_part()))
}

/// `θ_Λ = C̄ − Ā − B̄`. Depends on `H′`, `ρ` and `U` only, not on ε.
pub fn theta_lambda(op: &ThermalOperation, rho_coeffs: &ComplexMatrix, pert: &PerturbationSpec) -> Result<ThetaReport> {
    let dims = op.dims();
    let (a, b) = joints(op, rho_coeffs, pert)?;
    let rho_s = partial_trace_op(&a, dims, Subsystem::First)?;
    let rho_b = partial_trace_op(&a, dims, Subsystem::Second)?;
    let beta1 = partial_trace_op(&b, dims, Subsystem::First)?;
    let beta2 = partial_trace_op(&b, dims, Subsystem::Second)?;
    let (a_bar, f1) = entropy_slope(&rho_s, &beta1, "ρ′_S")?;
    let (b_bar, f2) = entropy_slope(&rho_b, &beta2, "ρ′_B")?;
    let (c_bar, f3) = entropy_slope(&a, &b, "ρ_SB")?;
    Ok(ThetaReport { value: c_bar - a_bar - b_bar, a_bar, b_bar, c_bar, on_support: f1 || f2 || f3 })
}

/// `X_Λ = Tr[B(I + log₂A − log₂σ)]` for a full-rank witness `σ`.
pub fn x_lambda(
    op: &ThermalOperation,
    rho_coeffs: &ComplexMatrix,
    sigma: &DensityMatrix,
    pert: &PerturbationSpec,
) -> Result<f64> {
    let (a, b) = joints(op, rho_coeffs, pert)?;
    if sigma.dim() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "{}-dimensional σ for a {}-dimensional joint",
            sigma.dim(),
            a.rows()
        )));
    }
    let es = eigh(sigma.matrix())?;
    let min = es.values.first().copied().unwrap_or(0.0);
    if min <= LOG_CUTOFF {
        return Err(Error::Singular(format!("σ has eigenvalue {min:e}")));
    }
    let log_sigma = es.reconstruct_with(f64::log2);
    let (with_a, _) = entropy_slope(&a, &b, "A")?;
    Ok(with_a - (&b * &log_sigma).trace().re)
}

fn tr_x_log2_x(m: &ComplexMatrix) -> Result<f64> {
    let e = eigh(&m.hermitian_part())?;
    if let Some(&min) = e.values.first() {
        if min < -LOG_CUTOFF {
            return Err(Error::NegativeEigenvalue { value: min });
        }
    }
    Ok(e.values.iter().filter(|&&x| x > 0.0).map(|&x| x * x.log2()).sum())
}

/// `|Tr[(A+εB)log₂(A+εB)] − Tr[A log₂A] − εTr[B(I + log₂A)]|`.
///
/// The identity term stands in for `I/ln 2`; the two agree for traceless
/// `B`, which is the case for every state correction.
pub fn expansion_lemma_residual(a: &ComplexMatrix, b: &ComplexMatrix, eps: f64) -> Result<f64> {
    if a.rows() != b.rows() || !a.is_square() || !b.is_square() {
        return Err(Error::DimensionMismatch("A and B must be square of equal size".into()));
    }
    if !a.is_hermitian(1e-9) || !b.is_hermitian(1e-9) {
        return Err(Error::NotHermitian { asymmetry: a.hermitian_asymmetry().max(b.hermitian_asymmetry()) });
    }
    let lhs = tr_x_log2_x(&(a + &b.scale_real(eps)))?;
    let (slope, _) = entropy_slope(a, b, "A")?;
    Ok((lhs - tr_x_log2_x(a)? - eps * slope).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thermal::{gibbs_state, EnergyBlockUnitary, Hamiltonian};

    fn op() -> ThermalOperation {
        let z = Hamiltonian::pauli_z();
        let u = EnergyBlockUnitary::phase_diagonal(&z, &z, &[0.3, 1.7, 2.9, 0.1]).unwrap();
        ThermalOperation::new(u, gibbs_state(&z, 0.5).unwrap(), z).unwrap()
    }

    fn coeffs() -> ComplexMatrix {
        Matrix::from_real_rows(&[&[0.3, 0.1], &[0.1, 0.7]])
    }

    #[test]
    fn theta_is_epsilon_independent() {
        let a = theta_lambda(&op(), &coeffs(), &PerturbationSpec::new(Hamiltonian::pauli_x(), 0.1).unwrap()).unwrap();
        let b = theta_lambda(&op(), &coeffs(), &PerturbationSpec::new(Hamiltonian::pauli_x(), 0.2).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn commuting_perturbation_gives_zero_theta() {
        let p = Matrix::from_real_diagonal(&[0.3, 0.7]);
        let t = theta_lambda(&op(), &p, &PerturbationSpec::new(Hamiltonian::pauli_z(), 0.1).unwrap()).unwrap();
        assert_eq!(t.value, 0.0);
    }

    #[test]
    fn x_lambda_vanishes_for_zero_correction_and_rejects_singular_witness() {
        let p = Matrix::from_real_diagonal(&[0.3, 0.7]);
        let pert = PerturbationSpec::new(Hamiltonian::pauli_z(), 0.1).unwrap();
        let sigma = DensityMatrix::maximally_mixed(4);
        assert_eq!(x_lambda(&op(), &p, &sigma, &pert).unwrap(), 0.0);
        let singular = DensityMatrix::single(Matrix::from_real_diagonal(&[1.0, 0.0, 0.0, 0.0])).unwrap();
        assert!(matches!(x_lambda(&op(), &p, &singular, &pert), Err(Error::Singular(_))));
    }

    #[test]
    fn rank_deficient_states_use_the_support() {
        // pure ground state at zero temperature: the correction only couples support and kernel
        let z = Hamiltonian::pauli_z();
        let u = EnergyBlockUnitary::phase_diagonal(&z, &z, &[0.0; 4]).unwrap();
        let o = ThermalOperation::new(u, gibbs_state(&z, f64::INFINITY).unwrap(), z).unwrap();
        let p = Matrix::from_real_diagonal(&[1.0, 0.0]);
        let r = theta_lambda(&o, &p, &PerturbationSpec::new(Hamiltonian::pauli_x(), 0.1).unwrap()).unwrap();
        assert!(r.on_support);

        let rho = Matrix::from_real_diagonal(&[1.0, 0.0]);
        let beta = Matrix::from_real_diagonal(&[-1.0, 1.0]);
        assert!(matches!(entropy_slope(&rho, &beta, "ρ"), Err(Error::ThetaUndefined(_))));
    }
}
