//! Markovianity checks for a thermal operation.
//!
//! Two independent verdicts are produced: the direct one (is the joint output
//! a product `ρ′_S ⊗ τ_B`?) and the one read off the unitary's transition
//! amplitudes `α^{ji}_{E_R} = ⟨j, E_R + E_i − E_j|U|i, E_R⟩`.

use num_complex::Complex;

use crate::error::Result;
use crate::linalg::{kron, partial_trace_op, trace_norm, Subsystem};
use crate::thermal::ThermalOperation;
use crate::{ComplexMatrix, DensityMatrix, Ket};

/// A residual, or the reason it cannot be evaluated.
#[derive(Debug, Clone, PartialEq)]
pub enum Residual {
    Value(f64),
    NotApplicable(String),
}

impl Residual {
    pub fn value(&self) -> Option<f64> {
        match self {
            Residual::Value(v) => Some(*v),
            Residual::NotApplicable(_) => None,
        }
    }
}

/// `| |α^{ji}_{E_R}|² − P(E_R+ω_ji) P(i→j) / P(E_R) |` for bath level `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeResidual {
    pub i: usize,
    pub j: usize,
    pub r: usize,
    pub residual: Residual,
}

/// `max_R |α^{ii}_{E_R} (α^{jj}_{E_R})* − Λ_ij|`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseResidual {
    pub i: usize,
    pub j: usize,
    pub residual: Residual,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MtoConstraintReport {
    /// Direct verdict: `joint_product_deviation ≤ tol`.
    pub is_markovian: bool,
    /// `½‖U(ρ⊗τ)U† − ρ′⊗τ‖₁`
    pub joint_product_deviation: f64,
    pub amplitude_residuals: Vec<AmplitudeResidual>,
    pub phase_residuals: Vec<PhaseResidual>,
    /// Verdict from the residuals: every applicable residual ≤ tol.
    pub residuals_markovian: bool,
    pub tol: f64,
}

impl MtoConstraintReport {
    pub fn max_amplitude_residual(&self) -> f64 {
        self.amplitude_residuals.iter().filter_map(|a| a.residual.value()).fold(0.0, f64::max)
    }

    pub fn max_phase_residual(&self) -> f64 {
        self.phase_residuals.iter().filter_map(|a| a.residual.value()).fold(0.0, f64::max)
    }

    pub fn verdicts_agree(&self) -> bool {
        self.is_markovian == self.residuals_markovian
    }
}

pub fn mto_check(op: &ThermalOperation, rho_sys: &DensityMatrix, tol: f64) -> Result<MtoConstraintReport> {
    mto_check_operator(op, rho_sys.matrix(), tol)
}

/// As [`mto_check`] for any Hermitian system operator (e.g. a first-order
/// perturbed state that is not exactly positive).
pub fn mto_check_operator(op: &ThermalOperation, x: &ComplexMatrix, tol: f64) -> Result<MtoConstraintReport> {
    let joint = op.joint_operator(x)?;
    let out = partial_trace_op(&joint, op.dims(), Subsystem::First)?;
    let product = kron(&out, op.bath().state().matrix());
    let joint_product_deviation = 0.5 * trace_norm(&(&joint - &product).hermitian_part());

    let (amplitude_residuals, phase_residuals) = transition_residuals(op);
    let residuals_markovian = amplitude_residuals
        .iter()
        .filter_map(|a| a.residual.value())
        .chain(phase_residuals.iter().filter_map(|p| p.residual.value()))
        .all(|v| v <= tol);
    Ok(MtoConstraintReport {
        is_markovian: joint_product_deviation <= tol,
        joint_product_deviation,
        amplitude_residuals,
        phase_residuals,
        residuals_markovian,
        tol,
    })
}

fn transition_residuals(op: &ThermalOperation) -> (Vec<AmplitudeResidual>, Vec<PhaseResidual>) {
    let hs = op.h_sys();
    let hb = op.bath().source();
    let es = hs.energies();
    let eb = hb.energies();
    let p = op.bath().weights();
    let (ds, db) = op.dims();
    let u = op.unitary().matrix();

    let sys: &[Ket] = hs.eigenkets();
    let bath: &[Ket] = hb.eigenkets();
    let element = |j: usize, rp: usize, i: usize, r: usize| -> Complex<f64> {
        let ket = sys[i].tensor(&bath[r]);
        let bra = sys[j].tensor(&bath[rp]);
        let ui = u.apply(ket.amplitudes());
        bra.amplitudes().iter().zip(&ui).fold(Complex::new(0.0, 0.0), |acc, (b, x)| acc + b.conj() * x)
    };

    let bath_degenerate = !hb.is_nondegenerate();
    // α^{ji}_R, None when the target bath level does not exist
    let mut alpha = vec![vec![vec![None; db]; ds]; ds];
    if !bath_degenerate {
        for i in 0..ds {
            for j in 0..ds {
                for r in 0..db {
                    if let Some(rp) = hb.level_index(eb[r] + es[i] - es[j]) {
                        alpha[j][i][r] = Some((rp, element(j, rp, i, r)));
                    }
                }
            }
        }
    }

    let mut amplitude = Vec::new();
    for i in 0..ds {
        for j in 0..ds {
            let p_ij: f64 = (0..db).filter_map(|r| alpha[j][i][r].map(|(_, a)| p[r] * a.norm_sqr())).sum();
            for r in 0..db {
                let residual = if bath_degenerate {
                    Residual::NotApplicable("degenerate bath spectrum".into())
                } else if p[r] == 0.0 {
                    Residual::NotApplicable("bath level has zero population".into())
                } else {
                    match alpha[j][i][r] {
                        None => Residual::NotApplicable(format!("E_R + ω_ji is not a bath level (R = {r})")),
                        Some((rp, a)) => Residual::Value((a.norm_sqr() - p[rp] * p_ij / p[r]).abs()),
                    }
                };
                amplitude.push(AmplitudeResidual { i, j, r, residual });
            }
        }
    }

    let bohr_ok = hs.non_degenerate_bohr_spectrum();
    let mut phase = Vec::new();
    for i in 0..ds {
        for j in 0..ds {
            if i == j {
                continue;
            }
            let residual = if bath_degenerate {
                Residual::NotApplicable("degenerate bath spectrum".into())
            } else if !bohr_ok {
                Residual::NotApplicable("degenerate Bohr spectrum".into())
            } else {
                let prod: Vec<Option<Complex<f64>>> = (0..db)
                    .map(|r| match (alpha[i][i][r], alpha[j][j][r]) {
                        (Some((_, a)), Some((_, b))) if p[r] > 0.0 => Some(a * b.conj()),
                        _ => None,
                    })
                    .collect();
                let lambda = prod
                    .iter()
                    .enumerate()
                    .filter_map(|(r, x)| x.map(|x| x * p[r]))
                    .fold(Complex::new(0.0, 0.0), |acc, x| acc + x);
                Residual::Value(prod.iter().flatten().map(|x| (x - lambda).norm()).fold(0.0, f64::max))
            };
            phase.push(PhaseResidual { i, j, residual });
        }
    }
    (amplitude, phase)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::thermal::{gibbs_state, EnergyBlockUnitary, Hamiltonian};

    fn qubit_op(phases: &[f64]) -> ThermalOperation {
        let z = Hamiltonian::pauli_z();
        let hb = Hamiltonian::pauli_z().scaled(10.0);
        let u = EnergyBlockUnitary::phase_diagonal(&z, &hb, phases).unwrap();
        ThermalOperation::new(u, gibbs_state(&hb, 0.01).unwrap(), z).unwrap()
    }

    fn rho() -> DensityMatrix {
        DensityMatrix::single(
            Matrix::from_vec(
                2,
                2,
                vec![Complex::new(0.7, 0.0), Complex::new(0.2, 0.1), Complex::new(0.2, -0.1), Complex::new(0.3, 0.0)],
            )
            .unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn identity_is_markovian() {
        let r = mto_check(&qubit_op(&[0.0; 4]), &rho(), 1e-9).unwrap();
        assert!(r.is_markovian && r.residuals_markovian);
        assert!(r.max_amplitude_residual() < 1e-15 && r.max_phase_residual() < 1e-15);
    }

    #[test]
    fn constraint_surface_is_markovian() {
        // order |00⟩, |01⟩, |10⟩, |11⟩: α₁, α₃, α₄, α₂ with α₄ − α₁ = α₂ − α₃
        let (a1, a2, a3) = (0.4, 1.9, -0.7);
        let a4 = a1 + a2 - a3;
        let r = mto_check(&qubit_op(&[a1, a3, a4, a2]), &rho(), 1e-9).unwrap();
        assert!(r.is_markovian && r.residuals_markovian, "{r:?}");
        let r = mto_check(&qubit_op(&[a1, a3, a4 + 0.3, a2]), &rho(), 1e-9).unwrap();
        assert!(!r.is_markovian && !r.residuals_markovian);
    }
}
