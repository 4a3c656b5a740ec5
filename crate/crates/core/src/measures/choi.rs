//! Choi states and the distance to the nearest Markovian thermal operation.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::linalg::{kron, trace_norm, Matrix};
use crate::measures::{Diagnostics, MeasureKind, MeasureValue};
use crate::optimize::{
    constrained_phase_manifold, markovian_phase_relations, minimize, Bound, OptimizerConfig, PhaseManifold,
};
use crate::thermal::{
    first_order_correction, perturbed_eigenkets, EnergyBlockUnitary, GibbsState, Hamiltonian, PerturbationSpec,
    ThermalOperation,
};
use crate::{ComplexMatrix, DensityMatrix, Ket, C64};

/// Random inputs used to cross-check the Choi-state value of the distance.
pub const CHOI_CROSS_CHECK_SAMPLES: usize = 64;
const CROSS_CHECK_TOL: f64 = 1e-6;

/// System half of the maximally entangled input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChoiInput<'a> {
    /// `|Φ⟩ = d^{-1/2} Σ_i |i⟩|i⟩`
    Unperturbed,
    /// `|Φ_ε⟩ = d^{-1/2} Σ_i |i′⟩|i⟩` with exact perturbed eigenkets.
    Exact(&'a PerturbationSpec),
    /// `|Φ_ε⟩⟨Φ_ε|` to first order in ε (not a state in general).
    FirstOrder(&'a PerturbationSpec),
}

/// `Σ_ab map(X_ab) ⊗ scale·|a⟩⟨b|` for fixed system blocks `X_ab`.
struct Lifted {
    blocks: Vec<ComplexMatrix>,
    anc: Vec<ComplexMatrix>,
    scale: f64,
}

impl Lifted {
    fn new(blocks: Vec<ComplexMatrix>, anc_kets: &[Ket], scale: f64) -> Self {
        let d = anc_kets.len();
        let anc =
            (0..d * d).map(|n| Matrix::outer(anc_kets[n / d].amplitudes(), anc_kets[n % d].amplitudes())).collect();
        Self { blocks, anc, scale }
    }

    fn for_input(op: &ThermalOperation, input: ChoiInput<'_>) -> Result<Self> {
        let h = op.h_sys();
        let d = h.dim();
        let e = h.eigenkets();
        let unit = |n: usize| Matrix::outer(e[n / d].amplitudes(), e[n % d].amplitudes());
        let blocks = match input {
            ChoiInput::Unperturbed => (0..d * d).map(unit).collect(),
            ChoiInput::Exact(p) => {
                let k = perturbed_eigenkets(h, p)?;
                (0..d * d).map(|n| Matrix::outer(k[n / d].amplitudes(), k[n % d].amplitudes())).collect()
            }
            ChoiInput::FirstOrder(p) => {
                let tilde = correction_blocks(h, p.h_prime())?;
                (0..d * d).map(|n| &unit(n) + &tilde[n].scale_real(p.epsilon())).collect()
            }
        };
        Ok(Self::new(blocks, e, 1.0 / d as f64))
    }

    fn apply(&self, map: impl Fn(&ComplexMatrix) -> Result<ComplexMatrix>) -> Result<ComplexMatrix> {
        let mut out: Option<ComplexMatrix> = None;
        for (x, a) in self.blocks.iter().zip(&self.anc) {
            let term = kron(&map(x)?, a);
            out = Some(match out {
                None => term,
                Some(acc) => &acc + &term,
            });
        }
        Ok(out.expect("non-empty basis").scale_real(self.scale))
    }
}

/// `ρ̃(|a⟩⟨b|)` for every eigenbasis unit `|a⟩⟨b|`, index `a·d + b`.
fn correction_blocks(h: &Hamiltonian, h_prime: &Hamiltonian) -> Result<Vec<ComplexMatrix>> {
    let d = h.dim();
    (0..d * d)
        .map(|n| {
            let mut e = Matrix::zeros(d, d);
            e[(n / d, n % d)] = C64::new(1.0, 0.0);
            first_order_correction(&e, h, h_prime)
        })
        .collect()
}

/// `(Λ⊗I)|Φ⟩⟨Φ|` on system ⊗ ancilla, both in the unperturbed system
/// eigenbasis.
pub fn choi_matrix(op: &ThermalOperation, input: ChoiInput<'_>) -> Result<ComplexMatrix> {
    Lifted::for_input(op, input)?.apply(|x| op.apply_operator(x))
}

/// Choi state of `op`, with `|Φ_ε⟩` built from exact perturbed kets when
/// `pert` is given.
pub fn choi_state(op: &ThermalOperation, pert: Option<&PerturbationSpec>) -> Result<DensityMatrix> {
    let input = pert.map_or(ChoiInput::Unperturbed, ChoiInput::Exact);
    let d = op.d_sys();
    DensityMatrix::new(choi_matrix(op, input)?.hermitian_part(), vec![d, d])
}

/// Choi matrix of an arbitrary linear map on the span of `kets`.
pub fn choi_of_map(kets: &[Ket], map: impl Fn(&ComplexMatrix) -> Result<ComplexMatrix>) -> Result<ComplexMatrix> {
    let d = kets.len();
    let blocks = (0..d * d).map(|n| Matrix::outer(kets[n / d].amplitudes(), kets[n % d].amplitudes())).collect();
    Lifted::new(blocks, kets, 1.0 / d as f64).apply(map)
}

/// Phase-diagonal thermal operations whose phases satisfy the
/// Markovianity relations, parametrized by the free phases.
#[derive(Debug, Clone)]
pub struct MtoFamily {
    base: ThermalOperation,
    manifold: PhaseManifold,
}

impl MtoFamily {
    pub fn markovian(h_sys: &Hamiltonian, bath: &GibbsState) -> Result<Self> {
        let (d1, d2) = (h_sys.dim(), bath.source().dim());
        let u = EnergyBlockUnitary::phase_diagonal(h_sys, bath.source(), &vec![0.0; d1 * d2])?;
        let base = ThermalOperation::new(u, bath.clone(), h_sys.clone())?;
        let manifold = constrained_phase_manifold(d1 * d2, &markovian_phase_relations(d1, d2))?;
        Ok(Self { base, manifold })
    }

    /// Family sharing the system Hamiltonian and bath of `op`.
    pub fn for_operation(op: &ThermalOperation) -> Result<Self> {
        Self::markovian(op.h_sys(), op.bath())
    }

    pub fn manifold(&self) -> &PhaseManifold {
        &self.manifold
    }

    pub fn free_dim(&self) -> usize {
        self.manifold.free_dim()
    }

    pub fn phases(&self, free: &[f64]) -> Result<Vec<f64>> {
        self.manifold.map(free)
    }

    pub fn operation(&self, free: &[f64]) -> Result<ThermalOperation> {
        let u = self.base.unitary().rephased(&self.phases(free)?)?;
        self.base.with_unitary(u)
    }

    fn bounds(&self) -> Vec<Bound<f64>> {
        vec![Bound::angle(); self.free_dim()]
    }
}

/// `min_{Λ^M} ‖(Λ⊗I − Λ^M⊗I)|Φ⟩⟨Φ|‖₁` over `family`, with `|Φ_ε⟩` from
/// exact perturbed kets when `pert` is given.
///
/// The optimum free phases are `diagnostics.argmin`. The value is checked
/// against `CHOI_CROSS_CHECK_SAMPLES` random inputs; any input that beats it
/// by more than `1e-6` is reported in `diagnostics.notes`.
pub fn distance_measure(
    op: &ThermalOperation,
    family: &MtoFamily,
    cfg: &OptimizerConfig,
    pert: Option<&PerturbationSpec>,
) -> Result<MeasureValue> {
    let lifted = Lifted::for_input(op, pert.map_or(ChoiInput::Unperturbed, ChoiInput::Exact))?;
    let target = lifted.apply(|x| op.apply_operator(x))?;
    let objective = |free: &[f64]| -> f64 {
        family
            .operation(free)
            .and_then(|m| lifted.apply(|x| m.apply_operator(x)))
            .map(|c| trace_norm(&(&target - &c).hermitian_part()))
            .unwrap_or(f64::INFINITY)
    };
    let r = minimize(objective, &family.bounds(), cfg)?;
    let mut diagnostics = Diagnostics::from_result(&r);
    if !r.converged {
        diagnostics.notes.push("optimizer did not converge; best value returned".into());
    }

    let best = family.operation(&r.point)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed_sequence ^ 0x5eed_c401);
    let mut excess = f64::NEG_INFINITY;
    for _ in 0..CHOI_CROSS_CHECK_SAMPLES {
        let rho = random_state(&mut rng, op.d_sys());
        let diff = &op.apply_operator(&rho)? - &best.apply_operator(&rho)?;
        excess = excess.max(trace_norm(&diff.hermitian_part()) - r.value);
    }
    if excess > CROSS_CHECK_TOL {
        diagnostics.notes.push(format!(
            "a sampled input exceeds the Choi value by {excess:e}; the Choi identity does not hold here"
        ));
    }
    diagnostics.sampled_excess = Some(excess);
    Ok(MeasureValue { kind: MeasureKind::ChoiDistance, value: r.value, diagnostics: Some(diagnostics) })
}

fn random_state(rng: &mut ChaCha8Rng, d: usize) -> ComplexMatrix {
    let g = Matrix::from_fn(d, d, |_, _| C64::new(2.0 * rng.random::<f64>() - 1.0, 2.0 * rng.random::<f64>() - 1.0));
    let m = &g * &g.adjoint();
    let t = m.trace().re;
    m.scale_real(1.0 / t).hermitian_part()
}

/// `(ε/d₁)·max_{Λ^M} ‖(Λ⊗I − Λ^M⊗I)ϑ(H′)‖₁`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiBound {
    pub value: f64,
    /// `max_{Λ^M} ‖(Λ⊗I − Λ^M⊗I)ϑ‖₁` (best found).
    pub max_norm: f64,
    pub epsilon: f64,
    pub diagnostics: Diagnostics,
}

/// First-order bound on the change of the distance measure, with
/// `ϑ = Σ_{ij,k≠i} C_ki |k i⟩⟨j j| + Σ_{ij,l≠j} C*_lj |i i⟩⟨l j|` and
/// `C_ki = ⟨k|H′|i⟩/(E_i − E_k)`.
pub fn chi_lambda_bound(
    op: &ThermalOperation,
    family: &MtoFamily,
    pert: &PerturbationSpec,
    cfg: &OptimizerConfig,
) -> Result<ChiBound> {
    let h = op.h_sys();
    let d = h.dim();
    let lifted = Lifted::new(correction_blocks(h, pert.h_prime())?, h.eigenkets(), 1.0);
    let target = lifted.apply(|x| op.apply_operator(x))?;
    let objective = |free: &[f64]| -> f64 {
        family
            .operation(free)
            .and_then(|m| lifted.apply(|x| m.apply_operator(x)))
            .map(|c| -trace_norm(&(&target - &c).hermitian_part()))
            .unwrap_or(f64::INFINITY)
    };
    let r = minimize(objective, &family.bounds(), cfg)?;
    let mut diagnostics = Diagnostics::from_result(&r);
    if !r.converged {
        diagnostics.notes.push("optimizer did not converge; best value returned".into());
    }
    let max_norm = -r.value;
    Ok(ChiBound { value: pert.epsilon() / d as f64 * max_norm, max_norm, epsilon: pert.epsilon(), diagnostics })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thermal::gibbs_state;

    fn op(phases: &[f64]) -> ThermalOperation {
        let z = Hamiltonian::pauli_z();
        let hb = z.scaled(10.0);
        let u = EnergyBlockUnitary::phase_diagonal(&z, &hb, phases).unwrap();
        ThermalOperation::new(u, gibbs_state(&hb, 0.01).unwrap(), z).unwrap()
    }

    fn cheap() -> OptimizerConfig {
        OptimizerConfig { seeds: 8, ..Default::default() }
    }

    #[test]
    fn identity_choi_is_max_entangled() {
        let c = choi_state(&op(&[0.0; 4]), None).unwrap();
        let h = Matrix::from_real_rows(&[
            &[0.5, 0.0, 0.0, 0.5],
            &[0.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0],
            &[0.5, 0.0, 0.0, 0.5],
        ]);
        assert!(c.matrix().approx_eq(&h, 1e-15));
    }

    #[test]
    fn depolarizing_choi_is_maximally_mixed() {
        let kets: Vec<Ket> = (0..2).map(|i| Ket::basis(2, i)).collect();
        let c = choi_of_map(&kets, |x| Ok(Matrix::identity(2).scale(x.trace() * 0.5))).unwrap();
        assert!(c.approx_eq(&Matrix::identity(4).scale_real(0.25), 1e-15));
    }

    #[test]
    fn markovian_op_has_zero_distance() {
        let (a1, a2, a3) = (0.4, 1.9, -0.7);
        let o = op(&[a1, a3, a1 + a2 - a3, a2]);
        let fam = MtoFamily::for_operation(&o).unwrap();
        let d = distance_measure(&o, &fam, &cheap(), None).unwrap();
        assert!(d.value < 1e-6, "{}", d.value);
        assert!(d.diagnostics.unwrap().converged);
    }

    #[test]
    fn family_members_are_markovian() {
        let fam = MtoFamily::for_operation(&op(&[0.0; 4])).unwrap();
        let m = fam.operation(&[0.3, 2.0, 5.0]).unwrap();
        assert!(m.unitary().energy_preserving());
        let rho = DensityMatrix::single(Matrix::from_real_rows(&[&[0.6, 0.3], &[0.3, 0.4]])).unwrap();
        assert!(crate::thermal::mto_check(&m, &rho, 1e-12).unwrap().is_markovian);
    }

    #[test]
    fn chi_bound_vanishes_for_commuting_perturbation() {
        let o = op(&[1e4, 3e4, 4e4, 2e4]);
        let fam = MtoFamily::for_operation(&o).unwrap();
        let p = PerturbationSpec::new(Hamiltonian::pauli_z(), 0.1).unwrap();
        assert_eq!(chi_lambda_bound(&o, &fam, &p, &cheap()).unwrap().value, 0.0);
    }
}
