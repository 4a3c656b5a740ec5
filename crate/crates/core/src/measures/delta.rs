//! Perturbation response of a single measure.

use crate::error::Result;
use crate::measures::{
    discord, distance_measure, log_negativity, mutual_information, MeasureKind, MeasureValue, MtoFamily,
};
use crate::optimize::OptimizerConfig;
use crate::thermal::{perturbed_state_exact, state_from_coefficients, PerturbationSpec, ThermalOperation};
use crate::{ComplexMatrix, DensityMatrix};

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaReport {
    pub unperturbed: MeasureValue,
    pub perturbed: MeasureValue,
    /// `perturbed.value − unperturbed.value`
    pub delta: f64,
    pub epsilon: f64,
}

impl DeltaReport {
    pub fn new(unperturbed: MeasureValue, perturbed: MeasureValue, epsilon: f64) -> Self {
        Self { delta: perturbed.value - unperturbed.value, unperturbed, perturbed, epsilon }
    }
}

fn evaluate(
    kind: MeasureKind,
    op: &ThermalOperation,
    input: &DensityMatrix,
    pert: Option<&PerturbationSpec>,
    cfg: &OptimizerConfig,
) -> Result<MeasureValue> {
    match kind {
        MeasureKind::ChoiDistance => distance_measure(op, &MtoFamily::for_operation(op)?, cfg, pert),
        _ => {
            let joint = op.apply(input)?.joint;
            match kind {
                MeasureKind::LogNegativity => log_negativity(&joint),
                MeasureKind::MutualInformation => mutual_information(&joint),
                MeasureKind::Discord => discord(&joint, cfg),
                MeasureKind::ChoiDistance => unreachable!(),
            }
        }
    }
}

/// One measure on the input `Σ P_ij|i⟩⟨j|` (unperturbed eigenkets) or, with
/// `pert`, on the same coefficients over the exact eigenkets of `H_S + εH′`.
pub fn measure_value(
    kind: MeasureKind,
    op: &ThermalOperation,
    rho_coeffs: &ComplexMatrix,
    pert: Option<&PerturbationSpec>,
    cfg: &OptimizerConfig,
) -> Result<MeasureValue> {
    let h = op.h_sys();
    let input = match pert {
        Some(p) if p.epsilon() != 0.0 => perturbed_state_exact(rho_coeffs, h, p)?,
        _ => {
            DensityMatrix::single(rho_coeffs.clone())?;
            DensityMatrix::single(state_from_coefficients(h, rho_coeffs).hermitian_part())?
        }
    };
    evaluate(kind, op, &input, pert.filter(|p| p.epsilon() != 0.0), cfg)
}

/// Measure with and without the perturbation. The perturbed input uses the
/// exact eigenkets of `H_S + εH′`; at `ε = 0` the unperturbed evaluation is
/// reused, so the delta is exactly zero.
pub fn delta(
    kind: MeasureKind,
    op: &ThermalOperation,
    rho_coeffs: &ComplexMatrix,
    pert: &PerturbationSpec,
    cfg: &OptimizerConfig,
) -> Result<DeltaReport> {
    let unperturbed = measure_value(kind, op, rho_coeffs, None, cfg)?;
    let perturbed =
        if pert.epsilon() == 0.0 { unperturbed.clone() } else { measure_value(kind, op, rho_coeffs, Some(pert), cfg)? };
    Ok(DeltaReport::new(unperturbed, perturbed, pert.epsilon()))
}
