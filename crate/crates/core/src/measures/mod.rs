//! Non-Markovianity measures and the first-order quantities that bound their
//! response to a perturbed system Hamiltonian.

mod choi;
mod correlation;
mod delta;
mod proposition;

use serde::{Deserialize, Serialize};

use crate::optimize::{OptimizationResult, StartTrace};

pub use choi::{
    chi_lambda_bound, choi_matrix, choi_of_map, choi_state, distance_measure, ChiBound, ChoiInput, MtoFamily,
    CHOI_CROSS_CHECK_SAMPLES,
};
pub use correlation::{discord, log_negativity, mutual_information, ProjectiveMeasurementQubit};
pub use delta::{delta, measure_value, DeltaReport};
pub use proposition::{expansion_lemma_residual, theta_lambda, x_lambda, ThetaReport};

/// Which measure a value belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    /// e-bits
    LogNegativity,
    /// bits
    MutualInformation,
    /// bits
    Discord,
    /// dimensionless, in `[0, 2]`
    ChoiDistance,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 4] =
        [MeasureKind::LogNegativity, MeasureKind::MutualInformation, MeasureKind::Discord, MeasureKind::ChoiDistance];

    pub fn name(self) -> &'static str {
        match self {
            MeasureKind::LogNegativity => "log_negativity",
            MeasureKind::MutualInformation => "mutual_information",
            MeasureKind::Discord => "discord",
            MeasureKind::ChoiDistance => "choi_distance",
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            MeasureKind::LogNegativity => "ebit",
            MeasureKind::MutualInformation | MeasureKind::Discord => "bit",
            MeasureKind::ChoiDistance => "",
        }
    }

    pub fn needs_optimizer(self) -> bool {
        matches!(self, MeasureKind::Discord | MeasureKind::ChoiDistance)
    }
}

impl std::fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for MeasureKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MeasureKind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| {
            format!("unknown measure `{s}` (expected log_negativity, mutual_information, discord or choi_distance)")
        })
    }
}

/// Optimizer bookkeeping attached to a measure value.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Diagnostics {
    /// Optimal point (measurement angles or free MTO phases).
    pub argmin: Vec<f64>,
    pub converged: bool,
    pub evaluations: usize,
    pub starts: usize,
    pub trace: Vec<StartTrace<f64>>,
    /// Largest `‖Λ(ρ) − Λ^M(ρ)‖₁ − D` over sampled inputs (distance only).
    pub sampled_excess: Option<f64>,
    pub notes: Vec<String>,
}

impl Diagnostics {
    pub(crate) fn from_result(r: &OptimizationResult<f64>) -> Self {
        Self {
            argmin: r.point.clone(),
            converged: r.converged,
            evaluations: r.evaluations,
            starts: r.starts,
            trace: r.trace.clone(),
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasureValue {
    pub kind: MeasureKind,
    pub value: f64,
    pub diagnostics: Option<Diagnostics>,
}

impl MeasureValue {
    pub(crate) fn plain(kind: MeasureKind, value: f64) -> Self {
        Self { kind, value, diagnostics: None }
    }
}
