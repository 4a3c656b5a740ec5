//! JSON experiment configuration: schema, validation, overrides and the
//! built-in studies.

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::measures::MeasureKind;
use crate::optimize::OptimizerConfig;
use crate::thermal::{
    build_block_unitary, coefficients_of, total_hamiltonian, BlockParams, EnergyBlockUnitary, Hamiltonian,
};
use crate::{ComplexMatrix, DensityMatrix, Ket};

/// Largest `d_sys·d_bath` accepted.
pub const MAX_JOINT_DIM: usize = 36;

/// Operator given by name (with optional scale) or by explicit entries.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub re: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl HamiltonianSpec {
    pub fn named(name: &str) -> Self {
        Self { name: Some(name.into()), ..Default::default() }
    }

    pub fn named_scaled(name: &str, scale: f64) -> Self {
        Self { name: Some(name.into()), scale: Some(scale), ..Default::default() }
    }

    pub fn build(&self, field: &str) -> Result<Hamiltonian> {
        let scale = self.scale.unwrap_or(1.0);
        if !scale.is_finite() {
            return Err(Error::config(format!("{field}.scale"), "must be finite"));
        }
        let h = match (&self.name, &self.re) {
            (Some(_), Some(_)) => return Err(Error::config(field, "give either `name` or `re`/`im`, not both")),
            (None, None) => return Err(Error::config(field, "needs `name` or `re`")),
            (Some(name), None) => {
                if self.im.is_some() {
                    return Err(Error::config(format!("{field}.im"), "only allowed together with `re`"));
                }
                Hamiltonian::named(name).map_err(|e| match e {
                    Error::Config { message, .. } => Error::config(format!("{field}.name"), message),
                    other => other,
                })?
            }
            (None, Some(re)) => {
                let m = matrix_from_parts(re, self.im.as_deref(), field)?;
                Hamiltonian::new(m).map_err(|e| match e {
                    Error::NotHermitian { asymmetry } => {
                        Error::config(field, format!("matrix is not Hermitian (max asymmetry {asymmetry:e})"))
                    }
                    other => other,
                })?
            }
        };
        Ok(if scale == 1.0 { h } else { h.scaled(scale) })
    }
}

fn matrix_from_parts(re: &[Vec<f64>], im: Option<&[Vec<f64>]>, field: &str) -> Result<ComplexMatrix> {
    let n = re.len();
    if n == 0 || re.iter().any(|r| r.len() != n) {
        return Err(Error::config(format!("{field}.re"), "must be a non-empty square array of rows"));
    }
    if let Some(im) = im {
        if im.len() != n || im.iter().any(|r| r.len() != n) {
            return Err(Error::config(format!("{field}.im"), format!("must be {n}x{n} like `re`")));
        }
    }
    let m = Matrix::from_fn(n, n, |r, c| Complex::new(re[r][c], im.map_or(0.0, |im| im[r][c])));
    if m.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::config(field, "entries must be finite"));
    }
    Ok(m)
}

/// Explicit list, or `points` evenly spaced values from `start` to `stop`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TemperatureGrid {
    List(Vec<f64>),
    Range { start: f64, stop: f64, points: usize },
}

impl TemperatureGrid {
    pub fn values(&self) -> Result<Vec<f64>> {
        let v = match self {
            TemperatureGrid::List(v) => v.clone(),
            TemperatureGrid::Range { start, stop, points } => {
                if *points == 0 {
                    return Err(Error::config("temperatures.points", "must be ≥ 1"));
                }
                if *points == 1 {
                    vec![*start]
                } else {
                    let step = (stop - start) / (*points - 1) as f64;
                    (0..*points).map(|k| if k + 1 == *points { *stop } else { start + step * k as f64 }).collect()
                }
            }
        };
        if v.is_empty() {
            return Err(Error::config("temperatures", "must not be empty"));
        }
        if let Some(t) = v.iter().find(|t| !(t.is_finite() && **t > 0.0)) {
            return Err(Error::config("temperatures", format!("values must be finite and > 0, got {t}")));
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KetSpec {
    pub re: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<f64>>,
}

impl KetSpec {
    pub fn real(re: &[f64]) -> Self {
        Self { re: re.to_vec(), im: None }
    }

    fn build(&self, field: &str) -> Result<Ket> {
        if let Some(im) = &self.im {
            if im.len() != self.re.len() {
                return Err(Error::config(format!("{field}.im"), "length differs from `re`"));
            }
        }
        let amps =
            (0..self.re.len()).map(|k| Complex::new(self.re[k], self.im.as_ref().map_or(0.0, |im| im[k]))).collect();
        Ket::new(amps).map_err(|e| Error::config(field, e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixSpec {
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

/// One energy block: explicit kets with either a phase each or a unitary
/// acting on their span.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockSpec {
    pub kets: Vec<KetSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phases: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseBasis {
    /// Product eigenbasis of `H_S ⊗ I + I ⊗ H_B`, system-major.
    Energy,
    /// Computational product basis; not checked against the Hamiltonian.
    Computational,
}

/// Global unitary. Exactly one form is used:
/// `basis` + `phases`, `kets` + `phases`, or `blocks`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitarySpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<PhaseBasis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kets: Option<Vec<KetSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phases: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<BlockSpec>>,
}

impl UnitarySpec {
    pub fn build(&self, h_sys: &Hamiltonian, h_bath: &Hamiltonian) -> Result<EnergyBlockUnitary> {
        let d = h_sys.dim() * h_bath.dim();
        let wrap = |field: &str, e: Error| match e {
            Error::Config { .. } => e,
            other => Error::config(field, other.to_string()),
        };
        let check_phases = |p: &[f64], n: usize, field: &str| -> Result<()> {
            if p.len() != n {
                return Err(Error::config(field, format!("expected {n} phases, got {}", p.len())));
            }
            if p.iter().any(|a| !a.is_finite()) {
                return Err(Error::config(field, "phases must be finite"));
            }
            Ok(())
        };
        match (self.basis, &self.kets, &self.blocks) {
            (Some(basis), None, None) => {
                let phases =
                    self.phases.as_deref().ok_or_else(|| Error::config("unitary.phases", "required with `basis`"))?;
                check_phases(phases, d, "unitary.phases")?;
                match basis {
                    PhaseBasis::Energy => EnergyBlockUnitary::phase_diagonal(h_sys, h_bath, phases),
                    PhaseBasis::Computational => {
                        EnergyBlockUnitary::from_phases_unchecked((0..d).map(|k| Ket::basis(d, k)).collect(), phases)
                    }
                }
                .map_err(|e| wrap("unitary", e))
            }
            (None, Some(kets), None) => {
                let phases =
                    self.phases.as_deref().ok_or_else(|| Error::config("unitary.phases", "required with `kets`"))?;
                check_phases(phases, kets.len(), "unitary.phases")?;
                let params = kets
                    .iter()
                    .zip(phases)
                    .enumerate()
                    .map(|(k, (ks, &a))| {
                        let ket = ks.build(&format!("unitary.kets[{k}]"))?;
                        Ok(BlockParams::Phases { kets: vec![ket], phases: vec![a] })
                    })
                    .collect::<Result<Vec<_>>>()?;
                build_block_unitary(&total_hamiltonian(h_sys, h_bath), &params).map_err(|e| wrap("unitary.kets", e))
            }
            (None, None, Some(blocks)) => {
                if self.phases.is_some() {
                    return Err(Error::config("unitary.phases", "put phases inside each block"));
                }
                let params = blocks
                    .iter()
                    .enumerate()
                    .map(|(b, spec)| {
                        let field = format!("unitary.blocks[{b}]");
                        let kets = spec
                            .kets
                            .iter()
                            .enumerate()
                            .map(|(k, ks)| ks.build(&format!("{field}.kets[{k}]")))
                            .collect::<Result<Vec<_>>>()?;
                        match (&spec.phases, &spec.matrix) {
                            (Some(p), None) => {
                                check_phases(p, kets.len(), &format!("{field}.phases"))?;
                                Ok(BlockParams::Phases { kets, phases: p.clone() })
                            }
                            (None, Some(m)) => {
                                let matrix = matrix_from_parts(&m.re, m.im.as_deref(), &format!("{field}.matrix"))?;
                                Ok(BlockParams::Unitary { kets, matrix })
                            }
                            _ => Err(Error::config(field, "needs exactly one of `phases` or `matrix`")),
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                build_block_unitary(&total_hamiltonian(h_sys, h_bath), &params).map_err(|e| wrap("unitary.blocks", e))
            }
            _ => Err(Error::config("unitary", "use exactly one of `basis`, `kets` or `blocks`")),
        }
    }

    /// Every phase of the unitary, in the order given.
    pub fn all_phases(&self) -> Vec<f64> {
        let mut out = self.phases.clone().unwrap_or_default();
        for b in self.blocks.iter().flatten() {
            out.extend(b.phases.iter().flatten());
        }
        out
    }
}

/// Initial system state in the computational basis: either
/// `a|0⟩⟨0| + (1−a)|1⟩⟨1|` on a qubit, or an explicit density matrix.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialStateSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub re: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl InitialStateSpec {
    pub fn population(a: f64) -> Self {
        Self { a: Some(a), ..Default::default() }
    }

    pub fn build(&self, d_sys: usize) -> Result<DensityMatrix> {
        let m = match (self.a, &self.re) {
            (Some(a), None) => {
                if self.im.is_some() {
                    return Err(Error::config("initial_state.im", "only allowed together with `re`"));
                }
                if !(0.0..=1.0).contains(&a) {
                    return Err(Error::config("initial_state.a", format!("must lie in [0, 1], got {a}")));
                }
                if d_sys != 2 {
                    return Err(Error::config(
                        "initial_state.a",
                        format!("needs a qubit system, got dimension {d_sys}"),
                    ));
                }
                Matrix::from_real_diagonal(&[a, 1.0 - a])
            }
            (None, Some(re)) => matrix_from_parts(re, self.im.as_deref(), "initial_state")?,
            _ => return Err(Error::config("initial_state", "give either `a` or `re`/`im`")),
        };
        if m.rows() != d_sys {
            return Err(Error::config(
                "initial_state",
                format!("{}x{} matrix for a {d_sys}-level system", m.rows(), m.rows()),
            ));
        }
        DensityMatrix::single(m).map_err(|e| Error::config("initial_state", e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationConfig {
    pub hamiltonian: HamiltonianSpec,
    pub epsilons: Vec<f64>,
}

/// A claim checked against the sweep table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case", deny_unknown_fields)]
pub enum Expectation {
    /// `Δ > 0` on every perturbed row.
    Positive { measure: MeasureKind },
    /// `Δ` never decreases between adjacent temperatures.
    NondecreasingInT { measure: MeasureKind },
    /// `Δ` strictly grows between adjacent temperatures taken downwards.
    IncreasingAsTDecreases { measure: MeasureKind },
    /// `Δ` strictly grows with ε at every temperature.
    IncreasingInEpsilon { measure: MeasureKind },
    /// `|Δ| ≤ bound` on every perturbed row.
    AbsAtMost { measure: MeasureKind, bound: f64 },
    /// `Δ ≤ χ bound + slack` on every perturbed row.
    BelowChiBound { measure: MeasureKind, slack: f64 },
    /// Every optimization behind the measure converged.
    Converged { measure: MeasureKind },
    /// `Δ = 0` exactly on the ε = 0 rows.
    ControlZero { measure: MeasureKind },
}

impl Expectation {
    pub fn measure(&self) -> MeasureKind {
        match self {
            Expectation::Positive { measure }
            | Expectation::NondecreasingInT { measure }
            | Expectation::IncreasingAsTDecreases { measure }
            | Expectation::IncreasingInEpsilon { measure }
            | Expectation::AbsAtMost { measure, .. }
            | Expectation::BelowChiBound { measure, .. }
            | Expectation::Converged { measure }
            | Expectation::ControlZero { measure } => *measure,
        }
    }

    pub fn name(&self) -> String {
        let tag = match self {
            Expectation::Positive { .. } => "positive".to_string(),
            Expectation::NondecreasingInT { .. } => "nondecreasing_in_t".to_string(),
            Expectation::IncreasingAsTDecreases { .. } => "increasing_as_t_decreases".to_string(),
            Expectation::IncreasingInEpsilon { .. } => "increasing_in_epsilon".to_string(),
            Expectation::AbsAtMost { bound, .. } => format!("abs_at_most_{bound:e}"),
            Expectation::BelowChiBound { .. } => "below_chi_bound".to_string(),
            Expectation::Converged { .. } => "converged".to_string(),
            Expectation::ControlZero { .. } => "control_zero".to_string(),
        };
        format!("{}:{tag}", self.measure())
    }
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub system: HamiltonianSpec,
    pub bath: HamiltonianSpec,
    pub temperatures: TemperatureGrid,
    pub unitary: UnitarySpec,
    pub initial_state: InitialStateSpec,
    pub perturbation: PerturbationConfig,
    pub measures: Vec<MeasureKind>,
    #[serde(default)]
    pub optimizer: OptimizerConfig,
    #[serde(default)]
    pub expectations: Vec<Expectation>,
    /// Adds ε = 0 rows.
    #[serde(default = "default_true")]
    pub include_control: bool,
}

/// Validated, ready-to-run form of an [`ExperimentConfig`].
#[derive(Debug, Clone)]
pub struct Setup {
    pub h_sys: Hamiltonian,
    pub h_bath: Hamiltonian,
    pub h_prime: Hamiltonian,
    pub unitary: EnergyBlockUnitary,
    /// Initial state in the computational basis.
    pub rho: DensityMatrix,
    /// Same state as coefficients in the ascending eigenbasis of `H_S`.
    pub rho_coeffs: ComplexMatrix,
    pub temperatures: Vec<f64>,
    /// Perturbation strengths including the control value when requested.
    pub epsilons: Vec<f64>,
}

impl Setup {
    pub fn dims(&self) -> (usize, usize) {
        (self.h_sys.dim(), self.h_bath.dim())
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<Setup> {
        if self.name.trim().is_empty() || self.name.contains(['/', '\\']) {
            return Err(Error::config("name", "must be a non-empty file-name-safe string"));
        }
        let h_sys = self.system.build("system")?;
        let h_bath = self.bath.build("bath")?;
        let joint = h_sys.dim() * h_bath.dim();
        if joint > MAX_JOINT_DIM {
            return Err(Error::config(
                "system",
                format!("joint dimension {}x{} = {joint} exceeds {MAX_JOINT_DIM}", h_sys.dim(), h_bath.dim()),
            ));
        }
        let h_prime = self.perturbation.hamiltonian.build("perturbation.hamiltonian")?;
        if h_prime.dim() != h_sys.dim() {
            return Err(Error::config(
                "perturbation.hamiltonian",
                format!("{}-level operator for a {}-level system", h_prime.dim(), h_sys.dim()),
            ));
        }
        let mut epsilons = self.perturbation.epsilons.clone();
        if epsilons.is_empty() {
            return Err(Error::config("perturbation.epsilons", "must not be empty"));
        }
        if let Some(e) = epsilons.iter().find(|e| !(e.is_finite() && **e >= 0.0)) {
            return Err(Error::config("perturbation.epsilons", format!("values must be finite and ≥ 0, got {e}")));
        }
        if self.include_control && !epsilons.contains(&0.0) {
            epsilons.push(0.0);
        }
        epsilons.sort_by(f64::total_cmp);
        epsilons.dedup();
        if epsilons.iter().any(|&e| e > 0.0) && !h_sys.is_nondegenerate() {
            return Err(Error::config("system", "perturbed eigenkets need a nondegenerate system Hamiltonian"));
        }
        let temperatures = self.temperatures.values()?;
        let unitary = self.unitary.build(&h_sys, &h_bath)?;
        let rho = self.initial_state.build(h_sys.dim())?;
        if self.measures.is_empty() {
            return Err(Error::config("measures", "must list at least one measure"));
        }
        if self.measures.contains(&MeasureKind::Discord) && h_sys.dim() != 2 {
            return Err(Error::config("measures", "discord measures the system side, which must be a qubit"));
        }
        self.optimizer.validate().map_err(|e| Error::config("optimizer", e.to_string()))?;
        for (k, x) in self.expectations.iter().enumerate() {
            if !self.measures.contains(&x.measure()) {
                return Err(Error::config(
                    format!("expectations[{k}].measure"),
                    format!("`{}` is not in `measures`", x.measure()),
                ));
            }
        }
        let rho_coeffs = coefficients_of(&h_sys, rho.matrix());
        Ok(Setup { h_sys, h_bath, h_prime, unitary, rho, rho_coeffs, temperatures, epsilons })
    }

    /// Parses JSON text, naming the offending field on failure.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            let field = if path == "." { "<root>".to_string() } else { path };
            Error::config(field, format!("{inner} (line {}, column {})", inner.line(), inner.column()))
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Applies `key=value` overrides. Keys are dotted paths into the JSON
    /// form (`optimizer.seeds`, `perturbation.epsilons`); the shorthands
    /// `epsilons`, `seed_sequence`, `a` and `temperatures` are accepted.
    /// Values are parsed as JSON, falling back to a string.
    pub fn with_overrides<S: AsRef<str>>(&self, overrides: &[S]) -> Result<Self> {
        let mut v = serde_json::to_value(self).expect("config serializes");
        for o in overrides {
            let o = o.as_ref();
            let (key, raw) =
                o.split_once('=').ok_or_else(|| Error::config(format!("--set {o}"), "expected KEY=VALUE"))?;
            let key = key.trim();
            let path = match key {
                "epsilons" => "perturbation.epsilons",
                "seed_sequence" => "optimizer.seed_sequence",
                "a" => "initial_state.a",
                other => other,
            };
            let value: Value =
                serde_json::from_str(raw.trim()).unwrap_or_else(|_| Value::String(raw.trim().to_string()));
            set_path(&mut v, path, value).map_err(|m| Error::config(format!("--set {key}"), m))?;
        }
        Self::from_json(&v.to_string()).map_err(|e| match e {
            Error::Config { field, message } => Error::config(format!("--set {field}"), message),
            other => other,
        })
    }
}

fn set_path(root: &mut Value, path: &str, value: Value) -> std::result::Result<(), String> {
    let parts: Vec<&str> = path.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err("empty path segment".into());
    }
    let mut cur = root;
    for (n, p) in parts.iter().enumerate() {
        let obj = cur.as_object_mut().ok_or_else(|| format!("`{}` is not an object", parts[..n].join(".")))?;
        if n + 1 == parts.len() {
            obj.insert((*p).to_string(), value);
            return Ok(());
        }
        cur = obj.entry((*p).to_string()).or_insert_with(|| Value::Object(Default::default()));
    }
    unreachable!()
}

fn basis_ket(d: usize, k: usize) -> KetSpec {
    let mut v = vec![0.0; d];
    v[k] = 1.0;
    KetSpec::real(&v)
}

/// Entanglement study: qubit system and qubit bath, `σ_x` perturbation.
pub fn fig2_config() -> ExperimentConfig {
    let (s2, s1) = ((2.0f64 / 3.0).sqrt(), (1.0f64 / 3.0).sqrt());
    let m = MeasureKind::LogNegativity;
    ExperimentConfig {
        name: "fig2".into(),
        system: HamiltonianSpec::named("pauli_z"),
        bath: HamiltonianSpec::named("pauli_z"),
        temperatures: TemperatureGrid::Range { start: 3.0, stop: 5.0, points: 21 },
        unitary: UnitarySpec {
            kets: Some(vec![
                basis_ket(4, 0),
                basis_ket(4, 3),
                KetSpec::real(&[0.0, s2, s1, 0.0]),
                KetSpec::real(&[0.0, s1, -s2, 0.0]),
            ]),
            phases: Some(vec![1e5, 2e5, 3e5, 4e5]),
            ..Default::default()
        },
        initial_state: InitialStateSpec::population(0.9),
        perturbation: PerturbationConfig {
            hamiltonian: HamiltonianSpec::named("pauli_x"),
            epsilons: vec![0.1, 0.15, 0.2],
        },
        measures: vec![m],
        optimizer: OptimizerConfig::default(),
        expectations: vec![
            Expectation::Positive { measure: m },
            Expectation::NondecreasingInT { measure: m },
            Expectation::IncreasingInEpsilon { measure: m },
            Expectation::ControlZero { measure: m },
        ],
        include_control: true,
    }
}

/// Total-correlation study: qubit system, qutrit bath with a Gell-Mann
/// Hamiltonian, phases diagonal in the product eigenbasis.
pub fn fig3_config() -> ExperimentConfig {
    let (mi, dis) = (MeasureKind::MutualInformation, MeasureKind::Discord);
    ExperimentConfig {
        name: "fig3".into(),
        system: HamiltonianSpec::named("pauli_z"),
        bath: HamiltonianSpec::named("gell_mann_1"),
        temperatures: TemperatureGrid::Range { start: 0.02, stop: 1.0, points: 20 },
        unitary: UnitarySpec {
            basis: Some(PhaseBasis::Energy),
            phases: Some(vec![18e7, 30e7, 60e7, 80e7, 70e7, 90e7]),
            ..Default::default()
        },
        initial_state: InitialStateSpec::population(0.9),
        perturbation: PerturbationConfig { hamiltonian: HamiltonianSpec::named("pauli_x"), epsilons: vec![0.2] },
        measures: vec![mi, dis],
        optimizer: OptimizerConfig::default(),
        expectations: vec![
            Expectation::Positive { measure: mi },
            Expectation::Positive { measure: dis },
            Expectation::IncreasingAsTDecreases { measure: mi },
            Expectation::ControlZero { measure: mi },
            Expectation::ControlZero { measure: dis },
        ],
        include_control: true,
    }
}

/// Distance study: qubit system, qubit bath `10σ_z` at `T = 100`.
pub fn distance_config() -> ExperimentConfig {
    let m = MeasureKind::ChoiDistance;
    ExperimentConfig {
        name: "distance".into(),
        system: HamiltonianSpec::named("pauli_z"),
        bath: HamiltonianSpec::named_scaled("pauli_z", 10.0),
        temperatures: TemperatureGrid::List(vec![100.0]),
        unitary: UnitarySpec {
            kets: Some(vec![basis_ket(4, 0), basis_ket(4, 3), basis_ket(4, 1), basis_ket(4, 2)]),
            phases: Some(vec![1e4, 2e4, 3e4, 4e4]),
            ..Default::default()
        },
        initial_state: InitialStateSpec::population(0.9),
        perturbation: PerturbationConfig {
            hamiltonian: HamiltonianSpec::named("pauli_x"),
            epsilons: vec![0.01, 0.05, 0.1],
        },
        measures: vec![m],
        optimizer: OptimizerConfig::default(),
        expectations: vec![
            Expectation::AbsAtMost { measure: m, bound: 5e-4 },
            Expectation::BelowChiBound { measure: m, slack: 1e-6 },
            Expectation::Converged { measure: m },
            Expectation::ControlZero { measure: m },
        ],
        include_control: true,
    }
}

/// Built-in config by name.
pub fn builtin(name: &str) -> Option<ExperimentConfig> {
    match name {
        "fig2" => Some(fig2_config()),
        "fig3" => Some(fig3_config()),
        "distance" => Some(distance_config()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_validate_and_round_trip() {
        for c in [fig2_config(), fig3_config(), distance_config()] {
            c.validate().unwrap();
            assert_eq!(ExperimentConfig::from_json(&c.to_json()).unwrap(), c);
        }
    }

    #[test]
    fn errors_name_the_field() {
        let mut v: Value = serde_json::from_str(&fig2_config().to_json()).unwrap();
        v["optimizer"]["seedz"] = Value::from(3);
        match ExperimentConfig::from_json(&v.to_string()) {
            Err(Error::Config { field, .. }) => assert_eq!(field, "optimizer.seedz"),
            other => panic!("{other:?}"),
        }
        let mut c = fig2_config();
        c.initial_state = InitialStateSpec { re: Some(vec![vec![0.6, 0.0], vec![0.0, 0.6]]), ..Default::default() };
        assert!(matches!(c.validate(), Err(Error::Config { field, .. }) if field == "initial_state"));
        let mut c = fig2_config();
        c.system = HamiltonianSpec { re: Some(vec![vec![1.0, 2.0], vec![0.0, 1.0]]), ..Default::default() };
        match c.validate() {
            Err(Error::Config { field, message }) => {
                assert_eq!(field, "system");
                assert!(message.contains("asymmetry"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn overrides_apply_and_reject_unknown_keys() {
        let c = fig2_config().with_overrides(&["epsilons=[0.05]", "optimizer.seeds=3"]).unwrap();
        assert_eq!(c.perturbation.epsilons, vec![0.05]);
        assert_eq!(c.optimizer.seeds, 3);
        assert!(fig2_config().with_overrides(&["nonsense=1"]).is_err());
        assert!(fig2_config().with_overrides(&["no_equals_sign"]).is_err());
    }

    #[test]
    fn dimension_guard() {
        let mut c = fig2_config();
        c.system = HamiltonianSpec::named("identity_7");
        c.bath = HamiltonianSpec::named("identity_6");
        assert!(matches!(c.validate(), Err(Error::Config { .. })));
    }
}
