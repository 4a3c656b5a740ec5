//! Parameter sweeps over (measure, temperature, ε) and the checks run on
//! the resulting table.

use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::experiments::config::{Expectation, ExperimentConfig, Setup};
use crate::measures::{chi_lambda_bound, measure_value, MeasureKind, MeasureValue, MtoFamily};
use crate::optimize::OptimizerConfig;
use crate::thermal::{beta_from_temperature, gibbs_state, PerturbationSpec, ThermalOperation};

/// Slack on "nondecreasing" comparisons between adjacent temperatures.
pub const MONOTONE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub measure: MeasureKind,
    pub epsilon: f64,
    pub temperature: f64,
    pub unperturbed: f64,
    pub perturbed: f64,
    pub delta: f64,
    /// Whether every optimization behind the row converged.
    pub converged: Option<bool>,
    /// First-order bound on `|Δ|` (distance rows with ε > 0).
    pub chi_bound: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub measure: MeasureKind,
    pub passed: bool,
    /// Worst observed value of the checked quantity.
    pub value: f64,
    pub threshold: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub experiment: String,
    pub crate_version: String,
    /// SHA-256 of the compact JSON form of the config.
    pub config_sha256: String,
    pub started_unix: f64,
    pub finished_unix: f64,
    pub runtime_seconds: f64,
    pub threads: usize,
    pub seed_sequence: u64,
    pub epsilons: Vec<f64>,
    pub temperatures: Vec<f64>,
    pub optimizer: OptimizerConfig,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub config: ExperimentConfig,
    pub rows: Vec<SweepRow>,
    pub checks: Vec<CheckResult>,
    pub metadata: Metadata,
}

impl ExperimentOutput {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn rows_for(&self, measure: MeasureKind) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(move |r| r.measure == measure)
    }
}

/// Hex SHA-256 of the compact JSON form.
pub fn config_hash(config: &ExperimentConfig) -> String {
    let json = serde_json::to_string(config).expect("config serializes");
    Sha256::digest(json.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

fn unix_now() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0)
}

/// Thermal operation of the setup at temperature `t`.
pub fn operation_at(setup: &Setup, t: f64) -> Result<ThermalOperation> {
    let bath = gibbs_state(&setup.h_bath, beta_from_temperature(t)?)?;
    ThermalOperation::new(setup.unitary.clone(), bath, setup.h_sys.clone())
}

fn converged(v: &MeasureValue) -> Option<bool> {
    v.diagnostics.as_ref().map(|d| d.converged)
}

fn both(a: Option<bool>, b: Option<bool>) -> Option<bool> {
    match (a, b) {
        (None, None) => None,
        _ => Some(a.unwrap_or(true) && b.unwrap_or(true)),
    }
}

fn collect_notes(notes: &mut Vec<String>, v: &MeasureValue, t: f64, eps: f64) {
    if let Some(d) = &v.diagnostics {
        for n in &d.notes {
            notes.push(format!("{} T={t} ε={eps}: {n}", v.kind));
        }
    }
}

fn run_task(setup: &Setup, kind: MeasureKind, t: f64, cfg: &OptimizerConfig) -> Result<(Vec<SweepRow>, Vec<String>)> {
    let op = operation_at(setup, t)?;
    let mut notes = Vec::new();
    let base = measure_value(kind, &op, &setup.rho_coeffs, None, cfg)?;
    collect_notes(&mut notes, &base, t, 0.0);
    // the bound is linear in ε, so one maximization serves every ε
    let chi_unit = if kind == MeasureKind::ChoiDistance && setup.epsilons.iter().any(|&e| e > 0.0) {
        let family = MtoFamily::for_operation(&op)?;
        let b = chi_lambda_bound(&op, &family, &PerturbationSpec::new(setup.h_prime.clone(), 1.0)?, cfg)?;
        for n in &b.diagnostics.notes {
            notes.push(format!("{kind} T={t}: χ bound: {n}"));
        }
        Some(b.value)
    } else {
        None
    };
    let mut rows = Vec::with_capacity(setup.epsilons.len());
    for &eps in &setup.epsilons {
        let (pert_value, chi) = if eps == 0.0 {
            (base.clone(), None)
        } else {
            let pert = PerturbationSpec::new(setup.h_prime.clone(), eps)?;
            let v = measure_value(kind, &op, &setup.rho_coeffs, Some(&pert), cfg)?;
            collect_notes(&mut notes, &v, t, eps);
            (v, chi_unit.map(|c| c * eps))
        };
        rows.push(SweepRow {
            measure: kind,
            epsilon: eps,
            temperature: t,
            unperturbed: base.value,
            perturbed: pert_value.value,
            delta: pert_value.value - base.value,
            converged: both(converged(&base), converged(&pert_value)),
            chi_bound: chi,
        });
    }
    Ok((rows, notes))
}

/// Runs every (measure, temperature) task in parallel and evaluates the
/// config's expectations on the table.
pub fn run(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    let setup = config.validate()?;
    let started = unix_now();
    let clock = Instant::now();
    let tasks: Vec<(MeasureKind, f64)> =
        config.measures.iter().flat_map(|&m| setup.temperatures.iter().map(move |&t| (m, t))).collect();
    let results =
        tasks.par_iter().map(|&(m, t)| run_task(&setup, m, t, &config.optimizer)).collect::<Result<Vec<_>>>()?;
    let mut notes = Vec::new();
    if !setup.unitary.energy_preserving() {
        notes.push("the unitary does not commute with the total Hamiltonian; this is not a thermal operation".into());
    }
    let mut rows = Vec::new();
    for (r, n) in results {
        rows.extend(r);
        notes.extend(n);
    }
    rows.sort_by(|a, b| {
        a.measure.cmp(&b.measure).then(a.epsilon.total_cmp(&b.epsilon)).then(a.temperature.total_cmp(&b.temperature))
    });
    let checks = config.expectations.iter().map(|x| evaluate_check(x, &rows)).collect();
    let metadata = Metadata {
        experiment: config.name.clone(),
        crate_version: env!("CARGO_PKG_VERSION").into(),
        config_sha256: config_hash(config),
        started_unix: started,
        finished_unix: unix_now(),
        runtime_seconds: clock.elapsed().as_secs_f64(),
        threads: rayon::current_num_threads(),
        seed_sequence: config.optimizer.seed_sequence,
        epsilons: setup.epsilons.clone(),
        temperatures: setup.temperatures.clone(),
        optimizer: config.optimizer.clone(),
        notes,
    };
    Ok(ExperimentOutput { config: config.clone(), rows, checks, metadata })
}

fn group_by<'a>(rows: &[&'a SweepRow], key: impl Fn(&SweepRow) -> f64) -> Vec<Vec<&'a SweepRow>> {
    let mut keys: Vec<f64> = rows.iter().map(|r| key(r)).collect();
    keys.sort_by(f64::total_cmp);
    keys.dedup();
    keys.into_iter().map(|k| rows.iter().copied().filter(|r| key(r) == k).collect()).collect()
}

/// Smallest `next − prev` over adjacent rows of each group, ordered by `order`.
fn min_step(groups: &[Vec<&SweepRow>], order: impl Fn(&SweepRow) -> f64, descending: bool) -> Option<(f64, String)> {
    let mut worst: Option<(f64, String)> = None;
    for g in groups {
        let mut g = g.clone();
        g.sort_by(|a, b| order(a).total_cmp(&order(b)));
        if descending {
            g.reverse();
        }
        for w in g.windows(2) {
            let step = w[1].delta - w[0].delta;
            if worst.as_ref().is_none_or(|(s, _)| step < *s) {
                let where_ =
                    format!("ε={} T={} → ε={} T={}", w[0].epsilon, w[0].temperature, w[1].epsilon, w[1].temperature);
                worst = Some((step, where_));
            }
        }
    }
    worst
}

/// Evaluates one expectation against the sweep table.
pub fn evaluate_check(x: &Expectation, rows: &[SweepRow]) -> CheckResult {
    let m = x.measure();
    let mine: Vec<&SweepRow> = rows.iter().filter(|r| r.measure == m).collect();
    let perturbed: Vec<&SweepRow> = mine.iter().copied().filter(|r| r.epsilon > 0.0).collect();
    let control: Vec<&SweepRow> = mine.iter().copied().filter(|r| r.epsilon == 0.0).collect();
    let result = |passed: bool, value: f64, threshold: f64, detail: String| CheckResult {
        name: x.name(),
        measure: m,
        passed,
        value,
        threshold,
        detail,
    };
    let empty = |what: &str| result(false, f64::NAN, f64::NAN, format!("no {what} rows to check"));
    let extreme = |set: &[&SweepRow], f: &dyn Fn(&SweepRow) -> f64, max: bool| -> (f64, String) {
        let best = set
            .iter()
            .copied()
            .max_by(|a, b| if max { f(a).total_cmp(&f(b)) } else { f(b).total_cmp(&f(a)) })
            .expect("non-empty");
        (f(best), format!("at ε={} T={}", best.epsilon, best.temperature))
    };
    match x {
        Expectation::Positive { .. } => {
            if perturbed.is_empty() {
                return empty("perturbed");
            }
            let (v, at) = extreme(&perturbed, &|r| r.delta, false);
            result(v > 0.0, v, 0.0, format!("smallest Δ {v:e} {at}"))
        }
        Expectation::NondecreasingInT { .. } => {
            match min_step(&group_by(&perturbed, |r| r.epsilon), |r| r.temperature, false) {
                None => empty("adjacent-temperature"),
                Some((v, at)) => result(v >= -MONOTONE_TOL, v, -MONOTONE_TOL, format!("smallest step {v:e} over {at}")),
            }
        }
        Expectation::IncreasingAsTDecreases { .. } => {
            match min_step(&group_by(&perturbed, |r| r.epsilon), |r| r.temperature, true) {
                None => empty("adjacent-temperature"),
                Some((v, at)) => result(v > 0.0, v, 0.0, format!("smallest step {v:e} over {at}")),
            }
        }
        Expectation::IncreasingInEpsilon { .. } => {
            match min_step(&group_by(&perturbed, |r| r.temperature), |r| r.epsilon, false) {
                None => empty("adjacent-ε"),
                Some((v, at)) => result(v > 0.0, v, 0.0, format!("smallest step {v:e} over {at}")),
            }
        }
        Expectation::AbsAtMost { bound, .. } => {
            if perturbed.is_empty() {
                return empty("perturbed");
            }
            let (v, at) = extreme(&perturbed, &|r| r.delta.abs(), true);
            result(v <= *bound, v, *bound, format!("largest |Δ| {v:e} {at}"))
        }
        Expectation::BelowChiBound { slack, .. } => {
            if perturbed.is_empty() {
                return empty("perturbed");
            }
            if let Some(r) = perturbed.iter().find(|r| r.chi_bound.is_none()) {
                return result(false, f64::NAN, *slack, format!("no χ bound at ε={} T={}", r.epsilon, r.temperature));
            }
            let (v, at) = extreme(&perturbed, &|r| r.delta.abs() - r.chi_bound.unwrap_or(f64::NAN), true);
            result(v <= *slack, v, *slack, format!("largest |Δ| − χ {v:e} {at}"))
        }
        Expectation::Converged { .. } => {
            if mine.is_empty() {
                return empty("");
            }
            let bad = mine.iter().filter(|r| r.converged != Some(true)).count();
            result(bad == 0, bad as f64, 0.0, format!("{bad} of {} rows without a converged optimum", mine.len()))
        }
        Expectation::ControlZero { .. } => {
            if control.is_empty() {
                return empty("ε = 0");
            }
            let (v, at) = extreme(&control, &|r| r.delta.abs(), true);
            result(v == 0.0, v, 0.0, format!("largest |Δ| {v:e} {at}"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::config::fig2_config;

    fn row(eps: f64, t: f64, delta: f64) -> SweepRow {
        SweepRow {
            measure: MeasureKind::LogNegativity,
            epsilon: eps,
            temperature: t,
            unperturbed: 0.0,
            perturbed: delta,
            delta,
            converged: None,
            chi_bound: None,
        }
    }

    #[test]
    fn checks_on_a_synthetic_table() {
        let m = MeasureKind::LogNegativity;
        let rows =
            vec![row(0.0, 1.0, 0.0), row(0.1, 1.0, 0.1), row(0.1, 2.0, 0.2), row(0.2, 1.0, 0.3), row(0.2, 2.0, 0.25)];
        assert!(evaluate_check(&Expectation::Positive { measure: m }, &rows).passed);
        assert!(evaluate_check(&Expectation::ControlZero { measure: m }, &rows).passed);
        let c = evaluate_check(&Expectation::NondecreasingInT { measure: m }, &rows);
        assert!(!c.passed);
        assert!((c.value + 0.05).abs() < 1e-12);
        assert!(evaluate_check(&Expectation::IncreasingInEpsilon { measure: m }, &rows).passed);
        assert!(!evaluate_check(&Expectation::AbsAtMost { measure: m, bound: 0.2 }, &rows).passed);
        assert!(!evaluate_check(&Expectation::Converged { measure: m }, &rows).passed);
        assert!(!evaluate_check(&Expectation::Positive { measure: MeasureKind::Discord }, &rows).passed);
    }

    #[test]
    fn small_fig2_run_has_zero_control_and_sorted_rows() {
        let c = fig2_config().with_overrides(&[r#"temperatures={"start":3.0,"stop":5.0,"points":3}"#]).unwrap();
        let out = run(&c).unwrap();
        assert_eq!(out.rows.len(), 3 * 4);
        assert!(out.rows.windows(2).all(|w| (w[0].epsilon, w[0].temperature) <= (w[1].epsilon, w[1].temperature)));
        assert_eq!(out.metadata.config_sha256.len(), 64);
        assert!(out.checks.iter().any(|c| c.name.ends_with("control_zero") && c.passed));
    }
}
