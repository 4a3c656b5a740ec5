//! Randomized property sweeps and first-order slope tests.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::experiments::config::{fig2_config, fig3_config, ExperimentConfig};
use crate::experiments::random::{random_density, random_hermitian, random_phases, random_traceless, random_unitary};
use crate::experiments::sweep::operation_at;
use crate::linalg::{eigvalsh, entropy_of, partial_trace_op, partial_transpose_op, Matrix, Subsystem};
use crate::measures::{expansion_lemma_residual, log_negativity, theta_lambda, MtoFamily};
use crate::thermal::{
    beta_from_temperature, build_block_unitary, first_order_correction, gibbs_state, mto_check, mto_check_operator,
    product_eigenbasis, state_from_coefficients, total_hamiltonian, BlockParams, EnergyBlockUnitary, Hamiltonian,
    PerturbationSpec, ThermalOperation,
};
use crate::{ComplexMatrix, DensityMatrix};

/// Default seed of the property sweeps.
pub const PROPERTY_SEED: u64 = 0x7e57_5eed;
/// Accepted range of `r(ε)/r(ε/2)` for an `O(ε²)` residual.
pub const SLOPE_RATIO_RANGE: (f64, f64) = (3.2, 4.8);
/// Step sizes of the slope tests: the ratio uses the first two.
pub const SLOPE_EPSILONS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub name: String,
    pub trials: usize,
    pub failures: usize,
    /// Worst value of the checked quantity.
    pub worst: f64,
    pub threshold: f64,
    pub passed: bool,
    pub detail: String,
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn random_temperature(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

fn sorted_spectrum(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let mut v = eigvalsh(&m.hermitian_part())?;
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Phase-diagonal unitaries in the product eigenbasis cannot create
/// entanglement: the partial transpose of the joint output has the joint's
/// own spectrum. `trials` runs each in 2⊗2 and 2⊗3.
pub fn partial_transpose_sweep(trials: usize, seed: u64) -> Result<PropertyReport> {
    const SPECTRUM_TOL: f64 = 1e-10;
    const EN_TOL: f64 = 1e-9;
    let mut rng = rng_for(seed, 1);
    let (mut worst_spec, mut worst_en, mut failures) = (0.0f64, 0.0f64, 0);
    for db in [2usize, 3] {
        for _ in 0..trials {
            let hs = Hamiltonian::new(random_hermitian(&mut rng, 2))?;
            let hb = Hamiltonian::new(random_hermitian(&mut rng, db))?;
            let u = EnergyBlockUnitary::phase_diagonal(&hs, &hb, &random_phases(&mut rng, 2 * db))?;
            let t = random_temperature(&mut rng, 0.2, 5.0);
            let op = ThermalOperation::new(u, gibbs_state(&hb, beta_from_temperature(t)?)?, hs)?;
            let rho = DensityMatrix::single(random_density(&mut rng, 2))?;
            let joint = op.apply(&rho)?.joint;
            let pt = partial_transpose_op(joint.matrix(), (2, db), Subsystem::First)?;
            let dev = sorted_spectrum(joint.matrix())?
                .iter()
                .zip(sorted_spectrum(&pt)?)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            let en = log_negativity(&joint)?.value;
            worst_spec = worst_spec.max(dev);
            worst_en = worst_en.max(en);
            if dev > SPECTRUM_TOL || en > EN_TOL {
                failures += 1;
            }
        }
    }
    Ok(PropertyReport {
        name: "phase_diagonal_no_entanglement".into(),
        trials: 2 * trials,
        failures,
        worst: worst_spec,
        threshold: SPECTRUM_TOL,
        passed: failures == 0,
        detail: format!(
            "max spectrum deviation {worst_spec:e} (≤ {SPECTRUM_TOL:e}), max E_N {worst_en:e} (≤ {EN_TOL:e})"
        ),
    })
}

fn random_bohr_hamiltonian(rng: &mut ChaCha8Rng, d: usize) -> Result<Hamiltonian> {
    loop {
        let h = Hamiltonian::new(random_hermitian(rng, d))?;
        let e = h.energies();
        let min_gap = e.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        if h.non_degenerate_bohr_spectrum() && min_gap > 0.05 {
            return Ok(h);
        }
    }
}

/// Direct (product-output) and transition-amplitude Markovianity verdicts
/// agree at `1e-9`, for random inputs and for first-order perturbed inputs.
/// Half the unitaries are drawn from the Markovian family.
pub fn mto_equivalence_sweep(trials: usize, seed: u64) -> Result<PropertyReport> {
    const TOL: f64 = 1e-9;
    const EPS: f64 = 0.05;
    let dims = [(2usize, 2usize), (2, 3), (3, 2), (3, 3)];
    let mut rng = rng_for(seed, 2);
    let (mut failures, mut markovian) = (0, 0);
    let (mut worst_in, mut best_out) = (0.0f64, f64::INFINITY);
    for k in 0..trials {
        let (ds, db) = dims[k % dims.len()];
        let hs = random_bohr_hamiltonian(&mut rng, ds)?;
        let hb = random_bohr_hamiltonian(&mut rng, db)?;
        let bath = gibbs_state(&hb, beta_from_temperature(random_temperature(&mut rng, 0.5, 3.0))?)?;
        let op = if k % 2 == 0 {
            let family = MtoFamily::markovian(&hs, &bath)?;
            let free = random_phases(&mut rng, family.free_dim());
            family.operation(&free)?
        } else {
            let u = EnergyBlockUnitary::phase_diagonal(&hs, &hb, &random_phases(&mut rng, ds * db))?;
            ThermalOperation::new(u, bath, hs.clone())?
        };
        let rho = random_density(&mut rng, ds);
        let pert = PerturbationSpec::new(Hamiltonian::new(random_hermitian(&mut rng, ds))?, EPS)?;
        let coeffs = crate::thermal::coefficients_of(&hs, &rho);
        let tilde = first_order_correction(&coeffs, &hs, pert.h_prime())?;
        let first = &rho + &tilde.scale_real(EPS);

        let a = mto_check(&op, &DensityMatrix::single(rho)?, TOL)?;
        let b = mto_check_operator(&op, &first, TOL)?;
        if a.is_markovian {
            markovian += 1;
        }
        for r in [&a, &b] {
            if r.is_markovian {
                worst_in = worst_in.max(r.joint_product_deviation);
            } else {
                best_out = best_out.min(r.joint_product_deviation);
            }
        }
        if !a.verdicts_agree() || !b.verdicts_agree() || a.is_markovian != b.is_markovian {
            failures += 1;
        }
    }
    Ok(PropertyReport {
        name: "mto_verdict_equivalence".into(),
        trials,
        failures,
        worst: failures as f64,
        threshold: 0.0,
        passed: failures == 0,
        detail: format!(
            "{markovian} Markovian of {trials}; first-order inputs at ε = {EPS}; \
             direct deviation ≤ {worst_in:.2e} when Markovian, ≥ {best_out:.2e} otherwise (threshold {TOL:e})"
        ),
    })
}

/// Groups of product eigenkets with equal total energy.
fn energy_groups(hs: &Hamiltonian, hb: &Hamiltonian) -> Vec<Vec<crate::Ket>> {
    let mut groups: Vec<(f64, Vec<crate::Ket>)> = Vec::new();
    for (_, _, e, ket) in product_eigenbasis(hs, hb) {
        match groups.iter_mut().find(|(e0, _)| (e0 - e).abs() < 1e-9) {
            Some((_, g)) => g.push(ket),
            None => groups.push((e, vec![ket])),
        }
    }
    groups.into_iter().map(|(_, g)| g).collect()
}

/// Random energy-preserving unitaries on degenerate ladder spectra fix the
/// system Gibbs state and map states to valid joints.
pub fn fixed_point_sweep(trials: usize, seed: u64) -> Result<PropertyReport> {
    const TOL: f64 = 1e-9;
    let mut rng = rng_for(seed, 3);
    let (mut worst_fixed, mut worst_valid, mut failures) = (0.0f64, 0.0f64, 0);
    for k in 0..trials {
        let (ds, db) = [(2usize, 2usize), (2, 3), (3, 3)][k % 3];
        let omega = 0.5 + 1.5 * rng.random::<f64>();
        let ladder = |d: usize, v: &ComplexMatrix| -> Result<Hamiltonian> {
            let diag = Matrix::from_real_diagonal(&(0..d).map(|n| omega * n as f64).collect::<Vec<_>>());
            Hamiltonian::new(v.conjugate(&diag).hermitian_part())
        };
        let hs = ladder(ds, &random_unitary(&mut rng, ds))?;
        let hb = ladder(db, &random_unitary(&mut rng, db))?;
        let params: Vec<BlockParams> = energy_groups(&hs, &hb)
            .into_iter()
            .map(|kets| {
                let n = kets.len();
                BlockParams::Unitary { kets, matrix: random_unitary(&mut rng, n) }
            })
            .collect();
        let u = build_block_unitary(&total_hamiltonian(&hs, &hb), &params)?;
        let beta = beta_from_temperature(random_temperature(&mut rng, 0.3, 4.0))?;
        let op = ThermalOperation::new(u, gibbs_state(&hb, beta)?, hs.clone())?;
        let tau_s = gibbs_state(&hs, beta)?;
        let out = op.apply_operator(tau_s.state().matrix())?;
        let fixed = out.max_abs_diff(tau_s.state().matrix());

        let mut valid = 0.0f64;
        for input in [tau_s.state().matrix().clone(), random_density(&mut rng, ds)] {
            let joint = op.joint_operator(&input)?;
            let min_eig = eigvalsh(&joint.hermitian_part())?.into_iter().fold(f64::INFINITY, f64::min);
            let defect = (-min_eig).max(0.0).max((joint.trace().re - 1.0).abs()).max(joint.hermitian_asymmetry());
            valid = valid.max(defect);
            if DensityMatrix::new_with_tol(joint, vec![ds, db], TOL).is_err() {
                valid = valid.max(f64::INFINITY);
            }
        }
        worst_fixed = worst_fixed.max(fixed);
        worst_valid = worst_valid.max(valid);
        if fixed > TOL || valid > TOL {
            failures += 1;
        }
    }
    Ok(PropertyReport {
        name: "gibbs_fixed_point".into(),
        trials,
        failures,
        worst: worst_fixed,
        threshold: TOL,
        passed: failures == 0,
        detail: format!("max |Λ(τ_S) − τ_S| {worst_fixed:e}; max joint validity defect {worst_valid:e} (≤ {TOL:e})"),
    })
}

fn mutual_information_op(m: &ComplexMatrix, dims: (usize, usize)) -> Result<f64> {
    let sa = entropy_of(&partial_trace_op(m, dims, Subsystem::First)?)?;
    let sb = entropy_of(&partial_trace_op(m, dims, Subsystem::Second)?)?;
    Ok(sa + sb - entropy_of(m)?)
}

/// Residuals `r(ε) = |I^ε − I − εθ_Λ|` at [`SLOPE_EPSILONS`] for a
/// config at temperature `t`, with first-order perturbed inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeReport {
    pub label: String,
    pub theta: f64,
    pub residuals: Vec<(f64, f64)>,
    /// `r(1e-2)/r(5e-3)`
    pub ratio: f64,
    pub passed: bool,
}

pub fn slope_test(config: &ExperimentConfig, t: f64) -> Result<SlopeReport> {
    let setup = config.validate()?;
    let op = operation_at(&setup, t)?;
    let h = op.h_sys();
    let pert = PerturbationSpec::new(setup.h_prime.clone(), 1.0)?;
    let theta = theta_lambda(&op, &setup.rho_coeffs, &pert)?.value;
    let rho = state_from_coefficients(h, &setup.rho_coeffs);
    let tilde = first_order_correction(&setup.rho_coeffs, h, pert.h_prime())?;
    let base = mutual_information_op(&op.joint_operator(&rho)?.hermitian_part(), op.dims())?;
    let residuals = SLOPE_EPSILONS
        .iter()
        .map(|&eps| {
            let x = &rho + &tilde.scale_real(eps);
            let i_eps = mutual_information_op(&op.joint_operator(&x)?.hermitian_part(), op.dims())?;
            Ok((eps, (i_eps - base - eps * theta).abs()))
        })
        .collect::<Result<Vec<_>>>()?;
    let ratio = residuals[0].1 / residuals[1].1;
    Ok(SlopeReport {
        label: format!("{} T={t}", config.name),
        theta,
        residuals,
        ratio,
        passed: (SLOPE_RATIO_RANGE.0..=SLOPE_RATIO_RANGE.1).contains(&ratio),
    })
}

/// Slope test on the entanglement config at `T = 4` and the
/// total-correlation config at `T = 0.5`.
pub fn slope_suite() -> Result<PropertyReport> {
    let reports = [slope_test(&fig2_config(), 4.0)?, slope_test(&fig3_config(), 0.5)?];
    let failures = reports.iter().filter(|r| !r.passed).count();
    let worst = reports.iter().map(|r| (r.ratio - 4.0).abs()).fold(0.0, f64::max);
    Ok(PropertyReport {
        name: "mutual_information_first_order".into(),
        trials: reports.len(),
        failures,
        worst,
        threshold: 0.8,
        passed: failures == 0,
        detail: reports
            .iter()
            .map(|r| format!("{}: θ = {:.6e}, ratio {:.4}", r.label, r.theta, r.ratio))
            .collect::<Vec<_>>()
            .join("; "),
    })
}

/// Expansion-lemma residual ratios on `pairs` random full-rank `A` and
/// traceless `B`.
pub fn expansion_lemma_sweep(pairs: usize, seed: u64) -> Result<PropertyReport> {
    let mut rng = rng_for(seed, 5);
    let (mut lo, mut hi, mut failures) = (f64::INFINITY, f64::NEG_INFINITY, 0);
    for k in 0..pairs {
        let d = 2 + k % 3;
        let mixed = Matrix::identity(d).scale_real(0.5 / d as f64);
        let a = &random_density(&mut rng, d).scale_real(0.5) + &mixed;
        let b = random_traceless(&mut rng, d, 0.3);
        let r0 = expansion_lemma_residual(&a, &b, SLOPE_EPSILONS[0])?;
        let r1 = expansion_lemma_residual(&a, &b, SLOPE_EPSILONS[1])?;
        let ratio = r0 / r1;
        lo = lo.min(ratio);
        hi = hi.max(ratio);
        if !(SLOPE_RATIO_RANGE.0..=SLOPE_RATIO_RANGE.1).contains(&ratio) {
            failures += 1;
        }
    }
    Ok(PropertyReport {
        name: "expansion_lemma_second_order".into(),
        trials: pairs,
        failures,
        worst: (lo - 4.0).abs().max((hi - 4.0).abs()),
        threshold: 0.8,
        passed: failures == 0,
        detail: format!("ratio range [{lo:.4}, {hi:.4}] (accepted [{}, {}])", SLOPE_RATIO_RANGE.0, SLOPE_RATIO_RANGE.1),
    })
}

/// Every property sweep at its default size.
pub fn run_property_suite(seed: u64) -> Result<Vec<PropertyReport>> {
    Ok(vec![
        partial_transpose_sweep(100, seed)?,
        mto_equivalence_sweep(50, seed)?,
        fixed_point_sweep(50, seed)?,
        slope_suite()?,
        expansion_lemma_sweep(20, seed)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweeps_pass() {
        assert!(partial_transpose_sweep(5, 1).unwrap().passed);
        assert!(mto_equivalence_sweep(8, 1).unwrap().passed);
        assert!(fixed_point_sweep(6, 1).unwrap().passed);
        assert!(expansion_lemma_sweep(4, 1).unwrap().passed);
    }
}
