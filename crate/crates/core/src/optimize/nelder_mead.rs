//! Grid-seeded multi-start Nelder–Mead over a box.
//!
//! All work happens in normalized coordinates `u ∈ [0, 1]^n`. Periodic
//! dimensions wrap on evaluation; bounded ones are clamped. Candidate starts
//! are the points of a regular grid plus a reproducible pseudo-random batch;
//! the best `seeds` of them, at least one grid cell apart, are refined in
//! parallel and reduced in start order.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Box side for one coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bound<T> {
    pub lo: T,
    pub hi: T,
    pub periodic: bool,
}

impl<T: Real> Bound<T> {
    pub fn new(lo: T, hi: T) -> Self {
        Self { lo, hi, periodic: false }
    }

    pub fn periodic(lo: T, hi: T) -> Self {
        Self { lo, hi, periodic: true }
    }

    /// `[0, 2π)` with wrap-around.
    pub fn angle() -> Self {
        Self::periodic(T::zero(), T::PI() + T::PI())
    }

    fn to_x(self, u: T) -> T {
        let u = if self.periodic { u - u.floor() } else { u.max(T::zero()).min(T::one()) };
        self.lo + u * (self.hi - self.lo)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerConfig {
    /// Number of local refinements.
    pub seeds: usize,
    /// Grid points per dimension.
    pub grid_resolution: usize,
    /// Cap on the total grid size; the per-dimension resolution shrinks to fit.
    pub max_grid_points: usize,
    /// Iteration cap per start.
    pub max_iterations: usize,
    /// Convergence threshold on the spread of simplex values.
    pub ftol: f64,
    /// Convergence threshold on the simplex diameter (normalized units).
    pub xtol: f64,
    pub reflection: f64,
    pub expansion: f64,
    pub contraction: f64,
    pub shrink: f64,
    /// Seed of the pseudo-random start batch.
    pub seed_sequence: u64,
    /// Keep one trace entry per start.
    pub keep_trace: bool,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            seeds: 40,
            grid_resolution: 24,
            max_grid_points: 20_000,
            max_iterations: 4_000,
            ftol: 1e-8,
            xtol: 1e-7,
            reflection: 1.0,
            expansion: 2.0,
            contraction: 0.5,
            shrink: 0.5,
            seed_sequence: 0,
            keep_trace: false,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidOptimizer(m.to_string()));
        if self.seeds == 0 {
            return bad("seeds must be ≥ 1");
        }
        if self.grid_resolution < 2 {
            return bad("grid_resolution must be ≥ 2");
        }
        if !(self.ftol > 0.0) || !(self.xtol > 0.0) {
            return bad("ftol and xtol must be > 0");
        }
        if self.max_iterations == 0 {
            return bad("max_iterations must be ≥ 1");
        }
        if !(self.reflection > 0.0)
            || !(self.expansion > 1.0)
            || !(self.contraction > 0.0 && self.contraction < 1.0)
            || !(self.shrink > 0.0 && self.shrink < 1.0)
        {
            return bad("simplex coefficients need reflection > 0, expansion > 1, 0 < contraction, shrink < 1");
        }
        Ok(())
    }
}

/// Outcome of one local refinement.
#[derive(Debug, Clone, PartialEq)]
pub struct StartTrace<T> {
    pub start: Vec<T>,
    pub start_value: T,
    pub point: Vec<T>,
    pub value: T,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult<T> {
    pub value: T,
    pub point: Vec<T>,
    /// Whether the start that produced the best value met both tolerances.
    pub converged: bool,
    pub evaluations: usize,
    pub starts: usize,
    pub trace: Vec<StartTrace<T>>,
}

/// Minimizes `f` over the box `bounds`.
pub fn minimize<T, F>(f: F, bounds: &[Bound<T>], cfg: &OptimizerConfig) -> Result<OptimizationResult<T>>
where
    T: Real,
    F: Fn(&[T]) -> T + Sync,
{
    cfg.validate()?;
    let n = bounds.len();
    if n == 0 {
        return Err(Error::InvalidOptimizer("no dimensions".into()));
    }
    for (k, b) in bounds.iter().enumerate() {
        if !b.lo.is_finite() || !b.hi.is_finite() || !(b.hi > b.lo) {
            return Err(Error::InvalidOptimizer(format!("bound {k} is not a finite interval with lo < hi")));
        }
    }

    let eval = |u: &[T]| -> T {
        let x: Vec<T> = u.iter().zip(bounds).map(|(u, b)| b.to_x(*u)).collect();
        let v = f(&x);
        if v.is_nan() {
            T::infinity()
        } else {
            v
        }
    };

    let res = grid_resolution(cfg, n);
    let mut candidates = grid_points::<T>(bounds, res);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed_sequence);
    for _ in 0..cfg.seeds {
        candidates.push((0..n).map(|_| T::lit(rng.random::<f64>())).collect());
    }
    let values: Vec<T> = candidates.par_iter().map(|u| eval(u)).collect();
    let mut evaluations = candidates.len();

    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b)));
    let cell = T::one() / T::from_usize(res).unwrap();
    let mut starts: Vec<usize> = Vec::with_capacity(cfg.seeds);
    for &c in &order {
        if starts.len() == cfg.seeds {
            break;
        }
        let far = starts.iter().all(|&s| distance(&candidates[c], &candidates[s], bounds) >= cell * T::lit(0.999));
        if far {
            starts.push(c);
        }
    }

    let runs: Vec<(Run<T>, usize)> =
        starts.par_iter().map(|&s| (refine(&eval, &candidates[s], bounds, cell, cfg), s)).collect();

    let mut best: Option<(usize, &Run<T>)> = None;
    for (k, (run, _)) in runs.iter().enumerate() {
        evaluations += run.evaluations;
        if best.is_none_or(|(_, b)| run.value < b.value) {
            best = Some((k, run));
        }
    }
    let (_, best_run) = best.expect("at least one start");
    let to_x = |u: &[T]| -> Vec<T> { u.iter().zip(bounds).map(|(u, b)| b.to_x(*u)).collect() };
    let trace = if cfg.keep_trace {
        runs.iter()
            .map(|(run, s)| StartTrace {
                start: to_x(&candidates[*s]),
                start_value: values[*s],
                point: to_x(&run.point),
                value: run.value,
                iterations: run.iterations,
                converged: run.converged,
            })
            .collect()
    } else {
        Vec::new()
    };
    Ok(OptimizationResult {
        value: best_run.value,
        point: to_x(&best_run.point),
        converged: best_run.converged,
        evaluations,
        starts: runs.len(),
        trace,
    })
}

fn grid_resolution(cfg: &OptimizerConfig, n: usize) -> usize {
    let mut res = cfg.grid_resolution;
    while res > 2 && (res as f64).powi(n as i32) > cfg.max_grid_points as f64 {
        res -= 1;
    }
    res
}

fn grid_points<T: Real>(bounds: &[Bound<T>], res: usize) -> Vec<Vec<T>> {
    let n = bounds.len();
    let total = res.pow(n as u32);
    let r = T::from_usize(res).unwrap();
    let r1 = T::from_usize(res - 1).unwrap();
    (0..total)
        .map(|mut idx| {
            let mut u = vec![T::zero(); n];
            for k in (0..n).rev() {
                let i = T::from_usize(idx % res).unwrap();
                idx /= res;
                u[k] = if bounds[k].periodic { i / r } else { i / r1 };
            }
            u
        })
        .collect()
}

/// Chebyshev distance in normalized coordinates, periodic-aware.
fn distance<T: Real>(a: &[T], b: &[T], bounds: &[Bound<T>]) -> T {
    a.iter().zip(b).zip(bounds).fold(T::zero(), |m, ((x, y), bd)| {
        let mut d = (*x - *y).abs();
        if bd.periodic {
            d = d - d.floor();
            d = d.min(T::one() - d);
        }
        m.max(d)
    })
}

struct Run<T> {
    point: Vec<T>,
    value: T,
    iterations: usize,
    evaluations: usize,
    converged: bool,
}

fn refine<T: Real>(
    eval: &(dyn Fn(&[T]) -> T + Sync),
    start: &[T],
    bounds: &[Bound<T>],
    step: T,
    cfg: &OptimizerConfig,
) -> Run<T> {
    let n = start.len();
    let project = |u: &mut Vec<T>| {
        for (x, b) in u.iter_mut().zip(bounds) {
            if !b.periodic {
                *x = x.max(T::zero()).min(T::one());
            }
        }
    };
    let (alpha, gamma, rho, sigma) =
        (T::lit(cfg.reflection), T::lit(cfg.expansion), T::lit(cfg.contraction), T::lit(cfg.shrink));
    let ftol = T::lit(cfg.ftol);
    let xtol = T::lit(cfg.xtol);

    let mut simplex: Vec<Vec<T>> = vec![start.to_vec()];
    for k in 0..n {
        let mut v = start.to_vec();
        if !bounds[k].periodic && v[k] + step > T::one() {
            v[k] -= step;
        } else {
            v[k] += step;
        }
        simplex.push(v);
    }
    let mut fv: Vec<T> = simplex.iter().map(|v| eval(v)).collect();
    let mut evaluations = n + 1;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < cfg.max_iterations {
        let mut idx: Vec<usize> = (0..=n).collect();
        idx.sort_by(|&a, &b| fv[a].partial_cmp(&fv[b]).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b)));
        simplex = idx.iter().map(|&i| simplex[i].clone()).collect();
        fv = idx.iter().map(|&i| fv[i]).collect();

        let spread = fv[n] - fv[0];
        let diameter = simplex[1..].iter().fold(T::zero(), |m, v| {
            m.max(v.iter().zip(&simplex[0]).fold(T::zero(), |mm, (a, b)| mm.max((*a - *b).abs())))
        });
        if spread <= ftol && diameter <= xtol {
            converged = true;
            break;
        }
        iterations += 1;

        let nt = T::from_usize(n).unwrap();
        let centroid: Vec<T> = (0..n).map(|k| simplex[..n].iter().fold(T::zero(), |s, v| s + v[k]) / nt).collect();
        let along = |t: T| -> Vec<T> {
            let mut p: Vec<T> = centroid.iter().zip(&simplex[n]).map(|(c, w)| *c + t * (*c - *w)).collect();
            project(&mut p);
            p
        };

        let xr = along(alpha);
        let fr = eval(&xr);
        evaluations += 1;
        if fr < fv[0] {
            let xe = along(alpha * gamma);
            let fe = eval(&xe);
            evaluations += 1;
            if fe < fr {
                simplex[n] = xe;
                fv[n] = fe;
            } else {
                simplex[n] = xr;
                fv[n] = fr;
            }
            continue;
        }
        if fr < fv[n - 1] {
            simplex[n] = xr;
            fv[n] = fr;
            continue;
        }
        let (xc, fc) = if fr < fv[n] {
            let xc = along(alpha * rho);
            let fc = eval(&xc);
            (xc, fc)
        } else {
            let xc = along(-rho);
            let fc = eval(&xc);
            (xc, fc)
        };
        evaluations += 1;
        if fc < fv[n].min(fr) {
            simplex[n] = xc;
            fv[n] = fc;
            continue;
        }
        let best = simplex[0].clone();
        for i in 1..=n {
            let mut v: Vec<T> = best.iter().zip(&simplex[i]).map(|(b, x)| *b + sigma * (*x - *b)).collect();
            project(&mut v);
            fv[i] = eval(&v);
            simplex[i] = v;
        }
        evaluations += n;
    }

    let k = (0..=n)
        .min_by(|&a, &b| fv[a].partial_cmp(&fv[b]).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b)))
        .unwrap();
    Run { point: simplex[k].clone(), value: fv[k], iterations, evaluations, converged }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convex_one_dimensional() {
        let r =
            minimize(|x: &[f64]| (x[0] - 0.3).powi(2), &[Bound::new(0.0, 1.0)], &OptimizerConfig::default()).unwrap();
        assert!((r.point[0] - 0.3).abs() < 1e-6, "{:?}", r.point);
        assert!(r.converged);
    }

    #[test]
    fn rejects_bad_config() {
        let cfg = OptimizerConfig { seeds: 0, ..Default::default() };
        assert!(minimize(|x: &[f64]| x[0], &[Bound::new(0.0, 1.0)], &cfg).is_err());
        assert!(minimize(|x: &[f64]| x[0], &[Bound::new(1.0, 1.0)], &OptimizerConfig::default()).is_err());
    }

    #[test]
    fn periodic_minimum_of_cosine() {
        let r = minimize(|x: &[f64]| x[0].cos(), &[Bound::<f64>::angle()], &OptimizerConfig::default()).unwrap();
        assert!((r.point[0] - std::f64::consts::PI).abs() < 1e-6);
        // same answer when the box is shifted by several periods
        let b = Bound::periodic(6.0 * std::f64::consts::PI, 8.0 * std::f64::consts::PI);
        let r = minimize(|x: &[f64]| x[0].cos(), &[b], &OptimizerConfig::default()).unwrap();
        assert!((r.point[0] - 7.0 * std::f64::consts::PI).abs() < 1e-6);
    }
}
