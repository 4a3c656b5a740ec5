//! Affine phase relations `Σ_k c_k α_k ≡ b (mod 2π)` solved by elimination.
//!
//! Each independent relation removes one phase: the dependent phase is
//! computed from the free ones, never penalized.

use crate::error::{Error, Result};
use crate::thermal::phase::wrap_pi;

/// `Σ_k coefficients[k]·α_k ≡ offset (mod 2π)` with integer coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseRelation {
    pub coefficients: Vec<i64>,
    pub offset: f64,
}

impl PhaseRelation {
    pub fn new(coefficients: Vec<i64>, offset: f64) -> Self {
        Self { coefficients, offset }
    }

    /// Signed residual `Σ c_k α_k − b`, wrapped into `(−π, π]`.
    pub fn residual(&self, phases: &[f64]) -> f64 {
        let s: f64 = self.coefficients.iter().zip(phases).map(|(&c, &a)| c as f64 * a).sum();
        wrap_pi(s - self.offset)
    }
}

/// Markovianity relations for a `d1 ⊗ d2` phase-diagonal unitary in the
/// product eigenbasis (system-major indexing `j·d2 + R`):
/// `α_{jR} − α_{0R} − α_{j0} + α_{00} ≡ 0` for all `j, R ≥ 1`.
pub fn markovian_phase_relations(d1: usize, d2: usize) -> Vec<PhaseRelation> {
    let mut out = Vec::new();
    for j in 1..d1 {
        for r in 1..d2 {
            let mut c = vec![0i64; d1 * d2];
            c[j * d2 + r] += 1;
            c[r] -= 1;
            c[j * d2] -= 1;
            c[0] += 1;
            out.push(PhaseRelation::new(c, 0.0));
        }
    }
    out
}

/// Dependent phase: `α_pivot = offset + Σ_f weights[f]·θ_f`.
#[derive(Debug, Clone, PartialEq)]
struct Dependent {
    pivot: usize,
    weights: Vec<i64>,
    offset: f64,
}

/// Parametrization of the phases satisfying a set of relations.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseManifold {
    dim: usize,
    free: Vec<usize>,
    dependent: Vec<Dependent>,
    relations: Vec<PhaseRelation>,
}

impl PhaseManifold {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn free_dim(&self) -> usize {
        self.free.len()
    }

    /// Indices of the phases kept as free parameters.
    pub fn free_indices(&self) -> &[usize] {
        &self.free
    }

    pub fn relations(&self) -> &[PhaseRelation] {
        &self.relations
    }

    /// Full phase vector from the free parameters.
    pub fn map(&self, free: &[f64]) -> Result<Vec<f64>> {
        if free.len() != self.free.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} parameters for a {}-parameter manifold",
                free.len(),
                self.free.len()
            )));
        }
        let mut out = vec![0.0; self.dim];
        for (&k, &x) in self.free.iter().zip(free) {
            out[k] = x;
        }
        for d in &self.dependent {
            out[d.pivot] = d.offset + d.weights.iter().zip(free).map(|(&w, &x)| w as f64 * x).sum::<f64>();
        }
        Ok(out)
    }

    /// Free parameters of a full phase vector (its restriction).
    pub fn project(&self, phases: &[f64]) -> Vec<f64> {
        self.free.iter().map(|&k| phases[k]).collect()
    }

    /// Wrapped residual of every relation.
    pub fn residuals(&self, phases: &[f64]) -> Vec<f64> {
        self.relations.iter().map(|r| r.residual(phases)).collect()
    }
}

/// Solves `relations` for one dependent phase each.
///
/// The pivot of a relation is its last ±1 coefficient after substituting
/// earlier pivots. A relation that reduces to `0 ≡ b` is dropped when
/// `b ≡ 0` and rejected otherwise.
pub fn constrained_phase_manifold(dim: usize, relations: &[PhaseRelation]) -> Result<PhaseManifold> {
    // rows: coefficients over all phases, with pivots already eliminated
    let mut solved: Vec<(usize, Vec<i64>, f64)> = Vec::new();
    for (n, rel) in relations.iter().enumerate() {
        if rel.coefficients.len() != dim {
            return Err(Error::InconsistentRelation(format!(
                "relation {n} has {} coefficients for {dim} phases",
                rel.coefficients.len()
            )));
        }
        if !rel.offset.is_finite() {
            return Err(Error::InconsistentRelation(format!("relation {n} has a non-finite offset")));
        }
        let mut c = rel.coefficients.clone();
        let mut b = rel.offset;
        for (p, expr, off) in &solved {
            let k = c[*p];
            if k != 0 {
                // α_p = off − Σ_{q≠p} expr_q α_q
                c[*p] = 0;
                for q in 0..dim {
                    if q != *p {
                        c[q] -= k * expr[q];
                    }
                }
                b -= k as f64 * off;
            }
        }
        let Some(pivot) = (0..dim).rev().find(|&q| c[q].abs() == 1) else {
            if c.iter().all(|&x| x == 0) {
                if wrap_pi(b).abs() <= 1e-12 {
                    continue;
                }
                return Err(Error::InconsistentRelation(format!("relation {n} reduces to 0 ≡ {b} (mod 2π)")));
            }
            return Err(Error::InconsistentRelation(format!("relation {n} has no ±1 coefficient to solve for")));
        };
        let s = c[pivot];
        // normalize so the pivot coefficient is +1
        let expr: Vec<i64> = c.iter().map(|&x| x * s).collect();
        let off = b * s as f64;
        for (_, e, o) in solved.iter_mut() {
            let k = e[pivot];
            if k != 0 {
                for q in 0..dim {
                    e[q] -= k * expr[q];
                }
                *o -= k as f64 * off;
            }
        }
        solved.push((pivot, expr, off));
    }

    let pivots: Vec<usize> = solved.iter().map(|s| s.0).collect();
    let free: Vec<usize> = (0..dim).filter(|k| !pivots.contains(k)).collect();
    let dependent = solved
        .into_iter()
        .map(|(pivot, expr, offset)| Dependent { pivot, weights: free.iter().map(|&f| -expr[f]).collect(), offset })
        .collect();
    Ok(PhaseManifold { dim, free, dependent, relations: relations.to_vec() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_qubit_relation() {
        let rels = markovian_phase_relations(2, 2);
        assert_eq!(rels, vec![PhaseRelation::new(vec![1, -1, -1, 1], 0.0)]);
        let m = constrained_phase_manifold(4, &rels).unwrap();
        assert_eq!(m.free_dim(), 3);
        assert_eq!(m.free_indices(), &[0, 1, 2]);
        let a = m.map(&[0.5, 1.25, -2.0]).unwrap();
        assert_eq!(a[3], 1.25 - 0.5 - 2.0);
        assert_eq!(m.residuals(&a), vec![0.0]);
    }

    #[test]
    fn trivial_relation_keeps_full_torus() {
        let m = constrained_phase_manifold(2, &[PhaseRelation::new(vec![0, 0], 0.0)]).unwrap();
        assert_eq!(m.free_dim(), 2);
        assert_eq!(m.map(&[0.1, 0.2]).unwrap(), vec![0.1, 0.2]);
        let m = constrained_phase_manifold(2, &[]).unwrap();
        assert_eq!(m.free_dim(), 2);
    }

    #[test]
    fn inconsistent_relations() {
        assert!(constrained_phase_manifold(2, &[PhaseRelation::new(vec![0, 0], 1.0)]).is_err());
        assert!(constrained_phase_manifold(2, &[PhaseRelation::new(vec![2, 0], 0.0)]).is_err());
        let r = PhaseRelation::new(vec![1, -1], 0.3);
        let twice = [r.clone(), PhaseRelation::new(vec![1, -1], 0.4)];
        assert!(matches!(constrained_phase_manifold(2, &twice), Err(Error::InconsistentRelation(_))));
        // duplicated relation is redundant, not inconsistent
        let m = constrained_phase_manifold(2, &[r.clone(), r]).unwrap();
        assert_eq!(m.free_dim(), 1);
    }

    #[test]
    fn chained_relations_are_substituted() {
        // α1 = α0 + 1, α2 = α1 + 1
        let rels = [PhaseRelation::new(vec![-1, 1, 0], 1.0), PhaseRelation::new(vec![0, -1, 1], 1.0)];
        let m = constrained_phase_manifold(3, &rels).unwrap();
        assert_eq!(m.free_dim(), 1);
        let a = m.map(&[0.25]).unwrap();
        assert_eq!(a, vec![0.25, 1.25, 2.25]);
    }

    #[test]
    fn qubit_qutrit_relations() {
        let rels = markovian_phase_relations(2, 3);
        let m = constrained_phase_manifold(6, &rels).unwrap();
        assert_eq!(m.free_dim(), 4);
        let a = m.map(&[0.3, -1.1, 2.0, 0.7]).unwrap();
        assert!(m.residuals(&a).iter().all(|r| r.abs() < 1e-15));
    }
}
