//! Seeded random Hermitian operators, states and unitaries.

use rand::{Rng, RngExt};
use std::f64::consts::TAU;

use crate::linalg::Matrix;
use crate::{ComplexMatrix, C64};

fn ginibre<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    Matrix::from_fn(d, d, |_, _| C64::new(2.0 * rng.random::<f64>() - 1.0, 2.0 * rng.random::<f64>() - 1.0))
}

/// `(G + G†)/2` with entries of `G` uniform in the unit square.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    ginibre(rng, d).hermitian_part()
}

/// Traceless Hermitian with Frobenius norm `norm`.
pub fn random_traceless<R: Rng + ?Sized>(rng: &mut R, d: usize, norm: f64) -> ComplexMatrix {
    let h = random_hermitian(rng, d);
    let shift = h.trace().re / d as f64;
    let t = &h - &Matrix::identity(d).scale_real(shift);
    t.scale_real(norm / t.frobenius_norm())
}

/// `GG†/Tr(GG†)`; full rank almost surely.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let g = ginibre(rng, d);
    let m = &g * &g.adjoint();
    let t = m.trace().re;
    m.scale_real(1.0 / t).hermitian_part()
}

/// Gram–Schmidt orthonormalization of a Ginibre matrix's columns.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    loop {
        let g = ginibre(rng, d);
        let mut cols: Vec<Vec<C64>> = Vec::with_capacity(d);
        let mut ok = true;
        for j in 0..d {
            let mut v = g.column(j);
            for _ in 0..2 {
                for q in &cols {
                    let p: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                    for (x, y) in v.iter_mut().zip(q) {
                        *x -= p * y;
                    }
                }
            }
            let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if n < 1e-8 {
                ok = false;
                break;
            }
            cols.push(v.into_iter().map(|z| z / n).collect());
        }
        if ok {
            return Matrix::from_fn(d, d, |r, c| cols[c][r]);
        }
    }
}

/// `n` phases uniform in `[0, 2π)`.
pub fn random_phases<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| TAU * rng.random::<f64>()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn shapes_and_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d in 1..5 {
            let u = random_unitary(&mut rng, d);
            assert!(u.unitarity_defect() < 1e-12);
            let r = random_density(&mut rng, d);
            assert!((r.trace().re - 1.0).abs() < 1e-14 && r.is_hermitian(0.0));
            if d > 1 {
                let t = random_traceless(&mut rng, d, 0.3);
                assert!(t.trace().norm() < 1e-14 && (t.frobenius_norm() - 0.3).abs() < 1e-14);
            }
        }
    }
}
