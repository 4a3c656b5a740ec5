//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.
//!
//! Jacobi is slow for large matrices but the dimensions here never exceed a
//! few dozen, and it delivers small eigenvalues with high relative accuracy,
//! which matters for entropies of nearly pure states.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{Ket, Matrix};
use crate::scalar::Real;

/// Default Hermiticity tolerance (relative to the largest entry).
pub const HERMITIAN_TOL: f64 = 1e-9;

const MAX_SWEEPS: usize = 100;

/// Ascending eigenvalues with unit-norm eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigh<T> {
    pub values: Vec<T>,
    pub vectors: Vec<Ket<T>>,
}

impl<T: Real> Eigh<T> {
    /// Columns are the eigenvectors.
    pub fn vector_matrix(&self) -> Matrix<T> {
        let n = self.values.len();
        Matrix::from_fn(n, n, |i, j| self.vectors[j].amplitudes()[i])
    }

    /// `V f(Λ) V†`
    pub fn reconstruct_with(&self, f: impl Fn(T) -> T) -> Matrix<T> {
        let n = self.values.len();
        let mut out = Matrix::zeros(n, n);
        for (lambda, v) in self.values.iter().zip(&self.vectors) {
            let w = f(*lambda);
            if w == T::zero() {
                continue;
            }
            let a = v.amplitudes();
            for i in 0..n {
                let ai = a[i].scale(w);
                for j in 0..n {
                    out[(i, j)] += ai * a[j].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> Matrix<T> {
        self.reconstruct_with(|x| x)
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues are ascending. Each eigenvector is phased so that its
/// largest-magnitude component (first one on ties) is real and positive.
/// The routine is deterministic: identical input gives bit-identical output.
pub fn eigh<T: Real>(m: &Matrix<T>) -> Result<Eigh<T>> {
    eigh_with_tol(m, T::lit(HERMITIAN_TOL))
}

pub fn eigh_with_tol<T: Real>(m: &Matrix<T>, tol: T) -> Result<Eigh<T>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!("eigh of a {}x{} matrix", m.rows(), m.cols())));
    }
    let scale = m.max_abs().max(T::one());
    let asym = m.hermitian_asymmetry();
    if asym > tol * scale {
        return Err(Error::NotHermitian { asymmetry: asym.to_f64_lossy() });
    }
    let n = m.rows();
    let mut a = m.hermitian_part();
    for i in 0..n {
        a[(i, i)] = Complex::new(a[(i, i)].re, T::zero());
    }
    let mut v = Matrix::<T>::identity(n);
    jacobi_sweeps(&mut a, &mut v);

    let mut order: Vec<usize> = (0..n).collect();
    order
        .sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap_or(std::cmp::Ordering::Equal).then(i.cmp(&j)));

    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let vectors = order
        .iter()
        .map(|&k| {
            let mut col = v.column(k);
            fix_phase(&mut col);
            Ket::from_normalized_unchecked(col)
        })
        .collect();
    Ok(Eigh { values, vectors })
}

/// Eigenvalues only, ascending.
pub fn eigvalsh<T: Real>(m: &Matrix<T>) -> Result<Vec<T>> {
    Ok(eigh(m)?.values)
}

fn off_diagonal_norm<T: Real>(a: &Matrix<T>) -> T {
    let n = a.rows();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn jacobi_sweeps<T: Real>(a: &mut Matrix<T>, v: &mut Matrix<T>) {
    let n = a.rows();
    let total = a.frobenius_norm();
    if total == T::zero() {
        return;
    }
    let eps = T::epsilon();
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(a) <= eps * eps * total {
            return;
        }
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag == T::zero() {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                rotated = true;
                rotate(a, v, p, q, apq, mag, app, aqq);
            }
        }
        if !rotated {
            return;
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn rotate<T: Real>(a: &mut Matrix<T>, v: &mut Matrix<T>, p: usize, q: usize, apq: Complex<T>, mag: T, app: T, aqq: T) {
    let n = a.rows();
    let two = T::lit(2.0);
    // phase e^{iφ} of a_pq; G = E·R with E = diag(1, e^{-iφ}) and a real rotation R
    let phase = apq.unscale(mag);
    let zeta = (aqq - app) / (two * mag);
    let t = if zeta >= T::zero() {
        T::one() / (zeta + (T::one() + zeta * zeta).sqrt())
    } else {
        -T::one() / (-zeta + (T::one() + zeta * zeta).sqrt())
    };
    let c = T::one() / (T::one() + t * t).sqrt();
    let s = t * c;
    let e = phase.conj();

    // columns: A ← A G, with G = [[c, s], [−s e, c e]]
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp.scale(c) - (akq * e).scale(s);
        a[(k, q)] = akp.scale(s) + (akq * e).scale(c);
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp.scale(c) - (vkq * e).scale(s);
        v[(k, q)] = vkp.scale(s) + (vkq * e).scale(c);
    }
    // rows: A ← G† A
    let ec = e.conj();
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk.scale(c) - (aqk * ec).scale(s);
        a[(q, k)] = apk.scale(s) + (aqk * ec).scale(c);
    }
    let zero = Complex::new(T::zero(), T::zero());
    a[(p, q)] = zero;
    a[(q, p)] = zero;
    a[(p, p)] = Complex::new(app - t * mag, T::zero());
    a[(q, q)] = Complex::new(aqq + t * mag, T::zero());
}

fn fix_phase<T: Real>(col: &mut [Complex<T>]) {
    let max = col.iter().map(|z| z.norm()).fold(T::zero(), T::max);
    if max == T::zero() {
        return;
    }
    let cut = max * (T::one() - T::lit(1e-9));
    let Some(pivot) = col.iter().find(|z| z.norm() >= cut).copied() else {
        return;
    };
    let rot = pivot.conj().unscale(pivot.norm());
    for z in col.iter_mut() {
        *z *= rot;
    }
    // make the pivot exactly real
    if let Some(z) = col.iter_mut().find(|z| z.norm() >= cut) {
        *z = Complex::new(z.norm(), T::zero());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn pauli_z_spectrum_and_vectors() {
        let z = Matrix::<f64>::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]);
        let e = eigh(&z).unwrap();
        assert_eq!(e.values, vec![-1.0, 1.0]);
        assert_eq!(e.vectors[0].amplitudes(), &[c(0.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(e.vectors[1].amplitudes(), &[c(1.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn pauli_x_and_y_spectra() {
        let x = Matrix::<f64>::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let y = Matrix::<f64>::from_vec(2, 2, vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]).unwrap();
        for m in [x, y] {
            let e = eigh(&m).unwrap();
            assert!((e.values[0] + 1.0).abs() < 1e-15);
            assert!((e.values[1] - 1.0).abs() < 1e-15);
            assert!(e.reconstruct().approx_eq(&m, 1e-14));
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = Matrix::<f64>::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(eigh(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn phase_convention_largest_component_real_positive() {
        let m = Matrix::<f64>::from_vec(2, 2, vec![c(1.0, 0.0), c(0.3, 0.4), c(0.3, -0.4), c(-0.5, 0.0)]).unwrap();
        let e = eigh(&m).unwrap();
        for v in &e.vectors {
            let a = v.amplitudes();
            let k = if a[0].norm() >= a[1].norm() * (1.0 - 1e-9) { 0 } else { 1 };
            assert!(a[k].im == 0.0 && a[k].re > 0.0);
        }
    }

    #[test]
    fn works_in_single_precision() {
        let m = Matrix::<f32>::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let e = eigh(&m).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-6);
        assert!((e.values[1] - 3.0).abs() < 1e-6);
    }

    #[test]
    fn zero_matrix() {
        let e = eigh(&Matrix::<f64>::zeros(3, 3)).unwrap();
        assert_eq!(e.values, vec![0.0; 3]);
        assert!(e.vector_matrix().approx_eq(&Matrix::identity(3), 0.0));
    }
}
