//! Tensor products, partial operations, norms and entropies.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{eigh, eigh_with_tol, Density, Matrix};
use crate::scalar::Real;

/// Default support cutoff for spectral logarithms.
pub const LOG_CUTOFF: f64 = 1e-12;

/// Factor of a bipartite space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    First,
    Second,
}

/// Kronecker product `a ⊗ b`.
pub fn kron<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    let (br, bc) = (b.rows(), b.cols());
    Matrix::from_fn(a.rows() * br, a.cols() * bc, |r, c| a[(r / br, c / bc)] * b[(r % br, c % bc)])
}

fn check_bipartite<T: Real>(m: &Matrix<T>, (d1, d2): (usize, usize)) -> Result<()> {
    if !m.is_square() || d1 * d2 != m.rows() {
        return Err(Error::BadFactorization(format!("{}x{} matrix cannot be split as {d1}⊗{d2}", m.rows(), m.cols())));
    }
    Ok(())
}

/// Partial trace of an operator on `d1⊗d2`, keeping one factor.
pub fn partial_trace_op<T: Real>(m: &Matrix<T>, dims: (usize, usize), keep: Subsystem) -> Result<Matrix<T>> {
    check_bipartite(m, dims)?;
    let (d1, d2) = dims;
    let zero = Complex::new(T::zero(), T::zero());
    Ok(match keep {
        Subsystem::First => {
            Matrix::from_fn(d1, d1, |i, j| (0..d2).fold(zero, |acc, k| acc + m[(i * d2 + k, j * d2 + k)]))
        }
        Subsystem::Second => {
            Matrix::from_fn(d2, d2, |k, l| (0..d1).fold(zero, |acc, i| acc + m[(i * d2 + k, i * d2 + l)]))
        }
    })
}

/// Reduced state on the kept factor of a two-factor state.
pub fn partial_trace<T: Real>(rho: &Density<T>, keep: Subsystem) -> Result<Density<T>> {
    let dims = rho.bipartite_dims()?;
    let m = partial_trace_op(rho.matrix(), dims, keep)?;
    let d = match keep {
        Subsystem::First => dims.0,
        Subsystem::Second => dims.1,
    };
    Density::from_matrix_unchecked(m, vec![d])
}

/// Transposes the indices of one factor of an operator on `d1⊗d2`.
pub fn partial_transpose_op<T: Real>(m: &Matrix<T>, dims: (usize, usize), on: Subsystem) -> Result<Matrix<T>> {
    check_bipartite(m, dims)?;
    let (d1, d2) = dims;
    Ok(Matrix::from_fn(d1 * d2, d1 * d2, |r, c| {
        let (i, k) = (r / d2, r % d2);
        let (j, l) = (c / d2, c % d2);
        match on {
            Subsystem::First => m[(j * d2 + k, i * d2 + l)],
            Subsystem::Second => m[(i * d2 + l, j * d2 + k)],
        }
    }))
}

pub fn partial_transpose<T: Real>(rho: &Density<T>, on: Subsystem) -> Result<Matrix<T>> {
    partial_transpose_op(rho.matrix(), rho.bipartite_dims()?, on)
}

/// Sum of singular values.
///
/// Hermitian input uses `Σ|λ|`; anything else goes through the Hermitian
/// dilation `[[0, A], [A†, 0]]`, whose spectrum is `±σ_k`.
pub fn trace_norm<T: Real>(m: &Matrix<T>) -> T {
    let scale = m.max_abs().max(T::one());
    let sum_abs = |h: &Matrix<T>| {
        eigh_with_tol(h, T::infinity()).map(|e| e.values.iter().map(|x| x.abs()).sum::<T>()).unwrap_or(T::nan())
    };
    if m.is_square() && m.hermitian_asymmetry() <= T::epsilon() * T::lit(16.0) * scale {
        return sum_abs(m);
    }
    let (r, c) = (m.rows(), m.cols());
    let zero = Complex::new(T::zero(), T::zero());
    let dil = Matrix::from_fn(r + c, r + c, |i, j| {
        if i < r && j >= r {
            m[(i, j - r)]
        } else if i >= r && j < r {
            m[(j, i - r)].conj()
        } else {
            zero
        }
    });
    sum_abs(&dil) * T::lit(0.5)
}

fn entropy_from_spectrum<T: Real>(values: &[T]) -> T {
    values.iter().filter(|&&p| p > T::zero()).map(|&p| -p * p.log2()).sum::<T>().max(T::zero())
}

/// `−Tr ρ log₂ ρ` in bits, with `0 log 0 = 0`.
pub fn von_neumann_entropy<T: Real>(rho: &Density<T>) -> T {
    entropy_of(rho.matrix()).unwrap_or(T::nan())
}

/// Entropy of a Hermitian matrix treated as a state; eigenvalues ≤ 0 contribute nothing.
pub fn entropy_of<T: Real>(m: &Matrix<T>) -> Result<T> {
    let e = eigh_with_tol(m, T::infinity())?;
    Ok(entropy_from_spectrum(&e.values))
}

/// Spectral `log₂` on the support of a positive semidefinite matrix.
///
/// Eigenvalues at or below `cutoff` map to zero.
pub fn matrix_log2_on_support<T: Real>(m: &Matrix<T>, cutoff: T) -> Result<Matrix<T>> {
    let e = eigh(m)?;
    if let Some(&min) = e.values.first() {
        if min < -cutoff {
            return Err(Error::NegativeEigenvalue { value: min.to_f64_lossy() });
        }
    }
    Ok(e.reconstruct_with(|x| if x > cutoff { x.log2() } else { T::zero() }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(rows: &[&[f64]]) -> Matrix<f64> {
        Matrix::from_real_rows(rows)
    }

    #[test]
    fn kron_of_diagonals() {
        let a = Matrix::from_real_diagonal(&[2.0, 3.0]);
        let b = Matrix::from_real_diagonal(&[5.0, 7.0]);
        assert!(kron(&a, &b).approx_eq(&Matrix::from_real_diagonal(&[10.0, 14.0, 15.0, 21.0]), 0.0));
        assert!(kron(&Matrix::<f64>::identity(2), &Matrix::identity(2)).approx_eq(&Matrix::identity(4), 0.0));
    }

    #[test]
    fn trace_norm_hermitian_and_general() {
        assert!((trace_norm(&Matrix::from_real_diagonal(&[1.0f64, -3.0])) - 4.0).abs() < 1e-14);
        // nilpotent: singular values (1, 0)
        assert!((trace_norm(&r(&[&[0.0, 1.0], &[0.0, 0.0]])) - 1.0).abs() < 1e-14);
        // non-square
        assert!((trace_norm(&r(&[&[3.0, 0.0, 0.0], &[0.0, 4.0, 0.0]])) - 7.0).abs() < 1e-13);
    }

    #[test]
    fn log2_on_support() {
        let l = matrix_log2_on_support(&Matrix::from_real_diagonal(&[2.0, 4.0, 0.0]), 1e-12).unwrap();
        assert!(l.approx_eq(&Matrix::from_real_diagonal(&[1.0, 2.0, 0.0]), 1e-14));
        assert!(matches!(
            matrix_log2_on_support(&Matrix::from_real_diagonal(&[1.0, -0.1]), 1e-12),
            Err(Error::NegativeEigenvalue { .. })
        ));
    }

    #[test]
    fn entropy_of_binary_state() {
        let rho = Density::single(Matrix::from_real_diagonal(&[0.9, 0.1])).unwrap();
        let h = -(0.9f64 * 0.9f64.log2() + 0.1 * 0.1f64.log2());
        assert!((von_neumann_entropy(&rho) - h).abs() < 1e-14);
        assert!((von_neumann_entropy(&Density::<f64>::maximally_mixed(2)) - 1.0).abs() < 1e-14);
    }
}
