//! Kets and density matrices with validated invariants.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{eigvalsh, kron, Matrix};
use crate::scalar::Real;

/// Default tolerance for state validity checks.
pub const STATE_TOL: f64 = 1e-9;

/// Unit-norm state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket<T> {
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> Ket<T> {
    /// Validates the norm against [`STATE_TOL`].
    pub fn new(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if (norm - T::one()).abs() > T::lit(STATE_TOL) {
            return Err(Error::NotNormalized { norm: norm.to_f64_lossy() });
        }
        Ok(Self { amplitudes })
    }

    /// Rescales to unit norm. Fails on the zero vector.
    pub fn normalized(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if norm == T::zero() || !norm.is_finite() {
            return Err(Error::NotNormalized { norm: norm.to_f64_lossy() });
        }
        Ok(Self { amplitudes: amplitudes.into_iter().map(|z| z.unscale(norm)).collect() })
    }

    pub(crate) fn from_normalized_unchecked(amplitudes: Vec<Complex<T>>) -> Self {
        Self { amplitudes }
    }

    /// Computational basis vector `|i⟩` in dimension `d`.
    pub fn basis(d: usize, i: usize) -> Self {
        assert!(i < d, "basis index {i} out of range for dimension {d}");
        let mut a = vec![Complex::new(T::zero(), T::zero()); d];
        a[i] = Complex::new(T::one(), T::zero());
        Self { amplitudes: a }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * *b)
    }

    /// `|self⟩⊗|other⟩`
    pub fn tensor(&self, other: &Self) -> Self {
        let mut a = Vec::with_capacity(self.dim() * other.dim());
        for x in &self.amplitudes {
            for y in &other.amplitudes {
                a.push(*x * *y);
            }
        }
        Self { amplitudes: a }
    }

    /// `|self⟩⟨self|`
    pub fn projector(&self) -> Matrix<T> {
        Matrix::outer(&self.amplitudes, &self.amplitudes)
    }

    pub fn scale_phase(&self, phase: Complex<T>) -> Self {
        Self { amplitudes: self.amplitudes.iter().map(|z| *z * phase).collect() }
    }
}

/// Positive, unit-trace Hermitian matrix with a subsystem factorization.
#[derive(Clone, PartialEq)]
pub struct Density<T> {
    matrix: Matrix<T>,
    dims: Vec<usize>,
}

impl<T: Real> Density<T> {
    /// Validates with the default tolerance [`STATE_TOL`].
    pub fn new(matrix: Matrix<T>, dims: Vec<usize>) -> Result<Self> {
        Self::new_with_tol(matrix, dims, T::lit(STATE_TOL))
    }

    pub fn new_with_tol(matrix: Matrix<T>, dims: Vec<usize>, tol: T) -> Result<Self> {
        check_dims(&matrix, &dims)?;
        let asym = matrix.hermitian_asymmetry();
        if asym > tol {
            return Err(Error::NotHermitian { asymmetry: asym.to_f64_lossy() });
        }
        let tr = matrix.trace();
        if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidState(format!("trace {} + {}i differs from 1", tr.re, tr.im)));
        }
        let min = eigvalsh(&matrix)?.first().copied().unwrap_or(T::zero());
        if min < -tol {
            return Err(Error::NegativeEigenvalue { value: min.to_f64_lossy() });
        }
        Ok(Self { matrix, dims })
    }

    /// Wraps a matrix known to be a state (e.g. a unitary image of one).
    /// Only the factorization is checked.
    pub fn from_matrix_unchecked(matrix: Matrix<T>, dims: Vec<usize>) -> Result<Self> {
        check_dims(&matrix, &dims)?;
        Ok(Self { matrix, dims })
    }

    /// Single-factor state.
    pub fn single(matrix: Matrix<T>) -> Result<Self> {
        let d = matrix.rows();
        Self::new(matrix, vec![d])
    }

    pub fn from_ket(ket: &Ket<T>) -> Self {
        Self { matrix: ket.projector(), dims: vec![ket.dim()] }
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self { matrix: Matrix::identity(d).scale_real(T::one() / T::from_usize(d).unwrap()), dims: vec![d] }
    }

    /// `self ⊗ other`, concatenating the factorizations.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self { matrix: kron(&self.matrix, &other.matrix), dims }
    }

    /// Same matrix under a different factorization.
    pub fn with_dims(self, dims: Vec<usize>) -> Result<Self> {
        check_dims(&self.matrix, &dims)?;
        Ok(Self { matrix: self.matrix, dims })
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Ascending spectrum.
    pub fn eigenvalues(&self) -> Result<Vec<T>> {
        eigvalsh(&self.matrix)
    }

    /// Two-factor dimensions, or a factorization error.
    pub fn bipartite_dims(&self) -> Result<(usize, usize)> {
        match self.dims.as_slice() {
            [a, b] => Ok((*a, *b)),
            other => Err(Error::BadFactorization(format!("expected two factors, got {other:?}"))),
        }
    }

    /// Trace distance `½‖self − other‖₁`.
    pub fn trace_distance(&self, other: &Self) -> T {
        T::lit(0.5) * crate::linalg::trace_norm(&(&self.matrix - &other.matrix))
    }
}

impl<T: Real> std::fmt::Debug for Density<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Density").field("dims", &self.dims).field("matrix", &self.matrix).finish()
    }
}

fn check_dims<T: Real>(m: &Matrix<T>, dims: &[usize]) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!("density matrix is {}x{}", m.rows(), m.cols())));
    }
    if dims.is_empty() || dims.iter().product::<usize>() != m.rows() {
        return Err(Error::BadFactorization(format!("dims {dims:?} do not multiply to {}", m.rows())));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ket_norm_is_checked() {
        let c = |x: f64| Complex::new(x, 0.0);
        assert!(Ket::new(vec![c(1.0), c(1.0)]).is_err());
        let k = Ket::normalized(vec![c(1.0), c(1.0)]).unwrap();
        assert!((k.inner(&k).re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn density_validation() {
        let bad_trace = Matrix::<f64>::from_real_rows(&[&[1.0, 0.0], &[0.0, 1.0]]);
        assert!(matches!(Density::single(bad_trace), Err(Error::InvalidState(_))));
        let negative = Matrix::<f64>::from_real_rows(&[&[1.5, 0.0], &[0.0, -0.5]]);
        assert!(matches!(Density::single(negative), Err(Error::NegativeEigenvalue { .. })));
        let ok = Matrix::<f64>::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]);
        assert!(Density::single(ok.clone()).is_ok());
        assert!(matches!(Density::new(ok, vec![3]), Err(Error::BadFactorization(_))));
    }

    #[test]
    fn tensor_concatenates_dims() {
        let a = Density::<f64>::maximally_mixed(2);
        let b = Density::<f64>::maximally_mixed(3);
        let ab = a.tensor(&b);
        assert_eq!(ab.dims(), &[2, 3]);
        assert!((ab.matrix().trace().re - 1.0).abs() < 1e-15);
    }
}
