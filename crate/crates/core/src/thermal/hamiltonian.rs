//! Hermitian Hamiltonians with a cached eigendecomposition.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{eigh, kron, Eigh, Matrix, HERMITIAN_TOL};
use crate::{ComplexMatrix, Ket};

/// Energies closer than this (relative to the spectral scale) count as equal.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Hermitian operator in units of the energy scale δ.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    matrix: ComplexMatrix,
    eig: Eigh<f64>,
}

impl Hamiltonian {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let scale = matrix.max_abs().max(1.0);
        let asym = matrix.hermitian_asymmetry();
        if asym > HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian { asymmetry: asym });
        }
        let matrix = matrix.hermitian_part();
        let eig = eigh(&matrix)?;
        Ok(Self { matrix, eig })
    }

    pub fn pauli_x() -> Self {
        Self::new(Matrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])).expect("hermitian")
    }

    pub fn pauli_y() -> Self {
        let c = |re, im| Complex::new(re, im);
        Self::new(Matrix::from_vec(2, 2, vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]).unwrap())
            .expect("hermitian")
    }

    pub fn pauli_z() -> Self {
        Self::new(Matrix::from_real_diagonal(&[1.0, -1.0])).expect("hermitian")
    }

    pub fn identity(d: usize) -> Self {
        Self::new(Matrix::identity(d)).expect("hermitian")
    }

    pub fn zero(d: usize) -> Self {
        Self::new(Matrix::zeros(d, d)).expect("hermitian")
    }

    /// Gell-Mann matrix `λ_k`, `k ∈ 1..=8`.
    pub fn gell_mann(k: usize) -> Result<Self> {
        let mut m = Matrix::<f64>::zeros(3, 3);
        let one = Complex::new(1.0, 0.0);
        let i = Complex::new(0.0, 1.0);
        match k {
            1 => {
                m[(0, 1)] = one;
                m[(1, 0)] = one;
            }
            2 => {
                m[(0, 1)] = -i;
                m[(1, 0)] = i;
            }
            3 => {
                m[(0, 0)] = one;
                m[(1, 1)] = -one;
            }
            4 => {
                m[(0, 2)] = one;
                m[(2, 0)] = one;
            }
            5 => {
                m[(0, 2)] = -i;
                m[(2, 0)] = i;
            }
            6 => {
                m[(1, 2)] = one;
                m[(2, 1)] = one;
            }
            7 => {
                m[(1, 2)] = -i;
                m[(2, 1)] = i;
            }
            8 => {
                let s = 1.0 / 3f64.sqrt();
                m[(0, 0)] = one * s;
                m[(1, 1)] = one * s;
                m[(2, 2)] = one * (-2.0 * s);
            }
            _ => return Err(Error::config("hamiltonian.name", format!("gell_mann_{k} does not exist (1..=8)"))),
        }
        Self::new(m)
    }

    /// Named operator: `pauli_x|y|z`, `gell_mann_1..8`, `identity_<d>` or `identity` (qubit).
    pub fn named(name: &str) -> Result<Self> {
        match name {
            "pauli_x" => Ok(Self::pauli_x()),
            "pauli_y" => Ok(Self::pauli_y()),
            "pauli_z" => Ok(Self::pauli_z()),
            "identity" => Ok(Self::identity(2)),
            _ => {
                if let Some(k) = name.strip_prefix("gell_mann_") {
                    let k = k
                        .parse::<usize>()
                        .map_err(|_| Error::config("hamiltonian.name", format!("unknown operator `{name}`")))?;
                    return Self::gell_mann(k);
                }
                if let Some(d) = name.strip_prefix("identity_") {
                    let d = d
                        .parse::<usize>()
                        .ok()
                        .filter(|&d| d > 0)
                        .ok_or_else(|| Error::config("hamiltonian.name", format!("unknown operator `{name}`")))?;
                    return Ok(Self::identity(d));
                }
                Err(Error::config("hamiltonian.name", format!("unknown operator `{name}`")))
            }
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::new(self.matrix.scale_real(s)).expect("scaled Hermitian stays Hermitian")
    }

    /// `self + ε·other`
    pub fn plus(&self, eps: f64, other: &Hamiltonian) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{}-level plus {}-level Hamiltonian",
                self.dim(),
                other.dim()
            )));
        }
        Self::new(&self.matrix + &other.matrix.scale_real(eps))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Ascending energies.
    pub fn energies(&self) -> &[f64] {
        &self.eig.values
    }

    /// Eigenkets matching [`energies`](Self::energies).
    pub fn eigenkets(&self) -> &[Ket] {
        &self.eig.vectors
    }

    /// Unitary whose columns are the eigenkets.
    pub fn eigenvector_matrix(&self) -> ComplexMatrix {
        self.eig.vector_matrix()
    }

    pub fn eigh(&self) -> &Eigh<f64> {
        &self.eig
    }

    fn energy_tol(&self) -> f64 {
        let scale = self.energies().iter().fold(1.0f64, |m, e| m.max(e.abs()));
        DEGENERACY_TOL * scale
    }

    /// Groups eigen-indices into eigenspaces: `(energy, indices)`.
    pub fn eigenspaces(&self) -> Vec<(f64, Vec<usize>)> {
        let tol = self.energy_tol();
        let mut out: Vec<(f64, Vec<usize>)> = Vec::new();
        for (k, &e) in self.energies().iter().enumerate() {
            match out.last_mut() {
                Some((e0, idx)) if (e - *e0).abs() <= tol => idx.push(k),
                _ => out.push((e, vec![k])),
            }
        }
        out
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.eigenspaces().len() == self.dim()
    }

    /// True iff all gaps `E_i − E_j` (i ≠ j) are pairwise distinct.
    pub fn non_degenerate_bohr_spectrum(&self) -> bool {
        let e = self.energies();
        let tol = self.energy_tol();
        let mut gaps = Vec::new();
        for i in 0..e.len() {
            for j in 0..e.len() {
                if i != j {
                    gaps.push(e[i] - e[j]);
                }
            }
        }
        gaps.sort_by(|a, b| a.partial_cmp(b).unwrap());
        gaps.windows(2).all(|w| w[1] - w[0] > tol) && !gaps.iter().any(|g| g.abs() <= tol)
    }

    /// Index of the level with energy `e`, if any.
    pub fn level_index(&self, e: f64) -> Option<usize> {
        let tol = self.energy_tol();
        let spaces = self.eigenspaces();
        spaces.iter().find(|(e0, _)| (e0 - e).abs() <= tol).map(|(_, idx)| idx[0])
    }

    /// Eigenbasis order used to label local levels.
    ///
    /// When every eigenket's dominant component sits on a distinct
    /// computational index, kets are listed in computational order (so `σ_z`
    /// gives `|0⟩, |1⟩`). Otherwise the ascending-energy order is kept.
    pub fn reference_order(&self) -> Vec<usize> {
        let d = self.dim();
        let mut label = vec![usize::MAX; d];
        for (k, v) in self.eigenkets().iter().enumerate() {
            let a = v.amplitudes();
            let max = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let dominant: Vec<usize> = (0..d).filter(|&i| a[i].norm() >= max * (1.0 - 1e-9)).collect();
            if dominant.len() != 1 {
                return (0..d).collect();
            }
            label[k] = dominant[0];
        }
        let mut seen = vec![false; d];
        for &l in &label {
            if seen[l] {
                return (0..d).collect();
            }
            seen[l] = true;
        }
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by_key(|&k| label[k]);
        order
    }
}

/// `H_S ⊗ I + I ⊗ H_B`
pub fn total_hamiltonian(h_sys: &Hamiltonian, h_bath: &Hamiltonian) -> Hamiltonian {
    let m =
        &kron(h_sys.matrix(), &Matrix::identity(h_bath.dim())) + &kron(&Matrix::identity(h_sys.dim()), h_bath.matrix());
    Hamiltonian::new(m).expect("Kronecker sum of Hermitian matrices is Hermitian")
}

/// Product eigenbasis `|i⟩⊗|R⟩` of `H_S ⊗ I + I ⊗ H_B`.
///
/// Both factors use [`Hamiltonian::reference_order`]; entries are listed
/// system-major. Each entry carries `(i, R, E_i + E_R, ket)` where `i` and `R`
/// index the ascending-energy eigenkets of each factor.
pub fn product_eigenbasis(h_sys: &Hamiltonian, h_bath: &Hamiltonian) -> Vec<(usize, usize, f64, Ket)> {
    let mut out = Vec::with_capacity(h_sys.dim() * h_bath.dim());
    for i in h_sys.reference_order() {
        for r in h_bath.reference_order() {
            let ket = h_sys.eigenkets()[i].tensor(&h_bath.eigenkets()[r]);
            out.push((i, r, h_sys.energies()[i] + h_bath.energies()[r], ket));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_z_reference_order_is_computational() {
        let z = Hamiltonian::pauli_z();
        assert_eq!(z.energies(), &[-1.0, 1.0]);
        assert_eq!(z.reference_order(), vec![1, 0]);
    }

    #[test]
    fn gell_mann_one_keeps_energy_order() {
        let g = Hamiltonian::gell_mann(1).unwrap();
        assert_eq!(g.reference_order(), vec![0, 1, 2]);
        assert!(g.is_nondegenerate());
    }

    #[test]
    fn gell_mann_matrices_are_traceless_hermitian() {
        for k in 1..=8 {
            let g = Hamiltonian::gell_mann(k).unwrap();
            assert!(g.matrix().trace().norm() < 1e-15);
            // Tr λ_a λ_b = 2 δ_ab
            assert!(((g.matrix() * g.matrix()).trace().re - 2.0).abs() < 1e-14);
        }
        assert!(Hamiltonian::gell_mann(9).is_err());
    }

    #[test]
    fn named_lookup() {
        assert_eq!(Hamiltonian::named("pauli_x").unwrap(), Hamiltonian::pauli_x());
        assert_eq!(Hamiltonian::named("identity_3").unwrap().dim(), 3);
        assert!(Hamiltonian::named("sigma_q").is_err());
    }

    #[test]
    fn bohr_spectrum_flags() {
        assert!(Hamiltonian::pauli_z().non_degenerate_bohr_spectrum());
        // equally spaced ladder: E1−E0 = E2−E1
        let ladder = Hamiltonian::new(Matrix::from_real_diagonal(&[0.0, 1.0, 2.0])).unwrap();
        assert!(!ladder.non_degenerate_bohr_spectrum());
        let generic = Hamiltonian::new(Matrix::from_real_diagonal(&[0.0, 1.0, 2.5])).unwrap();
        assert!(generic.non_degenerate_bohr_spectrum());
    }
}
