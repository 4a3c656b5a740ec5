//! Global unitaries assembled from energy eigenspace blocks.

use crate::error::{Error, Result};
use crate::linalg::{trace_norm, Matrix};
use crate::thermal::phase::phase_factor;
use crate::thermal::{product_eigenbasis, total_hamiltonian, Hamiltonian};
use crate::{ComplexMatrix, Ket};

/// Tolerance on `‖U†U − I‖_max` and on ket orthonormality.
pub const UNITARY_TOL: f64 = 1e-10;
/// Tolerance on `‖H|k⟩ − E|k⟩‖` when certifying eigenvectors.
pub const EIGENVECTOR_TOL: f64 = 1e-9;

/// Unitary specification on the span of a set of kets.
#[derive(Debug, Clone, PartialEq)]
pub enum BlockParams {
    /// `Σ_k e^{−iα_k}|k⟩⟨k|`
    Phases { kets: Vec<Ket>, phases: Vec<f64> },
    /// `Σ_ab u_ab |k_a⟩⟨k_b|`; all kets must share one energy.
    Unitary { kets: Vec<Ket>, matrix: ComplexMatrix },
}

impl BlockParams {
    fn kets(&self) -> &[Ket] {
        match self {
            BlockParams::Phases { kets, .. } | BlockParams::Unitary { kets, .. } => kets,
        }
    }

    fn local_unitary(&self) -> Result<ComplexMatrix> {
        match self {
            BlockParams::Phases { kets, phases } => {
                if kets.len() != phases.len() {
                    return Err(Error::NonUnitaryBlock(format!("{} kets but {} phases", kets.len(), phases.len())));
                }
                let diag: Vec<_> = phases.iter().map(|&a| phase_factor(a)).collect();
                Ok(Matrix::from_diagonal(&diag))
            }
            BlockParams::Unitary { kets, matrix } => {
                if matrix.rows() != kets.len() || matrix.cols() != kets.len() {
                    return Err(Error::NonUnitaryBlock(format!(
                        "{}x{} block matrix for {} kets",
                        matrix.rows(),
                        matrix.cols(),
                        kets.len()
                    )));
                }
                let defect = matrix.unitarity_defect();
                if defect > UNITARY_TOL {
                    return Err(Error::NonUnitaryBlock(format!("‖u†u − I‖ = {defect:e}")));
                }
                Ok(matrix.clone())
            }
        }
    }
}

/// One block of a global unitary: basis kets, the block unitary on them and
/// the common energy (`None` when the block mixes levels, which only
/// happens for unchecked constructions).
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyBlock {
    pub energy: Option<f64>,
    pub kets: Vec<Ket>,
    pub unitary: ComplexMatrix,
}

/// Global unitary on `d_sys·d_bath` dimensions with its block structure.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyBlockUnitary {
    matrix: ComplexMatrix,
    blocks: Vec<EnergyBlock>,
    energy_preserving: bool,
}

impl EnergyBlockUnitary {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn blocks(&self) -> &[EnergyBlock] {
        &self.blocks
    }

    /// Whether the construction certified `[U, H_T] = 0`.
    pub fn energy_preserving(&self) -> bool {
        self.energy_preserving
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn identity(d: usize) -> Self {
        let kets: Vec<Ket> = (0..d).map(|i| Ket::basis(d, i)).collect();
        let blocks = kets
            .into_iter()
            .map(|k| EnergyBlock { energy: None, kets: vec![k], unitary: Matrix::identity(1) })
            .collect();
        Self { matrix: Matrix::identity(d), blocks, energy_preserving: true }
    }

    /// Phases on an arbitrary orthonormal basis, without any energy check.
    pub fn from_phases_unchecked(kets: Vec<Ket>, phases: &[f64]) -> Result<Self> {
        let params = BlockParams::Phases { kets, phases: phases.to_vec() };
        let (matrix, blocks) = assemble(&[params], None)?;
        Ok(Self { matrix, blocks, energy_preserving: false })
    }

    /// `Σ_{iR} e^{−iα_{iR}} |i R⟩⟨i R|` in the product eigenbasis of
    /// `H_S ⊗ I + I ⊗ H_B`, phases listed system-major in reference order.
    pub fn phase_diagonal(h_sys: &Hamiltonian, h_bath: &Hamiltonian, phases: &[f64]) -> Result<Self> {
        let basis = product_eigenbasis(h_sys, h_bath);
        if phases.len() != basis.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} phases for a {}-dimensional space",
                phases.len(),
                basis.len()
            )));
        }
        let params: Vec<BlockParams> = basis
            .into_iter()
            .zip(phases)
            .map(|((_, _, _, k), &a)| BlockParams::Phases { kets: vec![k], phases: vec![a] })
            .collect();
        build_block_unitary(&total_hamiltonian(h_sys, h_bath), &params)
    }

    /// Same single-ket blocks with new phases. Keeps the energy certificate
    /// of `self`, so it only applies to phase-diagonal unitaries.
    pub fn rephased(&self, phases: &[f64]) -> Result<Self> {
        if phases.len() != self.blocks.len() || self.blocks.iter().any(|b| b.kets.len() != 1) {
            return Err(Error::DimensionMismatch(format!(
                "{} phases for a unitary with {} blocks",
                phases.len(),
                self.blocks.len()
            )));
        }
        let d = self.dim();
        let mut matrix = Matrix::zeros(d, d);
        let mut blocks = self.blocks.clone();
        for (b, &a) in blocks.iter_mut().zip(phases) {
            let c = phase_factor(a);
            let amps = b.kets[0].amplitudes();
            for (i, x) in amps.iter().enumerate() {
                for (j, y) in amps.iter().enumerate() {
                    matrix[(i, j)] += c * *x * y.conj();
                }
            }
            b.unitary = Matrix::from_diagonal(&[c]);
        }
        Ok(Self { matrix, blocks, energy_preserving: self.energy_preserving })
    }
}

/// Assembles `U = Σ_blocks Σ_ab u_ab |k_a⟩⟨k_b|`, certifying that every ket
/// is an eigenvector of `h_total`, that the kets form an orthonormal basis
/// and that each block is unitary.
pub fn build_block_unitary(h_total: &Hamiltonian, params: &[BlockParams]) -> Result<EnergyBlockUnitary> {
    let (matrix, blocks) = assemble(params, Some(h_total))?;
    Ok(EnergyBlockUnitary { matrix, blocks, energy_preserving: true })
}

fn assemble(params: &[BlockParams], h: Option<&Hamiltonian>) -> Result<(ComplexMatrix, Vec<EnergyBlock>)> {
    let all: Vec<&Ket> = params.iter().flat_map(|p| p.kets()).collect();
    let d = all.first().map(|k| k.dim()).unwrap_or(0);
    if all.len() != d || all.iter().any(|k| k.dim() != d) {
        return Err(Error::NonUnitaryBlock(format!("{} kets do not form a basis of dimension {d}", all.len())));
    }
    if let Some(h) = h {
        if h.dim() != d {
            return Err(Error::DimensionMismatch(format!("{d}-dimensional kets for a {}-level Hamiltonian", h.dim())));
        }
    }
    for a in 0..d {
        for b in a..d {
            let want = if a == b { 1.0 } else { 0.0 };
            let got = all[a].inner(all[b]);
            if (got.re - want).abs() > UNITARY_TOL || got.im.abs() > UNITARY_TOL {
                return Err(Error::NonUnitaryBlock(format!("kets {a} and {b} are not orthonormal (⟨a|b⟩ = {got})")));
            }
        }
    }

    let mut matrix = Matrix::zeros(d, d);
    let mut blocks = Vec::with_capacity(params.len());
    let mut index = 0;
    for p in params {
        let u = p.local_unitary()?;
        let kets = p.kets();
        let mut energy = None;
        if let Some(h) = h {
            let energies = kets
                .iter()
                .enumerate()
                .map(|(k, ket)| {
                    eigen_energy(h, ket)
                        .ok_or(Error::NotEnergyEigenvector { index: index + k, residual: residual(h, ket) })
                })
                .collect::<Result<Vec<f64>>>()?;
            let spread = energies.iter().fold(0.0f64, |m, e| m.max((e - energies[0]).abs()));
            let diagonal = (0..u.rows()).all(|a| (0..u.cols()).all(|b| a == b || u[(a, b)].norm() == 0.0));
            let same_level = spread <= EIGENVECTOR_TOL * h.energies().iter().fold(1.0f64, |m, e| m.max(e.abs()));
            if !same_level && !diagonal {
                return Err(Error::NonUnitaryBlock(format!("block {} mixes different energies", blocks.len())));
            }
            energy = energies.first().copied().filter(|_| same_level);
        }
        for (a, ka) in kets.iter().enumerate() {
            for (b, kb) in kets.iter().enumerate() {
                let c = u[(a, b)];
                if c.norm() == 0.0 {
                    continue;
                }
                for (i, x) in ka.amplitudes().iter().enumerate() {
                    for (j, y) in kb.amplitudes().iter().enumerate() {
                        matrix[(i, j)] += c * *x * y.conj();
                    }
                }
            }
        }
        blocks.push(EnergyBlock { energy, kets: kets.to_vec(), unitary: u });
        index += kets.len();
    }
    Ok((matrix, blocks))
}

fn residual(h: &Hamiltonian, ket: &Ket) -> f64 {
    let hk = h.matrix().apply(ket.amplitudes());
    let e: f64 = ket.amplitudes().iter().zip(&hk).map(|(a, b)| (a.conj() * b).re).sum();
    hk.iter().zip(ket.amplitudes()).map(|(x, a)| (x - a * e).norm_sqr()).sum::<f64>().sqrt()
}

/// `⟨k|H|k⟩` when `|k⟩` is an eigenvector within tolerance.
fn eigen_energy(h: &Hamiltonian, ket: &Ket) -> Option<f64> {
    let scale = h.matrix().max_abs().max(1.0);
    if residual(h, ket) > EIGENVECTOR_TOL * scale {
        return None;
    }
    let hk = h.matrix().apply(ket.amplitudes());
    Some(ket.amplitudes().iter().zip(&hk).map(|(a, b)| (a.conj() * b).re).sum())
}

/// Trace norm of `[U, H]`.
pub fn commutator_norm(u: &ComplexMatrix, h: &ComplexMatrix) -> f64 {
    trace_norm(&u.commutator(h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    fn ket(v: &[f64]) -> Ket {
        Ket::new(v.iter().map(|&x| Complex::new(x, 0.0)).collect()).unwrap()
    }

    #[test]
    fn zero_phases_give_identity() {
        let z = Hamiltonian::pauli_z();
        let u = EnergyBlockUnitary::phase_diagonal(&z, &z, &[0.0; 4]).unwrap();
        assert!(u.matrix().approx_eq(&Matrix::identity(4), 1e-15));
    }

    #[test]
    fn rejects_non_eigenvector() {
        let z = Hamiltonian::pauli_z();
        let ht = total_hamiltonian(&z, &z);
        let s = 0.5f64.sqrt();
        let params = vec![
            BlockParams::Phases { kets: vec![ket(&[s, s, 0.0, 0.0])], phases: vec![0.1] },
            BlockParams::Phases { kets: vec![ket(&[s, -s, 0.0, 0.0])], phases: vec![0.2] },
            BlockParams::Phases { kets: vec![ket(&[0.0, 0.0, 1.0, 0.0])], phases: vec![0.3] },
            BlockParams::Phases { kets: vec![ket(&[0.0, 0.0, 0.0, 1.0])], phases: vec![0.4] },
        ];
        assert!(matches!(build_block_unitary(&ht, &params), Err(Error::NotEnergyEigenvector { index: 0, .. })));
    }

    #[test]
    fn rejects_non_unitary_block() {
        let z = Hamiltonian::pauli_z();
        let ht = total_hamiltonian(&z, &z);
        let params = vec![
            BlockParams::Phases { kets: vec![ket(&[1.0, 0.0, 0.0, 0.0])], phases: vec![0.0] },
            BlockParams::Phases { kets: vec![ket(&[0.0, 0.0, 0.0, 1.0])], phases: vec![0.0] },
            BlockParams::Unitary {
                kets: vec![ket(&[0.0, 1.0, 0.0, 0.0]), ket(&[0.0, 0.0, 1.0, 0.0])],
                matrix: Matrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]),
            },
        ];
        assert!(matches!(build_block_unitary(&ht, &params), Err(Error::NonUnitaryBlock(_))));
    }

    #[test]
    fn rejects_incomplete_basis() {
        let z = Hamiltonian::pauli_z();
        let ht = total_hamiltonian(&z, &z);
        let params = vec![BlockParams::Phases { kets: vec![ket(&[1.0, 0.0, 0.0, 0.0])], phases: vec![0.0] }];
        assert!(build_block_unitary(&ht, &params).is_err());
    }
}
