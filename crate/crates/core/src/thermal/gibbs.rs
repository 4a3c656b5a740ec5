//! Thermal (Gibbs) states.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::thermal::Hamiltonian;
use crate::DensityMatrix;

/// `e^{−βH}/Tr e^{−βH}` together with its source Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct GibbsState {
    state: DensityMatrix,
    weights: Vec<f64>,
    beta: f64,
    source: Hamiltonian,
}

impl GibbsState {
    pub fn state(&self) -> &DensityMatrix {
        &self.state
    }

    /// Boltzmann weight of each ascending eigenlevel of the source.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn source(&self) -> &Hamiltonian {
        &self.source
    }
}

/// Gibbs state at inverse temperature `beta`; `f64::INFINITY` selects the
/// ground state, which must be unique.
pub fn gibbs_state(h: &Hamiltonian, beta: f64) -> Result<GibbsState> {
    if beta.is_nan() || beta < 0.0 {
        return Err(Error::InvalidBeta(beta));
    }
    let e = h.energies();
    let weights = if beta.is_infinite() {
        let ground = &h.eigenspaces()[0].1;
        if ground.len() > 1 {
            return Err(Error::AmbiguousZeroTemperature { degeneracy: ground.len() });
        }
        let mut w = vec![0.0; e.len()];
        w[0] = 1.0;
        w
    } else {
        // shift by the ground energy so large β cannot overflow
        let raw: Vec<f64> = e.iter().map(|&x| (-beta * (x - e[0])).exp()).collect();
        let z: f64 = raw.iter().sum();
        raw.into_iter().map(|x| x / z).collect()
    };
    let v = h.eigenvector_matrix();
    let m = v.conjugate(&Matrix::from_real_diagonal(&weights)).hermitian_part();
    let state = DensityMatrix::from_matrix_unchecked(m, vec![h.dim()])?;
    Ok(GibbsState { state, weights, beta, source: h.clone() })
}

/// `1/T` with `T = 0` mapped to `β = ∞`.
pub fn beta_from_temperature(t: f64) -> Result<f64> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::InvalidBeta(f64::NAN));
    }
    Ok(if t == 0.0 { f64::INFINITY } else { 1.0 / t })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinite_temperature_is_maximally_mixed() {
        let g = gibbs_state(&Hamiltonian::gell_mann(1).unwrap(), 0.0).unwrap();
        assert!(g.state().matrix().approx_eq(&Matrix::identity(3).scale_real(1.0 / 3.0), 1e-15));
    }

    #[test]
    fn pauli_z_closed_form() {
        let g = gibbs_state(&Hamiltonian::pauli_z(), 1.0).unwrap();
        let z = 2.0 * 1f64.cosh();
        let want = Matrix::from_real_diagonal(&[(-1f64).exp() / z, 1f64.exp() / z]);
        assert!(g.state().matrix().approx_eq(&want, 1e-15));
    }

    #[test]
    fn zero_temperature() {
        let g = gibbs_state(&Hamiltonian::pauli_z(), f64::INFINITY).unwrap();
        assert!(g.state().matrix().approx_eq(&Matrix::from_real_diagonal(&[0.0, 1.0]), 0.0));
        let degenerate = Hamiltonian::identity(2);
        assert!(matches!(
            gibbs_state(&degenerate, f64::INFINITY),
            Err(Error::AmbiguousZeroTemperature { degeneracy: 2 })
        ));
        assert!(matches!(gibbs_state(&degenerate, -1.0), Err(Error::InvalidBeta(_))));
    }
}
