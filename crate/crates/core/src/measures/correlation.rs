//! Correlation measures on a bipartite joint state.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{entropy_of, kron, partial_trace_op, partial_transpose, trace_norm, Matrix, Subsystem};
use crate::measures::{Diagnostics, MeasureKind, MeasureValue};
use crate::optimize::{minimize, Bound, OptimizerConfig};
use crate::{ComplexMatrix, DensityMatrix};

/// `log₂‖ρ^{Γ_A}‖₁`, in e-bits.
pub fn log_negativity(rho: &DensityMatrix) -> Result<MeasureValue> {
    rho.bipartite_dims()?;
    let pt = partial_transpose(rho, Subsystem::First)?;
    Ok(MeasureValue::plain(MeasureKind::LogNegativity, trace_norm(&pt).log2()))
}

/// `S(ρ_A) + S(ρ_B) − S(ρ_AB)` in bits.
pub fn mutual_information(rho: &DensityMatrix) -> Result<MeasureValue> {
    let dims = rho.bipartite_dims()?;
    let m = rho.matrix();
    let sa = entropy_of(&partial_trace_op(m, dims, Subsystem::First)?)?;
    let sb = entropy_of(&partial_trace_op(m, dims, Subsystem::Second)?)?;
    let sab = entropy_of(m)?;
    Ok(MeasureValue::plain(MeasureKind::MutualInformation, sa + sb - sab))
}

/// Rank-one projective measurement `{|ψ⟩⟨ψ|, I − |ψ⟩⟨ψ|}` on a qubit with
/// `|ψ⟩ = cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectiveMeasurementQubit {
    pub theta: f64,
    pub phi: f64,
}

impl ProjectiveMeasurementQubit {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        let tau = 2.0 * std::f64::consts::PI;
        if !(0.0..=std::f64::consts::PI).contains(&theta) || !(0.0..=tau).contains(&phi) {
            return Err(Error::config("measurement", format!("need θ ∈ [0, π], φ ∈ [0, 2π], got ({theta}, {phi})")));
        }
        Ok(Self { theta, phi })
    }

    pub fn ket(&self) -> [Complex<f64>; 2] {
        let (s, c) = (self.theta / 2.0).sin_cos();
        [Complex::new(c, 0.0), Complex::from_polar(s, self.phi)]
    }

    /// `(P₁, P₂)` with `P₂ = I − P₁`.
    pub fn projectors(&self) -> (ComplexMatrix, ComplexMatrix) {
        let k = self.ket();
        let p1 = Matrix::outer(&k, &k);
        let p2 = &Matrix::identity(2) - &p1;
        (p1, p2)
    }
}

/// `Σ_i p_i S(ρ^i_B)` after measuring the first (qubit) factor.
fn post_measurement_entropy(rho: &ComplexMatrix, d2: usize, m: &ProjectiveMeasurementQubit) -> f64 {
    let (p1, p2) = m.projectors();
    let id = Matrix::identity(d2);
    [p1, p2]
        .iter()
        .map(|p| {
            let big = kron(p, &id);
            let branch = big.conjugate(rho);
            let p_i = branch.trace().re;
            if p_i <= 0.0 {
                return 0.0;
            }
            let cond =
                partial_trace_op(&branch, (2, d2), Subsystem::Second).expect("dims checked").scale_real(1.0 / p_i);
            p_i * entropy_of(&cond).unwrap_or(f64::NAN)
        })
        .sum()
}

/// `S(ρ_A) − S(ρ_AB) + min_{P} Σ_i p_i S(ρ^i_B)`, measuring the first factor.
///
/// The minimum runs over qubit projective measurements; the optimum
/// `(θ*, φ*)` is reported as `diagnostics.argmin`.
pub fn discord(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<MeasureValue> {
    let (d1, d2) = rho.bipartite_dims()?;
    if d1 != 2 {
        return Err(Error::UnsupportedMeasuredDimension(d1));
    }
    let m = rho.matrix();
    let sa = entropy_of(&partial_trace_op(m, (d1, d2), Subsystem::First)?)?;
    let sab = entropy_of(m)?;
    let bounds = [Bound::new(0.0, std::f64::consts::PI), Bound::<f64>::angle()];
    let r = minimize(
        |x: &[f64]| post_measurement_entropy(m, d2, &ProjectiveMeasurementQubit { theta: x[0], phi: x[1] }),
        &bounds,
        cfg,
    )?;
    Ok(MeasureValue {
        kind: MeasureKind::Discord,
        value: sa - sab + r.value,
        diagnostics: Some(Diagnostics::from_result(&r)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Ket;

    fn bell() -> DensityMatrix {
        let s = 0.5f64.sqrt();
        let k =
            Ket::new(vec![Complex::new(s, 0.0), Complex::new(0.0, 0.0), Complex::new(0.0, 0.0), Complex::new(s, 0.0)])
                .unwrap();
        DensityMatrix::from_ket(&k).with_dims(vec![2, 2]).unwrap()
    }

    #[test]
    fn bell_state_values() {
        assert!((log_negativity(&bell()).unwrap().value - 1.0).abs() < 1e-12);
        assert!((mutual_information(&bell()).unwrap().value - 2.0).abs() < 1e-12);
        let d = discord(&bell(), &OptimizerConfig::default()).unwrap();
        assert!((d.value - 1.0).abs() < 1e-8, "{}", d.value);
    }

    #[test]
    fn projectors_complete_and_orthogonal() {
        let m = ProjectiveMeasurementQubit::new(1.1, 4.0).unwrap();
        let (p1, p2) = m.projectors();
        assert!((&p1 + &p2).approx_eq(&Matrix::identity(2), 1e-15));
        assert!((&p1 * &p2).max_abs() < 1e-15);
        assert!(ProjectiveMeasurementQubit::new(4.0, 0.0).is_err());
    }

    #[test]
    fn qutrit_measured_side_is_rejected() {
        let rho = DensityMatrix::maximally_mixed(6).with_dims(vec![3, 2]).unwrap();
        assert!(matches!(discord(&rho, &OptimizerConfig::default()), Err(Error::UnsupportedMeasuredDimension(3))));
    }
}
