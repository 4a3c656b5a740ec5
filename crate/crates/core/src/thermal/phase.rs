//! Reduction of large phases modulo 2π.
//!
//! Unitary parameters in the hundreds of millions lose every significant
//! digit if `e^{-iα}` is evaluated directly with a libm `sin`/`cos` whose
//! argument reduction is unknown. The reduction here is explicit: Cody–Waite
//! with a three-part 2π, exact for `|α| < 2^52 · ulp(2π)` in the leading step.

use num_complex::Complex;

const TWO_PI_HI: f64 = std::f64::consts::TAU;
const TWO_PI_LO: f64 = 2.4492935982947064e-16;
const TWO_PI_LO2: f64 = -5.989539619436679e-33;

/// `α mod 2π` in `[0, 2π)`.
pub fn reduce_mod_2pi(alpha: f64) -> f64 {
    if !alpha.is_finite() {
        return f64::NAN;
    }
    let k = (alpha / TWO_PI_HI).floor();
    // exact: both operands are multiples of ulp(TWO_PI_HI) and the result is small
    let t = (-k).mul_add(TWO_PI_HI, alpha);
    let p = k * TWO_PI_LO;
    let pe = k.mul_add(TWO_PI_LO, -p);
    let r = (t - p) - (pe + k * TWO_PI_LO2);
    if r < 0.0 {
        r + TWO_PI_HI
    } else if r >= TWO_PI_HI {
        r - TWO_PI_HI
    } else {
        r
    }
}

/// `e^{-iα}` with `α` reduced first.
pub fn phase_factor(alpha: f64) -> Complex<f64> {
    let r = reduce_mod_2pi(alpha);
    Complex::new(r.cos(), -r.sin())
}

/// Wraps into `(−π, π]`.
pub fn wrap_pi(x: f64) -> f64 {
    let r = reduce_mod_2pi(x);
    if r > std::f64::consts::PI {
        r - TWO_PI_HI
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // reference values from 50-digit arithmetic
    const FROZEN: &[(f64, f64)] = &[
        (1e4, 3.4521762772779154),
        (4e4, 1.242334494752488),
        (4e5, 6.140159640345292),
        (18e7, 4.7534883035431434),
        (30e7, 5.828085403512043),
        (60e7, 5.3729854998445),
        (80e7, 2.9751904616729425),
        (70e7, 1.0324953271689283),
        (90e7, 4.917885596176957),
        (123456789.25, 1.6800726427748225),
    ];

    #[test]
    fn matches_high_precision_reference() {
        for &(a, r) in FROZEN {
            let got = reduce_mod_2pi(a);
            assert!((got - r).abs() <= 2e-15, "{a}: {got} vs {r}");
        }
    }

    #[test]
    fn negative_and_small() {
        assert!((reduce_mod_2pi(-1.0) - (TWO_PI_HI - 1.0)).abs() < 1e-15);
        assert_eq!(reduce_mod_2pi(0.5), 0.5);
        assert!((wrap_pi(3.0 * std::f64::consts::PI / 2.0) + std::f64::consts::PI / 2.0).abs() < 1e-15);
    }
}
