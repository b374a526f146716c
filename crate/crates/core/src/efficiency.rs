//! Packet success rate model and its utility-maximizing SIR.
//!
//! The efficiency function is `f(γ) = (1 − e^{−γ})^M`, the probability that
//! an `M`-bit packet survives when each bit fails with probability `e^{−γ}`.
//! The ratio `f(γ)/p` for `γ = ĥ·p` peaks where `f(γ) = γ f′(γ)`. For this
//! `f` the common factor `(1 − e^{−γ})^{M−1}` cancels and the condition
//! reduces to `e^γ = 1 + Mγ`, which is what the solver brackets.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Default bracket for the SIR target.
pub const GAMMA_STAR_BRACKET: (f64, f64) = (1e-6, 100.0);

/// Default tolerance on the root location.
pub const GAMMA_STAR_TOLERANCE: f64 = 1e-10;

/// Sigmoidal efficiency `f(γ) = (1 − e^{−γ})^M` with its cached SIR target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyModel {
    exponent: u32,
    gamma_star: f64,
}

impl EfficiencyModel {
    /// Builds the model and solves for `γ*` at [`GAMMA_STAR_TOLERANCE`].
    pub fn new(exponent: u32) -> Result<Self> {
        Self::with_tolerance(exponent, GAMMA_STAR_TOLERANCE)
    }

    pub fn with_tolerance(exponent: u32, tol: f64) -> Result<Self> {
        if exponent == 0 {
            return Err(Error::invalid("efficiency_exponent", "must be at least 1"));
        }
        let gamma_star = gamma_star(exponent, tol)?;
        Ok(Self {
            exponent,
            gamma_star,
        })
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    /// The SIR that maximizes `f(γ)/γ`, i.e. the root of `f(γ) = γ f′(γ)`.
    pub fn gamma_star(&self) -> f64 {
        self.gamma_star
    }

    /// `f(γ)`; rejects negative SIR.
    pub fn efficiency(&self, gamma: f64) -> Result<f64> {
        if gamma < 0.0 || gamma.is_nan() {
            return Err(Error::NegativeSir(gamma));
        }
        Ok(self.eval(gamma))
    }

    /// Unchecked evaluation for callers that already hold a valid SIR.
    pub(crate) fn eval(&self, gamma: f64) -> f64 {
        // 1 - e^{-γ} without cancellation near zero
        let success = -(-gamma).exp_m1();
        success.powi(self.exponent as i32)
    }

    /// `f′(γ) = M e^{−γ} (1 − e^{−γ})^{M−1}`.
    pub fn derivative(&self, gamma: f64) -> f64 {
        let success = -(-gamma).exp_m1();
        self.exponent as f64 * (-gamma).exp() * success.powi(self.exponent as i32 - 1)
    }

    /// `f(γ) − γ f′(γ)`, zero at the SIR target.
    pub fn stationarity_residual(&self, gamma: f64) -> f64 {
        self.eval(gamma) - gamma * self.derivative(gamma)
    }
}

/// Solves `e^γ = 1 + Mγ` by bisection on [`GAMMA_STAR_BRACKET`].
///
/// For `M = 1` the reduced equation has no positive root and the solver
/// reports [`Error::NoSignChange`].
pub fn gamma_star(exponent: u32, tol: f64) -> Result<f64> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::invalid(
            "tol",
            format!("must be positive, got {tol}"),
        ));
    }
    let m = exponent as f64;
    let (lo, hi) = GAMMA_STAR_BRACKET;
    bisect(|g| g.exp_m1() - m * g, lo, hi, tol)
}

/// Bisection for a sign change of `f` on `[lo, hi]`, stopping once the
/// bracket is narrower than `tol`.
pub fn bisect<F>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let (bracket_lo, bracket_hi) = (lo, hi);
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoSignChange {
            lo: bracket_lo,
            hi: bracket_hi,
        });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `10·log10(x)`.
pub fn to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // 40-digit bisection of e^γ = 1 + 100γ (mpmath).
    const GAMMA_STAR_M100: f64 = 6.474_600_379_589_358;

    #[test]
    fn efficiency_endpoints() {
        let model = EfficiencyModel::new(100).unwrap();
        assert_eq!(model.efficiency(0.0).unwrap(), 0.0);
        assert!(model.efficiency(50.0).unwrap() > 1.0 - 1e-9);
    }

    #[test]
    fn efficiency_at_six_point_four() {
        // (1 - e^{-6.4})^100 from mpmath at 40 digits
        let model = EfficiencyModel::new(100).unwrap();
        assert_relative_eq!(
            model.efficiency(6.4).unwrap(),
            0.846_797_307_754_895_5,
            max_relative = 1e-13
        );
    }

    #[test]
    fn negative_sir_rejected() {
        let model = EfficiencyModel::new(100).unwrap();
        assert!(matches!(model.efficiency(-0.1), Err(Error::NegativeSir(_))));
    }

    #[test]
    fn gamma_star_matches_oracle() {
        let g = gamma_star(100, 1e-10).unwrap();
        assert!((g - GAMMA_STAR_M100).abs() < 1e-9);
        // near the rounded report of 6.4 (8.1 dB)
        assert!((to_db(g) - 8.1).abs() < 0.1);
    }

    #[test]
    fn gamma_star_satisfies_full_stationarity() {
        for m in [2, 10, 50, 100, 500] {
            let model = EfficiencyModel::new(m).unwrap();
            let g = model.gamma_star();
            assert!(g > 0.0);
            assert!(model.stationarity_residual(g).abs() < GAMMA_STAR_TOLERANCE);
        }
    }

    #[test]
    fn unit_exponent_has_no_target() {
        assert!(matches!(
            EfficiencyModel::new(1),
            Err(Error::NoSignChange { .. })
        ));
    }

    #[test]
    fn rejects_bad_tolerance() {
        assert!(gamma_star(100, 0.0).is_err());
        assert!(gamma_star(100, -1.0).is_err());
        assert!(gamma_star(100, f64::NAN).is_err());
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let model = EfficiencyModel::new(100).unwrap();
        for g in [0.5, 3.0, 6.4, 10.0] {
            let h = 1e-6;
            let fd = (model.eval(g + h) - model.eval(g - h)) / (2.0 * h);
            assert_relative_eq!(model.derivative(g), fd, max_relative = 1e-6);
        }
    }

    #[test]
    fn efficiency_is_monotone() {
        let model = EfficiencyModel::new(100).unwrap();
        let mut prev = model.eval(0.0);
        for i in 1..2000 {
            let g = i as f64 * 0.01;
            let f = model.eval(g);
            assert!(f >= prev);
            assert!(model.derivative(g) > 0.0);
            prev = f;
        }
    }
}
