//! Closed-form carrier-load statistics under i.i.d. Rayleigh fading.
//!
//! With unit-mean Rayleigh amplitudes the gains are i.i.d. Exp(1), so a
//! ratio `h/h′` exceeds `t` with probability `1/(1 + t)`. For two users on
//! two carriers this turns the equilibrium regions into explicit
//! probabilities in `Θ_0` and `Θ_2`.

use serde::{Deserialize, Serialize};

use crate::efficiency::EfficiencyModel;

/// Distribution of `X₁`, the number of users on carrier 1 at equilibrium,
/// for `K = D = 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoUserPmf {
    /// Both users on carrier 2.
    pub p0: f64,
    /// One user per carrier.
    pub p1: f64,
    /// Both users on carrier 1.
    pub p2: f64,
    /// No equilibrium exists.
    pub p_none: f64,
}

impl TwoUserPmf {
    pub fn existence(&self) -> f64 {
        1.0 - self.p_none
    }

    /// `[P(0), P(1), P(2)]`.
    pub fn masses(&self) -> [f64; 3] {
        [self.p0, self.p1, self.p2]
    }
}

/// Exact pmf of the carrier-1 load for two users and two carriers.
///
/// When `N ≤ γ*` two users cannot share a carrier at the SIR target and the
/// same-carrier masses are taken as zero.
pub fn pmf_two_user(processing_gain: f64, model: &EfficiencyModel) -> TwoUserPmf {
    let ratio = model.gamma_star() / processing_gain;
    let theta0 = 1.0 / (1.0 + ratio);
    // one user per carrier; the same expression holds in both regimes
    let p1 = 2.0 * (1.0 / (1.0 + theta0)).powi(2) - ((1.0 - theta0) / (1.0 + theta0)).powi(2);
    let none_without_sharing = 2.0 * (theta0 / (1.0 + theta0)).powi(2);

    if processing_gain > model.gamma_star() {
        let theta2 = 1.0 / (1.0 - ratio);
        let same = (1.0 / (1.0 + theta2)).powi(2);
        TwoUserPmf {
            p0: same,
            p1,
            p2: same,
            p_none: none_without_sharing - 2.0 * same,
        }
    } else {
        TwoUserPmf {
            p0: 0.0,
            p1,
            p2: 0.0,
            p_none: none_without_sharing,
        }
    }
}

/// Large-`N` limit of the carrier-1 load: Binomial(K, 1/2).
pub fn asymptotic_pmf(users: usize) -> Vec<f64> {
    // log-domain recurrence keeps large K free of overflow
    let k = users as f64;
    let base = -k * std::f64::consts::LN_2;
    let mut log_choose = 0.0;
    let mut out = Vec::with_capacity(users + 1);
    for m in 0..=users {
        if m > 0 {
            log_choose += ((k - m as f64 + 1.0) / m as f64).ln();
        }
        out.push((log_choose + base).exp());
    }
    out
}

/// Total-variation distance `½ Σ |p − q|`, padding the shorter input with
/// zeros.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    let n = p.len().max(q.len());
    0.5 * (0..n)
        .map(|i| (p.get(i).copied().unwrap_or(0.0) - q.get(i).copied().unwrap_or(0.0)).abs())
        .sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn model() -> EfficiencyModel {
        EfficiencyModel::new(100).unwrap()
    }

    #[test]
    fn pmf_at_sixteen() {
        // mpmath with γ* = 6.4746003795893581
        let pmf = pmf_two_user(16.0, &model());
        assert_relative_eq!(pmf.p2, 0.139_258_370_611, max_relative = 1e-9);
        assert_relative_eq!(pmf.p1, 0.654_122_966_4, max_relative = 1e-9);
        assert_relative_eq!(pmf.p_none, 0.067_360_292_377_7, max_relative = 1e-9);
        assert_eq!(pmf.p0, pmf.p2);
        // close to 93%
        assert!((pmf.existence() - 0.93).abs() < 0.01);
    }

    #[test]
    fn pmf_below_target_gain() {
        let pmf = pmf_two_user(4.0, &model());
        assert_eq!(pmf.p0, 0.0);
        assert_eq!(pmf.p2, 0.0);
        assert_relative_eq!(pmf.p_none, 0.152_734_382_543, max_relative = 1e-9);
        assert_relative_eq!(pmf.p1, 0.847_265_617_457, max_relative = 1e-9);
    }

    #[test]
    fn pmf_large_gain_limit() {
        let pmf = pmf_two_user(1e9, &model());
        assert!((pmf.p0 - 0.25).abs() < 1e-6);
        assert!((pmf.p1 - 0.5).abs() < 1e-6);
        assert!(pmf.p_none.abs() < 1e-6);
        let limit = asymptotic_pmf(2);
        assert!(total_variation(&pmf.masses(), &limit) < 1e-6);
    }

    #[test]
    fn binomial_limit() {
        let p = asymptotic_pmf(2);
        assert_relative_eq!(p[0], 0.25, max_relative = 1e-14);
        assert_relative_eq!(p[1], 0.5, max_relative = 1e-14);
        assert_relative_eq!(p[2], 0.25, max_relative = 1e-14);
        assert_relative_eq!(asymptotic_pmf(10)[5], 252.0 / 1024.0, max_relative = 1e-13);
        for k in [1, 7, 50, 2000] {
            let total: f64 = asymptotic_pmf(k).iter().sum();
            assert!((total - 1.0).abs() < 1e-10, "K={k}: {total}");
        }
    }

    #[test]
    fn total_variation_pads() {
        assert_eq!(total_variation(&[0.5, 0.5], &[0.5, 0.5]), 0.0);
        assert_relative_eq!(total_variation(&[1.0], &[0.5, 0.5]), 0.5);
    }
}
