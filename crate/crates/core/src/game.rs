//! Per-user quantities of the power control game.
//!
//! With matched-filter receivers the SIR of user `k` on carrier `ℓ` is
//!
//! ```text
//! γ[k][ℓ] = p[k][ℓ]·h[k][ℓ] / (σ² + (1/N)·Σ_{j≠k} p[j][ℓ]·h[j][ℓ])
//! ```
//!
//! and factors as `γ[k][ℓ] = ĥ[k][ℓ]·p[k][ℓ]` with the effective gain `ĥ`
//! depending only on the other users' powers.
//!
//! Indices panic when out of range, like slice indexing.

use crate::efficiency::EfficiencyModel;
use crate::{ChannelMatrix, PowerAllocation, SystemConfig};

/// Received interference `Σ_{j≠k} p[j][ℓ]·h[j][ℓ]` on carrier `ℓ`, before
/// the `1/N` spreading attenuation.
pub fn interference(
    channels: &ChannelMatrix,
    powers: &PowerAllocation,
    user: usize,
    carrier: usize,
) -> f64 {
    (0..channels.users())
        .filter(|&j| j != user)
        .map(|j| powers.power(j, carrier) * channels.gain(j, carrier))
        .sum()
}

fn noise_plus_interference(
    config: &SystemConfig,
    channels: &ChannelMatrix,
    powers: &PowerAllocation,
    user: usize,
    carrier: usize,
) -> f64 {
    config.noise_power
        + interference(channels, powers, user, carrier) / config.processing_gain_f64()
}

/// Matched-filter output SIR of `user` on `carrier`.
pub fn sir(
    config: &SystemConfig,
    channels: &ChannelMatrix,
    powers: &PowerAllocation,
    user: usize,
    carrier: usize,
) -> f64 {
    powers.power(user, carrier) * channels.gain(user, carrier)
        / noise_plus_interference(config, channels, powers, user, carrier)
}

/// SIRs of every user on every carrier, `[user][carrier]`.
pub fn sir_matrix(
    config: &SystemConfig,
    channels: &ChannelMatrix,
    powers: &PowerAllocation,
) -> crate::Matrix {
    let mut out = crate::Matrix::zeros(channels.users(), channels.carriers());
    for k in 0..channels.users() {
        for l in 0..channels.carriers() {
            out.set(k, l, sir(config, channels, powers, k, l));
        }
    }
    out
}

/// Effective channel gains `ĥ[k][ℓ] = h[k][ℓ] / (σ² + I[k][ℓ]/N)` of `user`
/// on every carrier. The user's own powers do not enter.
pub fn effective_gains(
    config: &SystemConfig,
    channels: &ChannelMatrix,
    powers: &PowerAllocation,
    user: usize,
) -> Vec<f64> {
    (0..channels.carriers())
        .map(|l| {
            channels.gain(user, l) / noise_plus_interference(config, channels, powers, user, l)
        })
        .collect()
}

/// Goodput `(L/M)·R·f(γ)` in bits per second.
pub fn throughput(config: &SystemConfig, model: &EfficiencyModel, gamma: f64) -> f64 {
    config.goodput_scale() * model.eval(gamma.max(0.0))
}

/// Bits delivered per joule over all carriers: total throughput over total
/// transmit power. Zero when the user is silent.
pub fn utility_joint(
    config: &SystemConfig,
    model: &EfficiencyModel,
    channels: &ChannelMatrix,
    powers: &PowerAllocation,
    user: usize,
) -> f64 {
    let total_power = powers.total_power(user);
    if total_power <= 0.0 {
        return 0.0;
    }
    let total_throughput: f64 = (0..channels.carriers())
        .map(|l| throughput(config, model, sir(config, channels, powers, user, l)))
        .sum();
    total_throughput / total_power
}

/// Sum of per-carrier utilities `Σ_ℓ T[k][ℓ]/p[k][ℓ]`; silent carriers add
/// nothing. This is the objective of a user that optimizes each carrier on
/// its own.
pub fn utility_independent_sum(
    config: &SystemConfig,
    model: &EfficiencyModel,
    channels: &ChannelMatrix,
    powers: &PowerAllocation,
    user: usize,
) -> f64 {
    (0..channels.carriers())
        .filter(|&l| powers.power(user, l) > 0.0)
        .map(|l| {
            throughput(config, model, sir(config, channels, powers, user, l))
                / powers.power(user, l)
        })
        .sum()
}

/// Index of the largest entry; the lowest index wins ties.
pub fn best_carrier(effective: &[f64]) -> usize {
    let mut best = 0;
    for (l, &g) in effective.iter().enumerate().skip(1) {
        if g > effective[best] {
            best = l;
        }
    }
    best
}

/// Utility-maximizing power vector of `user` given everyone else's powers.
///
/// The user transmits only on the carrier with the largest effective gain,
/// at the power that lands exactly on `γ*` there (capped at `P_max`). The
/// user's own row of `powers` is ignored.
pub fn best_response(
    config: &SystemConfig,
    model: &EfficiencyModel,
    channels: &ChannelMatrix,
    powers: &PowerAllocation,
    user: usize,
) -> Vec<f64> {
    let effective = effective_gains(config, channels, powers, user);
    let carrier = best_carrier(&effective);
    let mut response = vec![0.0; channels.carriers()];
    response[carrier] = (model.gamma_star() / effective[carrier]).min(config.p_max);
    response
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn model() -> EfficiencyModel {
        EfficiencyModel::new(100).unwrap()
    }

    fn cfg(users: usize, carriers: usize, n: u32) -> SystemConfig {
        SystemConfig::new(users, carriers, n)
    }

    #[test]
    fn sir_single_user_is_snr() {
        let c = cfg(1, 1, 16);
        let h = ChannelMatrix::from_rows(&[[1.0]]).unwrap();
        let p = PowerAllocation::from_rows(&[[1e-15]], 1.0).unwrap();
        assert_relative_eq!(sir(&c, &h, &p, 0, 0), 2.0, max_relative = 1e-14);
    }

    #[test]
    fn sir_equal_received_powers_tends_to_processing_gain() {
        let mut c = cfg(2, 1, 16);
        c.noise_power = 1e-300;
        let h = ChannelMatrix::from_rows(&[[1.0], [2.0]]).unwrap();
        let p = PowerAllocation::from_rows(&[[2.0], [1.0]], 10.0).unwrap();
        assert_relative_eq!(sir(&c, &h, &p, 0, 0), 16.0, max_relative = 1e-12);
    }

    #[test]
    fn sir_with_noise_and_interference() {
        // 1e-14 / (5e-16 + 1e-14/16) = 8.888...
        let c = cfg(2, 1, 16);
        let h = ChannelMatrix::from_rows(&[[1.0], [1.0]]).unwrap();
        let p = PowerAllocation::from_rows(&[[1e-14], [1e-14]], 1.0).unwrap();
        assert_relative_eq!(sir(&c, &h, &p, 0, 0), 80.0 / 9.0, max_relative = 1e-13);
    }

    #[test]
    fn effective_gain_examples() {
        let c = cfg(1, 1, 16);
        let h = ChannelMatrix::from_rows(&[[1e-13]]).unwrap();
        let p = PowerAllocation::zeros(1, 1);
        assert_relative_eq!(
            effective_gains(&c, &h, &p, 0)[0],
            200.0,
            max_relative = 1e-13
        );

        let c = cfg(2, 1, 16);
        let h = ChannelMatrix::from_rows(&[[1e-13], [1.0]]).unwrap();
        let p = PowerAllocation::from_rows(&[[0.0], [1e-14]], 1.0).unwrap();
        assert_relative_eq!(
            effective_gains(&c, &h, &p, 0)[0],
            800.0 / 9.0,
            max_relative = 1e-13
        );
    }

    #[test]
    fn throughput_examples() {
        let c = cfg(1, 1, 16);
        let m = model();
        assert_eq!(throughput(&c, &m, 0.0), 0.0);
        assert_relative_eq!(throughput(&c, &m, 60.0), 1e5, max_relative = 1e-12);
        assert_relative_eq!(
            throughput(&c, &m, 6.4),
            84_679.730_775_489_55,
            max_relative = 1e-12
        );
    }

    #[test]
    fn utilities_of_silent_user_are_zero() {
        let c = cfg(2, 2, 16);
        let m = model();
        let h = ChannelMatrix::from_rows(&[[1.0, 2.0], [0.5, 0.3]]).unwrap();
        let p = PowerAllocation::from_rows(&[[0.0, 0.0], [1e-15, 0.0]], 1.0).unwrap();
        assert_eq!(utility_joint(&c, &m, &h, &p, 0), 0.0);
        assert_eq!(utility_independent_sum(&c, &m, &h, &p, 0), 0.0);
    }

    #[test]
    fn single_carrier_utilities_agree() {
        let c = cfg(2, 1, 16);
        let m = model();
        let h = ChannelMatrix::from_rows(&[[1.3], [0.4]]).unwrap();
        let p = PowerAllocation::from_rows(&[[3e-15], [7e-15]], 1.0).unwrap();
        let joint = utility_joint(&c, &m, &h, &p, 0);
        let indep = utility_independent_sum(&c, &m, &h, &p, 0);
        let gamma = sir(&c, &h, &p, 0, 0);
        assert_relative_eq!(joint, indep, max_relative = 1e-14);
        assert_relative_eq!(
            joint,
            c.goodput_scale() * m.efficiency(gamma).unwrap() / 3e-15,
            max_relative = 1e-14
        );
    }

    #[test]
    fn best_response_single_user() {
        let c = cfg(1, 1, 16);
        let m = model();
        let h = ChannelMatrix::from_rows(&[[1e-13]]).unwrap();
        let p = PowerAllocation::zeros(1, 1);
        let br = best_response(&c, &m, &h, &p, 0);
        assert_relative_eq!(br[0], m.gamma_star() * 5e-16 / 1e-13, max_relative = 1e-14);
    }

    #[test]
    fn best_response_ties_pick_lowest_carrier() {
        let c = cfg(1, 3, 16);
        let m = model();
        let h = ChannelMatrix::from_rows(&[[0.5, 0.7, 0.7]]).unwrap();
        let br = best_response(&c, &m, &h, &PowerAllocation::zeros(1, 3), 0);
        assert_eq!(br[0], 0.0);
        assert!(br[1] > 0.0);
        assert_eq!(br[2], 0.0);

        let h = ChannelMatrix::from_rows(&[[1.0, 1.0]]).unwrap();
        let c = cfg(1, 2, 16);
        let br = best_response(&c, &m, &h, &PowerAllocation::zeros(1, 2), 0);
        assert!(br[0] > 0.0 && br[1] == 0.0);
    }

    #[test]
    fn best_response_respects_power_cap() {
        let mut c = cfg(1, 1, 16);
        c.p_max = 1e-3;
        let m = model();
        let h = ChannelMatrix::from_rows(&[[1e-13]]).unwrap();
        let br = best_response(&c, &m, &h, &PowerAllocation::zeros(1, 1), 0);
        assert_eq!(br[0], 1e-3);
    }

    #[test]
    fn optimum_utility_closed_form() {
        // At the optimum the utility is (L/M) R f(γ*) ĥ_best / γ*.
        let c = cfg(1, 2, 16);
        let m = model();
        let h = ChannelMatrix::from_rows(&[[0.8, 1.7]]).unwrap();
        let zeros = PowerAllocation::zeros(1, 2);
        let eff = effective_gains(&c, &h, &zeros, 0);
        let br = best_response(&c, &m, &h, &zeros, 0);
        let p = PowerAllocation::from_rows(&[br], c.p_max).unwrap();
        let gs = m.gamma_star();
        assert_relative_eq!(
            utility_joint(&c, &m, &h, &p, 0),
            c.goodput_scale() * m.efficiency(gs).unwrap() * eff[1] / gs,
            max_relative = 1e-12
        );
    }

    #[test]
    fn best_response_beats_power_grid() {
        // brute force over a 200x200 grid on [0, 2γ*/min ĥ]^2
        let c = cfg(2, 2, 16);
        let m = model();
        let h = ChannelMatrix::from_rows(&[[0.9, 1.4], [0.6, 0.2]]).unwrap();
        let mut p = PowerAllocation::from_rows(&[[0.0, 0.0], [4e-15, 0.0]], 1.0).unwrap();
        let eff = effective_gains(&c, &h, &p, 0);
        let br = best_response(&c, &m, &h, &p, 0);
        p.set_row(0, &br);
        let best = utility_joint(&c, &m, &h, &p, 0);
        let upper = 2.0 * m.gamma_star() / eff.iter().copied().fold(f64::INFINITY, f64::min);
        let steps = 200;
        let mut grid_max: f64 = 0.0;
        for i in 0..steps {
            for j in 0..steps {
                let row = [
                    upper * i as f64 / (steps - 1) as f64,
                    upper * j as f64 / (steps - 1) as f64,
                ];
                p.set_row(0, &row);
                grid_max = grid_max.max(utility_joint(&c, &m, &h, &p, 0));
            }
        }
        assert!(best >= grid_max * (1.0 - 1e-9), "{best} < {grid_max}");
    }

    #[test]
    fn independent_optimum_sits_at_gamma_star_per_carrier() {
        // 1-D search on each carrier separately
        let c = cfg(1, 2, 16);
        let m = model();
        let h = ChannelMatrix::from_rows(&[[0.8, 1.7]]).unwrap();
        let zeros = PowerAllocation::zeros(1, 2);
        let eff = effective_gains(&c, &h, &zeros, 0);
        for l in 0..2 {
            let target = m.gamma_star() / eff[l];
            let mut best = (0.0, f64::NEG_INFINITY);
            for i in 1..=20_000 {
                let pw = target * 3.0 * i as f64 / 20_000.0;
                let mut row = [0.0; 2];
                row[l] = pw;
                let p = PowerAllocation::from_rows(&[row], 1.0).unwrap();
                let u = utility_independent_sum(&c, &m, &h, &p, 0);
                if u > best.1 {
                    best = (pw, u);
                }
            }
            assert_relative_eq!(best.0, target, max_relative = 2e-4);
        }
    }
}
