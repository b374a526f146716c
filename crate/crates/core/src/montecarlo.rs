//! Seeded Monte Carlo experiments over Rayleigh fading realizations.
//!
//! Every trial draws its own channel matrix from a ChaCha8 stream keyed by
//! `(seed, trial index)`, so a trial's outcome does not depend on which
//! thread ran it or in what order. Aggregation is a fixed-order reduction,
//! which makes serial and parallel runs bit-identical.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::efficiency::EfficiencyModel;
use crate::equilibrium::{best_response_dynamics, theta, verify_assignment, DynamicsOptions};
use crate::game::utility_joint;
use crate::{ChannelMatrix, Error, Matrix, PowerAllocation, Result, SystemConfig};

/// Identifier of the random stream layout. Changing how channels are drawn
/// from the generator requires bumping it.
pub const PRNG_ID: &str = "chacha8-seed_from_u64-stream_per_trial-v1";

/// Every `SPOT_CHECK_STRIDE`-th trial re-verifies its converged outcome.
pub const SPOT_CHECK_STRIDE: u64 = 100;

/// Generator for one trial: ChaCha8 keyed by `seed`, stream = trial index.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Exp(1) variate by inversion of a uniform on the open interval (0, 1).
pub fn unit_exponential<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
    let u = ((rng.next_u64() >> 11) as f64 + 0.5) * SCALE;
    -u.ln()
}

/// `users × carriers` i.i.d. Exp(1) power gains, filled row by row.
pub fn sample_channels<R: RngCore + ?Sized>(
    rng: &mut R,
    users: usize,
    carriers: usize,
) -> ChannelMatrix {
    let mut gains = Matrix::zeros(users, carriers);
    for k in 0..users {
        for l in 0..carriers {
            gains.set(k, l, unit_exponential(rng));
        }
    }
    ChannelMatrix::new(gains).expect("exponential draws are finite and positive")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

/// Parameter points visited by an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Sweep {
    /// Only the base configuration.
    Base,
    ProcessingGain(Vec<u32>),
    Users(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub base: SystemConfig,
    pub trials: u64,
    pub dynamics: DynamicsOptions,
    pub seed: u64,
    pub sweep: Sweep,
    pub execution: Execution,
}

impl ExperimentSpec {
    /// 20,000 realizations and 20 rounds of dynamics per realization.
    pub fn new(base: SystemConfig, seed: u64) -> Self {
        Self {
            base,
            trials: 20_000,
            dynamics: DynamicsOptions::default(),
            seed,
            sweep: Sweep::Base,
            execution: Execution::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::invalid("trials", "must be at least 1"));
        }
        self.dynamics.validate()?;
        for point in self.points() {
            point.validate()?;
        }
        Ok(())
    }

    /// The configurations visited, in sweep order.
    pub fn points(&self) -> Vec<SystemConfig> {
        match &self.sweep {
            Sweep::Base => vec![self.base.clone()],
            Sweep::ProcessingGain(values) => values
                .iter()
                .map(|&n| SystemConfig {
                    processing_gain: n,
                    ..self.base.clone()
                })
                .collect(),
            Sweep::Users(values) => values
                .iter()
                .map(|&k| SystemConfig {
                    users: k,
                    ..self.base.clone()
                })
                .collect(),
        }
    }
}

fn map_trials<T, F>(trials: u64, execution: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..trials).into_par_iter().map(f).collect()
        }
        _ => (0..trials).map(f).collect(),
    }
}

/// Empirical distribution of the carrier-1 load at one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PmfEstimate {
    pub users: usize,
    pub carriers: usize,
    pub processing_gain: u32,
    pub trials: u64,
    /// Trials that converged with `m` users on carrier 1, `m = 0..=K`.
    pub counts: Vec<u64>,
    pub no_equilibrium: u64,
    /// Converged trials with some user at `P_max`.
    pub clamped: u64,
    pub spot_checked: u64,
    pub spot_check_failures: u64,
}

impl PmfEstimate {
    pub fn frequency(&self, m: usize) -> f64 {
        self.counts[m] as f64 / self.trials as f64
    }

    pub fn frequencies(&self) -> Vec<f64> {
        (0..self.counts.len()).map(|m| self.frequency(m)).collect()
    }

    pub fn no_equilibrium_frequency(&self) -> f64 {
        self.no_equilibrium as f64 / self.trials as f64
    }

    /// Binomial standard error `sqrt(p(1 − p)/trials)`.
    pub fn standard_error(&self, p: f64) -> f64 {
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }
}

struct PmfTrial {
    load: Option<usize>,
    clamped: bool,
    spot_check: Option<bool>,
}

/// Runs the dynamics from all-zero powers on `trials` fading realizations
/// per sweep point and tallies the carrier-1 load. Runs that do not settle
/// within `max_rounds` count as having no equilibrium.
pub fn run_pmf_experiment(spec: &ExperimentSpec) -> Result<Vec<PmfEstimate>> {
    spec.validate()?;
    spec.points()
        .iter()
        .map(|config| pmf_at_point(spec, config))
        .collect()
}

fn pmf_at_point(spec: &ExperimentSpec, config: &SystemConfig) -> Result<PmfEstimate> {
    let model = config.efficiency_model()?;
    let (users, carriers) = (config.users, config.carriers);
    let outcomes = map_trials(spec.trials, spec.execution, |trial| -> Result<PmfTrial> {
        let mut rng = trial_rng(spec.seed, trial);
        let channels = sample_channels(&mut rng, users, carriers);
        let zeros = PowerAllocation::zeros(users, carriers);
        let result = best_response_dynamics(&channels, config, &model, &zeros, &spec.dynamics)?;
        let Some(assignment) = result.assignment.as_ref().filter(|_| result.converged()) else {
            return Ok(PmfTrial {
                load: None,
                clamped: false,
                spot_check: None,
            });
        };
        let spot_check = if trial % SPOT_CHECK_STRIDE == 0 && !result.clamped {
            Some(verify_assignment(assignment, &channels, config, &model)?.is_equilibrium())
        } else {
            None
        };
        Ok(PmfTrial {
            load: Some(assignment.occupancy()[0]),
            clamped: result.clamped,
            spot_check,
        })
    });

    let mut estimate = PmfEstimate {
        users,
        carriers,
        processing_gain: config.processing_gain,
        trials: spec.trials,
        counts: vec![0; users + 1],
        no_equilibrium: 0,
        clamped: 0,
        spot_checked: 0,
        spot_check_failures: 0,
    };
    for outcome in outcomes {
        let outcome = outcome?;
        match outcome.load {
            Some(m) => estimate.counts[m] += 1,
            None => estimate.no_equilibrium += 1,
        }
        estimate.clamped += outcome.clamped as u64;
        if let Some(ok) = outcome.spot_check {
            estimate.spot_checked += 1;
            estimate.spot_check_failures += (!ok) as u64;
        }
    }
    Ok(estimate)
}

/// Powers when every user runs every carrier at `γ*` with all `K` users
/// sharing each carrier: `p[k][ℓ] = γ*σ²Θ_K/h[k][ℓ]`, capped at `P_max`.
pub fn independent_baseline_powers(
    channels: &ChannelMatrix,
    config: &SystemConfig,
    model: &EfficiencyModel,
) -> Result<PowerAllocation> {
    channels.check_against(config)?;
    let load = theta(
        channels.users(),
        model.gamma_star(),
        config.processing_gain_f64(),
    )?;
    let scale = model.gamma_star() * config.noise_power * load;
    let mut powers = Matrix::zeros(channels.users(), channels.carriers());
    for k in 0..channels.users() {
        for l in 0..channels.carriers() {
            powers.set(k, l, (scale / channels.gain(k, l)).min(config.p_max));
        }
    }
    PowerAllocation::new(powers, config.p_max)
}

/// Mean total utility of joint versus per-carrier optimization at one
/// parameter point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UtilityComparison {
    pub users: usize,
    pub carriers: usize,
    pub processing_gain: u32,
    pub trials: u64,
    /// Trials whose dynamics converged; only these enter the means.
    pub converged: u64,
    /// Mean over converged trials of `Σ_k u_k` at the game outcome.
    pub mean_joint: Option<f64>,
    /// Mean over the same trials of `Σ_k u_k` under the per-carrier
    /// baseline; `None` when all `K` users cannot share a carrier.
    pub mean_independent: Option<f64>,
}

impl UtilityComparison {
    pub fn ratio(&self) -> Option<f64> {
        Some(self.mean_joint? / self.mean_independent?)
    }

    pub fn convergence_rate(&self) -> f64 {
        self.converged as f64 / self.trials as f64
    }

    pub fn baseline_feasible(&self) -> bool {
        self.mean_independent.is_some() || self.converged == 0
    }
}

fn total_utility(
    config: &SystemConfig,
    model: &EfficiencyModel,
    channels: &ChannelMatrix,
    powers: &PowerAllocation,
) -> f64 {
    (0..channels.users())
        .map(|k| utility_joint(config, model, channels, powers, k))
        .sum()
}

/// Compares the game's equilibrium utility with the all-carriers baseline
/// on the same fading realizations, for every sweep point.
pub fn compare_total_utility(spec: &ExperimentSpec) -> Result<Vec<UtilityComparison>> {
    spec.validate()?;
    spec.points()
        .iter()
        .map(|config| compare_at_point(spec, config))
        .collect()
}

fn compare_at_point(spec: &ExperimentSpec, config: &SystemConfig) -> Result<UtilityComparison> {
    let model = config.efficiency_model()?;
    let (users, carriers) = (config.users, config.carriers);
    let baseline_feasible = config.crowded_carrier_feasible(&model);

    let outcomes = map_trials(
        spec.trials,
        spec.execution,
        |trial| -> Result<Option<(f64, Option<f64>)>> {
            let mut rng = trial_rng(spec.seed, trial);
            let channels = sample_channels(&mut rng, users, carriers);
            let zeros = PowerAllocation::zeros(users, carriers);
            let result = best_response_dynamics(&channels, config, &model, &zeros, &spec.dynamics)?;
            if !result.converged() {
                return Ok(None);
            }
            let joint = total_utility(config, &model, &channels, &result.powers);
            let independent = if baseline_feasible {
                let baseline = independent_baseline_powers(&channels, config, &model)?;
                Some(total_utility(config, &model, &channels, &baseline))
            } else {
                None
            };
            Ok(Some((joint, independent)))
        },
    );

    let mut converged = 0u64;
    let mut joint_sum = 0.0;
    let mut independent_sum = 0.0;
    for outcome in outcomes {
        if let Some((joint, independent)) = outcome? {
            converged += 1;
            joint_sum += joint;
            independent_sum += independent.unwrap_or(0.0);
        }
    }
    let mean = |sum: f64| (converged > 0).then(|| sum / converged as f64);
    Ok(UtilityComparison {
        users,
        carriers,
        processing_gain: config.processing_gain,
        trials: spec.trials,
        converged,
        mean_joint: mean(joint_sum),
        mean_independent: if baseline_feasible {
            mean(independent_sum)
        } else {
            None
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::sir;
    use approx::assert_relative_eq;

    #[test]
    fn fixed_seed_is_reproducible() {
        let a = sample_channels(&mut trial_rng(42, 7), 3, 2);
        let b = sample_channels(&mut trial_rng(42, 7), 3, 2);
        assert_eq!(a, b);
        let c = sample_channels(&mut trial_rng(42, 8), 3, 2);
        assert_ne!(a, c);
    }

    #[test]
    fn exponential_moments() {
        let mut rng = trial_rng(2024, 0);
        let n = 1_000_000;
        let mut sum = 0.0;
        let mut tail = 0u64;
        for _ in 0..n {
            let h = unit_exponential(&mut rng);
            assert!(h > 0.0 && h.is_finite());
            sum += h;
            tail += (h > 1.0) as u64;
        }
        assert!((sum / n as f64 - 1.0).abs() < 0.01);
        assert!((tail as f64 / n as f64 - (-1.0f64).exp()).abs() < 0.005);
    }

    #[test]
    fn baseline_single_user_matches_per_carrier_optimum() {
        let c = SystemConfig::new(1, 2, 128);
        let m = EfficiencyModel::new(100).unwrap();
        let h = ChannelMatrix::from_rows(&[[0.5, 2.0]]).unwrap();
        let p = independent_baseline_powers(&h, &c, &m).unwrap();
        for l in 0..2 {
            assert_relative_eq!(
                p.power(0, l),
                m.gamma_star() * 5e-16 / h.gain(0, l),
                max_relative = 1e-14
            );
        }
    }

    #[test]
    fn baseline_hits_target_everywhere() {
        let c = SystemConfig::new(3, 2, 128);
        let m = EfficiencyModel::new(100).unwrap();
        let h = sample_channels(&mut trial_rng(1, 1), 3, 2);
        let p = independent_baseline_powers(&h, &c, &m).unwrap();
        for k in 0..3 {
            for l in 0..2 {
                assert!(p.power(k, l) > 0.0);
                assert_relative_eq!(sir(&c, &h, &p, k, l), m.gamma_star(), max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn baseline_equal_gains_two_users() {
        let c = SystemConfig::new(2, 2, 128);
        let m = EfficiencyModel::new(100).unwrap();
        let h = ChannelMatrix::from_rows(&[[1e-13, 1e-13], [1e-13, 1e-13]]).unwrap();
        let p = independent_baseline_powers(&h, &c, &m).unwrap();
        for k in 0..2 {
            for l in 0..2 {
                assert_relative_eq!(p.power(k, l), 0.034_097_762_738_327_44, max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn baseline_infeasible_gain() {
        let c = SystemConfig::new(3, 2, 12);
        let m = EfficiencyModel::new(100).unwrap();
        let h = sample_channels(&mut trial_rng(1, 1), 3, 2);
        assert!(matches!(
            independent_baseline_powers(&h, &c, &m),
            Err(Error::Infeasible { .. })
        ));
    }

    #[test]
    fn serial_and_parallel_agree() {
        let mut spec = ExperimentSpec::new(SystemConfig::new(3, 2, 32), 99);
        spec.trials = 500;
        spec.sweep = Sweep::ProcessingGain(vec![16, 64]);
        spec.execution = Execution::Serial;
        let serial = run_pmf_experiment(&spec).unwrap();
        spec.execution = Execution::Parallel;
        let parallel = run_pmf_experiment(&spec).unwrap();
        assert_eq!(serial, parallel);
        for est in &serial {
            assert_eq!(est.counts.iter().sum::<u64>() + est.no_equilibrium, 500);
            assert_eq!(est.spot_check_failures, 0);
            assert!(est.spot_checked > 0);
        }

        spec.sweep = Sweep::Users(vec![1, 2]);
        let a = compare_total_utility(&spec).unwrap();
        spec.execution = Execution::Serial;
        let b = compare_total_utility(&spec).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn single_user_joint_beats_baseline_every_trial() {
        let c = SystemConfig::new(1, 2, 128);
        let m = EfficiencyModel::new(100).unwrap();
        for trial in 0..200 {
            let h = sample_channels(&mut trial_rng(5, trial), 1, 2);
            let r = best_response_dynamics(
                &h,
                &c,
                &m,
                &PowerAllocation::zeros(1, 2),
                &DynamicsOptions::default(),
            )
            .unwrap();
            let joint = total_utility(&c, &m, &h, &r.powers);
            let base = independent_baseline_powers(&h, &c, &m).unwrap();
            assert!(joint >= total_utility(&c, &m, &h, &base));
        }
    }

    #[test]
    fn single_carrier_strategies_coincide() {
        let mut spec = ExperimentSpec::new(SystemConfig::new(4, 1, 128), 3);
        spec.trials = 200;
        let cmp = compare_total_utility(&spec).unwrap();
        assert_eq!(cmp[0].converged, 200);
        // agreement is limited by where the dynamics stop
        assert_relative_eq!(cmp[0].ratio().unwrap(), 1.0, max_relative = 1e-3);

        spec.dynamics = DynamicsOptions {
            max_rounds: 200,
            tolerance: 1e-12,
        };
        let cmp = compare_total_utility(&spec).unwrap();
        assert_relative_eq!(cmp[0].ratio().unwrap(), 1.0, max_relative = 1e-10);
    }

    #[test]
    fn rejects_empty_experiment() {
        let mut spec = ExperimentSpec::new(SystemConfig::new(2, 2, 16), 0);
        spec.trials = 0;
        assert!(run_pmf_experiment(&spec).is_err());
    }
}
