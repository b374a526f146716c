//! Browser bindings for the interactive demo in `www/`.
//!
//! Each export is a thin wrapper over a plain function so the numerics can
//! be tested natively.

use mccdma::analytics::pmf_two_user;
use mccdma::efficiency::EfficiencyModel;
use mccdma::equilibrium::{best_response_dynamics, classify_2x2, DynamicsOptions, Region, Status};
use mccdma::montecarlo::{
    run_pmf_experiment, sample_channels, trial_rng, Execution, ExperimentSpec, Sweep,
};
use mccdma::{ChannelMatrix, Matrix, PowerAllocation, SystemConfig};
use wasm_bindgen::prelude::*;

fn js(err: mccdma::Error) -> JsError {
    JsError::new(&err.to_string())
}

#[wasm_bindgen]
pub fn gamma_star(exponent: u32) -> Result<f64, JsError> {
    EfficiencyModel::new(exponent)
        .map(|m| m.gamma_star())
        .map_err(js)
}

/// Human-readable label for a code returned by [`region_map`].
#[wasm_bindgen]
pub fn region_name(code: u8) -> String {
    Region::ALL
        .get(code as usize)
        .map_or("unknown", |r| r.name())
        .to_string()
}

/// Equilibrium region of the two-user game over a square grid of gain
/// ratios. Column `i` sweeps user 1's `h₁₁/h₁₂` and row `j` user 2's
/// `h₂₁/h₂₂`, both from `-span_db` to `+span_db`; row 0 is the top
/// (largest ratio). Codes index `Region::ALL`.
#[wasm_bindgen]
pub fn region_map(
    processing_gain: u32,
    exponent: u32,
    resolution: usize,
    span_db: f64,
) -> Result<Vec<u8>, JsError> {
    regions(processing_gain, exponent, resolution, span_db).map_err(js)
}

pub fn regions(
    processing_gain: u32,
    exponent: u32,
    resolution: usize,
    span_db: f64,
) -> mccdma::Result<Vec<u8>> {
    let model = EfficiencyModel::new(exponent)?;
    let config = SystemConfig::new(2, 2, processing_gain);
    config.validate()?;
    let step = |i: usize| {
        let t = if resolution > 1 {
            i as f64 / (resolution - 1) as f64
        } else {
            0.5
        };
        10f64.powf((-span_db + 2.0 * span_db * t) / 10.0)
    };
    let mut out = Vec::with_capacity(resolution * resolution);
    for row in 0..resolution {
        let r2 = step(resolution - 1 - row);
        for col in 0..resolution {
            let h = ChannelMatrix::from_rows(&[[step(col), 1.0], [r2, 1.0]])?;
            let region = classify_2x2(&h, &config, &model)?;
            out.push(Region::ALL.iter().position(|r| *r == region).unwrap() as u8);
        }
    }
    Ok(out)
}

/// Load distribution of carrier 1 against processing gain.
///
/// For every entry of `processing_gains` the output holds `2(K + 2)`
/// numbers: the analytic `P(0..=K)` and no-equilibrium mass (NaN unless
/// `K = D = 2`), then the Monte-Carlo estimates of the same.
#[wasm_bindgen]
pub fn pmf_curve(
    users: usize,
    carriers: usize,
    processing_gains: Vec<u32>,
    trials: u32,
    seed: u32,
) -> Result<Vec<f64>, JsError> {
    pmf_rows(users, carriers, processing_gains, trials, seed).map_err(js)
}

pub fn pmf_rows(
    users: usize,
    carriers: usize,
    processing_gains: Vec<u32>,
    trials: u32,
    seed: u32,
) -> mccdma::Result<Vec<f64>> {
    let base = SystemConfig::new(
        users,
        carriers,
        processing_gains.first().copied().unwrap_or(1),
    );
    let model = base.efficiency_model()?;
    let mut spec = ExperimentSpec::new(base, seed as u64);
    spec.trials = trials as u64;
    spec.sweep = Sweep::ProcessingGain(processing_gains);
    spec.execution = Execution::Serial;
    let estimates = run_pmf_experiment(&spec)?;

    let mut out = Vec::with_capacity(estimates.len() * 2 * (users + 2));
    for est in &estimates {
        if users == 2 && carriers == 2 {
            let a = pmf_two_user(est.processing_gain as f64, &model);
            out.extend(a.masses());
            out.push(a.p_none);
        } else {
            out.extend(std::iter::repeat_n(f64::NAN, users + 2));
        }
        out.extend(est.frequencies());
        out.push(est.no_equilibrium_frequency());
    }
    Ok(out)
}

/// Random Rayleigh power gains, `users × carriers`, row-major.
#[wasm_bindgen]
pub fn sample_gains(users: usize, carriers: usize, seed: u32) -> Vec<f64> {
    sample_channels(&mut trial_rng(seed as u64, 0), users, carriers)
        .matrix()
        .as_slice()
        .to_vec()
}

/// Power trajectory of best-response dynamics from all-zero powers.
#[wasm_bindgen]
pub struct DynamicsTrace {
    users: usize,
    carriers: usize,
    powers: Vec<f64>,
    converged: bool,
}

#[wasm_bindgen]
impl DynamicsTrace {
    pub fn users(&self) -> usize {
        self.users
    }

    pub fn carriers(&self) -> usize {
        self.carriers
    }

    /// Rounds recorded, not counting the initial state.
    pub fn rounds(&self) -> usize {
        self.powers.len() / (self.users * self.carriers) - 1
    }

    pub fn converged(&self) -> bool {
        self.converged
    }

    /// `(rounds + 1) × users × carriers` powers in watts, row-major per
    /// round.
    pub fn powers(&self) -> Vec<f64> {
        self.powers.clone()
    }
}

#[wasm_bindgen]
pub fn dynamics_trace(
    gains: Vec<f64>,
    users: usize,
    carriers: usize,
    processing_gain: u32,
    max_rounds: usize,
) -> Result<DynamicsTrace, JsError> {
    trace(gains, users, carriers, processing_gain, max_rounds).map_err(js)
}

pub fn trace(
    gains: Vec<f64>,
    users: usize,
    carriers: usize,
    processing_gain: u32,
    max_rounds: usize,
) -> mccdma::Result<DynamicsTrace> {
    if users == 0 || carriers == 0 || gains.len() != users * carriers {
        return Err(mccdma::Error::Dimension(format!(
            "{} gains for {users} users on {carriers} carriers",
            gains.len()
        )));
    }
    let rows: Vec<&[f64]> = gains.chunks(carriers).collect();
    let channels = ChannelMatrix::new(Matrix::from_rows(&rows)?)?;
    let config = SystemConfig::new(users, carriers, processing_gain);
    let model = config.efficiency_model()?;
    let start = PowerAllocation::zeros(users, carriers);
    let mut powers = start.matrix().as_slice().to_vec();
    let mut converged = false;
    // the dynamics are deterministic, so a run capped at r rounds is the
    // trajectory's state after round r
    for r in 1..=max_rounds {
        let options = DynamicsOptions {
            max_rounds: r,
            ..DynamicsOptions::default()
        };
        let result = best_response_dynamics(&channels, &config, &model, &start, &options)?;
        powers.extend_from_slice(result.powers.matrix().as_slice());
        if result.status == Status::Converged {
            converged = true;
            break;
        }
    }
    Ok(DynamicsTrace {
        users,
        carriers,
        powers,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn region_map_is_symmetric_and_complete() {
        let res = 41;
        let map = regions(16, 100, res, 10.0).unwrap();
        assert_eq!(map.len(), res * res);
        let at = |row: usize, col: usize| Region::ALL[map[row * res + col] as usize];
        // top-right: both users favour carrier 1 strongly
        assert_eq!(at(0, res - 1), Region::BothFirst);
        assert_eq!(at(res - 1, 0), Region::BothSecond);
        // equal gains everywhere: both split assignments work
        assert_eq!(at(res / 2, res / 2), Region::TwoEquilibria);
        for code in 0..6u8 {
            assert_ne!(region_name(code), "unknown");
        }
    }

    #[test]
    fn pmf_rows_layout() {
        let out = pmf_rows(2, 2, vec![16, 128], 400, 3).unwrap();
        assert_eq!(out.len(), 2 * 8);
        for row in out.chunks(8) {
            let analytic: f64 = row[..4].iter().sum();
            let mc: f64 = row[4..].iter().sum();
            assert!((analytic - 1.0).abs() < 1e-12);
            assert!((mc - 1.0).abs() < 1e-12);
        }
        let wide = pmf_rows(3, 2, vec![64], 50, 3).unwrap();
        assert_eq!(wide.len(), 10);
        assert!(wide[..5].iter().all(|x| x.is_nan()));
    }

    #[test]
    fn trace_ends_at_target() {
        let gains = sample_gains(3, 2, 7);
        let t = trace(gains.clone(), 3, 2, 128, 20).unwrap();
        assert!(t.converged());
        assert!(t.rounds() >= 2);
        assert_eq!(t.powers().len(), (t.rounds() + 1) * 6);
        assert!(t.powers()[..6].iter().all(|&p| p == 0.0));
        assert!(trace(gains, 2, 2, 128, 20).is_err());
    }
}
