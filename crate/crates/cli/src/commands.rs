//! Subcommand bodies. Each returns the text it would emit so the binary
//! only has to decide where that text goes.

use std::fmt::Write as _;

use mccdma::analytics::pmf_two_user;
use mccdma::efficiency::{to_db, EfficiencyModel};
use mccdma::equilibrium::{
    best_response_dynamics, enumerate_equilibria, DynamicsOptions, EquilibriumResult, Status,
};
use mccdma::game::{best_response, effective_gains, sir_matrix};
use mccdma::montecarlo::{compare_total_utility, run_pmf_experiment, ExperimentSpec};
use mccdma::{ChannelMatrix, PowerAllocation, SystemConfig};

use crate::error::CliError;
use crate::format::{db2, opt, sig9};

pub fn gamma_star(exponent: u32, tol: f64) -> Result<String, CliError> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(CliError::Usage(format!(
            "--tol must be positive, got {tol}"
        )));
    }
    let model = EfficiencyModel::with_tolerance(exponent, tol)?;
    let g = model.gamma_star();
    Ok(format!(
        "exponent,gamma_star,gamma_star_db,gamma_star_rounded\n{exponent},{},{},{:.1}\n",
        sig9(g),
        db2(to_db(g)),
        g
    ))
}

/// Takes the dimensions from the channel file.
pub fn fit_config(base: &SystemConfig, channels: &ChannelMatrix) -> SystemConfig {
    SystemConfig {
        users: channels.users(),
        carriers: channels.carriers(),
        ..base.clone()
    }
}

/// `user` is zero-based.
pub fn best_response_table(
    config: &SystemConfig,
    channels: &ChannelMatrix,
    others: &PowerAllocation,
    user: usize,
) -> Result<String, CliError> {
    if user >= channels.users() {
        return Err(CliError::Usage(format!(
            "user {} out of range 1..={}",
            user + 1,
            channels.users()
        )));
    }
    config.validate()?;
    let model = config.efficiency_model()?;
    let effective = effective_gains(config, channels, others, user);
    let response = best_response(config, &model, channels, others, user);
    let mut out = String::from("carrier,effective_gain,power\n");
    for (l, (g, p)) in effective.iter().zip(&response).enumerate() {
        writeln!(out, "{},{},{}", l + 1, sig9(*g), sig9(*p)).unwrap();
    }
    Ok(out)
}

fn per_user_header(prefix: &str, users: usize) -> String {
    (1..=users).map(|k| format!(",{prefix}_{k}")).collect()
}

/// One row per equilibrium; carriers are one-based.
pub fn equilibria_table(
    config: &SystemConfig,
    channels: &ChannelMatrix,
) -> Result<(String, usize), CliError> {
    config.validate()?;
    let model = config.efficiency_model()?;
    config.check_feasible(&model)?;
    let found = enumerate_equilibria(channels, config, &model)?;
    let k = channels.users();
    let mut out = format!(
        "equilibrium{}{}{}\n",
        per_user_header("carrier", k),
        per_user_header("power", k),
        per_user_header("sir", k)
    );
    for (i, eq) in found.iter().enumerate() {
        let sirs = sir_matrix(config, channels, &eq.powers.powers);
        write!(out, "{}", i + 1).unwrap();
        for &l in eq.assignment.chosen() {
            write!(out, ",{}", l + 1).unwrap();
        }
        for (user, &l) in eq.assignment.chosen().iter().enumerate() {
            write!(out, ",{}", sig9(eq.powers.powers.power(user, l))).unwrap();
        }
        for (user, &l) in eq.assignment.chosen().iter().enumerate() {
            write!(out, ",{}", sig9(sirs.get(user, l))).unwrap();
        }
        out.push('\n');
    }
    Ok((out, found.len()))
}

pub fn dynamics_table(
    config: &SystemConfig,
    channels: &ChannelMatrix,
    initial: &PowerAllocation,
    options: &DynamicsOptions,
) -> Result<(String, EquilibriumResult), CliError> {
    config.validate()?;
    let model = config.efficiency_model()?;
    config.check_feasible(&model)?;
    let result = best_response_dynamics(channels, config, &model, initial, options)?;
    let status = match result.status {
        Status::Converged => "converged",
        Status::NoEquilibrium => "no-equilibrium",
    };
    let mut out = format!(
        "# status={status} rounds={} clamped={}\nuser",
        result.rounds_used, result.clamped
    );
    for l in 1..=channels.carriers() {
        write!(out, ",power_{l}").unwrap();
    }
    for l in 1..=channels.carriers() {
        write!(out, ",sir_{l}").unwrap();
    }
    out.push('\n');
    for k in 0..channels.users() {
        write!(out, "{}", k + 1).unwrap();
        for l in 0..channels.carriers() {
            write!(out, ",{}", sig9(result.powers.power(k, l))).unwrap();
        }
        for l in 0..channels.carriers() {
            write!(out, ",{}", sig9(result.sirs.get(k, l))).unwrap();
        }
        out.push('\n');
    }
    Ok((out, result))
}

pub const PMF_HEADER: &str =
    "processing_gain,users,carriers,m,analytic,mc_frequency,std_error,count,trials,crowded_feasible\n";

/// Analytic values appear only for two users on two carriers.
pub fn pmf_table(spec: &ExperimentSpec) -> Result<String, CliError> {
    let mut out = String::from(PMF_HEADER);
    if spec.points().is_empty() {
        return Ok(out);
    }
    let estimates = run_pmf_experiment(spec)?;
    for (config, est) in spec.points().iter().zip(&estimates) {
        let model = config.efficiency_model()?;
        let analytic = (config.users == 2 && config.carriers == 2)
            .then(|| pmf_two_user(config.processing_gain_f64(), &model));
        let feasible = config.crowded_carrier_feasible(&model);
        let prefix = format!(
            "{},{},{}",
            config.processing_gain, config.users, config.carriers
        );
        for m in 0..=config.users {
            let f = est.frequency(m);
            writeln!(
                out,
                "{prefix},{m},{},{},{},{},{},{feasible}",
                opt(analytic.map(|a| a.masses()[m])),
                sig9(f),
                sig9(est.standard_error(f)),
                est.counts[m],
                est.trials
            )
            .unwrap();
        }
        let f = est.no_equilibrium_frequency();
        writeln!(
            out,
            "{prefix},none,{},{},{},{},{},{feasible}",
            opt(analytic.map(|a| a.p_none)),
            sig9(f),
            sig9(est.standard_error(f)),
            est.no_equilibrium,
            est.trials
        )
        .unwrap();
    }
    Ok(out)
}

pub const COMPARE_HEADER: &str = "users,carriers,processing_gain,trials,converged,convergence_rate,mean_joint,mean_independent,ratio\n";

pub fn compare_table(spec: &ExperimentSpec) -> Result<String, CliError> {
    let mut out = String::from(COMPARE_HEADER);
    if spec.points().is_empty() {
        return Ok(out);
    }
    for row in compare_total_utility(spec)? {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            row.users,
            row.carriers,
            row.processing_gain,
            row.trials,
            row.converged,
            sig9(row.convergence_rate()),
            opt(row.mean_joint),
            opt(row.mean_independent),
            opt(row.ratio())
        )
        .unwrap();
    }
    Ok(out)
}
