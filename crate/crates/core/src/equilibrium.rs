//! Nash equilibria of the multi-carrier power control game.
//!
//! At an equilibrium every user transmits on exactly one carrier at the SIR
//! target `γ*`, so an equilibrium is fully described by a carrier
//! assignment. With `n` users sharing a carrier each needs the received
//! power `σ²γ*Θ_n`, where
//!
//! ```text
//! Θ_n = 1 / (1 − (n − 1)·γ*/N)
//! ```
//!
//! An assignment is an equilibrium iff no user sees a larger effective gain
//! on another carrier, which reduces to ratio tests on the raw path gains:
//! `h[k][ℓ]/h[k][i] > Θ_{n(ℓ)}·Θ_0/Θ_{n(i)}` for every `i ≠ ℓ`.

use serde::{Deserialize, Serialize};

use crate::efficiency::EfficiencyModel;
use crate::game::{best_carrier, best_response, sir_matrix};
use crate::{ChannelMatrix, Error, Matrix, PowerAllocation, Result, SystemConfig};

/// Default cap on `D^K` for exhaustive enumeration.
pub const MAX_ASSIGNMENTS: u64 = 1_000_000;

/// Interference loading factor for `occupancy` co-channel users.
///
/// Fails when `N ≤ (n − 1)γ*`: the carrier cannot hold that many users at
/// the SIR target. `Θ_1` is exactly one.
pub fn theta(occupancy: usize, gamma_star: f64, processing_gain: f64) -> Result<f64> {
    if occupancy == 1 {
        return Ok(1.0);
    }
    let denom = 1.0 - (occupancy as f64 - 1.0) * gamma_star / processing_gain;
    if denom <= 0.0 {
        return Err(Error::Infeasible {
            users: occupancy,
            processing_gain,
            gamma_star,
        });
    }
    Ok(1.0 / denom)
}

/// Which carrier each user transmits on, with per-carrier head counts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CarrierAssignment {
    chosen: Vec<usize>,
    occupancy: Vec<usize>,
}

impl CarrierAssignment {
    pub fn new(chosen: Vec<usize>, carriers: usize) -> Result<Self> {
        if carriers == 0 {
            return Err(Error::invalid("carriers", "must be at least 1"));
        }
        let mut occupancy = vec![0; carriers];
        for (k, &l) in chosen.iter().enumerate() {
            if l >= carriers {
                return Err(Error::Dimension(format!(
                    "user {k} assigned to carrier {l}, only {carriers} exist"
                )));
            }
            occupancy[l] += 1;
        }
        Ok(Self { chosen, occupancy })
    }

    /// Reads the assignment off a power matrix in which every user is
    /// active on exactly one carrier.
    pub fn from_powers(powers: &PowerAllocation) -> Option<Self> {
        let mut chosen = Vec::with_capacity(powers.users());
        for k in 0..powers.users() {
            let mut active = powers.row(k).iter().enumerate().filter(|(_, p)| **p > 0.0);
            let (l, _) = active.next()?;
            if active.next().is_some() {
                return None;
            }
            chosen.push(l);
        }
        Self::new(chosen, powers.carriers()).ok()
    }

    pub fn chosen(&self) -> &[usize] {
        &self.chosen
    }

    pub fn carrier_of(&self, user: usize) -> usize {
        self.chosen[user]
    }

    pub fn occupancy(&self) -> &[usize] {
        &self.occupancy
    }

    pub fn users(&self) -> usize {
        self.chosen.len()
    }

    pub fn carriers(&self) -> usize {
        self.occupancy.len()
    }

    /// All `D^K` assignments, user 0 as the most significant digit.
    pub fn all(users: usize, carriers: usize) -> impl Iterator<Item = CarrierAssignment> {
        let mut next = (carriers > 0).then(|| vec![0usize; users]);
        std::iter::from_fn(move || {
            let current = next.take()?;
            let mut succ = current.clone();
            let mut pos = users;
            while pos > 0 {
                pos -= 1;
                succ[pos] += 1;
                if succ[pos] < carriers {
                    next = Some(succ);
                    break;
                }
                succ[pos] = 0;
            }
            Some(CarrierAssignment::new(current, carriers).expect("digits below carrier count"))
        })
    }
}

/// Closed-form equilibrium powers for an assignment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormPowers {
    pub powers: PowerAllocation,
    /// Users whose required power exceeded `P_max` and were capped.
    pub clamped: Vec<usize>,
}

impl ClosedFormPowers {
    pub fn is_clamped(&self) -> bool {
        !self.clamped.is_empty()
    }
}

fn check_shapes(
    config: &SystemConfig,
    channels: &ChannelMatrix,
    assignment: Option<&CarrierAssignment>,
) -> Result<()> {
    channels.check_against(config)?;
    if let Some(a) = assignment {
        if a.users() != channels.users() || a.carriers() != channels.carriers() {
            return Err(Error::Dimension(format!(
                "assignment covers {} users on {} carriers, channels are {}x{}",
                a.users(),
                a.carriers(),
                channels.users(),
                channels.carriers()
            )));
        }
    }
    Ok(())
}

/// Powers `p[k][L_k] = γ*σ²Θ_{n(L_k)}/h[k][L_k]` for the assignment, zero
/// elsewhere. Each user then sees exactly `γ*` on its carrier unless its
/// power had to be capped.
pub fn equilibrium_powers(
    assignment: &CarrierAssignment,
    channels: &ChannelMatrix,
    config: &SystemConfig,
    model: &EfficiencyModel,
) -> Result<ClosedFormPowers> {
    check_shapes(config, channels, Some(assignment))?;
    let gs = model.gamma_star();
    let n = config.processing_gain_f64();
    let thetas = assignment
        .occupancy()
        .iter()
        .map(|&occ| if occ == 0 { Ok(0.0) } else { theta(occ, gs, n) })
        .collect::<Result<Vec<_>>>()?;

    let mut powers = PowerAllocation::zeros(channels.users(), channels.carriers());
    let mut clamped = Vec::new();
    for (k, &l) in assignment.chosen().iter().enumerate() {
        let required = gs * config.noise_power * thetas[l] / channels.gain(k, l);
        if required > config.p_max {
            clamped.push(k);
        }
        powers.set(k, l, required.min(config.p_max));
    }
    Ok(ClosedFormPowers { powers, clamped })
}

/// Outcome of checking an assignment against the equilibrium conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Equilibrium,
    /// An occupied carrier cannot host its users at the SIR target.
    Infeasible {
        carrier: usize,
        occupancy: usize,
    },
    /// `user` would gain by moving from `current` to `better`.
    Deviation {
        user: usize,
        current: usize,
        better: usize,
    },
}

impl Verdict {
    pub fn is_equilibrium(&self) -> bool {
        matches!(self, Verdict::Equilibrium)
    }
}

/// Checks the strict ratio conditions for every user and every other
/// carrier. Users whose closed-form power exceeds `P_max` are not checked,
/// since they cannot reach `γ*` anyway.
pub fn verify_assignment(
    assignment: &CarrierAssignment,
    channels: &ChannelMatrix,
    config: &SystemConfig,
    model: &EfficiencyModel,
) -> Result<Verdict> {
    check_shapes(config, channels, Some(assignment))?;
    let gs = model.gamma_star();
    let n = config.processing_gain_f64();

    let mut thetas = Vec::with_capacity(assignment.carriers());
    for (l, &occ) in assignment.occupancy().iter().enumerate() {
        match theta(occ, gs, n) {
            Ok(t) => thetas.push(t),
            Err(_) => {
                return Ok(Verdict::Infeasible {
                    carrier: l,
                    occupancy: occ,
                })
            }
        }
    }
    let theta0 = theta(0, gs, n)?;

    for (k, &l) in assignment.chosen().iter().enumerate() {
        let h_own = channels.gain(k, l);
        if gs * config.noise_power * thetas[l] / h_own > config.p_max {
            continue;
        }
        for i in (0..assignment.carriers()).filter(|&i| i != l) {
            // n(i) counts the incumbents on i; user k is not among them.
            let threshold = thetas[l] * (theta0 / thetas[i]);
            // gains are validated positive and finite, so no NaN here
            if h_own / channels.gain(k, i) <= threshold {
                return Ok(Verdict::Deviation {
                    user: k,
                    current: l,
                    better: i,
                });
            }
        }
    }
    Ok(Verdict::Equilibrium)
}

/// A verified equilibrium with its closed-form powers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium {
    pub assignment: CarrierAssignment,
    pub powers: ClosedFormPowers,
}

/// Every equilibrium of the game, found by checking all `D^K` assignments.
pub fn enumerate_equilibria(
    channels: &ChannelMatrix,
    config: &SystemConfig,
    model: &EfficiencyModel,
) -> Result<Vec<Equilibrium>> {
    enumerate_equilibria_with_limit(channels, config, model, MAX_ASSIGNMENTS)
}

pub fn enumerate_equilibria_with_limit(
    channels: &ChannelMatrix,
    config: &SystemConfig,
    model: &EfficiencyModel,
    limit: u64,
) -> Result<Vec<Equilibrium>> {
    check_shapes(config, channels, None)?;
    let (users, carriers) = (channels.users(), channels.carriers());
    let count = u32::try_from(users)
        .ok()
        .and_then(|k| (carriers as u64).checked_pow(k));
    match count {
        Some(c) if c <= limit => {}
        _ => {
            return Err(Error::TooManyAssignments {
                count: format!("{carriers}^{users}"),
                limit,
            })
        }
    }

    let mut found = Vec::new();
    for assignment in CarrierAssignment::all(users, carriers) {
        if verify_assignment(&assignment, channels, config, model)?.is_equilibrium() {
            let powers = equilibrium_powers(&assignment, channels, config, model)?;
            found.push(Equilibrium { assignment, powers });
        }
    }
    Ok(found)
}

/// Stopping rule for [`best_response_dynamics`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DynamicsOptions {
    /// Full passes over all users before giving up.
    pub max_rounds: usize,
    /// Relative tolerance on the largest power change within a round.
    pub tolerance: f64,
}

impl Default for DynamicsOptions {
    fn default() -> Self {
        Self {
            max_rounds: 20,
            tolerance: 1e-3,
        }
    }
}

impl DynamicsOptions {
    pub fn validate(&self) -> Result<()> {
        if self.max_rounds == 0 {
            return Err(Error::invalid("max_rounds", "must be at least 1"));
        }
        if !self.tolerance.is_finite() || self.tolerance <= 0.0 {
            return Err(Error::invalid(
                "tolerance",
                format!("must be positive, got {}", self.tolerance),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Converged,
    NoEquilibrium,
}

/// Final state of a best-response run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumResult {
    pub status: Status,
    /// Carrier choices at the end of the run; `None` if not converged.
    pub assignment: Option<CarrierAssignment>,
    pub powers: PowerAllocation,
    pub sirs: Matrix,
    pub rounds_used: usize,
    /// Some user sits at `P_max`.
    pub clamped: bool,
}

impl EquilibriumResult {
    pub fn converged(&self) -> bool {
        self.status == Status::Converged
    }

    /// Number of users on `carrier`, if converged.
    pub fn load(&self, carrier: usize) -> Option<usize> {
        self.assignment.as_ref().map(|a| a.occupancy()[carrier])
    }
}

/// Sequential best-response dynamics.
///
/// Each round lets users `0..K` in turn switch to their best response
/// against the latest powers of everyone else. The run converges once a
/// round leaves every carrier choice unchanged and moves no power by more
/// than `tolerance` times the largest power; otherwise it stops after
/// `max_rounds` and reports [`Status::NoEquilibrium`].
pub fn best_response_dynamics(
    channels: &ChannelMatrix,
    config: &SystemConfig,
    model: &EfficiencyModel,
    initial: &PowerAllocation,
    options: &DynamicsOptions,
) -> Result<EquilibriumResult> {
    options.validate()?;
    check_shapes(config, channels, None)?;
    initial.check_against(channels)?;

    let users = channels.users();
    let mut powers = initial.clone();
    let mut previous = chosen_carriers(&powers);
    let mut rounds_used = 0;
    let mut converged = false;

    while rounds_used < options.max_rounds {
        rounds_used += 1;
        let mut max_change: f64 = 0.0;
        for k in 0..users {
            let response = best_response(config, model, channels, &powers, k);
            for (new, old) in response.iter().zip(powers.row(k)) {
                max_change = max_change.max((new - old).abs());
            }
            powers.set_row(k, &response);
        }
        let current = chosen_carriers(&powers);
        let stable = previous.as_ref() == current.as_ref();
        previous = current;
        if stable && max_change <= options.tolerance * powers.max_power() {
            converged = true;
            break;
        }
    }

    let sirs = sir_matrix(config, channels, &powers);
    let clamped = powers
        .matrix()
        .as_slice()
        .iter()
        .any(|&p| p >= config.p_max);
    let (status, assignment) = if converged {
        (Status::Converged, CarrierAssignment::from_powers(&powers))
    } else {
        (Status::NoEquilibrium, None)
    };
    Ok(EquilibriumResult {
        status,
        assignment,
        powers,
        sirs,
        rounds_used,
        clamped,
    })
}

fn chosen_carriers(powers: &PowerAllocation) -> Option<Vec<usize>> {
    CarrierAssignment::from_powers(powers).map(|a| a.chosen().to_vec())
}

/// Equilibrium regions of the two-user, two-carrier game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    /// Both users on carrier 1.
    BothFirst,
    /// Both users on carrier 2.
    BothSecond,
    /// User 1 on carrier 1, user 2 on carrier 2.
    Split12,
    /// User 1 on carrier 2, user 2 on carrier 1.
    Split21,
    /// Both split assignments are equilibria.
    TwoEquilibria,
    NoEquilibrium,
}

impl Region {
    pub const ALL: [Region; 6] = [
        Region::BothFirst,
        Region::BothSecond,
        Region::Split12,
        Region::Split21,
        Region::TwoEquilibria,
        Region::NoEquilibrium,
    ];

    /// Equilibrium assignments in this region as `[carrier of user 1,
    /// carrier of user 2]`, zero-based.
    pub fn assignments(&self) -> Vec<[usize; 2]> {
        match self {
            Region::BothFirst => vec![[0, 0]],
            Region::BothSecond => vec![[1, 1]],
            Region::Split12 => vec![[0, 1]],
            Region::Split21 => vec![[1, 0]],
            Region::TwoEquilibria => vec![[0, 1], [1, 0]],
            Region::NoEquilibrium => vec![],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Region::BothFirst => "both-first",
            Region::BothSecond => "both-second",
            Region::Split12 => "split-12",
            Region::Split21 => "split-21",
            Region::TwoEquilibria => "two-equilibria",
            Region::NoEquilibrium => "no-equilibrium",
        }
    }
}

/// Labels a two-user, two-carrier channel realization directly from the
/// gain-ratio thresholds `Θ_0` and `Θ_2`.
pub fn classify_2x2(
    channels: &ChannelMatrix,
    config: &SystemConfig,
    model: &EfficiencyModel,
) -> Result<Region> {
    if channels.users() != 2 || channels.carriers() != 2 {
        return Err(Error::Dimension(format!(
            "region classifier needs 2 users on 2 carriers, got {}x{}",
            channels.users(),
            channels.carriers()
        )));
    }
    let gs = model.gamma_star();
    let n = config.processing_gain_f64();
    let theta0 = theta(0, gs, n)?;
    let theta2 = theta(2, gs, n).ok();
    let h = |k: usize, l: usize| channels.gain(k, l);

    let both_first = theta2.is_some_and(|t| h(0, 0) / h(0, 1) > t && h(1, 0) / h(1, 1) > t);
    let both_second = theta2.is_some_and(|t| h(0, 1) / h(0, 0) > t && h(1, 1) / h(1, 0) > t);
    let split12 = h(0, 0) / h(0, 1) > theta0 && h(1, 1) / h(1, 0) > theta0;
    let split21 = h(0, 1) / h(0, 0) > theta0 && h(1, 0) / h(1, 1) > theta0;

    Ok(match (both_first, both_second, split12, split21) {
        (false, false, false, false) => Region::NoEquilibrium,
        (true, false, false, false) => Region::BothFirst,
        (false, true, false, false) => Region::BothSecond,
        (false, false, true, false) => Region::Split12,
        (false, false, false, true) => Region::Split21,
        (false, false, true, true) => Region::TwoEquilibria,
        // Θ_2 > 1/Θ_0 separates the same-carrier and split regions; only
        // rounding at astronomically large N could land here.
        _ => {
            return Err(Error::invalid(
                "processing_gain",
                "thresholds too close to separate equilibrium regions",
            ))
        }
    })
}

/// The carrier user `k` would pick given `powers`, lowest index on ties.
pub fn preferred_carrier(
    config: &SystemConfig,
    channels: &ChannelMatrix,
    powers: &PowerAllocation,
    user: usize,
) -> usize {
    best_carrier(&crate::game::effective_gains(
        config, channels, powers, user,
    ))
}
