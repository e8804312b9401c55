//! Instance generators, valid-potential sampling, the factor-of-two sweep and
//! multi-seed learning experiments.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use thiserror::Error;

use crate::io::{self, IoError};
use crate::mdp::{Mdp, MdpError, RewardModel};
use crate::scalar::Scalar;
use crate::shaping::{self, check_validity, Potential, ShapingError};
use crate::solve::{self, SolveError};
use crate::ucrl2::{self, RegretTrace, UcrlError};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("InvalidParameters: {0}")]
    InvalidParameters(String),
    #[error("NoValidPotential: no potential respecting [0, r_max] found down to scale {0}")]
    NoValidPotential(f64),
    #[error(transparent)]
    Mdp(#[from] MdpError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Shaping(#[from] ShapingError),
    #[error(transparent)]
    Ucrl(#[from] UcrlError),
    #[error(transparent)]
    Io(#[from] IoError),
}

impl HarnessError {
    pub fn name(&self) -> &'static str {
        match self {
            HarnessError::InvalidParameters(_) => "InvalidParameters",
            HarnessError::NoValidPotential(_) => "NoValidPotential",
            HarnessError::Mdp(e) => e.name(),
            HarnessError::Solve(e) => e.name(),
            HarnessError::Shaping(e) => e.name(),
            HarnessError::Ucrl(e) => e.name(),
            HarnessError::Io(e) => e.name(),
        }
    }
}

/// Two-state, two-action example: `a1` stays put, `a2` switches state with
/// probability `epsilon`; every action in `s1` pays `1 - alpha` and every
/// action in `s2` pays `1 - beta`, with `r_max = 1`.
///
/// Requires `0 < beta < alpha < 1` and `0 < epsilon <= 1`.
pub fn toy_mdp<T: Scalar>(alpha: f64, beta: f64, epsilon: f64) -> Result<Mdp<T>, HarnessError> {
    toy_mdp_with_model(alpha, beta, epsilon, RewardModel::Deterministic)
}

pub fn toy_mdp_with_model<T: Scalar>(
    alpha: f64,
    beta: f64,
    epsilon: f64,
    reward_model: RewardModel,
) -> Result<Mdp<T>, HarnessError> {
    if !(0.0 < beta && beta < alpha && alpha < 1.0) {
        return Err(HarnessError::InvalidParameters(format!(
            "need 0 < beta < alpha < 1, got alpha = {alpha}, beta = {beta}"
        )));
    }
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(HarnessError::InvalidParameters(format!("need 0 < epsilon <= 1, got {epsilon}")));
    }
    let transition = [
        1.0, 0.0, // s1, a1
        1.0 - epsilon, epsilon, // s1, a2
        0.0, 1.0, // s2, a1
        epsilon, 1.0 - epsilon, // s2, a2
    ];
    let mean_reward = [1.0 - alpha, 1.0 - alpha, 1.0 - beta, 1.0 - beta];
    Ok(Mdp::new(
        2,
        2,
        transition.iter().map(|&x| T::lit(x)).collect(),
        mean_reward.iter().map(|&x| T::lit(x)).collect(),
        reward_model,
        T::one(),
    )?)
}

/// Garnet-style random MDP with `r_max = 1`.
///
/// Each `(s, a)` row spreads Dirichlet(1, ..., 1) mass over `branching`
/// distinct uniformly chosen states and gets a mean reward uniform in
/// `[0, 1)`. Unless `allow_noncomm`, a random spanning cycle is planted: for
/// each state one random action moves deterministically to the state's cycle
/// successor, so every state reaches every other.
pub fn random_mdp<T: Scalar>(
    n_states: usize,
    n_actions: usize,
    branching: usize,
    seed: u64,
    allow_noncomm: bool,
) -> Result<Mdp<T>, HarnessError> {
    if n_states == 0 || n_actions == 0 {
        return Err(HarnessError::InvalidParameters("need at least one state and one action".into()));
    }
    if branching == 0 || branching > n_states {
        return Err(HarnessError::InvalidParameters(format!(
            "branching {branching} not in 1..={n_states}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut transition = vec![0.0f64; n_states * n_actions * n_states];
    let mut mean_reward = Vec::with_capacity(n_states * n_actions);
    for sa in 0..n_states * n_actions {
        let row = &mut transition[sa * n_states..(sa + 1) * n_states];
        for next in index::sample(&mut rng, n_states, branching) {
            let w: f64 = rng.sample(Exp1);
            row[next] = w.max(f64::MIN_POSITIVE);
        }
        mean_reward.push(rng.random::<f64>());
    }
    if !allow_noncomm && n_states > 1 {
        let mut order: Vec<usize> = (0..n_states).collect();
        order.shuffle(&mut rng);
        for i in 0..n_states {
            let s = order[i];
            let succ = order[(i + 1) % n_states];
            let a = rng.random_range(0..n_actions);
            let row = &mut transition[(s * n_actions + a) * n_states..(s * n_actions + a + 1) * n_states];
            row.fill(0.0);
            row[succ] = 1.0;
        }
    }
    for row in transition.chunks_mut(n_states) {
        let total: f64 = row.iter().sum();
        row.iter_mut().for_each(|p| *p /= total);
    }
    let cast = |v: Vec<f64>| v.into_iter().map(T::lit).collect::<Vec<T>>();
    let mut transition = cast(transition);
    // Rounding to T can leave a row sum a few ulps off; fold the slack into the
    // largest entry.
    for row in transition.chunks_mut(n_states) {
        let total: T = row.iter().copied().sum();
        let (imax, _) = row
            .iter()
            .enumerate()
            .fold((0, T::neg_infinity()), |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) });
        row[imax] = row[imax] + (T::one() - total);
    }
    Ok(Mdp::new(
        n_states,
        n_actions,
        transition,
        cast(mean_reward),
        RewardModel::Deterministic,
        T::one(),
    )?)
}

const POTENTIAL_ATTEMPTS: usize = 1000;
const POTENTIAL_HALVINGS: usize = 20;

/// Rejection-samples a potential uniform in `[-scale, scale]` with `phi[0] = 0`
/// until the shaped means stay inside `[0, r_max]`. After 1000 failures the
/// scale is halved, up to 20 times.
pub fn random_potential<T: Scalar>(mdp: &Mdp<T>, scale: f64, seed: u64) -> Result<Potential<T>, HarnessError> {
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(HarnessError::InvalidParameters(format!("scale must be positive, got {scale}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = mdp.n_states();
    let mut scale = scale;
    for _ in 0..=POTENTIAL_HALVINGS {
        for _ in 0..POTENTIAL_ATTEMPTS {
            let phi: Vec<T> = (0..n)
                .map(|i| if i == 0 { T::zero() } else { T::lit(rng.random_range(-scale..=scale)) })
                .collect();
            let phi = Potential::new(phi);
            if check_validity(mdp, &phi)?.is_empty() {
                return Ok(phi);
            }
        }
        scale /= 2.0;
    }
    Err(HarnessError::NoValidPotential(scale * 2.0))
}

/// Ratio `kappa(M^phi) / kappa(M)`.
pub fn mehc_ratio<T: Scalar>(mdp: &Mdp<T>, phi: &Potential<T>) -> Result<T, HarnessError> {
    let shaped = shaping::apply_potential(mdp, phi)?;
    Ok(solve::mehc(&shaped)? / solve::mehc(mdp)?)
}

/// Result of the factor-of-two sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct Theorem3Report {
    /// Instances evaluated (unsaturated, with a valid potential).
    pub instances: usize,
    /// Candidates skipped for a saturated optimal gain or no valid potential.
    pub skipped: usize,
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// Ratios outside `[0.5, 2.0]` by more than `RATIO_TOLERANCE`.
    pub violations: usize,
    /// Largest residual of the shaped hitting-cost identity.
    pub max_residual: f64,
}

pub const RATIO_TOLERANCE: f64 = 1e-9;
/// Support size of each transition row in sweep instances (capped at `S`).
pub const SWEEP_BRANCHING: usize = 2;
/// Potential scale used by the sweep, relative to `r_max`.
pub const SWEEP_POTENTIAL_SCALE: f64 = 0.5;

enum SweepOutcome {
    Evaluated { ratio: f64, residual: f64 },
    Skipped,
}

fn derive_seed(seed: u64, index: u64, stream: u64) -> u64 {
    let mut z = seed
        .wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(stream.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn sweep_candidate(n_states: usize, n_actions: usize, seed: u64, index: u64) -> Result<SweepOutcome, HarnessError> {
    let branching = SWEEP_BRANCHING.min(n_states);
    let mdp = random_mdp::<f64>(n_states, n_actions, branching, derive_seed(seed, index, 0), false)?;
    let gain = solve::optimal_gain(&mdp)?.gain;
    if gain >= mdp.r_max() - RATIO_TOLERANCE {
        return Ok(SweepOutcome::Skipped);
    }
    let phi = match random_potential(&mdp, SWEEP_POTENTIAL_SCALE * mdp.r_max(), derive_seed(seed, index, 1)) {
        Ok(phi) => phi,
        Err(HarnessError::NoValidPotential(_)) => return Ok(SweepOutcome::Skipped),
        Err(e) => return Err(e),
    };
    let shift = shaping::shaped_cost_shift(&mdp, &phi)?;
    let kappa = shift.base.max();
    let ratio = if kappa > 0.0 { shift.shaped.max() / kappa } else { 1.0 };
    Ok(SweepOutcome::Evaluated { ratio, residual: shift.max_abs_residual })
}

/// Draws communicating random MDPs until `num_instances` of them have an
/// unsaturated optimal gain and a valid random potential, then reports the
/// extremes of `kappa(M^phi) / kappa(M)`.
pub fn sweep_theorem3(num_instances: usize, n_states: usize, n_actions: usize, seed: u64) -> Result<Theorem3Report, HarnessError> {
    if n_states == 0 || n_actions == 0 {
        return Err(HarnessError::InvalidParameters("need at least one state and one action".into()));
    }
    let max_candidates = 10 * num_instances + 100;
    let mut report = Theorem3Report {
        instances: 0,
        skipped: 0,
        min_ratio: f64::INFINITY,
        max_ratio: f64::NEG_INFINITY,
        violations: 0,
        max_residual: 0.0,
    };
    let mut next = 0usize;
    while report.instances < num_instances && next < max_candidates {
        let batch = (num_instances - report.instances).min(max_candidates - next);
        let outcomes = (next..next + batch)
            .into_par_iter()
            .map(|i| sweep_candidate(n_states, n_actions, seed, i as u64))
            .collect::<Result<Vec<_>, _>>()?;
        next += batch;
        for outcome in outcomes {
            match outcome {
                SweepOutcome::Skipped => report.skipped += 1,
                SweepOutcome::Evaluated { ratio, residual } => {
                    report.instances += 1;
                    report.min_ratio = report.min_ratio.min(ratio);
                    report.max_ratio = report.max_ratio.max(ratio);
                    report.max_residual = report.max_residual.max(residual);
                    if !(0.5 - RATIO_TOLERANCE..=2.0 + RATIO_TOLERANCE).contains(&ratio) {
                        report.violations += 1;
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Where a learning experiment gets its MDP.
#[derive(Debug, Clone, PartialEq)]
pub enum MdpSource {
    File(PathBuf),
    Toy { alpha: f64, beta: f64, epsilon: f64 },
    Random { states: usize, actions: usize, branching: usize, seed: u64 },
}

impl MdpSource {
    pub fn load<T: Scalar>(&self) -> Result<Mdp<T>, HarnessError> {
        match self {
            MdpSource::File(path) => Ok(io::read_mdp(path)?.mdp),
            MdpSource::Toy { alpha, beta, epsilon } => toy_mdp(*alpha, *beta, *epsilon),
            MdpSource::Random { states, actions, branching, seed } => {
                random_mdp(*states, *actions, *branching, *seed, false)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub source: MdpSource,
    pub potential: Option<PathBuf>,
    pub horizon: u64,
    pub delta: f64,
    pub seeds: Vec<u64>,
    pub out_dir: PathBuf,
    /// Keep every k-th trace row (and the last).
    pub thin: u64,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.horizon == 0 {
            return Err(HarnessError::InvalidParameters("T must be at least 1".into()));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(HarnessError::InvalidParameters(format!("delta {} not in (0, 1)", self.delta)));
        }
        if self.seeds.is_empty() {
            return Err(HarnessError::InvalidParameters("at least one seed required".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSummary {
    pub seeds: Vec<u64>,
    pub horizon: u64,
    pub delta: f64,
    pub rho_star: f64,
    pub mean_final_regret: f64,
    pub max_final_regret: f64,
    pub mean_avg_reward: f64,
    /// Episode count per seed, in seed order.
    pub episodes: Vec<u64>,
}

impl ExperimentSummary {
    pub fn from_traces<T: Scalar>(horizon: u64, delta: f64, traces: &[RegretTrace<T>]) -> Self {
        let k = traces.len() as f64;
        let finals: Vec<f64> = traces.iter().map(|t| t.last().regret.as_f64()).collect();
        Self {
            seeds: traces.iter().map(|t| t.seed).collect(),
            horizon,
            delta,
            rho_star: traces.first().map(|t| t.rho_star.as_f64()).unwrap_or(f64::NAN),
            mean_final_regret: finals.iter().sum::<f64>() / k,
            max_final_regret: finals.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            mean_avg_reward: traces
                .iter()
                .map(|t| t.last().cumulative_reward.as_f64() / t.last().t as f64)
                .sum::<f64>()
                / k,
            episodes: traces.iter().map(|t| t.episodes).collect(),
        }
    }
}

/// Runs UCRL2 once per seed on the configured (optionally shaped) MDP, writing
/// `seed_<seed>.csv` per run and `summary.json` into `out_dir`.
pub fn run_experiment<T: Scalar>(config: &ExperimentConfig) -> Result<(ExperimentSummary, Vec<RegretTrace<T>>), HarnessError> {
    config.validate()?;
    let mut mdp = config.source.load::<T>()?;
    if let Some(path) = &config.potential {
        let phi = io::read_potential(path)?;
        mdp = shaping::apply_potential(&mdp, &phi)?;
    }
    let traces = run_seeds(&mdp, config.horizon, config.delta, &config.seeds)?;
    write_outputs(&config.out_dir, config, &traces)?;
    let summary = ExperimentSummary::from_traces(config.horizon, config.delta, &traces);
    let path = config.out_dir.join("summary.json");
    let text = serde_json::to_string_pretty(&io::experiment_summary_json(&summary)).expect("summary serializes");
    fs::write(&path, text + "\n").map_err(|e| IoError::at(&path, e))?;
    Ok((summary, traces))
}

/// Independent UCRL2 runs, returned in seed order.
pub fn run_seeds<T: Scalar>(mdp: &Mdp<T>, horizon: u64, delta: f64, seeds: &[u64]) -> Result<Vec<RegretTrace<T>>, HarnessError> {
    Ok(seeds
        .par_iter()
        .map(|&seed| ucrl2::run_ucrl2(mdp, horizon, delta, seed))
        .collect::<Result<Vec<_>, _>>()?)
}

fn write_outputs<T: Scalar>(dir: &Path, config: &ExperimentConfig, traces: &[RegretTrace<T>]) -> Result<(), HarnessError> {
    fs::create_dir_all(dir).map_err(|e| IoError::at(dir, e))?;
    for trace in traces {
        let path = dir.join(format!("seed_{}.csv", trace.seed));
        let file = File::create(&path).map_err(|e| IoError::at(&path, e))?;
        trace
            .write_csv(BufWriter::new(file), config.thin)
            .map_err(|e| IoError::at(&path, e))?;
    }
    Ok(())
}
