//! Potential-based reward shaping of mean rewards, its validity against the
//! `[0, r_max]` reward range, and checks of what shaping preserves.

use thiserror::Error;

use crate::mdp::{Mdp, MdpError, Policy, RewardModel};
use crate::scalar::Scalar;
use crate::solve::{self, reward_gap_cost, CostMatrix, SolveError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ShapingError {
    #[error("ShapingOutOfBounds: {} shaped mean(s) outside [0, r_max], first at ({}, {}) = {}",
        .0.len(), .0[0].state, .0[0].action, .0[0].shaped_mean)]
    OutOfBounds(Vec<ShapingViolation>),
    #[error("PreconditionViolated: {0}")]
    PreconditionViolated(String),
    #[error("ShapeMismatch: potential has {got} entries, MDP has {expected} states")]
    Dimension { got: usize, expected: usize },
    #[error("NonFinitePotential: entry {0} is not finite")]
    NonFinite(usize),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Mdp(#[from] MdpError),
}

impl ShapingError {
    pub fn name(&self) -> &'static str {
        match self {
            ShapingError::OutOfBounds(_) => "ShapingOutOfBounds",
            ShapingError::PreconditionViolated(_) => "PreconditionViolated",
            ShapingError::Dimension { .. } => "ShapeMismatch",
            ShapingError::NonFinite(_) => "NonFinitePotential",
            ShapingError::Solve(e) => e.name(),
            ShapingError::Mdp(e) => e.name(),
        }
    }
}

/// `(s, a)` whose shaped mean leaves `[0, r_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapingViolation {
    pub state: usize,
    pub action: usize,
    pub shaped_mean: f64,
}

/// Real potential over states.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential<T> {
    pub phi: Vec<T>,
}

impl<T: Scalar> Potential<T> {
    pub fn new(phi: Vec<T>) -> Self {
        Self { phi }
    }

    pub fn zeros(n: usize) -> Self {
        Self { phi: vec![T::zero(); n] }
    }

    pub fn negated(&self) -> Self {
        Self { phi: self.phi.iter().map(|&x| -x).collect() }
    }

    fn check_for(&self, mdp: &Mdp<T>) -> Result<(), ShapingError> {
        if self.phi.len() != mdp.n_states() {
            return Err(ShapingError::Dimension { got: self.phi.len(), expected: mdp.n_states() });
        }
        match self.phi.iter().position(|x| !x.is_finite()) {
            Some(i) => Err(ShapingError::NonFinite(i)),
            None => Ok(()),
        }
    }
}

fn shaped_means<T: Scalar>(mdp: &Mdp<T>, phi: &Potential<T>) -> Vec<T> {
    let mut out = Vec::with_capacity(mdp.n_states() * mdp.n_actions());
    for s in 0..mdp.n_states() {
        for a in 0..mdp.n_actions() {
            out.push(mdp.mean_reward(s, a) - phi.phi[s] + mdp.expect(s, a, &phi.phi));
        }
    }
    out
}

/// Every `(s, a)` whose shaped mean exits `[0, r_max]` by more than the
/// probability tolerance.
pub fn check_validity<T: Scalar>(mdp: &Mdp<T>, phi: &Potential<T>) -> Result<Vec<ShapingViolation>, ShapingError> {
    phi.check_for(mdp)?;
    let tol = T::prob_tol();
    let na = mdp.n_actions();
    Ok(shaped_means(mdp, phi)
        .into_iter()
        .enumerate()
        .filter(|&(_, r)| r < -tol || r > mdp.r_max() + tol)
        .map(|(i, r)| ShapingViolation { state: i / na, action: i % na, shaped_mean: r.as_f64() })
        .collect())
}

/// The shaped MDP: same transitions, mean rewards
/// `r(s, a) - phi(s) + E[phi(s')]`, deterministic reward model.
///
/// No clamping is applied; out-of-range means are an error.
pub fn apply_potential<T: Scalar>(mdp: &Mdp<T>, phi: &Potential<T>) -> Result<Mdp<T>, ShapingError> {
    let violations = check_validity(mdp, phi)?;
    if !violations.is_empty() {
        return Err(ShapingError::OutOfBounds(violations));
    }
    Ok(mdp.with_rewards(shaped_means(mdp, phi), RewardModel::Deterministic)?)
}

/// Largest `|gain(M, pi, s) - gain(M^phi, pi, s)|` over the given policies and
/// all start states.
pub fn verify_pi_equivalence<T: Scalar>(
    mdp: &Mdp<T>,
    phi: &Potential<T>,
    policies: &[Policy],
) -> Result<T, ShapingError> {
    let shaped = apply_potential(mdp, phi)?;
    let mut worst = T::zero();
    for policy in policies {
        let base = solve::gain_of_policy(mdp, policy)?;
        let other = solve::gain_of_policy(&shaped, policy)?;
        for (a, b) in base.iter().zip(&other) {
            worst = worst.max((*a - *b).abs());
        }
    }
    Ok(worst)
}

/// Residuals of the shaped hitting-cost identity
/// `c_phi(s, s') = c(s, s') + phi(s) - phi(s')`, both sides from independent
/// hitting-cost solves.
#[derive(Debug, Clone, PartialEq)]
pub struct CostShift<T> {
    pub base: CostMatrix<T>,
    pub shaped: CostMatrix<T>,
    /// `shaped - (base + phi(s) - phi(s'))`, row-major.
    pub residuals: Vec<T>,
    /// Largest finite `|residual|`.
    pub max_abs_residual: T,
}

/// Requires finite MEHC and an unsaturated optimal gain; otherwise the
/// identity is not guaranteed and [`ShapingError::PreconditionViolated`] is
/// returned.
pub fn shaped_cost_shift<T: Scalar>(mdp: &Mdp<T>, phi: &Potential<T>) -> Result<CostShift<T>, ShapingError> {
    let shaped_mdp = apply_potential(mdp, phi)?;
    let base = solve::hitting_cost_matrix(mdp, reward_gap_cost(mdp))?;
    if !base.max().is_finite() {
        return Err(ShapingError::PreconditionViolated("maximum expected hitting cost is infinite".into()));
    }
    let gain = solve::optimal_gain(mdp)?.gain;
    if gain >= mdp.r_max() - T::tol(1e-9) {
        return Err(ShapingError::PreconditionViolated(format!(
            "optimal gain {gain} is saturated at r_max = {}",
            mdp.r_max()
        )));
    }
    let shaped = solve::hitting_cost_matrix(&shaped_mdp, reward_gap_cost(&shaped_mdp))?;
    let n = mdp.n_states();
    let mut residuals = Vec::with_capacity(n * n);
    let mut max_abs_residual = T::zero();
    for s in 0..n {
        for t in 0..n {
            let r = shaped.get(s, t) - (base.get(s, t) + phi.phi[s] - phi.phi[t]);
            if r.is_finite() {
                max_abs_residual = max_abs_residual.max(r.abs());
            }
            residuals.push(r);
        }
    }
    Ok(CostShift { base, shaped, residuals, max_abs_residual })
}
