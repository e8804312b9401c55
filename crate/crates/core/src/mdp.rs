//! Tabular MDP data model, validation, policy-induced chains and simulation.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;

/// How a sampled reward relates to the mean reward table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RewardModel {
    /// Always emits the mean.
    #[serde(rename = "deterministic")]
    Deterministic,
    /// Emits `r_max` with probability `mean / r_max`, otherwise `0`.
    #[serde(rename = "bernoulli")]
    BernoulliScaled,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MdpError {
    #[error("InvalidMdp: {} violation(s), first: {}", .0.len(), .0[0])]
    Invalid(Vec<Violation>),
    #[error("IndexOutOfRange: {what} index {index} not below {bound}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        bound: usize,
    },
    #[error("ShapeMismatch: {0}")]
    Shape(String),
}

impl MdpError {
    pub fn name(&self) -> &'static str {
        match self {
            MdpError::Invalid(_) => "InvalidMdp",
            MdpError::IndexOutOfRange { .. } => "IndexOutOfRange",
            MdpError::Shape(_) => "ShapeMismatch",
        }
    }
}

/// A single broken invariant of an [`Mdp`], with coordinates.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    RowSum { state: usize, action: usize, sum: f64 },
    NegativeProbability { state: usize, action: usize, next: usize, value: f64 },
    NonFinite { state: usize, action: usize },
    RewardOutOfRange { state: usize, action: usize, value: f64 },
    NonPositiveRmax { r_max: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::RowSum { state, action, sum } => {
                write!(f, "transition row ({state}, {action}) sums to {sum}")
            }
            Violation::NegativeProbability { state, action, next, value } => {
                write!(f, "transition ({state}, {action}, {next}) is negative: {value}")
            }
            Violation::NonFinite { state, action } => {
                write!(f, "non-finite entry at ({state}, {action})")
            }
            Violation::RewardOutOfRange { state, action, value } => {
                write!(f, "mean reward ({state}, {action}) = {value} outside [0, r_max]")
            }
            Violation::NonPositiveRmax { r_max } => write!(f, "r_max = {r_max} is not positive"),
        }
    }
}

/// Finite MDP with dense 0-based state and action indices.
///
/// `transition` is stored flat in `(s, a, s')` order and `mean_reward` in
/// `(s, a)` order.
#[derive(Debug, Clone, PartialEq)]
pub struct Mdp<T> {
    n_states: usize,
    n_actions: usize,
    transition: Vec<T>,
    mean_reward: Vec<T>,
    reward_model: RewardModel,
    r_max: T,
}

impl<T: Scalar> Mdp<T> {
    /// Builds an MDP and rejects it unless every invariant holds.
    pub fn new(
        n_states: usize,
        n_actions: usize,
        transition: Vec<T>,
        mean_reward: Vec<T>,
        reward_model: RewardModel,
        r_max: T,
    ) -> Result<Self, MdpError> {
        let mdp = Self::from_parts(n_states, n_actions, transition, mean_reward, reward_model, r_max)?;
        let violations = mdp.validate();
        if violations.is_empty() {
            Ok(mdp)
        } else {
            Err(MdpError::Invalid(violations))
        }
    }

    /// Builds an MDP checking only table shapes. Use [`Mdp::validate`] to
    /// inspect the probabilistic invariants.
    pub fn from_parts(
        n_states: usize,
        n_actions: usize,
        transition: Vec<T>,
        mean_reward: Vec<T>,
        reward_model: RewardModel,
        r_max: T,
    ) -> Result<Self, MdpError> {
        if n_states == 0 || n_actions == 0 {
            return Err(MdpError::Shape("need at least one state and one action".into()));
        }
        if transition.len() != n_states * n_actions * n_states {
            return Err(MdpError::Shape(format!(
                "transition has {} entries, expected {}",
                transition.len(),
                n_states * n_actions * n_states
            )));
        }
        if mean_reward.len() != n_states * n_actions {
            return Err(MdpError::Shape(format!(
                "mean_reward has {} entries, expected {}",
                mean_reward.len(),
                n_states * n_actions
            )));
        }
        Ok(Self {
            n_states,
            n_actions,
            transition,
            mean_reward,
            reward_model,
            r_max,
        })
    }

    /// Every row-sum, negativity and reward-range violation; empty iff valid.
    pub fn validate(&self) -> Vec<Violation> {
        let tol = T::prob_tol();
        let mut out = Vec::new();
        if !(self.r_max > T::zero()) || !self.r_max.is_finite() {
            out.push(Violation::NonPositiveRmax { r_max: self.r_max.as_f64() });
        }
        for s in 0..self.n_states {
            for a in 0..self.n_actions {
                let row = self.row(s, a);
                if row.iter().any(|p| !p.is_finite()) || !self.mean_reward(s, a).is_finite() {
                    out.push(Violation::NonFinite { state: s, action: a });
                    continue;
                }
                for (next, &p) in row.iter().enumerate() {
                    if p < T::zero() {
                        out.push(Violation::NegativeProbability {
                            state: s,
                            action: a,
                            next,
                            value: p.as_f64(),
                        });
                    }
                }
                let sum: T = row.iter().copied().sum();
                if (sum - T::one()).abs() > tol {
                    out.push(Violation::RowSum { state: s, action: a, sum: sum.as_f64() });
                }
                let r = self.mean_reward(s, a);
                if r < -tol || r > self.r_max + tol {
                    out.push(Violation::RewardOutOfRange { state: s, action: a, value: r.as_f64() });
                }
            }
        }
        out
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn n_actions(&self) -> usize {
        self.n_actions
    }

    pub fn r_max(&self) -> T {
        self.r_max
    }

    pub fn reward_model(&self) -> RewardModel {
        self.reward_model
    }

    /// Next-state distribution of `(s, a)`.
    pub fn row(&self, s: usize, a: usize) -> &[T] {
        let start = (s * self.n_actions + a) * self.n_states;
        &self.transition[start..start + self.n_states]
    }

    pub fn prob(&self, s: usize, a: usize, next: usize) -> T {
        self.transition[(s * self.n_actions + a) * self.n_states + next]
    }

    pub fn mean_reward(&self, s: usize, a: usize) -> T {
        self.mean_reward[s * self.n_actions + a]
    }

    pub fn transitions(&self) -> &[T] {
        &self.transition
    }

    pub fn mean_rewards(&self) -> &[T] {
        &self.mean_reward
    }

    /// Same transitions with a new reward table and model.
    pub fn with_rewards(&self, mean_reward: Vec<T>, reward_model: RewardModel) -> Result<Self, MdpError> {
        Self::from_parts(
            self.n_states,
            self.n_actions,
            self.transition.clone(),
            mean_reward,
            reward_model,
            self.r_max,
        )
    }

    /// Expected value of `values` after taking `a` in `s`.
    pub fn expect(&self, s: usize, a: usize, values: &[T]) -> T {
        self.row(s, a).iter().zip(values).map(|(&p, &v)| p * v).sum()
    }

    fn check_state(&self, s: usize) -> Result<(), MdpError> {
        if s < self.n_states {
            Ok(())
        } else {
            Err(MdpError::IndexOutOfRange { what: "state", index: s, bound: self.n_states })
        }
    }

    fn check_action(&self, a: usize) -> Result<(), MdpError> {
        if a < self.n_actions {
            Ok(())
        } else {
            Err(MdpError::IndexOutOfRange { what: "action", index: a, bound: self.n_actions })
        }
    }

    /// Markov chain obtained by following `policy`.
    pub fn induced_chain(&self, policy: &Policy) -> Result<InducedChain<T>, MdpError> {
        self.check_policy(policy)?;
        let n = self.n_states;
        let mut transition = Vec::with_capacity(n * n);
        let mut mean_reward = Vec::with_capacity(n);
        for s in 0..n {
            let a = policy.action(s);
            transition.extend_from_slice(self.row(s, a));
            mean_reward.push(self.mean_reward(s, a));
        }
        Ok(InducedChain { n_states: n, transition, mean_reward })
    }

    pub fn check_policy(&self, policy: &Policy) -> Result<(), MdpError> {
        if policy.len() != self.n_states {
            return Err(MdpError::Shape(format!(
                "policy covers {} states, MDP has {}",
                policy.len(),
                self.n_states
            )));
        }
        policy.actions().iter().try_for_each(|&a| self.check_action(a))
    }

    /// Draws `(next_state, reward)` for taking `a` in `s`.
    pub fn sample_step<R: Rng + ?Sized>(&self, s: usize, a: usize, rng: &mut R) -> Result<(usize, T), MdpError> {
        self.check_state(s)?;
        self.check_action(a)?;
        let row = self.row(s, a);
        let u: f64 = rng.random();
        let mut acc = 0.0;
        // Falls back to the last state with positive mass when rounding leaves
        // the cumulative sum slightly below one.
        let mut next = row.iter().rposition(|&p| p > T::zero()).unwrap_or(0);
        for (j, &p) in row.iter().enumerate() {
            let p = p.as_f64();
            if p <= 0.0 {
                continue;
            }
            acc += p;
            if u < acc {
                next = j;
                break;
            }
        }
        let mean = self.mean_reward(s, a);
        let reward = match self.reward_model {
            RewardModel::Deterministic => mean,
            RewardModel::BernoulliScaled => {
                let q = (mean / self.r_max).as_f64();
                if rng.random::<f64>() < q {
                    self.r_max
                } else {
                    T::zero()
                }
            }
        };
        Ok((next, reward))
    }
}

/// Stationary deterministic policy.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Policy {
    action_of: Vec<usize>,
}

impl Policy {
    pub fn new(action_of: Vec<usize>) -> Self {
        Self { action_of }
    }

    pub fn action(&self, s: usize) -> usize {
        self.action_of[s]
    }

    pub fn actions(&self) -> &[usize] {
        &self.action_of
    }

    pub fn len(&self) -> usize {
        self.action_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.action_of.is_empty()
    }

    /// All `n_actions ^ n_states` policies in lexicographic order (state 0 most
    /// significant).
    pub fn enumerate(n_states: usize, n_actions: usize) -> impl Iterator<Item = Policy> {
        let total = (n_actions as u128).checked_pow(n_states as u32).unwrap_or(u128::MAX);
        (0..total).map(move |mut code| {
            let mut actions = vec![0; n_states];
            for slot in actions.iter_mut().rev() {
                *slot = (code % n_actions as u128) as usize;
                code /= n_actions as u128;
            }
            Policy::new(actions)
        })
    }
}

/// Markov chain of an `(Mdp, Policy)` pair.
#[derive(Debug, Clone, PartialEq)]
pub struct InducedChain<T> {
    pub n_states: usize,
    /// Row-major `n_states × n_states`.
    pub transition: Vec<T>,
    pub mean_reward: Vec<T>,
}

impl<T: Scalar> InducedChain<T> {
    pub fn prob(&self, s: usize, next: usize) -> T {
        self.transition[s * self.n_states + next]
    }
}
