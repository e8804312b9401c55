//! Exact planning on a known MDP: policy gains, the optimal gain and bias span,
//! minimum expected hitting times and costs, diameter and MEHC, plus a policy
//! enumeration oracle for the hitting costs.

use rayon::prelude::*;
use thiserror::Error;

use crate::linalg::{solve_dense, stationary_distribution, ChainClasses};
use crate::mdp::{InducedChain, Mdp, MdpError, Policy};
use crate::scalar::{max_or_zero, span, Scalar};

/// Iteration cap shared by the value-iteration solvers.
pub const MAX_ITERATIONS: usize = 1_000_000;
/// Stopping tolerance of the hitting-cost value iteration.
pub const SSP_TOLERANCE: f64 = 1e-10;
/// Hitting costs above `DIVERGENCE_CAP * r_max` are reported as `+inf`.
pub const DIVERGENCE_CAP: f64 = 1e9;
/// Span of successive differences at which relative value iteration stops.
pub const RVI_TOLERANCE: f64 = 1e-10;
/// Per-state optimal gains further apart than this are not treated as constant.
pub const GAIN_CONSTANT_TOLERANCE: f64 = 1e-6;
/// Largest policy space the enumeration oracle will walk.
pub const MAX_ENUMERATION: u128 = 1_000_000;

/// Self-transition weight of the aperiodicity transform used by relative
/// value iteration. Gains are unchanged and biases scale by this factor.
const APERIODICITY: f64 = 0.5;
/// Iterations between the span checkpoints of relative value iteration.
const STAGNATION_WINDOW: usize = 200;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("GainNotConstant: per-state optimal gains range over [{min}, {max}]")]
    GainNotConstant { min: f64, max: f64 },
    #[error("NoConvergence: {solver} hit the cap of {iterations} iterations")]
    NoConvergence { solver: &'static str, iterations: usize },
    #[error("NegativeStepCost: step cost at ({state}, {action}) is {value}")]
    NegativeStepCost { state: usize, action: usize, value: f64 },
    #[error("EnumerationTooLarge: {policies} policies exceed the limit of {MAX_ENUMERATION}")]
    EnumerationTooLarge { policies: u128 },
    #[error("SingularSystem: {0}")]
    SingularSystem(&'static str),
    #[error(transparent)]
    Mdp(#[from] MdpError),
}

impl SolveError {
    pub fn name(&self) -> &'static str {
        match self {
            SolveError::GainNotConstant { .. } => "GainNotConstant",
            SolveError::NoConvergence { .. } => "NoConvergence",
            SolveError::NegativeStepCost { .. } => "NegativeStepCost",
            SolveError::EnumerationTooLarge { .. } => "EnumerationTooLarge",
            SolveError::SingularSystem(_) => "SingularSystem",
            SolveError::Mdp(e) => e.name(),
        }
    }
}

/// Gain of `policy` from every start state.
///
/// Exact: recurrent classes of the induced chain get their stationary average
/// reward, transient states the absorption-weighted mix of those.
pub fn gain_of_policy<T: Scalar>(mdp: &Mdp<T>, policy: &Policy) -> Result<Vec<T>, SolveError> {
    chain_gain(&mdp.induced_chain(policy)?)
}

/// Gain of every state of a Markov chain with rewards.
pub fn chain_gain<T: Scalar>(chain: &InducedChain<T>) -> Result<Vec<T>, SolveError> {
    let n = chain.n_states;
    let p = &chain.transition;
    let classes = ChainClasses::decompose(n, |i, j| p[i * n + j] > T::zero());
    let mut gain = vec![T::zero(); n];
    for (id, members) in classes.members.iter().enumerate() {
        if !classes.closed[id] {
            continue;
        }
        let pi = stationary_distribution(p, n, members)
            .ok_or(SolveError::SingularSystem("stationary distribution"))?;
        let g: T = members.iter().zip(&pi).map(|(&s, &w)| w * chain.mean_reward[s]).sum();
        for &s in members {
            gain[s] = g;
        }
    }
    let transient: Vec<usize> = (0..n).filter(|&s| !classes.is_recurrent(s)).collect();
    if transient.is_empty() {
        return Ok(gain);
    }
    // (I - Q) g_T = P_{T,R} g_R
    let m = transient.len();
    let mut a = vec![T::zero(); m * m];
    let mut b = vec![T::zero(); m];
    for (row, &i) in transient.iter().enumerate() {
        for (col, &j) in transient.iter().enumerate() {
            let delta = if i == j { T::one() } else { T::zero() };
            a[row * m + col] = delta - p[i * n + j];
        }
        b[row] = (0..n)
            .filter(|&j| classes.is_recurrent(j))
            .map(|j| p[i * n + j] * gain[j])
            .sum();
    }
    let g_t = solve_dense(a, b).ok_or(SolveError::SingularSystem("transient absorption"))?;
    for (&s, g) in transient.iter().zip(g_t) {
        gain[s] = g;
    }
    Ok(gain)
}

/// Optimal gain together with a bias vector and its span.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimalGain<T> {
    pub gain: T,
    /// Relative values with `bias[0] = 0`.
    pub bias: Vec<T>,
    pub bias_span: T,
    pub iterations: usize,
}

/// Optimal gain by relative value iteration on the aperiodicity-transformed
/// MDP, starting from zero values with state 0 as the reference.
///
/// Fails with [`SolveError::GainNotConstant`] when the per-state optimal
/// gains (the limits of the one-sweep differences) disagree.
pub fn optimal_gain<T: Scalar>(mdp: &Mdp<T>) -> Result<OptimalGain<T>, SolveError> {
    let n = mdp.n_states();
    let tau = T::lit(APERIODICITY);
    let stop = T::tol(RVI_TOLERANCE);
    let gain_tol = T::tol(GAIN_CONSTANT_TOLERANCE);
    let mut u = vec![T::zero(); n];
    let mut next = vec![T::zero(); n];
    let mut diff = vec![T::zero(); n];
    // Span of the differences at the last checkpoint; a span that no longer
    // shrinks across a whole window has reached its limit.
    let mut checkpoint = T::infinity();

    for iter in 1..=MAX_ITERATIONS {
        for s in 0..n {
            next[s] = (0..mdp.n_actions())
                .map(|a| mdp.mean_reward(s, a) + tau * mdp.expect(s, a, &u) + (T::one() - tau) * u[s])
                .fold(T::neg_infinity(), T::max);
        }
        for s in 0..n {
            diff[s] = next[s] - u[s];
        }
        let (lo, hi) = min_max(&diff);
        let width = hi - lo;
        let stagnant = iter % STAGNATION_WINDOW == 0 && width >= T::lit(0.999) * checkpoint;
        if iter % STAGNATION_WINDOW == 0 {
            checkpoint = width;
        }
        if width < stop || (stagnant && width <= gain_tol) {
            let reference = next[0];
            let bias: Vec<T> = next.iter().map(|&v| tau * (v - reference)).collect();
            let estimate = (hi + lo) / T::lit(2.0);
            let policy = greedy_policy(mdp, &bias);
            let gain = exact_gain(mdp, &policy, estimate, width + stop).unwrap_or(estimate);
            let bias = exact_bias(mdp, &policy, gain, &bias).unwrap_or(bias);
            return Ok(OptimalGain {
                gain,
                bias_span: span(&bias),
                bias,
                iterations: iter,
            });
        }
        if stagnant {
            return Err(SolveError::GainNotConstant { min: lo.as_f64(), max: hi.as_f64() });
        }
        let reference = next[0];
        for s in 0..n {
            u[s] = next[s] - reference;
        }
    }
    Err(SolveError::NoConvergence { solver: "relative value iteration", iterations: MAX_ITERATIONS })
}

fn greedy_policy<T: Scalar>(mdp: &Mdp<T>, bias: &[T]) -> Policy {
    Policy::new(
        (0..mdp.n_states())
            .map(|s| {
                (0..mdp.n_actions())
                    .map(|a| (a, mdp.mean_reward(s, a) + mdp.expect(s, a, bias)))
                    .fold((0, T::neg_infinity()), |best, cand| if cand.1 > best.1 { cand } else { best })
                    .0
            })
            .collect(),
    )
}

/// Exact gain of `policy`, kept only when it is constant and lies within
/// `slack` of `estimate`.
fn exact_gain<T: Scalar>(mdp: &Mdp<T>, policy: &Policy, estimate: T, slack: T) -> Option<T> {
    let gains = gain_of_policy(mdp, policy).ok()?;
    let (lo, hi) = min_max(&gains);
    let exact = (lo + hi) / T::lit(2.0);
    (hi - lo <= T::prob_tol() && (exact - estimate).abs() <= slack).then_some(exact)
}

/// Solves `g + h = r_pi + P_pi h` with `h[0] = 0` and keeps the solution
/// when it satisfies the optimality equation and stays near `approx`.
fn exact_bias<T: Scalar>(mdp: &Mdp<T>, policy: &Policy, gain: T, approx: &[T]) -> Option<Vec<T>> {
    let n = mdp.n_states();
    if n < 2 {
        return None;
    }
    // Unknowns are (gain, h[1..]); h[0] = 0 is the reference.
    let mut a = vec![T::zero(); n * n];
    let mut b = vec![T::zero(); n];
    for s in 0..n {
        let act = policy.action(s);
        a[s * n] = T::one();
        for j in 1..n {
            let delta = if s == j { T::one() } else { T::zero() };
            a[s * n + j] = delta - mdp.prob(s, act, j);
        }
        b[s] = mdp.mean_reward(s, act);
    }
    let x = solve_dense(a, b)?;
    if (x[0] - gain).abs() > T::tol(1e-9) {
        return None;
    }
    let rest = x[1..].to_vec();
    let h: Vec<T> = std::iter::once(T::zero()).chain(rest).collect();
    let scale = h.iter().fold(T::one(), |m, &x| m.max(x.abs()));
    let tol = T::tol(1e-9) * scale;
    let optimal = (0..n).all(|s| {
        let best = (0..mdp.n_actions())
            .map(|a| mdp.mean_reward(s, a) + mdp.expect(s, a, &h))
            .fold(T::neg_infinity(), T::max);
        (best - gain - h[s]).abs() <= tol
    });
    let near = h.iter().zip(approx).all(|(&x, &y)| (x - y).abs() <= T::tol(1e-6) * scale);
    (optimal && near && h.iter().all(|x| x.is_finite())).then_some(h)
}

fn min_max<T: Scalar>(xs: &[T]) -> (T, T) {
    xs.iter()
        .fold((T::infinity(), T::neg_infinity()), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

/// Square matrix indexed `(from, to)`; `+inf` marks unreachable targets.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix<T> {
    pub n: usize,
    pub values: Vec<T>,
}

impl<T: Scalar> CostMatrix<T> {
    pub fn get(&self, from: usize, to: usize) -> T {
        self.values[from * self.n + to]
    }

    /// Largest entry, `0` for a single state.
    pub fn max(&self) -> T {
        max_or_zero(self.values.iter().copied())
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.values.chunks(self.n).map(<[T]>::to_vec).collect()
    }
}

/// Unit step cost, for expected hitting times.
pub fn unit_cost<T: Scalar>(_: usize, _: usize) -> T {
    T::one()
}

/// Step cost `r_max - mean_reward(s, a)` of the MEHC.
pub fn reward_gap_cost<T: Scalar>(mdp: &Mdp<T>) -> impl Fn(usize, usize) -> T + Sync + '_ {
    move |s, a| mdp.r_max() - mdp.mean_reward(s, a)
}

fn check_costs<T: Scalar>(mdp: &Mdp<T>, cost: &(impl Fn(usize, usize) -> T + ?Sized)) -> Result<(), SolveError> {
    for s in 0..mdp.n_states() {
        for a in 0..mdp.n_actions() {
            let c = cost(s, a);
            if c < T::zero() || c.is_nan() {
                return Err(SolveError::NegativeStepCost { state: s, action: a, value: c.as_f64() });
            }
        }
    }
    Ok(())
}

/// Minimum expected accumulated `step_cost` before first hitting each target,
/// for every `(start, target)` pair.
///
/// Targets are solved independently (and in parallel). Each solve first
/// classifies the states from which no policy reaches the target or a
/// zero-cost trap almost surely (those are `+inf`), then runs value iteration
/// from zero on the rest and finishes with an exact evaluation of the greedy
/// policy when that evaluation is consistent.
pub fn hitting_cost_matrix<T, F>(mdp: &Mdp<T>, step_cost: F) -> Result<CostMatrix<T>, SolveError>
where
    T: Scalar,
    F: Fn(usize, usize) -> T + Sync,
{
    check_costs(mdp, &step_cost)?;
    let n = mdp.n_states();
    let columns: Vec<Vec<T>> = (0..n)
        .into_par_iter()
        .map(|target| ssp_values(mdp, target, &step_cost))
        .collect::<Result<_, _>>()?;
    let mut values = vec![T::zero(); n * n];
    for (target, column) in columns.iter().enumerate() {
        for (s, &v) in column.iter().enumerate() {
            values[s * n + target] = v;
        }
    }
    Ok(CostMatrix { n, values })
}

/// Minimum expected hitting times (unit step cost).
pub fn hitting_time_matrix<T: Scalar>(mdp: &Mdp<T>) -> Result<CostMatrix<T>, SolveError> {
    hitting_cost_matrix(mdp, unit_cost::<T>)
}

/// Diameter: the largest minimum expected hitting time.
pub fn diameter<T: Scalar>(mdp: &Mdp<T>) -> Result<T, SolveError> {
    Ok(hitting_time_matrix(mdp)?.max())
}

/// Maximum expected hitting cost with step cost `r_max - mean_reward`.
pub fn mehc<T: Scalar>(mdp: &Mdp<T>) -> Result<T, SolveError> {
    Ok(hitting_cost_matrix(mdp, reward_gap_cost(mdp))?.max())
}

fn supported_in<T: Scalar>(row: &[T], set: &[bool]) -> bool {
    row.iter().zip(set).all(|(&p, &inside)| p <= T::zero() || inside)
}

/// States from which some action sequence can stay forever at zero cost
/// without visiting `target`.
fn zero_cost_traps<T: Scalar>(mdp: &Mdp<T>, target: usize, cost: &(impl Fn(usize, usize) -> T + ?Sized)) -> Vec<bool> {
    let n = mdp.n_states();
    let mut inside: Vec<bool> = (0..n).map(|s| s != target).collect();
    loop {
        let mut changed = false;
        for s in 0..n {
            if !inside[s] {
                continue;
            }
            let keep = (0..mdp.n_actions())
                .any(|a| cost(s, a) == T::zero() && supported_in(mdp.row(s, a), &inside));
            if !keep {
                inside[s] = false;
                changed = true;
            }
        }
        if !changed {
            return inside;
        }
    }
}

/// States from which some policy reaches `goal` with probability one.
fn almost_sure_reach<T: Scalar>(mdp: &Mdp<T>, goal: &[bool]) -> Vec<bool> {
    let n = mdp.n_states();
    let mut allowed = vec![true; n];
    loop {
        let mut reach = goal.to_vec();
        loop {
            let mut grew = false;
            for s in 0..n {
                if reach[s] || !allowed[s] {
                    continue;
                }
                let hit = (0..mdp.n_actions()).any(|a| {
                    let row = mdp.row(s, a);
                    supported_in(row, &allowed)
                        && row.iter().zip(&reach).any(|(&p, &r)| p > T::zero() && r)
                });
                if hit {
                    reach[s] = true;
                    grew = true;
                }
            }
            if !grew {
                break;
            }
        }
        if reach == allowed {
            return reach;
        }
        allowed = reach;
    }
}

fn ssp_values<T: Scalar>(
    mdp: &Mdp<T>,
    target: usize,
    cost: &(impl Fn(usize, usize) -> T + Sync + ?Sized),
) -> Result<Vec<T>, SolveError> {
    let n = mdp.n_states();
    let mut goal = zero_cost_traps(mdp, target, cost);
    goal[target] = true;
    let finite = almost_sure_reach(mdp, &goal);

    // Actions whose successors all have finite optimal cost.
    let usable: Vec<Vec<usize>> = (0..n)
        .map(|s| {
            (0..mdp.n_actions())
                .filter(|&a| supported_in(mdp.row(s, a), &finite))
                .collect()
        })
        .collect();
    let active: Vec<usize> = (0..n).filter(|&s| finite[s] && !goal[s]).collect();

    let tol = T::tol(SSP_TOLERANCE);
    let cap = T::lit(DIVERGENCE_CAP) * mdp.r_max();
    let mut v = vec![T::zero(); n];
    let mut next = v.clone();
    let mut prev_change: Option<T> = None;
    let mut converged = active.is_empty();
    for _ in 0..MAX_ITERATIONS {
        if converged {
            break;
        }
        let mut change = T::zero();
        let mut scale = T::one();
        for &s in &active {
            let best = usable[s]
                .iter()
                .map(|&a| cost(s, a) + mdp.expect(s, a, &v))
                .fold(T::infinity(), T::min);
            change = change.max((best - v[s]).abs());
            scale = scale.max(best.abs());
            next[s] = best;
        }
        std::mem::swap(&mut v, &mut next);
        if v.iter().any(|&x| x > cap) {
            converged = true;
            break;
        }
        // Error of monotone value iteration is about change * r / (1 - r) for
        // the observed contraction rate r.
        let bound = tol * scale;
        if change <= bound {
            let tail = match prev_change {
                Some(p) if p > T::zero() && change < p => {
                    let r = change / p;
                    change * r / (T::one() - r)
                }
                Some(_) if change == T::zero() => T::zero(),
                _ => T::infinity(),
            };
            if tail <= bound {
                converged = true;
                break;
            }
        }
        prev_change = Some(change);
    }
    if !converged {
        return Err(SolveError::NoConvergence { solver: "hitting-cost value iteration", iterations: MAX_ITERATIONS });
    }
    if let Some(exact) = polish(mdp, cost, &v, &active, &usable, tol) {
        v = exact;
    }
    Ok((0..n)
        .map(|s| {
            if !finite[s] || v[s] > cap {
                T::infinity()
            } else if goal[s] {
                T::zero()
            } else {
                v[s]
            }
        })
        .collect())
}

/// Evaluates the greedy policy of converged values exactly and keeps the
/// result only if it still satisfies the Bellman equation to `tol`.
fn polish<T: Scalar>(
    mdp: &Mdp<T>,
    cost: &(impl Fn(usize, usize) -> T + ?Sized),
    v: &[T],
    active: &[usize],
    usable: &[Vec<usize>],
    tol: T,
) -> Option<Vec<T>> {
    if active.is_empty() || v.iter().any(|x| !x.is_finite()) {
        return None;
    }
    let greedy = |s: usize, v: &[T]| {
        usable[s]
            .iter()
            .map(|&a| (a, cost(s, a) + mdp.expect(s, a, v)))
            .fold((usize::MAX, T::infinity()), |best, cand| if cand.1 < best.1 { cand } else { best })
    };
    let m = active.len();
    let mut a = vec![T::zero(); m * m];
    let mut b = vec![T::zero(); m];
    for (row, &s) in active.iter().enumerate() {
        let (act, _) = greedy(s, v);
        for (col, &j) in active.iter().enumerate() {
            let delta = if s == j { T::one() } else { T::zero() };
            a[row * m + col] = delta - mdp.prob(s, act, j);
        }
        b[row] = cost(s, act);
    }
    let x = solve_dense(a, b)?;
    let mut exact = vec![T::zero(); v.len()];
    for (&s, &val) in active.iter().zip(&x) {
        if !val.is_finite() || val < T::zero() {
            return None;
        }
        exact[s] = val;
    }
    let scale = x.iter().fold(T::one(), |m, &val| m.max(val));
    let consistent = active
        .iter()
        .all(|&s| (greedy(s, &exact).1 - exact[s]).abs() <= tol * scale && (exact[s] - v[s]).abs() <= T::tol(1e-6) * scale);
    consistent.then_some(exact)
}

/// Minimum expected hitting cost from `start` to `target` by enumerating all
/// stationary deterministic policies.
///
/// Each policy is evaluated on its chain with the target made absorbing: a
/// reachable recurrent class that avoids the target and carries any positive
/// step cost makes the policy's cost infinite; otherwise the cost of the
/// transient states solves `(I - Q) v = c`.
pub fn oracle_hitting_cost<T, F>(mdp: &Mdp<T>, start: usize, target: usize, step_cost: F) -> Result<T, SolveError>
where
    T: Scalar,
    F: Fn(usize, usize) -> T,
{
    let n = mdp.n_states();
    for (what, idx) in [("state", start), ("state", target)] {
        if idx >= n {
            return Err(MdpError::IndexOutOfRange { what, index: idx, bound: n }.into());
        }
    }
    let policies = (mdp.n_actions() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if policies > MAX_ENUMERATION {
        return Err(SolveError::EnumerationTooLarge { policies });
    }
    check_costs(mdp, &step_cost)?;
    if start == target {
        return Ok(T::zero());
    }
    let mut best = T::infinity();
    for policy in Policy::enumerate(n, mdp.n_actions()) {
        let c = policy_hitting_cost(mdp, &policy, start, target, &step_cost)?;
        if c < best {
            best = c;
        }
    }
    Ok(best)
}

fn policy_hitting_cost<T: Scalar>(
    mdp: &Mdp<T>,
    policy: &Policy,
    start: usize,
    target: usize,
    cost: &impl Fn(usize, usize) -> T,
) -> Result<T, SolveError> {
    let n = mdp.n_states();
    let edge = |i: usize, j: usize| {
        if i == target {
            j == target
        } else {
            mdp.prob(i, policy.action(i), j) > T::zero()
        }
    };
    let mut reachable = vec![false; n];
    let mut stack = vec![start];
    reachable[start] = true;
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if edge(i, j) && !reachable[j] {
                reachable[j] = true;
                stack.push(j);
            }
        }
    }
    let classes = ChainClasses::decompose(n, edge);
    let step = |s: usize| cost(s, policy.action(s));
    for (id, members) in classes.members.iter().enumerate() {
        if !classes.closed[id] || members.contains(&target) || !reachable[members[0]] {
            continue;
        }
        if members.iter().any(|&s| step(s) > T::zero()) {
            return Ok(T::infinity());
        }
    }
    let transient: Vec<usize> = (0..n)
        .filter(|&s| reachable[s] && s != target && !classes.is_recurrent(s))
        .collect();
    let Some(pos) = transient.iter().position(|&s| s == start) else {
        // start sits in a zero-cost recurrent class
        return Ok(T::zero());
    };
    let m = transient.len();
    let mut a = vec![T::zero(); m * m];
    let mut b = vec![T::zero(); m];
    for (row, &i) in transient.iter().enumerate() {
        let act = policy.action(i);
        for (col, &j) in transient.iter().enumerate() {
            let delta = if i == j { T::one() } else { T::zero() };
            a[row * m + col] = delta - mdp.prob(i, act, j);
        }
        b[row] = step(i);
    }
    let v = solve_dense(a, b).ok_or(SolveError::SingularSystem("policy hitting cost"))?;
    Ok(v[pos])
}

/// Oracle hitting costs for every pair.
pub fn oracle_hitting_cost_matrix<T, F>(mdp: &Mdp<T>, step_cost: F) -> Result<CostMatrix<T>, SolveError>
where
    T: Scalar,
    F: Fn(usize, usize) -> T + Sync,
{
    let n = mdp.n_states();
    let values = (0..n * n)
        .into_par_iter()
        .map(|k| oracle_hitting_cost(mdp, k / n, k % n, &step_cost))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CostMatrix { n, values })
}

/// Structural parameters of an MDP.
#[derive(Debug, Clone, PartialEq)]
pub struct StructuralReport<T> {
    pub diameter: T,
    pub mehc: T,
    pub optimal_gain: T,
    pub bias_span: T,
    pub hitting_time: CostMatrix<T>,
    pub hitting_cost: CostMatrix<T>,
}

pub fn structural_report<T: Scalar>(mdp: &Mdp<T>) -> Result<StructuralReport<T>, SolveError> {
    let hitting_time = hitting_time_matrix(mdp)?;
    let hitting_cost = hitting_cost_matrix(mdp, reward_gap_cost(mdp))?;
    let opt = optimal_gain(mdp)?;
    Ok(StructuralReport {
        diameter: hitting_time.max(),
        mehc: hitting_cost.max(),
        optimal_gain: opt.gain,
        bias_span: opt.bias_span,
        hitting_time,
        hitting_cost,
    })
}
