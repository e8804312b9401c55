//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use mehc::harness::{random_mdp, random_potential, sweep_theorem3, toy_mdp, HarnessError};
use mehc::io::{self, NamedMdp};
use mehc::shaping::{apply_potential, shaped_cost_shift, verify_pi_equivalence, ShapingError};
use mehc::solve::{
    self, diameter, hitting_cost_matrix, mehc as kappa, optimal_gain, oracle_hitting_cost_matrix,
    reward_gap_cost, SolveError,
};
use mehc::ucrl2::{episode_bound, extended_value_iteration_observed, ConfidenceSet, EmpiricalModel};
use mehc::{Mdp64, Policy, Potential64, RegretTrace64};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn close(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol
}

fn toy() -> Mdp64 {
    toy_mdp(0.11, 0.1, 0.05).expect("toy parameters are valid")
}

/// Random instance `i` of a run: sizes cycle through S in 2..=4, A in 1..=2.
fn small_random(i: u64, allow_noncomm: bool) -> Mdp64 {
    let s = 2 + (i % 3) as usize;
    let a = 1 + ((i / 3) % 2) as usize;
    random_mdp(s, a, 2, 1000 + i, allow_noncomm).expect("generator parameters are valid")
}

fn golden_values() -> Outcome {
    let start = Instant::now();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("toy.json");
    io::write_mdp(&path, &NamedMdp::with_default_names(toy())).map_err(|e| e.to_string())?;
    let m = io::read_mdp::<f64>(&path).map_err(|e| e.to_string())?.mdp;
    let report = solve::structural_report(&m).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    check(
        close(report.mehc, 2.2, 1e-6)
            && close(report.diameter, 20.0, 1e-6)
            && close(report.optimal_gain, 0.9, 1e-6)
            && elapsed < Duration::from_secs(1),
        format!(
            "kappa={} D={} rho*={} in {:.3?}",
            report.mehc, report.diameter, report.optimal_gain, elapsed
        ),
    )
}

fn shaped_toy() -> Outcome {
    let phi = Potential64::new(vec![0.0, 0.1]);
    let shaped = apply_potential(&toy(), &phi).map_err(|e| e.to_string())?;
    let (a, b) = (shaped.mean_reward(0, 1), shaped.mean_reward(1, 1));
    let k = kappa(&shaped).map_err(|e| e.to_string())?;
    check(
        close(a, 0.895, 1e-12) && close(b, 0.895, 1e-12) && close(k, 2.1, 1e-6),
        format!("r(s1,a2)={a} r(s2,a2)={b} kappa={k}"),
    )
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for i in 0..200 {
        let m = small_random(i, false);
        let fast = hitting_cost_matrix(&m, reward_gap_cost(&m)).map_err(|e| e.to_string())?;
        let slow = oracle_hitting_cost_matrix(&m, reward_gap_cost(&m)).map_err(|e| e.to_string())?;
        for (&x, &y) in fast.values.iter().zip(&slow.values) {
            let d = if x == y { 0.0 } else { (x - y).abs() };
            worst = worst.max(d);
        }
    }
    let elapsed = start.elapsed();
    check(
        worst <= 1e-6 && elapsed < Duration::from_secs(120),
        format!("200 MDPs, max |diff|={worst:e} in {elapsed:.2?}"),
    )
}

fn factor_of_two_sweep() -> Outcome {
    let mut instances = 0;
    let mut skipped = 0;
    let mut violations = 0;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for (k, (s, a)) in [(2, 2), (3, 2), (4, 2), (5, 3)].into_iter().enumerate() {
        let r = sweep_theorem3(125, s, a, 7 + k as u64).map_err(|e| e.to_string())?;
        instances += r.instances;
        skipped += r.skipped;
        violations += r.violations;
        lo = lo.min(r.min_ratio);
        hi = hi.max(r.max_ratio);
    }
    check(
        instances == 500 && violations == 0,
        format!("{instances} instances, {skipped} skipped, ratio in [{lo:.6}, {hi:.6}], {violations} violations"),
    )
}

fn shaped_cost_identity() -> Outcome {
    let mut evaluated = 0;
    let mut skipped = 0;
    let mut worst = 0.0f64;
    let mut i = 0u64;
    while evaluated < 100 {
        i += 1;
        let m = random_mdp::<f64>(2 + (i % 5) as usize, 2, 2, 5000 + i, false).map_err(|e| e.to_string())?;
        let phi = match random_potential(&m, 0.5, 9000 + i) {
            Ok(phi) => phi,
            Err(HarnessError::NoValidPotential(_)) => {
                skipped += 1;
                continue;
            }
            Err(e) => return Err(e.to_string()),
        };
        match shaped_cost_shift(&m, &phi) {
            Ok(shift) => {
                worst = worst.max(shift.max_abs_residual);
                evaluated += 1;
            }
            Err(ShapingError::PreconditionViolated(_)) => skipped += 1,
            Err(e) => return Err(e.to_string()),
        }
    }
    check(worst <= 1e-6, format!("100 instances ({skipped} skipped), max residual={worst:e}"))
}

fn pi_equivalence() -> Outcome {
    let sizes = [(2, 2), (3, 3), (4, 2), (4, 4), (5, 3), (8, 2)];
    let mut worst = 0.0f64;
    let mut i = 0u64;
    let mut done = 0;
    while done < 50 {
        i += 1;
        let (s, a) = sizes[(i % sizes.len() as u64) as usize];
        let m = random_mdp::<f64>(s, a, s.min(3), 20_000 + i, false).map_err(|e| e.to_string())?;
        let Ok(phi) = random_potential(&m, 0.5, 30_000 + i) else {
            continue;
        };
        let policies: Vec<Policy> = Policy::enumerate(s, a).collect();
        worst = worst.max(verify_pi_equivalence(&m, &phi, &policies).map_err(|e| e.to_string())?);
        done += 1;
    }
    check(worst <= 1e-8, format!("50 MDPs, all policies, max gain deviation={worst:e}"))
}

fn evi_span_monitor() -> Outcome {
    let mut models = vec![toy()];
    models.extend((0..20).map(|i| random_mdp::<f64>(2 + (i % 4) as usize, 2, 2, 40_000 + i, false).unwrap()));
    let mut worst_excess = f64::NEG_INFINITY;
    let mut sweeps = 0;
    for m in &models {
        let k = kappa(m).map_err(|e| e.to_string())?;
        let model = EmpiricalModel::from_mdp(m);
        let conf = ConfidenceSet::uniform(m.n_states() * m.n_actions(), 0.05, 0.1);
        extended_value_iteration_observed(&model, &conf, 1e-8, |_, u| {
            let sp = u.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - u.iter().cloned().fold(f64::INFINITY, f64::min);
            worst_excess = worst_excess.max(sp - k);
            sweeps += 1;
        })
        .map_err(|e| e.to_string())?;
    }
    check(
        worst_excess <= 1e-6,
        format!("21 MDPs, {sweeps} sweeps, max span(u_i) - kappa={worst_excess:e}"),
    )
}

fn ordering_inequalities() -> Outcome {
    let mut models = vec![toy()];
    models.extend((0..100).map(|i| small_random(i, false)));
    models.extend((0..100).map(|i| small_random(500 + i, true)));
    let mut checked_span = 0;
    let mut failures = Vec::new();
    for (i, m) in models.iter().enumerate() {
        let (k, d) = (kappa(m).map_err(|e| e.to_string())?, diameter(m).map_err(|e| e.to_string())?);
        if !(k <= m.r_max() * d) {
            failures.push(format!("#{i}: kappa={k} > r_max*D={}", m.r_max() * d));
        }
        if d.is_finite() {
            match optimal_gain(m) {
                Ok(g) => {
                    checked_span += 1;
                    if g.bias_span > k + 1e-6 {
                        failures.push(format!("#{i}: sp={} > kappa={k}", g.bias_span));
                    }
                }
                Err(SolveError::GainNotConstant { .. }) => failures.push(format!("#{i}: communicating but gain not constant")),
                Err(e) => return Err(e.to_string()),
            }
        }
    }
    check(
        failures.is_empty(),
        format!("{} instances, {checked_span} communicating; {}", models.len(), failures.join("; ")),
    )
}

const HORIZON: u64 = 200_000;
const DELTA: f64 = 0.05;

fn learning_runs(m: &Mdp64) -> Result<Vec<RegretTrace64>, String> {
    mehc::harness::run_seeds(m, HORIZON, DELTA, &(0..20).collect::<Vec<_>>()).map_err(|e| e.to_string())
}

fn ucrl2_learning(traces: &[RegretTrace64], elapsed: Duration) -> Outcome {
    let m = toy();
    let n = traces.len() as f64;
    let avg_reward = traces.iter().map(|t| t.last().cumulative_reward / HORIZON as f64).sum::<f64>() / n;
    let rate_full = traces.iter().map(|t| t.at(HORIZON).regret / HORIZON as f64).sum::<f64>() / n;
    let rate_half = traces.iter().map(|t| t.at(HORIZON / 2).regret / (HORIZON / 2) as f64).sum::<f64>() / n;
    let bound = episode_bound(m.n_states(), m.n_actions(), HORIZON);
    let max_episodes = traces.iter().map(|t| t.episodes).max().unwrap_or(0);
    check(
        avg_reward >= 0.85
            && rate_full < rate_half
            && traces.iter().all(|t| t.episodes as f64 <= bound)
            && elapsed < Duration::from_secs(300),
        format!(
            "avg reward={avg_reward:.6}, regret/T: {rate_half:.3e} at T/2 -> {rate_full:.3e} at T, \
             episodes<={max_episodes} (bound {bound:.1}), {elapsed:.2?}"
        ),
    )
}

fn csv_bytes(trace: &RegretTrace64) -> Vec<u8> {
    let mut out = Vec::new();
    trace.write_csv(&mut out, 1).expect("writing to memory succeeds");
    out
}

fn determinism(first: &[RegretTrace64]) -> Outcome {
    let second = learning_runs(&toy())?;
    let same = first.len() == second.len()
        && first.iter().zip(&second).all(|(a, b)| csv_bytes(a) == csv_bytes(b));
    check(same, format!("{} seeds rerun, CSV traces identical: {same}", first.len()))
}

fn main() -> ExitCode {
    let mut results: Vec<(&str, Outcome)> = vec![
        ("1 golden values", golden_values()),
        ("2 shaped toy", shaped_toy()),
        ("3 oracle equivalence", oracle_equivalence()),
        ("4 factor-of-two sweep", factor_of_two_sweep()),
        ("5 shaped-cost identity", shaped_cost_identity()),
        ("6 policy-gain equivalence", pi_equivalence()),
        ("7 EVI span monitor", evi_span_monitor()),
        ("8 ordering inequalities", ordering_inequalities()),
    ];
    let start = Instant::now();
    match learning_runs(&toy()) {
        Ok(traces) => {
            results.push(("9 UCRL2 learning", ucrl2_learning(&traces, start.elapsed())));
            results.push(("10 determinism", determinism(&traces)));
        }
        Err(e) => {
            results.push(("9 UCRL2 learning", Err(e.clone())));
            results.push(("10 determinism", Err(e)));
        }
    }
    let mut failed = 0;
    for (name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
