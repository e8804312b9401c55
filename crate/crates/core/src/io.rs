//! JSON file formats: MDPs, potentials, structural reports and run summaries.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::mdp::{Mdp, MdpError, RewardModel};
use crate::scalar::{round_sig, Scalar};
use crate::shaping::Potential;
use crate::solve::{CostMatrix, StructuralReport};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("Io: {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("ParseError: {0}")]
    Parse(String),
    #[error(transparent)]
    Mdp(#[from] MdpError),
}

impl IoError {
    pub fn name(&self) -> &'static str {
        match self {
            IoError::Io { .. } => "Io",
            IoError::Parse(_) => "ParseError",
            IoError::Mdp(e) => e.name(),
        }
    }

    pub fn at(path: &Path, source: std::io::Error) -> Self {
        IoError::Io { path: path.to_path_buf(), source }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MdpFile {
    r_max: f64,
    reward_model: RewardModel,
    states: Vec<String>,
    actions: Vec<String>,
    transition: Vec<Vec<Vec<f64>>>,
    mean_reward: Vec<Vec<f64>>,
}

/// An MDP with the state and action names of its file.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedMdp<T> {
    pub mdp: Mdp<T>,
    pub states: Vec<String>,
    pub actions: Vec<String>,
}

impl<T: Scalar> NamedMdp<T> {
    /// Names `s0, s1, ...` and `a0, a1, ...`.
    pub fn with_default_names(mdp: Mdp<T>) -> Self {
        let states = (0..mdp.n_states()).map(|i| format!("s{i}")).collect();
        let actions = (0..mdp.n_actions()).map(|i| format!("a{i}")).collect();
        Self { mdp, states, actions }
    }
}

fn expect_len(found: usize, expected: usize, at: &str, what: &str) -> Result<(), IoError> {
    if found == expected {
        Ok(())
    } else {
        Err(IoError::Parse(format!("{at}: expected {expected} {what}, found {found}")))
    }
}

fn cast<T: Scalar>(x: f64) -> Result<T, IoError> {
    T::from_f64(x).ok_or_else(|| IoError::Parse(format!("value {x} not representable")))
}

/// Parses the MDP JSON format and validates the result.
pub fn parse_mdp<T: Scalar>(text: &str) -> Result<NamedMdp<T>, IoError> {
    let file: MdpFile = serde_json::from_str(text).map_err(|e| IoError::Parse(e.to_string()))?;
    let ns = file.states.len();
    let na = file.actions.len();
    if ns == 0 || na == 0 {
        return Err(IoError::Parse("states and actions must be non-empty".into()));
    }
    expect_len(file.transition.len(), ns, "transition", "state rows")?;
    expect_len(file.mean_reward.len(), ns, "mean_reward", "state rows")?;
    let mut transition = Vec::with_capacity(ns * na * ns);
    let mut mean_reward = Vec::with_capacity(ns * na);
    for s in 0..ns {
        expect_len(file.transition[s].len(), na, &format!("transition[{s}]"), "actions")?;
        expect_len(file.mean_reward[s].len(), na, &format!("mean_reward[{s}]"), "actions")?;
        for a in 0..na {
            let row = &file.transition[s][a];
            expect_len(row.len(), ns, &format!("transition[{s}][{a}]"), "next states")?;
            for &p in row {
                transition.push(cast(p)?);
            }
            mean_reward.push(cast(file.mean_reward[s][a])?);
        }
    }
    let mdp = Mdp::new(ns, na, transition, mean_reward, file.reward_model, cast(file.r_max)?)?;
    Ok(NamedMdp { mdp, states: file.states, actions: file.actions })
}

/// Serializes at full precision so shaped files round-trip exactly.
pub fn mdp_to_json<T: Scalar>(named: &NamedMdp<T>) -> String {
    let m = &named.mdp;
    let (ns, na) = (m.n_states(), m.n_actions());
    let file = MdpFile {
        r_max: m.r_max().as_f64(),
        reward_model: m.reward_model(),
        states: named.states.clone(),
        actions: named.actions.clone(),
        transition: (0..ns)
            .map(|s| (0..na).map(|a| m.row(s, a).iter().map(|p| p.as_f64()).collect()).collect())
            .collect(),
        mean_reward: (0..ns)
            .map(|s| (0..na).map(|a| m.mean_reward(s, a).as_f64()).collect())
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("MDP serializes")
}

pub fn read_mdp<T: Scalar>(path: &Path) -> Result<NamedMdp<T>, IoError> {
    let text = fs::read_to_string(path).map_err(|e| IoError::at(path, e))?;
    parse_mdp(&text).map_err(|e| match e {
        IoError::Parse(msg) => IoError::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn write_mdp<T: Scalar>(path: &Path, named: &NamedMdp<T>) -> Result<(), IoError> {
    fs::write(path, mdp_to_json(named) + "\n").map_err(|e| IoError::at(path, e))
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PotentialFile {
    phi: Vec<f64>,
}

pub fn parse_potential<T: Scalar>(text: &str) -> Result<Potential<T>, IoError> {
    let file: PotentialFile = serde_json::from_str(text).map_err(|e| IoError::Parse(e.to_string()))?;
    Ok(Potential::new(file.phi.into_iter().map(cast).collect::<Result<_, _>>()?))
}

pub fn potential_to_json<T: Scalar>(phi: &Potential<T>) -> String {
    let file = PotentialFile { phi: phi.phi.iter().map(|x| x.as_f64()).collect() };
    serde_json::to_string(&file).expect("potential serializes")
}

pub fn read_potential<T: Scalar>(path: &Path) -> Result<Potential<T>, IoError> {
    let text = fs::read_to_string(path).map_err(|e| IoError::at(path, e))?;
    parse_potential(&text)
}

/// A number rounded to 12 significant digits; non-finite values become the
/// strings `"inf"`, `"-inf"` or `"nan"`.
pub fn number(x: f64) -> Value {
    if x.is_nan() {
        return Value::String("nan".into());
    }
    if x.is_infinite() {
        return Value::String(if x > 0.0 { "inf" } else { "-inf" }.into());
    }
    serde_json::Number::from_f64(round_sig(x))
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

/// Inverse of [`number`].
pub fn parse_number(v: &Value) -> Option<f64> {
    match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => match s.as_str() {
            "inf" => Some(f64::INFINITY),
            "-inf" => Some(f64::NEG_INFINITY),
            "nan" => Some(f64::NAN),
            _ => None,
        },
        _ => None,
    }
}

/// Rows of a cost matrix as nested arrays of [`number`]s.
pub fn matrix_json<T: Scalar>(m: &CostMatrix<T>) -> Value {
    Value::Array(
        m.rows()
            .into_iter()
            .map(|row| Value::Array(row.into_iter().map(|x| number(x.as_f64())).collect()))
            .collect(),
    )
}

pub fn report_to_json<T: Scalar>(report: &StructuralReport<T>) -> Value {
    let mut map = Map::new();
    map.insert("diameter".into(), number(report.diameter.as_f64()));
    map.insert("mehc".into(), number(report.mehc.as_f64()));
    map.insert("optimal_gain".into(), number(report.optimal_gain.as_f64()));
    map.insert("bias_span".into(), number(report.bias_span.as_f64()));
    map.insert("hitting_time".into(), matrix_json(&report.hitting_time));
    map.insert("hitting_cost".into(), matrix_json(&report.hitting_cost));
    Value::Object(map)
}

/// Sweep summary object.
pub fn sweep_summary_json(r: &crate::harness::Theorem3Report) -> Value {
    json!({
        "instances": r.instances,
        "skipped": r.skipped,
        "min_ratio": number(r.min_ratio),
        "max_ratio": number(r.max_ratio),
        "violations": r.violations,
        "max_residual": number(r.max_residual),
    })
}

/// Learning-run summary object.
pub fn experiment_summary_json(r: &crate::harness::ExperimentSummary) -> Value {
    json!({
        "seeds": r.seeds,
        "T": r.horizon,
        "delta": number(r.delta),
        "rho_star": number(r.rho_star),
        "mean_final_regret": number(r.mean_final_regret),
        "max_final_regret": number(r.max_final_regret),
        "mean_avg_reward": number(r.mean_avg_reward),
        "episodes": r.episodes,
    })
}
