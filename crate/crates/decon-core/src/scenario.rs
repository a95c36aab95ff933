//! Scenario configuration: a flat sectioned key-value file (TOML) naming the
//! footprint source, dynamicity model, adversary, strategy and run
//! parameters, with agent budgets given either as integers or as formulas
//! over the footprint's computed n, d, k.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::{
    Adversary, DynamicityModel, RandomFteaAdversary, ScheduleAdversary, StaticAdversary,
    WheelRimAdversary,
};
use crate::engine::{self, RunConfig, RunMeta};
use crate::generate;
use crate::graph::Footprint;
use crate::metrics::MetricsRow;
use crate::strategies::{InfiniteStrategy, ModifiedStrategy, UniStrategy};
use crate::trace::{fnv1a64, Outcome, Trace};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("scenario parse error: {0}")]
    Parse(String),
    #[error("bad scenario: {0}")]
    Invalid(String),
    #[error("engine error: {0}")]
    Engine(#[from] engine::EngineError),
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct GraphSection {
    /// Generator family, or omitted when `file`/`edges` provide the graph.
    pub family: Option<String>,
    pub n: Option<usize>,
    pub d: Option<usize>,
    pub k: Option<usize>,
    pub depth: Option<u32>,
    pub seed: Option<u64>,
    /// Path to a footprint text file.
    pub file: Option<String>,
    /// Inline footprint text.
    pub edges: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub kind: String,
    pub t: Option<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct AdversarySection {
    pub name: Option<String>,
    pub seed: Option<u64>,
    pub removal_probability: Option<f64>,
    pub schedule_file: Option<String>,
    pub schedule: Option<String>,
    /// Edge indices held absent forever by the `hide` adversary.
    pub edges: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategySection {
    pub name: String,
    pub strict_visibility: Option<bool>,
    pub node_oracle: Option<bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    /// Integer or formula over n, d, k (for example `d+2k`, `n-1`).
    pub agents: String,
    pub home: Option<usize>,
    /// 0 or omitted picks the default budget 64*n^2*max(T,1).
    pub max_rounds: Option<u64>,
    /// 0 or omitted picks the model default window.
    pub stall_window: Option<u64>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub id: Option<String>,
    #[serde(default)]
    pub graph: GraphSection,
    pub model: ModelSection,
    #[serde(default)]
    pub adversary: AdversarySection,
    pub strategy: StrategySection,
    pub run: RunSection,
}

impl Scenario {
    pub fn from_toml(text: &str) -> Result<Scenario, ScenarioError> {
        toml::from_str(text).map_err(|e| ScenarioError::Parse(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }
}

/// Evaluates an agent-budget formula over the footprint quantities:
/// signed sums of integer-coefficient terms in `n`, `d`, `k`, e.g. `d+2k-1`.
pub fn resolve_budget(expr: &str, n: usize, d: usize, k: usize) -> Result<i64, String> {
    let expr: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
    if expr.is_empty() {
        return Err("empty budget expression".into());
    }
    let mut total: i64 = 0;
    let mut chars = expr.chars().peekable();
    let mut sign = 1i64;
    let mut saw_term = false;
    loop {
        match chars.peek() {
            None => break,
            Some('+') => {
                chars.next();
                sign = 1;
            }
            Some('-') => {
                chars.next();
                sign = -1;
            }
            _ => {}
        }
        let mut digits = String::new();
        while let Some(c) = chars.peek() {
            if c.is_ascii_digit() {
                digits.push(*c);
                chars.next();
            } else {
                break;
            }
        }
        let var = match chars.peek() {
            Some('n') => {
                chars.next();
                Some(n as i64)
            }
            Some('d') => {
                chars.next();
                Some(d as i64)
            }
            Some('k') => {
                chars.next();
                Some(k as i64)
            }
            _ => None,
        };
        let term = match (digits.is_empty(), var) {
            (false, Some(v)) => digits.parse::<i64>().map_err(|e| e.to_string())? * v,
            (false, None) => digits.parse::<i64>().map_err(|e| e.to_string())?,
            (true, Some(v)) => v,
            (true, None) => return Err(format!("bad budget expression {expr:?}")),
        };
        total += sign * term;
        sign = 1;
        saw_term = true;
    }
    if !saw_term {
        return Err(format!("bad budget expression {expr:?}"));
    }
    Ok(total)
}

pub fn build_footprint(section: &GraphSection) -> Result<Footprint, ScenarioError> {
    if let Some(text) = &section.edges {
        return Footprint::from_text(text).map_err(|e| ScenarioError::Invalid(e.to_string()));
    }
    if let Some(path) = &section.file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ScenarioError::Invalid(format!("reading {path}: {e}")))?;
        return Footprint::from_text(&text).map_err(|e| ScenarioError::Invalid(e.to_string()));
    }
    let family = section
        .family
        .as_deref()
        .ok_or_else(|| ScenarioError::Invalid("graph needs family, file or edges".into()))?;
    generate::generate(
        family,
        section.n.unwrap_or(0),
        section.d.unwrap_or(0),
        section.k.unwrap_or(0),
        section.depth.unwrap_or(0),
        section.seed.unwrap_or(0),
    )
    .map_err(|e| ScenarioError::Invalid(e.to_string()))
}

fn build_model(section: &ModelSection) -> Result<DynamicityModel, ScenarioError> {
    match section.kind.as_str() {
        "ftea" => {
            let t = section.t.unwrap_or(1);
            if t < 1 {
                return Err(ScenarioError::Invalid("ftea requires t >= 1".into()));
            }
            Ok(DynamicityModel::Ftea { t })
        }
        "ided" => Ok(DynamicityModel::Ided),
        other => Err(ScenarioError::Invalid(format!("unknown model {other:?}"))),
    }
}

fn build_adversary(
    section: &AdversarySection,
    fp: &Footprint,
    model: DynamicityModel,
    default_seed: u64,
) -> Result<Box<dyn Adversary>, ScenarioError> {
    let name = section.name.as_deref().unwrap_or("static");
    match name {
        "static" => Ok(Box::new(StaticAdversary)),
        "wheel_rim" => {
            let hub_spans_all = fp.degree(0) == fp.node_count().saturating_sub(1);
            if !hub_spans_all {
                return Err(ScenarioError::Invalid(
                    "wheel_rim adversary needs a wheel footprint with hub 0".into(),
                ));
            }
            Ok(Box::new(WheelRimAdversary::new()))
        }
        "random_ftea" => {
            let t = match model {
                DynamicityModel::Ftea { t } => t,
                DynamicityModel::Ided => {
                    return Err(ScenarioError::Invalid(
                        "random_ftea adversary requires the ftea model".into(),
                    ))
                }
            };
            let p = section.removal_probability.unwrap_or(0.5);
            if !(0.0..=1.0).contains(&p) {
                return Err(ScenarioError::Invalid("removal_probability out of range".into()));
            }
            Ok(Box::new(RandomFteaAdversary::new(
                section.seed.unwrap_or(default_seed),
                t,
                p,
            )))
        }
        "hide" => {
            if model != DynamicityModel::Ided {
                return Err(ScenarioError::Invalid(
                    "hide adversary requires the ided model".into(),
                ));
            }
            let edges = section.edges.clone().unwrap_or_default();
            Ok(Box::new(
                crate::dynamics::FixedAbsenceAdversary::new(fp, edges)
                    .map_err(ScenarioError::Invalid)?,
            ))
        }
        "schedule" => {
            let text = if let Some(inline) = &section.schedule {
                inline.clone()
            } else if let Some(path) = &section.schedule_file {
                std::fs::read_to_string(path)
                    .map_err(|e| ScenarioError::Invalid(format!("reading {path}: {e}")))?
            } else {
                return Err(ScenarioError::Invalid(
                    "schedule adversary needs schedule or schedule_file".into(),
                ));
            };
            Ok(Box::new(
                ScheduleAdversary::from_text(fp, &text).map_err(ScenarioError::Invalid)?,
            ))
        }
        other => Err(ScenarioError::Invalid(format!("unknown adversary {other:?}"))),
    }
}

/// Outcome of one scenario execution.
pub struct ScenarioRun {
    pub trace: Trace,
    pub outcome: Outcome,
    pub metrics: MetricsRow,
    pub warnings: Vec<String>,
}

/// The per-strategy sufficiency bound from the analysis, used only to warn
/// when a run is deliberately under-provisioned.
fn sufficiency_bound(strategy: &str, n: usize, d: usize, k: usize) -> usize {
    match strategy {
        "uni" => n,
        "modified" => d + k.max(1),
        "infinite" => d + 2 * k,
        _ => 0,
    }
}

pub fn run_scenario(sc: &Scenario) -> Result<ScenarioRun, ScenarioError> {
    let fp = build_footprint(&sc.graph)?;
    let model = build_model(&sc.model)?;
    let n = fp.node_count();
    let d = fp.diameter();
    let k = fp.cyclomatic_number();

    let budget = resolve_budget(&sc.run.agents, n, d, k)
        .map_err(ScenarioError::Invalid)?;
    if budget < 1 {
        return Err(ScenarioError::Invalid(format!(
            "agent budget {budget} resolved from {:?} must be at least 1",
            sc.run.agents
        )));
    }
    let agents = budget as u32;

    let seed = sc.run.seed.unwrap_or(0);
    let mut adversary = build_adversary(&sc.adversary, &fp, model, seed)?;

    let t_factor = model.reappearance_bound().unwrap_or(1).max(1) as u64;
    let max_rounds = match sc.run.max_rounds {
        Some(r) if r > 0 => r,
        _ => 64 * (n as u64) * (n as u64) * t_factor,
    };
    let stall_window = match sc.run.stall_window {
        Some(w) if w > 0 => Some(w),
        _ => None,
    };
    let home = sc.run.home.unwrap_or(0);
    if home >= n {
        return Err(ScenarioError::Invalid(format!("home {home} out of range")));
    }

    let strategy_name = sc.strategy.name.clone();
    let mut cfg = RunConfig::new(home, agents, max_rounds);
    cfg.stall_window = stall_window;
    cfg.strict_visibility = sc.strategy.strict_visibility.unwrap_or(false);
    cfg.node_oracle = sc.strategy.node_oracle.unwrap_or(strategy_name != "uni");
    cfg.meta = RunMeta {
        scenario_hash: format!("{:016x}", fnv1a64(sc.to_toml().as_bytes())),
        seed,
    };

    let mut warnings = Vec::new();
    let bound = sufficiency_bound(&strategy_name, n, d, k);
    if (agents as usize) < bound {
        warnings.push(format!(
            "agents={agents} is below the {strategy_name} sufficiency bound {bound} (n={n}, d={d}, k={k}); the run proceeds and may stall"
        ));
    }

    let (trace, outcome) = match strategy_name.as_str() {
        "uni" => engine::run(&fp, model, adversary.as_mut(), &UniStrategy, &cfg)?,
        "modified" => engine::run(&fp, model, adversary.as_mut(), &ModifiedStrategy, &cfg)?,
        "infinite" => engine::run(&fp, model, adversary.as_mut(), &InfiniteStrategy, &cfg)?,
        other => {
            return Err(ScenarioError::Invalid(format!("unknown strategy {other:?}")))
        }
    };

    let metrics = MetricsRow::from_trace(
        sc.id.clone().unwrap_or_else(|| "scenario".into()),
        &fp,
        n,
        d,
        k,
        agents,
        seed,
        &trace,
        &outcome,
    );
    Ok(ScenarioRun {
        trace,
        outcome,
        metrics,
        warnings,
    })
}
