//! Batch experiments over corpora of footprints, reproducing the agent-count
//! thresholds cell by cell. Cells execute concurrently; aggregation is a
//! single merge at the end and per-run failures never abort the matrix.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metrics::MetricsRow;
use crate::scenario::{run_scenario, AdversarySection, GraphSection, ModelSection, RunSection, Scenario, StrategySection};
use crate::trace::OutcomeKind;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("experiment parse error: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusSection {
    /// Number of random footprints drawn per cell with `family = "random"`.
    pub count: usize,
    pub n_min: usize,
    pub n_max: usize,
    #[serde(default)]
    pub seed: u64,
}

impl Default for CorpusSection {
    fn default() -> Self {
        CorpusSection {
            count: 12,
            n_min: 5,
            n_max: 12,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellSection {
    pub name: String,
    /// random | wheel | complete_bipartite | figure4 | tree
    pub family: String,
    /// k_lt_n | k_ge_n | any (random family only)
    #[serde(default)]
    pub regime: Option<String>,
    pub model: String,
    #[serde(default)]
    pub t: Option<u32>,
    pub adversary: String,
    #[serde(default)]
    pub removal_probability: Option<f64>,
    pub strategy: String,
    pub agents: String,
    /// full | node: what counts as success for the cell tally.
    #[serde(default)]
    pub success: Option<String>,
    #[serde(default)]
    pub d: Option<usize>,
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default)]
    pub depth: Option<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub corpus: Option<CorpusSection>,
    #[serde(rename = "cell")]
    pub cells: Vec<CellSection>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, ExperimentError> {
        toml::from_str(text).map_err(|e| ExperimentError::Parse(e.to_string()))
    }
}

#[derive(Debug, Clone, Default)]
pub struct CellTally {
    pub runs: usize,
    pub full_success: usize,
    pub node_success: usize,
    pub stall: usize,
    pub monotonicity_violation: usize,
    pub model_violation: usize,
    pub round_limit: usize,
    pub errors: usize,
    pub successes: usize,
}

#[derive(Debug, Clone)]
pub struct CellResult {
    pub name: String,
    pub tally: CellTally,
    pub rows: Vec<MetricsRow>,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub cells: Vec<CellResult>,
}

impl ExperimentReport {
    /// Success/failure table per cell, one line each.
    pub fn table(&self) -> String {
        let mut out = String::new();
        out.push_str(
            "cell                                     runs  full  node  stall  mono  model  limit  err  success%\n",
        );
        for cell in &self.cells {
            let t = &cell.tally;
            let pct = if t.runs == 0 {
                0.0
            } else {
                100.0 * t.successes as f64 / t.runs as f64
            };
            out.push_str(&format!(
                "{:<40} {:>4} {:>5} {:>5} {:>6} {:>5} {:>6} {:>6} {:>4}  {:>7.1}\n",
                cell.name,
                t.runs,
                t.full_success,
                t.node_success,
                t.stall,
                t.monotonicity_violation,
                t.model_violation,
                t.round_limit,
                t.errors,
                pct
            ));
        }
        out
    }
}

/// Footprint parameter tuples for one cell.
fn cell_footprints(cell: &CellSection, corpus: &CorpusSection) -> Vec<GraphSection> {
    let mut graphs = Vec::new();
    match cell.family.as_str() {
        "random" => {
            let regime = cell.regime.as_deref().unwrap_or("any");
            for i in 0..corpus.count {
                let span = corpus.n_max.max(corpus.n_min) - corpus.n_min + 1;
                let n = corpus.n_min + (i % span);
                let max_extra = n * (n - 1) / 2 - (n - 1);
                let k = match regime {
                    "k_ge_n" => {
                        if max_extra < n {
                            continue; // too small to reach k >= n
                        }
                        n
                    }
                    "k_lt_n" => (i / span) % n.min(max_extra + 1),
                    _ => i % (max_extra + 1),
                };
                graphs.push(GraphSection {
                    family: Some("random_connected".into()),
                    n: Some(n),
                    k: Some(k),
                    seed: Some(corpus.seed + i as u64),
                    ..Default::default()
                });
            }
        }
        "wheel" => {
            for n in corpus.n_min.max(5)..=corpus.n_max {
                graphs.push(GraphSection {
                    family: Some("wheel".into()),
                    n: Some(n),
                    ..Default::default()
                });
            }
        }
        "complete_bipartite" => {
            for n in corpus.n_min.max(6)..=corpus.n_max {
                if n % 2 == 0 {
                    graphs.push(GraphSection {
                        family: Some("complete_bipartite".into()),
                        n: Some(n),
                        ..Default::default()
                    });
                }
            }
        }
        "figure4" => {
            graphs.push(GraphSection {
                family: Some("figure4".into()),
                d: Some(cell.d.unwrap_or(3)),
                k: Some(cell.k.unwrap_or(3)),
                ..Default::default()
            });
        }
        "tree" => {
            graphs.push(GraphSection {
                family: Some("tree".into()),
                depth: Some(cell.depth.unwrap_or(2)),
                ..Default::default()
            });
        }
        _ => {}
    }
    graphs
}

pub fn run_experiment(cfg: &ExperimentConfig) -> ExperimentReport {
    let corpus = cfg.corpus.clone().unwrap_or_default();
    let seeds = if cfg.seeds.is_empty() {
        vec![0]
    } else {
        cfg.seeds.clone()
    };

    let cells: Vec<CellResult> = cfg
        .cells
        .par_iter()
        .map(|cell| {
            let mut scenarios = Vec::new();
            for (gi, graph) in cell_footprints(cell, &corpus).into_iter().enumerate() {
                for &seed in &seeds {
                    scenarios.push(Scenario {
                        id: Some(format!("{}-g{gi}-s{seed}", cell.name)),
                        graph: graph.clone(),
                        model: ModelSection {
                            kind: cell.model.clone(),
                            t: cell.t,
                        },
                        adversary: AdversarySection {
                            name: Some(cell.adversary.clone()),
                            seed: Some(seed),
                            removal_probability: cell.removal_probability,
                            ..Default::default()
                        },
                        strategy: StrategySection {
                            name: cell.strategy.clone(),
                            strict_visibility: None,
                            node_oracle: None,
                        },
                        run: RunSection {
                            agents: cell.agents.clone(),
                            home: Some(0),
                            max_rounds: None,
                            stall_window: None,
                            seed: Some(seed),
                        },
                    });
                }
            }

            let results: Vec<Result<MetricsRow, String>> = scenarios
                .par_iter()
                .map(|sc| run_scenario(sc).map(|r| r.metrics).map_err(|e| format!("{}: {e}", sc.id.clone().unwrap_or_default())))
                .collect();

            let node_ok = cell.success.as_deref() == Some("node");
            let mut tally = CellTally::default();
            let mut rows = Vec::new();
            let mut failures = Vec::new();
            for result in results {
                tally.runs += 1;
                match result {
                    Ok(row) => {
                        match row.outcome {
                            OutcomeKind::FullSuccess => tally.full_success += 1,
                            OutcomeKind::NodeSuccess => tally.node_success += 1,
                            OutcomeKind::Stall => tally.stall += 1,
                            OutcomeKind::MonotonicityViolation => tally.monotonicity_violation += 1,
                            OutcomeKind::ModelViolation => tally.model_violation += 1,
                            OutcomeKind::RoundLimit => tally.round_limit += 1,
                        }
                        let succeeded = match row.outcome {
                            OutcomeKind::FullSuccess => true,
                            _ if node_ok => row.all_nodes_clean_round.is_some(),
                            _ => false,
                        };
                        if succeeded {
                            tally.successes += 1;
                        }
                        rows.push(row);
                    }
                    Err(e) => {
                        tally.errors += 1;
                        failures.push(e);
                    }
                }
            }
            CellResult {
                name: cell.name.clone(),
                tally,
                rows,
                failures,
            }
        })
        .collect();

    ExperimentReport { cells }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_matrix_runs_all_cells() {
        let cfg = ExperimentConfig::from_toml(
            r#"
            seeds = [1, 2]
            [corpus]
            count = 4
            n_min = 5
            n_max = 7
            [[cell]]
            name = "ftea-uni-n"
            family = "random"
            regime = "any"
            model = "ftea"
            t = 1
            adversary = "static"
            strategy = "uni"
            agents = "n"
            [[cell]]
            name = "wheel-ided-infinite"
            family = "wheel"
            model = "ided"
            adversary = "wheel_rim"
            strategy = "infinite"
            agents = "d+2k"
            success = "node"
            "#,
        )
        .unwrap();
        let report = run_experiment(&cfg);
        assert_eq!(report.cells.len(), 2);
        for cell in &report.cells {
            assert!(cell.tally.runs > 0);
            assert!(cell.failures.is_empty(), "{:?}", cell.failures);
        }
        let table = report.table();
        assert!(table.contains("ftea-uni-n"));
    }
}
