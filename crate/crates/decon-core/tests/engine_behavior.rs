//! Engine-level behavior: round ordering effects observable from traces,
//! exchange order-independence, termination detection, and the local view
//! contract.

use decon_core::contamination::ContaminationState;
use decon_core::dynamics::{DynamicityModel, RandomFteaAdversary, StaticAdversary};
use decon_core::engine::{self, RunConfig};
use decon_core::generate;
use decon_core::scenario::{run_scenario, Scenario};
use decon_core::strategies::{ModifiedStrategy, UniStrategy};
use decon_core::trace::OutcomeKind;

#[test]
fn single_node_graph_succeeds_at_round_zero() {
    let fp = generate::path(1).unwrap();
    let mut adv = StaticAdversary;
    let cfg = RunConfig::new(0, 1, 10);
    let (trace, outcome) =
        engine::run(&fp, DynamicityModel::ftea(1), &mut adv, &UniStrategy, &cfg).unwrap();
    assert_eq!(outcome.kind, OutcomeKind::FullSuccess);
    assert_eq!(outcome.round, 0);
    assert_eq!(trace.rounds.len(), 1);
}

#[test]
fn home_is_clean_from_round_zero_onward() {
    let sc = Scenario::from_toml(
        r#"
        [graph]
        family = "random_connected"
        n = 8
        k = 3
        seed = 2
        [model]
        kind = "ftea"
        t = 2
        [adversary]
        name = "random_ftea"
        [strategy]
        name = "uni"
        [run]
        agents = "n"
        seed = 2
        "#,
    )
    .unwrap();
    let run = run_scenario(&sc).unwrap();
    assert_eq!(run.outcome.kind, OutcomeKind::FullSuccess);
    let fp = run.trace.header.footprint().unwrap();
    for record in &run.trace.rounds {
        let state = ContaminationState::from_hex(&fp, &record.node_clean, &record.edge_clean)
            .unwrap();
        assert!(state.node_clean(run.trace.header.home), "round {}", record.round);
    }
}

#[test]
fn every_node_is_visited_in_passing_runs() {
    for (strategy, agents) in [("uni", "n"), ("modified", "d+k"), ("infinite", "d+2k")] {
        let sc = Scenario::from_toml(&format!(
            r#"
            [graph]
            family = "random_connected"
            n = 9
            k = 4
            seed = 6
            [model]
            kind = "ftea"
            t = 2
            [adversary]
            name = "random_ftea"
            [strategy]
            name = "{strategy}"
            [run]
            agents = "{agents}"
            seed = 6
            "#
        ))
        .unwrap();
        let run = run_scenario(&sc).unwrap();
        assert_eq!(run.outcome.kind, OutcomeKind::FullSuccess, "{strategy}");
        let n = run.trace.header.n;
        let mut visited = vec![false; n];
        visited[run.trace.header.home] = true;
        for record in &run.trace.rounds {
            for agent in &record.agents {
                visited[agent.node] = true;
            }
        }
        assert!(visited.iter().all(|&v| v), "{strategy}: unvisited node");
    }
}

#[test]
fn exchange_order_shuffle_does_not_change_traces() {
    let fp = generate::random_connected(9, 3, 5).unwrap();
    let model = DynamicityModel::ftea(2);
    let run_with = |shuffle: Option<u64>| {
        let mut adv = RandomFteaAdversary::new(11, 2, 0.5);
        let mut cfg = RunConfig::new(0, 12, 20_000);
        cfg.shuffle_exchange = shuffle;
        let (trace, _) = engine::run(&fp, model, &mut adv, &ModifiedStrategy, &cfg).unwrap();
        trace.to_jsonl()
    };
    let plain = run_with(None);
    assert_eq!(plain, run_with(Some(7)));
    assert_eq!(plain, run_with(Some(99)));
}

#[test]
fn hidden_contaminated_edge_ends_in_node_success() {
    // One rim edge held out forever: every node gets cleaned, exactly that
    // edge stays contaminated, and the engine reports node success.
    let fp = generate::wheel(5).unwrap();
    let rim0 = (0..fp.edge_count()).find(|&e| fp.edge(e).u != 0).unwrap();
    let sc = Scenario::from_toml(&format!(
        r#"
        [graph]
        family = "wheel"
        n = 5
        [model]
        kind = "ided"
        [adversary]
        name = "hide"
        edges = [{rim0}]
        [strategy]
        name = "infinite"
        [run]
        agents = "d+2k"
        "#
    ))
    .unwrap();
    let run = run_scenario(&sc).unwrap();
    assert_eq!(run.outcome.kind, OutcomeKind::NodeSuccess);
    assert_eq!(run.metrics.violations, 0);
    assert_eq!(run.metrics.nodes_clean, 5);
    assert_eq!(run.metrics.edges_clean, fp.edge_count() - 1);
    let last = run.trace.rounds.last().unwrap();
    let state = ContaminationState::from_hex(&fp, &last.node_clean, &last.edge_clean).unwrap();
    assert!(!state.edge_clean(rim0), "the hidden edge stays contaminated");
}

#[test]
fn static_graph_reduces_infinite_to_plain_sweep_success() {
    let sc = Scenario::from_toml(
        r#"
        [graph]
        family = "random_connected"
        n = 10
        k = 5
        seed = 8
        [model]
        kind = "ided"
        [adversary]
        name = "static"
        [strategy]
        name = "infinite"
        [run]
        agents = "d+2k"
        "#,
    )
    .unwrap();
    let run = run_scenario(&sc).unwrap();
    assert_eq!(run.outcome.kind, OutcomeKind::FullSuccess);
    assert_eq!(run.metrics.violations, 0);
}

#[test]
fn wheel_hub_view_shows_all_spokes_present_and_contaminated() {
    // Drive one round on the W9 rim-absent scenario and inspect the first
    // round record: the hub never moves at round 0 under modified (degree 8
    // separator), every rim edge is absent, and all spokes stay present.
    let sc = Scenario::from_toml(
        r#"
        [graph]
        family = "wheel"
        n = 9
        [model]
        kind = "ided"
        [adversary]
        name = "wheel_rim"
        [strategy]
        name = "modified"
        [run]
        agents = "n-1"
        max_rounds = 5
        "#,
    )
    .unwrap();
    let run = run_scenario(&sc).unwrap();
    let fp = run.trace.header.footprint().unwrap();
    let first = &run.trace.rounds[0];
    let rim: Vec<usize> = (0..fp.edge_count()).filter(|&e| fp.edge(e).u != 0).collect();
    assert_eq!(first.absent, rim, "rim absent from round 0");
    assert_eq!(fp.degree(0), 8);
}

#[test]
fn strict_visibility_uni_still_succeeds() {
    // Under strict visibility the home guard must wait until absent edges
    // have each been seen clean at least once before turning cleaner.
    for (adv, t, seed) in [("static", 1, 0u64), ("random_ftea", 2, 3), ("random_ftea", 3, 4)] {
        let sc = Scenario::from_toml(&format!(
            r#"
            [graph]
            family = "random_connected"
            n = 8
            k = 3
            seed = {seed}
            [model]
            kind = "ftea"
            t = {t}
            [adversary]
            name = "{adv}"
            [strategy]
            name = "uni"
            strict_visibility = true
            [run]
            agents = "n"
            seed = {seed}
            "#
        ))
        .unwrap();
        let run = run_scenario(&sc).unwrap();
        assert_eq!(
            run.outcome.kind,
            OutcomeKind::FullSuccess,
            "{adv} t={t}: {}",
            run.outcome.detail
        );
        assert_eq!(run.metrics.violations, 0);
    }
}

#[test]
fn packaged_lower_bound_scenarios_drive_the_engine() {
    use decon_core::dynamics::{
        bipartite_scenario, diameter_tree_scenario, wheel_scenario,
    };
    use decon_core::strategies::InfiniteStrategy;

    // Wheel construction: d+2k agents sweep it clean.
    let mut s = wheel_scenario(6).unwrap();
    let fp = s.footprint;
    let d = fp.diameter();
    let k = fp.cyclomatic_number();
    let cfg = RunConfig::new(s.home, (d + 2 * k) as u32, 64 * 36);
    let (_, outcome) =
        engine::run(&fp, s.model, s.adversary.as_mut(), &InfiniteStrategy, &cfg).unwrap();
    assert_eq!(outcome.kind, OutcomeKind::FullSuccess);

    // Bipartite construction at n agents with uni: succeeds.
    let mut s = bipartite_scenario(6).unwrap();
    let fp = s.footprint;
    let mut cfg = RunConfig::new(s.home, 6, 64 * 36);
    cfg.node_oracle = false;
    let (_, outcome) =
        engine::run(&fp, s.model, s.adversary.as_mut(), &UniStrategy, &cfg).unwrap();
    assert_eq!(outcome.kind, OutcomeKind::FullSuccess);

    // Tree construction at depth 1 (the three-node path).
    let mut s = diameter_tree_scenario(1).unwrap();
    let fp = s.footprint;
    let mut cfg = RunConfig::new(s.home, 3, 64 * 9);
    cfg.node_oracle = false;
    let (_, outcome) =
        engine::run(&fp, s.model, s.adversary.as_mut(), &UniStrategy, &cfg).unwrap();
    assert_eq!(outcome.kind, OutcomeKind::FullSuccess);
}

#[test]
fn stall_window_detection_on_traces() {
    // The stalled wheel run shows a stable tail window; a progressing run
    // never does.
    let stall = Scenario::from_toml(
        r#"
        [graph]
        family = "wheel"
        n = 6
        [model]
        kind = "ided"
        [adversary]
        name = "wheel_rim"
        [strategy]
        name = "modified"
        [run]
        agents = "n-1"
        "#,
    )
    .unwrap();
    let run = run_scenario(&stall).unwrap();
    assert_eq!(run.outcome.kind, OutcomeKind::Stall);
    let window = 4 * 6 * 6; // IDED default for n = 6
    assert!(engine::detect_stall(&run.trace.rounds, window as u64));

    let progressing = Scenario::from_toml(
        r#"
        [graph]
        family = "random_connected"
        n = 10
        k = 2
        seed = 3
        [model]
        kind = "ftea"
        t = 1
        [adversary]
        name = "static"
        [strategy]
        name = "modified"
        [run]
        agents = "d+k"
        "#,
    )
    .unwrap();
    let run = run_scenario(&progressing).unwrap();
    assert_eq!(run.outcome.kind, OutcomeKind::FullSuccess);
    for w in 2..=4u64 {
        assert!(
            !engine::detect_stall(&run.trace.rounds, w),
            "successful sweep flagged as stalled at window {w}"
        );
    }
}

#[test]
fn inline_schedule_adversary_in_scenarios() {
    let sc = Scenario::from_toml(
        r#"
        [graph]
        family = "cycle"
        n = 4
        [model]
        kind = "ftea"
        t = 2
        [adversary]
        name = "schedule"
        schedule = "0\n1\n-\n2\n"
        [strategy]
        name = "uni"
        [run]
        agents = "n"
        "#,
    )
    .unwrap();
    let run = run_scenario(&sc).unwrap();
    assert_eq!(run.outcome.kind, OutcomeKind::FullSuccess);
    assert_eq!(run.trace.rounds[0].absent, vec![0]);
    assert_eq!(run.trace.rounds[1].absent, vec![1]);
    assert!(run.trace.rounds[2].absent.is_empty());
}

#[test]
fn guard_persistence_on_wheel_upper_bound_runs() {
    // Once visited, a node with a contaminated incident edge keeps an agent
    // until it is fully decontaminated.
    for n in [5usize, 7, 9] {
        let sc = Scenario::from_toml(&format!(
            r#"
            [graph]
            family = "wheel"
            n = {n}
            [model]
            kind = "ided"
            [adversary]
            name = "wheel_rim"
            [strategy]
            name = "infinite"
            [run]
            agents = "d+2k"
            "#
        ))
        .unwrap();
        let run = run_scenario(&sc).unwrap();
        assert_eq!(run.outcome.kind, OutcomeKind::FullSuccess);
        let fp = run.trace.header.footprint().unwrap();
        let mut visited = vec![false; fp.node_count()];
        visited[run.trace.header.home] = true;
        for record in &run.trace.rounds {
            let mut occupied = vec![false; fp.node_count()];
            for agent in &record.agents {
                occupied[agent.node] = true;
                visited[agent.node] = true;
            }
            let state =
                ContaminationState::from_hex(&fp, &record.node_clean, &record.edge_clean).unwrap();
            for v in 0..fp.node_count() {
                if visited[v] && !occupied[v] {
                    let dirty_incident = fp.incident(v).any(|(_, e, _)| !state.edge_clean(e));
                    assert!(
                        !dirty_incident,
                        "wheel n={n} round {}: visited node {v} left unguarded with a contaminated incident edge",
                        record.round
                    );
                }
            }
        }
    }
}
