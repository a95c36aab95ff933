//! Built-in adversaries realizing the presence function.
//!
//! An adversary decides the round-t edge set before agents observe and move
//! in round t, reacting to the full configuration at the end of round t-1.
//! Built-in adversaries construct legal decisions by themselves; the engine
//! still validates every decision against the model.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::contamination::ContaminationState;
use crate::dynamics::model::AbsenceLedger;
use crate::graph::{EdgeIdx, EdgeSet, Footprint, NodeId};

/// Everything the adversary may react to: the configuration at the end of the
/// previous round. Strategy memories are strategy-internal state and are not
/// inspected by any built-in adversary.
pub struct Observation<'a> {
    pub round: u64,
    pub footprint: &'a Footprint,
    pub agent_positions: &'a [NodeId],
    pub contamination: &'a ContaminationState,
    pub ledger: &'a AbsenceLedger,
}

pub trait Adversary: Send {
    fn name(&self) -> &'static str;

    /// Present edge set for the observed round.
    fn decide(&mut self, obs: &Observation<'_>) -> EdgeSet;

    /// True while the adversary's future decisions are a fixed repetition of
    /// the current one (given unchanged agent positions). The stall detector
    /// only fires in such phases.
    fn quiescent(&self) -> bool {
        false
    }
}

/// Keeps every edge present every round. Legal under both models.
pub struct StaticAdversary;

impl Adversary for StaticAdversary {
    fn name(&self) -> &'static str {
        "static"
    }

    fn decide(&mut self, obs: &Observation<'_>) -> EdgeSet {
        EdgeSet::full(obs.footprint.edge_count())
    }

    fn quiescent(&self) -> bool {
        true
    }
}

/// The wheel lower-bound adversary: rim edges absent from round 0, restored
/// permanently on the first round after every outer vertex is occupied.
/// Spokes stay present throughout, so every decision is connected.
pub struct WheelRimAdversary {
    triggered: bool,
}

impl WheelRimAdversary {
    pub fn new() -> Self {
        WheelRimAdversary { triggered: false }
    }
}

impl Default for WheelRimAdversary {
    fn default() -> Self {
        Self::new()
    }
}

impl Adversary for WheelRimAdversary {
    fn name(&self) -> &'static str {
        "wheel_rim"
    }

    fn decide(&mut self, obs: &Observation<'_>) -> EdgeSet {
        let fp = obs.footprint;
        if !self.triggered {
            let all_outer_occupied =
                (1..fp.node_count()).all(|v| obs.agent_positions.contains(&v));
            if all_outer_occupied {
                self.triggered = true;
            }
        }
        if self.triggered {
            EdgeSet::full(fp.edge_count())
        } else {
            let mut present = EdgeSet::empty(fp.edge_count());
            for (i, e) in fp.edges().iter().enumerate() {
                if e.u == 0 {
                    present.insert(i);
                }
            }
            present
        }
    }

    fn quiescent(&self) -> bool {
        // In either phase the decision repeats until agent positions change,
        // and a position change breaks any stall window on its own.
        true
    }
}

/// Seeded FTEA stress adversary: each round it proposes removing every
/// currently present, not-expired edge with the configured probability, then
/// greedily restores absent edges in ascending canonical order (lowest index
/// joining two components first) until the round is connected. Edges whose
/// absence run has reached T are forced back. Deterministic per seed.
pub struct RandomFteaAdversary {
    rng: ChaCha8Rng,
    t: u32,
    removal_probability: f64,
    prev: Option<EdgeSet>,
}

impl RandomFteaAdversary {
    pub fn new(seed: u64, t: u32, removal_probability: f64) -> Self {
        assert!(t >= 1, "FTEA requires T >= 1");
        assert!(
            (0.0..=1.0).contains(&removal_probability),
            "probability out of range"
        );
        RandomFteaAdversary {
            rng: ChaCha8Rng::seed_from_u64(seed),
            t,
            removal_probability,
            prev: None,
        }
    }
}

impl Adversary for RandomFteaAdversary {
    fn name(&self) -> &'static str {
        "random_ftea"
    }

    fn decide(&mut self, obs: &Observation<'_>) -> EdgeSet {
        let fp = obs.footprint;
        let m = fp.edge_count();
        let prev = self.prev.clone().unwrap_or_else(|| EdgeSet::full(m));
        let mut present = EdgeSet::empty(m);
        for e in 0..m {
            // Expired edges skip the removal draw entirely, keeping the draw
            // sequence a function of the present set alone.
            let expired = obs.ledger.run_length(e) >= self.t;
            if expired || (prev.contains(e) && !self.rng.random_bool(self.removal_probability)) {
                present.insert(e);
            }
        }
        restore_until_connected(fp, &mut present);
        self.prev = Some(present.clone());
        present
    }
}

/// Restores absent edges in ascending index order, taking each edge only when
/// it joins two components of the current present subgraph.
fn restore_until_connected(fp: &Footprint, present: &mut EdgeSet) {
    let n = fp.node_count();
    let mut dsu: Vec<usize> = (0..n).collect();
    fn find(dsu: &mut [usize], x: usize) -> usize {
        let mut root = x;
        while dsu[root] != root {
            root = dsu[root];
        }
        let mut cur = x;
        while dsu[cur] != root {
            let next = dsu[cur];
            dsu[cur] = root;
            cur = next;
        }
        root
    }
    let mut components = n;
    for e in present.iter() {
        let (a, b) = (fp.edge(e).u, fp.edge(e).v);
        let (ra, rb) = (find(&mut dsu, a), find(&mut dsu, b));
        if ra != rb {
            dsu[ra] = rb;
            components -= 1;
        }
    }
    if components == 1 {
        return;
    }
    for e in 0..fp.edge_count() {
        if present.contains(e) {
            continue;
        }
        let (a, b) = (fp.edge(e).u, fp.edge(e).v);
        let (ra, rb) = (find(&mut dsu, a), find(&mut dsu, b));
        if ra != rb {
            dsu[ra] = rb;
            present.insert(e);
            components -= 1;
            if components == 1 {
                return;
            }
        }
    }
}

/// Holds a fixed edge set out of the graph forever. Only legal under IDED,
/// and only for sets whose removal keeps the footprint connected; that is
/// checked at construction.
pub struct FixedAbsenceAdversary {
    absent: Vec<EdgeIdx>,
}

impl FixedAbsenceAdversary {
    pub fn new(fp: &Footprint, absent: Vec<EdgeIdx>) -> Result<Self, String> {
        let mut present = EdgeSet::full(fp.edge_count());
        for &e in &absent {
            if e >= fp.edge_count() {
                return Err(format!("edge index {e} out of range"));
            }
            present.remove(e);
        }
        if !fp.is_connected(&present) {
            return Err("hiding these edges disconnects the graph".into());
        }
        Ok(FixedAbsenceAdversary { absent })
    }
}

impl Adversary for FixedAbsenceAdversary {
    fn name(&self) -> &'static str {
        "hide"
    }

    fn decide(&mut self, obs: &Observation<'_>) -> EdgeSet {
        let mut present = EdgeSet::full(obs.footprint.edge_count());
        for &e in &self.absent {
            present.remove(e);
        }
        present
    }

    fn quiescent(&self) -> bool {
        true
    }
}

/// Oblivious adversary replaying a fixed schedule of absent-edge lists, one
/// line per round. Rounds beyond the schedule keep every edge present.
pub struct ScheduleAdversary {
    rounds: Vec<EdgeSet>,
    served: u64,
}

impl ScheduleAdversary {
    /// Parses and validates a schedule against the footprint: each line lists
    /// the absent edge indices for one round, whitespace separated; blank
    /// lines and `#` comments are skipped. Every scheduled round must leave
    /// the graph connected.
    pub fn from_text(fp: &Footprint, text: &str) -> Result<Self, String> {
        let mut rounds = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut present = EdgeSet::full(fp.edge_count());
            if line != "-" {
                for tok in line.split_whitespace() {
                    let idx: EdgeIdx = tok
                        .parse()
                        .map_err(|_| format!("line {}: bad edge index {tok:?}", lineno + 1))?;
                    if idx >= fp.edge_count() {
                        return Err(format!("line {}: edge index {idx} out of range", lineno + 1));
                    }
                    present.remove(idx);
                }
            }
            if !fp.is_connected(&present) {
                return Err(format!("line {}: schedule round disconnects the graph", lineno + 1));
            }
            rounds.push(present);
        }
        Ok(ScheduleAdversary { rounds, served: 0 })
    }
}

impl Adversary for ScheduleAdversary {
    fn name(&self) -> &'static str {
        "schedule"
    }

    fn decide(&mut self, obs: &Observation<'_>) -> EdgeSet {
        let decision = self
            .rounds
            .get(obs.round as usize)
            .cloned()
            .unwrap_or_else(|| EdgeSet::full(obs.footprint.edge_count()));
        self.served = self.served.max(obs.round + 1);
        decision
    }

    fn quiescent(&self) -> bool {
        self.served as usize >= self.rounds.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::model::{validate_decision, DynamicityModel};
    use crate::generate;

    fn observe<'a>(
        fp: &'a Footprint,
        round: u64,
        positions: &'a [NodeId],
        contamination: &'a ContaminationState,
        ledger: &'a AbsenceLedger,
    ) -> Observation<'a> {
        Observation {
            round,
            footprint: fp,
            agent_positions: positions,
            contamination,
            ledger,
        }
    }

    #[test]
    fn static_adversary_keeps_everything_present() {
        let fp = generate::cycle(5).unwrap();
        let contamination = ContaminationState::all_contaminated(&fp);
        let ledger = AbsenceLedger::new(fp.edge_count());
        let mut adv = StaticAdversary;
        let d = adv.decide(&observe(&fp, 0, &[0], &contamination, &ledger));
        assert_eq!(d.count(), fp.edge_count());
    }

    #[test]
    fn wheel_rim_hides_rim_until_all_outer_occupied() {
        let fp = generate::wheel(5).unwrap();
        let contamination = ContaminationState::all_contaminated(&fp);
        let ledger = AbsenceLedger::new(fp.edge_count());
        let mut adv = WheelRimAdversary::new();

        let d0 = adv.decide(&observe(&fp, 0, &[0, 0, 0, 0], &contamination, &ledger));
        assert_eq!(d0.count(), 4, "spokes only while rim is held out");
        assert!(fp.is_connected(&d0));

        // Four agents, one per outer node: next decision restores everything.
        let d1 = adv.decide(&observe(&fp, 1, &[1, 2, 3, 4], &contamination, &ledger));
        assert_eq!(d1.count(), fp.edge_count());
        // And permanently, even if agents later move away.
        let d2 = adv.decide(&observe(&fp, 2, &[0, 0, 0, 0], &contamination, &ledger));
        assert_eq!(d2.count(), fp.edge_count());
    }

    #[test]
    fn random_ftea_with_zero_probability_is_static() {
        let fp = generate::wheel(6).unwrap();
        let contamination = ContaminationState::all_contaminated(&fp);
        let mut ledger = AbsenceLedger::new(fp.edge_count());
        let mut adv = RandomFteaAdversary::new(9, 3, 0.0);
        for round in 0..50 {
            let d = adv.decide(&observe(&fp, round, &[0], &contamination, &ledger));
            assert_eq!(d.count(), fp.edge_count());
            ledger.record(&d);
        }
    }

    #[test]
    fn random_ftea_on_a_tree_restores_every_edge() {
        let fp = generate::path(6).unwrap();
        let contamination = ContaminationState::all_contaminated(&fp);
        let mut ledger = AbsenceLedger::new(fp.edge_count());
        let mut adv = RandomFteaAdversary::new(5, 1, 1.0);
        for round in 0..20 {
            let d = adv.decide(&observe(&fp, round, &[0], &contamination, &ledger));
            assert_eq!(d.count(), fp.edge_count(), "tree edges are all bridges");
            ledger.record(&d);
        }
    }

    #[test]
    fn random_ftea_decisions_stay_legal() {
        let model = DynamicityModel::ftea(2);
        for seed in 0..30u64 {
            let fp = generate::wheel(7).unwrap();
            let contamination = ContaminationState::all_contaminated(&fp);
            let mut ledger = AbsenceLedger::new(fp.edge_count());
            let mut adv = RandomFteaAdversary::new(seed, 2, 0.6);
            for round in 0..500 {
                let d = adv.decide(&observe(&fp, round, &[0], &contamination, &ledger));
                validate_decision(&fp, model, &ledger, &d, round).unwrap();
                ledger.record(&d);
            }
        }
    }

    #[test]
    fn random_ftea_golden_sequence_seed_42() {
        // C4, T=1, p=0.5, seed 42: decision sequence audited against the
        // model validator once, then frozen. Entries list absent edge
        // indices per round.
        let fp = generate::cycle(4).unwrap();
        let contamination = ContaminationState::all_contaminated(&fp);
        let mut ledger = AbsenceLedger::new(fp.edge_count());
        let mut adv = RandomFteaAdversary::new(42, 1, 0.5);
        let mut got: Vec<Vec<EdgeIdx>> = Vec::new();
        for round in 0..8 {
            let d = adv.decide(&observe(&fp, round, &[0], &contamination, &ledger));
            validate_decision(&fp, DynamicityModel::ftea(1), &ledger, &d, round).unwrap();
            got.push(d.iter_absent().collect());
            ledger.record(&d);
        }
        let expected: Vec<Vec<EdgeIdx>> = vec![
            vec![2],
            vec![3],
            vec![2],
            vec![],
            vec![2],
            vec![3],
            vec![1],
            vec![3],
        ];
        assert_eq!(got, expected);
    }

    #[test]
    fn schedule_round_trip_and_validation() {
        let fp = generate::cycle(4).unwrap();
        let adv = ScheduleAdversary::from_text(&fp, "0\n-\n2\n").unwrap();
        assert_eq!(adv.rounds.len(), 3);
        assert!(!adv.rounds[0].contains(0));
        assert_eq!(adv.rounds[1].count(), 4);

        // P3: hiding any edge disconnects.
        let p3 = generate::path(3).unwrap();
        assert!(ScheduleAdversary::from_text(&p3, "1\n").is_err());
        assert!(ScheduleAdversary::from_text(&fp, "9\n").is_err());
    }
}
