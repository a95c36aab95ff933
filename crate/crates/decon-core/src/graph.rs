//! Static footprint graph: port-labeled, undirected, simple and connected.
//!
//! The footprint holds every edge that can ever appear during a run. Structural
//! quantities (diameter, cyclomatic number, spanning decomposition) are computed
//! here; edge presence over time lives in [`crate::dynamics`].

use std::collections::VecDeque;
use std::fmt::Write as _;

use thiserror::Error;

/// Internal node identifier. Used for engine bookkeeping only; strategies see
/// node identity solely through the opaque handle in their local view.
pub type NodeId = usize;
/// Port label at a node, in `0..degree`.
pub type Port = usize;
/// Index of an edge in the footprint's canonical edge order.
pub type EdgeIdx = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("self loop at node {0}")]
    SelfLoop(NodeId),
    #[error("duplicate edge between {0} and {1}")]
    DuplicateEdge(NodeId, NodeId),
    #[error("port {port} reused at node {node}")]
    PortClash { node: NodeId, port: Port },
    #[error("port {port} at node {node} out of range for degree {degree}")]
    PortOutOfRange { node: NodeId, port: Port, degree: usize },
    #[error("endpoint {0} outside node range 0..{1}")]
    BadEndpoint(NodeId, usize),
    #[error("footprint is not connected")]
    Disconnected,
    #[error("malformed footprint text: {0}")]
    Parse(String),
}

/// One undirected footprint edge with its port label at each endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub port_u: Port,
    pub port_v: Port,
}

impl Edge {
    pub fn other(&self, from: NodeId) -> NodeId {
        if from == self.u {
            self.v
        } else {
            self.u
        }
    }

    pub fn port_at(&self, node: NodeId) -> Port {
        if node == self.u {
            self.port_u
        } else {
            self.port_v
        }
    }

    pub fn touches(&self, node: NodeId) -> bool {
        self.u == node || self.v == node
    }
}

/// Subset of footprint edges, used for per-round presence and tree/feedback
/// partitions. Indexed by canonical edge index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeSet {
    bits: Vec<u64>,
    len: usize,
}

impl EdgeSet {
    pub fn empty(len: usize) -> Self {
        EdgeSet {
            bits: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn full(len: usize) -> Self {
        let mut s = Self::empty(len);
        for i in 0..len {
            s.insert(i);
        }
        s
    }

    pub fn universe_len(&self) -> usize {
        self.len
    }

    pub fn contains(&self, idx: EdgeIdx) -> bool {
        debug_assert!(idx < self.len);
        self.bits[idx / 64] & (1 << (idx % 64)) != 0
    }

    pub fn insert(&mut self, idx: EdgeIdx) {
        debug_assert!(idx < self.len);
        self.bits[idx / 64] |= 1 << (idx % 64);
    }

    pub fn remove(&mut self, idx: EdgeIdx) {
        debug_assert!(idx < self.len);
        self.bits[idx / 64] &= !(1 << (idx % 64));
    }

    pub fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = EdgeIdx> + '_ {
        (0..self.len).filter(|&i| self.contains(i))
    }

    pub fn iter_absent(&self) -> impl Iterator<Item = EdgeIdx> + '_ {
        (0..self.len).filter(|&i| !self.contains(i))
    }
}

/// The static underlying graph of a time-varying graph: node count, canonical
/// edge list and a per-node port table.
///
/// Invariants enforced at construction: simple (no self loops or parallel
/// edges), connected, and port labels at each node a bijection onto
/// `0..degree`.
#[derive(Debug, Clone)]
pub struct Footprint {
    node_count: usize,
    edges: Vec<Edge>,
    /// adjacency[v][p] = (edge index, neighbor) reached from v through port p.
    adjacency: Vec<Vec<(EdgeIdx, NodeId)>>,
}

impl Footprint {
    /// Builds and validates a footprint from `(u, v, port_at_u, port_at_v)`
    /// tuples. Edges are stored in canonical order: endpoints normalized to
    /// `u < v`, list sorted lexicographically by `(u, v)`.
    pub fn from_edges(
        node_count: usize,
        edge_list: &[(NodeId, NodeId, Port, Port)],
    ) -> Result<Self, GraphError> {
        let mut edges = Vec::with_capacity(edge_list.len());
        for &(a, b, pa, pb) in edge_list {
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            if a >= node_count {
                return Err(GraphError::BadEndpoint(a, node_count));
            }
            if b >= node_count {
                return Err(GraphError::BadEndpoint(b, node_count));
            }
            let (u, v, port_u, port_v) = if a < b { (a, b, pa, pb) } else { (b, a, pb, pa) };
            edges.push(Edge {
                u,
                v,
                port_u,
                port_v,
            });
        }
        edges.sort_by_key(|e| (e.u, e.v));
        for w in edges.windows(2) {
            if w[0].u == w[1].u && w[0].v == w[1].v {
                return Err(GraphError::DuplicateEdge(w[0].u, w[0].v));
            }
        }

        // Degree table, then check each node's ports form a bijection onto 0..degree.
        let mut degree = vec![0usize; node_count];
        for e in &edges {
            degree[e.u] += 1;
            degree[e.v] += 1;
        }
        let mut adjacency: Vec<Vec<Option<(EdgeIdx, NodeId)>>> =
            degree.iter().map(|&d| vec![None; d]).collect();
        for (idx, e) in edges.iter().enumerate() {
            for (node, port) in [(e.u, e.port_u), (e.v, e.port_v)] {
                if port >= degree[node] {
                    return Err(GraphError::PortOutOfRange {
                        node,
                        port,
                        degree: degree[node],
                    });
                }
                let slot = &mut adjacency[node][port];
                if slot.is_some() {
                    return Err(GraphError::PortClash { node, port });
                }
                *slot = Some((idx, e.other(node)));
            }
        }
        let adjacency: Vec<Vec<(EdgeIdx, NodeId)>> = adjacency
            .into_iter()
            .map(|row| row.into_iter().map(|s| s.expect("bijection checked")).collect())
            .collect();

        let fp = Footprint {
            node_count,
            edges,
            adjacency,
        };
        if !fp.is_connected(&EdgeSet::full(fp.edges.len())) {
            return Err(GraphError::Disconnected);
        }
        Ok(fp)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, idx: EdgeIdx) -> &Edge {
        &self.edges[idx]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adjacency[v].len()
    }

    /// Edge index and neighbor reached from `v` through port `p`.
    pub fn through_port(&self, v: NodeId, p: Port) -> (EdgeIdx, NodeId) {
        self.adjacency[v][p]
    }

    /// Incident `(port, edge index, neighbor)` triples at `v`, in port order.
    pub fn incident(&self, v: NodeId) -> impl Iterator<Item = (Port, EdgeIdx, NodeId)> + '_ {
        self.adjacency[v]
            .iter()
            .enumerate()
            .map(|(p, &(e, w))| (p, e, w))
    }

    /// Cyclomatic number `|E| - |V| + 1` of the (connected) footprint.
    pub fn cyclomatic_number(&self) -> usize {
        self.edges.len() + 1 - self.node_count
    }

    /// True iff `(V, active)` is connected on all `node_count` nodes.
    pub fn is_connected(&self, active: &EdgeSet) -> bool {
        if self.node_count == 0 {
            return true;
        }
        let mut seen = vec![false; self.node_count];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = queue.pop_front() {
            for &(e, w) in &self.adjacency[v] {
                if active.contains(e) && !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    queue.push_back(w);
                }
            }
        }
        reached == self.node_count
    }

    /// Hop distances from `root` over the full footprint.
    pub fn bfs_distances(&self, root: NodeId) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.node_count];
        dist[root] = Some(0);
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap();
            for &(_, w) in &self.adjacency[v] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Maximum over node pairs of shortest-path hop distance.
    pub fn diameter(&self) -> usize {
        (0..self.node_count)
            .flat_map(|v| self.bfs_distances(v).into_iter().flatten())
            .max()
            .unwrap_or(0)
    }

    /// BFS spanning tree from `root`, ties at each frontier node broken by
    /// ascending port, with the remaining edges as the feedback set.
    /// Deterministic for a given footprint and root.
    pub fn spanning_decomposition(&self, root: NodeId) -> SpanningDecomposition {
        assert!(root < self.node_count, "root out of range");
        let mut parent_edge: Vec<Option<EdgeIdx>> = vec![None; self.node_count];
        let mut visited = vec![false; self.node_count];
        visited[root] = true;
        let mut tree = EdgeSet::empty(self.edges.len());
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &(e, w) in &self.adjacency[v] {
                if !visited[w] {
                    visited[w] = true;
                    parent_edge[w] = Some(e);
                    tree.insert(e);
                    queue.push_back(w);
                }
            }
        }
        let mut feedback = EdgeSet::empty(self.edges.len());
        for i in 0..self.edges.len() {
            if !tree.contains(i) {
                feedback.insert(i);
            }
        }
        SpanningDecomposition {
            root,
            tree_edges: tree,
            feedback_edges: feedback,
            parent_edge,
        }
    }

    /// Canonical text form: header `n <count>`, then one `u v pu pv` line per
    /// edge in canonical order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "n {}", self.node_count);
        for e in &self.edges {
            let _ = writeln!(out, "{} {} {} {}", e.u, e.v, e.port_u, e.port_v);
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, GraphError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| GraphError::Parse("empty input".into()))?;
        let node_count = header
            .strip_prefix("n ")
            .and_then(|s| s.trim().parse::<usize>().ok())
            .ok_or_else(|| GraphError::Parse(format!("bad header line: {header:?}")))?;
        let mut edges = Vec::new();
        for line in lines {
            let fields: Vec<usize> = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| GraphError::Parse(format!("bad edge line: {line:?}")))
                })
                .collect::<Result<_, _>>()?;
            if fields.len() != 4 {
                return Err(GraphError::Parse(format!("bad edge line: {line:?}")));
            }
            edges.push((fields[0], fields[1], fields[2], fields[3]));
        }
        Footprint::from_edges(node_count, &edges)
    }
}

/// A fixed spanning tree plus its feedback (non-tree) edges.
#[derive(Debug, Clone)]
pub struct SpanningDecomposition {
    pub root: NodeId,
    pub tree_edges: EdgeSet,
    pub feedback_edges: EdgeSet,
    /// Tree edge connecting each node to its BFS parent; `None` for the root.
    pub parent_edge: Vec<Option<EdgeIdx>>,
}

impl SpanningDecomposition {
    pub fn is_valid_tree(&self, fp: &Footprint) -> bool {
        self.tree_edges.count() == fp.node_count() - 1 && fp.is_connected(&self.tree_edges)
    }
}

/// Convenience constructor matching the flat tuple contract.
pub fn build_footprint(
    node_count: usize,
    edge_list: &[(NodeId, NodeId, Port, Port)],
) -> Result<Footprint, GraphError> {
    Footprint::from_edges(node_count, edge_list)
}
