//! Vertex-weighted simple graphs and the two graph-editing operations.

mod io;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

pub use io::{read_edit, read_instance, write_edit, write_instance, EditFile, InstanceFile};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(u32),
    #[error("duplicate edge [{0}, {1}]")]
    DuplicateEdge(u32, u32),
    #[error("vertex {0} out of range (n = {1})")]
    UnknownVertex(u32, usize),
    #[error("edge id {0} out of range (m = {1})")]
    UnknownEdge(usize, usize),
    #[error("vertex {0} has non-positive weight")]
    ZeroWeight(u32),
    #[error("weight edit lists {got} weights for {n} vertices")]
    WeightCount { got: usize, n: usize },
    #[error("malformed file: {0}")]
    Format(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Dense position of an edge in its graph's edge list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

impl EdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn key(u: u32, v: u32) -> (u32, u32) {
    (u.min(v), u.max(v))
}

/// `G = (V, E, W)` with positive integer weights and no loops or parallel edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedGraph {
    weights: Vec<u128>,
    edges: Vec<[VertexId; 2]>,
    incidence: Vec<Vec<EdgeId>>,
    lookup: HashMap<(u32, u32), EdgeId>,
}

impl WeightedGraph {
    pub fn new(
        weights: Vec<u128>,
        edges: impl IntoIterator<Item = (u32, u32)>,
    ) -> Result<Self, GraphError> {
        let n = weights.len();
        if let Some(v) = weights.iter().position(|&w| w == 0) {
            return Err(GraphError::ZeroWeight(v as u32));
        }
        let mut graph = WeightedGraph {
            weights,
            edges: Vec::new(),
            incidence: vec![Vec::new(); n],
            lookup: HashMap::new(),
        };
        for (u, v) in edges {
            graph.push_edge(u, v)?;
        }
        Ok(graph)
    }

    fn push_edge(&mut self, u: u32, v: u32) -> Result<EdgeId, GraphError> {
        let n = self.weights.len();
        for x in [u, v] {
            if x as usize >= n {
                return Err(GraphError::UnknownVertex(x, n));
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        let id = EdgeId(self.edges.len() as u32);
        if self.lookup.insert(key(u, v), id).is_some() {
            return Err(GraphError::DuplicateEdge(u, v));
        }
        self.edges.push([VertexId(u), VertexId(v)]);
        self.incidence[u as usize].push(id);
        self.incidence[v as usize].push(id);
        Ok(id)
    }

    pub fn vertex_count(&self) -> usize {
        self.weights.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn weight(&self, v: VertexId) -> u128 {
        self.weights[v.index()]
    }

    pub fn weights(&self) -> &[u128] {
        &self.weights
    }

    pub fn max_weight(&self) -> u128 {
        self.weights.iter().copied().max().unwrap_or(0)
    }

    pub fn endpoints(&self, e: EdgeId) -> [VertexId; 2] {
        self.edges[e.index()]
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = (EdgeId, [VertexId; 2])> + '_ {
        self.edges.iter().enumerate().map(|(i, &ends)| (EdgeId(i as u32), ends))
    }

    pub fn edge_ids(&self) -> impl ExactSizeIterator<Item = EdgeId> {
        (0..self.edges.len() as u32).map(EdgeId)
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = VertexId> {
        (0..self.weights.len() as u32).map(VertexId)
    }

    pub fn find_edge(&self, u: u32, v: u32) -> Option<EdgeId> {
        self.lookup.get(&key(u, v)).copied()
    }

    /// `E_G(v)`: the edges incident to `v`, in insertion order.
    pub fn incident_edges(&self, v: VertexId) -> Result<&[EdgeId], GraphError> {
        self.incidence
            .get(v.index())
            .map(Vec::as_slice)
            .ok_or(GraphError::UnknownVertex(v.0, self.weights.len()))
    }

    /// Unchecked variant of [`incident_edges`](Self::incident_edges) for hot loops.
    pub fn incident(&self, v: VertexId) -> &[EdgeId] {
        &self.incidence[v.index()]
    }

    /// `E_G(S)`: edges sharing an endpoint with some edge of `S`, minus `S`.
    pub fn edge_neighborhood(&self, set: &[EdgeId]) -> Result<BTreeSet<EdgeId>, GraphError> {
        let m = self.edges.len();
        if let Some(e) = set.iter().find(|e| e.index() >= m) {
            return Err(GraphError::UnknownEdge(e.index(), m));
        }
        let inside: BTreeSet<EdgeId> = set.iter().copied().collect();
        Ok(set
            .iter()
            .flat_map(|&e| self.endpoints(e))
            .flat_map(|v| self.incident(v).iter().copied())
            .filter(|f| !inside.contains(f))
            .collect())
    }

    /// Edge list as raw vertex pairs in stored orientation.
    pub fn edge_pairs(&self) -> Vec<(u32, u32)> {
        self.edges.iter().map(|[u, v]| (u.0, v.0)).collect()
    }
}

/// Full-replacement edit of either the edge set or the weight function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Edit {
    Edges(Vec<(u32, u32)>),
    Weights(Vec<u128>),
}

/// Diff sets of an edit. Added edges are ids in the new graph, removed edges
/// ids in the old one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EditDiff {
    Edges { added: Vec<EdgeId>, removed: Vec<EdgeId> },
    Weights { raised: Vec<VertexId>, lowered: Vec<VertexId> },
}

impl EditDiff {
    /// The problem variant whose emptiness constraint the diff satisfies.
    /// An empty diff classifies as the "added"/"raised" special case.
    pub fn variant(&self) -> Variant {
        match self {
            EditDiff::Edges { removed, .. } if removed.is_empty() => Variant::EdgesAdded,
            EditDiff::Edges { added, .. } if added.is_empty() => Variant::EdgesRemoved,
            EditDiff::Edges { .. } => Variant::EdgesMixed,
            EditDiff::Weights { lowered, .. } if lowered.is_empty() => Variant::WeightsRaised,
            EditDiff::Weights { raised, .. } if raised.is_empty() => Variant::WeightsLowered,
            EditDiff::Weights { .. } => Variant::WeightsMixed,
        }
    }
}

#[derive(Clone, Debug)]
pub struct EditOutcome {
    pub graph: WeightedGraph,
    /// Edit scale `D`.
    pub scale: usize,
    pub diff: EditDiff,
    /// For each edge of the new graph, its id in the old graph if it survived.
    pub origin: Vec<Option<EdgeId>>,
}

/// Applies `edit` to `g`. Vertices are never added or removed.
pub fn apply_edit(g: &WeightedGraph, edit: &Edit) -> Result<EditOutcome, GraphError> {
    match edit {
        Edit::Edges(pairs) => {
            let graph = WeightedGraph::new(g.weights.clone(), pairs.iter().copied())?;
            let origin: Vec<Option<EdgeId>> = graph
                .edges()
                .map(|(_, [u, v])| g.find_edge(u.0, v.0))
                .collect();
            let added: Vec<EdgeId> = graph
                .edge_ids()
                .filter(|e| origin[e.index()].is_none())
                .collect();
            let removed: Vec<EdgeId> = g
                .edges()
                .filter(|(_, [u, v])| graph.find_edge(u.0, v.0).is_none())
                .map(|(e, _)| e)
                .collect();
            let scale = added.len() + removed.len();
            Ok(EditOutcome { graph, scale, diff: EditDiff::Edges { added, removed }, origin })
        }
        Edit::Weights(weights) => {
            if weights.len() != g.vertex_count() {
                return Err(GraphError::WeightCount { got: weights.len(), n: g.vertex_count() });
            }
            let graph = WeightedGraph::new(weights.clone(), g.edge_pairs())?;
            let mut raised = Vec::new();
            let mut lowered = Vec::new();
            for v in g.vertices() {
                match weights[v.index()].cmp(&g.weight(v)) {
                    std::cmp::Ordering::Greater => raised.push(v),
                    std::cmp::Ordering::Less => lowered.push(v),
                    std::cmp::Ordering::Equal => {}
                }
            }
            let scale = raised.len() + lowered.len();
            let origin = g.edge_ids().map(Some).collect();
            Ok(EditOutcome { graph, scale, diff: EditDiff::Weights { raised, lowered }, origin })
        }
    }
}

/// The six dynamic problem variants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Variant {
    EdgesAdded,
    EdgesRemoved,
    EdgesMixed,
    WeightsRaised,
    WeightsLowered,
    WeightsMixed,
}

impl Variant {
    pub const ALL: [Variant; 6] = [
        Variant::EdgesAdded,
        Variant::EdgesRemoved,
        Variant::EdgesMixed,
        Variant::WeightsRaised,
        Variant::WeightsLowered,
        Variant::WeightsMixed,
    ];

    pub fn is_edge_edit(self) -> bool {
        matches!(self, Variant::EdgesAdded | Variant::EdgesRemoved | Variant::EdgesMixed)
    }

    pub fn label(self) -> &'static str {
        match self {
            Variant::EdgesAdded => "E+",
            Variant::EdgesRemoved => "E-",
            Variant::EdgesMixed => "E",
            Variant::WeightsRaised => "W+",
            Variant::WeightsLowered => "W-",
            Variant::WeightsMixed => "W",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Variant::ALL
            .into_iter()
            .find(|v| v.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown variant {s:?} (expected E+, E-, E, W+, W-, W)"))
    }
}
