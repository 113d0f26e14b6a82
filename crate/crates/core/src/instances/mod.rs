//! Dynamic problem instances: the adversarial graphs `G_s`, `G′_s`, random
//! graphs and edits, and the greedy construction of an initial MFDS.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::index::sample;
use rand::Rng;

use crate::dual::DualSolution;
use crate::graph::{apply_edit, Edit, EditOutcome, GraphError, Variant, VertexId, WeightedGraph};
use crate::numeric::{Alpha, LpScalar, RadicalValue};
use crate::oracle;
use crate::streams::{edit_rng, instance_rng};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InstanceError {
    #[error("the adversarial instances need m >= 2, got {0}")]
    TooFewEdges(usize),
    #[error("no adversarial instance for variant {0}")]
    UnsupportedVariant(Variant),
    #[error("alpha^m overflows the weight range")]
    WeightOverflow,
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("original LP values do not form an MFDS of the original graph")]
    NotMaximal,
    #[error("expected {expected} original LP values, got {got}")]
    ValueCount { expected: usize, got: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Maximal dual by a single pass over the edges in index order: each edge
/// takes the smaller residual of its two endpoints.
pub fn greedy_values(g: &WeightedGraph) -> Vec<u128> {
    let mut residual = g.weights().to_vec();
    g.edges()
        .map(|(_, [u, v])| {
            let y = residual[u.index()].min(residual[v.index()]);
            residual[u.index()] -= y;
            residual[v.index()] -= y;
            y
        })
        .collect()
}

pub fn greedy_mfds<S: LpScalar>(g: Arc<WeightedGraph>, alpha: Alpha, w_max: u128) -> DualSolution<S> {
    let values = greedy_values(&g).into_iter().map(|y| S::from_weight(y, alpha)).collect();
    DualSolution::from_values(g, alpha, w_max, values).expect("greedy values are non-negative")
}

/// `m` disjoint edges `[2i, 2i+1]`; the endpoints of `e₁ = [0, 1]` weigh
/// `w_max`, every other vertex weighs 1.
pub fn make_gs(m: usize, w_max: u128) -> Result<WeightedGraph, InstanceError> {
    if m < 2 {
        return Err(InstanceError::TooFewEdges(m));
    }
    let mut weights = vec![1; 2 * m];
    weights[0] = w_max;
    weights[1] = w_max;
    Ok(WeightedGraph::new(weights, (0..m as u32).map(|i| (2 * i, 2 * i + 1)))?)
}

/// `G_s` plus a pendant vertex `2m` of weight `w_max` joined to vertex 1 by
/// `e′₁`, the last edge. Vertex 1 is the apex shared by `e₁` and `e′₁`.
pub fn make_gs_prime(m: usize, w_max: u128) -> Result<WeightedGraph, InstanceError> {
    let gs = make_gs(m, w_max)?;
    let mut weights = gs.weights().to_vec();
    weights.push(w_max);
    let mut pairs = gs.edge_pairs();
    pairs.push((1, 2 * m as u32));
    Ok(WeightedGraph::new(weights, pairs)?)
}

/// An instance of one of the six dynamic variants, with the starting point
/// the heuristics use on the edited graph.
#[derive(Clone, Debug)]
pub struct DynamicInstance {
    pub original: Arc<WeightedGraph>,
    /// An MFDS of `original`.
    pub y_orig: Vec<u128>,
    pub edit: Edit,
    pub outcome: EditOutcome,
    pub target: Arc<WeightedGraph>,
    pub variant: Variant,
    pub alpha: Alpha,
    /// Largest weight of the original and the edited graph.
    pub w_max: u128,
}

impl DynamicInstance {
    /// Validates `y_orig` against `original` with the naive oracle and
    /// classifies the edit from its diff.
    pub fn new(
        original: WeightedGraph,
        y_orig: Vec<u128>,
        edit: Edit,
        alpha: Alpha,
    ) -> Result<Self, InstanceError> {
        if y_orig.len() != original.edge_count() {
            return Err(InstanceError::ValueCount { expected: original.edge_count(), got: y_orig.len() });
        }
        if !oracle::validate_mfds_integer(&original, &y_orig) {
            return Err(InstanceError::NotMaximal);
        }
        let outcome = apply_edit(&original, &edit)?;
        let target = Arc::new(outcome.graph.clone());
        let variant = outcome.diff.variant();
        let w_max = original.max_weight().max(target.max_weight()).max(1);
        Ok(DynamicInstance { original: Arc::new(original), y_orig, edit, outcome, target, variant, alpha, w_max })
    }

    /// Edit scale `D`.
    pub fn scale(&self) -> usize {
        self.outcome.scale
    }

    /// `Y(e) = Y_orig(e)` on edges kept from the original graph, 0 on new ones.
    pub fn initial_values(&self) -> Vec<u128> {
        self.outcome.origin.iter().map(|o| o.map_or(0, |e| self.y_orig[e.index()])).collect()
    }

    pub fn initial_solution<S: LpScalar>(&self) -> DualSolution<S> {
        let values = self.initial_values().into_iter().map(|y| S::from_weight(y, self.alpha)).collect();
        DualSolution::from_values(self.target.clone(), self.alpha, self.w_max, values)
            .expect("initial values are non-negative")
    }

    pub fn initial_exact(&self) -> DualSolution<RadicalValue> {
        self.initial_solution()
    }
}

/// The adversarial instances with `W_max = α^m`.
///
/// Edge `e₁` is edge 0 of the edited graph in every variant.
pub fn hard_instance(variant: Variant, m: usize, alpha: Alpha) -> Result<DynamicInstance, InstanceError> {
    if m < 2 {
        return Err(InstanceError::TooFewEdges(m));
    }
    let w_max = alpha.checked_pow(m as u32).ok_or(InstanceError::WeightOverflow)?;
    let gs = make_gs(m, w_max)?;
    match variant {
        Variant::EdgesAdded => {
            let pairs = gs.edge_pairs();
            let original = WeightedGraph::new(gs.weights().to_vec(), pairs[1..].iter().copied())?;
            let y_orig = vec![1; m - 1];
            DynamicInstance::new(original, y_orig, Edit::Edges(pairs), alpha)
        }
        Variant::EdgesRemoved | Variant::WeightsLowered => {
            let original = make_gs_prime(m, w_max)?;
            let mut y_orig = vec![1; m + 1];
            y_orig[m] = w_max - 1;
            let edit = if variant == Variant::EdgesRemoved {
                Edit::Edges(gs.edge_pairs())
            } else {
                let mut weights = original.weights().to_vec();
                weights[2 * m] = 1;
                Edit::Weights(weights)
            };
            DynamicInstance::new(original, y_orig, edit, alpha)
        }
        Variant::WeightsRaised => {
            let mut weights = gs.weights().to_vec();
            weights[0] = 1;
            weights[1] = 1;
            let original = WeightedGraph::new(weights, gs.edge_pairs())?;
            DynamicInstance::new(original, vec![1; m], Edit::Weights(gs.weights().to_vec()), alpha)
        }
        other => Err(InstanceError::UnsupportedVariant(other)),
    }
}

fn pair_of_index(n: u64, mut k: u64) -> (u32, u32) {
    // row-major enumeration of pairs u < v
    let mut u = 0;
    loop {
        let row = n - 1 - u;
        if k < row {
            return (u as u32, (u + 1 + k) as u32);
        }
        k -= row;
        u += 1;
    }
}

/// Uniform simple graph with `m` edges on `n` vertices and weights uniform
/// on `[1, w_max]`. Edges are listed in lexicographic order.
pub fn random_instance(n: usize, m: usize, w_max: u128, seed: u64) -> Result<WeightedGraph, InstanceError> {
    let pairs = (n as u64) * (n as u64).saturating_sub(1) / 2;
    if m as u64 > pairs {
        return Err(InstanceError::Infeasible(format!("{m} edges on {n} vertices")));
    }
    if w_max == 0 {
        return Err(InstanceError::Infeasible("w_max must be positive".into()));
    }
    let mut rng = instance_rng(seed);
    let mut chosen: Vec<u64> = if pairs <= usize::MAX as u64 / 2 {
        sample(&mut rng, pairs as usize, m).into_iter().map(|k| k as u64).collect()
    } else {
        let mut set = BTreeSet::new();
        while set.len() < m {
            set.insert(rng.random_range(0..pairs));
        }
        set.into_iter().collect()
    };
    chosen.sort_unstable();
    let weights = (0..n).map(|_| rng.random_range(1..=w_max)).collect();
    let edges = chosen.into_iter().map(|k| pair_of_index(n as u64, k));
    Ok(WeightedGraph::new(weights, edges)?)
}

fn split_mixed<R: Rng>(rng: &mut R, d: usize, up_max: usize, down_max: usize) -> Result<(usize, usize), InstanceError> {
    if d == 1 {
        let options: Vec<(usize, usize)> =
            [(1, 0), (0, 1)].into_iter().filter(|&(a, b)| a <= up_max && b <= down_max).collect();
        return options
            .get(rng.random_range(0..options.len().max(1)))
            .copied()
            .ok_or_else(|| InstanceError::Infeasible("no single change possible".into()));
    }
    let lo = 1.max(d.saturating_sub(down_max));
    let hi = (d - 1).min(up_max);
    if lo > hi {
        return Err(InstanceError::Infeasible(format!("cannot split {d} changes into both kinds")));
    }
    let up = rng.random_range(lo..=hi);
    Ok((up, d - up))
}

fn pick<R: Rng, T: Copy>(rng: &mut R, from: &[T], k: usize) -> Vec<T> {
    let mut idx = sample(rng, from.len(), k).into_vec();
    idx.sort_unstable();
    idx.into_iter().map(|i| from[i]).collect()
}

/// An edit of the requested variant with exactly `d` changed edges or
/// vertices. Raised weights stay at most `w_max`. For the mixed variants
/// with `d ≥ 2` both kinds of change occur; with `d = 1` one kind is drawn
/// and the edit is classified by what it does.
pub fn random_edit(
    g: &WeightedGraph,
    variant: Variant,
    d: usize,
    w_max: u128,
    seed: u64,
) -> Result<Edit, InstanceError> {
    random_edit_with(g, variant, d, w_max, &mut edit_rng(seed))
}

/// [`random_edit`] drawing from a caller-supplied generator.
pub fn random_edit_with<R: Rng>(
    g: &WeightedGraph,
    variant: Variant,
    d: usize,
    w_max: u128,
    rng: &mut R,
) -> Result<Edit, InstanceError> {
    if d == 0 {
        return Err(InstanceError::Infeasible("edit scale must be positive".into()));
    }
    if variant.is_edge_edit() {
        let n = g.vertex_count() as u64;
        let existing = g.edge_pairs();
        let non_edges: Vec<(u32, u32)> = (0..n * n.saturating_sub(1) / 2)
            .map(|k| pair_of_index(n, k))
            .filter(|&(u, v)| g.find_edge(u, v).is_none())
            .collect();
        let (add, remove) = match variant {
            Variant::EdgesAdded => (d, 0),
            Variant::EdgesRemoved => (0, d),
            _ => split_mixed(rng, d, non_edges.len(), existing.len())?,
        };
        if add > non_edges.len() || remove > existing.len() {
            return Err(InstanceError::Infeasible(format!("cannot add {add} and remove {remove} edges")));
        }
        let removed: BTreeSet<(u32, u32)> = pick(rng, &existing, remove).into_iter().collect();
        let mut pairs: Vec<(u32, u32)> = existing.into_iter().filter(|p| !removed.contains(p)).collect();
        pairs.extend(pick(rng, &non_edges, add));
        Ok(Edit::Edges(pairs))
    } else {
        let raisable: Vec<VertexId> = g.vertices().filter(|&v| g.weight(v) < w_max).collect();
        let lowerable: Vec<VertexId> = g.vertices().filter(|&v| g.weight(v) > 1).collect();
        let (up, down) = match variant {
            Variant::WeightsRaised => (d, 0),
            Variant::WeightsLowered => (0, d),
            _ => split_mixed(rng, d, raisable.len(), lowerable.len().min(g.vertex_count()))?,
        };
        if up > raisable.len() || down > lowerable.len() {
            return Err(InstanceError::Infeasible(format!("cannot raise {up} and lower {down} weights")));
        }
        let mut weights = g.weights().to_vec();
        let raised = pick(rng, &raisable, up);
        for &v in &raised {
            weights[v.index()] = rng.random_range(g.weight(v) + 1..=w_max);
        }
        let lowerable: Vec<VertexId> = lowerable.into_iter().filter(|v| !raised.contains(v)).collect();
        if down > lowerable.len() {
            return Err(InstanceError::Infeasible(format!("cannot lower {down} further weights")));
        }
        for v in pick(rng, &lowerable, down) {
            weights[v.index()] = rng.random_range(1..g.weight(v));
        }
        Ok(Edit::Weights(weights))
    }
}

/// Random graph, greedy MFDS and random edit from one seed.
pub fn random_dynamic(
    n: usize,
    m: usize,
    w_max: u128,
    variant: Variant,
    d: usize,
    alpha: Alpha,
    seed: u64,
) -> Result<DynamicInstance, InstanceError> {
    let g = random_instance(n, m, w_max, seed)?;
    let edit = random_edit(&g, variant, d, w_max, seed)?;
    let y_orig = greedy_values(&g);
    DynamicInstance::new(g, y_orig, edit, alpha)
}

/// Edits drawn from the seed's edit stream until the original MFDS stops
/// being one on the edited graph.
pub const MAX_EDIT_ATTEMPTS: usize = 1000;

/// [`random_dynamic`] restricted to edits after which the starting point
/// is not already an MFDS.
pub fn random_dynamic_nontrivial(
    n: usize,
    m: usize,
    w_max: u128,
    variant: Variant,
    d: usize,
    alpha: Alpha,
    seed: u64,
) -> Result<DynamicInstance, InstanceError> {
    let g = random_instance(n, m, w_max, seed)?;
    let y_orig = greedy_values(&g);
    let mut rng = edit_rng(seed);
    for _ in 0..MAX_EDIT_ATTEMPTS {
        let edit = random_edit_with(&g, variant, d, w_max, &mut rng)?;
        let inst = DynamicInstance::new(g.clone(), y_orig.clone(), edit, alpha)?;
        if !oracle::validate_mfds_integer(&inst.target, &inst.initial_values()) {
            return Ok(inst);
        }
    }
    Err(InstanceError::Infeasible(format!("no edit in {MAX_EDIT_ATTEMPTS} attempts leaves a non-maximal start")))
}
