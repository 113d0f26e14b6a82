//! Slow reference implementations used to cross-check the incremental code.
//!
//! Nothing here shares state or caches with the `dual` module: loads are
//! recomputed from the edge list on every call.

use crate::dual::FitnessOutcome;
use crate::graph::{VertexId, WeightedGraph};
use crate::numeric::{Alpha, LpScalar, Sign};

use num_bigint::BigInt;

/// Largest vertex count accepted by [`exact_min_wvc`].
pub const MAX_EXACT_VERTICES: usize = 24;
/// Largest vertex count accepted by [`exhaustive_min_wvc`].
pub const MAX_EXHAUSTIVE_VERTICES: usize = 12;
pub const MAX_ENUM_EDGES: usize = 6;
pub const MAX_ENUM_WEIGHT: u128 = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("instance too large for {what}: {got} > {limit}")]
    TooLarge { what: &'static str, got: u128, limit: u128 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactCoverResult {
    pub cover: Vec<VertexId>,
    pub weight: u128,
}

fn loads<S: LpScalar>(g: &WeightedGraph, values: &[S], alpha: Alpha) -> Vec<S> {
    let mut loads = vec![S::zero(alpha); g.vertex_count()];
    for (e, [u, v]) in g.edges() {
        loads[u.index()] = loads[u.index()].plus(&values[e.index()]);
        loads[v.index()] = loads[v.index()].plus(&values[e.index()]);
    }
    loads
}

fn slack<S: LpScalar>(g: &WeightedGraph, load: &[S], v: VertexId, alpha: Alpha) -> Sign {
    S::from_weight(g.weight(v), alpha).minus(&load[v.index()]).signum()
}

/// Non-negative and no vertex load above its weight.
pub fn validate_feasible_naive<S: LpScalar>(g: &WeightedGraph, values: &[S], alpha: Alpha) -> bool {
    if values.len() != g.edge_count() || values.iter().any(|y| y.signum() == Sign::Negative) {
        return false;
    }
    let load = loads(g, values, alpha);
    g.vertices().all(|v| slack(g, &load, v, alpha) != Sign::Negative)
}

/// Non-negative, feasible, and every edge has an endpoint with zero slack.
pub fn validate_mfds_naive<S: LpScalar>(g: &WeightedGraph, values: &[S], alpha: Alpha) -> bool {
    if values.len() != g.edge_count() || values.iter().any(|y| y.signum() == Sign::Negative) {
        return false;
    }
    let load = loads(g, values, alpha);
    g.vertices().all(|v| slack(g, &load, v, alpha) != Sign::Negative)
        && g.edges().all(|(_, [u, v])| {
            slack(g, &load, u, alpha) == Sign::Zero || slack(g, &load, v, alpha) == Sign::Zero
        })
}

/// [`validate_mfds_naive`] for integer values, in plain integer arithmetic.
pub fn validate_mfds_integer(g: &WeightedGraph, values: &[u128]) -> bool {
    if values.len() != g.edge_count() {
        return false;
    }
    let mut load = vec![BigInt::from(0); g.vertex_count()];
    for (e, [u, v]) in g.edges() {
        load[u.index()] += values[e.index()];
        load[v.index()] += values[e.index()];
    }
    let w = |v: VertexId| BigInt::from(g.weight(v));
    g.vertices().all(|v| load[v.index()] <= w(v))
        && g.edges().all(|(_, [u, v])| load[u.index()] == w(u) || load[v.index()] == w(v))
}

/// `f(Y', Y)` straight from its definition.
pub fn reference_fitness<S: LpScalar>(
    g: &WeightedGraph,
    w_max: u128,
    alpha: Alpha,
    y: &[S],
    yp: &[S],
) -> FitnessOutcome<S> {
    let load = loads(g, y, alpha);
    let load_p = loads(g, yp, alpha);
    let violates = |l: &[S], v: VertexId| slack(g, l, v, alpha) == Sign::Negative;
    let feasible = g.vertices().all(|v| !violates(&load, v));
    let sum = |vals: &[S]| vals.iter().fold(S::zero(alpha), |acc, x| acc.plus(x));
    let value = if feasible {
        let diff = sum(yp).minus(&sum(y));
        if g.vertices().any(|v| violates(&load_p, v)) {
            diff.negated()
        } else {
            diff
        }
    } else {
        let mut inside = S::zero(alpha);
        let mut outside = S::zero(alpha);
        for (e, [u, v]) in g.edges() {
            let d = y[e.index()].minus(&yp[e.index()]);
            if violates(&load, u) || violates(&load, v) {
                inside = inside.plus(&d);
            } else {
                outside = outside.plus(&d.abs());
            }
        }
        let penalty = BigInt::from(g.edge_count()) * BigInt::from(w_max);
        inside.minus(&outside.times_integer(&penalty))
    };
    FitnessOutcome::new(value)
}

fn cover_of(mask: u32, n: usize) -> Vec<VertexId> {
    (0..n as u32).filter(|i| mask >> i & 1 == 1).map(VertexId).collect()
}

fn mask_weight(g: &WeightedGraph, mask: u32) -> u128 {
    g.vertices().filter(|v| mask >> v.0 & 1 == 1).map(|v| g.weight(v)).sum()
}

/// Minimum weight vertex cover by trying every subset.
pub fn exhaustive_min_wvc(g: &WeightedGraph) -> Result<ExactCoverResult, OracleError> {
    let n = g.vertex_count();
    if n > MAX_EXHAUSTIVE_VERTICES {
        return Err(OracleError::TooLarge {
            what: "exhaustive cover search",
            got: n as u128,
            limit: MAX_EXHAUSTIVE_VERTICES as u128,
        });
    }
    let edges: Vec<(u32, u32)> = g.edge_pairs();
    let mut best: Option<(u128, u32)> = None;
    for mask in 0u32..(1 << n) {
        if edges.iter().all(|&(u, v)| mask >> u & 1 == 1 || mask >> v & 1 == 1) {
            let w = mask_weight(g, mask);
            if best.is_none_or(|(bw, _)| w < bw) {
                best = Some((w, mask));
            }
        }
    }
    let (weight, mask) = best.expect("the full vertex set is a cover");
    Ok(ExactCoverResult { cover: cover_of(mask, n), weight })
}

struct BranchAndBound<'a> {
    g: &'a WeightedGraph,
    adj: Vec<u32>,
    best_weight: u128,
    best_mask: u32,
}

impl BranchAndBound<'_> {
    /// Lower bound on the cover weight still needed: a greedy maximal dual
    /// on the uncovered edges, with weights of excluded vertices ignored
    /// because their neighbours are already in the cover.
    fn lower_bound(&self, chosen: u32) -> u128 {
        let mut residual: Vec<u128> = self.g.weights().to_vec();
        let mut total = 0;
        for (_, [u, v]) in self.g.edges() {
            if chosen >> u.0 & 1 == 1 || chosen >> v.0 & 1 == 1 {
                continue;
            }
            let y = residual[u.index()].min(residual[v.index()]);
            residual[u.index()] -= y;
            residual[v.index()] -= y;
            total += y;
        }
        total
    }

    fn search(&mut self, chosen: u32, excluded: u32, weight: u128) {
        if weight + self.lower_bound(chosen) >= self.best_weight {
            return;
        }
        // branch on the free vertex with most uncovered incident edges
        let n = self.g.vertex_count() as u32;
        let free = |v: u32| (chosen | excluded) >> v & 1 == 0;
        let uncovered_degree = |v: u32| (self.adj[v as usize] & !chosen).count_ones();
        let pivot = (0..n).filter(|&v| free(v)).max_by_key(|&v| uncovered_degree(v));
        let Some(v) = pivot.filter(|&v| uncovered_degree(v) > 0) else {
            self.best_weight = weight;
            self.best_mask = chosen;
            return;
        };
        self.search(chosen | 1 << v, excluded, weight + self.g.weight(VertexId(v)));
        let forced = self.adj[v as usize] & !chosen;
        if forced & excluded == 0 {
            let extra = mask_weight(self.g, forced);
            self.search(chosen | forced, excluded | 1 << v, weight + extra);
        }
    }
}

/// Minimum weight vertex cover by branch and bound.
pub fn exact_min_wvc(g: &WeightedGraph) -> Result<ExactCoverResult, OracleError> {
    let n = g.vertex_count();
    if n > MAX_EXACT_VERTICES {
        return Err(OracleError::TooLarge {
            what: "exact cover search",
            got: n as u128,
            limit: MAX_EXACT_VERTICES as u128,
        });
    }
    let mut adj = vec![0u32; n];
    for (u, v) in g.edge_pairs() {
        adj[u as usize] |= 1 << v;
        adj[v as usize] |= 1 << u;
    }
    let all = if n == 0 { 0 } else { u32::MAX >> (32 - n) };
    let mut bb = BranchAndBound { g, adj, best_weight: mask_weight(g, all) + 1, best_mask: all };
    bb.search(0, 0, 0);
    let mask = bb.best_mask;
    Ok(ExactCoverResult { cover: cover_of(mask, n), weight: mask_weight(g, mask) })
}

/// Every integer MFDS with values in `[0, W_max]`.
pub fn enumerate_mfds(g: &WeightedGraph) -> Result<Vec<Vec<u128>>, OracleError> {
    let m = g.edge_count();
    if m > MAX_ENUM_EDGES {
        return Err(OracleError::TooLarge { what: "MFDS enumeration", got: m as u128, limit: MAX_ENUM_EDGES as u128 });
    }
    let w_max = g.max_weight();
    if w_max > MAX_ENUM_WEIGHT {
        return Err(OracleError::TooLarge { what: "MFDS enumeration", got: w_max, limit: MAX_ENUM_WEIGHT });
    }
    let mut found = Vec::new();
    let mut y = vec![0u128; m];
    loop {
        if validate_mfds_integer(g, &y) {
            found.push(y.clone());
        }
        // odometer increment over [0, w_max]^m
        let mut i = 0;
        loop {
            if i == m {
                return Ok(found);
            }
            if y[i] < w_max {
                y[i] += 1;
                break;
            }
            y[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::make_gs;
    use crate::numeric::RadicalValue;

    #[test]
    fn single_edge_cover() {
        let g = WeightedGraph::new(vec![3, 5], [(0, 1)]).unwrap();
        assert_eq!(exact_min_wvc(&g).unwrap().weight, 3);
        assert_eq!(exhaustive_min_wvc(&g).unwrap().weight, 3);
    }

    #[test]
    fn adversarial_cover() {
        let g = make_gs(4, 16).unwrap();
        assert_eq!(exact_min_wvc(&g).unwrap().weight, 19);
        assert_eq!(exhaustive_min_wvc(&g).unwrap().weight, 19);
    }

    #[test]
    fn triangle_cover() {
        let g = WeightedGraph::new(vec![1, 1, 1], [(0, 1), (1, 2), (0, 2)]).unwrap();
        let r = exact_min_wvc(&g).unwrap();
        assert_eq!(r.weight, 2);
        assert_eq!(r.cover.len(), 2);
    }

    #[test]
    fn size_caps() {
        let g = WeightedGraph::new(vec![1; 25], []).unwrap();
        assert!(exact_min_wvc(&g).is_err());
        let g = WeightedGraph::new(vec![1; 13], []).unwrap();
        assert!(exhaustive_min_wvc(&g).is_err());
        assert_eq!(exact_min_wvc(&g).unwrap().weight, 0);
    }

    #[test]
    fn enumeration_small_cases() {
        let g = make_gs(2, 4).unwrap();
        assert_eq!(enumerate_mfds(&g).unwrap(), vec![vec![4, 1]]);
        let g = WeightedGraph::new(vec![1, 1], [(0, 1)]).unwrap();
        assert_eq!(enumerate_mfds(&g).unwrap(), vec![vec![1]]);
        let g = WeightedGraph::new(vec![1; 4], [(0, 1), (2, 3)]).unwrap();
        assert_eq!(enumerate_mfds(&g).unwrap(), vec![vec![1, 1]]);
        let g = WeightedGraph::new(vec![9, 9], [(0, 1)]).unwrap();
        assert!(enumerate_mfds(&g).is_err());
    }

    #[test]
    fn empty_graph_is_maximal() {
        let g = WeightedGraph::new(vec![2], []).unwrap();
        let a = Alpha::new(2).unwrap();
        assert!(validate_mfds_naive::<RadicalValue>(&g, &[], a));
        assert!(validate_mfds_integer(&g, &[]));
    }

    #[test]
    fn path_enumeration_matches_hand_count() {
        // path 0-1-2 with weights (1,2,1): MFDS are (1,1) only
        let g = WeightedGraph::new(vec![1, 2, 1], [(0, 1), (1, 2)]).unwrap();
        assert_eq!(enumerate_mfds(&g).unwrap(), vec![vec![1, 1]]);
        // weights (2,2,2): (2,0), (0,2), (1,1)
        let g = WeightedGraph::new(vec![2, 2, 2], [(0, 1), (1, 2)]).unwrap();
        let mut all = enumerate_mfds(&g).unwrap();
        all.sort();
        assert_eq!(all, vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
    }
}
