//! Dual solutions of the fractional weighted vertex cover LP.
//!
//! A [`DualSolution`] assigns a non-negative LP value to every edge and keeps
//! per-vertex loads `Σ_{e ∈ E(v)} Y(e)` cached, together with each vertex's
//! standing against its dual-LP constraint. Point updates go through
//! [`DualSolution::evaluate`] and [`DualSolution::apply`], which touch only the
//! endpoints of the changed edges.

mod dump;

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::graph::{EdgeId, VertexId, WeightedGraph};
use crate::numeric::{Alpha, LpScalar, Sign};

pub use dump::{read_dump, write_dump, DumpError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DualError {
    #[error("expected {expected} LP values, got {got}")]
    Length { expected: usize, got: usize },
    #[error("negative LP value on edge {0}")]
    Negative(EdgeId),
    #[error("dual solutions are defined over different graphs")]
    Mismatch,
    #[error("dual solution is not a maximal feasible dual solution")]
    NotMaximal,
}

/// Position of a vertex relative to its dual-LP constraint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexStatus {
    Slack,
    Tight,
    Violating,
}

impl VertexStatus {
    fn classify<S: LpScalar>(load: &S, weight: &S) -> Self {
        match load.minus(weight).signum() {
            Sign::Negative => VertexStatus::Slack,
            Sign::Zero => VertexStatus::Tight,
            Sign::Positive => VertexStatus::Violating,
        }
    }
}

/// Result of comparing a candidate against the current solution.
#[derive(Clone, Debug, PartialEq)]
pub struct FitnessOutcome<S> {
    pub value: S,
    pub accept: bool,
}

impl<S: LpScalar> FitnessOutcome<S> {
    pub fn new(value: S) -> Self {
        let accept = value.signum() != Sign::Negative;
        FitnessOutcome { value, accept }
    }
}

/// Incremental evaluation of a set of point changes.
#[derive(Clone, Debug)]
pub struct Evaluation<S> {
    pub fitness: FitnessOutcome<S>,
    /// `s(Y')`
    pub sign_after: Sign,
    delta_sum: S,
    touched: Vec<Touched<S>>,
}

#[derive(Clone, Debug)]
struct Touched<S> {
    vertex: VertexId,
    load: S,
    status: VertexStatus,
    /// Number of changed edges incident to the vertex.
    multiplicity: u32,
}

impl<S: LpScalar> Evaluation<S> {
    pub fn accepted(&self) -> bool {
        self.fitness.accept
    }

    /// Load of `v` under the candidate, if `v` is an endpoint of a changed edge.
    pub fn load_after(&self, v: VertexId) -> Option<&S> {
        self.touched.iter().find(|t| t.vertex == v).map(|t| &t.load)
    }

    pub fn status_after(&self, v: VertexId) -> Option<VertexStatus> {
        self.touched.iter().find(|t| t.vertex == v).map(|t| t.status)
    }

    /// `Σ_e (Y'(e) − Y(e))`
    pub fn delta_sum(&self) -> &S {
        &self.delta_sum
    }

    /// How many changed edges meet at `v`.
    pub fn multiplicity(&self, v: VertexId) -> u32 {
        self.touched.iter().find(|t| t.vertex == v).map_or(0, |t| t.multiplicity)
    }
}

/// Assignment `Y: E → ℝ≥0` with cached vertex loads.
#[derive(Clone, Debug)]
pub struct DualSolution<S: LpScalar> {
    graph: Arc<WeightedGraph>,
    alpha: Alpha,
    w_max: u128,
    weights: Arc<Vec<S>>,
    values: Vec<S>,
    loads: Vec<S>,
    status: Vec<VertexStatus>,
    violating: usize,
    untight_edges: usize,
    total: S,
}

impl<S: LpScalar> DualSolution<S> {
    pub fn zero(graph: Arc<WeightedGraph>, alpha: Alpha, w_max: u128) -> Self {
        let m = graph.edge_count();
        Self::from_values(graph, alpha, w_max, vec![S::zero(alpha); m])
            .expect("zero assignment is valid")
    }

    pub fn from_values(
        graph: Arc<WeightedGraph>,
        alpha: Alpha,
        w_max: u128,
        values: Vec<S>,
    ) -> Result<Self, DualError> {
        if values.len() != graph.edge_count() {
            return Err(DualError::Length { expected: graph.edge_count(), got: values.len() });
        }
        if let Some(i) = values.iter().position(|v| v.signum() == Sign::Negative) {
            return Err(DualError::Negative(EdgeId(i as u32)));
        }
        let weights: Vec<S> = graph.weights().iter().map(|&w| S::from_weight(w, alpha)).collect();
        let loads = compute_loads(&graph, &values, alpha);
        let status: Vec<VertexStatus> = loads
            .iter()
            .zip(&weights)
            .map(|(l, w)| VertexStatus::classify(l, w))
            .collect();
        let total = values.iter().fold(S::zero(alpha), |acc, v| acc.plus(v));
        let mut y = DualSolution {
            graph,
            alpha,
            w_max,
            weights: Arc::new(weights),
            values,
            loads,
            status,
            violating: 0,
            untight_edges: 0,
            total,
        };
        y.violating = y.status.iter().filter(|s| **s == VertexStatus::Violating).count();
        y.untight_edges = y.graph.edge_ids().filter(|&e| !y.edge_is_tight(e)).count();
        Ok(y)
    }

    pub fn graph(&self) -> &Arc<WeightedGraph> {
        &self.graph
    }

    pub fn alpha(&self) -> Alpha {
        self.alpha
    }

    pub fn w_max(&self) -> u128 {
        self.w_max
    }

    pub fn value(&self, e: EdgeId) -> &S {
        &self.values[e.index()]
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn load(&self, v: VertexId) -> &S {
        &self.loads[v.index()]
    }

    pub fn weight(&self, v: VertexId) -> &S {
        &self.weights[v.index()]
    }

    pub fn status(&self, v: VertexId) -> VertexStatus {
        self.status[v.index()]
    }

    /// `Σ_e Y(e)`
    pub fn total(&self) -> &S {
        &self.total
    }

    /// Penalty factor `m·W_max` of the infeasible branch of the fitness.
    pub fn penalty(&self) -> BigInt {
        BigInt::from(self.graph.edge_count()) * BigInt::from(self.w_max)
    }

    /// `V_{G*}(Y)`
    pub fn violating_vertices(&self) -> Vec<VertexId> {
        self.graph
            .vertices()
            .filter(|v| self.status(*v) == VertexStatus::Violating)
            .collect()
    }

    pub fn violating_count(&self) -> usize {
        self.violating
    }

    /// `E_{G*}(Y)`
    pub fn violating_edges(&self) -> BTreeSet<EdgeId> {
        self.graph.edge_ids().filter(|&e| self.edge_is_violating(e)).collect()
    }

    pub fn edge_is_violating(&self, e: EdgeId) -> bool {
        self.graph.endpoints(e).iter().any(|&v| self.status(v) == VertexStatus::Violating)
    }

    pub fn edge_is_tight(&self, e: EdgeId) -> bool {
        self.graph.endpoints(e).iter().any(|&v| self.status(v) == VertexStatus::Tight)
    }

    /// `s(Y)`: [`Sign::Negative`] when some vertex violates its constraint.
    pub fn sign(&self) -> Sign {
        if self.violating > 0 {
            Sign::Negative
        } else {
            Sign::Positive
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.violating == 0
    }

    /// Feasible and every edge has a tight endpoint.
    pub fn is_mfds(&self) -> bool {
        self.violating == 0 && self.untight_edges == 0
    }

    /// `f(Y', Y)` with `self` as `Y`, evaluated from scratch.
    pub fn fitness(&self, candidate: &DualSolution<S>) -> Result<FitnessOutcome<S>, DualError> {
        if !Arc::ptr_eq(&self.graph, &candidate.graph) && self.graph != candidate.graph {
            return Err(DualError::Mismatch);
        }
        let zero = S::zero(self.alpha);
        let value = if self.sign() == Sign::Positive {
            let diff = candidate.total.minus(&self.total);
            match candidate.sign() {
                Sign::Negative => diff.negated(),
                _ => diff,
            }
        } else {
            let mut gain = zero.clone();
            let mut drift = zero;
            for e in self.graph.edge_ids() {
                let d = self.value(e).minus(candidate.value(e));
                if self.edge_is_violating(e) {
                    gain = gain.plus(&d);
                } else {
                    drift = drift.plus(&d.abs());
                }
            }
            gain.minus(&drift.times_integer(&self.penalty()))
        };
        Ok(FitnessOutcome::new(value))
    }

    /// Evaluates `f(Y', Y)` where `Y'` differs from `self` on `changes`.
    ///
    /// `changes` lists each edge at most once with its proposed value.
    pub fn evaluate(&self, changes: &[(EdgeId, S)]) -> Evaluation<S> {
        let zero = S::zero(self.alpha);
        let mut touched: Vec<Touched<S>> = Vec::with_capacity(2 * changes.len());
        let mut delta_sum = zero.clone();
        let mut gain = zero.clone();
        let mut drift = zero;
        let feasible = self.is_feasible();
        for (e, proposed) in changes {
            let delta = proposed.minus(self.value(*e));
            if !feasible {
                if self.edge_is_violating(*e) {
                    gain = gain.minus(&delta);
                } else {
                    drift = drift.plus(&delta.abs());
                }
            }
            for v in self.graph.endpoints(*e) {
                match touched.iter_mut().find(|t| t.vertex == v) {
                    Some(t) => {
                        t.load = t.load.plus(&delta);
                        t.multiplicity += 1;
                    }
                    None => touched.push(Touched {
                        vertex: v,
                        load: self.load(v).plus(&delta),
                        status: VertexStatus::Slack,
                        multiplicity: 1,
                    }),
                }
            }
            delta_sum = delta_sum.plus(&delta);
        }
        let mut violating = self.violating;
        for t in &mut touched {
            t.status = VertexStatus::classify(&t.load, self.weight(t.vertex));
            if self.status(t.vertex) == VertexStatus::Violating {
                violating -= 1;
            }
            if t.status == VertexStatus::Violating {
                violating += 1;
            }
        }
        let sign_after = if violating > 0 { Sign::Negative } else { Sign::Positive };
        let value = if feasible {
            match sign_after {
                Sign::Negative => delta_sum.negated(),
                _ => delta_sum.clone(),
            }
        } else {
            gain.minus(&drift.times_integer(&self.penalty()))
        };
        Evaluation { fitness: FitnessOutcome::new(value), sign_after, delta_sum, touched }
    }

    /// Commits the changes that produced `eval`.
    pub fn apply(&mut self, changes: Vec<(EdgeId, S)>, eval: Evaluation<S>) {
        let flips: Vec<VertexId> = eval
            .touched
            .iter()
            .filter(|t| (t.status == VertexStatus::Tight) != (self.status(t.vertex) == VertexStatus::Tight))
            .map(|t| t.vertex)
            .collect();
        let mut affected: Vec<EdgeId> =
            flips.iter().flat_map(|&v| self.graph.incident(v).iter().copied()).collect();
        affected.sort_unstable();
        affected.dedup();
        let tight_before = affected.iter().filter(|&&e| self.edge_is_tight(e)).count();

        for (e, v) in changes {
            self.values[e.index()] = v;
        }
        for t in eval.touched {
            let i = t.vertex.index();
            if self.status[i] == VertexStatus::Violating {
                self.violating -= 1;
            }
            if t.status == VertexStatus::Violating {
                self.violating += 1;
            }
            self.status[i] = t.status;
            self.loads[i] = t.load;
        }
        self.total = self.total.plus(&eval.delta_sum);

        let tight_after = affected.iter().filter(|&&e| self.edge_is_tight(e)).count();
        self.untight_edges = self.untight_edges + tight_before - tight_after;
    }

    /// Point update of a single edge. Negative values are rejected.
    pub fn set_value(&mut self, e: EdgeId, value: S) -> Result<(), DualError> {
        if e.index() >= self.values.len() {
            return Err(DualError::Length { expected: self.values.len(), got: e.index() + 1 });
        }
        if value.signum() == Sign::Negative {
            return Err(DualError::Negative(e));
        }
        let changes = vec![(e, value)];
        let eval = self.evaluate(&changes);
        self.apply(changes, eval);
        Ok(())
    }

    /// Compares every cached quantity against a full recomputation.
    pub fn caches_consistent(&self) -> bool {
        let fresh = Self::from_values(self.graph.clone(), self.alpha, self.w_max, self.values.clone());
        let Ok(fresh) = fresh else { return false };
        fresh.loads == self.loads
            && fresh.status == self.status
            && fresh.violating == self.violating
            && fresh.untight_edges == self.untight_edges
            && fresh.total.minus(&self.total).is_zero()
    }

    /// Tight vertices of an MFDS together with the 2-approximation certificate.
    pub fn extract_cover(&self) -> Result<CoverCertificate<S>, DualError> {
        if !self.is_mfds() {
            return Err(DualError::NotMaximal);
        }
        let cover: Vec<VertexId> = self
            .graph
            .vertices()
            .filter(|&v| self.status(v) == VertexStatus::Tight)
            .collect();
        let weight: BigInt = cover.iter().map(|&v| BigInt::from(self.graph.weight(v))).sum();
        let covers_all_edges = self
            .graph
            .edges()
            .all(|(_, [u, v])| cover.binary_search(&u).is_ok() || cover.binary_search(&v).is_ok());
        let twice_dual = self.total.plus(&self.total);
        let weight_value = S::from_weight(1, self.alpha).times_integer(&weight);
        let within_factor_two = weight_value.minus(&twice_dual).signum() != Sign::Positive;
        Ok(CoverCertificate { cover, weight, twice_dual, covers_all_edges, within_factor_two })
    }
}

fn compute_loads<S: LpScalar>(graph: &WeightedGraph, values: &[S], alpha: Alpha) -> Vec<S> {
    let mut loads = vec![S::zero(alpha); graph.vertex_count()];
    for (e, [u, v]) in graph.edges() {
        let y = &values[e.index()];
        loads[u.index()] = loads[u.index()].plus(y);
        loads[v.index()] = loads[v.index()].plus(y);
    }
    loads
}

/// Vertex cover induced by an MFDS.
#[derive(Clone, Debug)]
pub struct CoverCertificate<S> {
    pub cover: Vec<VertexId>,
    pub weight: BigInt,
    /// `2·Σ_e Y(e)`
    pub twice_dual: S,
    pub covers_all_edges: bool,
    /// `Σ_{v ∈ cover} W(v) ≤ 2·Σ_e Y(e)`
    pub within_factor_two: bool,
}

impl<S> CoverCertificate<S> {
    pub fn holds(&self) -> bool {
        self.covers_all_edges && self.within_factor_two
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::RadicalValue;

    fn alpha() -> Alpha {
        Alpha::new(2).unwrap()
    }

    fn int(v: i64) -> RadicalValue {
        RadicalValue::from_integer(alpha(), v)
    }

    fn single_edge(y: i64) -> DualSolution<RadicalValue> {
        let g = Arc::new(WeightedGraph::new(vec![3, 5], [(0, 1)]).unwrap());
        DualSolution::from_values(g, alpha(), 5, vec![int(y)]).unwrap()
    }

    #[test]
    fn zero_solution_is_feasible() {
        let y = single_edge(0);
        assert!(y.violating_vertices().is_empty());
        assert_eq!(y.sign(), Sign::Positive);
        assert!(!y.is_mfds());
    }

    #[test]
    fn single_edge_overload() {
        let y = single_edge(4);
        assert_eq!(y.violating_vertices(), vec![VertexId(0)]);
        assert_eq!(y.violating_edges().into_iter().collect::<Vec<_>>(), vec![EdgeId(0)]);
        assert_eq!(y.sign(), Sign::Negative);
    }

    #[test]
    fn single_edge_increase_fitness() {
        let y = single_edge(0);
        let yp = single_edge(1);
        let f = y.fitness(&yp).unwrap();
        assert_eq!(f.value, int(1));
        assert!(f.accept);
        let inc = y.evaluate(&[(EdgeId(0), int(1))]);
        assert_eq!(inc.fitness, f);
    }

    #[test]
    fn identical_solutions_tie() {
        let y = single_edge(4);
        let f = y.fitness(&y.clone()).unwrap();
        assert!(f.value.is_zero());
        assert!(f.accept);
    }

    #[test]
    fn negative_values_rejected() {
        let g = Arc::new(WeightedGraph::new(vec![3, 5], [(0, 1)]).unwrap());
        let err = DualSolution::from_values(g.clone(), alpha(), 5, vec![int(-1)]).unwrap_err();
        assert_eq!(err, DualError::Negative(EdgeId(0)));
        assert!(DualSolution::<RadicalValue>::from_values(g, alpha(), 5, vec![]).is_err());
    }

    #[test]
    fn mismatched_graphs_rejected() {
        let a = single_edge(1);
        let g = Arc::new(WeightedGraph::new(vec![3, 5, 1], [(0, 1), (1, 2)]).unwrap());
        let b = DualSolution::zero(g, alpha(), 5);
        assert_eq!(a.fitness(&b), Err(DualError::Mismatch));
    }

    #[test]
    fn cover_from_single_edge() {
        let y = single_edge(3);
        assert!(y.is_mfds());
        let cert = y.extract_cover().unwrap();
        assert_eq!(cert.cover, vec![VertexId(0)]);
        assert_eq!(cert.weight, BigInt::from(3));
        assert!(cert.holds());
        assert_eq!(single_edge(2).extract_cover().unwrap_err(), DualError::NotMaximal);
    }

    #[test]
    fn empty_graph_is_vacuously_maximal() {
        let g = Arc::new(WeightedGraph::new(vec![1, 2], []).unwrap());
        let y = DualSolution::<RadicalValue>::zero(g, alpha(), 2);
        assert!(y.is_mfds());
        assert!(y.extract_cover().unwrap().cover.is_empty());
    }

    #[test]
    fn point_updates_keep_caches_coherent() {
        let g = Arc::new(
            WeightedGraph::new(vec![2, 3, 2, 4], [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap(),
        );
        let mut y = DualSolution::<RadicalValue>::zero(g, alpha(), 4);
        for (e, v) in [(0, 2), (1, 1), (2, 1), (3, 5), (3, 0), (1, 0), (2, 3)] {
            y.set_value(EdgeId(e), int(v)).unwrap();
            assert!(y.caches_consistent());
        }
        assert!(y.set_value(EdgeId(0), int(-1)).is_err());
    }
}
