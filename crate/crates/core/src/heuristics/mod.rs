//! The four step-size-adaptive search heuristics.
//!
//! All four share one loop: propose a mutation of the current dual solution,
//! evaluate the fitness-comparing function once, accept on `f ≥ 0`, then
//! adapt the per-edge step sizes. They differ in how edges are selected
//! (independently with probability `1/m`, or exactly one uniformly), in the
//! mutation direction (the feasibility sign, or a fair coin), and in how
//! step sizes shrink after a rejection.

mod run;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Geometric};

use crate::dual::{DualSolution, Evaluation, VertexStatus};
use crate::graph::EdgeId;
use crate::numeric::{Alpha, LpScalar, Sign, StepExponent};

pub use run::{run, run_observed, Checkpoint, Observer, RunConfig, RunLog, RunResult, StepEvent, CHECKPOINT_INTERVAL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Algorithm {
    /// (1+1) EA with sign-directed mutations and conservative step decrease.
    Ea,
    /// RLS with sign-directed mutations.
    Rls,
    /// (1+1) EA with the 1/5-th rule.
    EaFifth,
    /// RLS with the 1/5-th rule.
    RlsFifth,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Ea, Algorithm::Rls, Algorithm::EaFifth, Algorithm::RlsFifth];

    pub fn label(self) -> &'static str {
        match self {
            Algorithm::Ea => "ea",
            Algorithm::Rls => "rls",
            Algorithm::EaFifth => "ea-fifth",
            Algorithm::RlsFifth => "rls-fifth",
        }
    }

    pub fn uses_fifth_rule(self) -> bool {
        matches!(self, Algorithm::EaFifth | Algorithm::RlsFifth)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.to_ascii_lowercase().replace('_', "-");
        Algorithm::ALL
            .into_iter()
            .find(|a| a.label() == norm)
            .ok_or_else(|| format!("unknown algorithm {s:?} (expected ea, rls, ea-fifth, rls-fifth)"))
    }
}

/// Per-edge quarter-exponents `q(e)` of the step sizes `σ(e) = α^{q(e)/4}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepState {
    q: Vec<u32>,
    q_max: u32,
    alpha: Alpha,
}

impl StepState {
    /// All step sizes start at 1.
    pub fn new(m: usize, alpha: Alpha, w_max: u128) -> Self {
        StepState { q: vec![0; m], q_max: alpha.max_exponent(w_max), alpha }
    }

    pub fn exponent(&self, e: EdgeId) -> StepExponent {
        StepExponent::new(self.q[e.index()], self.q_max).expect("exponent within cap")
    }

    pub fn q_max(&self) -> u32 {
        self.q_max
    }

    pub fn alpha(&self) -> Alpha {
        self.alpha
    }

    pub fn exponents(&self) -> &[u32] {
        &self.q
    }

    /// Sets `q(e)` directly; used to seed states in tests and replays.
    pub fn set_exponent(&mut self, e: EdgeId, q: StepExponent) {
        assert!(q.get() <= self.q_max);
        self.q[e.index()] = q.get();
    }

    pub fn step_size<S: LpScalar>(&self, e: EdgeId) -> S {
        S::step(self.exponent(e), self.alpha)
    }

    /// `σ(e) := min{α·σ(e), α^{⌈log_α W_max⌉+1}}`
    pub fn promote(&mut self, e: EdgeId) {
        let q = &mut self.q[e.index()];
        *q = (*q + 4).min(self.q_max);
    }

    /// Divides `σ(e)` by `α^{quarters/4}`, never below 1.
    pub fn demote(&mut self, e: EdgeId, quarters: u32) {
        let q = &mut self.q[e.index()];
        *q = q.saturating_sub(quarters);
    }

    pub fn min_max(&self) -> Option<(u32, u32)> {
        let min = self.q.iter().copied().min()?;
        let max = self.q.iter().copied().max()?;
        Some((min, max))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Proposal<S> {
    pub edge: EdgeId,
    pub old: S,
    pub new: S,
}

/// One mutation: the selected edge set `I`, its direction, and the outcome.
#[derive(Clone, Debug, PartialEq)]
pub struct MutationRecord<S> {
    pub direction: Sign,
    pub proposals: Vec<Proposal<S>>,
    pub accepted: bool,
    /// Edges whose step size was demoted after a rejection of the (1+1) EA.
    pub demoted: Vec<EdgeId>,
}

impl<S: LpScalar> MutationRecord<S> {
    pub fn selected(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.proposals.iter().map(|p| p.edge)
    }

    pub fn len(&self) -> usize {
        self.proposals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.proposals.is_empty()
    }

    pub fn changes(&self) -> Vec<(EdgeId, S)> {
        self.proposals.iter().map(|p| (p.edge, p.new.clone())).collect()
    }
}

fn mutate<S: LpScalar>(
    y: &DualSolution<S>,
    steps: &StepState,
    selected: impl IntoIterator<Item = EdgeId>,
    direction: Sign,
) -> MutationRecord<S> {
    let alpha = y.alpha();
    let proposals = selected
        .into_iter()
        .map(|edge| {
            let old = y.value(edge).clone();
            let sigma: S = steps.step_size(edge);
            let moved = match direction {
                Sign::Negative => old.minus(&sigma),
                _ => old.plus(&sigma),
            };
            Proposal { edge, new: moved.clamp_non_negative(alpha), old }
        })
        .collect();
    MutationRecord { direction, proposals, accepted: false, demoted: Vec::new() }
}

/// Each edge independently with probability `1/m`, sampled by geometric skips.
fn select_standard<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Vec<EdgeId> {
    let skips = Geometric::new(1.0 / m as f64).expect("valid probability");
    let mut selected = Vec::new();
    let mut pos = skips.sample(rng);
    while pos < m as u64 {
        selected.push(EdgeId(pos as u32));
        pos = pos.saturating_add(1).saturating_add(skips.sample(rng));
    }
    selected
}

fn select_one<R: Rng + ?Sized>(m: usize, rng: &mut R) -> EdgeId {
    EdgeId(rng.random_range(0..m as u32))
}

fn coin<R: Rng + ?Sized>(rng: &mut R) -> Sign {
    if rng.random_bool(0.5) {
        Sign::Positive
    } else {
        Sign::Negative
    }
}

pub fn propose_ea<S: LpScalar, R: Rng + ?Sized>(
    y: &DualSolution<S>,
    steps: &StepState,
    rng: &mut R,
) -> MutationRecord<S> {
    let selected = select_standard(y.values().len(), rng);
    mutate(y, steps, selected, y.sign())
}

pub fn propose_rls<S: LpScalar, R: Rng + ?Sized>(
    y: &DualSolution<S>,
    steps: &StepState,
    rng: &mut R,
) -> MutationRecord<S> {
    let e = select_one(y.values().len(), rng);
    mutate(y, steps, [e], y.sign())
}

pub fn propose_ea_fifth<S: LpScalar, R: Rng + ?Sized>(
    y: &DualSolution<S>,
    steps: &StepState,
    rng: &mut R,
) -> MutationRecord<S> {
    let direction = coin(rng);
    let selected = select_standard(y.values().len(), rng);
    mutate(y, steps, selected, direction)
}

pub fn propose_rls_fifth<S: LpScalar, R: Rng + ?Sized>(
    y: &DualSolution<S>,
    steps: &StepState,
    rng: &mut R,
) -> MutationRecord<S> {
    let e = select_one(y.values().len(), rng);
    let direction = coin(rng);
    mutate(y, steps, [e], direction)
}

pub fn propose<S: LpScalar, R: Rng + ?Sized>(
    algorithm: Algorithm,
    y: &DualSolution<S>,
    steps: &StepState,
    rng: &mut R,
) -> MutationRecord<S> {
    match algorithm {
        Algorithm::Ea => propose_ea(y, steps, rng),
        Algorithm::Rls => propose_rls(y, steps, rng),
        Algorithm::EaFifth => propose_ea_fifth(y, steps, rng),
        Algorithm::RlsFifth => propose_rls_fifth(y, steps, rng),
    }
}

/// `I'`: selected edges that have a violating endpoint under `Y'`, where no
/// other selected edge meets them at any of their violating endpoints.
pub fn compute_i_prime<S: LpScalar>(record: &MutationRecord<S>, candidate: &Evaluation<S>, y: &DualSolution<S>) -> Vec<EdgeId> {
    record
        .selected()
        .filter(|&e| {
            let violating: Vec<_> = y
                .graph()
                .endpoints(e)
                .into_iter()
                .filter(|&v| candidate.status_after(v) == Some(VertexStatus::Violating))
                .collect();
            !violating.is_empty() && violating.iter().all(|&v| candidate.multiplicity(v) == 1)
        })
        .collect()
}

/// Step-size update after a single fitness evaluation. Returns whether the
/// mutation was accepted; the caller commits the candidate on acceptance.
pub fn adapt<S: LpScalar>(
    algorithm: Algorithm,
    y: &DualSolution<S>,
    steps: &mut StepState,
    record: &mut MutationRecord<S>,
    outcome: &Evaluation<S>,
) -> bool {
    let accepted = outcome.accepted();
    record.accepted = accepted;
    if accepted {
        for p in &record.proposals {
            steps.promote(p.edge);
        }
        return true;
    }
    match algorithm {
        Algorithm::Ea if y.sign() == Sign::Positive => {
            record.demoted = compute_i_prime(record, outcome, y);
            for &e in &record.demoted {
                steps.demote(e, 4);
            }
        }
        Algorithm::Rls if y.sign() == Sign::Positive => {
            record.demoted = record.selected().collect();
            for &e in &record.demoted {
                steps.demote(e, 4);
            }
        }
        Algorithm::Ea | Algorithm::Rls => {}
        Algorithm::EaFifth | Algorithm::RlsFifth => {
            for p in &record.proposals {
                steps.demote(p.edge, 1);
            }
        }
    }
    false
}

/// Evaluates `record` against `y` once, adapts step sizes, and commits the
/// candidate if accepted.
pub fn select_and_adapt<S: LpScalar>(
    algorithm: Algorithm,
    y: &mut DualSolution<S>,
    steps: &mut StepState,
    record: &mut MutationRecord<S>,
) -> bool {
    let changes = record.changes();
    let outcome = y.evaluate(&changes);
    let accepted = adapt(algorithm, y, steps, record, &outcome);
    if accepted {
        y.apply(changes, outcome);
    }
    accepted
}
