use std::io::Write;

use super::{adapt, propose, Algorithm, MutationRecord, StepState};
use crate::dual::{DualSolution, Evaluation};
use crate::numeric::{Alpha, LpScalar, Sign};

/// Evaluations between trajectory checkpoints.
pub const CHECKPOINT_INTERVAL: u64 = 1024;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    pub alpha: Alpha,
    pub w_max: u128,
    /// Maximum number of fitness evaluations.
    pub budget: u64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Checkpoint {
    pub evaluation: u64,
    pub total: f64,
    pub violating: usize,
    pub min_q: u32,
    pub max_q: u32,
}

#[derive(Clone, Debug)]
pub struct RunResult<S: LpScalar> {
    /// Fitness evaluations until an MFDS was reached, or the budget.
    pub evaluations: u64,
    pub success: bool,
    pub solution: DualSolution<S>,
    pub steps: StepState,
    pub trajectory: Vec<Checkpoint>,
}

/// What the runner hands to an [`Observer`] after each evaluation, before
/// the candidate is committed.
pub struct StepEvent<'a, S: LpScalar> {
    pub evaluation: u64,
    pub before: &'a DualSolution<S>,
    pub steps_before: &'a StepState,
    pub steps_after: &'a StepState,
    pub record: &'a MutationRecord<S>,
    pub outcome: &'a Evaluation<S>,
}

pub trait Observer<S: LpScalar> {
    fn on_step(&mut self, event: &StepEvent<'_, S>);
}

impl<S: LpScalar> Observer<S> for () {
    fn on_step(&mut self, _: &StepEvent<'_, S>) {}
}

impl<S: LpScalar, F: FnMut(&StepEvent<'_, S>)> Observer<S> for F {
    fn on_step(&mut self, event: &StepEvent<'_, S>) {
        self(event)
    }
}

/// CSV log with one row per evaluation:
/// `evaluation,accepted,selected,direction,sign,sum_y`.
pub struct RunLog<W: Write> {
    out: W,
    error: Option<std::io::Error>,
}

impl<W: Write> RunLog<W> {
    pub fn new(mut out: W) -> Self {
        let error = writeln!(out, "evaluation,accepted,selected,direction,sign,sum_y").err();
        RunLog { out, error }
    }

    /// The first write error, if any, or the inner writer.
    pub fn finish(mut self) -> std::io::Result<W> {
        if let Some(e) = self.error {
            return Err(e);
        }
        self.out.flush()?;
        Ok(self.out)
    }
}

impl<S: LpScalar, W: Write> Observer<S> for RunLog<W> {
    fn on_step(&mut self, event: &StepEvent<'_, S>) {
        if self.error.is_some() {
            return;
        }
        let accepted = event.outcome.accepted();
        let total = if accepted {
            event.before.total().plus(event.outcome.delta_sum())
        } else {
            event.before.total().clone()
        };
        let res = writeln!(
            self.out,
            "{},{},{},{},{},{}",
            event.evaluation,
            u8::from(accepted),
            event.record.len(),
            event.record.direction.as_i8(),
            event.before.sign().as_i8(),
            total.to_f64()
        );
        self.error = res.err();
    }
}

fn checkpoint<S: LpScalar>(evaluation: u64, y: &DualSolution<S>, steps: &StepState) -> Checkpoint {
    let (min_q, max_q) = steps.min_max().unwrap_or((0, 0));
    Checkpoint { evaluation, total: y.total().to_f64(), violating: y.violating_count(), min_q, max_q }
}

pub fn run<S: LpScalar>(initial: DualSolution<S>, config: &RunConfig) -> RunResult<S> {
    run_observed(initial, config, &mut ())
}

/// Runs `config.algorithm` from `initial` until an MFDS is reached or the
/// evaluation budget is spent. Each loop iteration costs one evaluation.
pub fn run_observed<S: LpScalar, O: Observer<S> + ?Sized>(
    initial: DualSolution<S>,
    config: &RunConfig,
    observer: &mut O,
) -> RunResult<S> {
    let mut rng = crate::streams::run_rng(config.seed);
    let mut y = initial;
    let mut steps = StepState::new(y.values().len(), config.alpha, config.w_max);
    let mut trajectory = vec![checkpoint(0, &y, &steps)];
    let mut evaluations = 0;
    let mut success = y.is_mfds();
    while !success && evaluations < config.budget {
        let mut record = propose(config.algorithm, &y, &steps, &mut rng);
        let changes = record.changes();
        let outcome = y.evaluate(&changes);
        evaluations += 1;
        let before = steps.clone();
        let accepted = adapt(config.algorithm, &y, &mut steps, &mut record, &outcome);
        observer.on_step(&StepEvent {
            evaluation: evaluations,
            before: &y,
            steps_before: &before,
            steps_after: &steps,
            record: &record,
            outcome: &outcome,
        });
        if accepted {
            y.apply(changes, outcome);
            success = y.is_mfds();
        }
        if evaluations % CHECKPOINT_INTERVAL == 0 {
            trajectory.push(checkpoint(evaluations, &y, &steps));
        }
    }
    if trajectory.last().map(|c| c.evaluation) != Some(evaluations) {
        trajectory.push(checkpoint(evaluations, &y, &steps));
    }
    debug_assert!(!success || y.sign() == Sign::Positive);
    RunResult { evaluations, success, solution: y, steps, trajectory }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::graph::WeightedGraph;
    use crate::numeric::{FloatValue, RadicalValue};

    fn config(algorithm: Algorithm, seed: u64) -> RunConfig {
        RunConfig { algorithm, alpha: Alpha::new(2).unwrap(), w_max: 8, budget: 100_000, seed }
    }

    fn path() -> Arc<WeightedGraph> {
        Arc::new(WeightedGraph::new(vec![3, 8, 5, 2, 7], [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap())
    }

    #[test]
    fn every_algorithm_reaches_an_mfds() {
        for a in Algorithm::ALL {
            let mut cfg = config(a, 7);
            if a.uses_fifth_rule() {
                // quarter steps of a rational β keep values integral
                cfg.alpha = Alpha::new(16).unwrap();
            }
            let res = run(DualSolution::<RadicalValue>::zero(path(), cfg.alpha, 8), &cfg);
            assert!(res.success, "{a}");
            assert!(res.solution.is_mfds());
            assert!(res.solution.caches_consistent());
            assert!(res.solution.extract_cover().unwrap().holds());
        }
    }

    #[test]
    fn runs_are_reproducible() {
        let cfg = config(Algorithm::Ea, 11);
        let a = run(DualSolution::<RadicalValue>::zero(path(), cfg.alpha, 8), &cfg);
        let b = run(DualSolution::<RadicalValue>::zero(path(), cfg.alpha, 8), &cfg);
        assert_eq!(a.evaluations, b.evaluations);
        assert_eq!(a.solution.values(), b.solution.values());
    }

    #[test]
    fn initial_mfds_costs_nothing() {
        let g = Arc::new(WeightedGraph::new(vec![2, 2], [(0, 1)]).unwrap());
        let a = Alpha::new(2).unwrap();
        let y = DualSolution::from_values(g, a, 2, vec![RadicalValue::from_integer(a, 2)]).unwrap();
        let res = run(y, &config(Algorithm::Rls, 0));
        assert!(res.success);
        assert_eq!(res.evaluations, 0);
    }

    #[test]
    fn budget_is_respected() {
        let mut cfg = config(Algorithm::RlsFifth, 3);
        cfg.budget = 5;
        let mut seen = 0;
        let res = run_observed(
            DualSolution::<RadicalValue>::zero(path(), cfg.alpha, 8),
            &cfg,
            &mut |_: &StepEvent<'_, RadicalValue>| seen += 1,
        );
        assert!(res.evaluations <= 5);
        assert_eq!(seen, res.evaluations);
    }

    #[test]
    fn float_backend_runs() {
        let cfg = config(Algorithm::Rls, 5);
        let res = run(DualSolution::<FloatValue>::zero(path(), cfg.alpha, 8), &cfg);
        assert!(res.success);
    }

    #[test]
    fn log_has_one_row_per_evaluation() {
        let cfg = config(Algorithm::Ea, 9);
        let mut log = RunLog::new(Vec::new());
        let res = run_observed(DualSolution::<RadicalValue>::zero(path(), cfg.alpha, 8), &cfg, &mut log);
        let text = String::from_utf8(log.finish().unwrap()).unwrap();
        assert_eq!(text.lines().count() as u64, res.evaluations + 1);
    }
}
