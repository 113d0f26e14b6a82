//! Batch experiments: plans, trials, CSV records, summaries and scaling fits.

mod record;
mod report;
mod verify;

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dual::DualSolution;
use crate::graph::Variant;
use crate::heuristics::{run, Algorithm, RunConfig, RunResult};
use crate::instances::{hard_instance, random_dynamic, random_dynamic_nontrivial, DynamicInstance, InstanceError};
use crate::numeric::{Alpha, FloatValue, LpScalar, NumericError, RadicalValue};
use crate::oracle;
use crate::streams::trial_seed;

pub use record::{format_wmax, parse_wmax, read_records, write_header, write_records, BenchRecord, CSV_HEADER};
pub use report::{
    bound_shape, contrast_budget, median, scaling_report, summarize, write_summary, CellSummary, ScalingReport,
    ScalingRow, MAX_RATIO_SPREAD,
};
pub use verify::{verify, Verdict};

/// Environment variable capping the number of concurrent trials.
pub const THREADS_ENV: &str = "DUALVC_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error("invalid plan: {0}")]
    Plan(String),
    #[error("trial {seed} of {cell} reported success but failed re-verification")]
    Verification { cell: String, seed: u64 },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed record: {0}")]
    Record(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

/// Arithmetic used for LP values during a run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    #[default]
    Exact,
    Float,
}

impl FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "exact" => Ok(Backend::Exact),
            "float" => Ok(Backend::Float),
            _ => Err(format!("unknown backend {s:?} (expected exact or float)")),
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Exact => "exact",
            Backend::Float => "float",
        })
    }
}

/// Serde through `Display`/`FromStr`, for the label enums.
mod label {
    use std::fmt::Display;
    use std::str::FromStr;

    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<T, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// How each trial's instance is built.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Generator {
    /// The adversarial construction with `W_max = α^m`.
    Hard { m: usize },
    /// Random graph with a random edit of scale `d`, weights on `[1, wmax]`.
    /// With `nontrivial`, edits that leave the start an MFDS are redrawn.
    Random {
        n: usize,
        m: usize,
        wmax: u64,
        d: usize,
        #[serde(default)]
        nontrivial: bool,
    },
}

/// One cell of a benchmark plan: a variant, an instance family and an
/// algorithm, repeated over `trials` seeds `seed, seed+1, ...`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cell {
    #[serde(with = "label")]
    pub variant: Variant,
    pub generator: Generator,
    #[serde(with = "label")]
    pub algorithm: Algorithm,
    pub alpha: u64,
    pub trials: u64,
    pub budget: u64,
    pub seed: u64,
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} alpha={} ", self.variant, self.algorithm, self.alpha)?;
        match &self.generator {
            Generator::Hard { m } => write!(f, "hard m={m}"),
            Generator::Random { n, m, wmax, d, nontrivial } => {
                write!(f, "random n={n} m={m} wmax={wmax} D={d}")?;
                if *nontrivial {
                    write!(f, " nontrivial")?;
                }
                Ok(())
            }
        }
    }
}

impl Cell {
    pub fn validate(&self) -> Result<(), HarnessError> {
        let err = |msg: String| Err(HarnessError::Plan(format!("{self}: {msg}")));
        if self.trials == 0 {
            return err("trials must be at least 1".into());
        }
        if self.budget == 0 {
            return err("budget must be at least 1".into());
        }
        Alpha::new(self.alpha)?;
        if let Generator::Random { wmax, .. } = self.generator {
            if wmax < self.alpha {
                return err(format!("alpha {} exceeds wmax {wmax}", self.alpha));
            }
        }
        Ok(())
    }

    pub fn instance(&self, seed: u64) -> Result<DynamicInstance, HarnessError> {
        let alpha = Alpha::new(self.alpha)?;
        Ok(match self.generator {
            Generator::Hard { m } => hard_instance(self.variant, m, alpha)?,
            Generator::Random { n, m, wmax, d, nontrivial: false } => {
                random_dynamic(n, m, wmax as u128, self.variant, d, alpha, seed)?
            }
            Generator::Random { n, m, wmax, d, nontrivial: true } => {
                random_dynamic_nontrivial(n, m, wmax as u128, self.variant, d, alpha, seed)?
            }
        })
    }

    /// `m` of the family: edges of the edited graph for the adversarial
    /// instances, of the original graph for random ones.
    pub fn nominal_m(&self) -> usize {
        match self.generator {
            Generator::Hard { m } | Generator::Random { m, .. } => m,
        }
    }

    pub fn seeds(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.trials).map(|i| trial_seed(self.seed, i))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchPlan {
    pub cells: Vec<Cell>,
    #[serde(default)]
    pub backend: Backend,
    /// CSV destination; the CLI's `--out` takes precedence.
    #[serde(default)]
    pub out: Option<String>,
}

impl BenchPlan {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let plan: BenchPlan = serde_json::from_str(text)?;
        if plan.cells.is_empty() {
            return Err(HarnessError::Plan("plan has no cells".into()));
        }
        for cell in &plan.cells {
            cell.validate()?;
        }
        Ok(plan)
    }
}

/// Runs `instance` under `config` on the chosen backend and re-verifies a
/// reported success with the naive oracle and the cover certificate.
pub fn run_instance(
    instance: &DynamicInstance,
    algorithm: Algorithm,
    budget: u64,
    seed: u64,
    backend: Backend,
) -> (u64, bool, bool) {
    let config = RunConfig { algorithm, alpha: instance.alpha, w_max: instance.w_max, budget, seed };
    fn checked<S: LpScalar>(r: RunResult<S>, instance: &DynamicInstance) -> (u64, bool, bool) {
        let verified = !r.success || certified(&r.solution, instance);
        (r.evaluations, r.success, verified)
    }
    match backend {
        Backend::Exact => checked(run(instance.initial_solution::<RadicalValue>(), &config), instance),
        Backend::Float => checked(run(instance.initial_solution::<FloatValue>(), &config), instance),
    }
}

fn certified<S: LpScalar>(y: &DualSolution<S>, instance: &DynamicInstance) -> bool {
    oracle::validate_mfds_naive(&instance.target, y.values(), instance.alpha)
        && y.extract_cover().is_ok_and(|c| c.holds())
}

pub fn run_trial(cell: &Cell, seed: u64, backend: Backend) -> Result<BenchRecord, HarnessError> {
    let instance = cell.instance(seed)?;
    let start = Instant::now();
    let (evaluations, success, verified) = run_instance(&instance, cell.algorithm, cell.budget, seed, backend);
    let wall_ms = start.elapsed().as_millis() as u64;
    if !verified {
        return Err(HarnessError::Verification { cell: cell.to_string(), seed });
    }
    Ok(BenchRecord {
        variant: cell.variant,
        algorithm: cell.algorithm,
        m: cell.nominal_m(),
        d: instance.scale(),
        alpha: cell.alpha,
        wmax: instance.w_max,
        seed,
        evaluations,
        success,
        wall_ms,
    })
}

/// Trials of one cell, in seed order, run on up to `threads` workers.
pub fn run_cell(cell: &Cell, backend: Backend, threads: usize) -> Result<Vec<BenchRecord>, HarnessError> {
    cell.validate()?;
    let seeds: Vec<u64> = cell.seeds().collect();
    let go = || seeds.par_iter().map(|&s| run_trial(cell, s, backend)).collect::<Result<Vec<_>, _>>();
    if threads <= 1 {
        return seeds.iter().map(|&s| run_trial(cell, s, backend)).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| HarnessError::Plan(e.to_string()))?;
    pool.install(go)
}

/// Worker count from `DUALVC_THREADS`, defaulting to the available cores.
pub fn thread_limit() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Runs every cell, writing each cell's rows as soon as it completes and a
/// commented summary block at the end.
pub fn run_plan<W: Write>(plan: &BenchPlan, out: W, threads: usize) -> Result<Vec<BenchRecord>, HarnessError> {
    let mut writer = csv::Writer::from_writer(out);
    write_header(&mut writer)?;
    let mut all = Vec::new();
    for cell in &plan.cells {
        let rows = run_cell(cell, plan.backend, threads)?;
        write_records(&mut writer, &rows)?;
        writer.flush()?;
        all.extend(rows);
    }
    let mut out = writer.into_inner().map_err(|e| HarnessError::Io(e.into_error()))?;
    write_summary(&mut out, &summarize(&all))?;
    out.flush()?;
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cell(algorithm: Algorithm) -> Cell {
        Cell {
            variant: Variant::EdgesAdded,
            generator: Generator::Hard { m: 6 },
            algorithm,
            alpha: 2,
            trials: 4,
            budget: 100_000,
            seed: 10,
        }
    }

    #[test]
    fn plan_json_round_trip() {
        let text = r#"{"cells":[{"variant":"E+","generator":{"kind":"hard","m":6},"algorithm":"rls","alpha":2,"trials":4,"budget":100000,"seed":10}]}"#;
        let plan = BenchPlan::from_json(text).unwrap();
        assert_eq!(plan.cells[0], cell(Algorithm::Rls));
        assert_eq!(plan.backend, Backend::Exact);
        let back = serde_json::to_string(&plan.cells[0]).unwrap();
        assert_eq!(serde_json::from_str::<Cell>(&back).unwrap(), plan.cells[0]);
    }

    #[test]
    fn invalid_plans_rejected() {
        assert!(BenchPlan::from_json(r#"{"cells":[]}"#).is_err());
        let bad = r#"{"cells":[{"variant":"E+","generator":{"kind":"hard","m":6},"algorithm":"rls","alpha":2,"trials":0,"budget":1,"seed":0}]}"#;
        assert!(BenchPlan::from_json(bad).is_err());
        let bad = r#"{"cells":[{"variant":"X","generator":{"kind":"hard","m":6},"algorithm":"rls","alpha":2,"trials":1,"budget":1,"seed":0}]}"#;
        assert!(BenchPlan::from_json(bad).is_err());
    }

    #[test]
    fn rows_follow_trial_order() {
        let rows = run_cell(&cell(Algorithm::Rls), Backend::Exact, 2).unwrap();
        let seeds: Vec<u64> = rows.iter().map(|r| r.seed).collect();
        assert_eq!(seeds, vec![10, 11, 12, 13]);
        assert!(rows.iter().all(|r| r.success && r.m == 6 && r.d == 1 && r.wmax == 64));
    }

    #[test]
    fn float_backend_trials() {
        let rows = run_cell(&cell(Algorithm::Ea), Backend::Float, 1).unwrap();
        assert!(rows.iter().all(|r| r.success));
    }
}
