use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use dualvc::dual::{read_dump, write_dump, DualSolution};
use dualvc::graph::{read_edit, read_instance, write_edit, write_instance, Variant};
use dualvc::harness::{
    read_records, run_plan, scaling_report, thread_limit, verify as verify_solution, Backend, BenchPlan, Cell,
    Generator,
};
use dualvc::heuristics::{run_observed, Algorithm, RunConfig, RunLog, RunResult};
use dualvc::instances::DynamicInstance;
use dualvc::numeric::{Alpha, FloatValue, LpScalar, RadicalValue};
use dualvc::oracle;

use crate::{BenchArgs, FamilyArgs, GenArgs, ReportArgs, SolveArgs, VerifyArgs};

pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

const ORIGINAL_FILE: &str = "original.json";
const EDIT_FILE: &str = "edit.json";
const DUAL_FILE: &str = "original.dual";

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn cell_from(family: &FamilyArgs, algorithm: Algorithm, budget: u64) -> Result<Cell> {
    let mut cell = match &family.config {
        Some(path) => read_json::<Cell>(path)?,
        None => Cell {
            variant: Variant::EdgesAdded,
            generator: Generator::Hard { m: 10 },
            algorithm,
            alpha: 2,
            trials: 1,
            budget,
            seed: 0,
        },
    };
    if let Some(v) = family.variant {
        cell.variant = v;
    }
    if let Some(a) = family.alpha {
        cell.alpha = a;
    }
    if let Some(s) = family.seed {
        cell.seed = s;
    }
    let random = family.random || matches!(cell.generator, Generator::Random { .. });
    cell.generator = match cell.generator {
        Generator::Hard { m } if !random => Generator::Hard { m: family.m.unwrap_or(m) },
        Generator::Hard { m } => {
            let m = family.m.unwrap_or(m);
            Generator::Random {
                n: family.n.unwrap_or(m),
                m,
                wmax: family.wmax.unwrap_or(1024),
                d: family.d.unwrap_or(1),
                nontrivial: family.nontrivial,
            }
        }
        Generator::Random { n, m, wmax, d, nontrivial } => Generator::Random {
            n: family.n.unwrap_or(n),
            m: family.m.unwrap_or(m),
            wmax: family.wmax.unwrap_or(wmax),
            d: family.d.unwrap_or(d),
            nontrivial: nontrivial || family.nontrivial,
        },
    };
    cell.validate()?;
    Ok(cell)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?))
}

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path).with_context(|| format!("opening {}", path.display()))?))
}

pub fn gen(args: GenArgs) -> Result<ExitCode> {
    let cell = cell_from(&args.family, Algorithm::Rls, 1)?;
    let inst = cell.instance(cell.seed)?;
    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let mut w = create(&args.out.join(ORIGINAL_FILE))?;
    write_instance(&mut w, &inst.original)?;
    w.flush()?;
    let mut w = create(&args.out.join(EDIT_FILE))?;
    write_edit(&mut w, &inst.edit)?;
    w.flush()?;
    let values = inst.y_orig.iter().map(|&y| RadicalValue::from_integer(inst.alpha, y)).collect();
    let y = DualSolution::from_values(inst.original.clone(), inst.alpha, inst.w_max, values)?;
    let mut w = create(&args.out.join(DUAL_FILE))?;
    write_dump(&mut w, &y)?;
    w.flush()?;
    println!(
        "variant: {}\nn: {}\nm: {}\nD: {}\nwmax: {}\nwritten: {}",
        inst.variant,
        inst.target.vertex_count(),
        inst.target.edge_count(),
        inst.scale(),
        inst.w_max,
        args.out.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn load_dir(dir: &Path) -> Result<DynamicInstance> {
    let original = read_instance(open(&dir.join(ORIGINAL_FILE))?)?;
    let edit = read_edit(open(&dir.join(EDIT_FILE))?)?;
    let g = Arc::new(original.clone());
    let y = read_dump(open(&dir.join(DUAL_FILE))?, g, original.max_weight(), None)?;
    let y_orig = y
        .values()
        .iter()
        .map(RadicalValue::to_u128)
        .collect::<Option<Vec<_>>>()
        .context("original LP values must be non-negative integers")?;
    Ok(DynamicInstance::new(original, y_orig, edit, y.alpha())?)
}

fn run_logged<S: LpScalar>(
    inst: &DynamicInstance,
    config: &RunConfig,
    log: Option<&Path>,
) -> Result<RunResult<S>> {
    let initial = inst.initial_solution::<S>();
    match log {
        Some(path) => {
            let mut log = RunLog::new(create(path)?);
            let res = run_observed(initial, config, &mut log);
            log.finish()?;
            Ok(res)
        }
        None => Ok(run_observed(initial, config, &mut ())),
    }
}

fn report_run<S: LpScalar>(inst: &DynamicInstance, res: &RunResult<S>) -> bool {
    let verified = res.success
        && oracle::validate_mfds_naive(&inst.target, res.solution.values(), inst.alpha)
        && res.solution.extract_cover().is_ok_and(|c| c.holds());
    println!("variant: {}", inst.variant);
    println!("m: {}", inst.target.edge_count());
    println!("D: {}", inst.scale());
    println!("evaluations: {}", res.evaluations);
    println!("success: {}", res.success);
    println!("sum-y: {:.6}", res.solution.total().to_f64());
    if let Ok(cert) = res.solution.extract_cover() {
        println!("cover-weight: {}", cert.weight);
    }
    if res.success {
        println!("verified: {verified}");
    }
    verified
}

pub fn solve(args: SolveArgs) -> Result<ExitCode> {
    let algorithm = args.algo.unwrap_or(Algorithm::Rls);
    let budget = args.budget.unwrap_or(1_000_000);
    if budget == 0 {
        bail!("budget must be at least 1");
    }
    let (inst, seed, algorithm) = match &args.dir {
        Some(dir) => (load_dir(dir)?, args.family.seed.unwrap_or(0), algorithm),
        None => {
            let cell = cell_from(&args.family, algorithm, budget)?;
            let algorithm = if args.family.config.is_some() { args.algo.unwrap_or(cell.algorithm) } else { algorithm };
            (cell.instance(cell.seed)?, cell.seed, algorithm)
        }
    };
    if let Some(a) = args.family.alpha {
        if a != inst.alpha.value() {
            bail!("alpha {a} does not match the instance's alpha {}", inst.alpha);
        }
    }
    let config = RunConfig { algorithm, alpha: inst.alpha, w_max: inst.w_max, budget, seed };
    let ok = match args.backend {
        Backend::Exact => {
            let res = run_logged::<RadicalValue>(&inst, &config, args.log.as_deref())?;
            if let Some(out) = &args.out {
                let mut w = create(out)?;
                write_dump(&mut w, &res.solution)?;
                w.flush()?;
            }
            report_run(&inst, &res)
        }
        Backend::Float => {
            if args.out.is_some() {
                bail!("--out needs the exact backend");
            }
            let res = run_logged::<FloatValue>(&inst, &config, args.log.as_deref())?;
            report_run(&inst, &res)
        }
    };
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(EXIT_FAILURE) })
}

pub fn bench(args: BenchArgs) -> Result<ExitCode> {
    let text = fs::read_to_string(&args.config).with_context(|| format!("reading {}", args.config.display()))?;
    let mut plan = BenchPlan::from_json(&text)?;
    if let Some(b) = args.backend {
        plan.backend = b;
    }
    for cell in &mut plan.cells {
        if let Some(s) = args.seed {
            cell.seed = s;
        }
        if let Some(b) = args.budget {
            cell.budget = b;
        }
        cell.validate()?;
    }
    let out = args.out.clone().or_else(|| plan.out.clone().map(Into::into));
    let rows = match &out {
        Some(path) => run_plan(&plan, create(path)?, thread_limit())?,
        None => run_plan(&plan, std::io::stdout().lock(), thread_limit())?,
    };
    if let Some(path) = &out {
        eprintln!("{} trials written to {}", rows.len(), path.display());
    }
    Ok(ExitCode::SUCCESS)
}

pub fn verify(args: VerifyArgs) -> Result<ExitCode> {
    let g = Arc::new(read_instance(open(&args.instance)?)?);
    let alpha = args.alpha.map(Alpha::new).transpose()?;
    let y = read_dump(open(&args.dual)?, g.clone(), g.max_weight(), alpha)?;
    let verdict = verify_solution(&y);
    println!("{verdict}");
    Ok(if verdict.passed() { ExitCode::SUCCESS } else { ExitCode::from(EXIT_FAILURE) })
}

pub fn report(args: ReportArgs) -> Result<ExitCode> {
    let records = read_records(open(&args.csv)?)?;
    let report = scaling_report(&records)?;
    print!("{report}");
    Ok(ExitCode::SUCCESS)
}
