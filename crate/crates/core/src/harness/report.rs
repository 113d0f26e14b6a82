use std::collections::BTreeMap;
use std::io::Write;

use super::{BenchRecord, HarnessError};
use crate::graph::Variant;
use crate::heuristics::Algorithm;

/// Largest ratio spread, `max/min` of median-over-bound, still counted as
/// tracking the bound shape.
pub const MAX_RATIO_SPREAD: f64 = 4.0;

fn log_base(alpha: u64, w: f64) -> f64 {
    (w.ln() / (alpha as f64).ln()).max(1.0)
}

/// `α·m·log_α W_max·log(max{α·m, α·D·W_max})`
pub fn bound_shape(alpha: u64, m: usize, d: usize, w_max: u128) -> f64 {
    let a = alpha as f64;
    let m = m as f64;
    let w = w_max as f64;
    a * m * log_base(alpha, w) * (a * m).max(a * d as f64 * w).ln()
}

/// `⌈C·α·m·log_α W_max·log(α·m·log_α W_max)⌉`
pub fn contrast_budget(c: f64, alpha: u64, m: usize, w_max: u128) -> u64 {
    let inner = alpha as f64 * m as f64 * log_base(alpha, w_max as f64);
    (c * inner * inner.ln()).ceil() as u64
}

/// Upper median of a non-empty sample.
pub fn median(values: &[u64]) -> u64 {
    let mut v = values.to_vec();
    v.sort_unstable();
    v[v.len() / 2]
}

#[derive(Clone, Debug, PartialEq)]
pub struct CellSummary {
    pub variant: Variant,
    pub algorithm: Algorithm,
    pub m: usize,
    pub d: usize,
    pub alpha: u64,
    pub trials: usize,
    pub successes: usize,
    pub median: u64,
    pub mean: f64,
}

impl CellSummary {
    pub fn success_rate(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }
}

type CellKey = (Variant, Algorithm, usize, usize, u64);

/// Median and mean evaluations per (variant, algorithm, m, D, α), failed
/// trials counted at their budget.
pub fn summarize(records: &[BenchRecord]) -> Vec<CellSummary> {
    let mut cells: BTreeMap<CellKey, Vec<&BenchRecord>> = BTreeMap::new();
    for r in records {
        cells.entry((r.variant, r.algorithm, r.m, r.d, r.alpha)).or_default().push(r);
    }
    cells
        .into_iter()
        .map(|((variant, algorithm, m, d, alpha), rows)| {
            let evals: Vec<u64> = rows.iter().map(|r| r.evaluations).collect();
            CellSummary {
                variant,
                algorithm,
                m,
                d,
                alpha,
                trials: rows.len(),
                successes: rows.iter().filter(|r| r.success).count(),
                median: median(&evals),
                mean: evals.iter().sum::<u64>() as f64 / evals.len() as f64,
            }
        })
        .collect()
}

pub fn write_summary<W: Write>(mut w: W, cells: &[CellSummary]) -> std::io::Result<()> {
    for c in cells {
        writeln!(
            w,
            "# summary variant={} algorithm={} m={} D={} alpha={} trials={} success_rate={:.3} median={} mean={:.1}",
            c.variant,
            c.algorithm,
            c.m,
            c.d,
            c.alpha,
            c.trials,
            c.success_rate(),
            c.median,
            c.mean
        )?;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingPoint {
    pub m: usize,
    pub median: u64,
    pub bound: f64,
    pub ratio: f64,
    pub success_rate: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingRow {
    pub variant: Variant,
    pub algorithm: Algorithm,
    pub d: usize,
    pub alpha: u64,
    pub points: Vec<ScalingPoint>,
    /// Least-squares `c` in `median ≈ c·bound`.
    pub fit: f64,
    /// `max ratio / min ratio`
    pub spread: f64,
    /// The ratio grows strictly at every step in `m`.
    pub super_bound: bool,
}

impl ScalingRow {
    pub fn within_band(&self) -> bool {
        self.spread <= MAX_RATIO_SPREAD
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingReport {
    pub rows: Vec<ScalingRow>,
    /// Groups with fewer than three values of `m`.
    pub skipped: Vec<String>,
}

impl std::fmt::Display for ScalingReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for r in &self.rows {
            writeln!(
                f,
                "{} {} D={} alpha={}: fit c={:.4} spread={:.3} band={} super_bound={}",
                r.variant,
                r.algorithm,
                r.d,
                r.alpha,
                r.fit,
                r.spread,
                if r.within_band() { "ok" } else { "exceeded" },
                r.super_bound
            )?;
            for p in &r.points {
                writeln!(
                    f,
                    "  m={} median={} bound={:.0} ratio={:.5} success_rate={:.3}",
                    p.m, p.median, p.bound, p.ratio, p.success_rate
                )?;
            }
        }
        for s in &self.skipped {
            writeln!(f, "skipped {s}: fewer than three values of m")?;
        }
        Ok(())
    }
}

/// Fits median evaluations against [`bound_shape`] per (variant, algorithm,
/// D, α). `W_max` of a point is the largest in its trials.
pub fn scaling_report(records: &[BenchRecord]) -> Result<ScalingReport, HarnessError> {
    type GroupKey = (Variant, Algorithm, usize, u64);
    let mut groups: BTreeMap<GroupKey, BTreeMap<usize, Vec<&BenchRecord>>> = BTreeMap::new();
    for r in records {
        groups.entry((r.variant, r.algorithm, r.d, r.alpha)).or_default().entry(r.m).or_default().push(r);
    }
    let mut report = ScalingReport { rows: Vec::new(), skipped: Vec::new() };
    for ((variant, algorithm, d, alpha), by_m) in groups {
        if by_m.len() < 3 {
            report.skipped.push(format!("{variant} {algorithm} D={d} alpha={alpha}"));
            continue;
        }
        let points: Vec<ScalingPoint> = by_m
            .into_iter()
            .map(|(m, rows)| {
                let evals: Vec<u64> = rows.iter().map(|r| r.evaluations).collect();
                let w_max = rows.iter().map(|r| r.wmax).max().unwrap_or(1);
                let bound = bound_shape(alpha, m, d, w_max);
                let med = median(&evals);
                ScalingPoint {
                    m,
                    median: med,
                    bound,
                    ratio: med as f64 / bound,
                    success_rate: rows.iter().filter(|r| r.success).count() as f64 / rows.len() as f64,
                }
            })
            .collect();
        let num: f64 = points.iter().map(|p| p.median as f64 * p.bound).sum();
        let den: f64 = points.iter().map(|p| p.bound * p.bound).sum();
        let max = points.iter().map(|p| p.ratio).fold(f64::MIN, f64::max);
        let min = points.iter().map(|p| p.ratio).fold(f64::MAX, f64::min);
        let super_bound = points.windows(2).all(|w| w[1].ratio > w[0].ratio);
        report.rows.push(ScalingRow {
            variant,
            algorithm,
            d,
            alpha,
            fit: num / den,
            spread: if min > 0.0 { max / min } else { f64::INFINITY },
            super_bound,
            points,
        });
    }
    if report.rows.is_empty() {
        return Err(HarnessError::InsufficientData("no group spans three values of m".into()));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(m: usize, evaluations: u64) -> BenchRecord {
        BenchRecord {
            variant: Variant::EdgesRemoved,
            algorithm: Algorithm::Rls,
            m,
            d: 1,
            alpha: 2,
            wmax: 1024,
            seed: 0,
            evaluations,
            success: true,
            wall_ms: 0,
        }
    }

    #[test]
    fn bound_shape_values() {
        // 2·10·10·ln(max(20, 2048))
        let b = bound_shape(2, 10, 1, 1024);
        assert!((b - 200.0 * 2048f64.ln()).abs() < 1e-9);
        // 2·8·8·ln(128)
        let c = contrast_budget(1.0, 2, 8, 256);
        assert_eq!(c, (128.0 * 128f64.ln()).ceil() as u64);
    }

    #[test]
    fn medians() {
        assert_eq!(median(&[5, 1, 3]), 3);
        assert_eq!(median(&[4, 1, 3, 2]), 3);
    }

    #[test]
    fn single_m_is_insufficient() {
        let rows = vec![rec(10, 5), rec(10, 6)];
        assert!(matches!(scaling_report(&rows), Err(HarnessError::InsufficientData(_))));
    }

    #[test]
    fn proportional_data_has_unit_spread() {
        let rows: Vec<_> = [16, 32, 64]
            .into_iter()
            .map(|m| rec(m, (3.0 * bound_shape(2, m, 1, 1024)).round() as u64))
            .collect();
        let report = scaling_report(&rows).unwrap();
        let row = &report.rows[0];
        assert!((row.fit - 3.0).abs() < 1e-3);
        assert!(row.spread < 1.001);
        assert!(row.within_band());
    }

    #[test]
    fn growth_is_flagged() {
        let rows: Vec<_> = [16, 32, 64]
            .into_iter()
            .map(|m| rec(m, ((m * m) as f64 * bound_shape(2, m, 1, 1024)) as u64))
            .collect();
        let row = &scaling_report(&rows).unwrap().rows[0];
        assert!(row.super_bound);
        assert!(!row.within_band());
    }

    #[test]
    fn summary_block() {
        let rows = vec![rec(10, 5), rec(10, 7), rec(10, 6)];
        let cells = summarize(&rows);
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].median, 6);
        let mut out = Vec::new();
        write_summary(&mut out, &cells).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "# summary variant=E- algorithm=rls m=10 D=1 alpha=2 trials=3 success_rate=1.000 median=6 mean=6.0\n"
        );
    }
}
