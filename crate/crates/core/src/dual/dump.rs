//! Text dump of exact dual solutions.
//!
//! ```text
//! # alpha=2
//! 0 3/1 0/1 0/1 0/1
//! 1 1/2 1/1 0/1 0/1
//! ```
//!
//! One line per edge: the edge id followed by the four coordinates
//! `c0 c1 c2 c3` of `Σ c_k·β^k` as `p/q` rationals. Lines starting with `#`
//! are comments; `# alpha=<k>` names the step-size rate.

use std::io::{BufRead, Write};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{DualError, DualSolution};
use crate::graph::WeightedGraph;
use crate::numeric::{Alpha, NumericError, RadicalValue};

#[derive(Debug, thiserror::Error)]
pub enum DumpError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("no step-size rate given in the dump or by the caller")]
    MissingAlpha,
    #[error("dump is for alpha={found}, expected {expected}")]
    AlphaMismatch { found: u64, expected: u64 },
    #[error("edge {0} missing from dump")]
    MissingEdge(usize),
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Dual(#[from] DualError),
}

pub fn write_dump(mut w: impl Write, y: &DualSolution<RadicalValue>) -> std::io::Result<()> {
    writeln!(w, "# alpha={}", y.alpha())?;
    for (i, value) in y.values().iter().enumerate() {
        write!(w, "{i}")?;
        for c in value.padded_coeffs() {
            write!(w, " {}/{}", c.numer(), c.denom())?;
        }
        writeln!(w)?;
    }
    Ok(())
}

fn parse_rational(token: &str) -> Option<BigRational> {
    let (p, q) = match token.split_once('/') {
        Some((p, q)) => (p.parse::<BigInt>().ok()?, q.parse::<BigInt>().ok()?),
        None => (token.parse::<BigInt>().ok()?, BigInt::from(1)),
    };
    if q == BigInt::from(0) {
        return None;
    }
    Some(BigRational::new(p, q))
}

/// Reads a dump for `graph`. The rate comes from the `# alpha=` header when
/// present, otherwise from `alpha`; if both are given they must agree.
pub fn read_dump(
    r: impl BufRead,
    graph: Arc<WeightedGraph>,
    w_max: u128,
    alpha: Option<Alpha>,
) -> Result<DualSolution<RadicalValue>, DumpError> {
    let mut header: Option<Alpha> = None;
    let mut rows: Vec<(usize, usize, Vec<BigRational>)> = Vec::new();
    for (no, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        let parse_err = |msg: &str| DumpError::Parse { line: no + 1, msg: msg.to_string() };
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(a) = comment.trim().strip_prefix("alpha=") {
                let a: u64 = a.trim().parse().map_err(|_| parse_err("bad alpha"))?;
                header = Some(Alpha::new(a)?);
            }
            continue;
        }
        let mut tokens = line.split_whitespace();
        let id: usize = tokens
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| parse_err("bad edge id"))?;
        let coeffs = tokens
            .map(parse_rational)
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| parse_err("bad coefficient"))?;
        if coeffs.is_empty() || coeffs.len() > 4 {
            return Err(parse_err("expected one to four coefficients"));
        }
        rows.push((no + 1, id, coeffs));
    }
    let alpha = match (header, alpha) {
        (Some(h), Some(a)) if h != a => {
            return Err(DumpError::AlphaMismatch { found: h.value(), expected: a.value() })
        }
        (Some(a), _) | (None, Some(a)) => a,
        (None, None) => return Err(DumpError::MissingAlpha),
    };
    let m = graph.edge_count();
    let mut values: Vec<Option<RadicalValue>> = vec![None; m];
    for (line, id, coeffs) in rows {
        let slot = values
            .get_mut(id)
            .ok_or_else(|| DumpError::Parse { line, msg: format!("edge id {id} out of range") })?;
        if slot.is_some() {
            return Err(DumpError::Parse { line, msg: format!("edge id {id} repeated") });
        }
        *slot = Some(RadicalValue::from_coeffs(alpha, coeffs)?);
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or(DumpError::MissingEdge(i)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DualSolution::from_values(graph, alpha, w_max, values)?)
}
