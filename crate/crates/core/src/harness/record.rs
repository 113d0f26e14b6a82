use std::io::{Read, Write};

use super::HarnessError;
use crate::graph::Variant;
use crate::heuristics::Algorithm;

pub const CSV_HEADER: [&str; 10] =
    ["variant", "algorithm", "m", "D", "alpha", "wmax", "seed", "evaluations", "success", "wall_ms"];

/// One trial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchRecord {
    pub variant: Variant,
    pub algorithm: Algorithm,
    /// Nominal edge count of the cell.
    pub m: usize,
    /// Edit scale.
    pub d: usize,
    pub alpha: u64,
    pub wmax: u128,
    pub seed: u64,
    pub evaluations: u64,
    pub success: bool,
    pub wall_ms: u64,
}

/// `α^k=<decimal>` when `w = α^k`, `α^k` alone past 64 bits, otherwise
/// the plain decimal.
pub fn format_wmax(alpha: u64, w: u128) -> String {
    let mut k = 0;
    let mut p: u128 = 1;
    while p < w {
        match p.checked_mul(alpha as u128) {
            Some(next) => {
                p = next;
                k += 1;
            }
            None => break,
        }
    }
    if p != w {
        return w.to_string();
    }
    if w <= u64::MAX as u128 {
        format!("{alpha}^{k}={w}")
    } else {
        format!("{alpha}^{k}")
    }
}

pub fn parse_wmax(text: &str) -> Option<u128> {
    if let Some((_, dec)) = text.split_once('=') {
        return dec.parse().ok();
    }
    if let Some((a, k)) = text.split_once('^') {
        let a: u128 = a.parse().ok()?;
        return a.checked_pow(k.parse().ok()?);
    }
    text.parse().ok()
}

impl BenchRecord {
    fn fields(&self) -> [String; 10] {
        [
            self.variant.to_string(),
            self.algorithm.to_string(),
            self.m.to_string(),
            self.d.to_string(),
            self.alpha.to_string(),
            format_wmax(self.alpha, self.wmax),
            self.seed.to_string(),
            self.evaluations.to_string(),
            self.success.to_string(),
            self.wall_ms.to_string(),
        ]
    }

    fn from_fields(rec: &csv::StringRecord) -> Result<Self, HarnessError> {
        let bad = |what: &str| HarnessError::Record(format!("bad {what} in {rec:?}"));
        if rec.len() != CSV_HEADER.len() {
            return Err(bad("field count"));
        }
        let num = |i: usize, what: &str| rec[i].parse::<u64>().map_err(|_| bad(what));
        Ok(BenchRecord {
            variant: rec[0].parse().map_err(|_| bad("variant"))?,
            algorithm: rec[1].parse().map_err(|_| bad("algorithm"))?,
            m: num(2, "m")? as usize,
            d: num(3, "D")? as usize,
            alpha: num(4, "alpha")?,
            wmax: parse_wmax(&rec[5]).ok_or_else(|| bad("wmax"))?,
            seed: num(6, "seed")?,
            evaluations: num(7, "evaluations")?,
            success: rec[8].parse().map_err(|_| bad("success"))?,
            wall_ms: num(9, "wall_ms")?,
        })
    }
}

pub fn write_header<W: Write>(w: &mut csv::Writer<W>) -> Result<(), HarnessError> {
    w.write_record(CSV_HEADER)?;
    Ok(())
}

pub fn write_records<W: Write>(w: &mut csv::Writer<W>, rows: &[BenchRecord]) -> Result<(), HarnessError> {
    for r in rows {
        w.write_record(r.fields())?;
    }
    Ok(())
}

/// Reads a bench CSV, skipping `#` comment lines.
pub fn read_records<R: Read>(r: R) -> Result<Vec<BenchRecord>, HarnessError> {
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(r);
    let header = reader.headers()?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(HarnessError::Record(format!("unexpected header {header:?}")));
    }
    reader.records().map(|rec| BenchRecord::from_fields(&rec?)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wmax_formats() {
        assert_eq!(format_wmax(2, 4096), "2^12=4096");
        assert_eq!(format_wmax(3, 1), "3^0=1");
        assert_eq!(format_wmax(2, 1000), "1000");
        assert_eq!(format_wmax(2, 1u128 << 80), "2^80");
        for text in ["2^12=4096", "2^80", "1000"] {
            let w = parse_wmax(text).unwrap();
            assert_eq!(format_wmax(2, w), text);
        }
    }

    #[test]
    fn csv_round_trip() {
        let rec = BenchRecord {
            variant: Variant::EdgesRemoved,
            algorithm: Algorithm::RlsFifth,
            m: 10,
            d: 1,
            alpha: 2,
            wmax: 1024,
            seed: 7,
            evaluations: 123,
            success: true,
            wall_ms: 4,
        };
        let mut w = csv::Writer::from_writer(Vec::new());
        write_header(&mut w).unwrap();
        write_records(&mut w, std::slice::from_ref(&rec)).unwrap();
        let mut bytes = w.into_inner().unwrap();
        bytes.extend_from_slice(b"# trailing comment\n");
        let text = String::from_utf8(bytes.clone()).unwrap();
        assert!(text.starts_with("variant,algorithm,m,D,alpha,wmax,seed,evaluations,success,wall_ms\nE-,rls-fifth,10,1,2,2^10=1024,7,123,true,4\n"));
        assert_eq!(read_records(bytes.as_slice()).unwrap(), vec![rec]);
    }

    #[test]
    fn wrong_header_rejected() {
        assert!(read_records("a,b\n1,2\n".as_bytes()).is_err());
    }
}
