use std::fmt;

use num_bigint::BigInt;

use crate::dual::DualSolution;
use crate::numeric::{LpScalar, RadicalValue};
use crate::oracle;

/// Independent check of a dual solution on its graph.
#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub feasible: bool,
    pub maximal: bool,
    /// Weight of the tight vertices, when the solution is an MFDS.
    pub cover_weight: Option<BigInt>,
    /// `2·Σ_e Y(e)` as the exact value.
    pub twice_dual: RadicalValue,
    pub within_factor_two: bool,
    /// Minimum cover weight, for graphs small enough for the exact oracle.
    pub optimum: Option<u128>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.feasible && self.maximal && self.within_factor_two
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "feasible: {}", if self.feasible { "yes" } else { "no (infeasible)" })?;
        writeln!(f, "maximal: {}", if self.maximal { "yes" } else { "no" })?;
        match &self.cover_weight {
            Some(w) => writeln!(f, "cover-weight: {w}")?,
            None => writeln!(f, "cover-weight: n/a")?,
        }
        writeln!(f, "2*sum-y: {} (~{:.6})", self.twice_dual, self.twice_dual.to_f64())?;
        writeln!(f, "within-factor-two: {}", if self.within_factor_two { "yes" } else { "no" })?;
        if let Some(opt) = self.optimum {
            writeln!(f, "optimum: {opt}")?;
        }
        write!(f, "verdict: {}", if self.passed() { "pass" } else { "fail" })
    }
}

pub fn verify(y: &DualSolution<RadicalValue>) -> Verdict {
    let g = y.graph();
    let alpha = y.alpha();
    let feasible = oracle::validate_feasible_naive(g, y.values(), alpha);
    let maximal = oracle::validate_mfds_naive(g, y.values(), alpha);
    let cert = y.extract_cover().ok().filter(|_| maximal);
    let twice_dual = y.total().plus(y.total());
    let optimum = oracle::exact_min_wvc(g).ok().map(|r| r.weight);
    Verdict {
        feasible,
        maximal,
        within_factor_two: cert.as_ref().is_some_and(|c| c.holds()),
        cover_weight: cert.map(|c| c.weight),
        twice_dual,
        optimum,
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::graph::WeightedGraph;
    use crate::numeric::Alpha;

    fn solution(values: &[i64]) -> DualSolution<RadicalValue> {
        let a = Alpha::new(2).unwrap();
        let g = Arc::new(WeightedGraph::new(vec![3, 5, 2], [(0, 1), (1, 2)]).unwrap());
        DualSolution::from_values(g, a, 5, values.iter().map(|&v| RadicalValue::from_integer(a, v)).collect())
            .unwrap()
    }

    #[test]
    fn greedy_solution_passes() {
        let v = verify(&solution(&[3, 2]));
        assert!(v.passed());
        assert_eq!(v.cover_weight, Some(BigInt::from(10)));
        assert_eq!(v.optimum, Some(5));
    }

    #[test]
    fn inflated_value_is_infeasible() {
        let v = verify(&solution(&[4, 2]));
        assert!(!v.feasible);
        assert!(!v.passed());
        assert!(v.to_string().contains("infeasible"));
    }

    #[test]
    fn non_maximal_fails() {
        let v = verify(&solution(&[1, 1]));
        assert!(v.feasible && !v.maximal && !v.passed());
    }
}
