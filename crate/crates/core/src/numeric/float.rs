use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::{Alpha, LpScalar, RadicalValue, Sign, StepExponent};

/// Absolute tolerance for float sign decisions.
pub const FLOAT_TOLERANCE: f64 = 1.0 / (1u64 << 20) as f64;

/// Binary64 approximation of a value in ℚ(α^{1/4}).
///
/// Signs within [`FLOAT_TOLERANCE`] of zero resolve to [`Sign::Zero`] unless an
/// exact counterpart is supplied to [`FloatValue::sign_or_escalate`].
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct FloatValue(pub f64);

impl FloatValue {
    pub fn sign_or_escalate(self, exact: Option<&RadicalValue>) -> Sign {
        if self.0.abs() > FLOAT_TOLERANCE {
            return if self.0 > 0.0 { Sign::Positive } else { Sign::Negative };
        }
        match exact {
            Some(v) => v.signum(),
            None => Sign::Zero,
        }
    }
}

impl LpScalar for FloatValue {
    fn zero(_alpha: Alpha) -> Self {
        FloatValue(0.0)
    }

    fn from_weight(w: u128, _alpha: Alpha) -> Self {
        FloatValue(w as f64)
    }

    fn from_radical(v: &RadicalValue) -> Self {
        FloatValue(v.to_f64())
    }

    fn step(q: StepExponent, alpha: Alpha) -> Self {
        let q = q.get();
        let whole = (alpha.value() as f64).powi((q / 4) as i32);
        let frac = match q % 4 {
            0 => 1.0,
            r => (alpha.value() as f64).powf(r as f64 / 4.0),
        };
        FloatValue(whole * frac)
    }

    fn plus(&self, rhs: &Self) -> Self {
        FloatValue(self.0 + rhs.0)
    }

    fn minus(&self, rhs: &Self) -> Self {
        FloatValue(self.0 - rhs.0)
    }

    fn negated(&self) -> Self {
        FloatValue(-self.0)
    }

    fn times_integer(&self, k: &BigInt) -> Self {
        FloatValue(self.0 * k.to_f64().unwrap_or(f64::INFINITY))
    }

    fn signum(&self) -> Sign {
        self.sign_or_escalate(None)
    }

    fn to_f64(&self) -> f64 {
        self.0
    }

    fn to_radical(&self, alpha: Alpha) -> RadicalValue {
        let r = BigRational::from_float(self.0).expect("finite float");
        RadicalValue::from_rational(alpha, r)
    }
}
