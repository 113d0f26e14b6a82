//! Exact arithmetic over ℚ(α^{1/4}) plus a binary floating-point mirror.
//!
//! Every LP value, load and fitness difference produced by the heuristics is a
//! finite sum of step sizes `α^{q/4}` and integer weights, so it lives in the
//! number field generated by the fourth root of the step-size rate. The
//! [`RadicalValue`] type represents such numbers by their canonical coordinate
//! vector, which makes equality a coefficient comparison and lets sign
//! decisions be made without rounding error.
//!
//! The heuristics are generic over [`LpScalar`], implemented by the exact
//! [`RadicalValue`] and by the approximate [`FloatValue`].

mod float;
mod interval;
mod radical;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Roots;

pub use float::{FloatValue, FLOAT_TOLERANCE};
pub use interval::beta_bounds;
pub use radical::RadicalValue;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumericError {
    #[error("step-size rate must be at least 2, got {0}")]
    AlphaTooSmall(u64),
    #[error("operands use different step-size rates ({0} and {1})")]
    MixedAlpha(u64, u64),
    #[error("step exponent {q} exceeds the cap {max}")]
    ExponentOutOfRange { q: u32, max: u32 },
    #[error("expected at most {expected} coefficients, got {got}")]
    CoefficientCount { expected: usize, got: usize },
    #[error("coefficient of β^{0} must be zero for this rate")]
    NonCanonical(usize),
}

/// Integer rate of step-size change together with the canonical degree of
/// `β = α^{1/4}` over the rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Alpha {
    value: u64,
    basis_dim: u8,
    beta_power: u64,
}

impl Alpha {
    /// Classifies `alpha` by integer root extraction: fourth powers give a
    /// rational β (dimension 1), squares a quadratic β (dimension 2), and
    /// everything else a quartic β (dimension 4).
    pub fn new(alpha: u64) -> Result<Self, NumericError> {
        if alpha < 2 {
            return Err(NumericError::AlphaTooSmall(alpha));
        }
        let fourth = alpha.nth_root(4);
        if fourth.pow(4) == alpha {
            return Ok(Alpha { value: alpha, basis_dim: 1, beta_power: fourth });
        }
        let root = alpha.sqrt();
        if root * root == alpha {
            return Ok(Alpha { value: alpha, basis_dim: 2, beta_power: root });
        }
        Ok(Alpha { value: alpha, basis_dim: 4, beta_power: alpha })
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn basis_dim(self) -> usize {
        self.basis_dim as usize
    }

    /// The integer `β^{basis_dim}` used to reduce products.
    pub fn beta_power(self) -> u64 {
        self.beta_power
    }

    /// Smallest `k` with `α^k ≥ w`, i.e. `⌈log_α w⌉` for `w ≥ 1`.
    pub fn ceil_log(self, w: u128) -> u32 {
        let a = self.value as u128;
        let mut k = 0;
        let mut power: u128 = 1;
        while power < w {
            power = power.saturating_mul(a);
            k += 1;
        }
        k
    }

    /// Cap on the quarter-exponent: `4·(⌈log_α W_max⌉ + 1)`.
    pub fn max_exponent(self, w_max: u128) -> u32 {
        4 * (self.ceil_log(w_max) + 1)
    }

    /// `α^k` when it fits in 128 bits.
    pub fn checked_pow(self, k: u32) -> Option<u128> {
        (self.value as u128).checked_pow(k)
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Quarter-exponent `q` of a step size `σ = α^{q/4}`, bounded by a cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StepExponent(u32);

impl StepExponent {
    pub const ONE: StepExponent = StepExponent(0);

    pub fn new(q: u32, max: u32) -> Result<Self, NumericError> {
        if q > max {
            return Err(NumericError::ExponentOutOfRange { q, max });
        }
        Ok(StepExponent(q))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }
}

/// Arithmetic needed by the dual-solution layer and the heuristics.
///
/// `plus`/`minus` assume both operands were built for the same [`Alpha`].
pub trait LpScalar: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    fn zero(alpha: Alpha) -> Self;
    fn from_weight(w: u128, alpha: Alpha) -> Self;
    fn from_radical(v: &RadicalValue) -> Self;
    /// The step size `α^{q/4}`.
    fn step(q: StepExponent, alpha: Alpha) -> Self;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
    fn times_integer(&self, k: &BigInt) -> Self;
    fn signum(&self) -> Sign;
    fn to_f64(&self) -> f64;
    fn to_radical(&self, alpha: Alpha) -> RadicalValue;

    fn is_zero(&self) -> bool {
        self.signum() == Sign::Zero
    }

    fn abs(&self) -> Self {
        if self.signum() == Sign::Negative {
            self.negated()
        } else {
            self.clone()
        }
    }

    /// `max{self, 0}`
    fn clamp_non_negative(self, alpha: Alpha) -> Self {
        if self.signum() == Sign::Negative {
            Self::zero(alpha)
        } else {
            self
        }
    }
}
