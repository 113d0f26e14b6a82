use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::interval::sign_of_combination;
use super::{Alpha, LpScalar, NumericError, Sign, StepExponent};

/// Exact element `Σ c_k·β^k` of ℚ(β), `β = α^{1/4}`, in canonical coordinates.
///
/// The coordinate vector always has exactly `alpha.basis_dim()` entries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RadicalValue {
    alpha: Alpha,
    coeffs: Vec<BigRational>,
}

impl RadicalValue {
    pub fn zero(alpha: Alpha) -> Self {
        RadicalValue { alpha, coeffs: vec![BigRational::zero(); alpha.basis_dim()] }
    }

    pub fn from_rational(alpha: Alpha, value: BigRational) -> Self {
        let mut v = Self::zero(alpha);
        v.coeffs[0] = value;
        v
    }

    pub fn from_integer(alpha: Alpha, value: impl Into<BigInt>) -> Self {
        Self::from_rational(alpha, BigRational::from_integer(value.into()))
    }

    /// Builds a value from up to four coordinates. Trailing coordinates past
    /// the basis dimension must be zero.
    pub fn from_coeffs(alpha: Alpha, coeffs: Vec<BigRational>) -> Result<Self, NumericError> {
        let dim = alpha.basis_dim();
        if coeffs.len() > 4 {
            return Err(NumericError::CoefficientCount { expected: 4, got: coeffs.len() });
        }
        if let Some(k) = coeffs.iter().skip(dim).position(|c| !c.is_zero()) {
            return Err(NumericError::NonCanonical(k + dim));
        }
        let mut v = Self::zero(alpha);
        for (slot, c) in v.coeffs.iter_mut().zip(coeffs) {
            *slot = c;
        }
        Ok(v)
    }

    /// `β^k`, reduced.
    pub fn monomial(alpha: Alpha, k: u32) -> Self {
        let dim = alpha.basis_dim() as u32;
        let carry = BigInt::from(alpha.beta_power()).pow(k / dim);
        let mut v = Self::zero(alpha);
        v.coeffs[(k % dim) as usize] = BigRational::from_integer(carry);
        v
    }

    /// `α^{q/4}`; this is `β^q` in every basis.
    pub fn step_value(q: StepExponent, alpha: Alpha) -> Self {
        Self::monomial(alpha, q.get())
    }

    pub fn alpha(&self) -> Alpha {
        self.alpha
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coordinates padded with zeros to length four.
    pub fn padded_coeffs(&self) -> [BigRational; 4] {
        std::array::from_fn(|k| self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    fn check(&self, rhs: &Self) -> Result<(), NumericError> {
        if self.alpha != rhs.alpha {
            return Err(NumericError::MixedAlpha(self.alpha.value(), rhs.alpha.value()));
        }
        Ok(())
    }

    /// The value as a non-negative integer below 2^128, if it is one.
    pub fn to_u128(&self) -> Option<u128> {
        if !self.is_rational() || !self.coeffs[0].is_integer() {
            return None;
        }
        self.coeffs[0].numer().to_u128()
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self, NumericError> {
        self.check(rhs)?;
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        Ok(RadicalValue { alpha: self.alpha, coeffs })
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self, NumericError> {
        self.check(rhs)?;
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect();
        Ok(RadicalValue { alpha: self.alpha, coeffs })
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self, NumericError> {
        self.check(rhs)?;
        let dim = self.coeffs.len();
        let reduce = BigRational::from_integer(BigInt::from(self.alpha.beta_power()));
        let mut out = vec![BigRational::zero(); dim];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let prod = a * b;
                if i + j >= dim {
                    out[i + j - dim] += prod * &reduce;
                } else {
                    out[i + j] += prod;
                }
            }
        }
        Ok(RadicalValue { alpha: self.alpha, coeffs: out })
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        RadicalValue { alpha: self.alpha, coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    pub fn signum(&self) -> Sign {
        if self.is_rational() {
            return match self.coeffs[0].numer().sign() {
                num_bigint::Sign::Minus => Sign::Negative,
                num_bigint::Sign::NoSign => Sign::Zero,
                num_bigint::Sign::Plus => Sign::Positive,
            };
        }
        sign_of_combination(&self.coeffs, self.alpha)
    }

    pub fn to_f64(&self) -> f64 {
        let beta = match self.alpha.basis_dim() {
            1 => self.alpha.beta_power() as f64,
            2 => (self.alpha.beta_power() as f64).sqrt(),
            _ => (self.alpha.value() as f64).powf(0.25),
        };
        let mut acc = 0.0;
        let mut power = 1.0;
        for c in &self.coeffs {
            acc += c.to_f64().unwrap_or(f64::NAN) * power;
            power *= beta;
        }
        acc
    }
}

impl fmt::Debug for RadicalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RadicalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if wrote {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let mag = c.abs();
            match k {
                0 => write!(f, "{mag}")?,
                _ if mag.is_one() => write!(f, "β^{k}")?,
                _ => write!(f, "{mag}·β^{k}")?,
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &RadicalValue {
    type Output = RadicalValue;
    fn add(self, rhs: &RadicalValue) -> RadicalValue {
        self.try_add(rhs).expect("mixed step-size rates")
    }
}

impl Sub for &RadicalValue {
    type Output = RadicalValue;
    fn sub(self, rhs: &RadicalValue) -> RadicalValue {
        self.try_sub(rhs).expect("mixed step-size rates")
    }
}

impl Mul for &RadicalValue {
    type Output = RadicalValue;
    fn mul(self, rhs: &RadicalValue) -> RadicalValue {
        self.try_mul(rhs).expect("mixed step-size rates")
    }
}

impl Neg for &RadicalValue {
    type Output = RadicalValue;
    fn neg(self) -> RadicalValue {
        RadicalValue { alpha: self.alpha, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl LpScalar for RadicalValue {
    fn zero(alpha: Alpha) -> Self {
        RadicalValue::zero(alpha)
    }

    fn from_weight(w: u128, alpha: Alpha) -> Self {
        RadicalValue::from_integer(alpha, w)
    }

    fn from_radical(v: &RadicalValue) -> Self {
        v.clone()
    }

    fn step(q: StepExponent, alpha: Alpha) -> Self {
        RadicalValue::step_value(q, alpha)
    }

    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn negated(&self) -> Self {
        -self
    }

    fn times_integer(&self, k: &BigInt) -> Self {
        self.scale(&BigRational::from_integer(k.clone()))
    }

    fn signum(&self) -> Sign {
        RadicalValue::signum(self)
    }

    fn to_f64(&self) -> f64 {
        RadicalValue::to_f64(self)
    }

    fn to_radical(&self, _alpha: Alpha) -> RadicalValue {
        self.clone()
    }

    fn is_zero(&self) -> bool {
        RadicalValue::is_zero(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn two() -> Alpha {
        Alpha::new(2).unwrap()
    }

    fn val(alpha: Alpha, c: &[i64]) -> RadicalValue {
        RadicalValue::from_coeffs(alpha, c.iter().map(|&x| q(x)).collect()).unwrap()
    }

    #[test]
    fn coefficientwise_addition() {
        let a = val(two(), &[1, 1]);
        let b = val(two(), &[2, 0, 0, 3]);
        assert_eq!(&a + &b, val(two(), &[3, 1, 0, 3]));
    }

    #[test]
    fn products_reduce_by_beta_power() {
        let b2 = RadicalValue::monomial(two(), 2);
        let b3 = RadicalValue::monomial(two(), 3);
        assert_eq!(&b2 * &b3, val(two(), &[0, 2]));
    }

    #[test]
    fn degenerate_basis_is_plain_rational() {
        let a = Alpha::new(16).unwrap();
        let v = val(a, &[3]);
        assert_eq!(v.coeffs().len(), 1);
        assert!(v.is_rational());
        assert_eq!(v.to_string(), "3");
        assert!(RadicalValue::from_coeffs(a, vec![q(3), q(1)]).is_err());
        assert!(RadicalValue::from_coeffs(a, vec![q(3), q(0), q(0), q(0)]).is_ok());
    }

    #[test]
    fn mixed_alpha_rejected() {
        let a = RadicalValue::from_integer(two(), 1);
        let b = RadicalValue::from_integer(Alpha::new(3).unwrap(), 1);
        assert_eq!(a.try_add(&b), Err(NumericError::MixedAlpha(2, 3)));
        assert!(a.try_mul(&b).is_err());
    }

    #[test]
    fn signs() {
        assert_eq!(RadicalValue::zero(two()).signum(), Sign::Zero);
        assert_eq!(val(two(), &[-2, 0, 0, 1]).signum(), Sign::Negative);
        assert_eq!(val(two(), &[-1, 1]).signum(), Sign::Positive);
        // β² = √2 vs 1.4142: distinguishes at the fifth decimal
        let v = RadicalValue::from_coeffs(
            two(),
            vec![BigRational::new((-14142).into(), 10000.into()), q(0), q(1)],
        )
        .unwrap();
        assert_eq!(v.signum(), Sign::Positive);
    }

    #[test]
    fn step_values() {
        let a = two();
        let s = |n| RadicalValue::step_value(StepExponent::new(n, 100).unwrap(), a);
        assert_eq!(s(0), val(a, &[1]));
        assert_eq!(s(4), val(a, &[2]));
        assert_eq!(s(5), val(a, &[0, 2]));
        let nine = Alpha::new(9).unwrap();
        // 9^{3/4} = 3·√3
        assert_eq!(
            RadicalValue::step_value(StepExponent::new(3, 8).unwrap(), nine),
            val(nine, &[0, 3])
        );
    }

    #[test]
    fn display_formats_terms() {
        assert_eq!(val(two(), &[3, 1, 0, -3]).to_string(), "3 + β^1 - 3·β^3");
        assert_eq!(val(two(), &[0, 0, -1]).to_string(), "-β^2");
    }
}
