//! Sign decision for `Σ c_k·β^k` by dyadic interval refinement.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Alpha, Sign};

const START_BITS: u32 = 32;

/// Integers `(lo, lo + 1)` with `lo/2^bits ≤ β < (lo+1)/2^bits`.
pub fn beta_bounds(alpha: Alpha, bits: u32) -> (BigInt, BigInt) {
    let dim = alpha.basis_dim() as u32;
    let scaled = BigInt::from(alpha.beta_power()) << (dim * bits) as usize;
    let lo = scaled.nth_root(dim);
    let hi = &lo + 1u32;
    (lo, hi)
}

/// Sign of a value whose coordinates are not all zero and not purely rational.
///
/// The canonical basis is linearly independent over ℚ, so the represented
/// real is nonzero and the refinement loop terminates.
pub(super) fn sign_of_combination(coeffs: &[BigRational], alpha: Alpha) -> Sign {
    let ints = clear_denominators(coeffs);
    let mut bits = START_BITS;
    loop {
        if let Some(sign) = sign_at_precision(&ints, alpha, bits) {
            return sign;
        }
        bits *= 2;
    }
}

fn clear_denominators(coeffs: &[BigRational]) -> Vec<BigInt> {
    let lcm = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    coeffs
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect()
}

/// Encloses `2^{(dim-1)·bits} · Σ a_k β^k` and reports its sign when the
/// enclosure excludes zero.
fn sign_at_precision(ints: &[BigInt], alpha: Alpha, bits: u32) -> Option<Sign> {
    let dim = ints.len();
    let (lo, hi) = beta_bounds(alpha, bits);
    let mut lower = BigInt::zero();
    let mut upper = BigInt::zero();
    let mut lo_pow = BigInt::one();
    let mut hi_pow = BigInt::one();
    for (k, a) in ints.iter().enumerate() {
        let shift = ((dim - 1 - k) as u32 * bits) as usize;
        let a_lo = (a * &lo_pow) << shift;
        let a_hi = (a * &hi_pow) << shift;
        if a.sign() == num_bigint::Sign::Minus {
            lower += a_hi;
            upper += a_lo;
        } else {
            lower += a_lo;
            upper += a_hi;
        }
        lo_pow *= &lo;
        hi_pow *= &hi;
    }
    if lower.sign() == num_bigint::Sign::Plus {
        Some(Sign::Positive)
    } else if upper.sign() == num_bigint::Sign::Minus {
        Some(Sign::Negative)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_bracket_fourth_root_of_two() {
        let a = Alpha::new(2).unwrap();
        let (lo, hi) = beta_bounds(a, 20);
        let scale = 2f64.powi(20);
        let lo = lo.to_string().parse::<f64>().unwrap() / scale;
        let hi = hi.to_string().parse::<f64>().unwrap() / scale;
        let beta = 2f64.powf(0.25);
        assert!(lo <= beta && beta < hi);
    }

    #[test]
    fn bounds_for_quadratic_rate() {
        // α = 9, β = √3
        let a = Alpha::new(9).unwrap();
        let (lo, _) = beta_bounds(a, 10);
        assert_eq!(lo, BigInt::from((3f64.sqrt() * 1024.0).floor() as i64));
    }
}
