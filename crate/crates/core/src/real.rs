//! Numeric modes.
//!
//! Every probability-side computation is generic over [`Real`], which is
//! implemented for `f64` (the default, log-space factorials and compensated
//! sums) and for [`BigRational`] (exact arithmetic with big-integer
//! factorials, used for oracle-grade checks).

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, ToPrimitive, Zero};
use statrs::function::factorial::ln_factorial;

/// Tolerance on `Σ p(X) = 1` accepted by floating point constructors.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;

/// Scalar type used for probabilities.
pub trait Real:
    Clone + Debug + PartialEq + PartialOrd + Num + FromPrimitive + Send + Sync + 'static
{
    /// Summation strategy for many terms.
    type Accumulator: Accumulator<Self>;

    fn to_f64(&self) -> f64;

    /// Whether a computed total is acceptable as "sums to one".
    fn is_unit_sum(sum: &Self) -> bool;

    fn from_count(k: u64) -> Self;

    /// Parses a decimal literal such as `0.25` or `1e-3`. Rational mode
    /// keeps the decimal value exactly.
    fn parse_decimal(text: &str) -> Option<Self>;

    /// `self^k` with `0^0 = 1`.
    fn powu(&self, k: u64) -> Self;

    /// `total! / Π k! · Π p^k` over `(k, p)` parts. Parts must sum to `total`.
    fn multinomial(total: u64, parts: &[(u64, &Self)]) -> Self;

    fn is_negative(&self) -> bool {
        *self < Self::zero()
    }
}

pub trait Accumulator<T>: Default {
    fn add(&mut self, value: T);
    fn total(self) -> T;
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl Accumulator<f64> for CompensatedSum {
    fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(self) -> f64 {
        self.sum + self.compensation
    }
}

#[derive(Debug, Default, Clone)]
pub struct ExactSum(BigRational);

impl Accumulator<BigRational> for ExactSum {
    fn add(&mut self, value: BigRational) {
        self.0 += value;
    }

    fn total(self) -> BigRational {
        self.0
    }
}

impl Real for f64 {
    type Accumulator = CompensatedSum;

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_unit_sum(sum: &Self) -> bool {
        (sum - 1.0).abs() <= NORMALIZATION_TOLERANCE
    }

    fn from_count(k: u64) -> Self {
        k as f64
    }

    fn parse_decimal(text: &str) -> Option<Self> {
        text.trim().parse().ok()
    }

    fn powu(&self, k: u64) -> Self {
        if k == 0 {
            1.0
        } else if k <= i32::MAX as u64 {
            self.powi(k as i32)
        } else {
            self.powf(k as f64)
        }
    }

    fn multinomial(total: u64, parts: &[(u64, &Self)]) -> Self {
        let mut log = ln_factorial(total);
        for &(k, p) in parts {
            if k == 0 {
                continue;
            }
            if *p == 0.0 {
                return 0.0;
            }
            log += k as f64 * p.ln() - ln_factorial(k);
        }
        log.exp()
    }
}

impl Real for BigRational {
    type Accumulator = ExactSum;

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_unit_sum(sum: &Self) -> bool {
        sum.is_one()
    }

    fn from_count(k: u64) -> Self {
        BigRational::from_integer(BigInt::from(k))
    }

    fn parse_decimal(text: &str) -> Option<Self> {
        parse_exact_decimal(text)
    }

    fn powu(&self, k: u64) -> Self {
        let mut out = BigRational::one();
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                out *= &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        out
    }

    fn multinomial(total: u64, parts: &[(u64, &Self)]) -> Self {
        let mut coefficient = factorial(total);
        let mut product = BigRational::one();
        for &(k, p) in parts {
            if k == 0 {
                continue;
            }
            if p.is_zero() {
                return BigRational::zero();
            }
            coefficient /= factorial(k);
            product *= p.powu(k);
        }
        product * BigRational::from_integer(coefficient)
    }
}

fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Exact value of a JSON-style decimal literal.
fn parse_exact_decimal(text: &str) -> Option<BigRational> {
    let text = text.trim();
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i64>().ok()?),
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.find('.') {
        Some(i) => (&digits[..i], &digits[i + 1..]),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let numerator = BigInt::from_str_radix(&all_digits, 10).ok()?;
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10u32);
    let magnitude = if scale >= 0 {
        BigRational::from_integer(numerator * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numerator, num_traits::pow(ten, (-scale) as usize))
    };
    Some(if negative { -magnitude } else { magnitude })
}

#[cfg(test)]
pub(crate) fn rational(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}
