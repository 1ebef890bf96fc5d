//! The exact scalar and its `"num/den"` text form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n / d`, reduced. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Always `"num/den"`, including `"0/1"` and `"5/1"`.
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Accepts `"num/den"` or a bare integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Least common multiple of the denominators (1 for an empty input).
pub fn lcm_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// Scales a sparse rational row to a primitive integer row with the same
/// span (denominators cleared, content removed, sign kept).
pub fn primitive_integer_row(row: &[(usize, Rational)]) -> Vec<(usize, BigInt)> {
    let l = lcm_denominators(row.iter().map(|(_, q)| q));
    let mut ints: Vec<(usize, BigInt)> = row
        .iter()
        .map(|(c, q)| (*c, q.numer() * (&l / q.denom())))
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |g, (_, v)| g.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for (_, v) in &mut ints {
            *v /= &g;
        }
    }
    ints
}

pub fn bit_len(x: &BigInt) -> u64 {
    x.abs().bits()
}
