//! Rank over a prime field `Z/p`, `p < 2^63`.
//!
//! The image of a rational matrix mod `p` never has larger rank than the
//! matrix itself, so a modular rank is a certified lower bound. When it
//! reaches `min(rows, cols)` it is exact.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

use super::matrix::ExactMatrix;
use super::rational::Rational;
use crate::error::{Error, Result};

/// `2^62 - 57`, the largest prime below `2^62`.
pub const DEFAULT_PRIME: u64 = 4_611_686_018_427_387_847;

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A uniformly drawn prime in `[2^61, 2^62)`.
pub fn random_prime_62<R: Rng + ?Sized>(rng: &mut R) -> u64 {
    loop {
        let candidate = rng.gen_range((1u64 << 61)..(1u64 << 62)) | 1;
        if is_prime_u64(candidate) {
            return candidate;
        }
    }
}

pub fn inv_mod(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        None
    } else {
        Some(pow_mod(a, p - 2, p))
    }
}

/// Reduction of a big integer into `[0, p)`.
pub fn reduce_bigint(x: &BigInt, p: u64) -> u64 {
    let r = x % BigInt::from(p);
    let r = if r < BigInt::zero() { r + p } else { r };
    r.to_u64().expect("residue fits in u64")
}

/// Image of a rational mod `p`.
pub fn reduce_rational(q: &Rational, p: u64) -> Result<u64> {
    let den = reduce_bigint(q.denom(), p);
    let inv = inv_mod(den, p).ok_or(Error::PrimeDividesDenominator { prime: p })?;
    Ok(mul_mod(reduce_bigint(q.numer(), p), inv, p))
}

/// Montgomery arithmetic for odd `p < 2^62`.
#[derive(Debug, Clone, Copy)]
struct Montgomery {
    p: u64,
    /// `-p^{-1} mod 2^64`
    neg_inv: u64,
    /// `2^128 mod p`
    r2: u64,
}

impl Montgomery {
    fn new(p: u64) -> Self {
        debug_assert!(p % 2 == 1 && p < (1 << 62));
        let mut inv: u64 = 1;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = mul_mod(r, r, p);
        Self {
            p,
            neg_inv: inv.wrapping_neg(),
            r2,
        }
    }

    /// `a * b * 2^-64 mod p` for `a, b < p`.
    #[inline(always)]
    fn redc_mul(&self, a: u64, b: u64) -> u64 {
        let t = a as u128 * b as u128;
        let m = (t as u64).wrapping_mul(self.neg_inv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    fn to_mont(&self, a: u64) -> u64 {
        self.redc_mul(a, self.r2)
    }
}

/// Incremental row-echelon basis over `Z/p`. Each stored row has its pivot
/// normalized to 1 and zeros before it.
struct EchelonBasis {
    p: u64,
    cols: usize,
    mont: Option<Montgomery>,
    pivot_of_col: Vec<Option<usize>>,
    rows: Vec<Vec<u64>>,
}

impl EchelonBasis {
    fn new(p: u64, cols: usize) -> Self {
        let mont = (p % 2 == 1 && p < (1 << 62)).then(|| Montgomery::new(p));
        Self {
            p,
            cols,
            mont,
            pivot_of_col: vec![None; cols],
            rows: Vec::new(),
        }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `row` against the basis; keeps it if it is independent.
    fn insert(&mut self, mut row: Vec<u64>) -> bool {
        let p = self.p;
        for c in 0..self.cols {
            let x = row[c];
            if x == 0 {
                continue;
            }
            match self.pivot_of_col[c] {
                Some(k) => {
                    let basis_row = &self.rows[k];
                    let f = p - x;
                    match self.mont {
                        Some(m) => {
                            let fm = m.to_mont(f);
                            for j in c..self.cols {
                                let b = basis_row[j];
                                if b != 0 {
                                    let s = row[j] + m.redc_mul(fm, b);
                                    row[j] = if s >= p { s - p } else { s };
                                }
                            }
                        }
                        None => {
                            for j in c..self.cols {
                                let b = basis_row[j];
                                if b != 0 {
                                    let s = (row[j] as u128 + mul_mod(f, b, p) as u128) % p as u128;
                                    row[j] = s as u64;
                                }
                            }
                        }
                    }
                    debug_assert_eq!(row[c], 0);
                }
                None => {
                    let inv = inv_mod(x, p).expect("nonzero residue is invertible");
                    for v in row[c..].iter_mut() {
                        if *v != 0 {
                            *v = mul_mod(*v, inv, p);
                        }
                    }
                    self.pivot_of_col[c] = Some(self.rows.len());
                    self.rows.push(row);
                    return true;
                }
            }
        }
        false
    }
}

/// Deterministic visiting order of `0..n`: a stride permutation with a
/// stride coprime to `n` near `0.618 n`. Spreads consecutive (structurally
/// similar) rows apart so that full rank is typically reached early.
fn stride_order(n: usize) -> impl Iterator<Item = usize> {
    let mut stride = ((n as f64) * 0.618_033_988_75) as usize;
    stride = stride.max(1);
    while n > 1 && num_integer::gcd(stride, n) != 1 {
        stride += 1;
    }
    (0..n).map(move |k| (k * stride) % n.max(1))
}

/// Rank of the image of `m` in `Z/p`.
///
/// Fails with [`Error::PrimeDividesDenominator`] when `p` divides a stored
/// denominator; callers re-draw the prime.
pub fn modular_rank<M: ExactMatrix + ?Sized>(m: &M, p: u64) -> Result<usize> {
    Ok(independent_rows(m, p)?.len())
}

/// Indices of rows of `m` that are linearly independent modulo `p`, hence
/// also over the rationals; as many as the rank of `m` mod `p`.
pub fn independent_rows<M: ExactMatrix + ?Sized>(m: &M, p: u64) -> Result<Vec<usize>> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    let (rows, cols) = (m.nrows(), m.ncols());
    let cap = rows.min(cols);
    let mut basis = EchelonBasis::new(p, cols);
    let mut picked = Vec::new();
    for r in stride_order(rows) {
        if basis.rank() == cap {
            break;
        }
        let mut dense = vec![0u64; cols];
        for (c, q) in m.row_nonzeros(r) {
            dense[c] = reduce_rational(&q, p)?;
        }
        if basis.insert(dense) {
            picked.push(r);
        }
    }
    picked.sort_unstable();
    Ok(picked)
}
