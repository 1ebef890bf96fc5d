//! Index bookkeeping for the coordinates `y_abc` of a trivector.
//!
//! Triples are 1-based and strictly increasing; their linear rank is 0-based
//! and follows lexicographic order. Pairs `(h, i)`, `h < i`, used by 2-form
//! jets get the same treatment.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A strictly increasing triple `1 <= a < b < c <= 2n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct IndexTriple {
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

impl IndexTriple {
    pub fn new(a: usize, b: usize, c: usize, two_n: usize) -> Result<Self> {
        if !(1 <= a && a < b && b < c && c <= two_n) {
            return Err(Error::IndexOutOfRange(format!(
                "({a},{b},{c}) is not a strictly increasing triple in 1..={two_n}"
            )));
        }
        Ok(Self { a, b, c })
    }

    pub fn as_array(&self) -> [usize; 3] {
        [self.a, self.b, self.c]
    }

    /// Parses `"a,b,c"`.
    pub fn parse_key(key: &str) -> Result<[usize; 3]> {
        let parts: Vec<&str> = key.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("expected \"a,b,c\", got {key:?}")));
        }
        let mut out = [0usize; 3];
        for (slot, p) in out.iter_mut().zip(&parts) {
            *slot = p
                .parse()
                .map_err(|_| Error::Parse(format!("bad index {p:?} in {key:?}")))?;
        }
        Ok(out)
    }

    pub fn key(&self) -> String {
        format!("{},{},{}", self.a, self.b, self.c)
    }
}

impl std::fmt::Display for IndexTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

pub fn check_two_n(two_n: usize) -> Result<()> {
    if two_n < 2 || two_n % 2 != 0 {
        return Err(Error::InvalidDimension(format!(
            "ambient dimension must be even and >= 2, got {two_n}"
        )));
    }
    Ok(())
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// `C(2n, 3)`, the dimension of the space of trivectors.
pub fn lambda3_dim(two_n: usize) -> Result<usize> {
    check_two_n(two_n)?;
    Ok(binomial(two_n, 3))
}

/// `n(2n+1)`, the dimension of sp(2n).
pub fn sp_dim(n: usize) -> Result<usize> {
    if n < 1 {
        return Err(Error::InvalidDimension("n must be >= 1".into()));
    }
    Ok(n * (2 * n + 1))
}

/// All strictly increasing triples in lexicographic order.
pub fn enumerate_triples(two_n: usize) -> Result<Vec<IndexTriple>> {
    check_two_n(two_n)?;
    let mut out = Vec::with_capacity(binomial(two_n, 3));
    for a in 1..=two_n {
        for b in a + 1..=two_n {
            for c in b + 1..=two_n {
                out.push(IndexTriple { a, b, c });
            }
        }
    }
    Ok(out)
}

/// Lexicographic rank of a triple, computed arithmetically.
pub fn rank_triple(t: IndexTriple, two_n: usize) -> Result<usize> {
    check_two_n(two_n)?;
    let t = IndexTriple::new(t.a, t.b, t.c, two_n)?;
    let m = two_n;
    let before_a: usize = (1..t.a).map(|x| binomial(m - x, 2)).sum();
    let before_b: usize = (t.a + 1..t.b).map(|y| m - y).sum();
    Ok(before_a + before_b + (t.c - t.b - 1))
}

pub fn unrank_triple(k: usize, two_n: usize) -> Result<IndexTriple> {
    check_two_n(two_n)?;
    let total = binomial(two_n, 3);
    if k >= total {
        return Err(Error::IndexOutOfRange(format!(
            "rank {k} out of range 0..{total}"
        )));
    }
    let m = two_n;
    let mut rest = k;
    let mut a = 1;
    while rest >= binomial(m - a, 2) {
        rest -= binomial(m - a, 2);
        a += 1;
    }
    let mut b = a + 1;
    while rest >= m - b {
        rest -= m - b;
        b += 1;
    }
    Ok(IndexTriple { a, b, c: b + 1 + rest })
}

/// Sign of the permutation sorting three distinct values, together with the
/// sorted values. `None` if two values coincide.
pub fn sort3_with_sign(mut x: [usize; 3]) -> Option<([usize; 3], i8)> {
    let mut sign = 1i8;
    if x[0] > x[1] {
        x.swap(0, 1);
        sign = -sign;
    }
    if x[1] > x[2] {
        x.swap(1, 2);
        sign = -sign;
    }
    if x[0] > x[1] {
        x.swap(0, 1);
        sign = -sign;
    }
    if x[0] == x[1] || x[1] == x[2] {
        None
    } else {
        Some((x, sign))
    }
}

/// Precomputed triple list with O(1) rank lookup, including lookup of
/// unsorted triples with their permutation sign.
#[derive(Debug, Clone)]
pub struct TripleIndexer {
    two_n: usize,
    triples: Vec<IndexTriple>,
    lookup: Vec<u32>,
}

impl TripleIndexer {
    pub fn new(two_n: usize) -> Result<Self> {
        let triples = enumerate_triples(two_n)?;
        let side = two_n + 1;
        let mut lookup = vec![u32::MAX; side * side * side];
        for (k, t) in triples.iter().enumerate() {
            lookup[(t.a * side + t.b) * side + t.c] = k as u32;
        }
        Ok(Self {
            two_n,
            triples,
            lookup,
        })
    }

    pub fn two_n(&self) -> usize {
        self.two_n
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn triples(&self) -> &[IndexTriple] {
        &self.triples
    }

    pub fn triple(&self, k: usize) -> IndexTriple {
        self.triples[k]
    }

    /// Rank of a sorted triple; panics on invalid input.
    #[inline]
    pub fn index_sorted(&self, a: usize, b: usize, c: usize) -> usize {
        let side = self.two_n + 1;
        let k = self.lookup[(a * side + b) * side + c];
        debug_assert!(k != u32::MAX, "({a},{b},{c}) is not sorted");
        k as usize
    }

    /// Rank and sign of an arbitrary triple of indices in `1..=2n`; `None`
    /// when an index repeats.
    #[inline]
    pub fn index_signed(&self, a: usize, b: usize, c: usize) -> Option<(usize, i8)> {
        let (s, sign) = sort3_with_sign([a, b, c])?;
        Some((self.index_sorted(s[0], s[1], s[2]), sign))
    }

    pub fn rank(&self, t: IndexTriple) -> Result<usize> {
        let t = IndexTriple::new(t.a, t.b, t.c, self.two_n)?;
        Ok(self.index_sorted(t.a, t.b, t.c))
    }
}

/// Number of pairs `h < i` in `1..=2n`.
pub fn pair_count(two_n: usize) -> usize {
    binomial(two_n, 2)
}

/// Lexicographic 0-based rank of a pair `1 <= h < i <= 2n`.
pub fn pair_index(h: usize, i: usize, two_n: usize) -> usize {
    debug_assert!(1 <= h && h < i && i <= two_n);
    (h - 1) * two_n - (h - 1) * h / 2 + (i - h - 1)
}

/// All pairs `h < i` in lexicographic order.
pub fn enumerate_pairs(two_n: usize) -> Vec<(usize, usize)> {
    (1..=two_n)
        .flat_map(|h| (h + 1..=two_n).map(move |i| (h, i)))
        .collect()
}
