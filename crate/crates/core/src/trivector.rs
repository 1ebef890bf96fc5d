//! Trivectors `θ ∈ Λ³V*` and first jets of 2-forms, with their JSON forms.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{
    check_two_n, enumerate_pairs, pair_count, pair_index, sort3_with_sign, IndexTriple,
    TripleIndexer,
};
use crate::error::{Error, Result};
use crate::linalg::{format_rational, parse_rational, Rational};

/// Coordinates `y_abc` of a trivector, in lexicographic triple order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Trivector {
    two_n: usize,
    coords: Vec<Rational>,
}

impl Trivector {
    pub fn zero(two_n: usize) -> Result<Self> {
        let len = crate::combinatorics::lambda3_dim(two_n)?;
        Ok(Self {
            two_n,
            coords: vec![Rational::zero(); len],
        })
    }

    pub fn from_coords(two_n: usize, coords: Vec<Rational>) -> Result<Self> {
        let len = crate::combinatorics::lambda3_dim(two_n)?;
        if coords.len() != len {
            return Err(Error::Shape {
                expected: format!("{len} coordinates"),
                found: format!("{}", coords.len()),
            });
        }
        Ok(Self { two_n, coords })
    }

    /// Assembles `Σ value · v^a ∧ v^b ∧ v^c` from arbitrary index triples:
    /// unsorted triples pick up their permutation sign, repeated indices
    /// contribute nothing, duplicates add up.
    pub fn from_entries<I>(two_n: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = ([usize; 3], Rational)>,
    {
        let mut t = Self::zero(two_n)?;
        let idx = TripleIndexer::new(two_n)?;
        for (abc, v) in entries {
            if abc.iter().any(|&x| x < 1 || x > two_n) {
                return Err(Error::IndexOutOfRange(format!(
                    "{abc:?} outside 1..={two_n}"
                )));
            }
            if let Some((s, sign)) = sort3_with_sign(abc) {
                let k = idx.index_sorted(s[0], s[1], s[2]);
                if sign > 0 {
                    t.coords[k] += v;
                } else {
                    t.coords[k] -= v;
                }
            }
        }
        Ok(t)
    }

    /// The basis covector `v^a ∧ v^b ∧ v^c` (signed if unsorted).
    pub fn basis(two_n: usize, a: usize, b: usize, c: usize) -> Result<Self> {
        Self::from_entries(two_n, [([a, b, c], Rational::from_integer(1.into()))])
    }

    pub fn two_n(&self) -> usize {
        self.two_n
    }

    pub fn n(&self) -> usize {
        self.two_n / 2
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// `y_abc` for any order of indices (antisymmetric extension).
    pub fn get(&self, a: usize, b: usize, c: usize) -> Rational {
        match sort3_with_sign([a, b, c]) {
            None => Rational::zero(),
            Some((s, sign)) => {
                let k = crate::combinatorics::rank_triple(
                    IndexTriple { a: s[0], b: s[1], c: s[2] },
                    self.two_n,
                )
                .expect("indices in range");
                if sign > 0 {
                    self.coords[k].clone()
                } else {
                    -&self.coords[k]
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            two_n: self.two_n,
            coords: self.coords.iter().map(|y| y * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            two_n: self.two_n,
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            two_n: self.two_n,
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect(),
        })
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.two_n != other.two_n {
            return Err(Error::Shape {
                expected: format!("2n = {}", self.two_n),
                found: format!("2n = {}", other.two_n),
            });
        }
        Ok(())
    }

    pub fn to_json(&self) -> TrivectorJson {
        let triples = crate::combinatorics::enumerate_triples(self.two_n).expect("valid 2n");
        TrivectorJson {
            two_n: self.two_n,
            coords: triples
                .iter()
                .zip(&self.coords)
                .filter(|(_, y)| !y.is_zero())
                .map(|(t, y)| (t.key(), format_rational(y)))
                .collect(),
        }
    }

    pub fn from_json(j: &TrivectorJson) -> Result<Self> {
        let entries = j
            .coords
            .iter()
            .map(|(k, v)| Ok((IndexTriple::parse_key(k)?, parse_rational(v)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_entries(j.two_n, entries)
    }
}

/// `{"two_n": int, "coords": [["a,b,c", "num/den"], ...]}`, nonzero entries
/// in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrivectorJson {
    pub two_n: usize,
    pub coords: Vec<(String, String)>,
}

/// First jet at a point of a 2-form `Ω = Σ_{h<i} F_hi dx^h ∧ dx^i`: the
/// values `F_hi` and the first derivatives `∂F_hi/∂x^l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Jet1TwoForm {
    two_n: usize,
    f: Vec<Rational>,
    /// `df[pair * two_n + (l - 1)]`
    df: Vec<Rational>,
}

impl Jet1TwoForm {
    pub fn zero(two_n: usize) -> Result<Self> {
        check_two_n(two_n)?;
        let pairs = pair_count(two_n);
        Ok(Self {
            two_n,
            f: vec![Rational::zero(); pairs],
            df: vec![Rational::zero(); pairs * two_n],
        })
    }

    pub fn two_n(&self) -> usize {
        self.two_n
    }

    fn check_index(&self, x: usize) -> Result<()> {
        if x < 1 || x > self.two_n {
            return Err(Error::IndexOutOfRange(format!("{x} outside 1..={}", self.two_n)));
        }
        Ok(())
    }

    /// Orders a pair, returning the sign; `None` for `h == i`.
    fn canonical_pair(&self, h: usize, i: usize) -> Result<Option<(usize, bool)>> {
        self.check_index(h)?;
        self.check_index(i)?;
        Ok(match h.cmp(&i) {
            std::cmp::Ordering::Less => Some((pair_index(h, i, self.two_n), false)),
            std::cmp::Ordering::Greater => Some((pair_index(i, h, self.two_n), true)),
            std::cmp::Ordering::Equal => None,
        })
    }

    /// `F_hi`, antisymmetric in `(h, i)`.
    pub fn f(&self, h: usize, i: usize) -> Rational {
        match self.canonical_pair(h, i).expect("indices in range") {
            None => Rational::zero(),
            Some((k, flip)) => signed(&self.f[k], flip),
        }
    }

    /// `∂F_hi/∂x^l`, antisymmetric in `(h, i)`.
    pub fn df(&self, h: usize, i: usize, l: usize) -> Rational {
        self.check_index(l).expect("index in range");
        match self.canonical_pair(h, i).expect("indices in range") {
            None => Rational::zero(),
            Some((k, flip)) => signed(&self.df[k * self.two_n + l - 1], flip),
        }
    }

    /// Sets `F_hi` (and thereby `F_ih = -F_hi`).
    pub fn set_f(&mut self, h: usize, i: usize, v: Rational) -> Result<()> {
        match self.canonical_pair(h, i)? {
            None => Err(Error::InvalidArgument(format!("F_{h}{i} has a repeated index"))),
            Some((k, flip)) => {
                self.f[k] = signed(&v, flip);
                Ok(())
            }
        }
    }

    pub fn set_df(&mut self, h: usize, i: usize, l: usize, v: Rational) -> Result<()> {
        self.check_index(l)?;
        match self.canonical_pair(h, i)? {
            None => Err(Error::InvalidArgument(format!("F_{h}{i} has a repeated index"))),
            Some((k, flip)) => {
                self.df[k * self.two_n + l - 1] = signed(&v, flip);
                Ok(())
            }
        }
    }

    pub fn f_values(&self) -> &[Rational] {
        &self.f
    }

    pub fn df_values(&self) -> &[Rational] {
        &self.df
    }

    pub(crate) fn from_parts(two_n: usize, f: Vec<Rational>, df: Vec<Rational>) -> Self {
        debug_assert_eq!(f.len(), pair_count(two_n));
        debug_assert_eq!(df.len(), pair_count(two_n) * two_n);
        Self { two_n, f, df }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.two_n != other.two_n {
            return Err(Error::Shape {
                expected: format!("2n = {}", self.two_n),
                found: format!("2n = {}", other.two_n),
            });
        }
        Ok(Self {
            two_n: self.two_n,
            f: self.f.iter().zip(&other.f).map(|(a, b)| a + b).collect(),
            df: self.df.iter().zip(&other.df).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            two_n: self.two_n,
            f: self.f.iter().map(|x| x * c).collect(),
            df: self.df.iter().map(|x| x * c).collect(),
        }
    }

    pub fn to_json(&self) -> JetJson {
        let pairs = enumerate_pairs(self.two_n);
        let f = pairs
            .iter()
            .zip(&self.f)
            .filter(|(_, v)| !v.is_zero())
            .map(|(&(h, i), v)| (format!("{h},{i}"), format_rational(v)))
            .collect();
        let mut df = Vec::new();
        for (k, &(h, i)) in pairs.iter().enumerate() {
            for l in 1..=self.two_n {
                let v = &self.df[k * self.two_n + l - 1];
                if !v.is_zero() {
                    df.push((format!("{h},{i},{l}"), format_rational(v)));
                }
            }
        }
        JetJson {
            two_n: self.two_n,
            f,
            df,
        }
    }

    /// Entries accumulate; unsorted pairs are canonicalized with a sign.
    pub fn from_json(j: &JetJson) -> Result<Self> {
        let mut jet = Self::zero(j.two_n)?;
        for (key, v) in &j.f {
            let idx = parse_indices(key, 2)?;
            let v = parse_rational(v)?;
            let cur = jet.f(idx[0], idx[1]);
            jet.set_f(idx[0], idx[1], cur + v)?;
        }
        for (key, v) in &j.df {
            let idx = parse_indices(key, 3)?;
            let v = parse_rational(v)?;
            jet.check_index(idx[2])?;
            let cur = jet.df(idx[0], idx[1], idx[2]);
            jet.set_df(idx[0], idx[1], idx[2], cur + v)?;
        }
        Ok(jet)
    }
}

fn signed(v: &Rational, flip: bool) -> Rational {
    if flip {
        -v
    } else {
        v.clone()
    }
}

fn parse_indices(key: &str, count: usize) -> Result<Vec<usize>> {
    let parts: Vec<usize> = key
        .split(',')
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad index in {key:?}")))
        })
        .collect::<Result<_>>()?;
    if parts.len() != count {
        return Err(Error::Parse(format!("expected {count} indices in {key:?}")));
    }
    Ok(parts)
}

/// `{"two_n": int, "F": [["h,i", "num/den"], ...], "DF": [["h,i,l",
/// "num/den"], ...]}` where `"h,i,l"` is `∂F_hi/∂x^l`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JetJson {
    pub two_n: usize,
    #[serde(rename = "F", default)]
    pub f: Vec<(String, String)>,
    #[serde(rename = "DF", default)]
    pub df: Vec<(String, String)>,
}
