//! The standard symplectic form, a canonical basis of sp(2n), membership
//! predicates and exact random symplectic matrices.
//!
//! With `J = [[0, I], [-I, 0]]` an element of sp(2n) has block form
//! `[[A, B], [C, -Aᵀ]]` with `B`, `C` symmetric. The canonical basis lists
//! the `n²` A-block generators `E_ij - E_{n+j,n+i}` row-major, then the
//! symmetric B-block generators (`i <= j`), then the symmetric C-block
//! generators (`i <= j`). Coordinates of an element always refer to this
//! order.

use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{rat, MatQ, Rational};
use crate::rng::DetRng;

/// Matrix of `Ω = Σ_{i=1}^n v^i ∧ v^{n+i}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardForm {
    pub n: usize,
    pub j: MatQ,
}

impl StandardForm {
    pub fn new(n: usize) -> Self {
        let mut j = MatQ::zeros(2 * n, 2 * n);
        for i in 0..n {
            j[(i, n + i)] = Rational::one();
            j[(n + i, i)] = rat(-1);
        }
        Self { n, j }
    }
}

fn half_dim(m: &MatQ) -> Result<usize> {
    if !m.is_square() || m.rows() % 2 != 0 || m.rows() == 0 {
        return Err(Error::Shape {
            expected: "square matrix of even size >= 2".into(),
            found: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    Ok(m.rows() / 2)
}

/// `Uᵀ J + J U = 0`.
pub fn is_in_sp(u: &MatQ) -> Result<bool> {
    let n = half_dim(u)?;
    let j = StandardForm::new(n).j;
    Ok((&(&u.transpose() * &j) + &(&j * u)).is_zero())
}

/// `Aᵀ J A = J`.
pub fn is_symplectic(a: &MatQ) -> Result<bool> {
    let n = half_dim(a)?;
    let j = StandardForm::new(n).j;
    Ok(&(&a.transpose() * &j) * a == j)
}

/// Position of the symmetric pair `i <= j` (0-based) in the `n(n+1)/2`
/// block list.
fn sym_index(i: usize, j: usize, n: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * n + j - i * (i + 1) / 2
}

/// Offset of the B block and of the C block in the coordinate vector.
fn block_offsets(n: usize) -> (usize, usize) {
    let sym = n * (n + 1) / 2;
    (n * n, n * n + sym)
}

/// An element of sp(2n).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpElement {
    n: usize,
    u: MatQ,
}

impl SpElement {
    pub fn new(u: MatQ) -> Result<Self> {
        let n = half_dim(&u)?;
        if !is_in_sp(&u)? {
            return Err(Error::NotInSp("Uᵀ J + J U != 0".into()));
        }
        Ok(Self { n, u })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            n,
            u: MatQ::zeros(2 * n, 2 * n),
        }
    }

    /// Assembles `Σ c_k U_k` over the canonical basis.
    pub fn from_coords(n: usize, coords: &[Rational]) -> Result<Self> {
        let dim = crate::combinatorics::sp_dim(n)?;
        if coords.len() != dim {
            return Err(Error::Shape {
                expected: format!("{dim} coordinates"),
                found: format!("{}", coords.len()),
            });
        }
        let (b_off, c_off) = block_offsets(n);
        let mut u = MatQ::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                let a = &coords[i * n + j];
                u[(i, j)] = a.clone();
                u[(n + j, n + i)] = -a;
                u[(i, n + j)] = coords[b_off + sym_index(i, j, n)].clone();
                u[(n + i, j)] = coords[c_off + sym_index(i, j, n)].clone();
            }
        }
        Ok(Self { n, u })
    }

    /// Coordinates in the canonical basis (the independent unknowns
    /// `u_ij`, `u_{i,n+j}`, `u_{n+i,j}` with `i <= j` for the latter two).
    pub fn coords(&self) -> Vec<Rational> {
        let n = self.n;
        let mut out = Vec::with_capacity(n * (2 * n + 1));
        for i in 0..n {
            for j in 0..n {
                out.push(self.u[(i, j)].clone());
            }
        }
        for i in 0..n {
            for j in i..n {
                out.push(self.u[(i, n + j)].clone());
            }
        }
        for i in 0..n {
            for j in i..n {
                out.push(self.u[(n + i, j)].clone());
            }
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &MatQ {
        &self.u
    }

    pub fn into_matrix(self) -> MatQ {
        self.u
    }

    pub fn transpose(&self) -> SpElement {
        Self {
            n: self.n,
            u: self.u.transpose(),
        }
    }

    pub fn scale(&self, c: &Rational) -> SpElement {
        Self {
            n: self.n,
            u: self.u.scale(c),
        }
    }

    pub fn add(&self, other: &SpElement) -> Result<SpElement> {
        Ok(Self {
            n: self.n,
            u: self.u.try_add(&other.u)?,
        })
    }

    /// Strictly block-triangular (only a B or only a C block).
    pub fn is_block_nilpotent(&self) -> bool {
        let n = self.n;
        let a_zero = (0..n).all(|i| (0..n).all(|j| self.u[(i, j)].is_zero()));
        let b_zero = (0..n).all(|i| (0..n).all(|j| self.u[(i, n + j)].is_zero()));
        let c_zero = (0..n).all(|i| (0..n).all(|j| self.u[(n + i, j)].is_zero()));
        a_zero && (b_zero || c_zero)
    }
}

/// Reads entries `u_{xy}` (1-based) of an sp(2n) element from its
/// independent coordinates, substituting the dependent ones through
/// `u_{j,n+i} = u_{i,n+j}`, `u_{n+j,i} = u_{n+i,j}`, `u_{n+j,n+i} = -u_{ij}`.
#[derive(Debug, Clone)]
pub struct SpCoordinates {
    n: usize,
    coords: Vec<Rational>,
}

impl SpCoordinates {
    pub fn new(element: &SpElement) -> Self {
        Self {
            n: element.n,
            coords: element.coords(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn raw(&self) -> &[Rational] {
        &self.coords
    }

    /// `u_{xy}` with `1 <= x, y <= 2n`, as a coefficient sign and a
    /// coordinate index.
    #[inline]
    pub fn locate(&self, x: usize, y: usize) -> (i8, usize) {
        let n = self.n;
        let (b_off, c_off) = block_offsets(n);
        let (i, j) = (x - 1, y - 1);
        match (i < n, j < n) {
            (true, true) => (1, i * n + j),
            (true, false) => (1, b_off + sym_index(i, j - n, n)),
            (false, true) => (1, c_off + sym_index(i - n, j, n)),
            (false, false) => (-1, (j - n) * n + (i - n)),
        }
    }

    pub fn entry(&self, x: usize, y: usize) -> Rational {
        let (sign, k) = self.locate(x, y);
        if sign > 0 {
            self.coords[k].clone()
        } else {
            -&self.coords[k]
        }
    }
}

/// The canonical basis of sp(2n): `n(2n+1)` elements.
pub fn sp_basis(n: usize) -> Result<Vec<SpElement>> {
    let dim = crate::combinatorics::sp_dim(n)?;
    Ok((0..dim)
        .map(|k| {
            let mut c = vec![Rational::zero(); dim];
            c[k] = Rational::one();
            SpElement::from_coords(n, &c).expect("unit coordinates")
        })
        .collect())
}

/// Matrix commutator `UV - VU`.
pub fn commutator(u: &SpElement, v: &SpElement) -> Result<SpElement> {
    if u.n != v.n {
        return Err(Error::Shape {
            expected: format!("n = {}", u.n),
            found: format!("n = {}", v.n),
        });
    }
    let m = &(&u.u * &v.u) - &(&v.u * &u.u);
    Ok(SpElement { n: u.n, u: m })
}

/// `exp(U) = Σ_k U^k / k!` for nilpotent `U`, a finite exact sum.
pub fn exp_nilpotent(u: &MatQ) -> Result<MatQ> {
    if !u.is_square() {
        return Err(Error::Shape {
            expected: "square matrix".into(),
            found: format!("{}x{}", u.rows(), u.cols()),
        });
    }
    let dim = u.rows();
    let mut acc = MatQ::identity(dim);
    let mut term = MatQ::identity(dim);
    for k in 1..=dim {
        term = (&term * u).scale(&Rational::new(1.into(), (k as i64).into()));
        if term.is_zero() {
            return Ok(acc);
        }
        acc = &acc + &term;
    }
    if (&term * u).is_zero() {
        Ok(acc)
    } else {
        Err(Error::NotNilpotent)
    }
}

/// An element of Sp(2n): `Aᵀ J A = J`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymplecticMatrix {
    n: usize,
    a: MatQ,
}

impl SymplecticMatrix {
    pub fn new(a: MatQ) -> Result<Self> {
        let n = half_dim(&a)?;
        if !is_symplectic(&a)? {
            return Err(Error::InvalidArgument("matrix is not symplectic".into()));
        }
        Ok(Self { n, a })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &MatQ {
        &self.a
    }
}

/// Bound on the integer entries of random generators.
pub const GENERATOR_ENTRY_BOUND: i64 = 3;

/// A sparse strictly block-triangular generator `[[0, B], [0, 0]]` or
/// `[[0, 0], [C, 0]]` with one or two symmetric entry pairs drawn from
/// `[-3, 3]`. It squares to zero.
pub fn random_nilpotent_generator(n: usize, rng: &mut DetRng) -> SpElement {
    let upper = rng.gen_bool(0.5);
    let mut u = MatQ::zeros(2 * n, 2 * n);
    let count = rng.gen_range(1..=2);
    for _ in 0..count {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        let v = rat(rng.gen_range(-GENERATOR_ENTRY_BOUND..=GENERATOR_ENTRY_BOUND));
        if upper {
            u[(i, n + j)] = v.clone();
            u[(j, n + i)] = v;
        } else {
            u[(n + i, j)] = v.clone();
            u[(n + j, i)] = v;
        }
    }
    SpElement { n, u }
}

/// The B- and C-block elements of the canonical basis; all square to zero.
pub fn nilpotent_basis_generators(n: usize) -> Result<Vec<SpElement>> {
    Ok(sp_basis(n)?.into_iter().skip(n * n).collect())
}

/// Product of `word_length` exact exponentials of random nilpotent
/// generators. Deterministic given `seed`.
pub fn random_symplectic(n: usize, seed: u64, word_length: usize) -> Result<SymplecticMatrix> {
    crate::combinatorics::sp_dim(n)?;
    if word_length < 1 {
        return Err(Error::InvalidArgument("word_length must be >= 1".into()));
    }
    let mut rng = crate::rng::seeded(seed);
    let mut a = MatQ::identity(2 * n);
    for _ in 0..word_length {
        let g = random_nilpotent_generator(n, &mut rng);
        a = &a * &exp_nilpotent(g.matrix())?;
    }
    Ok(SymplecticMatrix { n, a })
}

/// Random element `Σ c_k U_k` with integer coefficients in `[-bound, bound]`.
pub fn random_sp_element(n: usize, bound: i64, rng: &mut DetRng) -> SpElement {
    let dim = n * (2 * n + 1);
    let coords: Vec<Rational> = (0..dim).map(|_| rat(rng.gen_range(-bound..=bound))).collect();
    SpElement::from_coords(n, &coords).expect("valid coordinate count")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{bareiss_rank, ratio};
    use crate::rng::seeded;

    #[test]
    fn standard_form() {
        for n in 1..=4 {
            let j = StandardForm::new(n).j;
            assert_eq!(j.transpose(), -&j);
            assert_eq!(&j * &j, -&MatQ::identity(2 * n));
        }
    }

    #[test]
    fn sym_index_is_bijective() {
        for n in 1..=6 {
            let mut seen = vec![false; n * (n + 1) / 2];
            let mut expected = 0;
            for i in 0..n {
                for j in i..n {
                    let k = sym_index(i, j, n);
                    assert_eq!(k, expected);
                    assert_eq!(sym_index(j, i, n), k);
                    seen[k] = true;
                    expected += 1;
                }
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn basis_sizes_and_membership() {
        assert_eq!(sp_basis(1).unwrap().len(), 3);
        let b2 = sp_basis(2).unwrap();
        assert_eq!(b2.len(), 10);
        assert!(b2.iter().all(|u| is_in_sp(u.matrix()).unwrap()));
        assert!(sp_basis(0).is_err());
    }

    #[test]
    fn basis_order() {
        let b = sp_basis(2).unwrap();
        // E_12 - E_43 is the second A-block generator
        let mut e = MatQ::zeros(4, 4);
        e[(0, 1)] = rat(1);
        e[(3, 2)] = rat(-1);
        assert_eq!(b[1].matrix(), &e);
        // first B generator is E_13, then E_14 + E_23
        let mut e = MatQ::zeros(4, 4);
        e[(0, 2)] = rat(1);
        assert_eq!(b[4].matrix(), &e);
        let mut e = MatQ::zeros(4, 4);
        e[(0, 3)] = rat(1);
        e[(1, 2)] = rat(1);
        assert_eq!(b[5].matrix(), &e);
        let mut e = MatQ::zeros(4, 4);
        e[(3, 1)] = rat(1);
        assert_eq!(b[9].matrix(), &e);
    }

    #[test]
    fn flattened_basis_has_full_rank() {
        for n in 1..=5 {
            let basis = sp_basis(n).unwrap();
            let dim = basis.len();
            let rows: Vec<Rational> = basis.iter().flat_map(|u| u.matrix().entries().to_vec()).collect();
            let flat = MatQ::from_vec(dim, 4 * n * n, rows).unwrap();
            assert_eq!(bareiss_rank(&flat), n * (2 * n + 1));
        }
    }

    #[test]
    fn predicates() {
        assert!(is_in_sp(&MatQ::zeros(4, 4)).unwrap());
        for n in 1..=3 {
            let id = MatQ::identity(2 * n);
            assert!(is_symplectic(&id).unwrap());
            assert!(!is_in_sp(&id).unwrap());
        }
        assert!(is_symplectic(&MatQ::diagonal(&[rat(2), ratio(1, 2)])).unwrap());
        assert!(!is_symplectic(&MatQ::diagonal(&[rat(2), rat(2)])).unwrap());
        assert!(matches!(is_in_sp(&MatQ::zeros(3, 3)), Err(Error::Shape { .. })));
        assert!(matches!(is_symplectic(&MatQ::zeros(2, 4)), Err(Error::Shape { .. })));
    }

    #[test]
    fn commutators() {
        let b = sp_basis(1).unwrap();
        let (h, e, f) = (&b[0], &b[1], &b[2]);
        assert!(commutator(e, e).unwrap().matrix().is_zero());
        // [E_12, E_21] = diag(1, -1)
        let c = commutator(e, f).unwrap();
        assert_eq!(c.matrix(), &MatQ::diagonal(&[rat(1), rat(-1)]));
        assert_eq!(c, *h);
        for n in 1..=3 {
            let basis = sp_basis(n).unwrap();
            for u in &basis {
                for v in &basis {
                    assert!(is_in_sp(commutator(u, v).unwrap().matrix()).unwrap());
                }
            }
        }
        assert!(commutator(&SpElement::zero(1), &SpElement::zero(2)).is_err());
    }

    #[test]
    fn coordinates_and_block_symmetries() {
        let mut rng = seeded(11);
        for n in 1..=4 {
            for _ in 0..20 {
                let u = random_sp_element(n, 5, &mut rng);
                assert!(is_in_sp(u.matrix()).unwrap());
                assert_eq!(SpElement::from_coords(n, &u.coords()).unwrap(), u);
                let m = u.matrix();
                let at = |x: usize, y: usize| m[(x - 1, y - 1)].clone();
                for i in 1..=n {
                    for j in i + 1..=n {
                        assert_eq!(at(j, n + i), at(i, n + j));
                        assert_eq!(at(n + j, i), at(n + i, j));
                        assert_eq!(at(n + j, n + i), -at(i, j));
                    }
                }
                let sc = SpCoordinates::new(&u);
                for x in 1..=2 * n {
                    for y in 1..=2 * n {
                        assert_eq!(sc.entry(x, y), at(x, y));
                    }
                }
                // sp is closed under transposition for the standard J
                assert!(is_in_sp(u.transpose().matrix()).unwrap());
            }
        }
    }

    #[test]
    fn nilpotent_exponentials() {
        for n in 1..=3 {
            for g in nilpotent_basis_generators(n).unwrap() {
                assert!(g.is_block_nilpotent());
                let e = exp_nilpotent(g.matrix()).unwrap();
                assert!(is_symplectic(&e).unwrap());
            }
        }
        assert!(matches!(exp_nilpotent(&MatQ::identity(2)), Err(Error::NotNilpotent)));
        assert_eq!(exp_nilpotent(&MatQ::zeros(4, 4)).unwrap(), MatQ::identity(4));
    }

    #[test]
    fn random_group_elements() {
        for seed in 0..1000u64 {
            let n = 1 + (seed % 4) as usize;
            let a = random_symplectic(n, seed, 1 + (seed % 5) as usize).unwrap();
            assert!(is_symplectic(a.matrix()).unwrap());
            if n == 1 {
                assert_eq!(a.matrix().minor(&[0, 1], &[0, 1]), rat(1));
            }
        }
        assert_eq!(random_symplectic(3, 5, 4).unwrap(), random_symplectic(3, 5, 4).unwrap());
        assert!(random_symplectic(2, 0, 0).is_err());
    }

    #[test]
    fn zero_generators_give_identity() {
        let mut a = MatQ::identity(6);
        for _ in 0..4 {
            a = &a * &exp_nilpotent(SpElement::zero(3).matrix()).unwrap();
        }
        assert_eq!(a, MatQ::identity(6));
    }
}
