//! The action of GL(2n) and sp(2n) on trivectors, and the jet-level
//! exterior derivative of a 2-form.
//!
//! Convention: `A · θ = (A⁻¹)*θ`, i.e. `(A·θ)(x, y, z) = θ(A⁻¹x, A⁻¹y, A⁻¹z)`.
//! In coordinates `v^a ∘ A⁻¹ = Σ_h λ_ah v^h` with `λ_ah` the `(a, h)` entry
//! of `A⁻¹`. Differentiating along `exp(tU)` gives the infinitesimal action
//!
//! ```text
//! ρ(U)θ = -θ(U·,·,·) - θ(·,U·,·) - θ(·,·,U·)
//! ```
//!
//! which the three [`InfinitesimalMethod`]s compute by different formulas.
//! The determinant and expanded-coefficient formulas are stated for the
//! matrix whose entries are read transposed (`ũ_xy = U_yx`); both read `U`
//! that way here so that all three agree with `ρ(U)`.

use num_traits::{One, Zero};

use crate::combinatorics::{enumerate_pairs, pair_count, TripleIndexer};
use crate::error::{Error, Result};
use crate::linalg::{bareiss_rank, MatQ, Rational, SparseMatQ};
use crate::symplectic::{is_in_sp, SpCoordinates, SpElement};
use crate::trivector::{Jet1TwoForm, Trivector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InfinitesimalMethod {
    /// Slot-by-slot evaluation of `-θ(U·,·,·) - θ(·,U·,·) - θ(·,·,U·)`.
    Multilinear,
    /// Coefficients `U^{abc}_{hij}` given by three 3x3 determinants mixing a
    /// column of `U` with Kronecker deltas.
    LemmaDeterminant,
    /// The nine index-range sums of the coefficient of `∂/∂y_αβγ`, reading
    /// `U` through its independent sp(2n) coordinates. Requires `U ∈ sp`.
    ExpandedCoefficient,
}

impl InfinitesimalMethod {
    pub const ALL: [InfinitesimalMethod; 3] = [
        InfinitesimalMethod::Multilinear,
        InfinitesimalMethod::LemmaDeterminant,
        InfinitesimalMethod::ExpandedCoefficient,
    ];
}

fn check_square(m: &MatQ, two_n: usize) -> Result<()> {
    if m.rows() != two_n || m.cols() != two_n {
        return Err(Error::Shape {
            expected: format!("{two_n}x{two_n} matrix"),
            found: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    Ok(())
}

fn det3(m: [[&Rational; 3]; 3]) -> Rational {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// `A · θ` by the 3x3-minor expansion of `(v^a∘A⁻¹) ∧ (v^b∘A⁻¹) ∧ (v^c∘A⁻¹)`.
pub fn group_act(a: &MatQ, theta: &Trivector) -> Result<Trivector> {
    let two_n = theta.two_n();
    check_square(a, two_n)?;
    let lambda = a.inverse()?;
    let idx = TripleIndexer::new(two_n)?;
    let support: Vec<(usize, &Rational)> = theta
        .coords()
        .iter()
        .enumerate()
        .filter(|(_, y)| !y.is_zero())
        .collect();
    let l = |x: usize, y: usize| &lambda[(x - 1, y - 1)];
    let coords = idx
        .triples()
        .iter()
        .map(|out| {
            let (h, i, j) = (out.a, out.b, out.c);
            support.iter().fold(Rational::zero(), |acc, &(k, y)| {
                let t = idx.triple(k);
                let (a, b, c) = (t.a, t.b, t.c);
                let d = det3([
                    [l(a, h), l(b, h), l(c, h)],
                    [l(a, i), l(b, i), l(c, i)],
                    [l(a, j), l(b, j), l(c, j)],
                ]);
                if d.is_zero() {
                    acc
                } else {
                    acc + d * y
                }
            })
        })
        .collect();
    Trivector::from_coords(two_n, coords)
}

/// `ρ(U)θ` by the chosen method.
pub fn infinitesimal_act(
    u: &MatQ,
    theta: &Trivector,
    method: InfinitesimalMethod,
) -> Result<Trivector> {
    let two_n = theta.two_n();
    check_square(u, two_n)?;
    let idx = TripleIndexer::new(two_n)?;
    let coords = match method {
        InfinitesimalMethod::Multilinear => multilinear(u, theta.coords(), &idx),
        InfinitesimalMethod::LemmaDeterminant => lemma_determinant(u, theta.coords(), &idx),
        InfinitesimalMethod::ExpandedCoefficient => {
            if !is_in_sp(u)? {
                return Err(Error::NotInSp(
                    "the expanded-coefficient formula is only valid on sp(2n)".into(),
                ));
            }
            let element = SpElement::new(u.clone())?;
            ExpandedAction::new(&element).apply(theta.coords(), &idx)
        }
    };
    Trivector::from_coords(two_n, coords)
}

fn nonzero_entries(u: &MatQ) -> Vec<(usize, usize, &Rational)> {
    let mut out = Vec::new();
    for r in 0..u.rows() {
        for c in 0..u.cols() {
            if !u[(r, c)].is_zero() {
                out.push((r + 1, c + 1, &u[(r, c)]));
            }
        }
    }
    out
}

/// For each nonzero `u_ah`, every output triple containing `h` receives
/// `-u_ah` times the coordinate with `h` replaced by `a` in the same slot.
pub(crate) fn multilinear(u: &MatQ, y: &[Rational], idx: &TripleIndexer) -> Vec<Rational> {
    let two_n = idx.two_n();
    let mut out = vec![Rational::zero(); idx.len()];
    for (a, h, u_ah) in nonzero_entries(u) {
        for p in 1..=two_n {
            if p == h {
                continue;
            }
            for q in p + 1..=two_n {
                if q == h {
                    continue;
                }
                let Some((k_in, s_in)) = idx.index_signed(a, p, q) else { continue };
                if y[k_in].is_zero() {
                    continue;
                }
                let (k_out, s_out) = idx.index_signed(h, p, q).expect("distinct indices");
                let term = u_ah * &y[k_in];
                if s_in * s_out > 0 {
                    out[k_out] -= term;
                } else {
                    out[k_out] += term;
                }
            }
        }
    }
    out
}

/// Determinant of the 3x3 matrix with rows `(h, i, j)` whose column `col`
/// is `(ũ_{h,x}, ũ_{i,x}, ũ_{j,x})`, `x = abc[col]`, and whose other columns
/// are `δ_{row, abc[k]}`. Expanded along the `ũ` column; the complementary
/// 2x2 minors are integers in `{-1, 0, 1}`.
fn lemma_det<F: Fn(usize, usize) -> Rational>(
    rows: [usize; 3],
    abc: [usize; 3],
    col: usize,
    ut: &F,
) -> Rational {
    let others: Vec<usize> = (0..3).filter(|&k| k != col).collect();
    let delta = |r: usize, k: usize| i8::from(rows[r] == abc[k]);
    let mut acc = Rational::zero();
    for r in 0..3 {
        let rest: Vec<usize> = (0..3).filter(|&k| k != r).collect();
        let minor = delta(rest[0], others[0]) * delta(rest[1], others[1])
            - delta(rest[0], others[1]) * delta(rest[1], others[0]);
        if minor == 0 {
            continue;
        }
        let entry = ut(rows[r], abc[col]);
        if entry.is_zero() {
            continue;
        }
        let positive = ((r + col) % 2 == 0) == (minor > 0);
        if positive {
            acc += entry;
        } else {
            acc -= entry;
        }
    }
    acc
}

/// `U^{abc}_{hij} = -det₁ - det₂ - det₃`, with `ũ_xy = U_yx`.
pub fn lemma_coefficient(u: &MatQ, hij: [usize; 3], abc: [usize; 3]) -> Rational {
    let ut = |x: usize, y: usize| u[(y - 1, x - 1)].clone();
    -(0..3)
        .map(|col| lemma_det(hij, abc, col, &ut))
        .fold(Rational::zero(), |acc, d| acc + d)
}

fn lemma_determinant(u: &MatQ, y: &[Rational], idx: &TripleIndexer) -> Vec<Rational> {
    let triples = idx.triples();
    triples
        .iter()
        .map(|out| {
            let hij = out.as_array();
            triples
                .iter()
                .zip(y)
                .filter(|(_, yv)| !yv.is_zero())
                .fold(Rational::zero(), |acc, (inp, yv)| {
                    let abc = inp.as_array();
                    // every determinant needs two delta columns matched by two rows
                    let shared = abc.iter().filter(|x| hij.contains(x)).count();
                    if shared < 2 {
                        return acc;
                    }
                    let c = lemma_coefficient(u, hij, abc);
                    if c.is_zero() {
                        acc
                    } else {
                        acc + c * yv
                    }
                })
        })
        .collect()
}

/// The expanded-coefficient action prepared for one element of sp(2n):
/// the rows of `ũ = Uᵀ`, read through the independent coordinates.
#[derive(Debug, Clone)]
pub struct ExpandedAction {
    two_n: usize,
    /// `rows[x]` lists `(y, ũ_xy)` with `ũ_xy != 0`, `y` increasing (1-based).
    rows: Vec<Vec<(usize, Rational)>>,
}

impl ExpandedAction {
    pub fn new(element: &SpElement) -> Self {
        let sc = SpCoordinates::new(element);
        let two_n = 2 * sc.n();
        let mut rows = vec![Vec::new(); two_n + 1];
        for (x, row) in rows.iter_mut().enumerate().skip(1) {
            for y in 1..=two_n {
                let v = sc.entry(y, x);
                if !v.is_zero() {
                    row.push((y, v));
                }
            }
        }
        Self { two_n, rows }
    }

    /// `C_αβγ`, the coefficient of `∂/∂y_αβγ` in `-U*`:
    ///
    /// ```text
    ///   Σ_{a<β} ũ_αa y_aβγ + Σ_{a<α} ũ_γa y_aαβ - Σ_{a<α} ũ_βa y_aαγ
    /// + Σ_{α<a<γ} ũ_βa y_αaγ - Σ_{α<a<β} ũ_γa y_αaβ - Σ_{β<a<γ} ũ_αa y_βaγ
    /// + Σ_{a>β} ũ_γa y_αβa + Σ_{a>γ} ũ_αa y_βγa - Σ_{a>γ} ũ_βa y_αγa
    /// ```
    ///
    /// Every `y` index triple above is already increasing.
    fn coefficient(&self, alpha: usize, beta: usize, gamma: usize, y: &[Rational], idx: &TripleIndexer) -> Rational {
        let yv = |a: usize, b: usize, c: usize| &y[idx.index_sorted(a, b, c)];
        let mut acc = Rational::zero();
        let mut add = |sign: i8, u: &Rational, yy: &Rational| {
            if !yy.is_zero() {
                if sign > 0 {
                    acc += u * yy;
                } else {
                    acc -= u * yy;
                }
            }
        };
        let row = |x: usize, lo: usize, hi: usize| {
            self.rows[x].iter().filter(move |(a, _)| *a >= lo && *a <= hi)
        };
        let top = self.two_n;
        for (a, u) in row(alpha, 1, beta - 1) {
            add(1, u, yv(*a, beta, gamma));
        }
        for (a, u) in row(gamma, 1, alpha - 1) {
            add(1, u, yv(*a, alpha, beta));
        }
        for (a, u) in row(beta, 1, alpha - 1) {
            add(-1, u, yv(*a, alpha, gamma));
        }
        for (a, u) in row(beta, alpha + 1, gamma - 1) {
            add(1, u, yv(alpha, *a, gamma));
        }
        for (a, u) in row(gamma, alpha + 1, beta - 1) {
            add(-1, u, yv(alpha, *a, beta));
        }
        for (a, u) in row(alpha, beta + 1, gamma - 1) {
            add(-1, u, yv(beta, *a, gamma));
        }
        for (a, u) in row(gamma, beta + 1, top) {
            add(1, u, yv(alpha, beta, *a));
        }
        for (a, u) in row(alpha, gamma + 1, top) {
            add(1, u, yv(beta, gamma, *a));
        }
        for (a, u) in row(beta, gamma + 1, top) {
            add(-1, u, yv(alpha, gamma, *a));
        }
        acc
    }

    /// Nonzero coordinates `(k, value)` of `ρ(U)θ = -C`.
    pub fn apply_sparse(&self, y: &[Rational], idx: &TripleIndexer) -> Vec<(usize, Rational)> {
        let mut out = Vec::new();
        for (k, t) in idx.triples().iter().enumerate() {
            if self.rows[t.a].is_empty() && self.rows[t.b].is_empty() && self.rows[t.c].is_empty() {
                continue;
            }
            let c = self.coefficient(t.a, t.b, t.c, y, idx);
            if !c.is_zero() {
                out.push((k, -c));
            }
        }
        out
    }

    pub fn apply(&self, y: &[Rational], idx: &TripleIndexer) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); idx.len()];
        for (k, v) in self.apply_sparse(y, idx) {
            out[k] = v;
        }
        out
    }
}

/// Matrix of the linear map `θ ↦ ρ(U)θ` on coordinates, rows and columns in
/// lexicographic triple order. Materialized sparsely; see
/// [`SparseMatQ::to_dense`].
pub fn rep_matrix(u: &MatQ, two_n: usize) -> Result<SparseMatQ> {
    check_square(u, two_n)?;
    let idx = TripleIndexer::new(two_n)?;
    let dim = idx.len();
    let columns = (0..dim)
        .map(|k| {
            let mut e = vec![Rational::zero(); dim];
            e[k] = Rational::one();
            multilinear(u, &e, &idx)
                .into_iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .collect()
        })
        .collect();
    SparseMatQ::from_columns(dim, columns)
}

/// `(dΩ)_x` from the first jet: `y_abc = ∂_a F_bc - ∂_b F_ac + ∂_c F_ab`.
pub fn exterior_derivative_jet(jet: &Jet1TwoForm) -> Trivector {
    let two_n = jet.two_n();
    let idx = TripleIndexer::new(two_n).expect("jet has valid dimension");
    let coords = idx
        .triples()
        .iter()
        .map(|t| {
            let (a, b, c) = (t.a, t.b, t.c);
            jet.df(b, c, a) - jet.df(a, c, b) + jet.df(a, b, c)
        })
        .collect();
    Trivector::from_coords(two_n, coords).expect("length matches")
}

/// First jet at the origin of `φ*Ω` for the linear map `φ(x) = A x`:
///
/// ```text
/// F̄_jk       = Σ_{h<i} F_hi · det A[h,i; j,k]
/// ∂_l F̄_jk   = Σ_{h<i} Σ_a ∂_a F_hi · A_al · det A[h,i; j,k]
/// ```
pub fn pullback_jet_linear(a: &MatQ, jet: &Jet1TwoForm) -> Result<Jet1TwoForm> {
    let two_n = jet.two_n();
    check_square(a, two_n)?;
    if bareiss_rank(a) != two_n {
        return Err(Error::SingularMatrix);
    }
    let pairs = enumerate_pairs(two_n);
    let np = pair_count(two_n);
    // minors[src * np + dst] = det A[rows src; cols dst]
    let mut minors = Vec::with_capacity(np * np);
    for &(h, i) in &pairs {
        for &(j, k) in &pairs {
            minors.push(a.minor(&[h - 1, i - 1], &[j - 1, k - 1]));
        }
    }
    // chain rule: g[src][l] = Σ_a ∂_a F_src · A_al
    let df = jet.df_values();
    let mut g = vec![Rational::zero(); np * two_n];
    for src in 0..np {
        for l in 0..two_n {
            let mut acc = Rational::zero();
            for x in 0..two_n {
                let d = &df[src * two_n + x];
                if !d.is_zero() && !a[(x, l)].is_zero() {
                    acc += d * &a[(x, l)];
                }
            }
            g[src * two_n + l] = acc;
        }
    }
    let f = jet.f_values();
    let mut f_bar = vec![Rational::zero(); np];
    let mut df_bar = vec![Rational::zero(); np * two_n];
    for src in 0..np {
        for dst in 0..np {
            let m = &minors[src * np + dst];
            if m.is_zero() {
                continue;
            }
            if !f[src].is_zero() {
                f_bar[dst] += &f[src] * m;
            }
            for l in 0..two_n {
                let v = &g[src * two_n + l];
                if !v.is_zero() {
                    df_bar[dst * two_n + l] += v * m;
                }
            }
        }
    }
    Ok(Jet1TwoForm::from_parts(two_n, f_bar, df_bar))
}
