//! The distribution spanned by the fundamental vector fields of the
//! sp(2n)-action on Λ³V*, its rank at a point, the stabilizer subalgebra,
//! and the count `N = C(2n,3) - generic rank` of independent invariants.

use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::action::{multilinear, ExpandedAction};
use crate::combinatorics::{lambda3_dim, sp_dim, TripleIndexer};
use crate::error::{Error, Result};
use crate::linalg::{
    bareiss_rank, kernel_basis, modular_rank, rat, ExactMatrix, Rational, SparseMatQ,
    DEFAULT_PRIME,
};
use crate::linalg::modular::random_prime_62;
use crate::rng::{seeded, substream};
use crate::symplectic::{sp_basis, SpElement};
use crate::trivector::{Trivector, TrivectorJson};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const DEFAULT_BOUND: i64 = 100;
pub const DEFAULT_TRIALS: usize = 5;
/// Attempts with fresh primes when a prime divides a denominator.
const MAX_PRIME_ATTEMPTS: usize = 8;

/// `C(2n,3) × n(2n+1)` matrix whose column `k` is `ρ(U_k)θ` for the
/// canonical basis `U_k` of sp(2n). Its kernel is the stabilizer of `θ`;
/// read row-wise it is the linear system `C_αβγ(u) = 0` in the unknowns `u`.
#[derive(Debug, Clone)]
pub struct DistributionMatrix {
    pub n: usize,
    pub point: Trivector,
    pub matrix: SparseMatQ,
}

pub fn distribution_matrix(theta: &Trivector) -> Result<DistributionMatrix> {
    let n = theta.n();
    let idx = TripleIndexer::new(theta.two_n())?;
    let basis = sp_basis(n)?;
    let columns: Vec<Vec<(usize, Rational)>> = basis
        .iter()
        .map(|b| ExpandedAction::new(b).apply_sparse(theta.coords(), &idx))
        .collect();
    if cfg!(debug_assertions) {
        for (b, col) in basis.iter().zip(&columns) {
            let reference: Vec<(usize, Rational)> = multilinear(b.matrix(), theta.coords(), &idx)
                .into_iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .collect();
            assert_eq!(&reference, col, "expanded and multilinear columns disagree");
        }
    }
    Ok(DistributionMatrix {
        n,
        point: theta.clone(),
        matrix: SparseMatQ::from_columns(idx.len(), columns)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RankMethod {
    Exact,
    Modular { prime: u64 },
}

impl RankMethod {
    pub fn modular_default() -> Self {
        RankMethod::Modular { prime: DEFAULT_PRIME }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModularCheck {
    pub prime: u64,
    pub rank: usize,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankCertificate {
    pub n: usize,
    pub rows: usize,
    pub cols: usize,
    pub point: TrivectorJson,
    /// `"exact"` or `"modular"`.
    pub method: String,
    pub prime: Option<u64>,
    /// Modular ranks only bound the rational rank from below.
    pub lower_bound: bool,
    pub rank: usize,
    pub kernel_dim: usize,
    pub seed: Option<u64>,
    pub tool_version: String,
    /// For exact certificates: the modular rank at the default prime.
    pub modular_check: Option<ModularCheck>,
    /// Primes abandoned because they divided a denominator.
    pub rejected_primes: Vec<u64>,
}

/// Modular rank, moving to fresh primes (derived from `prime`) when `prime`
/// divides a denominator. Returns the rank, the prime used and the rejected ones.
fn modular_with_retry<M: ExactMatrix + ?Sized>(m: &M, prime: u64) -> Result<(usize, u64, Vec<u64>)> {
    let mut rng = seeded(prime);
    let mut p = prime;
    let mut rejected = Vec::new();
    for _ in 0..MAX_PRIME_ATTEMPTS {
        match modular_rank(m, p) {
            Ok(r) => return Ok((r, p, rejected)),
            Err(Error::PrimeDividesDenominator { .. }) => {
                rejected.push(p);
                p = random_prime_62(&mut rng);
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::PrimeDividesDenominator { prime: p })
}

pub fn rank_of(dm: &DistributionMatrix, method: RankMethod, seed: Option<u64>) -> Result<RankCertificate> {
    let m = &dm.matrix;
    let cols = m.ncols();
    let (rank, prime, lower_bound, modular_check, rejected) = match method {
        RankMethod::Exact => {
            let rank = bareiss_rank(m);
            let (mr, p, rejected) = modular_with_retry(m, DEFAULT_PRIME)?;
            let check = ModularCheck { prime: p, rank: mr, agrees: mr == rank };
            (rank, None, false, Some(check), rejected)
        }
        RankMethod::Modular { prime } => {
            let (r, p, rejected) = modular_with_retry(m, prime)?;
            (r, Some(p), true, None, rejected)
        }
    };
    Ok(RankCertificate {
        n: dm.n,
        rows: m.nrows(),
        cols,
        point: dm.point.to_json(),
        method: match method {
            RankMethod::Exact => "exact".into(),
            RankMethod::Modular { .. } => "modular".into(),
        },
        prime,
        lower_bound,
        rank,
        kernel_dim: cols - rank,
        seed,
        tool_version: TOOL_VERSION.into(),
        modular_check,
        rejected_primes: rejected,
    })
}

pub fn rank_at(theta: &Trivector, method: RankMethod) -> Result<RankCertificate> {
    rank_of(&distribution_matrix(theta)?, method, None)
}

/// The point with `y_abc = a + b + c`.
pub fn theta0(n: usize) -> Result<Trivector> {
    if n < 2 {
        return Err(Error::InvalidDimension(format!("theta0 needs n >= 2, got {n}")));
    }
    let idx = TripleIndexer::new(2 * n)?;
    let coords = idx
        .triples()
        .iter()
        .map(|t| rat((t.a + t.b + t.c) as i64))
        .collect();
    Trivector::from_coords(2 * n, coords)
}

/// Kernel of the distribution matrix: coefficient vectors in the canonical
/// basis and the matching elements of sp(2n).
#[derive(Debug, Clone)]
pub struct Stabilizer {
    pub vectors: Vec<Vec<Rational>>,
    pub elements: Vec<SpElement>,
}

impl Stabilizer {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }
}

pub fn stabilizer_kernel(theta: &Trivector) -> Result<Stabilizer> {
    let dm = distribution_matrix(theta)?;
    let vectors = if bareiss_rank(&dm.matrix) == dm.matrix.ncols() {
        Vec::new()
    } else {
        kernel_basis(&dm.matrix)
    };
    let elements = vectors
        .iter()
        .map(|v| SpElement::from_coords(dm.n, v))
        .collect::<Result<Vec<_>>>()?;
    Ok(Stabilizer { vectors, elements })
}

/// Trivector with independent uniform integer coordinates in `[-bound, bound]`.
pub fn random_point<R: Rng + ?Sized>(n: usize, bound: i64, rng: &mut R) -> Result<Trivector> {
    let len = lambda3_dim(2 * n)?;
    Trivector::from_coords(2 * n, (0..len).map(|_| rat(rng.gen_range(-bound..=bound))).collect())
}

/// The point sampled for trial `trial` of a run with `seed`.
pub fn sample_point(n: usize, bound: i64, seed: u64, trial: usize) -> Result<Trivector> {
    random_point(n, bound, &mut substream(seed, trial as u64))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// `"trial <k>"` or `"theta0"`.
    pub source: String,
    pub point: TrivectorJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericRankReport {
    pub n: usize,
    pub lambda3_dim: usize,
    pub sp_dim: usize,
    pub trials: usize,
    pub bound: i64,
    pub seed: u64,
    pub trial_ranks: Vec<usize>,
    pub theta0_rank: Option<usize>,
    pub max_rank: usize,
    pub witness: Witness,
    pub invariant_count: usize,
    pub certificates: Vec<RankCertificate>,
}

pub fn generic_rank(
    n: usize,
    trials: usize,
    bound: i64,
    seed: u64,
    method: RankMethod,
) -> Result<GenericRankReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be >= 1".into()));
    }
    if bound < 1 {
        return Err(Error::InvalidArgument("sampler bound must be >= 1".into()));
    }
    let l3 = lambda3_dim(2 * n)?;
    let spd = sp_dim(n)?;
    let mut certificates = Vec::with_capacity(trials + 1);
    let mut points = Vec::with_capacity(trials + 1);
    for t in 0..trials {
        let p = sample_point(n, bound, seed, t)?;
        certificates.push(rank_of(&distribution_matrix(&p)?, method, Some(seed))?);
        points.push((format!("trial {t}"), p));
    }
    let trial_ranks: Vec<usize> = certificates.iter().map(|c| c.rank).collect();
    let mut theta0_rank = None;
    if n >= 2 {
        let p = theta0(n)?;
        let c = rank_of(&distribution_matrix(&p)?, method, None)?;
        theta0_rank = Some(c.rank);
        certificates.push(c);
        points.push(("theta0".into(), p));
    }
    // first point attaining the maximum
    let (best, max_rank) = certificates
        .iter()
        .enumerate()
        .fold((0, 0), |(bi, br), (i, c)| if c.rank > br { (i, c.rank) } else { (bi, br) });
    let (source, point) = &points[best];
    Ok(GenericRankReport {
        n,
        lambda3_dim: l3,
        sp_dim: spd,
        trials,
        bound,
        seed,
        trial_ranks,
        theta0_rank,
        max_rank,
        witness: Witness {
            source: source.clone(),
            point: point.to_json(),
        },
        invariant_count: l3 - max_rank,
        certificates,
    })
}

/// Closed form: 0 for `n ≤ 2`, 2 for `n = 3`, `n(4n² − 12n − 1)/3` for `n ≥ 4`.
pub fn invariant_count_formula(n: usize) -> Result<usize> {
    sp_dim(n)?;
    Ok(match n {
        1 | 2 => 0,
        3 => 2,
        _ => n * (4 * n * n - 12 * n - 1) / 3,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowVerdict {
    pub n: usize,
    pub lambda3_dim: usize,
    pub sp_dim: usize,
    pub generic_rank: usize,
    pub computed: usize,
    pub formula: usize,
    pub pass: bool,
    pub report: GenericRankReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub n_lo: usize,
    pub n_hi: usize,
    pub trials: usize,
    pub bound: i64,
    pub seed: u64,
    pub method: RankMethod,
    pub rows: Vec<RowVerdict>,
    pub pass: bool,
}

/// Computes `N` for every `n` in `n_lo..=n_hi` and compares it with the
/// closed form. A mismatch is a FAIL row, not an error.
pub fn verify_range(
    n_lo: usize,
    n_hi: usize,
    trials: usize,
    bound: i64,
    seed: u64,
    method: RankMethod,
) -> Result<VerificationReport> {
    if n_lo < 1 || n_lo > n_hi {
        return Err(Error::InvalidArgument(format!("invalid range {n_lo}..{n_hi}")));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be >= 1".into()));
    }
    let rows = (n_lo..=n_hi)
        .map(|n| {
            let report = generic_rank(n, trials, bound, seed, method)?;
            let formula = invariant_count_formula(n)?;
            Ok(RowVerdict {
                n,
                lambda3_dim: report.lambda3_dim,
                sp_dim: report.sp_dim,
                generic_rank: report.max_rank,
                computed: report.invariant_count,
                formula,
                pass: report.invariant_count == formula,
                report,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let pass = rows.iter().all(|r| r.pass);
    Ok(VerificationReport {
        n_lo,
        n_hi,
        trials,
        bound,
        seed,
        method,
        rows,
        pass,
    })
}
