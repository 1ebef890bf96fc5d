//! `symplinv` — verify invariant counts, query ranks and stabilizers, export
//! distribution matrices and evaluate the jet-level exterior derivative.
//!
//! Exit codes: 0 success / PASS, 1 verification FAIL, 2 usage or input error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use symplinv::action::exterior_derivative_jet;
use symplinv::invariants::{
    distribution_matrix, rank_of, sample_point, stabilizer_kernel, theta0, verify_range,
    RankCertificate, RankMethod, VerificationReport, DEFAULT_BOUND, DEFAULT_TRIALS,
};
use symplinv::linalg::{export_matrix, format_rational, MatrixFormat, DEFAULT_PRIME};
use symplinv::trivector::{Jet1TwoForm, JetJson, Trivector, TrivectorJson};

const DEFAULT_SEED: u64 = 42;

#[derive(Parser, Debug)]
#[command(name = "symplinv", version, about = "Invariants of maximal-rank 2-forms under sp(2n)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compare the computed invariant count with the closed form for a range of n.
    Verify(VerifyArgs),
    /// Rank of the distribution matrix at one point.
    Rank(PointCmd),
    /// Stabilizer subalgebra of a point: dimension and basis matrices.
    Stabilizer(PointCmd),
    /// Write the distribution matrix at a point.
    Export(ExportArgs),
    /// Trivector (dΩ)_x from a first jet of a 2-form.
    Delta(DeltaArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Exact,
    Modular,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum Format {
    Human,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PointSource {
    Random,
    Theta0,
    Zero,
    File,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ExportFormat {
    #[value(alias = "mtx", alias = "matrix-market")]
    Matrixmarket,
    Json,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "human")]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Omit the `generated_at` field from JSON output.
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Args, Debug)]
struct RankArgs {
    #[arg(long, value_enum, default_value = "exact")]
    method: Method,
    /// Prime for the modular method.
    #[arg(long, env = "SYMPLINV_PRIME", default_value_t = DEFAULT_PRIME)]
    prime: u64,
}

#[derive(Args, Debug)]
struct PointArgs {
    /// Half the dimension of V (required unless the point comes from a file).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_enum, default_value = "random")]
    point: PointSource,
    /// Trivector JSON for `--point file`.
    #[arg(long)]
    file: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Coordinates of random points are drawn from [-bound, bound].
    #[arg(long, default_value_t = DEFAULT_BOUND)]
    bound: i64,
}

#[derive(Args, Debug)]
struct PointCmd {
    #[command(flatten)]
    point: PointArgs,
    #[command(flatten)]
    rank: RankArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Inclusive range `lo..hi`.
    #[arg(long, default_value = "4..8")]
    n_range: String,
    #[arg(long, env = "SYMPLINV_TRIALS", default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_BOUND)]
    bound: i64,
    #[command(flatten)]
    rank: RankArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct ExportArgs {
    #[command(flatten)]
    point: PointArgs,
    #[arg(long, value_enum, default_value = "matrixmarket")]
    format: ExportFormat,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DeltaArgs {
    /// Jet JSON: {"two_n", "F": [["h,i", v]], "DF": [["h,i,l", v]]}.
    #[arg(long)]
    file: PathBuf,
    #[command(flatten)]
    out: OutputArgs,
}

/// An error carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<symplinv::Error> for Failure {
    fn from(e: symplinv::Error) -> Self {
        usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        usage(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        usage(e.to_string())
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(a) => cmd_verify(a),
        Command::Rank(a) => cmd_rank(a),
        Command::Stabilizer(a) => cmd_stabilizer(a),
        Command::Export(a) => cmd_export(a),
        Command::Delta(a) => cmd_delta(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn parse_range(s: &str) -> Result<(usize, usize), Failure> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| usage(format!("expected a range lo..hi, got {s:?}")))?;
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    let parse = |x: &str| {
        x.trim()
            .parse::<usize>()
            .map_err(|_| usage(format!("bad range bound {x:?}")))
    };
    let (lo, hi) = (parse(lo)?, parse(hi)?);
    if lo < 1 || lo > hi {
        return Err(usage(format!("invalid range {lo}..{hi}: need 1 <= lo <= hi")));
    }
    Ok((lo, hi))
}

fn rank_method(a: &RankArgs) -> RankMethod {
    match a.method {
        Method::Exact => RankMethod::Exact,
        Method::Modular => RankMethod::Modular { prime: a.prime },
    }
}

fn emit(out: &OutputArgs, human: String, mut value: Value) -> Result<(), Failure> {
    let text = match out.format {
        Format::Human => human,
        Format::Json => {
            if !out.no_timestamp {
                let secs = SystemTime::now()
                    .duration_since(UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0);
                if let Value::Object(map) = &mut value {
                    map.insert("generated_at".into(), json!(secs));
                }
            }
            serde_json::to_string_pretty(&value)? + "\n"
        }
    };
    write_text(out.output.as_deref(), text.as_bytes())
}

fn write_text(path: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, bytes)?,
        None => io::stdout().lock().write_all(bytes)?,
    }
    Ok(())
}

fn cmd_verify(a: VerifyArgs) -> Result<u8, Failure> {
    let (lo, hi) = parse_range(&a.n_range)?;
    if a.trials == 0 {
        return Err(usage("--trials must be at least 1"));
    }
    let report = verify_range(lo, hi, a.trials, a.bound, a.seed, rank_method(&a.rank))?;
    let human = verify_table(&report);
    emit(&a.out, human, serde_json::to_value(&report)?)?;
    Ok(if report.pass { 0 } else { 1 })
}

fn method_label(m: RankMethod) -> String {
    match m {
        RankMethod::Exact => "exact".into(),
        RankMethod::Modular { prime } => format!("modular p={prime} (ranks are lower bounds)"),
    }
}

fn verify_table(r: &VerificationReport) -> String {
    let mut s = format!(
        "verified range n = {}..{}  trials = {}  bound = {}  seed = {}  method = {}\n",
        r.n_lo,
        r.n_hi,
        r.trials,
        r.bound,
        r.seed,
        method_label(r.method)
    );
    s += &format!(
        "{:>3} {:>8} {:>6} {:>6} {:>10} {:>9}  {}\n",
        "n", "C(2n,3)", "sp", "rank", "N", "N_formula", "result"
    );
    for row in &r.rows {
        s += &format!(
            "{:>3} {:>8} {:>6} {:>6} {:>10} {:>9}  {}\n",
            row.n,
            row.lambda3_dim,
            row.sp_dim,
            row.generic_rank,
            row.computed,
            row.formula,
            if row.pass { "PASS" } else { "FAIL" }
        );
    }
    s += if r.pass { "PASS\n" } else { "FAIL\n" };
    s
}

/// The requested point and, for sampled points, the seed.
fn load_point(a: &PointArgs) -> Result<(Trivector, Option<u64>), Failure> {
    let need_n = || a.n.ok_or_else(|| usage("--n is required for this point source"));
    let (point, seed) = match a.point {
        PointSource::Random => {
            if a.bound < 1 {
                return Err(usage("--bound must be at least 1"));
            }
            (sample_point(need_n()?, a.bound, a.seed, 0)?, Some(a.seed))
        }
        PointSource::Theta0 => (theta0(need_n()?)?, None),
        PointSource::Zero => (Trivector::zero(2 * need_n()?)?, None),
        PointSource::File => {
            let path = a.file.as_ref().ok_or_else(|| usage("--point file needs --file"))?;
            let text = fs::read_to_string(path)
                .map_err(|e| usage(format!("{}: {e}", path.display())))?;
            let j: TrivectorJson = serde_json::from_str(&text)
                .map_err(|e| usage(format!("{}: {e}", path.display())))?;
            (Trivector::from_json(&j)?, None)
        }
    };
    if let Some(n) = a.n {
        if point.n() != n {
            return Err(usage(format!("point has n = {}, but --n {n} was given", point.n())));
        }
    }
    Ok((point, seed))
}

fn certificate_text(c: &RankCertificate) -> String {
    let method = match c.prime {
        Some(p) => format!("modular p={p} (lower bound)"),
        None => "exact".into(),
    };
    let mut s = format!(
        "n = {}  matrix {}x{}  method {}\nrank = {}\nkernel_dim = {}\n",
        c.n, c.rows, c.cols, method, c.rank, c.kernel_dim
    );
    if let Some(seed) = c.seed {
        s += &format!("seed = {seed}\n");
    }
    if let Some(m) = &c.modular_check {
        s += &format!(
            "modular check p={}: rank {} ({})\n",
            m.prime,
            m.rank,
            if m.agrees { "agrees" } else { "DISAGREES" }
        );
    }
    s
}

fn cmd_rank(a: PointCmd) -> Result<u8, Failure> {
    let (point, seed) = load_point(&a.point)?;
    let cert = rank_of(&distribution_matrix(&point)?, rank_method(&a.rank), seed)?;
    emit(&a.out, certificate_text(&cert), serde_json::to_value(&cert)?)?;
    Ok(0)
}

fn cmd_stabilizer(a: PointCmd) -> Result<u8, Failure> {
    let (point, seed) = load_point(&a.point)?;
    let st = stabilizer_kernel(&point)?;
    let strings = |v: &[symplinv::linalg::Rational]| -> Vec<String> {
        v.iter().map(format_rational).collect()
    };
    let matrices: Vec<Vec<Vec<String>>> = st
        .elements
        .iter()
        .map(|e| {
            let m = e.matrix();
            (0..m.rows()).map(|r| strings(m.row(r))).collect()
        })
        .collect();
    let mut human = format!("n = {}\ndimension = {}\n", point.n(), st.dim());
    for (k, m) in matrices.iter().enumerate() {
        human += &format!("U_{k}:\n");
        for row in m {
            human += &format!("  [{}]\n", row.join(", "));
        }
    }
    let value = json!({
        "n": point.n(),
        "point": point.to_json(),
        "seed": seed,
        "dimension": st.dim(),
        "vectors": st.vectors.iter().map(|v| strings(v)).collect::<Vec<_>>(),
        "matrices": matrices,
        "tool_version": env!("CARGO_PKG_VERSION"),
    });
    emit(&a.out, human, value)?;
    Ok(0)
}

fn cmd_export(a: ExportArgs) -> Result<u8, Failure> {
    let (point, _) = load_point(&a.point)?;
    let dm = distribution_matrix(&point)?;
    let format = match a.format {
        ExportFormat::Matrixmarket => MatrixFormat::MatrixMarket,
        ExportFormat::Json => MatrixFormat::Json,
    };
    let mut buf = Vec::new();
    export_matrix(&dm.matrix, format, &mut buf)?;
    write_text(a.output.as_deref(), &buf)?;
    Ok(0)
}

fn cmd_delta(a: DeltaArgs) -> Result<u8, Failure> {
    let text = fs::read_to_string(&a.file)
        .map_err(|e| usage(format!("{}: {e}", a.file.display())))?;
    let j: JetJson =
        serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", a.file.display())))?;
    let jet = Jet1TwoForm::from_json(&j)?;
    let theta = exterior_derivative_jet(&jet);
    let tj = theta.to_json();
    let mut human = format!("two_n = {}\n", tj.two_n);
    if tj.coords.is_empty() {
        human += "0\n";
    }
    for (k, v) in &tj.coords {
        human += &format!("y[{k}] = {v}\n");
    }
    emit(&a.out, human, serde_json::to_value(&tj)?)?;
    Ok(0)
}
