//! Command implementations behind the `subspace-codes` binary.
//!
//! Commands: `construct`, `encode`, `decode`, `verify`, `table-smooth`,
//! `demo`. Every command is deterministic given its arguments; the demo
//! draws randomness from an explicit seed. Exit codes: 0 success, 1
//! usage error, 2 verification failure.

use std::fmt;
use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::finite_field::{factorize, format_factorization, format_poly, parse_poly, FieldContext};
use crate::fq_matrix::FqMatrix;
use crate::hybrid::{parse_keyed, verify_isometry, HybridCodec};
use crate::orbit_codes::OrbitContext;
use crate::spread_codes::SpreadContext;
use crate::subspace::{SpreadVerdict, Subspace, SubspaceCode};

#[derive(Debug, Parser)]
#[command(
    name = "subspace-codes",
    version,
    about = "Spread and orbit code construction, message codecs and diagnostics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Construct a code and write its descriptor plus codeword list.
    Construct(ConstructArgs),
    /// Encode a message with a stored codec file.
    Encode(EncodeArgs),
    /// Decode a codeword with a stored codec file.
    Decode(DecodeArgs),
    /// Re-check a stored code file (codeword list, spread axioms,
    /// isometry).
    Verify(VerifyArgs),
    /// Smoothness report for 2^n - 1: factorization, largest prime and
    /// exponent against the n^2 bound.
    TableSmooth(TableSmoothArgs),
    /// Encode/corrupt/decode sweep over the hybrid pipeline.
    Demo(DemoArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CodeKind {
    Spread,
    Orbit,
    Hybrid,
}

impl fmt::Display for CodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CodeKind::Spread => "spread",
            CodeKind::Orbit => "orbit",
            CodeKind::Hybrid => "hybrid",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    /// Human-readable text.
    Text,
    /// One `key=value` record per line.
    Records,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    /// Code family to construct.
    #[arg(long, value_enum)]
    pub kind: CodeKind,
    /// Field characteristic (prime).
    #[arg(long)]
    pub q: u64,
    /// Codeword dimension.
    #[arg(long)]
    pub k: u32,
    /// Ambient dimension (k must divide n).
    #[arg(long)]
    pub n: u32,
    /// Modulus override, comma-separated coefficients, constant first.
    /// Degree k for spreads, degree n for orbit and hybrid codes.
    #[arg(long)]
    pub modulus: Option<String>,
    /// Output path for the code file.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct EncodeArgs {
    /// Code file produced by `construct`.
    #[arg(long)]
    pub codec: PathBuf,
    /// Message to encode.
    #[arg(long)]
    pub message: u128,
    /// Treat spread/hybrid messages as 0-based instead of 1-based.
    #[arg(long)]
    pub zero_based: bool,
    #[arg(long, value_enum, default_value = "text")]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct DecodeArgs {
    /// Code file produced by `construct`.
    #[arg(long)]
    pub codec: PathBuf,
    /// Codeword file in matrix text format; stdin when omitted.
    #[arg(long)]
    pub word: Option<PathBuf>,
    /// Report spread/hybrid messages 0-based instead of 1-based.
    #[arg(long)]
    pub zero_based: bool,
    #[arg(long, value_enum, default_value = "text")]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Code file to re-check.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct TableSmoothArgs {
    /// Values of n; defaults to the full built-in reference list.
    #[arg(value_name = "N")]
    pub ns: Vec<u32>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Corruption {
    None,
    EraseRow,
    AddRow,
}

impl fmt::Display for Corruption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Corruption::None => "none",
            Corruption::EraseRow => "erase-row",
            Corruption::AddRow => "add-row",
        })
    }
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub n: u32,
    /// Channel corruption applied to each codeword.
    #[arg(long, value_enum, default_value = "none")]
    pub corruption: Corruption,
    /// Number of random trials; exhaustive sweep when omitted.
    #[arg(long)]
    pub trials: Option<u64>,
    /// Seed for the trial randomness.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "text")]
    pub format: OutputFormat,
}

/// Dispatch a parsed command line. Returns the stdout payload and the
/// process exit code.
pub fn run(cli: Cli) -> Result<(String, i32)> {
    match cli.command {
        Command::Construct(args) => cmd_construct(args),
        Command::Encode(args) => cmd_encode(args),
        Command::Decode(args) => cmd_decode(args),
        Command::Verify(args) => cmd_verify(args),
        Command::TableSmooth(args) => cmd_table_smooth(args),
        Command::Demo(args) => cmd_demo(args),
    }
}

// ---------------------------------------------------------------------------
// code files
// ---------------------------------------------------------------------------

/// A stored code: descriptor plus the full codeword list.
pub enum CodecFile {
    Spread {
        ctx: SpreadContext,
        code: SubspaceCode,
    },
    Orbit {
        ctx: OrbitContext,
        code: SubspaceCode,
    },
    Hybrid {
        codec: HybridCodec,
        code: SubspaceCode,
    },
}

impl CodecFile {
    pub fn kind(&self) -> CodeKind {
        match self {
            CodecFile::Spread { .. } => CodeKind::Spread,
            CodecFile::Orbit { .. } => CodeKind::Orbit,
            CodecFile::Hybrid { .. } => CodeKind::Hybrid,
        }
    }

    pub fn code(&self) -> &SubspaceCode {
        match self {
            CodecFile::Spread { code, .. } => code,
            CodecFile::Orbit { code, .. } => code,
            CodecFile::Hybrid { code, .. } => code,
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        match self {
            CodecFile::Spread { ctx, code } => {
                s.push_str("kind=spread\n");
                s.push_str(&format!("q={}\n", ctx.q()));
                s.push_str(&format!("k={}\n", ctx.k()));
                s.push_str(&format!("n={}\n", ctx.n()));
                s.push_str(&format!("modulus={}\n", format_poly(ctx.modulus())));
                s.push('\n');
                s.push_str(&code.to_text());
            }
            CodecFile::Orbit { ctx, code } => {
                s.push_str("kind=orbit\n");
                ctx.write_descriptor(&mut s);
                s.push('\n');
                s.push_str(&code.to_text());
            }
            CodecFile::Hybrid { codec, code } => {
                s.push_str("kind=hybrid\n");
                codec.write_descriptor(&mut s);
                s.push('\n');
                s.push_str(&code.to_text());
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<CodecFile> {
        let mut lines = text.lines();
        let kind: String = parse_keyed(&mut lines, "kind")?;
        match kind.as_str() {
            "spread" => {
                let q: u64 = parse_keyed(&mut lines, "q")?;
                let k: u32 = parse_keyed(&mut lines, "k")?;
                let n: u32 = parse_keyed(&mut lines, "n")?;
                let modulus = parse_poly(&parse_keyed::<String, _>(&mut lines, "modulus")?)?;
                if k == 0 || n % k != 0 {
                    return Err(Error::Parse(format!("k={k} must divide n={n}")));
                }
                let ctx = SpreadContext::new(q, k, n / k, Some(modulus))?;
                let code = SubspaceCode::parse_text(&mut lines)?;
                Ok(CodecFile::Spread { ctx, code })
            }
            "orbit" => {
                let ctx = OrbitContext::parse_descriptor(&mut lines)?;
                let code = SubspaceCode::parse_text(&mut lines)?;
                Ok(CodecFile::Orbit { ctx, code })
            }
            "hybrid" => {
                let codec = HybridCodec::parse_descriptor(&mut lines)?;
                let code = SubspaceCode::parse_text(&mut lines)?;
                Ok(CodecFile::Hybrid { codec, code })
            }
            other => Err(Error::Parse(format!("unknown code kind {other:?}"))),
        }
    }

    pub fn load(path: &PathBuf) -> Result<CodecFile> {
        Self::from_text(&fs::read_to_string(path)?)
    }

    /// True when the message set starts at 1 (spread-indexed codecs).
    fn one_based(&self) -> bool {
        !matches!(self, CodecFile::Orbit { .. })
    }

    pub fn message_range(&self) -> (u128, u128) {
        match self {
            CodecFile::Spread { ctx, .. } => (1, ctx.message_count()),
            CodecFile::Orbit { ctx, .. } => (0, ctx.orbit_len() - 1),
            CodecFile::Hybrid { codec, .. } => (1, codec.message_count()),
        }
    }

    pub fn encode(&self, message: u128) -> Result<Subspace> {
        match self {
            CodecFile::Spread { ctx, .. } => ctx.encode(message),
            CodecFile::Orbit { ctx, .. } => ctx.encode(message),
            CodecFile::Hybrid { codec, .. } => codec.encode(message),
        }
    }

    /// Decode an exact codeword; words outside the code are rejected.
    pub fn decode(&self, word: &Subspace) -> Result<u128> {
        match self {
            CodecFile::Spread { ctx, .. } => {
                let i = ctx.decode(word)?;
                if &ctx.encode(i)? != word {
                    return Err(Error::NotInCode);
                }
                Ok(i)
            }
            CodecFile::Orbit { ctx, .. } => ctx.decode(word),
            CodecFile::Hybrid { codec, .. } => codec.decode(word),
        }
    }
}

// ---------------------------------------------------------------------------
// construct
// ---------------------------------------------------------------------------

fn cmd_construct(args: ConstructArgs) -> Result<(String, i32)> {
    if args.k == 0 || args.n % args.k != 0 {
        return Err(Error::InvalidParameter(format!(
            "k={} must divide n={}",
            args.k, args.n
        )));
    }
    let modulus = args.modulus.as_deref().map(parse_poly).transpose()?;
    let file = match args.kind {
        CodeKind::Spread => {
            let ctx = SpreadContext::new(args.q, args.k, args.n / args.k, modulus)?;
            let code = ctx.codewords()?;
            CodecFile::Spread { ctx, code }
        }
        CodeKind::Orbit => {
            let field = match modulus {
                Some(m) => FieldContext::new(args.q, args.n, m)?,
                None => FieldContext::generate(args.q, args.n, true)?,
            };
            let ctx = OrbitContext::subfield(&field, args.k)?;
            let code = ctx.codewords()?;
            CodecFile::Orbit { ctx, code }
        }
        CodeKind::Hybrid => {
            let codec = HybridCodec::new(args.q, args.k, args.n / args.k, None, modulus)?;
            let code = codec.channel_code()?;
            CodecFile::Hybrid { codec, code }
        }
    };
    fs::write(&args.out, file.to_text())?;

    let code = file.code();
    let verdict = code.verify_spread()?;
    let min_distance = code.min_distance().ok();
    let ok = verdict.is_spread();
    let mut out = String::new();
    match args.format {
        OutputFormat::Text => {
            out.push_str(&format!(
                "constructed {} code: q={} k={} n={}, {} codewords -> {}\n",
                file.kind(),
                args.q,
                args.k,
                args.n,
                code.len(),
                args.out.display()
            ));
            out.push_str(&format!("is_spread: {}\n", verdict_text(&verdict)));
            if let Some(d) = min_distance {
                out.push_str(&format!("min_distance: {d}\n"));
            }
        }
        OutputFormat::Records => {
            out.push_str(&format!("kind={}\n", file.kind()));
            out.push_str(&format!("q={}\nk={}\nn={}\n", args.q, args.k, args.n));
            out.push_str(&format!("codewords={}\n", code.len()));
            out.push_str(&format!("is_spread={}\n", ok));
            if let Some(d) = min_distance {
                out.push_str(&format!("min_distance={d}\n"));
            }
            out.push_str(&format!("out={}\n", args.out.display()));
        }
    }
    Ok((out, if ok { 0 } else { 2 }))
}

fn verdict_text(verdict: &SpreadVerdict) -> String {
    match verdict {
        SpreadVerdict::Spread => "true".to_string(),
        SpreadVerdict::NotSpread(failure) => format!("false ({failure})"),
    }
}

// ---------------------------------------------------------------------------
// encode / decode
// ---------------------------------------------------------------------------

fn cmd_encode(args: EncodeArgs) -> Result<(String, i32)> {
    let file = CodecFile::load(&args.codec)?;
    let message = if args.zero_based && file.one_based() {
        args.message
            .checked_add(1)
            .ok_or_else(|| Error::InvalidParameter("message overflows".into()))?
    } else {
        args.message
    };
    let word = file.encode(message)?;
    let out = match args.format {
        OutputFormat::Text => word.basis().to_text(),
        OutputFormat::Records => format!(
            "message={}\nword={}\n",
            args.message,
            word.basis()
                .row_vecs()
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|v| v.to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .collect::<Vec<_>>()
                .join("; ")
        ),
    };
    Ok((out, 0))
}

fn cmd_decode(args: DecodeArgs) -> Result<(String, i32)> {
    let file = CodecFile::load(&args.codec)?;
    let text = match &args.word {
        Some(path) => fs::read_to_string(path)?,
        None => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf)?;
            buf
        }
    };
    let word = Subspace::canonicalize(&FqMatrix::from_text(&text)?)?;
    let mut message = file.decode(&word)?;
    if args.zero_based && file.one_based() {
        message -= 1;
    }
    let out = match args.format {
        OutputFormat::Text => format!("{message}\n"),
        OutputFormat::Records => format!("message={message}\n"),
    };
    Ok((out, 0))
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn cmd_verify(args: VerifyArgs) -> Result<(String, i32)> {
    let file = CodecFile::load(&args.input)?;
    let code = file.code();
    let mut checks: Vec<(String, bool)> = Vec::new();

    let recomputed = match &file {
        CodecFile::Spread { ctx, .. } => ctx.codewords()?,
        CodecFile::Orbit { ctx, .. } => ctx.codewords()?,
        CodecFile::Hybrid { codec, .. } => codec.channel_code()?,
    };
    checks.push((
        "stored codewords match the recomputed enumeration".to_string(),
        recomputed.words() == code.words(),
    ));

    let verdict = code.verify_spread()?;
    checks.push((
        format!("spread axioms: {}", verdict_text(&verdict)),
        verdict.is_spread(),
    ));

    let expected_min = 2 * code.dim();
    match code.min_distance() {
        Ok(d) => checks.push((
            format!("minimum distance {d} (expected {expected_min})"),
            d == expected_min,
        )),
        Err(_) => checks.push(("minimum distance needs two codewords".to_string(), true)),
    }

    if let CodecFile::Hybrid { codec, .. } = &file {
        let s1 = codec.spread().codewords()?;
        let ok = verify_isometry(&s1, code, codec.isometry())?;
        checks.push((
            "isometry maps the spread onto the channel code".to_string(),
            ok,
        ));
    }

    let ok = checks.iter().all(|(_, pass)| *pass);
    let mut out = String::new();
    match args.format {
        OutputFormat::Text => {
            out.push_str(&format!(
                "verify {} ({} code, {} codewords)\n",
                args.input.display(),
                file.kind(),
                code.len()
            ));
            for (desc, pass) in &checks {
                out.push_str(&format!(
                    "  [{}] {desc}\n",
                    if *pass { "ok" } else { "FAIL" }
                ));
            }
            out.push_str(&format!("result: {}\n", if ok { "ok" } else { "FAIL" }));
        }
        OutputFormat::Records => {
            out.push_str(&format!("kind={}\n", file.kind()));
            out.push_str(&format!("codewords={}\n", code.len()));
            for (i, (desc, pass)) in checks.iter().enumerate() {
                out.push_str(&format!("check{i}={pass} ({desc})\n"));
            }
            out.push_str(&format!("result={ok}\n"));
        }
    }
    Ok((out, if ok { 0 } else { 2 }))
}

// ---------------------------------------------------------------------------
// table-smooth
// ---------------------------------------------------------------------------

/// Reference values (largest prime factor, largest exponent) for the
/// `n^2`-smooth orders `2^n - 1` as commonly tabulated. The derived
/// values replace them wherever factorization disagrees, with a
/// mismatch note.
const REFERENCE_SMOOTH_TABLE: &[(u32, u128, u32)] = &[
    (6, 7, 3),
    (8, 17, 1),
    (9, 73, 1),
    (10, 31, 1),
    (11, 89, 1),
    (12, 13, 2),
    (14, 127, 1),
    (15, 151, 1),
    (18, 73, 3),
    (20, 41, 2),
    (21, 337, 2),
    (24, 241, 2),
    (28, 127, 1),
    (30, 331, 2),
    (36, 109, 3),
    (48, 673, 2),
    (60, 1321, 2),
];

/// Default `n` list: every row of the reference table.
pub fn reference_table_ns() -> Vec<u32> {
    REFERENCE_SMOOTH_TABLE.iter().map(|&(n, _, _)| n).collect()
}

/// One row of the smoothness report for `2^n - 1`.
#[derive(Debug, Clone)]
pub struct SmoothRow {
    pub n: u32,
    pub factors: Vec<(u128, u32)>,
    pub max_prime: u128,
    pub max_exponent: u32,
    /// The smoothness bound `n^2`.
    pub bound: u128,
    /// Whether every prime factor is at most `n^2`.
    pub smooth: bool,
    /// Set when the derived values differ from the reference table.
    pub reference_mismatch: Option<String>,
}

/// Factorization-derived smoothness rows for `2^n - 1`.
pub fn smooth_rows(ns: &[u32]) -> Result<Vec<SmoothRow>> {
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        if n == 0 || n > 64 {
            return Err(Error::InvalidParameter(format!(
                "n={n} outside the supported range 1..=64"
            )));
        }
        let value = (1u128 << n) - 1;
        let factors = factorize(value);
        let max_prime = factors.iter().map(|&(p, _)| p).max().unwrap_or(1);
        let max_exponent = factors.iter().map(|&(_, e)| e).max().unwrap_or(0);
        let bound = (n as u128) * (n as u128);
        let reference_mismatch = REFERENCE_SMOOTH_TABLE
            .iter()
            .find(|&&(rn, _, _)| rn == n)
            .and_then(|&(_, ref_p, ref_e)| {
                let mut notes = Vec::new();
                if ref_p != max_prime {
                    notes.push(format!("reference max_p {ref_p}, derived {max_prime}"));
                }
                if ref_e != max_exponent {
                    notes.push(format!("reference max_e {ref_e}, derived {max_exponent}"));
                }
                if notes.is_empty() {
                    None
                } else {
                    Some(notes.join("; "))
                }
            });
        rows.push(SmoothRow {
            n,
            factors,
            max_prime,
            max_exponent,
            bound,
            smooth: max_prime <= bound,
            reference_mismatch,
        });
    }
    Ok(rows)
}

fn cmd_table_smooth(args: TableSmoothArgs) -> Result<(String, i32)> {
    let ns = if args.ns.is_empty() {
        reference_table_ns()
    } else {
        args.ns.clone()
    };
    let rows = smooth_rows(&ns)?;
    let mut out = String::new();
    match args.format {
        OutputFormat::Text => {
            out.push_str(&format!(
                "{:>3}  {:<42} {:>8} {:>6} {:>6} {:>7}  note\n",
                "n", "2^n - 1", "max_p", "max_e", "n^2", "smooth"
            ));
            for r in &rows {
                out.push_str(&format!(
                    "{:>3}  {:<42} {:>8} {:>6} {:>6} {:>7}  {}\n",
                    r.n,
                    format_factorization(&r.factors),
                    r.max_prime,
                    r.max_exponent,
                    r.bound,
                    if r.smooth { "yes" } else { "no" },
                    r.reference_mismatch.as_deref().unwrap_or("")
                ));
            }
        }
        OutputFormat::Records => {
            for r in &rows {
                out.push_str(&format!(
                    "n={} factors={} max_p={} max_e={} bound={} smooth={} note={}\n",
                    r.n,
                    format_factorization(&r.factors),
                    r.max_prime,
                    r.max_exponent,
                    r.bound,
                    r.smooth,
                    r.reference_mismatch.as_deref().unwrap_or("-")
                ));
            }
        }
    }
    Ok((out, 0))
}

// ---------------------------------------------------------------------------
// demo
// ---------------------------------------------------------------------------

/// Outcome of a demo sweep.
#[derive(Debug, Clone)]
pub struct DemoReport {
    pub q: u64,
    pub k: u32,
    pub n: u32,
    pub corruption: Corruption,
    pub trials: u64,
    pub successes: u64,
    /// Trials where more than one codeword attained the minimum
    /// distance (the decoder picks the lowest index).
    pub ties: u64,
    pub elapsed: Duration,
}

impl DemoReport {
    pub fn success_rate(&self) -> f64 {
        if self.trials == 0 {
            1.0
        } else {
            self.successes as f64 / self.trials as f64
        }
    }
}

/// Run the hybrid pipeline end to end: encode, corrupt, nearest-codeword
/// decode over the channel code, message decode.
///
/// With `trials = None` the sweep is exhaustive: every message for
/// `none`, every message and basis row for `erase-row`, and every
/// message with one seeded random insertion for `add-row`. With
/// `trials = Some(t)` messages and corruption positions are drawn from
/// the seeded generator.
pub fn run_demo(
    q: u64,
    k: u32,
    n: u32,
    corruption: Corruption,
    trials: Option<u64>,
    seed: u64,
) -> Result<DemoReport> {
    if k == 0 || n % k != 0 {
        return Err(Error::InvalidParameter(format!("k={k} must divide n={n}")));
    }
    if corruption == Corruption::EraseRow && k < 2 {
        return Err(Error::InvalidParameter(
            "erase-row needs codeword dimension k >= 2".into(),
        ));
    }
    let codec = HybridCodec::new(q, k, n / k, None, None)?;
    let channel = codec.channel_code()?;
    let total = codec.message_count();
    let mut rng = StdRng::seed_from_u64(seed);

    // (message, row to erase) pairs; the row index is ignored unless the
    // corruption model needs it
    let mut cases: Vec<(u128, usize)> = Vec::new();
    match trials {
        None => match corruption {
            Corruption::None | Corruption::AddRow => {
                for i in 1..=total {
                    cases.push((i, 0));
                }
            }
            Corruption::EraseRow => {
                for i in 1..=total {
                    for r in 0..k as usize {
                        cases.push((i, r));
                    }
                }
            }
        },
        Some(t) => {
            for _ in 0..t {
                let i = rng.random_range(1..=total);
                let r = rng.random_range(0..k as usize);
                cases.push((i, r));
            }
        }
    }

    let started = Instant::now();
    let mut successes = 0u64;
    let mut ties = 0u64;
    for &(message, row) in &cases {
        let word = codec.encode(message)?;
        let received = match corruption {
            Corruption::None => word.clone(),
            Corruption::EraseRow => {
                let rows: Vec<Vec<u64>> = word
                    .basis()
                    .row_vecs()
                    .into_iter()
                    .enumerate()
                    .filter_map(|(r, v)| (r != row).then_some(v))
                    .collect();
                Subspace::spanned_by(&FqMatrix::from_rows(q, &rows)?)?
            }
            Corruption::AddRow => {
                let mut extra = vec![0u64; n as usize];
                while extra.iter().all(|&v| v == 0) {
                    for v in extra.iter_mut() {
                        *v = rng.random_range(0..q);
                    }
                }
                let mut rows = word.basis().row_vecs();
                rows.push(extra);
                Subspace::spanned_by(&FqMatrix::from_rows(q, &rows)?)?
            }
        };
        let (idx, _, attained) = channel.nearest_with_stats(&received)?;
        if attained > 1 {
            ties += 1;
        }
        let decoded = codec.decode(channel.get(idx).expect("index from nearest"))?;
        if decoded == message {
            successes += 1;
        }
    }
    Ok(DemoReport {
        q,
        k,
        n,
        corruption,
        trials: cases.len() as u64,
        successes,
        ties,
        elapsed: started.elapsed(),
    })
}

fn cmd_demo(args: DemoArgs) -> Result<(String, i32)> {
    let report = run_demo(
        args.q,
        args.k,
        args.n,
        args.corruption,
        args.trials,
        args.seed,
    )?;
    let mut out = String::new();
    match args.format {
        OutputFormat::Text => {
            out.push_str(&format!(
                "hybrid demo q={} k={} n={} corruption={}\n",
                report.q, report.k, report.n, report.corruption
            ));
            out.push_str(&format!(
                "trials: {}, recovered: {} ({:.1}%), ties: {}\n",
                report.trials,
                report.successes,
                report.success_rate() * 100.0,
                report.ties
            ));
            out.push_str(&format!("elapsed: {:?}\n", report.elapsed));
        }
        OutputFormat::Records => {
            out.push_str(&format!("q={}\nk={}\nn={}\n", report.q, report.k, report.n));
            out.push_str(&format!("corruption={}\n", report.corruption));
            out.push_str(&format!("trials={}\n", report.trials));
            out.push_str(&format!("successes={}\n", report.successes));
            out.push_str(&format!("ties={}\n", report.ties));
            out.push_str(&format!("success_rate={}\n", report.success_rate()));
            out.push_str(&format!("elapsed_ms={}\n", report.elapsed.as_millis()));
        }
    }
    Ok((out, 0))
}
