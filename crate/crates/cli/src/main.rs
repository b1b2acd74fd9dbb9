//! `opplus`: solve, search and verify factorizations of `K_n + I`.
//!
//! Exit codes: 0 success or accept, 1 verifier reject, 2 unsolvable or
//! proved none, 3 open or not found, 4 incomplete, 64 usage, 65 malformed
//! input data, 70 internal failure, 74 I/O failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use oberwolfach::compose::{self, Provider, SolveOutcome};
use oberwolfach::equipartite::{
    check_certificate, find_equipartite_factorization, existence_conditions, CacheLookup, CertCache, EquipartiteSpec,
    ProviderError, Verdict,
};
use oberwolfach::format;
use oberwolfach::search::{self, SearchBudget, SearchMode, SearchOutcome};
use oberwolfach::verify::verify_against;
use oberwolfach::{verify_factorization, Certificate, Edge, Error, ProblemSpec, Variant};

const EXIT_REJECT: u8 = 1;
const EXIT_NONE: u8 = 2;
const EXIT_OPEN: u8 = 3;
const EXIT_INCOMPLETE: u8 = 4;
const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;
const EXIT_SOFTWARE: u8 = 70;
const EXIT_IO: u8 = 74;

#[derive(Parser)]
#[command(name = "opplus", version, about = "Factorizations of K_n + I into 2-factors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide an instance and build a certificate when possible.
    Solve(SolveArgs),
    /// Check a certificate file.
    Verify(VerifyArgs),
    /// Run the exhaustive or hill-climbing search directly.
    Search(SearchArgs),
    /// Parity count against rotational starters for n = 4m.
    Obstruct {
        #[arg(long)]
        m: u32,
    },
    /// Existence and certificates for complete equipartite graphs.
    Equipartite(EquipartiteArgs),
}

#[derive(Args)]
struct BudgetArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 600.0)]
    max_seconds: f64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

impl BudgetArgs {
    fn budget(&self, mode: SearchMode) -> SearchBudget {
        SearchBudget {
            seed: self.seed,
            max_seconds: self.max_seconds,
            workers: self.workers.max(1),
            mode,
            ..SearchBudget::default()
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, required_unless_present = "lengths", conflicts_with = "lengths")]
    m: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    lengths: Option<Vec<usize>>,
    /// Sub-factorization certificates to use before searching.
    #[arg(long = "provider-cert")]
    provider_cert: Vec<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, env = "OPCERT_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args)]
struct VerifyArgs {
    file: PathBuf,
    /// Expected instance, e.g. "n=10,m=5" or "n=10,lengths=4/6".
    #[arg(long)]
    spec: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Opplus,
    Opminus,
    Equipartite,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Hillclimb,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, value_enum)]
    variant: VariantArg,
    /// Vertex count; implied by --alpha and --k for equipartite.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, conflicts_with = "lengths")]
    m: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    lengths: Option<Vec<usize>>,
    #[arg(long)]
    alpha: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// Missing matching for opminus, e.g. "0-1,2-3". Defaults to 2i-(2i+1).
    #[arg(long)]
    matching: Option<String>,
    #[arg(long, value_enum, default_value = "hillclimb")]
    mode: ModeArg,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args)]
struct EquipartiteArgs {
    #[arg(long)]
    alpha: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    ell: usize,
    #[arg(long, conflicts_with = "import")]
    search: bool,
    #[arg(long)]
    import: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, env = "OPCERT_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    #[command(flatten)]
    budget: BudgetArgs,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match &e {
            Error::InvalidParameter(_) | Error::InvalidSpec(_) | Error::ExhaustiveTooLarge { .. } => EXIT_USAGE,
            Error::Parse(_) | Error::VertexOutOfRange { .. } | Error::SpecMismatch(_) | Error::Rejected(_) => EXIT_DATA,
            Error::Io { .. } => EXIT_IO,
            Error::Construction(_) => EXIT_SOFTWARE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Solve(a) => solve(a),
        Command::Verify(a) => verify(a),
        Command::Search(a) => search_cmd(a),
        Command::Obstruct { m } => obstruct(m),
        Command::Equipartite(a) => equipartite(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read_cert(path: &Path) -> Result<Certificate, Failure> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    format::parse(&text).map_err(|e| Failure {
        code: EXIT_DATA,
        message: format!("{}: {e}", path.display()),
    })
}

fn emit(cert: &Certificate, out: Option<&Path>) -> Result<(), Failure> {
    let text = format::to_text(cert);
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|source| Error::Io {
                path: path.to_path_buf(),
                source,
            })?;
            println!("wrote {} ({} factors)", path.display(), cert.factors.len());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn solve(a: SolveArgs) -> CmdResult {
    let mut provider = Provider::new(a.budget.budget(SearchMode::HillClimb));
    if let Some(dir) = &a.cache_dir {
        provider = provider.with_cache(CertCache::new(dir));
    }
    for path in &a.provider_cert {
        provider.import(read_cert(path)?);
    }
    let outcome = match (&a.lengths, a.m) {
        (Some(lengths), _) => {
            let spec = ProblemSpec::new(Variant::KnPlusI, a.n, lengths.clone())?;
            compose::solve(&spec, &mut provider)
        }
        (None, Some(m)) => compose::solve_uniform(a.n, m, &mut provider),
        (None, None) => return Err(Failure::usage("one of --m or --lengths is required")),
    };
    for event in &provider.events {
        eprintln!("note: {event}");
    }
    let code = match outcome? {
        SolveOutcome::Solved(cert) => {
            emit(&cert, a.out.as_deref())?;
            0
        }
        SolveOutcome::Unsolvable(s) => {
            println!("UNSOLVABLE: {}", s.authority);
            EXIT_NONE
        }
        SolveOutcome::Open(s) => {
            println!("OPEN: {}", s.authority);
            EXIT_OPEN
        }
        SolveOutcome::Unsupported(s) => {
            println!("SOLVABLE, NO CONSTRUCTION: {} (not implemented here)", s.authority);
            EXIT_OPEN
        }
        SolveOutcome::Incomplete(why) => {
            println!("INCOMPLETE: {why}");
            EXIT_INCOMPLETE
        }
    };
    Ok(code)
}

/// Parses "n=10,m=5", "n=10,lengths=4/6", "variant=equipartite,a=3,k=10,m=5".
fn parse_spec_arg(text: &str) -> Result<ProblemSpec, Failure> {
    let (mut n, mut m, mut lengths, mut a, mut k) = (None, None, None, None, None);
    let mut variant = "opplus".to_string();
    let num = |key: &str, v: &str| {
        v.trim()
            .parse::<usize>()
            .map_err(|_| Failure::usage(format!("--spec: {key}={v} is not a number")))
    };
    for part in text.split(',').filter(|p| !p.trim().is_empty()) {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| Failure::usage(format!("--spec: expected key=value, got {part:?}")))?;
        match key.trim() {
            "n" => n = Some(num("n", value)?),
            "m" => m = Some(num("m", value)?),
            "a" | "alpha" => a = Some(num("a", value)?),
            "k" => k = Some(num("k", value)?),
            "lengths" => lengths = Some(value.split('/').map(|v| num("lengths", v)).collect::<Result<Vec<_>, _>>()?),
            "variant" => variant = value.trim().to_lowercase(),
            other => return Err(Failure::usage(format!("--spec: unknown key {other:?}"))),
        }
    }
    let variant = match (variant.as_str(), a, k) {
        ("opplus" | "kn_plus_i", _, _) => Variant::KnPlusI,
        ("opminus" | "kn_minus_i", _, _) => Variant::KnMinusI,
        ("equipartite", Some(parts), Some(part_size)) => Variant::Equipartite { parts, part_size },
        ("equipartite", _, _) => return Err(Failure::usage("--spec: equipartite needs a= and k=")),
        (other, _, _) => return Err(Failure::usage(format!("--spec: unknown variant {other:?}"))),
    };
    let n = match (n, variant) {
        (Some(n), _) => n,
        (None, Variant::Equipartite { parts, part_size }) => parts * part_size,
        _ => return Err(Failure::usage("--spec: n= is required")),
    };
    let spec = match (m, lengths) {
        (Some(m), None) => ProblemSpec::uniform(variant, n, m)?,
        (None, Some(l)) => ProblemSpec::new(variant, n, l)?,
        _ => return Err(Failure::usage("--spec: give exactly one of m= or lengths=")),
    };
    Ok(spec)
}

fn verify(a: VerifyArgs) -> CmdResult {
    let expected = a.spec.as_deref().map(parse_spec_arg).transpose()?;
    let cert = read_cert(&a.file)?;
    let report = match &expected {
        Some(spec) => verify_against(&cert, spec),
        None => verify_factorization(&cert),
    };
    print!("{report}");
    Ok(if report.is_accepted() { 0 } else { EXIT_REJECT })
}

fn parse_matching(text: &str) -> Result<Vec<Edge>, Failure> {
    text.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|pair| {
            let bad = || Failure::usage(format!("--matching: bad pair {pair:?}"));
            let (u, v) = pair.trim().split_once('-').ok_or_else(bad)?;
            let u = u.parse().map_err(|_| bad())?;
            let v = v.parse().map_err(|_| bad())?;
            Edge::try_new(u, v).ok_or_else(bad)
        })
        .collect()
}

fn search_cmd(a: SearchArgs) -> CmdResult {
    let mode = match a.mode {
        ModeArg::Exhaustive => SearchMode::Exhaustive,
        ModeArg::Hillclimb => SearchMode::HillClimb,
    };
    let budget = a.budget.budget(mode);
    let n = match (a.variant, a.n, a.alpha, a.k) {
        (VariantArg::Equipartite, n, Some(alpha), Some(k)) => {
            if n.is_some_and(|n| n != alpha * k) {
                return Err(Failure::usage("--n disagrees with --alpha * --k"));
            }
            alpha * k
        }
        (VariantArg::Equipartite, ..) => return Err(Failure::usage("equipartite search needs --alpha and --k")),
        (_, Some(n), None, None) => n,
        (_, None, ..) => return Err(Failure::usage("--n is required")),
        _ => return Err(Failure::usage("--alpha and --k only apply to the equipartite variant")),
    };
    let lengths = match (a.m, a.lengths) {
        (Some(m), None) if m > 0 && n % m == 0 => vec![m; n / m],
        (Some(m), None) => return Err(Failure::usage(format!("--m {m} does not divide n={n}"))),
        (None, Some(l)) => l,
        _ => return Err(Failure::usage("one of --m or --lengths is required")),
    };
    if a.matching.is_some() && !matches!(a.variant, VariantArg::Opminus) {
        return Err(Failure::usage("--matching only applies to the opminus variant"));
    }
    let outcome = match a.variant {
        VariantArg::Opplus => search::search_op_plus(&ProblemSpec::new(Variant::KnPlusI, n, lengths)?, &budget)?,
        VariantArg::Opminus => {
            let matching = match &a.matching {
                Some(text) => parse_matching(text)?,
                None => (0..n as u32 / 2).map(|i| Edge::new(2 * i, 2 * i + 1)).collect(),
            };
            search::search_kn_minus_i(n, &lengths, &matching, &budget)?
        }
        VariantArg::Equipartite => {
            let variant = Variant::Equipartite {
                parts: a.alpha.unwrap_or_default(),
                part_size: a.k.unwrap_or_default(),
            };
            search::search_equipartite(&ProblemSpec::new(variant, n, lengths)?, &budget)?
        }
    };
    match outcome {
        SearchOutcome::Found(cert) => {
            emit(&cert, a.out.as_deref())?;
            Ok(0)
        }
        SearchOutcome::NotFound => {
            println!("NOT FOUND within budget");
            Ok(EXIT_OPEN)
        }
        SearchOutcome::ProvedNone => {
            println!("PROVED NONE: exhaustive search found no factorization");
            Ok(EXIT_NONE)
        }
    }
}

fn obstruct(m: u32) -> CmdResult {
    print!("{}", search::obstruction_4m(m)?);
    Ok(0)
}

fn equipartite(a: EquipartiteArgs) -> CmdResult {
    let spec = EquipartiteSpec::new(a.alpha, a.k, a.ell);
    let feasibility = existence_conditions(spec)?;
    println!("{spec}: {feasibility}");
    if feasibility.verdict == Verdict::NotExists {
        return Ok(EXIT_NONE);
    }
    let cache = a.cache_dir.as_ref().map(CertCache::new);
    let cert = if let Some(path) = &a.import {
        let cert = read_cert(path)?;
        if let Err(e) = check_certificate(spec, &cert) {
            println!("REJECT: {e}");
            return Ok(EXIT_REJECT);
        }
        if let Some(cache) = &cache {
            let stored = cache.store(spec, &cert)?;
            eprintln!("note: cached {}", stored.display());
        }
        cert
    } else if a.search {
        let cached = match &cache {
            Some(cache) => match cache.lookup(spec)? {
                CacheLookup::Hit(cert) => Some(cert),
                CacheLookup::Evicted(reason) => {
                    eprintln!("note: evicted cache entry {reason}");
                    None
                }
                CacheLookup::Miss => None,
            },
            None => None,
        };
        match cached {
            Some(cert) => cert,
            None => match find_equipartite_factorization(spec, &a.budget.budget(SearchMode::HillClimb), a.budget.seed) {
                Ok(cert) => {
                    if let Some(cache) = &cache {
                        let stored = cache.store(spec, &cert)?;
                        eprintln!("note: cached {}", stored.display());
                    }
                    cert
                }
                Err(ProviderError::Timeout(_)) => {
                    println!("INCOMPLETE: no factorization found within budget");
                    return Ok(EXIT_INCOMPLETE);
                }
                Err(ProviderError::Other(e)) => return Err(e.into()),
                Err(e) => {
                    return Err(Failure {
                        code: EXIT_SOFTWARE,
                        message: e.to_string(),
                    })
                }
            },
        }
    } else {
        return Ok(0);
    };
    emit(&cert, a.out.as_deref())?;
    Ok(0)
}
