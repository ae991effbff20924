//! Command-line front end: `padic-dyn expand | classify | enumerate | generate | verify`.

mod classify;
mod sweeps;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::arith::Prime;
use crate::criteria::{verify_identity_suite, IdentityReport, Suite};
use crate::error::{Error, Result};
use crate::funcspace::{
    default_depth, mahler_coefficients, vdp_coefficients, CoefficientSeries, PadicFunction, SeriesDocument,
};

pub use classify::{classify, ClassifyReport, LevelStatus};
pub use sweeps::{enumerate_cubic_mod8, enumerate_deg8_mod27, Census, CubicClass, Deg8Census};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "padic-dyn", version, about = "Ergodicity of 1-Lipschitz maps on the p-adic integers")]
pub struct Cli {
    /// Worker threads for sweeps (default: all available).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct FunctionArgs {
    /// The prime p.
    #[arg(short = 'p', long = "p", alias = "prime")]
    pub p: u64,
    /// Polynomial with integer coefficients, e.g. "1+3*x+2*x^3".
    #[arg(short = 'f', long = "function", conflicts_with = "input")]
    pub function: Option<String>,
    /// JSON coefficient series or value table.
    #[arg(short = 'i', long)]
    pub input: Option<PathBuf>,
    /// Working depth N (functions are read modulo p^N).
    #[arg(short = 'N', long)]
    pub depth: Option<u32>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Basis {
    Mahler,
    Vdp,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    #[value(name = "cubic-mod8")]
    CubicMod8,
    #[value(name = "deg8-mod27")]
    Deg8Mod27,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Criterion {
    Oracle,
    Mahler,
    Vdp,
    Larin,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Abc,
    Pzero,
    Bipro,
    Bip2,
    Valpro,
    All,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print Mahler or van der Put coefficients.
    Expand {
        #[command(flatten)]
        func: FunctionArgs,
        #[arg(long, value_enum, default_value = "mahler")]
        basis: Basis,
        /// Number of coefficients (default p^N).
        #[arg(long)]
        count: Option<u64>,
        /// Reduce modulo p^k (default N).
        #[arg(long = "mod")]
        modulus: Option<u32>,
        /// Divide the m-th coefficient by p^floor(log_p m).
        #[arg(long)]
        normalized: bool,
    },
    /// Lipschitz, UD1, measure preservation and ergodicity verdicts.
    Classify {
        #[command(flatten)]
        func: FunctionArgs,
    },
    /// Census of ergodic maps in a finite family.
    Enumerate {
        #[arg(short = 'p', long = "p", alias = "prime")]
        p: u64,
        #[arg(long, value_enum)]
        family: Family,
        /// Selection criterion for cubic-mod8.
        #[arg(long, value_enum, default_value = "oracle")]
        criterion: Criterion,
        /// Random sample size for deg8-mod27.
        #[arg(long, default_value_t = 1000)]
        sample: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Ergodic examples to list for deg8-mod27.
        #[arg(long, default_value_t = 10)]
        show: usize,
    },
    /// Build ergodic maps for p >= 5 from a cycle and derivative constants.
    Generate {
        #[arg(short = 'p', long = "p", alias = "prime")]
        p: u64,
        /// The cycle mod p, e.g. "0,1,2,3,4".
        #[arg(long)]
        phi: String,
        /// b_p..b_{2p-1} mod p, product 1.
        #[arg(long)]
        bvec: String,
        /// Second digits z_0..z_{2p-1}, or "zeros".
        #[arg(long, conflicts_with = "random_lifts")]
        lift: Option<String>,
        /// Try this many uniformly random lifts.
        #[arg(long)]
        random_lifts: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exhaustive checks of the binomial congruences.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        /// Largest prime (suite default when omitted).
        #[arg(long)]
        pmax: Option<u64>,
        /// Largest s (suite default when omitted).
        #[arg(long)]
        smax: Option<u32>,
    },
}

/// Parses arguments, runs, writes to `out`, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    if let Some(n) = cli.threads {
        // A second call in the same process keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code_for(&e)
        }
    }
}

pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Invariant(_) => EXIT_INVARIANT,
        _ => EXIT_USAGE,
    }
}

pub(crate) fn emit<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

pub fn load_function(args: &FunctionArgs) -> Result<PadicFunction> {
    let prime = Prime::new(args.p)?;
    match (&args.function, &args.input) {
        (Some(text), None) => {
            PadicFunction::parse_polynomial(text, prime, args.depth.unwrap_or_else(|| default_depth(prime)))
        }
        (None, Some(path)) => {
            let doc: SeriesDocument = serde_json::from_str(&std::fs::read_to_string(path)?)?;
            if doc.p != args.p {
                return Err(Error::Precondition(format!("file is for p = {}, not {}", doc.p, args.p)));
            }
            PadicFunction::from_document(&doc, args.depth)
        }
        _ => Err(Error::Precondition("give exactly one of --function or --input".into())),
    }
}

fn parse_list(text: &str) -> Result<Vec<u64>> {
    text.split(',')
        .map(|t| {
            t.trim().parse::<u64>().map_err(|_| Error::Parse { pos: 0, msg: format!("not a residue: {t:?}") })
        })
        .collect()
}

#[derive(Serialize)]
struct NormalizedDocument {
    kind: String,
    p: u64,
    k: u32,
    length: usize,
    normalized: bool,
    /// Term m is known modulo p^{k - floor(log_p m)}.
    exponents: Vec<u32>,
    terms: Vec<String>,
}

fn expand(
    func: &FunctionArgs,
    basis: Basis,
    count: Option<u64>,
    modulus: Option<u32>,
    normalized: bool,
    out: &mut dyn Write,
) -> Result<i32> {
    let mut f = load_function(func)?;
    let k = modulus.unwrap_or(f.depth());
    if k > f.depth() {
        f = f.with_depth(k)?;
    }
    let count = match count {
        Some(c) => c,
        None => crate::funcspace::table_size(f.prime(), f.depth())?,
    };
    let series: CoefficientSeries = match basis {
        Basis::Mahler => mahler_coefficients(&f, count, k)?,
        Basis::Vdp => vdp_coefficients(&f, count, k)?,
    };
    if !normalized {
        emit(out, &SeriesDocument::from_series(&series))?;
        return Ok(EXIT_PASS);
    }
    let mut terms = Vec::with_capacity(series.len());
    let mut exponents = Vec::with_capacity(series.len());
    for m in 0..series.len() {
        let r = series.normalized(m)?;
        exponents.push(r.modulus().exponent());
        terms.push(r.value().to_string());
    }
    let doc = NormalizedDocument {
        kind: series.kind().to_string(),
        p: series.prime().get(),
        k,
        length: terms.len(),
        normalized: true,
        exponents,
        terms,
    };
    emit(out, &doc)?;
    Ok(EXIT_PASS)
}

fn verify(suite: SuiteArg, pmax: Option<u64>, smax: Option<u32>, json: bool, out: &mut dyn Write) -> Result<i32> {
    let suites: Vec<Suite> = match suite {
        SuiteArg::Abc => vec![Suite::Abc],
        SuiteArg::Pzero => vec![Suite::Pzero],
        SuiteArg::Bipro => vec![Suite::Bipro],
        SuiteArg::Bip2 => vec![Suite::Bip2],
        SuiteArg::Valpro => vec![Suite::Valpro],
        SuiteArg::All => Suite::ALL.to_vec(),
    };
    let mut reports: Vec<IdentityReport> = Vec::new();
    for s in suites {
        let (dp, ds) = s.default_bounds();
        reports.extend(verify_identity_suite(s, pmax.unwrap_or(dp), smax.unwrap_or(ds))?);
    }
    if json {
        emit(out, &reports)?;
    } else {
        for r in &reports {
            writeln!(out, "{r}")?;
        }
    }
    Ok(if reports.iter().all(IdentityReport::passed) { EXIT_PASS } else { EXIT_FAIL })
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Expand { func, basis, count, modulus, normalized } => {
            expand(func, *basis, *count, *modulus, *normalized, out)
        }
        Command::Classify { func } => {
            let f = load_function(func)?;
            let label = func.function.clone().unwrap_or_else(|| "<file>".into());
            let report = classify(&f, &label)?;
            if cli.json {
                emit(out, &report)?;
            } else {
                report.write_text(out)?;
            }
            Ok(report.exit_code)
        }
        Command::Enumerate { p, family, criterion, sample, seed, show } => match family {
            Family::CubicMod8 => {
                if *p != 2 {
                    return Err(Error::Precondition("cubic-mod8 is a p = 2 family".into()));
                }
                let census = enumerate_cubic_mod8(*criterion)?;
                if cli.json {
                    emit(out, &census)?;
                } else {
                    census.write_text(out)?;
                }
                Ok(if census.disagreements() == 0 { EXIT_PASS } else { EXIT_INVARIANT })
            }
            Family::Deg8Mod27 => {
                if *p != 3 {
                    return Err(Error::Precondition("deg8-mod27 is a p = 3 family".into()));
                }
                let census = enumerate_deg8_mod27(*sample, *seed, *show)?;
                if cli.json {
                    emit(out, &census)?;
                } else {
                    census.write_text(out)?;
                }
                Ok(if census.disagreements() == 0 { EXIT_PASS } else { EXIT_INVARIANT })
            }
        },
        Command::Generate { p, phi, bvec, lift, random_lifts, seed } => {
            let prime = Prime::new(*p)?;
            let cycle = parse_list(phi)?;
            let bvec = parse_list(bvec)?;
            let lifts = match (lift.as_deref(), random_lifts) {
                (Some("zeros") | None, None) => sweeps::LiftChoice::Fixed(Vec::new()),
                (Some(list), None) => sweeps::LiftChoice::Fixed(parse_list(list)?),
                (None, Some(n)) => sweeps::LiftChoice::Random { count: *n, seed: *seed },
                (Some(_), Some(_)) => unreachable!("clap rejects --lift with --random-lifts"),
            };
            sweeps::generate(prime, &cycle, &bvec, lifts, cli.json, out)
        }
        Command::Verify { suite, pmax, smax } => verify(*suite, *pmax, *smax, cli.json, out),
    }
}
