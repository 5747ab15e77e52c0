//! `luinv`: evaluate, compare and enumerate local-unitary trace invariants.
//!
//! Exit codes: 0 success (or indistinguishable for `compare`), 1 separated,
//! 2 usage, parse or argument error, 3 request outside a supported size.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use luinv::invariant_suite::{decide_lu_equiv, lu_degree_bound, slocc_degree_bound, VerdictKind};
use luinv::io::{format_labels, parse_monomial, render_svg, StateFile};
use luinv::permnet::{enumerate_monomials, enumerate_raw, girth_bound, Girth, TraceMonomial};
use luinv::slocc::{eval_slocc, PureState};
use luinv::tensor_core::{random_density, Dims, OperatorTuple, DEFAULT_TOL};
use luinv::trace_eval::{eval_contract, eval_reference, factorize, FactorizationResult, WitnessKind};
use luinv::{Error, C64};

/// Overrides the default comparison tolerance.
const TOL_ENV: &str = "LUINV_TOL";

#[derive(Parser)]
#[command(name = "luinv", version, about = "Local-unitary trace-monomial invariants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct MonomialArgs {
    /// Cycle notation, one row per subsystem separated by ';', e.g. "(2 3);(1 2)"
    #[arg(long, allow_hyphen_values = true)]
    perm: String,
    /// Operator label of each box, 1-based, e.g. "1,1,2"
    #[arg(long)]
    labels: String,
}

impl MonomialArgs {
    fn monomial(&self) -> Result<TraceMonomial, Error> {
        parse_monomial(&self.perm, &self.labels)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Engine {
    Contract,
    Ref,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one trace monomial on the operators of a state file
    Eval {
        #[arg(long)]
        state: PathBuf,
        #[command(flatten)]
        mon: MonomialArgs,
        #[arg(long, value_enum, default_value = "contract")]
        engine: Engine,
    },
    /// Compare two state files on all monomials up to a degree
    Compare {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        /// Relative tolerance (default 1e-10, or $LUINV_TOL)
        #[arg(long)]
        tol: Option<f64>,
    },
    /// List canonical monomials, one per line
    Enumerate {
        #[arg(short)]
        n: usize,
        #[arg(short, default_value_t = 1)]
        m: usize,
        #[arg(long)]
        max_degree: usize,
        /// Keep only connected wirings
        #[arg(long)]
        connected: bool,
        /// Cap row girth by the bound for these local dimensions, e.g. "2,2"
        #[arg(long)]
        dims: Option<String>,
        /// List every candidate instead of one per relabeling class
        #[arg(long)]
        raw: bool,
    },
    /// Print a degree bound as an exact integer
    Bounds {
        /// Local-unitary bound for the dimensions given by --dims
        #[arg(long, conflicts_with = "slocc", requires = "dims")]
        lu: bool,
        /// SLOCC bound for -n qubits
        #[arg(long, requires = "n")]
        slocc: bool,
        #[arg(long)]
        dims: Option<String>,
        #[arg(short)]
        n: Option<usize>,
        #[arg(short, default_value_t = 1)]
        m: usize,
    },
    /// Decide whether a monomial splits into two smaller ones
    Factorize {
        #[command(flatten)]
        mon: MonomialArgs,
    },
    /// Evaluate a monomial on the self-dual embedding of qubit states
    SloccEval {
        #[arg(long)]
        state: PathBuf,
        #[command(flatten)]
        mon: MonomialArgs,
    },
    /// Write a file of random density operators
    Random {
        #[arg(long)]
        dims: String,
        /// Number of operators in the tuple
        #[arg(short, default_value_t = 1)]
        m: usize,
        /// Rank of each density operator (default: full)
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path (default: stdout)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a monomial as an SVG diagram
    Render {
        #[command(flatten)]
        mon: MonomialArgs,
        /// Output path (default: stdout)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// `re` with 15 decimals, followed by `±im i` when the imaginary part
/// survives rounding.
fn format_value(z: C64) -> String {
    let clean = |x: f64| if x.abs() < 0.5e-15 { 0.0 } else { x };
    let (re, im) = (clean(z.re), clean(z.im));
    if im == 0.0 {
        format!("{re:.15}")
    } else {
        let sign = if im < 0.0 { '-' } else { '+' };
        format!("{re:.15}{sign}{:.15}i", im.abs())
    }
}

fn parse_dims(s: &str) -> Result<Dims, Error> {
    let d = s
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad dimension {t:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Dims::new(d)
}

fn read_operators(path: &Path) -> Result<OperatorTuple, Error> {
    StateFile::read(path)?.to_operators()
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(p) => Ok(std::fs::write(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn default_tol() -> Result<f64, Error> {
    match std::env::var(TOL_ENV) {
        Ok(s) => s.trim().parse().map_err(|_| Error::Parse(format!("{TOL_ENV}={s:?} is not a number"))),
        Err(_) => Ok(DEFAULT_TOL),
    }
}

fn run(cmd: Command) -> Result<ExitCode, Error> {
    match cmd {
        Command::Eval { state, mon, engine } => {
            let ops = read_operators(&state)?;
            let mon = mon.monomial()?;
            let v = match engine {
                Engine::Contract => eval_contract(&mon, &ops)?,
                Engine::Ref => eval_reference(&mon, &ops)?,
            };
            println!("{}", format_value(v));
        }
        Command::Compare { a, b, max_degree, tol } => {
            let tol = match tol {
                Some(t) => t,
                None => default_tol()?,
            };
            let verdict = decide_lu_equiv(&read_operators(&a)?, &read_operators(&b)?, max_degree, tol)?;
            if verdict.non_normal {
                eprintln!("warning: some operators are not normal; equal invariants may not mean equal orbits");
            }
            match verdict.kind {
                VerdictKind::Separated { witness, values } => {
                    println!("SEPARATED");
                    println!(
                        "witness: --perm \"{}\" --labels \"{}\"",
                        witness.sigma(),
                        format_labels(witness.labels())
                    );
                    println!("a: {}", format_value(values.0));
                    println!("b: {}", format_value(values.1));
                    return Ok(ExitCode::from(1));
                }
                VerdictKind::IndistinguishableUpTo { degree } => println!("INDISTINGUISHABLE_UP_TO {degree}"),
            }
        }
        Command::Enumerate { n, m, max_degree, connected, dims, raw } => {
            let cap = match dims {
                Some(d) => {
                    let d = parse_dims(&d)?;
                    if d.n() != n {
                        return Err(Error::Argument(format!("--dims has {} entries but -n is {n}", d.n())));
                    }
                    girth_bound(&d)
                }
                None => Girth::unrestricted(n, max_degree),
            };
            let list = if raw {
                enumerate_raw(n, m, max_degree, &cap, connected)?
            } else {
                enumerate_monomials(n, m, max_degree, &cap, connected)?
            };
            let text: String = list.iter().map(|x| format!("{x}\n")).collect();
            print!("{text}");
        }
        Command::Bounds { lu, slocc, dims, n, m } => {
            if lu == slocc {
                return Err(Error::Argument("choose exactly one of --lu or --slocc".into()));
            }
            if lu {
                let d = parse_dims(dims.as_deref().unwrap_or_default())?;
                println!("{}", lu_degree_bound(&d, m));
            } else {
                let n = n.unwrap_or_default();
                if n == 0 {
                    return Err(Error::Argument("-n must be at least 1".into()));
                }
                println!("{}", slocc_degree_bound(n, m));
            }
        }
        Command::Factorize { mon } => match factorize(&mon.monomial()?)? {
            FactorizationResult::Irreducible => println!("IRREDUCIBLE"),
            FactorizationResult::Factors(w) => {
                let kind = match w.kind {
                    WitnessKind::Disconnected => "disconnected",
                    WitnessKind::Relocated => "relocated",
                };
                println!("FACTORS {kind}");
                println!("left: {}", w.left);
                println!("right: {}", w.right);
                for (i, r) in w.rows.iter().enumerate() {
                    let show = |cs: &[Vec<usize>]| -> String {
                        cs.iter()
                            .map(|c| {
                                format!("({})", c.iter().map(|p| (p + 1).to_string()).collect::<Vec<_>>().join(" "))
                            })
                            .collect()
                    };
                    println!("row {}: {} | {}", i + 1, show(&r.left), show(&r.right));
                }
            }
        },
        Command::SloccEval { state, mon } => {
            let (dims, vectors) = match StateFile::read(&state)? {
                StateFile::PureStates { dims, vectors } => (dims, vectors),
                StateFile::Operators(_) => return Err(Error::Argument("slocc-eval needs a pure_state file".into())),
            };
            if dims.as_slice().iter().any(|&d| d != 2) {
                return Err(Error::Argument("slocc-eval needs qubit dims (all 2)".into()));
            }
            let states = vectors.into_iter().map(|v| PureState::new(dims.n(), v)).collect::<Result<Vec<_>, _>>()?;
            println!("{}", format_value(eval_slocc(&mon.monomial()?, &states)?));
        }
        Command::Random { dims, m, rank, seed, out } => {
            let dims = parse_dims(&dims)?;
            if m == 0 {
                return Err(Error::Argument("-m must be at least 1".into()));
            }
            let rank = rank.unwrap_or(dims.total());
            let mats = (0..m as u64)
                .map(|k| random_density(&dims, rank, seed.wrapping_add(k)))
                .collect::<Result<Vec<_>, _>>()?;
            let file = StateFile::Operators(OperatorTuple::new(dims, mats)?);
            emit(&file.to_json(), out.as_deref())?;
        }
        Command::Render { mon, out } => emit(&render_svg(&mon.monomial()?)?, out.as_deref())?,
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("luinv: {e}");
            match e {
                Error::Unsupported(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
