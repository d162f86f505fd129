//! Command-line entry point. Inputs and outputs are JSON with all numbers
//! encoded as exact rational strings; exit code 0 = success, 1 = domain
//! error, 2 = malformed input.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use ordalg::circle::{density_demo, psi, psi_inv, PiecewiseFn};
use ordalg::descriptors::{re_gap, Descriptor, GapHypothesis, GapInput};
use ordalg::error::Error;
use ordalg::idempotents::{extract_idempotent, indicator_poly, DiscUnion};
use ordalg::ntip::{
    build_nice_chain, ntip_run, verify_trace, AlgebraOracle, ChainBounds, NtipTrace,
};
use ordalg::orderspace::{ClosedSet, SpacePresentation};
use ordalg::rational::Rat;
use ordalg::selftest;
use ordalg::stepcalc::{Measure, NiceSet, StepFunction};

#[derive(Parser)]
#[command(
    name = "ordalg",
    version,
    about = "Exact workbench for function algebras on compact ordered spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Deserialize)]
struct SpaceAndSet {
    space: SpacePresentation,
    #[serde(default)]
    set: Option<ClosedSet>,
}

#[derive(Subcommand)]
enum Command {
    /// Cantor–Bendixson kernel of a closed set (default: the whole space).
    Kernel { file: PathBuf },
    /// Whether the presented set contains a copy of the Cantor set.
    Cantor { file: PathBuf },
    /// Jump set JMP_eps of a step function.
    Jmp {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        eps: String,
    },
    /// Whether a step function meets a descriptor.
    Match {
        #[arg(long)]
        descriptor: PathBuf,
        #[arg(long)]
        tau: PathBuf,
    },
    /// Extract the idempotent below a real-part level.
    Extract {
        #[arg(long)]
        h: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Run the full extraction pipeline.
    NtipRun {
        #[arg(long)]
        oracle: PathBuf,
        #[arg(long)]
        nice: PathBuf,
        #[arg(long)]
        q: String,
    },
    /// Replay and verify a recorded pipeline trace.
    VerifyTrace {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        oracle: PathBuf,
    },
    /// Build a finite-stage nice chain over an oracle.
    NiceChain {
        #[arg(long)]
        oracle: PathBuf,
        #[arg(long, default_value_t = 16)]
        max_denominator: u32,
        #[arg(long, default_value_t = 1)]
        max_jumps: usize,
        #[arg(long, default_value_t = 1)]
        max_value_height: u32,
        #[arg(long, default_value_t = 1)]
        stages: usize,
    },
    /// Transport a step function to the circle model, or back with --inv.
    Psi {
        #[arg(long, conflicts_with = "g")]
        f: Option<PathBuf>,
        #[arg(long, requires = "g")]
        inv: bool,
        #[arg(long)]
        g: Option<PathBuf>,
    },
    /// Integrate a step function against a measure.
    Integrate {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        mu: PathBuf,
    },
    /// Find a separating level for the real parts of step-function values.
    ReGap {
        #[arg(long)]
        h: PathBuf,
        #[arg(long)]
        r: Option<u32>,
        #[arg(long, allow_hyphen_values = true)]
        w0: Option<String>,
    },
    /// Certified polynomial indicator witness on separated disc unions.
    IndicatorPoly {
        #[arg(long)]
        k0: PathBuf,
        #[arg(long)]
        k1: PathBuf,
        #[arg(long)]
        tol_sq: String,
        #[arg(long, default_value_t = 200)]
        max_degree: usize,
    },
    /// Desk-scale density illustration over circle generators.
    DensityDemo {
        #[arg(long)]
        gens: PathBuf,
        #[arg(long)]
        q: Vec<String>,
    },
    /// Run the fixture suite (quick) or the acceptance suite (full).
    Selftest {
        #[arg(long, value_enum, default_value_t = Level::Quick)]
        level: Level,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Level {
    Quick,
    Full,
}

fn read_json<T: DeserializeOwned>(path: &PathBuf) -> Result<T, Error> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn parse_rat(s: &str) -> Result<Rat, Error> {
    s.parse().map_err(|e: String| Error::Parse(e))
}

fn emit<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("output serializes")
    );
}

fn run(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Kernel { file } => {
            let input: SpaceAndSet = read_json(&file)?;
            let set = match input.set {
                Some(s) => s.canonicalize(&input.space)?,
                None => input.space.whole_space(),
            };
            emit(&set.kernel(&input.space));
        }
        Command::Cantor { file } => {
            let input: SpaceAndSet = read_json(&file)?;
            let set = match input.set {
                Some(s) => s.canonicalize(&input.space)?,
                None => input.space.whole_space(),
            };
            emit(&serde_json::json!({ "containsCantor": set.contains_cantor(&input.space) }));
        }
        Command::Jmp { f, eps } => {
            let f: StepFunction = read_json(&f)?;
            let eps = parse_rat(&eps)?;
            if eps <= Rat::zero() {
                return Err(Error::Parse("eps must be positive".into()));
            }
            emit(&f.jmp(&eps));
        }
        Command::Match { descriptor, tau } => {
            let d: Descriptor = read_json(&descriptor)?;
            let t: StepFunction = read_json(&tau)?;
            emit(&serde_json::json!({ "matches": d.matches(&t) }));
        }
        Command::Extract { h, b } => {
            let h: StepFunction = read_json(&h)?;
            let b = parse_rat(&b)?;
            emit(&extract_idempotent(&h, &b)?);
        }
        Command::NtipRun { oracle, nice, q } => {
            let oracle: AlgebraOracle = read_json(&oracle)?;
            oracle.validate()?;
            let nice: NiceSet = read_json(&nice)?;
            let q = parse_rat(&q)?;
            emit(&ntip_run(&oracle, &nice, &q)?);
        }
        Command::VerifyTrace { trace, oracle } => {
            let trace: NtipTrace = read_json(&trace)?;
            let oracle: AlgebraOracle = read_json(&oracle)?;
            match verify_trace(&trace, &oracle) {
                Ok(()) => emit(&serde_json::json!({ "verified": true })),
                Err(clause) => {
                    emit(&serde_json::json!({ "verified": false, "clause": clause }));
                    return Ok(1);
                }
            }
        }
        Command::NiceChain {
            oracle,
            max_denominator,
            max_jumps,
            max_value_height,
            stages,
        } => {
            let oracle: AlgebraOracle = read_json(&oracle)?;
            oracle.validate()?;
            if !max_denominator.is_power_of_two() {
                return Err(Error::Parse(
                    "max-denominator must be a power of two".into(),
                ));
            }
            let bounds = ChainBounds {
                max_denominator,
                max_jumps,
                max_value_height,
                stages,
            };
            emit(&build_nice_chain(&oracle, &bounds));
        }
        Command::Psi { f, inv, g } => {
            if inv {
                let g: PiecewiseFn =
                    read_json(g.as_ref().ok_or(Error::Parse("--inv needs --g".into()))?)?;
                let g = PiecewiseFn::normalize(g.cuts, g.arcs)?;
                emit(&psi_inv(&g));
            } else {
                let f: StepFunction =
                    read_json(f.as_ref().ok_or(Error::Parse("psi needs --f".into()))?)?;
                emit(&psi(&f));
            }
        }
        Command::Integrate { f, mu } => {
            let f: StepFunction = read_json(&f)?;
            let mu: Measure = read_json(&mu)?;
            mu.validate()?;
            emit(&mu.integrate(&f));
        }
        Command::ReGap { h, r, w0 } => {
            let h: StepFunction = read_json(&h)?;
            let hyp = match (r, w0) {
                (Some(r), Some(w0)) => Some(GapHypothesis {
                    r,
                    w0: ordalg::Gaussian::real(parse_rat(&w0)?),
                }),
                (None, None) => None,
                _ => return Err(Error::Parse("--r and --w0 go together".into())),
            };
            let b = re_gap(&GapInput::Values(h.values), hyp.as_ref())?;
            emit(&serde_json::json!({ "b": b }));
        }
        Command::IndicatorPoly {
            k0,
            k1,
            tol_sq,
            max_degree,
        } => {
            let k0: DiscUnion = read_json(&k0)?;
            let k1: DiscUnion = read_json(&k1)?;
            let tol = parse_rat(&tol_sq)?;
            if tol <= Rat::zero() {
                return Err(Error::Parse("tol-sq must be positive".into()));
            }
            emit(&indicator_poly(&k0, &k1, &tol, max_degree)?);
        }
        Command::DensityDemo { gens, q } => {
            let gens: Vec<PiecewiseFn> = read_json(&gens)?;
            let gens = gens
                .into_iter()
                .map(|g| PiecewiseFn::normalize(g.cuts, g.arcs))
                .collect::<Result<Vec<_>, _>>()?;
            let targets = q
                .iter()
                .map(|s| parse_rat(s))
                .collect::<Result<Vec<_>, _>>()?;
            emit(&density_demo(&gens, &targets));
        }
        Command::Selftest { level } => {
            let mut failed = 0usize;
            match level {
                Level::Quick => {
                    let reports = selftest::quick_fixtures();
                    for r in &reports {
                        if r.pass {
                            println!("PASS: {}", r.name);
                        } else {
                            failed += 1;
                            println!("FAIL: {} — {}", r.name, r.detail);
                        }
                    }
                    println!("{} fixtures, {} failed", reports.len(), failed);
                }
                Level::Full => {
                    for r in selftest::run_acceptance() {
                        if !r.pass {
                            failed += 1;
                        }
                        println!("{}", r.line());
                    }
                }
            }
            if failed > 0 {
                return Ok(1);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
