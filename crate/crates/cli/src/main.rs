use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use circmaj_core::campaign::{run_campaign, run_campaign_timed, CampaignReport, Theorem};
use circmaj_core::corpus::{self, Corpus};
use circmaj_core::exact::format_rational;
use circmaj_core::format::{operator_to_json, parse_matrix, parse_operator};
use circmaj_core::geninv::{drazin, group_inverse, inverse, moore_penrose};
use circmaj_core::{decide_h, decide_hc, decide_hc_preserver, Error, Mat, OperatorRep};

/// Exact Hadamard circulant majorization toolkit.
#[derive(Parser)]
#[command(name = "circmaj", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide X ≺_HC Y; prints the circulant weights on success.
    CheckHc { x: PathBuf, y: PathBuf },
    /// Decide X ≺_H Y; prints a doubly stochastic D with X = D ⊙ Y.
    CheckH { x: PathBuf, y: PathBuf },
    /// Decide whether an operator preserves Hadamard circulant majorization.
    DecidePreserver { operator: PathBuf },
    /// Compute a derived operator.
    Geninv {
        #[arg(long, value_enum)]
        kind: Kind,
        operator: PathBuf,
    },
    /// Run a seeded randomized campaign.
    Verify {
        #[arg(long, value_parser = parse_theorem)]
        theorem: Theorem,
        /// Dimension; defaults to 3, 4 and 5 in turn.
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Include wall-clock time in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Recompute the worked examples and compare them with their fixtures.
    Examples {
        /// Print every check and certificate as JSON.
        #[arg(long)]
        verbose: bool,
        /// Read fixtures from this directory instead of the built-in copies.
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Adjoint,
    Mp,
    Drazin,
    Group,
    Inverse,
}

fn parse_theorem(s: &str) -> Result<Theorem, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

const AFFIRMATIVE: u8 = 0;
const NEGATIVE: u8 = 1;
const MALFORMED: u8 = 2;

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn load_matrix(path: &Path) -> Result<Mat, Error> {
    parse_matrix(&read(path)?)
}

fn load_operator(path: &Path) -> Result<OperatorRep, Error> {
    parse_operator(&read(path)?)
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = writeln!(io::stdout().lock(), "{text}");
}

fn print_json(value: &impl Serialize) {
    emit(&serde_json::to_string_pretty(value).expect("serializable"));
}

fn check_hc(x: &Path, y: &Path) -> Result<u8, Error> {
    let (x, y) = (load_matrix(x)?, load_matrix(y)?);
    Ok(match decide_hc(&x, &y)? {
        Some(w) => {
            let r: Vec<String> = w.combo.coeffs().iter().map(format_rational).collect();
            print_json(&serde_json::json!({ "majorized": true, "r": r }));
            AFFIRMATIVE
        }
        None => {
            print_json(&serde_json::json!({ "majorized": false }));
            NEGATIVE
        }
    })
}

fn check_h(x: &Path, y: &Path) -> Result<u8, Error> {
    let (x, y) = (load_matrix(x)?, load_matrix(y)?);
    Ok(match decide_h(&x, &y)? {
        Some(w) => {
            print_json(&serde_json::json!({ "majorized": true, "d": w.d }));
            AFFIRMATIVE
        }
        None => {
            print_json(&serde_json::json!({ "majorized": false }));
            NEGATIVE
        }
    })
}

fn decide_preserver(path: &Path) -> Result<u8, Error> {
    let t = load_operator(path)?;
    let decision = decide_hc_preserver(&t);
    print_json(&decision);
    Ok(if decision.is_preserver() { AFFIRMATIVE } else { NEGATIVE })
}

fn geninv(kind: Kind, path: &Path) -> Result<u8, Error> {
    let t = load_operator(path)?;
    let out = match kind {
        Kind::Adjoint => Ok(t.adjoint()),
        Kind::Mp => Ok(moore_penrose(&t)),
        Kind::Drazin => Ok(drazin(&t)),
        Kind::Group => group_inverse(&t),
        Kind::Inverse => inverse(&t),
    };
    Ok(match out {
        Ok(s) => {
            emit(&operator_to_json(&s));
            AFFIRMATIVE
        }
        Err(e) => {
            eprintln!("circmaj: {e}");
            NEGATIVE
        }
    })
}

fn verify(theorem: Theorem, dim: Option<usize>, trials: usize, seed: u64, timing: bool) -> Result<u8, Error> {
    let dims = match dim {
        Some(0) => return Err(Error::Parse("--dim must be positive".into())),
        Some(n) => vec![n],
        None => vec![3, 4, 5],
    };
    let reports: Vec<CampaignReport> = dims
        .into_iter()
        .map(|n| {
            if timing {
                run_campaign_timed(theorem, n, trials, seed)
            } else {
                run_campaign(theorem, n, trials, seed)
            }
        })
        .collect();
    let passed = reports.iter().all(CampaignReport::passed);
    print_json(&reports);
    Ok(if passed { AFFIRMATIVE } else { NEGATIVE })
}

fn examples(verbose: bool, fixtures: Option<&Path>) -> Result<u8, Error> {
    let corpus = match fixtures {
        Some(dir) => Corpus::from_dir(dir)?,
        None => Corpus::embedded()?,
    };
    let report = corpus::run(&corpus);
    if verbose {
        print_json(&report);
    } else {
        emit(report.to_string().trim_end());
    }
    Ok(if report.passed { AFFIRMATIVE } else { NEGATIVE })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::CheckHc { x, y } => check_hc(x, y),
        Command::CheckH { x, y } => check_h(x, y),
        Command::DecidePreserver { operator } => decide_preserver(operator),
        Command::Geninv { kind, operator } => geninv(*kind, operator),
        Command::Verify {
            theorem,
            dim,
            trials,
            seed,
            timing,
        } => verify(*theorem, *dim, *trials, *seed, *timing),
        Command::Examples { verbose, fixtures } => examples(*verbose, fixtures.as_deref()),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("circmaj: {e}");
            ExitCode::from(MALFORMED)
        }
    }
}
