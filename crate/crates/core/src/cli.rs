//! The `qtcat` command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 budget or size cap,
//! 3 usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{error::ErrorKind, Parser, Subcommand};

use crate::catalan::{qt_catalan, top_symmetric_upto};
use crate::chaindata::{self, ChainDataFile, DataError};
use crate::chains::{decompose_local, default_cutoff, expand_global, ChainError};
use crate::error::{choose2, Error};
use crate::partition::Partition;
use crate::search::{find_family, SearchError, SearchOutcome};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_RESOURCE: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

/// Directory searched for `.chains` files that are not found as given.
pub const DATA_DIR_VAR: &str = "QTCAT_DATA_DIR";

#[derive(Parser, Debug)]
#[command(
    name = "qtcat",
    version,
    about = "Partition statistics, q,t-Catalan polynomials and chain families"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Statistics of a partition, e.g. "5 4 1 1 1", "54111" or "-".
    Stats {
        partition: String,
        /// Triangle size for the Dyck vector and area (default: mind).
        #[arg(long)]
        n: Option<usize>,
    },
    /// The polynomial Cat_n(q,t).
    Catalan {
        n: usize,
        /// Also test symmetry of the terms of degree at least C(n,2) - K.
        #[arg(long, value_name = "K")]
        top_sym: Option<usize>,
        /// Print `q,t,c` rows instead of the polynomial.
        #[arg(long)]
        csv: bool,
    },
    /// Check a chain family file.
    Verify {
        file: PathBuf,
        #[arg(long)]
        cutoff: Option<usize>,
        #[arg(long, default_value_t = 12)]
        nmax: usize,
    },
    /// Local-chain decomposition of one chain of a file.
    Decompose {
        file: PathBuf,
        #[arg(long)]
        mu: String,
        #[arg(long)]
        cutoff: Option<usize>,
    },
    /// Search for a chain family of deficit k and print it.
    Search {
        k: usize,
        #[arg(long)]
        cutoff: Option<usize>,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
    },
}

/// Runs the command line `args` (program name first) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    return EXIT_OK;
                }
                _ => EXIT_USAGE,
            };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::Stats { partition, n } => stats(&partition, n, out),
        Command::Catalan { n, top_sym, csv } => catalan(n, top_sym, csv, out),
        Command::Verify { file, cutoff, nmax } => verify(&file, cutoff, nmax, out),
        Command::Decompose { file, mu, cutoff } => decompose(&file, &mu, cutoff, out),
        Command::Search { k, cutoff, budget } => search(k, cutoff, budget, out, err),
    };
    match result {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "qtcat: {msg}");
            code
        }
    }
}

struct Failure(i32, String);

type CmdResult = Result<i32, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure(EXIT_USAGE, msg.into())
}

fn io(e: std::io::Error) -> Failure {
    Failure(EXIT_FAIL, e.to_string())
}

fn parse_partition(s: &str) -> Result<Partition, Failure> {
    s.parse().map_err(|e: Error| usage(e.to_string()))
}

fn stats(s: &str, n: Option<usize>, out: &mut dyn Write) -> CmdResult {
    let p = parse_partition(s)?;
    let n = n.unwrap_or_else(|| p.mind());
    let dyck = p.to_dyck_vector(n).map_err(|e| usage(e.to_string()))?;
    let area = p.area(n).map_err(|e| usage(e.to_string()))?;
    let first_return = p
        .first_return()
        .map_or_else(|_| "-".to_string(), |m| m.to_string());
    writeln!(
        out,
        "partition={} size={} length={} dinv={} defc={} mind={} conjugate={} first_return={first_return} n={n} dyck={dyck} area={area}",
        p.compact(),
        p.size(),
        p.len(),
        p.dinv(),
        p.deficit(),
        p.mind(),
        p.conjugate().compact(),
    )
    .map_err(io)?;
    Ok(EXIT_OK)
}

fn catalan(n: usize, top_sym: Option<usize>, csv: bool, out: &mut dyn Write) -> CmdResult {
    let poly = match qt_catalan(n) {
        Ok(p) => p,
        Err(e @ Error::CapExceeded { .. }) => return Err(Failure(EXIT_RESOURCE, e.to_string())),
        Err(e) => return Err(Failure(EXIT_FAIL, e.to_string())),
    };
    if csv {
        write!(out, "{}", poly.to_csv()).map_err(io)?;
    } else {
        writeln!(out, "{poly}").map_err(io)?;
    }
    if let Some(k) = top_sym {
        let floor = choose2(n).saturating_sub(k);
        let sym = top_symmetric_upto(&poly, floor);
        writeln!(
            out,
            "top-sym degree>={floor}: {}",
            if sym { "SYMMETRIC" } else { "ASYMMETRIC" }
        )
        .map_err(io)?;
        if !sym {
            return Ok(EXIT_FAIL);
        }
    }
    Ok(EXIT_OK)
}

/// Reads `path` as given, then under `$QTCAT_DATA_DIR`, then from the
/// bundled data.
fn load(path: &Path) -> Result<ChainDataFile, Failure> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(_) => {
            let from_env = std::env::var_os(DATA_DIR_VAR)
                .and_then(|dir| path.file_name().map(|f| Path::new(&dir).join(f)))
                .and_then(|p| std::fs::read_to_string(p).ok());
            match from_env {
                Some(t) => t,
                None => path
                    .to_str()
                    .and_then(chaindata::bundled)
                    .map(str::to_string)
                    .ok_or_else(|| usage(format!("{}: no such file", path.display())))?,
            }
        }
    };
    chaindata::parse(&text).map_err(|e| data_failure(path, e))
}

fn data_failure(path: &Path, e: DataError) -> Failure {
    let code = match e {
        DataError::Chain(ChainError::CutoffTooSmall { .. }) => EXIT_USAGE,
        _ => EXIT_FAIL,
    };
    Failure(code, format!("{}: {e}", path.display()))
}

fn verify(path: &Path, cutoff: Option<usize>, n_max: usize, out: &mut dyn Write) -> CmdResult {
    let file = load(path)?;
    let report = chaindata::verify_file(&file, cutoff, n_max).map_err(|e| data_failure(path, e))?;
    write!(out, "{report}").map_err(io)?;
    Ok(if report.passed() { EXIT_OK } else { EXIT_FAIL })
}

fn decompose(path: &Path, mu: &str, cutoff: Option<usize>, out: &mut dyn Write) -> CmdResult {
    let file = load(path)?;
    let mu = parse_partition(mu)?;
    let block = file.block(&mu).ok_or_else(|| {
        usage(format!(
            "no chain for {} in {}",
            mu.compact(),
            path.display()
        ))
    })?;
    let cutoff = cutoff.unwrap_or_else(|| default_cutoff(file.k));
    let fail = |e: ChainError| Failure(EXIT_FAIL, format!("chain {}: {e}", mu.compact()));
    let global = expand_global(&block.initials, cutoff).map_err(fail)?;
    let locals = decompose_local(&global).map_err(fail)?;

    let shown: Vec<(usize, usize)> = global
        .mind_word()
        .into_iter()
        .filter(|&(d, _)| d <= global.tail_start() + 2)
        .collect();
    let width = shown
        .iter()
        .map(|&(d, w)| d.max(w).to_string().len())
        .max()
        .unwrap_or(1);
    let row = |f: fn(&(usize, usize)) -> usize| {
        shown
            .iter()
            .map(|x| format!("{:>width$}", f(x)))
            .collect::<Vec<_>>()
            .join(" ")
    };
    writeln!(
        out,
        "chain {} start={} tail_start={}",
        mu.compact(),
        global.start(),
        global.tail_start()
    )
    .map_err(io)?;
    writeln!(out, "dinv: {}", row(|x| x.0)).map_err(io)?;
    writeln!(out, "mind: {}", row(|x| x.1)).map_err(io)?;
    let params: Vec<_> = locals[1..].iter().filter_map(|l| l.left_params()).collect();
    let list = |f: fn(&crate::chains::StairParams) -> usize| {
        params
            .iter()
            .map(|p| f(p).to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    writeln!(
        out,
        "a=({}) m=({}) h=({})",
        list(|p| p.a),
        list(|p| p.m),
        list(|p| p.h)
    )
    .map_err(io)?;
    for (i, l) in locals.iter().enumerate() {
        writeln!(out, "S_{i}: {l}").map_err(io)?;
    }
    Ok(EXIT_OK)
}

fn search(
    k: usize,
    cutoff: Option<usize>,
    budget: u64,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let cutoff = cutoff.unwrap_or_else(|| default_cutoff(k));
    let outcome = find_family(k, cutoff, budget).map_err(|e: SearchError| usage(e.to_string()))?;
    let _ = writeln!(
        err,
        "# nodes={} backtracks={}",
        outcome.nodes(),
        outcome.backtracks()
    );
    match outcome {
        SearchOutcome::Found { family, report, .. } => {
            let mut file = ChainDataFile::from_family(&family);
            file.fill_vectors(report.cutoff)
                .map_err(|e| Failure(EXIT_FAIL, e.to_string()))?;
            write!(out, "{}", chaindata::serialize(&file)).map_err(io)?;
            Ok(EXIT_OK)
        }
        SearchOutcome::BudgetExhausted { nodes, .. } => Err(Failure(
            EXIT_RESOURCE,
            format!("budget exhausted after {nodes} nodes"),
        )),
        SearchOutcome::Infeasible { reason, .. } => Err(Failure(
            EXIT_FAIL,
            format!("infeasible at dinv cutoff {cutoff}: {reason}"),
        )),
    }
}
