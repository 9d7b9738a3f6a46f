//! `bicanon`: canonicity checks, canonical forms, enumeration and counting
//! of binary matrices under row/column permutation, and bipartite graph
//! isomorphism through them.
//!
//! Exit codes: 0 success or true verdict, 1 false verdict, 2 usage or
//! domain error, 3 search/enumeration budget exceeded.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use bicanon::{
    brute_force_canonical, canonical_key, canonicalize, count_canonical, count_semi_canonical,
    enumerate_canonical, enumerate_semi_canonical, is_canonical, is_semi_canonical,
    isomorphic, isomorphic_either, oracle_agreement_sweep, BinaryMatrix, BipartiteGraph, Budget,
    Error, Orientation,
};

/// Enumeration beyond this edge length is rejected rather than left to run
/// for days; the matrix representation itself allows up to 32.
const MAX_ENUM_DIM: usize = 8;

#[derive(Parser)]
#[command(
    name = "bicanon",
    version,
    about = "Canonical binary matrices under row/column permutation, \
             and bipartite graph isomorphism via canonical forms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a matrix file is canonical (or semi-canonical).
    Check {
        /// Matrix file: `n m` header, then n rows of 0/1 characters.
        file: PathBuf,
        /// Test semi-canonicity instead of canonicity.
        #[arg(long)]
        semi: bool,
        /// On a negative verdict, print the failed condition and witness.
        #[arg(long)]
        report: bool,
    },
    /// Print the canonical representative of a matrix file's class.
    Canonize {
        file: PathBuf,
        /// Use the brute-force orbit scan instead of the fast search.
        #[arg(long)]
        oracle: bool,
    },
    /// Stream all canonical (default) or semi-canonical n×m matrices.
    Enum {
        n: usize,
        m: usize,
        /// Stream semi-canonical matrices instead of canonical ones.
        #[arg(long)]
        semi: bool,
        /// Worker threads; output is identical for any value.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Count canonical (default) or semi-canonical n×m matrices by ones.
    Count {
        n: usize,
        m: usize,
        /// Count semi-canonical matrices instead of canonical ones.
        #[arg(long)]
        semi: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        /// Worker threads; output is identical for any value.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Decide whether two bipartite graph files are isomorphic.
    Iso {
        /// Graph file: `n m e` header, then e lines `r c` (1-based).
        file1: PathBuf,
        file2: PathBuf,
        /// Also try matching with the second graph's parts exchanged.
        #[arg(long)]
        either_orientation: bool,
    },
    /// Print a graph's isomorphism-class key (canonical row code).
    Key { file: PathBuf },
    /// Compare the fast canonicity test against brute force on every
    /// matrix of every shape with n*m cells at most the given bound.
    Selftest {
        #[arg(long, default_value_t = 16)]
        max_cells: usize,
        /// Worker threads; results are identical for any value.
        #[arg(long)]
        jobs: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Resource(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn read_file(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Domain(format!("cannot read {}: {e}", path.display())))
}

fn load_matrix(path: &Path) -> Result<BinaryMatrix, Error> {
    read_file(path)?
        .parse::<BinaryMatrix>()
        .map_err(|e| Error::Domain(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<BipartiteGraph, Error> {
    read_file(path)?
        .parse::<BipartiteGraph>()
        .map_err(|e| Error::Domain(format!("{}: {e}", path.display())))
}

/// Worker count: the flag, else BICANON_JOBS, else all cores.
fn resolve_jobs(flag: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var("BICANON_JOBS")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .filter(|&j| j > 0)
    .unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|p| p.get())
            .unwrap_or(1)
    })
}

fn with_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, Error> {
    let threads = resolve_jobs(jobs);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Domain(format!("cannot build a {threads}-thread pool: {e}")))?;
    Ok(pool.install(f))
}

fn check_enum_dims(n: usize, m: usize) -> Result<(), Error> {
    if n > MAX_ENUM_DIM || m > MAX_ENUM_DIM {
        return Err(Error::Domain(format!(
            "enumeration supports n, m up to {MAX_ENUM_DIM}; got {n}x{m}"
        )));
    }
    Ok(())
}

fn run(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Check { file, semi, report } => {
            let a = load_matrix(&file)?;
            if semi {
                if is_semi_canonical(&a) {
                    println!("semi-canonical");
                    Ok(ExitCode::SUCCESS)
                } else {
                    println!("not semi-canonical");
                    Ok(ExitCode::from(1))
                }
            } else {
                let verdict = is_canonical(&a);
                if verdict.is_canonical {
                    println!("canonical");
                    Ok(ExitCode::SUCCESS)
                } else {
                    if report {
                        println!("{verdict}");
                    } else {
                        println!("not canonical");
                    }
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Canonize { file, oracle } => {
            let a = load_matrix(&file)?;
            let canon = if oracle {
                brute_force_canonical(&a, &Budget::default())?
            } else {
                canonicalize(&a)?
            };
            print!("{canon}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Enum { n, m, semi, jobs } => {
            check_enum_dims(n, m)?;
            let _ = resolve_jobs(jobs); // order is fixed, so workers are moot
            let stream = if semi {
                enumerate_semi_canonical(n, m)?
            } else {
                enumerate_canonical(n, m)?
            };
            let stdout = std::io::stdout();
            let mut out = std::io::BufWriter::new(stdout.lock());
            let mut first = true;
            for a in stream {
                if !first {
                    writeln!(out).map_err(broken_pipe)?;
                }
                first = false;
                write!(out, "{a}").map_err(broken_pipe)?;
            }
            out.flush().map_err(broken_pipe)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Count { n, m, semi, format, jobs } => {
            check_enum_dims(n, m)?;
            let table = with_pool(jobs, || {
                if semi {
                    count_semi_canonical(n, m)
                } else {
                    count_canonical(n, m)
                }
            })??;
            match format {
                Format::Csv => print!("{}", table.to_csv()),
                Format::Json => println!("{}", table.to_json()),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Iso { file1, file2, either_orientation } => {
            let g = load_graph(&file1)?;
            let h = load_graph(&file2)?;
            if either_orientation {
                match isomorphic_either(&g, &h)? {
                    Some(Orientation::Same) => {
                        println!("isomorphic");
                        Ok(ExitCode::SUCCESS)
                    }
                    Some(Orientation::Swapped) => {
                        println!("isomorphic (parts exchanged)");
                        Ok(ExitCode::SUCCESS)
                    }
                    None => {
                        println!("not isomorphic");
                        Ok(ExitCode::from(1))
                    }
                }
            } else if isomorphic(&g, &h)? {
                println!("isomorphic");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("not isomorphic");
                Ok(ExitCode::from(1))
            }
        }
        Command::Key { file } => {
            let g = load_graph(&file)?;
            println!("{}", canonical_key(&g)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Selftest { max_cells, jobs } => {
            let budget = Budget::default();
            let shapes: Vec<(usize, usize)> = (1..=budget.max_rows)
                .flat_map(|n| (1..=budget.max_cols).map(move |m| (n, m)))
                .filter(|&(n, m)| n * m <= max_cells.min(budget.max_cells))
                .collect();
            let mut all_ok = true;
            let mut lines = String::new();
            with_pool(jobs, || -> Result<(), Error> {
                for &(n, m) in &shapes {
                    let out = oracle_agreement_sweep(n, m, &budget)?;
                    if out.passed() {
                        let _ = writeln!(lines, "{n}x{m}: PASS ({} matrices)", out.checked);
                    } else {
                        all_ok = false;
                        let first = out
                            .first_mismatch
                            .map(|a| format!("; first mismatch r={}", a.row_code()))
                            .unwrap_or_default();
                        let _ = writeln!(
                            lines,
                            "{n}x{m}: FAIL ({} mismatches of {}{first})",
                            out.mismatches, out.checked
                        );
                    }
                }
                Ok(())
            })??;
            print!("{lines}");
            Ok(if all_ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

/// Writing into a closed pipe (e.g. `bicanon enum 4 4 | head`) is a normal
/// way for a stream to end.
fn broken_pipe(e: std::io::Error) -> Error {
    Error::Domain(format!("write failed: {e}"))
}
