//! Command-line front end: root enumeration, decomposition search, full
//! classification, and the built-in acceptance self-test.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use twocat::algebra::{dim_table, QuiverAlgebra};
use twocat::classify::classify_with;
use twocat::decomp::{enumerate_decompositions_with, FilterSet};
use twocat::report::{
    classify_report, decompose_report, render_classify, render_decompose, render_roots,
    render_selftest, roots_report, AlgebraRepr, MatrixRepr,
};
use twocat::roots::{enumerate_roots, CandidateMatrix, RootMode};
use twocat::selftest;
use twocat::{Int, Mat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "twocat",
    version,
    about = "Exhaustive integer-matrix search for 2-representations of projective functors",
    disable_help_subcommand = true
)]
struct Cli {
    /// Output format for the report printed to stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads; overrides the TWOCAT_WORKERS environment variable.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Enumerate positive integer matrices M with M^2 = dim * M.
    Roots {
        #[arg(long)]
        dim: Int,
        /// Emit every matrix instead of one canonical representative per
        /// permutation orbit.
        #[arg(long)]
        raw: bool,
    },
    /// Split a target matrix into a family respecting the composition table.
    Decompose {
        #[arg(long)]
        quiver: PathBuf,
        /// Either an id into the enumeration for this algebra's dimension
        /// ("c3" = 3rd canonical, "r5" = 5th raw, 1-based) or inline rows
        /// such as "2,1;2,1".
        #[arg(long)]
        target: String,
        /// Comma-separated filters to disable: trace_budget,
        /// column_support, idempotent_rank_one, adjunction.
        #[arg(long = "no-filter", value_delimiter = ',')]
        no_filter: Vec<String>,
        /// Assert a projective-injective pair "s,t" (1-based) instead of
        /// detecting pairs from dimension vectors.
        #[arg(long = "assume-proj-inj")]
        assume_proj_inj: Option<String>,
    },
    /// Run the full pipeline and classify the 2-representations.
    Classify {
        #[arg(long)]
        quiver: PathBuf,
        /// Also write the JSON report to this file.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Assert a projective-injective pair "s,t" (1-based) instead of
        /// detecting pairs from dimension vectors.
        #[arg(long = "assume-proj-inj")]
        assume_proj_inj: Option<String>,
    },
    /// Run the acceptance suite against the bundled quiver files.
    Selftest {
        /// Directory containing a2.quiver and a3zero.quiver.
        #[arg(long, default_value = "corpus")]
        corpus: PathBuf,
    },
}

#[derive(Debug)]
enum CliError {
    /// Exit 1: bad input (arguments, files, parse failures).
    Input(String),
    /// Exit 2: the method does not apply to this algebra.
    Inapplicable(String),
    /// Exit 3: an internal invariant was violated.
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Inapplicable(_) => 2,
            CliError::Internal(_) => 3,
        }
    }

    fn line(&self) -> String {
        match self {
            CliError::Input(msg) => format!("error: input: {msg}"),
            CliError::Inapplicable(msg) => format!("error: inapplicable: {msg}"),
            CliError::Internal(msg) => format!("error: internal: {msg}"),
        }
    }
}

fn input<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

fn read_quiver(path: &Path) -> Result<QuiverAlgebra, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    QuiverAlgebra::parse(&text).map_err(input)
}

fn parse_index_pair(text: &str) -> Result<(usize, usize), CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(CliError::Input(format!(
            "expected \"s,t\", got \"{text}\""
        )));
    }
    let s: usize = parts[0].trim().parse().map_err(input)?;
    let t: usize = parts[1].trim().parse().map_err(input)?;
    if s == 0 || t == 0 {
        return Err(CliError::Input("vertex indices are 1-based".to_string()));
    }
    Ok((s - 1, t - 1))
}

fn parse_target(spec: &str, dim: Int) -> Result<CandidateMatrix, CliError> {
    let spec = spec.trim();
    let indexed = |mode: RootMode, idx_text: &str| -> Result<CandidateMatrix, CliError> {
        let idx: usize = idx_text.parse().map_err(input)?;
        let roots = enumerate_roots(dim, mode).map_err(input)?;
        if idx == 0 || idx > roots.len() {
            return Err(CliError::Input(format!(
                "target index {idx} out of range 1..={}",
                roots.len()
            )));
        }
        Ok(roots[idx - 1].clone())
    };
    if let Some(rest) = spec.strip_prefix('c') {
        if rest.chars().all(|c| c.is_ascii_digit()) && !rest.is_empty() {
            return indexed(RootMode::Canonical, rest);
        }
    }
    if let Some(rest) = spec.strip_prefix('r') {
        if rest.chars().all(|c| c.is_ascii_digit()) && !rest.is_empty() {
            return indexed(RootMode::Raw, rest);
        }
    }
    let rows: Result<Vec<Vec<Int>>, CliError> = spec
        .split(';')
        .map(|row| {
            row.split(',')
                .map(|v| v.trim().parse::<Int>().map_err(input))
                .collect()
        })
        .collect();
    let rows = rows?;
    let width = rows.first().map(Vec::len).unwrap_or(0);
    if width == 0 || rows.iter().any(|r| r.len() != width) {
        return Err(CliError::Input("inline target rows must be nonempty and rectangular".to_string()));
    }
    CandidateMatrix::new(Mat::from_rows(rows), dim).map_err(input)
}

fn algebra_repr(alg: &QuiverAlgebra) -> AlgebraRepr {
    let table = dim_table(alg);
    AlgebraRepr {
        vertices: alg.vertex_count,
        dimension: alg.dim() as Int,
        d: MatrixRepr::of(&table.d),
    }
}

fn emit(format: Format, text: String, json: String) {
    match format {
        Format::Text => print!("{text}"),
        Format::Json => println!("{json}"),
    }
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Roots { dim, raw } => {
            let mode = if *raw { RootMode::Raw } else { RootMode::Canonical };
            let roots = enumerate_roots(*dim, mode).map_err(input)?;
            let report = roots_report(*dim, mode, &roots);
            let json = serde_json::to_string_pretty(&report)
                .map_err(|e| CliError::Internal(e.to_string()))?;
            emit(cli.format, render_roots(&report), json);
            Ok(())
        }
        Command::Decompose {
            quiver,
            target,
            no_filter,
            assume_proj_inj,
        } => {
            let alg = read_quiver(quiver)?;
            let table = dim_table(&alg);
            let dim = alg.dim() as Int;
            let target = parse_target(target, dim)?;
            let mut filters = FilterSet::all();
            for name in no_filter {
                filters.disable(name).map_err(CliError::Input)?;
            }
            let adjoints = match assume_proj_inj {
                Some(text) => {
                    let pair = parse_index_pair(text)?;
                    if pair.0 >= table.n || pair.1 >= table.n {
                        return Err(CliError::Input("vertex index out of range".to_string()));
                    }
                    table.adjoint_pairs_from(&[pair])
                }
                None => table.adjoint_pairs(),
            };
            let decs = enumerate_decompositions_with(&target, &table, filters, &adjoints)
                .map_err(input)?;
            let report = decompose_report(algebra_repr(&alg), &target, filters, &decs);
            let json = serde_json::to_string_pretty(&report)
                .map_err(|e| CliError::Internal(e.to_string()))?;
            emit(cli.format, render_decompose(&report), json);
            Ok(())
        }
        Command::Classify {
            quiver,
            json,
            assume_proj_inj,
        } => {
            let alg = read_quiver(quiver)?;
            let table = dim_table(&alg);
            let assume = match assume_proj_inj {
                Some(text) => {
                    let pair = parse_index_pair(text)?;
                    if pair.0 >= table.n || pair.1 >= table.n {
                        return Err(CliError::Input("vertex index out of range".to_string()));
                    }
                    Some(vec![pair])
                }
                None => None,
            };
            let result = classify_with(&alg, assume).map_err(|e| match e {
                twocat::classify::ClassifyError::MethodInapplicable => {
                    CliError::Inapplicable(e.to_string())
                }
                other => CliError::Input(other.to_string()),
            })?;
            let report = classify_report(&result);
            let json_text = serde_json::to_string_pretty(&report)
                .map_err(|e| CliError::Internal(e.to_string()))?;
            if let Some(path) = json {
                std::fs::write(path, format!("{json_text}\n"))
                    .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            }
            emit(cli.format, render_classify(&report), json_text);
            Ok(())
        }
        Command::Selftest { corpus } => {
            let read = |name: &str| -> Result<String, CliError> {
                let path = corpus.join(name);
                std::fs::read_to_string(&path)
                    .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
            };
            let a2 = read("a2.quiver")?;
            let a3 = read("a3zero.quiver")?;
            let report = selftest::run(&a2, &a3).map_err(input)?;
            let json = serde_json::to_string_pretty(&report)
                .map_err(|e| CliError::Internal(e.to_string()))?;
            emit(cli.format, render_selftest(&report), json);
            if report.passed {
                Ok(())
            } else {
                Err(CliError::Internal("selftest failed".to_string()))
            }
        }
    }
}

fn worker_count(cli: &Cli) -> Result<usize, CliError> {
    if let Some(w) = cli.workers {
        if w == 0 {
            return Err(CliError::Input("worker count must be at least 1".to_string()));
        }
        return Ok(w);
    }
    match std::env::var("TWOCAT_WORKERS") {
        Ok(text) => {
            let w: usize = text
                .trim()
                .parse()
                .map_err(|_| CliError::Input(format!("TWOCAT_WORKERS: bad value \"{text}\"")))?;
            if w == 0 {
                return Err(CliError::Input("worker count must be at least 1".to_string()));
            }
            Ok(w)
        }
        Err(_) => Ok(1),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            eprintln!("error: input: {}", e.kind());
            eprint!("{e}");
            return ExitCode::from(1);
        }
        Err(e) => {
            // --help / --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    let run = worker_count(&cli).and_then(|workers| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| CliError::Internal(e.to_string()))?;
        pool.install(|| execute(&cli))
    });
    match run {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.line());
            ExitCode::from(e.code())
        }
    }
}
