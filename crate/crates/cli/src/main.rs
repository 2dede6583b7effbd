//! `commrep`: JSON in, JSON out.
//!
//! Exit codes: 0 success, 1 malformed input or internal error, 2 refusal or negative verdict,
//! 3 search budget exhausted. Standard output always carries a single JSON document (help and
//! version text excepted); diagnostics go to standard error.

mod selftest;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;

use commrep_core::certificate::{build_certificate, pairs_from_assignment, verify_certificate, CertificateError};
use commrep_core::commgraph::realizes;
use commrep_core::json::{
    self, AssignmentDoc, CertificateDoc, CompositionDoc, CountCheckDoc, GraphDoc, JsonError, ModuleDoc,
    RealizationDoc, SearchReportDoc, VerdictDoc,
};
use commrep_core::modsplit::{composition_factor_dims, theorem3_count_check, CountVerdict, ModuleError};
use commrep_core::search::{min_realization_dim, Mode, SearchOptions, Status};
use commrep_core::witness::sharp_witness;
use commrep_core::FieldSpec;

#[derive(Parser)]
#[command(name = "commrep", version, about = "Matrix realizations of non-commutation graphs, exactly")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the (n+1)-dimensional realization of the n-edge matching graph.
    Witness {
        #[arg(long)]
        n: usize,
        /// Nonzero scalar, `a` or `a/b`.
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        /// `Q` or `Fp:<prime>`.
        #[arg(long, default_value = "Q")]
        field: FieldSpec,
    },
    /// Check that an assignment realizes a graph.
    VerifyGraph {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        assignment: PathBuf,
    },
    /// Build a lower-bound certificate from an assignment ordered a_1..a_n, b_1..b_n.
    Certify {
        #[arg(long)]
        input: PathBuf,
    },
    /// Check a certificate against the assignment it was built from.
    VerifyCert {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        input: PathBuf,
    },
    /// Bracket the least dimension realizing a graph over a prime field.
    Search {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        field: FieldSpec,
        #[arg(long)]
        rmax: usize,
        #[arg(long, default_value = "all")]
        mode: Mode,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        /// A known realization, used as the upper bound when search stops short.
        #[arg(long)]
        hint: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Composition factor dimensions of a module over F_p.
    Split {
        #[arg(long)]
        module: PathBuf,
    },
    /// Check the dimension-counting chain on a table of factor dimensions.
    CountCheck {
        #[arg(long)]
        dims: PathBuf,
    },
    /// Run the built-in checks.
    Selftest,
}

/// Anything that is not a plain success.
struct Failure {
    exit: u8,
    code: &'static str,
    detail: String,
}

impl Failure {
    fn input(detail: impl ToString) -> Self {
        Failure {
            exit: 1,
            code: "invalid_input",
            detail: detail.to_string(),
        }
    }

    fn refused(code: &'static str, detail: impl ToString) -> Self {
        Failure {
            exit: 2,
            code,
            detail: detail.to_string(),
        }
    }
}

impl From<JsonError> for Failure {
    fn from(e: JsonError) -> Self {
        Failure {
            exit: 1,
            code: "parse_error",
            detail: e.to_string(),
        }
    }
}

#[derive(Serialize)]
struct ErrorDoc<'a> {
    error: &'a str,
    detail: &'a str,
}

/// A document plus the exit code it warrants.
struct Reply {
    exit: u8,
    doc: String,
}

impl Reply {
    fn ok<D: Serialize>(doc: &D) -> Self {
        Reply {
            exit: 0,
            doc: json::render(doc),
        }
    }

    fn with_exit<D: Serialize>(exit: u8, doc: &D) -> Self {
        Reply {
            exit,
            doc: json::render(doc),
        }
    }
}

fn read_doc<D: DeserializeOwned>(path: &Path) -> Result<D, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure {
        exit: 1,
        code: "io_error",
        detail: format!("{}: {e}", path.display()),
    })?;
    json::parse(&text).map_err(|e| Failure {
        exit: 1,
        code: "parse_error",
        detail: format!("{}: {e}", path.display()),
    })
}

fn run(command: Command) -> Result<Reply, Failure> {
    match command {
        Command::Witness { n, lambda, field } => {
            let lambda = field.parse_scalar(&lambda).map_err(Failure::input)?;
            let w = sharp_witness(n, &lambda, field).map_err(Failure::input)?;
            Ok(Reply::ok(&AssignmentDoc::from(&w)))
        }
        Command::VerifyGraph { graph, assignment } => {
            let g = read_doc::<GraphDoc>(&graph)?.to_graph()?;
            let a = read_doc::<AssignmentDoc>(&assignment)?.to_assignment()?;
            let r = realizes(&a, &g).map_err(Failure::input)?;
            let exit = if r.realizes() { 0 } else { 2 };
            Ok(Reply::with_exit(exit, &RealizationDoc::from(&r)))
        }
        Command::Certify { input } => {
            let a = read_doc::<AssignmentDoc>(&input)?.to_assignment()?;
            let pairs = pairs_from_assignment(&a)
                .ok_or_else(|| Failure::input("an assignment of pairs needs an even, nonzero number of matrices"))?;
            match build_certificate(&pairs) {
                Ok(cert) => Ok(Reply::ok(&CertificateDoc::from(&cert))),
                Err(e @ CertificateError::PatternViolation(_)) => Err(Failure::refused("pattern_violation", e)),
                Err(e @ CertificateError::FieldTooSmall { .. }) => Err(Failure::refused("field_too_small", e)),
                Err(e @ CertificateError::ProofStepFailed(_)) => Err(Failure {
                    exit: 1,
                    code: "internal_error",
                    detail: e.to_string(),
                }),
                Err(e) => Err(Failure::input(e)),
            }
        }
        Command::VerifyCert { cert, input } => {
            let c = read_doc::<CertificateDoc>(&cert)?.to_certificate()?;
            let a = read_doc::<AssignmentDoc>(&input)?.to_assignment()?;
            let pairs = pairs_from_assignment(&a)
                .ok_or_else(|| Failure::input("an assignment of pairs needs an even, nonzero number of matrices"))?;
            let verdict = verify_certificate(&c, &pairs);
            let exit = if verdict.valid { 0 } else { 2 };
            Ok(Reply::with_exit(exit, &VerdictDoc::from(&verdict)))
        }
        Command::Search {
            graph,
            field,
            rmax,
            mode,
            budget,
            hint,
            jobs,
        } => {
            let g = read_doc::<GraphDoc>(&graph)?.to_graph()?;
            let hint = match hint {
                Some(path) => Some(read_doc::<AssignmentDoc>(&path)?.to_assignment()?),
                None => None,
            };
            let opts = SearchOptions { mode, budget, jobs };
            let report = min_realization_dim(&g, field, rmax, &opts, hint.as_ref()).map_err(Failure::input)?;
            let exit = if report.status == Status::ExhaustedBudget { 3 } else { 0 };
            Ok(Reply::with_exit(exit, &SearchReportDoc::from(&report)))
        }
        Command::Split { module } => {
            let spec = read_doc::<ModuleDoc>(&module)?.to_module()?;
            match composition_factor_dims(&spec) {
                Ok(report) => Ok(Reply::ok(&CompositionDoc::from(&report))),
                Err(e @ ModuleError::Guard { .. }) => Err(Failure::refused("guard_violation", e)),
                Err(e) => Err(Failure::input(e)),
            }
        }
        Command::CountCheck { dims } => {
            let table = read_doc::<Vec<Vec<u64>>>(&dims)?;
            let check = theorem3_count_check(&table).map_err(Failure::input)?;
            let exit = if check.verdict == CountVerdict::Satisfied { 0 } else { 2 };
            Ok(Reply::with_exit(exit, &CountCheckDoc::from(&check)))
        }
        Command::Selftest => {
            let report = selftest::run();
            let exit = if report.passed { 0 } else { 2 };
            Ok(Reply::with_exit(exit, &report))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(reply) => {
            print!("{}", reply.doc);
            ExitCode::from(reply.exit)
        }
        Err(f) => {
            eprintln!("commrep: {}: {}", f.code, f.detail);
            print!(
                "{}",
                json::render(&ErrorDoc {
                    error: f.code,
                    detail: &f.detail
                })
            );
            ExitCode::from(f.exit)
        }
    }
}
