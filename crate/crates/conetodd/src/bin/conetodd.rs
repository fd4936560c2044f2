//! Thin command-line front end. All real work lives in the library; this
//! file only parses arguments, reads documents, and prints results: the
//! machine-readable document on standard output, a one-line human summary
//! on standard error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};

use conetodd::doc::{self, Document};
use conetodd::mu::MuContext;
use conetodd::polyeml::{self, PolyFunc};
use conetodd::ratlin::{QMat, QSpace, Rat};
use conetodd::todd::todd_coefficients;
use conetodd::verify::{run_suite, Suite};
use conetodd::{Error, Result};

/// Exact Euler-Maclaurin germs of rational cones, equivariant Todd
/// coefficients of complete fans, and weighted lattice-point sums.
#[derive(Parser)]
#[command(name = "conetodd", version)]
struct Cli {
    /// Worker threads for per-cone and per-face work (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Euler-Maclaurin germ of a pointed cone, as a series document.
    Mu {
        /// Cone document (JSON).
        cone: PathBuf,
        /// Trusted series order.
        #[arg(long, default_value_t = 6, value_name = "M")]
        order: u32,
        /// Scalar-product matrix file: a JSON array of rows of rational
        /// strings. Overrides the document's Q field; identity when both
        /// are absent.
        #[arg(long = "Q", value_name = "FILE")]
        metric: Option<PathBuf>,
    },
    /// Todd coefficient series of every cone of a complete fan.
    Todd {
        /// Fan document (JSON).
        fan: PathBuf,
        /// Trusted series order.
        #[arg(long, default_value_t = 6, value_name = "M")]
        order: u32,
        /// Scalar-product matrix file, as for mu.
        #[arg(long = "Q", value_name = "FILE")]
        metric: Option<PathBuf>,
    },
    /// Exact weighted sum over the lattice points of an integral polytope.
    Count {
        /// Polytope document (JSON).
        polytope: PathBuf,
        /// Polynomial weight document; the constant 1 when omitted.
        #[arg(long, value_name = "FILE")]
        weight: Option<PathBuf>,
        /// Also report the per-face contributions.
        #[arg(long)]
        breakdown: bool,
        /// Scalar-product matrix file. The sum is independent of this
        /// choice; the per-face breakdown is not.
        #[arg(long = "Q", value_name = "FILE")]
        metric: Option<PathBuf>,
    },
    /// Run one of the bundled verification suites.
    Verify {
        /// valuation, stokes, tt, localization, danilov, oracle or eml1d.
        suite: String,
        /// Seed for the randomized instances.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Trusted series order for the identities.
        #[arg(long, default_value_t = 6, value_name = "M")]
        order: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        // Failure means a global pool already exists; the default is fine.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// 2 for bad input, 3 for a failed verification, 4 for an arithmetic
/// invariant breach that can only be a bug in the library itself.
fn exit_code(e: &Error) -> u8 {
    if e.is_internal_invariant() {
        4
    } else if matches!(e, Error::VerificationFailed(_)) {
        3
    } else {
        2
    }
}

fn run(cmd: Command) -> Result<ExitCode> {
    match cmd {
        Command::Mu {
            cone,
            order,
            metric,
        } => cmd_mu(&cone, order, metric.as_deref()),
        Command::Todd { fan, order, metric } => cmd_todd(&fan, order, metric.as_deref()),
        Command::Count {
            polytope,
            weight,
            breakdown,
            metric,
        } => cmd_count(&polytope, weight.as_deref(), breakdown, metric.as_deref()),
        Command::Verify { suite, seed, order } => cmd_verify(&suite, seed, order),
    }
}

fn read_document(path: &Path) -> Result<Document> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Document(format!("cannot read {}: {e}", path.display())))?;
    Document::from_json(&text)
}

/// Resolve the scalar product: an explicit --Q file wins over the input
/// document's Q field; identity when both are absent. Returns the space and
/// the matrix to stamp on the output document, if any.
fn resolve_metric(
    flag: Option<&Path>,
    document: &Document,
    dim: usize,
) -> Result<(QSpace, Option<QMat>)> {
    let q = match flag {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Document(format!("cannot read {}: {e}", path.display())))?;
            Some(doc::parse_metric_json(&text, dim)?)
        }
        None => document.metric()?,
    };
    match q {
        Some(q) => Ok((QSpace::with_metric(dim, q.clone())?, Some(q))),
        None => Ok((QSpace::standard(dim), None)),
    }
}

fn stamp(doc: Document, q: &Option<QMat>) -> Document {
    match q {
        Some(q) => doc.with_metric(q),
        None => doc,
    }
}

fn cmd_mu(cone_path: &Path, order: u32, metric: Option<&Path>) -> Result<ExitCode> {
    let document = read_document(cone_path)?;
    let cone = doc::parse_cone_doc(&document)?;
    let (space, q) = resolve_metric(metric, &document, cone.dim())?;
    let ctx = MuContext::new(space);
    let series = ctx.mu(&cone, order)?;
    print!("{}", stamp(doc::series_doc(&series), &q).to_json());
    eprintln!(
        "mu of a {}-dimensional cone with {} ray(s), through order {order}",
        cone.dim(),
        cone.rays().len()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_todd(fan_path: &Path, order: u32, metric: Option<&Path>) -> Result<ExitCode> {
    let document = read_document(fan_path)?;
    let fan = doc::parse_fan_doc(&document)?;
    let (space, q) = resolve_metric(metric, &document, fan.dim())?;
    let ctx = MuContext::new(space);
    let expansion = todd_coefficients(&ctx, &fan, order)?;
    print!("{}", stamp(doc::todd_doc(&fan, &expansion), &q).to_json());
    eprintln!(
        "todd coefficients of a complete fan in dimension {}: {} cones, order {order}",
        fan.dim(),
        expansion.entries().len()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_count(
    polytope_path: &Path,
    weight: Option<&Path>,
    breakdown: bool,
    metric: Option<&Path>,
) -> Result<ExitCode> {
    let document = read_document(polytope_path)?;
    let polytope = doc::parse_polytope_doc(&document)?;
    let ambient = polytope.ambient_dim();
    let weight = match weight {
        Some(path) => doc::parse_polynomial_doc(&read_document(path)?)?,
        None => PolyFunc::one(ambient),
    };
    let (space, q) = resolve_metric(metric, &document, ambient)?;
    let ctx = MuContext::new(space);
    let (rctx, restricted, rweight) = polyeml::restrict_to_span(&ctx, &polytope, &weight)?;
    let contributions = polyeml::face_contributions(&rctx, &restricted, &rweight)?;
    let sum: Rat = contributions.iter().map(|c| c.integral.clone()).sum();
    let faces = breakdown.then_some(contributions.as_slice());
    let count_document = doc::count_doc(ambient, restricted.ambient_dim(), &sum, faces);
    print!("{}", stamp(count_document, &q).to_json());
    eprintln!(
        "weighted sum = {} over a polytope of dimension {} in ambient dimension {ambient}",
        doc::rat_to_string(&sum),
        restricted.ambient_dim()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(suite: &str, seed: u64, order: u32) -> Result<ExitCode> {
    let suite = Suite::from_str(suite)?;
    let report = run_suite(suite, seed, order)?;
    print!("{}", doc::report_doc(&report).to_json());
    let passed = report.items.iter().filter(|i| i.pass).count();
    eprintln!(
        "suite {}: {passed}/{} identities hold (seed {seed}, order {order})",
        report.suite,
        report.items.len()
    );
    if report.passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        for item in report.items.iter().filter(|i| !i.pass) {
            eprintln!("FAIL {}: {} ({})", item.instance, item.identity, item.detail);
        }
        Ok(ExitCode::from(3))
    }
}
