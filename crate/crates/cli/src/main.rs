mod io;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use cloneregion::fidelity::{
    closed_form_fidelities, corrected_closed_form_fidelities, fidelity_tuple, singlet_to_cloning,
    werner_fidelity,
};
use cloneregion::oracle::verify;
use cloneregion::reconstruct::{maximize_on_sphere, ConstraintSpec};
use cloneregion::region::{convex_hull_3d, sample_region, Point3};
use cloneregion::report::{report_with, ReportOptions};
use cloneregion::sgroup::{qubit_partitions, Irrep};
use cloneregion::{matrix_rows, Partition, PureIrrepState, SupportEvaluator, Verdict};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::io::{parse_reals, read_sample_csv, write_json, write_sample_csv};

const EXIT_VALIDATION: u8 = 2;
const EXIT_VERIFICATION: u8 = 3;

#[derive(Parser)]
#[command(
    name = "cloneregion",
    version,
    about = "Admissible singlet-fraction regions of 1->N universal qubit cloners"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the two-row irreps of S_n, or one irrep's tableaux and V_(1k) matrices.
    Reps {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Fidelity tuple (F12..F1n) of a pure irrep state.
    Fidelity {
        #[arg(long)]
        lambda: String,
        /// Comma-separated real amplitudes; rescaled to unit norm.
        #[arg(long, allow_hyphen_values = true)]
        amplitudes: String,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Optimal symmetric N1 -> N2 cloning fidelity for d-level systems.
    Werner {
        #[arg(long)]
        n1: usize,
        #[arg(long)]
        n2: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
    },
    /// Random pure states of every irrep and their fidelity tuples, as CSV.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long = "per-lambda")]
        per_lambda: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Convex hull of the points in a sample file (n = 4 only).
    Hull {
        #[arg(long = "in")]
        input: PathBuf,
        /// Restrict to one irrep, e.g. "3,1".
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Support function h(w) and the state attaining it.
    Support {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        dir: String,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Region membership of one point, or of every point of a sample file.
    Member {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "input")]
        point: Option<String>,
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// States of one irrep meeting linear fidelity relations.
    Reconstruct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lambda: String,
        /// Linear objective to maximize, e.g. "F1".
        #[arg(long)]
        maximize: Option<String>,
        /// Relation such as "F1+F3=2F2"; repeatable.
        #[arg(long = "constraint")]
        constraints: Vec<String>,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
        #[arg(long, default_value_t = 11)]
        seed: u64,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Compare irrep-level fidelities with the full 2^n-dimensional computation.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Consolidated JSON report for n = 3, 4 or 5.
    Report {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long = "plane-samples", default_value_t = 2000)]
        plane_samples: usize,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
        #[arg(long, default_value = "-")]
        out: String,
    },
}

enum Outcome {
    Done,
    VerificationFailed,
}

fn lambda_for(n: usize, text: &str) -> Result<Partition> {
    let lambda: Partition = text.parse()?;
    if lambda.n() != n {
        bail!("partition {lambda} is not a partition of n = {n}");
    }
    Ok(lambda)
}

#[derive(Serialize)]
struct IrrepSummary {
    lambda: Partition,
    dimension: usize,
    multiplicity: usize,
}

fn reps(n: usize, lambda: Option<&str>, out: &str) -> Result<()> {
    let partitions = qubit_partitions(n)?;
    let Some(text) = lambda else {
        let list: Vec<IrrepSummary> = partitions
            .iter()
            .map(|l| IrrepSummary {
                lambda: l.clone(),
                dimension: l.dimension(),
                multiplicity: l.qubit_multiplicity(),
            })
            .collect();
        let total: usize = list.iter().map(|s| s.dimension * s.multiplicity).sum();
        return write_json(
            out,
            &json!({ "n": n, "partitions": list, "total_dimension": total }),
        );
    };
    let lambda = lambda_for(n, text)?;
    let irrep = Irrep::new(&lambda);
    let transpositions: Vec<_> = (2..=n)
        .map(|k| -> Result<_> {
            Ok(json!({ "pair": [1, k], "matrix": matrix_rows(&irrep.transposition(1, k)?) }))
        })
        .collect::<Result<_>>()?;
    let tableaux: Vec<_> = irrep.tableaux().iter().map(|t| t.rows().to_vec()).collect();
    write_json(
        out,
        &json!({
            "n": n,
            "lambda": lambda,
            "dimension": irrep.dim(),
            "multiplicity": lambda.qubit_multiplicity(),
            "tableaux": tableaux,
            "transpositions": transpositions,
        }),
    )
}

fn fidelity(lambda: &str, amplitudes: &str, out: &str) -> Result<()> {
    let lambda: Partition = lambda.parse()?;
    let state = PureIrrepState::normalized(lambda.clone(), parse_reals(amplitudes)?)?;
    let point = fidelity_tuple(&state);
    let cloning = point
        .values
        .iter()
        .map(|&f| singlet_to_cloning(f).map(|c| c.f))
        .collect::<cloneregion::Result<Vec<_>>>()?;
    let mut doc = json!({
        "lambda": lambda,
        "amplitudes": state.amplitudes(),
        "fidelities": point.values,
        "cloning_fidelities": cloning,
    });
    if let (Ok(printed), Ok(corrected)) = (
        closed_form_fidelities(&lambda, state.amplitudes()),
        corrected_closed_form_fidelities(&lambda, state.amplitudes()),
    ) {
        doc["closed_form"] = json!({ "printed": printed.values, "corrected": corrected.values });
    }
    write_json(out, &doc)
}

fn hull(input: &Path, lambda: Option<&str>, out: &str) -> Result<()> {
    let file = read_sample_csv(input)?;
    if file.n != 4 {
        bail!("hulls are three-dimensional; the file has n = {}", file.n);
    }
    let filter = lambda.map(|l| lambda_for(4, l)).transpose()?;
    let points: Vec<Point3> = file
        .rows
        .iter()
        .filter(|r| filter.as_ref().is_none_or(|l| &r.lambda == l))
        .map(|r| [r.fidelities[0], r.fidelities[1], r.fidelities[2]])
        .collect();
    let hull = convex_hull_3d(&points)?;
    write_json(
        out,
        &json!({
            "n": 4,
            "lambda": filter,
            "input_points": points.len(),
            "seed": file.seed,
            "volume": hull.volume(),
            "vertices": hull.vertices,
            "facets": hull.facets,
        }),
    )
}

fn support(n: usize, dir: &str, out: &str) -> Result<()> {
    let h = SupportEvaluator::new(n)?;
    let value = h.evaluate(&parse_reals(dir)?)?;
    write_json(
        out,
        &json!({
            "n": n,
            "value": value.value,
            "lambda": value.lambda,
            "witness": value.witness.amplitudes(),
            "point": value.point.values,
        }),
    )
}

#[derive(Serialize)]
struct PointVerdict {
    verdict: Verdict,
    max_violation: f64,
}

fn member(
    n: Option<usize>,
    point: Option<&str>,
    input: Option<&PathBuf>,
    tol: f64,
    out: &str,
) -> Result<()> {
    match (point, input) {
        (Some(point), None) => {
            let n = n.context("--point needs --n")?;
            let m = SupportEvaluator::new(n)?.membership(&parse_reals(point)?, tol)?;
            write_json(
                out,
                &json!({
                    "n": n,
                    "tolerance": tol,
                    "verdict": m.verdict,
                    "max_violation": m.max_violation,
                    "separator": m.separator,
                }),
            )
        }
        (None, Some(path)) => {
            let file = read_sample_csv(path)?;
            if n.is_some_and(|n| n != file.n) {
                bail!("--n disagrees with the file (n = {})", file.n);
            }
            let h = SupportEvaluator::new(file.n)?;
            let results = file
                .rows
                .par_iter()
                .map(|r| {
                    h.membership(&r.fidelities, tol).map(|m| PointVerdict {
                        verdict: m.verdict,
                        max_violation: m.max_violation,
                    })
                })
                .collect::<cloneregion::Result<Vec<_>>>()?;
            let count = |v: Verdict| results.iter().filter(|r| r.verdict == v).count();
            write_json(
                out,
                &json!({
                    "n": file.n,
                    "tolerance": tol,
                    "points": results.len(),
                    "inside": count(Verdict::Inside),
                    "boundary": count(Verdict::Boundary),
                    "outside": count(Verdict::Outside),
                    "results": results,
                }),
            )
        }
        _ => bail!("give exactly one of --point or --in"),
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Reps { n, lambda, out } => reps(n, lambda.as_deref(), &out)?,
        Command::Fidelity {
            lambda,
            amplitudes,
            out,
        } => fidelity(&lambda, &amplitudes, &out)?,
        Command::Werner { n1, n2, d } => println!("{}", werner_fidelity(n1, n2, d)?),
        Command::Sample {
            n,
            per_lambda,
            seed,
            out,
        } => write_sample_csv(&out, &sample_region(n, per_lambda, seed)?)?,
        Command::Hull { input, lambda, out } => hull(&input, lambda.as_deref(), &out)?,
        Command::Support { n, dir, out } => support(n, &dir, &out)?,
        Command::Member {
            n,
            point,
            input,
            tol,
            out,
        } => member(n, point.as_deref(), input.as_ref(), tol, &out)?,
        Command::Reconstruct {
            n,
            lambda,
            maximize,
            constraints,
            restarts,
            seed,
            out,
        } => {
            let lambda = lambda_for(n, &lambda)?;
            let relations: Vec<&str> = constraints.iter().map(String::as_str).collect();
            let spec = ConstraintSpec::parse(n, maximize.as_deref(), &relations)?;
            write_json(&out, &maximize_on_sphere(&lambda, &spec, seed, restarts)?)?;
        }
        Command::Verify {
            n,
            trials,
            seed,
            out,
        } => {
            let report = verify(n, trials, seed)?;
            write_json(&out, &report)?;
            if !report.passed {
                return Ok(Outcome::VerificationFailed);
            }
        }
        Command::Report {
            n,
            seed,
            plane_samples,
            restarts,
            out,
        } => {
            let options = ReportOptions {
                seed,
                plane_samples,
                restarts,
            };
            write_json(&out, &report_with(n, &options)?)?;
        }
    }
    Ok(Outcome::Done)
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var("CLONE_REGION_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .with_context(|| {
            format!("CLONE_REGION_THREADS must be a positive integer, got {value:?}")
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|()| run(cli)) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::VerificationFailed) => {
            eprintln!("error: verification exceeded tolerance");
            ExitCode::from(EXIT_VERIFICATION)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_VALIDATION)
        }
    }
}
