//! The `perron`, `tropical`, `flatten` and `validate` commands.
//!
//! Each command reads a matrix file, writes its report to `out` and
//! diagnostics to `err`, and returns the process exit code.

use std::io::{self, Write};
use std::path::Path;

use perron_core::eigen_expand::residual_valuation;
use perron_core::perron_driver::{run, DriverError, PerronResult, Process, RunOptions, DEFAULT_TOL};
use perron_core::tropical::{trop_eigenvalue, trop_eigenvector, TropicalError, TropicalMatrix};
use perron_core::wdigraph::{
    adjacency_graph, flat_slanted_form_with, is_flat_slanted, similarity_translate, GraphError,
    SimilarityTransform,
};
use perron_core::{Exponent, PuiseuxSeries, Valuation};

use crate::document::{DocumentError, MatrixDocument};
use crate::json::{PerronJson, ReportJson};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_GENERICNESS: i32 = 2;

/// Name of the environment variable that supplies a tolerance.
pub const TOL_ENV: &str = "PERRON_TOL";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error(transparent)]
    Document(#[from] DocumentError),
    #[error(transparent)]
    Driver(#[from] DriverError),
    #[error(transparent)]
    Tropical(#[from] TropicalError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("output: {0}")]
    Output(#[from] io::Error),
    #[error("invalid tolerance '{0}'")]
    Tolerance(String),
}

/// Flags of the `perron` command; unset flags fall back to the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PerronArgs {
    pub depth: Option<Exponent>,
    pub json: bool,
    pub tol: Option<f64>,
    pub delta: Option<Exponent>,
    pub seed: Option<u64>,
}

pub fn load(path: &Path) -> Result<MatrixDocument, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    Ok(text.parse()?)
}

/// The tolerance from the flag, then `PERRON_TOL`, then the file, then the default.
pub fn resolve_tol(flag: Option<f64>, env: Option<&str>, file: Option<f64>) -> Result<f64, CliError> {
    if let Some(tol) = flag {
        return Ok(tol);
    }
    if let Some(text) = env {
        return text.trim().parse().map_err(|_| CliError::Tolerance(text.to_string()));
    }
    Ok(file.unwrap_or(DEFAULT_TOL))
}

fn options(doc: &MatrixDocument, args: &PerronArgs) -> Result<RunOptions, CliError> {
    let env = std::env::var(TOL_ENV).ok();
    let file = doc.options();
    Ok(RunOptions {
        target_depth: args.depth.or(file.depth).unwrap_or(Exponent::integer(2)),
        delta: args.delta.or(file.delta),
        tol: resolve_tol(args.tol, env.as_deref(), file.tol)?,
        ..RunOptions::default()
    })
}

/// Runs `body` and turns its error into a message on `err` and an exit code.
fn report<W: Write, E: Write>(
    out: &mut W,
    err: &mut E,
    json: bool,
    body: impl FnOnce(&mut W) -> Result<i32, CliError>,
) -> i32 {
    match body(out) {
        Ok(code) => code,
        Err(CliError::Driver(DriverError::GenericnessViolation(rep))) => {
            let written = if json {
                serde_json::to_string_pretty(&ReportJson::from(&rep))
                    .map_err(io::Error::from)
                    .and_then(|text| writeln!(out, "{text}"))
            } else {
                writeln!(out, "{rep}")
            };
            if written.is_err() {
                return EXIT_ERROR;
            }
            EXIT_GENERICNESS
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

/// Significant digits of coefficients in text output; JSON keeps every digit.
pub const TEXT_DIGITS: usize = 12;

/// `s` with every coefficient rounded to [`TEXT_DIGITS`] significant digits.
pub fn rounded(s: &PuiseuxSeries) -> PuiseuxSeries {
    let round = |c: f64| format!("{c:.*e}", TEXT_DIGITS - 1).parse().unwrap_or(c);
    PuiseuxSeries::from_terms_tol(s.terms().iter().map(|&(e, c)| (e, round(c))), s.trunc(), 0.0)
}

fn write_vector(out: &mut impl Write, name: &str, v: &[PuiseuxSeries]) -> io::Result<()> {
    writeln!(out, "{name}:")?;
    for (i, x) in v.iter().enumerate() {
        writeln!(out, "  [{}] {}", i + 1, rounded(x))?;
    }
    Ok(())
}

fn tuple<T: std::fmt::Display>(items: &[T]) -> String {
    let parts: Vec<String> = items.iter().map(T::to_string).collect();
    format!("({})", parts.join(", "))
}

/// Perron root and right vector of the matrix in `path`.
pub fn cmd_perron(path: &Path, args: &PerronArgs, out: &mut impl Write, err: &mut impl Write) -> i32 {
    report(out, err, args.json, |out| {
        let doc = load(path)?;
        let opts = options(&doc, args)?;
        let result = run(doc.matrix(), &opts)?;
        let seed = args.seed.or(doc.options().seed);
        if args.json {
            let json = PerronJson::new(&result, opts.target_depth, seed);
            writeln!(out, "{}", serde_json::to_string_pretty(&json)?)?;
        } else {
            writeln!(out, "depth: {}", opts.target_depth)?;
            writeln!(out, "lambda: {}", rounded(&result.lambda))?;
            write_vector(out, "vector", &result.vector)?;
            writeln!(out, "shifts: {}", tuple(&result.shifts))?;
            writeln!(out, "steps: {}", result.transcript.steps.len())?;
        }
        Ok(EXIT_OK)
    })
}

/// Tropical eigenvalue and eigenvector of the valuation matrix.
pub fn cmd_tropical(path: &Path, out: &mut impl Write, err: &mut impl Write) -> i32 {
    report(out, err, false, |out| {
        let doc = load(path)?;
        let c = TropicalMatrix::valuation_matrix(doc.matrix());
        let lambda = trop_eigenvalue(&c)?;
        writeln!(out, "Lambda: {lambda}")?;
        match lambda {
            Valuation::Finite(_) => writeln!(out, "eigenvector: {}", tuple(&trop_eigenvector(&c, lambda)?))?,
            Valuation::Infinite => writeln!(out, "eigenvector: none (no cycles)")?,
        }
        Ok(EXIT_OK)
    })
}

/// Flat-slanted form of the valuation graph with slant `delta`.
pub fn cmd_flatten(path: &Path, delta: Option<Exponent>, out: &mut impl Write, err: &mut impl Write) -> i32 {
    report(out, err, false, |out| {
        let doc = load(path)?;
        let g = adjacency_graph(doc.matrix());
        let (h, s) = flat_slanted_form_with(&g, delta)?;
        writeln!(out, "shifts: {}", tuple(&s.to_vec(g.node_count())))?;
        write!(out, "{}", h.to_dot())?;
        Ok(EXIT_OK)
    })
}

/// One named invariant check of `validate`.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

/// Re-checks the driver invariants on a finished run of `y`.
pub fn invariant_checks(
    y: &perron_core::PuiseuxMatrix,
    result: &PerronResult,
    opts: &RunOptions,
) -> Vec<Check> {
    let mut checks = Vec::new();
    let mut check = |name: String, passed: bool| checks.push(Check { name, passed });
    for (k, step) in result.transcript.steps.iter().enumerate() {
        let label = format!("step {} ({})", k + 1, step.process);
        match step.process {
            Process::A => {
                check(format!("{label}: graph is flat-slanted"), is_flat_slanted(&step.graph_after));
                check(format!("{label}: depth unchanged"), step.depth_after == step.depth_before);
            }
            Process::B | Process::C => {
                check(format!("{label}: depth increases"), step.depth_after > step.depth_before);
                check(
                    format!("{label}: partition coarsens"),
                    coarsens(&step.partition_before, &step.partition_after),
                );
            }
        }
    }
    let translated =
        similarity_translate(&adjacency_graph(y), &SimilarityTransform::from_shifts(&result.shifts));
    check(
        "conjugated graph equals translated graph".into(),
        translated.is_ok_and(|g| g == adjacency_graph(&result.conjugated)),
    );
    for block in result.pfdata.blocks() {
        check(format!("block {:?} is Perron-Frobenius", block.nodes()), block.is_perron_frobenius(opts.tol));
    }
    check(
        "lambda has a positive leading coefficient".into(),
        result.lambda.leading_coeff().is_some_and(|c| c > 0.0),
    );
    check(
        "vector has nonnegative leading coefficients".into(),
        result.vector.iter().all(|x| x.leading_coeff().is_none_or(|c| c >= -opts.tol)),
    );
    let required = y.val().finite().unwrap_or(Exponent::ZERO) + opts.target_depth;
    let found = residual_valuation(y, &result.lambda, &result.vector);
    check(format!("residual valuation {found} exceeds {required}"), found > required);
    checks
}

/// True when `after` has fewer blocks and every block of `before` lies in one of them.
fn coarsens(before: &[Vec<usize>], after: &[Vec<usize>]) -> bool {
    after.len() < before.len() && before.iter().all(|b| after.iter().any(|a| b.iter().all(|k| a.contains(k))))
}

/// Runs the driver and re-checks every invariant on its transcript.
pub fn cmd_validate(path: &Path, args: &PerronArgs, out: &mut impl Write, err: &mut impl Write) -> i32 {
    report(out, err, false, |out| {
        let doc = load(path)?;
        let opts = options(&doc, args)?;
        let result = run(doc.matrix(), &opts)?;
        let checks = invariant_checks(doc.matrix(), &result, &opts);
        for c in &checks {
            writeln!(out, "{} {}", if c.passed { "ok  " } else { "FAIL" }, c.name)?;
        }
        let failed = checks.iter().filter(|c| !c.passed).count();
        writeln!(out, "{} checks, {failed} failed", checks.len())?;
        Ok(if failed == 0 { EXIT_OK } else { EXIT_ERROR })
    })
}
