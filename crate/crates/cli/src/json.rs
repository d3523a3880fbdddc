//! Machine-readable output. Exponents are always `[p, q]` pairs.

use serde::Serialize;

use perron_core::perron_driver::{DriverStep, PerronResult, SingularityReport};
use perron_core::{Exponent, PuiseuxSeries};

/// `[p, q]` for the exponent `p/q`.
pub type Rational = (i64, i64);

/// `[p, q, c]` for the term `c·t^{p/q}`.
pub type Term = (i64, i64, f64);

pub fn rational(e: Exponent) -> Rational {
    (e.numer(), e.denom())
}

pub fn terms(s: &PuiseuxSeries) -> Vec<Term> {
    s.terms().iter().map(|&(e, c)| (e.numer(), e.denom(), c)).collect()
}

#[derive(Debug, Serialize)]
pub struct StepJson {
    pub process: String,
    pub partition_before: Vec<Vec<usize>>,
    pub partition_after: Vec<Vec<usize>>,
    pub depth_before: Rational,
    pub depth_after: Rational,
    pub delta: Option<Rational>,
    /// `[node, [p, q]]` for every node the step moved.
    pub shifts: Vec<(usize, Rational)>,
}

impl From<&DriverStep> for StepJson {
    fn from(step: &DriverStep) -> Self {
        Self {
            process: step.process.to_string(),
            partition_before: step.partition_before.clone(),
            partition_after: step.partition_after.clone(),
            depth_before: rational(step.depth_before),
            depth_after: rational(step.depth_after),
            delta: step.delta.map(rational),
            shifts: step.transform.iter().map(|(k, e)| (k, rational(e))).collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct PerronJson {
    pub lambda: Vec<Term>,
    pub vector: Vec<Vec<Term>>,
    pub left: Vec<Vec<Term>>,
    pub shifts: Vec<Rational>,
    pub depth: Rational,
    pub seed: Option<u64>,
    pub rounds: usize,
    pub transcript: Vec<StepJson>,
}

impl PerronJson {
    pub fn new(result: &PerronResult, depth: Exponent, seed: Option<u64>) -> Self {
        Self {
            lambda: terms(&result.lambda),
            vector: result.vector.iter().map(terms).collect(),
            left: result.left.iter().map(terms).collect(),
            shifts: result.shifts.iter().copied().map(rational).collect(),
            depth: rational(depth),
            seed,
            rounds: result.transcript.rounds,
            transcript: result.transcript.steps.iter().map(StepJson::from).collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ReportJson {
    pub error: &'static str,
    pub blocks: Vec<Vec<usize>>,
    pub lambda: Vec<Term>,
    pub depth: Rational,
}

impl From<&SingularityReport> for ReportJson {
    fn from(report: &SingularityReport) -> Self {
        Self {
            error: "genericness",
            blocks: report.blocks.clone(),
            lambda: terms(&report.lambda),
            depth: rational(report.depth),
        }
    }
}
