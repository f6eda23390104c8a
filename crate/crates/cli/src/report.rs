use std::fmt::Write as _;

use serde::Serialize;

use potts_core::{
    BoundaryMatrix, Classification, ConditionCheck, MeasureClass, ModelParams, QuadSolution, SolverConfig,
};

/// Everything a command prints, in the order it is serialised.
#[derive(Debug, Serialize)]
pub struct RunReport<T> {
    pub command: &'static str,
    pub args: Vec<String>,
    pub params: ModelParams,
    pub matrix: BoundaryMatrix,
    pub solver: SolverConfig,
    pub condition_lhs: f64,
    pub condition: ConditionCheck,
    #[serde(flatten)]
    pub body: T,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct SolveBody {
    pub n_solutions: usize,
    pub newton_added: usize,
    pub solutions: Vec<SolutionEntry>,
}

#[derive(Debug, Serialize)]
pub struct SolutionEntry {
    pub index: usize,
    #[serde(flatten)]
    pub solution: QuadSolution,
    pub classes: Vec<MeasureClass>,
}

#[derive(Debug, Serialize)]
pub struct ClassifyBody {
    pub classifications: Vec<ClassifyEntry>,
}

#[derive(Debug, Serialize)]
pub struct ClassifyEntry {
    pub index: usize,
    pub solution: QuadSolution,
    pub classification: Classification,
}

#[derive(Debug, Serialize)]
pub struct VerifyBody {
    pub depth: usize,
    pub root_label: String,
    pub budget: u64,
    /// Deepest level at which the exact consistency check fit the budget.
    pub consistency_depth: Option<usize>,
    /// True when the consistency check could not run at `depth`.
    pub consistency_skipped: bool,
    pub max_compatibility_residual: f64,
    pub max_consistency_defect: Option<f64>,
    pub results: Vec<VerifyEntry>,
}

#[derive(Debug, Serialize)]
pub struct VerifyEntry {
    pub index: usize,
    pub solution: QuadSolution,
    pub compatibility_residual: f64,
    pub consistency_defect: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct SweepRow {
    pub theta: f64,
    pub condition_lhs: f64,
    #[serde(rename = "n_solutions_I1")]
    pub n_i1: usize,
    #[serde(rename = "n_solutions_I2")]
    pub n_i2: usize,
    #[serde(rename = "n_solutions_I3")]
    pub n_i3: usize,
    pub n_total: usize,
}

pub fn to_json<T: Serialize>(report: &RunReport<T>) -> String {
    serde_json::to_string_pretty(report).expect("report serialises")
}

fn header<T>(out: &mut String, r: &RunReport<T>) {
    let p = &r.params;
    let _ = write!(out, "k = {}  m = {}  theta = {}", p.k(), r.matrix, p.theta());
    if let (Some(j), Some(b)) = (p.coupling(), p.beta()) {
        let _ = write!(out, "  (J = {j}, beta = {b})");
    }
    let _ = writeln!(
        out,
        "\ncondition lhs = {:.6} ({})",
        r.condition.lhs,
        if r.condition.satisfied { "satisfied" } else { "not satisfied" }
    );
}

fn footer<T>(out: &mut String, r: &RunReport<T>) {
    for w in &r.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    if let Some(ms) = r.elapsed_ms {
        let _ = writeln!(out, "elapsed: {ms:.1} ms");
    }
}

fn class_list(classes: &[MeasureClass]) -> String {
    classes
        .iter()
        .map(|c| match c {
            MeasureClass::Art { k0 } => format!("ART(k0={k0})"),
            MeasureClass::K0TranslationInvariant { k0, p, q_param, .. } => {
                format!("K0TI(k0={k0},p={p},q={q_param})")
            }
            MeasureClass::WeaklyPeriodic { a_size } => format!("WeaklyPeriodic(|A|={a_size})"),
            other => other.tag().to_string(),
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn solution_row(out: &mut String, index: usize, s: &QuadSolution) {
    let _ = write!(
        out,
        "{index:>3}  {:<7} {:>12.6} {:>12.6} {:>12.6} {:>12.6} {:>10.2e}",
        s.invariant_tag.as_str(),
        s.h1,
        s.h2,
        s.l1,
        s.l2,
        s.residual
    );
}

const SOLUTION_HEADER: &str = "  #  set               h1           h2           l1           l2   residual";

pub fn solve_table(r: &RunReport<SolveBody>) -> String {
    let mut out = String::new();
    header(&mut out, r);
    let _ = writeln!(out, "{} solutions\n", r.body.n_solutions);
    let _ = writeln!(out, "{SOLUTION_HEADER}  classes");
    for e in &r.body.solutions {
        solution_row(&mut out, e.index, &e.solution);
        let _ = writeln!(out, "  {}", class_list(&e.classes));
    }
    footer(&mut out, r);
    out
}

pub fn classify_table(r: &RunReport<ClassifyBody>) -> String {
    let mut out = String::new();
    header(&mut out, r);
    let _ = writeln!(out, "\n{SOLUTION_HEADER}  classes [field shape]");
    for e in &r.body.classifications {
        solution_row(&mut out, e.index, &e.solution);
        let shape = e.classification.matched_on.field_shape;
        let mut flags = Vec::new();
        if shape.h_equals_l {
            flags.push("h=l");
        }
        if shape.l_zero {
            flags.push("l=0");
        }
        let _ = writeln!(out, "  {} [{}]", class_list(&e.classification.classes), flags.join(","));
    }
    footer(&mut out, r);
    out
}

pub fn verify_table(r: &RunReport<VerifyBody>) -> String {
    let mut out = String::new();
    header(&mut out, r);
    let b = &r.body;
    let _ = writeln!(out, "depth = {}  root = {}  budget = {}", b.depth, b.root_label, b.budget);
    match b.consistency_depth {
        Some(d) if !b.consistency_skipped => {
            let _ = writeln!(out, "consistency checked at depth {d}");
        }
        Some(d) => {
            let _ = writeln!(out, "consistency skipped at depth {}; checked at depth {d} instead", b.depth);
        }
        None => {
            let _ = writeln!(out, "consistency skipped: no depth fits the budget");
        }
    }
    let _ = writeln!(out, "\n{SOLUTION_HEADER}  compat.res  consistency");
    for e in &b.results {
        solution_row(&mut out, e.index, &e.solution);
        let defect = e.consistency_defect.map_or("-".to_string(), |d| format!("{d:.2e}"));
        let _ = writeln!(out, "  {:>10.2e}  {defect:>11}", e.compatibility_residual);
    }
    footer(&mut out, r);
    out
}
