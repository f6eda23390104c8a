use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;

use potts_core::tree::DEFAULT_ENUMERATION_BUDGET;
use potts_core::{
    build_tree, classify, consistency_check, solve_system6, theorem2_condition, verify_compatibility,
    BoundaryAssignment, BoundaryMatrix, InvariantTag, Label, ModelParams, QuadSolution, SolveOutcome,
    SolverConfig,
};

use crate::args::{OutputArgs, SolveArgs, SweepArgs, VerifyArgs};
use crate::error::CliError;
use crate::report::{
    classify_table, solve_table, to_json, verify_table, ClassifyBody, ClassifyEntry, RunReport, SolutionEntry,
    SolveBody, SweepRow, VerifyBody, VerifyEntry,
};

pub const BUDGET_ENV: &str = "POTTS_BUDGET";

/// Field-shape tolerance used when classifying solver output.
fn class_eps(cfg: &SolverConfig) -> f64 {
    cfg.dedupe_eps
}

struct Solved {
    params: ModelParams,
    matrix: BoundaryMatrix,
    cfg: SolverConfig,
    outcome: SolveOutcome<QuadSolution>,
    report: RunReport<()>,
}

fn solve_common(command: &'static str, args: &SolveArgs) -> Result<Solved, CliError> {
    let matrix = args.system.matrix()?;
    let params = args.theta.params(args.system.k)?;
    let cfg = args.system.solver.config()?;
    let condition = theorem2_condition(&matrix, params.theta())?;
    let outcome = solve_system6(&matrix, params.theta(), &cfg)?;
    let mut warnings = Vec::new();
    if outcome.newton_added > 0 {
        warnings.push(format!(
            "{} solution(s) found only by the Newton sweep; the structured enumeration may be incomplete at this grid resolution",
            outcome.newton_added
        ));
    }
    if condition.satisfied && !condition.forces_new_fixed_points() && outcome.len() < 7 {
        warnings.push(format!(
            "condition lhs exceeds one only in absolute value (signed value {:.6}); extra fixed points are not guaranteed on this side",
            condition.signed
        ));
    }
    let report = RunReport {
        command,
        args: std::env::args().skip(1).collect(),
        params,
        matrix,
        solver: cfg,
        condition_lhs: condition.lhs,
        condition,
        body: (),
        warnings,
        elapsed_ms: None,
    };
    Ok(Solved {
        params,
        matrix,
        cfg,
        outcome,
        report,
    })
}

fn finish<T>(base: RunReport<()>, body: T, output: &OutputArgs, start: Instant) -> RunReport<T> {
    RunReport {
        command: base.command,
        args: base.args,
        params: base.params,
        matrix: base.matrix,
        solver: base.solver,
        condition_lhs: base.condition_lhs,
        condition: base.condition,
        body,
        warnings: base.warnings,
        elapsed_ms: output.timing.then(|| start.elapsed().as_secs_f64() * 1e3),
    }
}

pub fn solve(args: &SolveArgs) -> Result<String, CliError> {
    let start = Instant::now();
    let s = solve_common("solve", args)?;
    let eps = class_eps(&s.cfg);
    let solutions = s
        .outcome
        .solutions
        .iter()
        .enumerate()
        .map(|(index, sol)| SolutionEntry {
            index,
            solution: *sol,
            classes: classify(&s.matrix, s.params.k(), sol, eps).classes,
        })
        .collect();
    let body = SolveBody {
        n_solutions: s.outcome.len(),
        newton_added: s.outcome.newton_added,
        solutions,
    };
    let report = finish(s.report, body, &args.output, start);
    Ok(if args.output.pretty { solve_table(&report) } else { to_json(&report) })
}

pub fn classify_cmd(args: &SolveArgs) -> Result<String, CliError> {
    let start = Instant::now();
    let s = solve_common("classify", args)?;
    let eps = class_eps(&s.cfg);
    let classifications = s
        .outcome
        .solutions
        .iter()
        .enumerate()
        .map(|(index, sol)| ClassifyEntry {
            index,
            solution: *sol,
            classification: classify(&s.matrix, s.params.k(), sol, eps),
        })
        .collect();
    let report = finish(s.report, ClassifyBody { classifications }, &args.output, start);
    Ok(if args.output.pretty { classify_table(&report) } else { to_json(&report) })
}

pub fn budget_from_env() -> Result<u64, CliError> {
    match std::env::var(BUDGET_ENV) {
        Ok(raw) => raw
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{BUDGET_ENV} = {raw:?} is not a non-negative integer"))),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_ENUMERATION_BUDGET),
        Err(e) => Err(CliError::Usage(format!("{BUDGET_ENV}: {e}"))),
    }
}

fn fits(q: usize, vertices: usize, budget: u64) -> bool {
    u32::try_from(vertices)
        .ok()
        .and_then(|n| (q as u64).checked_pow(n))
        .is_some_and(|c| c <= budget)
}

/// Report plus whether the consistency check had to fall back to a shallower tree.
pub fn verify(args: &VerifyArgs) -> Result<(String, bool), CliError> {
    let start = Instant::now();
    let budget = budget_from_env()?;
    let solve_args = SolveArgs {
        system: args.system.clone(),
        theta: args.theta.clone(),
        output: args.output.clone(),
    };
    let s = solve_common("verify", &solve_args)?;
    let theta = s.params.theta();
    let tree = build_tree(s.params.k(), args.depth)?;
    let root: Label = args.root_label.into();

    let picked: Vec<(usize, &QuadSolution)> = match args.solution_index {
        Some(i) => {
            let sol = s.outcome.solutions.get(i).ok_or_else(|| {
                CliError::Usage(format!(
                    "--solution-index {i} is out of range: {} solutions",
                    s.outcome.len()
                ))
            })?;
            vec![(i, sol)]
        }
        None => s.outcome.solutions.iter().enumerate().collect(),
    };

    let consistency_depth = (1..=args.depth)
        .rev()
        .find(|&d| fits(s.params.q(), tree.truncate(d).len(), budget));
    let consistency_skipped = consistency_depth != Some(args.depth);
    let small_tree = consistency_depth.map(|d| tree.truncate(d));

    let mut results = Vec::with_capacity(picked.len());
    for (index, sol) in picked {
        let asg = BoundaryAssignment::new(&tree, s.matrix, root, sol.h_vec(), sol.l_vec())?;
        let compatibility_residual = verify_compatibility(&tree, &asg, theta)?;
        let consistency_defect = match &small_tree {
            Some(t) => {
                let restricted = asg.restrict(&tree, t.depth())?;
                Some(consistency_check(t, &restricted, &s.params, budget)?)
            }
            None => None,
        };
        results.push(VerifyEntry {
            index,
            solution: *sol,
            compatibility_residual,
            consistency_defect,
        });
    }

    let mut base = s.report;
    if consistency_skipped {
        base.warnings.push(match consistency_depth {
            Some(d) => format!(
                "3^|V| exceeds the budget of {budget} at depth {}; consistency checked at depth {d}",
                args.depth
            ),
            None => format!("3^|V| exceeds the budget of {budget} at every depth; consistency skipped"),
        });
    }
    let body = VerifyBody {
        depth: args.depth,
        root_label: format!("{root:?}"),
        budget,
        consistency_depth,
        consistency_skipped,
        max_compatibility_residual: results.iter().map(|r| r.compatibility_residual).fold(0.0, f64::max),
        max_consistency_defect: small_tree
            .as_ref()
            .map(|_| results.iter().filter_map(|r| r.consistency_defect).fold(0.0, f64::max)),
        results,
    };
    let report = finish(base, body, &args.output, start);
    let text = if args.output.pretty { verify_table(&report) } else { to_json(&report) };
    Ok((text, consistency_skipped))
}

pub fn theta_grid(min: f64, max: f64, steps: usize) -> Result<Vec<f64>, CliError> {
    if !(min > 0.0 && min.is_finite() && max.is_finite() && max > min) {
        return Err(CliError::Usage(format!(
            "theta range [{min}, {max}] must satisfy 0 < theta-min < theta-max"
        )));
    }
    if steps < 2 {
        return Err(CliError::Usage(format!("--steps {steps} must be at least 2")));
    }
    let span = max - min;
    let last = (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| if i + 1 == steps { max } else { min + span * i as f64 / last })
        .collect())
}

fn sweep_row(m: &BoundaryMatrix, theta: f64, cfg: &SolverConfig) -> potts_core::Result<SweepRow> {
    let condition = theorem2_condition(m, theta)?;
    let out = solve_system6(m, theta, cfg)?;
    let on = |tag| out.solutions.iter().filter(|s| s.lies_on(tag, 0.0)).count();
    Ok(SweepRow {
        theta,
        condition_lhs: condition.lhs,
        n_i1: on(InvariantTag::I1),
        n_i2: on(InvariantTag::I2),
        n_i3: on(InvariantTag::I3),
        n_total: out.len(),
    })
}

pub fn sweep(args: &SweepArgs, out: &mut impl Write) -> Result<(), CliError> {
    let matrix = args.system.matrix()?;
    let cfg = args.system.solver.config()?;
    let grid = theta_grid(args.theta_min, args.theta_max, args.steps)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {} worker threads: {e}", args.jobs)))?;
    let rows: Vec<SweepRow> = pool.install(|| {
        grid.par_iter()
            .map(|&theta| sweep_row(&matrix, theta, &cfg))
            .collect::<potts_core::Result<_>>()
    })?;
    writeln!(out, "# schema=1 k={} m={}", args.system.k, matrix)?;
    let mut w = csv::Writer::from_writer(out);
    for row in &rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}
