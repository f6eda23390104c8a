use clap::{Args, Parser, Subcommand, ValueEnum};

use potts_core::{BoundaryMatrix, Label, ModelParams, SolverConfig};

use crate::error::CliError;

/// Splitting Gibbs measures of the three-state Potts model from a boundary matrix.
#[derive(Debug, Parser)]
#[command(name = "potts", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate fixed points of the four-variable system and classify them.
    Solve(SolveArgs),
    /// Count fixed points per invariant set over a theta grid (CSV).
    Sweep(SweepArgs),
    /// Check tree compatibility and exact finite-volume consistency.
    Verify(VerifyArgs),
    /// Classify every solution against the known measure families.
    Classify(SolveArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SystemArgs {
    /// Tree order (children per vertex).
    #[arg(long)]
    pub k: usize,
    /// Boundary matrix as a,b,c,d with a+b = c+d = k.
    #[arg(long, value_name = "A,B,C,D")]
    pub m: BoundaryMatrix,
    #[command(flatten)]
    pub solver: SolverArgs,
}

impl SystemArgs {
    pub fn matrix(&self) -> Result<BoundaryMatrix, CliError> {
        self.m.check_order(self.k)?;
        Ok(self.m)
    }
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    /// Residual tolerance for reported solutions.
    #[arg(long, default_value_t = SolverConfig::default().tol)]
    pub tol: f64,
    /// Max-norm radius within which solutions are merged.
    #[arg(long, default_value_t = SolverConfig::default().dedupe_eps)]
    pub dedupe_eps: f64,
    /// Grid nodes for bracketing one-dimensional roots.
    #[arg(long, default_value_t = SolverConfig::default().grid_points)]
    pub grid_points: usize,
    /// Newton multi-start points.
    #[arg(long, default_value_t = SolverConfig::default().extra_starts)]
    pub extra_starts: usize,
    /// Offset into the multi-start sequence.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl SolverArgs {
    pub fn config(&self) -> Result<SolverConfig, CliError> {
        let cfg = SolverConfig {
            tol: self.tol,
            dedupe_eps: self.dedupe_eps,
            grid_points: self.grid_points,
            extra_starts: self.extra_starts,
            seed: self.seed,
            ..SolverConfig::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Args)]
pub struct ThetaArgs {
    /// theta = exp(J beta); give this or both --J and --beta.
    #[arg(long)]
    pub theta: Option<f64>,
    /// Coupling constant.
    #[arg(long = "J", allow_negative_numbers = true)]
    pub coupling: Option<f64>,
    /// Inverse temperature.
    #[arg(long)]
    pub beta: Option<f64>,
}

impl ThetaArgs {
    pub fn params(&self, k: usize) -> Result<ModelParams, CliError> {
        let p = match (self.theta, self.coupling, self.beta) {
            (Some(t), None, None) => ModelParams::new(3, k, t)?,
            (None, Some(j), Some(b)) => ModelParams::from_coupling(3, k, j, b)?,
            (Some(t), Some(j), Some(b)) => ModelParams::with_all(3, k, j, b, t)?,
            _ => {
                return Err(CliError::Usage(
                    "give --theta, or both --J and --beta".into(),
                ))
            }
        };
        Ok(p)
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Print a table instead of JSON.
    #[arg(long)]
    pub pretty: bool,
    /// Include wall-clock time in the report.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    pub theta: ThetaArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(long)]
    pub theta_min: f64,
    #[arg(long)]
    pub theta_max: f64,
    /// Grid points including both ends.
    #[arg(long, default_value_t = 21)]
    pub steps: usize,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RootLabel {
    H,
    L,
}

impl From<RootLabel> for Label {
    fn from(r: RootLabel) -> Self {
        match r {
            RootLabel::H => Label::H,
            RootLabel::L => Label::L,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    pub theta: ThetaArgs,
    /// Depth of the truncated tree.
    #[arg(long, default_value_t = 2)]
    pub depth: usize,
    /// Verify only this solution (index into the solve ordering).
    #[arg(long)]
    pub solution_index: Option<usize>,
    /// Label of the root vertex.
    #[arg(long, value_enum, default_value_t = RootLabel::H, ignore_case = true)]
    pub root_label: RootLabel,
    #[command(flatten)]
    pub output: OutputArgs,
}
