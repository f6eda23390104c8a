//! Fixed-point enumeration for the translation-invariant equation, the
//! two-variable pair systems and the four-variable boundary-matrix system.
//!
//! Enumeration is structured first (the reduction of each invariant set to a
//! one-variable equation, bracketed on a grid) and then widened by a damped
//! Newton sweep from low-discrepancy starting points. Neither step proves
//! completeness; both are deterministic for a fixed [`SolverConfig`].

mod newton;
mod pair;
mod roots;
mod system6;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{FieldVec, ScalarKind};

pub use pair::{
    pair_residual, solve_pair_system, solve_ti, solve_weakly_periodic, weakly_periodic_matrix,
};
pub use roots::{find_roots_1d, find_roots_1d_with_deriv};
pub use system6::{quad_residual, solve_system6, w_map};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Max-norm residual a solution must reach to be reported.
    pub tol: f64,
    /// Solutions closer than this in max-norm are merged.
    pub dedupe_eps: f64,
    /// Equispaced nodes used to bracket sign changes in one dimension.
    pub grid_points: usize,
    /// Iteration cap for bisection and Newton.
    pub max_iter: usize,
    /// Newton multi-start points for the 2D and 4D sweeps.
    pub extra_starts: usize,
    /// Offset into the Halton sequence used for the multi-start points.
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            dedupe_eps: 1e-8,
            grid_points: 2001,
            max_iter: 200,
            extra_starts: 64,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidConfig(format!("tol = {} must be positive", self.tol)));
        }
        if !(self.dedupe_eps > self.tol && self.dedupe_eps.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "dedupe_eps = {} must exceed tol = {}",
                self.dedupe_eps, self.tol
            )));
        }
        if self.grid_points < 3 {
            return Err(Error::InvalidConfig(format!(
                "grid_points = {} must be at least 3",
                self.grid_points
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidConfig("max_iter must be positive".into()));
        }
        Ok(())
    }
}

/// A fixed point `(h, l)` of `h = a g(h) + b g(l)`, `l = c g(h) + d g(l)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairSolution {
    pub h: f64,
    pub l: f64,
    pub residual: f64,
    pub func_kind: ScalarKind,
}

/// Which invariant set of the four-variable map a solution lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum InvariantTag {
    /// The origin, which lies on every invariant set.
    #[serde(rename = "zero")]
    Zero,
    /// `h2 = l2 = 0`
    I1,
    /// `h1 = l1 = 0`
    I2,
    /// `h1 = h2`, `l1 = l2`
    I3,
    #[serde(rename = "general")]
    General,
}

impl InvariantTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            InvariantTag::Zero => "zero",
            InvariantTag::I1 => "I1",
            InvariantTag::I2 => "I2",
            InvariantTag::I3 => "I3",
            InvariantTag::General => "general",
        }
    }
}

/// A fixed point `(h1, h2, l1, l2)` of the boundary-matrix map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadSolution {
    pub h1: f64,
    pub h2: f64,
    pub l1: f64,
    pub l2: f64,
    pub invariant_tag: InvariantTag,
    pub residual: f64,
}

impl QuadSolution {
    pub fn coords(&self) -> [f64; 4] {
        [self.h1, self.h2, self.l1, self.l2]
    }

    /// The field `h = (h1, h2)` carried by `H` vertices.
    pub fn h_vec(&self) -> FieldVec {
        FieldVec::pair(self.h1, self.h2).expect("solver output is finite")
    }

    /// The field `l = (l1, l2)` carried by `L` vertices.
    pub fn l_vec(&self) -> FieldVec {
        FieldVec::pair(self.l1, self.l2).expect("solver output is finite")
    }

    /// Whether the point lies on `tag`'s set within `eps` (max-norm).
    pub fn lies_on(&self, tag: InvariantTag, eps: f64) -> bool {
        let [h1, h2, l1, l2] = self.coords();
        match tag {
            InvariantTag::Zero => self.coords().iter().all(|v| v.abs() <= eps),
            InvariantTag::I1 => h2.abs() <= eps && l2.abs() <= eps,
            InvariantTag::I2 => h1.abs() <= eps && l1.abs() <= eps,
            InvariantTag::I3 => (h1 - h2).abs() <= eps && (l1 - l2).abs() <= eps,
            InvariantTag::General => true,
        }
    }
}

/// Solutions plus the number that only the Newton multi-start sweep found.
///
/// A non-zero `newton_added` means the structured case analysis missed a
/// root at this resolution; callers surface it as a warning.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveOutcome<T> {
    pub solutions: Vec<T>,
    pub newton_added: usize,
}

impl<T> SolveOutcome<T> {
    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }
}

/// Interval guaranteed to contain every fixed point of a system whose
/// right-hand side is a non-negative combination of `k` values of `kind`,
/// widened by one on each side.
pub(crate) fn search_interval(k: usize, theta: f64, kind: ScalarKind) -> (f64, f64) {
    let (lo, hi) = kind.range(theta);
    (k as f64 * lo - 1.0, k as f64 * hi + 1.0)
}

fn max_dist<const N: usize>(a: &[f64; N], b: &[f64; N]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}
