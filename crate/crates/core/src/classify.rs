//! Matching a boundary matrix and a solution against the known families of
//! splitting Gibbs measures.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::model::BoundaryMatrix;
use crate::solvers::QuadSolution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "tag", content = "parameters")]
pub enum MeasureClass {
    TranslationInvariant,
    #[serde(rename = "ART")]
    Art { k0: usize },
    /// `a = p + k0`, `b = q_param`, `c = q_param + k0`, `d = p`. Only
    /// `k0 = 2` appears in the literature; other orders are `extrapolated`.
    K0TranslationInvariant {
        k0: usize,
        p: usize,
        q_param: usize,
        extrapolated: bool,
    },
    TwoPeriodic,
    WeaklyPeriodic { a_size: usize },
    NewClass,
}

impl MeasureClass {
    pub fn tag(&self) -> &'static str {
        match self {
            Self::TranslationInvariant => "TranslationInvariant",
            Self::Art { .. } => "ART",
            Self::K0TranslationInvariant { .. } => "K0TranslationInvariant",
            Self::TwoPeriodic => "TwoPeriodic",
            Self::WeaklyPeriodic { .. } => "WeaklyPeriodic",
            Self::NewClass => "NewClass",
        }
    }
}

/// Which field-shape conditions the solution met.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldShape {
    /// `|h - l| <= eps`
    pub h_equals_l: bool,
    /// `|l| <= eps`
    pub l_zero: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchBasis {
    /// Tags whose matrix pattern matched, before field-shape filtering.
    pub matrix_pattern: Vec<String>,
    pub field_shape: FieldShape,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub classes: Vec<MeasureClass>,
    pub matched_on: MatchBasis,
}

impl Classification {
    pub fn contains_tag(&self, tag: &str) -> bool {
        self.classes.iter().any(|c| c.tag() == tag)
    }

    pub fn is_new(&self) -> bool {
        self.classes == [MeasureClass::NewClass]
    }
}

/// Matrix patterns alone, with field-shape requirements attached.
fn matrix_patterns(m: &BoundaryMatrix, k: usize) -> Vec<(MeasureClass, Requirement)> {
    let BoundaryMatrix { a, b, c, d } = *m;
    let mut out = Vec::new();
    if a == c {
        out.push((MeasureClass::TranslationInvariant, Requirement::HEqualsL));
    }
    if a >= 1 && b == k - a {
        out.push((MeasureClass::Art { k0: a }, Requirement::LZero));
    }
    if a > d && d >= 1 && b >= 1 && c == b + (a - d) {
        let k0 = a - d;
        out.push((
            MeasureClass::K0TranslationInvariant {
                k0,
                p: d,
                q_param: b,
                extrapolated: k0 != 2,
            },
            Requirement::None,
        ));
    }
    if a == 0 && b == k && c == k && d == 0 {
        out.push((MeasureClass::TwoPeriodic, Requirement::None));
    }
    if b >= 1 && b <= k && a == k - b && c == k + 1 - b && d + 1 == b {
        debug_assert_eq!(c + d, k);
        out.push((MeasureClass::WeaklyPeriodic { a_size: b }, Requirement::None));
    }
    out
}

#[derive(Debug, Clone, Copy)]
enum Requirement {
    None,
    HEqualsL,
    LZero,
}

/// Every known class whose matrix pattern and field shape fit `(m, sol)`,
/// or `{NewClass}` when none does.
///
/// A solution with `h = l` puts the same field on every vertex whatever the
/// labelling, so it is reported as `TranslationInvariant` for any matrix;
/// `matched_on.matrix_pattern` still lists that tag only when `a = c`.
pub fn classify(m: &BoundaryMatrix, k: usize, sol: &QuadSolution, eps: f64) -> Classification {
    let h_equals_l = (sol.h1 - sol.l1).abs().max((sol.h2 - sol.l2).abs()) <= eps;
    let l_zero = sol.l1.abs().max(sol.l2.abs()) <= eps;
    let field_shape = FieldShape { h_equals_l, l_zero };
    let patterns = if m.k() == k { matrix_patterns(m, k) } else { Vec::new() };

    let mut classes: BTreeSet<MeasureClass> = patterns
        .iter()
        .filter(|(_, req)| match req {
            Requirement::None => true,
            Requirement::HEqualsL => h_equals_l,
            Requirement::LZero => l_zero,
        })
        .map(|(class, _)| *class)
        .collect();
    if h_equals_l && m.k() == k {
        classes.insert(MeasureClass::TranslationInvariant);
    }
    if classes.is_empty() {
        classes.insert(MeasureClass::NewClass);
    }
    Classification {
        classes: classes.into_iter().collect(),
        matched_on: MatchBasis {
            matrix_pattern: patterns.iter().map(|(c, _)| c.tag().to_string()).collect(),
            field_shape,
        },
    }
}
