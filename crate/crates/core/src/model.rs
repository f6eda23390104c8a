//! Model parameters and the scalar/vector recursion maps.
//!
//! Everything here is stated in terms of `theta = exp(J * beta)`. The log-ratio
//! maps are evaluated as `ln_1p` of a scaled difference so that the fixed
//! point at the origin is reproduced exactly and large fields do not overflow.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance accepted when `theta`, `J` and `beta` are all supplied.
pub const THETA_ROUND_TRIP_RTOL: f64 = 1e-12;

pub(crate) fn check_theta(theta: f64) -> Result<f64> {
    if theta.is_finite() && theta > 0.0 {
        Ok(theta)
    } else {
        Err(Error::InvalidTheta(theta))
    }
}

/// Potts model on a Cayley tree: spin count `q`, tree order `k` and coupling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    q: usize,
    k: usize,
    coupling: Option<f64>,
    beta: Option<f64>,
    theta: f64,
}

impl ModelParams {
    /// Parameters given directly by `theta`.
    pub fn new(q: usize, k: usize, theta: f64) -> Result<Self> {
        Self::check_sizes(q, k)?;
        check_theta(theta)?;
        Ok(Self {
            q,
            k,
            coupling: None,
            beta: None,
            theta,
        })
    }

    /// Parameters given by coupling `J` and inverse temperature `beta`.
    pub fn from_coupling(q: usize, k: usize, coupling: f64, beta: f64) -> Result<Self> {
        Self::check_sizes(q, k)?;
        if !coupling.is_finite() {
            return Err(Error::InvalidParams(format!("coupling J = {coupling} is not finite")));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::InvalidParams(format!("beta = {beta} must be positive")));
        }
        let theta = check_theta((coupling * beta).exp())?;
        Ok(Self {
            q,
            k,
            coupling: Some(coupling),
            beta: Some(beta),
            theta,
        })
    }

    /// All of `theta`, `J`, `beta` supplied; they must agree.
    pub fn with_all(q: usize, k: usize, coupling: f64, beta: f64, theta: f64) -> Result<Self> {
        let p = Self::from_coupling(q, k, coupling, beta)?;
        check_theta(theta)?;
        if ((p.theta - theta) / theta).abs() > THETA_ROUND_TRIP_RTOL {
            return Err(Error::InvalidParams(format!(
                "theta = {theta} disagrees with exp(J*beta) = {}",
                p.theta
            )));
        }
        Ok(p)
    }

    fn check_sizes(q: usize, k: usize) -> Result<()> {
        if q < 2 {
            return Err(Error::InvalidParams(format!("q = {q} must be at least 2")));
        }
        if k < 1 {
            return Err(Error::InvalidParams("tree order k must be at least 1".into()));
        }
        Ok(())
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn coupling(&self) -> Option<f64> {
        self.coupling
    }

    pub fn beta(&self) -> Option<f64> {
        self.beta
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// Reduced boundary field `h_i - h_q`, `i = 1..q-1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct FieldVec(Vec<f64>);

impl FieldVec {
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if let Some((index, &value)) = components.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFiniteField { index, value });
        }
        Ok(Self(components))
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    /// Length-2 field used throughout the `q = 3` construction.
    pub fn pair(x: f64, y: f64) -> Result<Self> {
        Self::new(vec![x, y])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Max-norm distance to another field of the same length.
    pub fn max_distance(&self, other: &FieldVec) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_norm(&self) -> f64 {
        self.0.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }
}

impl TryFrom<Vec<f64>> for FieldVec {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<FieldVec> for Vec<f64> {
    fn from(f: FieldVec) -> Self {
        f.0
    }
}

/// The boundary matrix `(a b; c d)`: an `H` vertex has `a` children carrying
/// `h` and `b` carrying `l`; an `L` vertex has `c` and `d` respectively.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[usize; 4]", into = "[usize; 4]")]
pub struct BoundaryMatrix {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

impl BoundaryMatrix {
    /// Requires `a + b = c + d`; the common sum is the tree order.
    pub fn new(a: usize, b: usize, c: usize, d: usize) -> Result<Self> {
        let k = a + b;
        if c + d != k || k == 0 {
            return Err(Error::MatrixRowSums { a, b, c, d, k });
        }
        Ok(Self { a, b, c, d })
    }

    /// Like [`BoundaryMatrix::new`] but also pins the row sum to `k`.
    pub fn for_order(k: usize, a: usize, b: usize, c: usize, d: usize) -> Result<Self> {
        if a + b != k || c + d != k {
            return Err(Error::MatrixRowSums { a, b, c, d, k });
        }
        Self::new(a, b, c, d)
    }

    pub fn k(&self) -> usize {
        self.a + self.b
    }

    pub fn check_order(&self, k: usize) -> Result<()> {
        if self.k() == k {
            Ok(())
        } else {
            let BoundaryMatrix { a, b, c, d } = *self;
            Err(Error::MatrixRowSums { a, b, c, d, k })
        }
    }

    pub fn as_array(&self) -> [usize; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// `bc - ad`, the determinant with flipped sign.
    pub fn cross_term(&self) -> f64 {
        (self.b * self.c) as f64 - (self.a * self.d) as f64
    }
}

impl TryFrom<[usize; 4]> for BoundaryMatrix {
    type Error = Error;

    fn try_from([a, b, c, d]: [usize; 4]) -> Result<Self> {
        Self::new(a, b, c, d)
    }
}

impl From<BoundaryMatrix> for [usize; 4] {
    fn from(m: BoundaryMatrix) -> Self {
        m.as_array()
    }
}

impl fmt::Display for BoundaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.a, self.b, self.c, self.d)
    }
}

impl FromStr for BoundaryMatrix {
    type Err = Error;

    /// Parses `a,b,c,d`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let bad = || Error::InvalidParams(format!("expected four non-negative integers a,b,c,d, got '{s}'"));
        if parts.len() != 4 {
            return Err(bad());
        }
        let mut v = [0usize; 4];
        for (slot, p) in v.iter_mut().zip(&parts) {
            *slot = p.parse().map_err(|_| bad())?;
        }
        Self::try_from(v)
    }
}

/// Which of the two scalar recursion functions drives a pair system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarKind {
    /// `f(x) = ln((theta e^x + 2) / (theta + e^x + 1))`, the reduction onto `h2 = l2 = 0`.
    F,
    /// `phi(x) = ln(((theta + 1) e^x + 1) / (theta + 2 e^x))`, the reduction onto `h1 = h2`.
    Phi,
}

impl ScalarKind {
    pub fn value(self, x: f64, theta: f64) -> Result<f64> {
        check_theta(theta)?;
        Ok(self.eval(x, theta))
    }

    pub fn deriv(self, x: f64, theta: f64) -> Result<f64> {
        check_theta(theta)?;
        Ok(self.eval_deriv(x, theta))
    }

    pub(crate) fn eval(self, x: f64, theta: f64) -> f64 {
        match self {
            ScalarKind::F => f_raw(x, theta),
            ScalarKind::Phi => phi_raw(x, theta),
        }
    }

    pub(crate) fn eval_deriv(self, x: f64, theta: f64) -> f64 {
        match self {
            ScalarKind::F => f_deriv_raw(x, theta),
            ScalarKind::Phi => phi_deriv_raw(x, theta),
        }
    }

    /// Infimum and supremum of the function over the real line, ordered
    /// `(lower, upper)` regardless of whether `theta` is above or below one.
    pub fn range(self, theta: f64) -> (f64, f64) {
        let (x, y) = match self {
            ScalarKind::F => ((2.0 / (theta + 1.0)).ln(), theta.ln()),
            ScalarKind::Phi => (-theta.ln(), -(2.0 / (theta + 1.0)).ln()),
        };
        (x.min(y), x.max(y))
    }
}

impl fmt::Display for ScalarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScalarKind::F => "f",
            ScalarKind::Phi => "phi",
        })
    }
}

// Near the origin ln(N/D) = ln_1p((N - D)/D) with N - D = (theta - 1)(e^x - 1),
// which is exactly zero at x = 0. In the tails f is written as its asymptote
// plus a small ln_1p correction, so rounding never carries it past the bound.
const TAIL: f64 = 2.0;

fn f_raw(x: f64, theta: f64) -> f64 {
    let c = (theta - 1.0) * (theta + 2.0);
    if x > TAIL {
        let e = (-x).exp();
        theta.ln() + (-c * e / (theta * (1.0 + (theta + 1.0) * e))).ln_1p()
    } else if x < -TAIL {
        let e = x.exp();
        (2.0 / (theta + 1.0)).ln() + (c * e / (2.0 * (theta + 1.0 + e))).ln_1p()
    } else {
        ((theta - 1.0) * x.exp_m1() / (theta + 1.0 + x.exp())).ln_1p()
    }
}

// phi(x) = -f(-x); adding zero turns -0.0 into 0.0
fn phi_raw(x: f64, theta: f64) -> f64 {
    -f_raw(-x, theta) + 0.0
}

// f'(x) = (theta-1)(theta+2) e^x / ((theta e^x + 2)(theta + e^x + 1))
fn f_deriv_raw(x: f64, theta: f64) -> f64 {
    let num = (theta - 1.0) * (theta + 2.0);
    if x <= 0.0 {
        let e = x.exp();
        num * e / ((theta * e + 2.0) * (theta + e + 1.0))
    } else {
        let e = (-x).exp();
        num * e / ((theta + 2.0 * e) * ((theta + 1.0) * e + 1.0))
    }
}

fn phi_deriv_raw(x: f64, theta: f64) -> f64 {
    f_deriv_raw(-x, theta)
}

/// `f_theta(x) = ln((theta e^x + 2) / (theta + e^x + 1))`.
pub fn scalar_f(x: f64, theta: f64) -> Result<f64> {
    ScalarKind::F.value(x, theta)
}

/// `phi_theta(x) = ln(((theta + 1) e^x + 1) / (theta + 2 e^x))`.
pub fn scalar_phi(x: f64, theta: f64) -> Result<f64> {
    ScalarKind::Phi.value(x, theta)
}

pub fn scalar_f_deriv(x: f64, theta: f64) -> Result<f64> {
    ScalarKind::F.deriv(x, theta)
}

pub fn scalar_phi_deriv(x: f64, theta: f64) -> Result<f64> {
    ScalarKind::Phi.deriv(x, theta)
}

/// The vertex compatibility map `F(h, theta)` for a reduced field of any length `q - 1`.
///
/// `F_i = ln(((theta - 1) e^{h_i} + sum_j e^{h_j} + 1) / (theta + sum_j e^{h_j}))`.
/// Components are shifted by `max(0, max_j h_j)` before exponentiation.
pub fn compatibility_map(h: &FieldVec, theta: f64) -> Result<FieldVec> {
    check_theta(theta)?;
    Ok(FieldVec(compat_raw(h.as_slice(), theta)))
}

pub(crate) fn compat_raw(h: &[f64], theta: f64) -> Vec<f64> {
    let shift = h.iter().copied().fold(0.0, f64::max);
    let base = (-shift).exp();
    let scaled: Vec<f64> = h.iter().map(|&v| (v - shift).exp()).collect();
    let denom = theta * base + scaled.iter().sum::<f64>();
    h.iter()
        .enumerate()
        .map(|(i, &hi)| {
            // e^{-shift} (e^{h_i} - 1), written to avoid both overflow and cancellation
            let diff = if hi <= 0.0 {
                base * hi.exp_m1()
            } else {
                -scaled[i] * (-hi).exp_m1()
            };
            let r = (theta - 1.0) * diff / denom;
            if r.abs() <= 0.5 {
                r.ln_1p()
            } else {
                // far from one the ratio itself is accurate: every term is positive
                (numerator(&scaled, i, theta, base) / denom).ln()
            }
        })
        .collect()
}

// e^{-shift} (theta e^{h_i} + sum_{j != i} e^{h_j} + 1)
fn numerator(scaled: &[f64], i: usize, theta: f64, base: f64) -> f64 {
    let others: f64 = scaled.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| v).sum();
    theta * scaled[i] + others + base
}

/// `F(h)` together with its Jacobian `dF_i/dh_m`, row-major.
pub(crate) fn compat_with_jacobian(h: &[f64], theta: f64) -> (Vec<f64>, Vec<f64>) {
    let n = h.len();
    let values = compat_raw(h, theta);
    let shift = h.iter().copied().fold(0.0, f64::max);
    let base = (-shift).exp();
    let scaled: Vec<f64> = h.iter().map(|&v| (v - shift).exp()).collect();
    let total: f64 = scaled.iter().sum();
    let denom = theta * base + total;
    let mut jac = vec![0.0; n * n];
    for i in 0..n {
        let numer = numerator(&scaled, i, theta, base);
        for m in 0..n {
            let w = if m == i { theta } else { 1.0 };
            jac[i * n + m] = w * scaled[m] / numer - scaled[m] / denom;
        }
    }
    (values, jac)
}

/// Left-hand side of the multiplicity condition and whether it exceeds one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub lhs: f64,
    pub satisfied: bool,
    /// `(bc - ad) t^2 + (a + d) t` before taking the absolute value.
    pub signed: f64,
}

impl ConditionCheck {
    /// Whether `det(I - tM) < 0`, the side of the condition on which the
    /// fixed-point index of the origin flips and new fixed points must appear.
    pub fn forces_new_fixed_points(&self) -> bool {
        self.signed > 1.0
    }
}

/// `|(bc - ad) t^2 + (a + d) t| > 1` with `t = (theta - 1)/(theta + 2)`.
///
/// The signed quantity equals `1 - det(I - tM)`, with `tM` the linearisation
/// of the pair system at the origin. Only a value above one forces further
/// fixed points; below `-1` the origin can remain the only one, as for
/// `(2,0;0,2)` with `theta < 1` where both equations are `x = 2 f(x)` with
/// `f` decreasing.
pub fn theorem2_condition(m: &BoundaryMatrix, theta: f64) -> Result<ConditionCheck> {
    check_theta(theta)?;
    let t = (theta - 1.0) / (theta + 2.0);
    let signed = m.cross_term() * t * t + (m.a + m.d) as f64 * t;
    let lhs = signed.abs();
    Ok(ConditionCheck {
        lhs,
        satisfied: lhs > 1.0,
        signed,
    })
}

/// `(k + 2)/(k - 1)`: above it, `h = k f(h)` has a negative root besides the
/// positive branch.
pub fn critical_theta_ti(k: usize) -> Result<f64> {
    if k < 2 {
        return Err(Error::DegenerateOrder(k));
    }
    Ok((k as f64 + 2.0) / (k as f64 - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_f(x: f64, t: f64) -> f64 {
        ((t * x.exp() + 2.0) / (t + x.exp() + 1.0)).ln()
    }

    fn naive_compat(h: &[f64], t: f64) -> Vec<f64> {
        let s: f64 = h.iter().map(|v| v.exp()).sum();
        h.iter()
            .map(|v| (((t - 1.0) * v.exp() + s + 1.0) / (t + s)).ln())
            .collect()
    }

    #[test]
    fn compat_zero_field_is_fixed() {
        for &t in &[0.1, 0.5, 1.0, 2.0, 6.0, 100.0] {
            for q in 2..6 {
                let out = compatibility_map(&FieldVec::zeros(q - 1), t).unwrap();
                assert!(out.as_slice().iter().all(|&v| v == 0.0));
            }
        }
    }

    #[test]
    fn compat_theta_one_vanishes() {
        let h = FieldVec::new(vec![1.3, -2.0, 0.4]).unwrap();
        let out = compatibility_map(&h, 1.0).unwrap();
        assert!(out.as_slice().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn compat_known_value() {
        let h = FieldVec::pair(2f64.ln(), 0.0).unwrap();
        let out = compatibility_map(&h, 4.0).unwrap();
        // numerator 3*2 + 3 + 1 = 10, denominator 4 + 3 = 7
        assert!((out.as_slice()[0] - (10.0f64 / 7.0).ln()).abs() < 1e-15);
        assert_eq!(out.as_slice()[1], 0.0);
    }

    #[test]
    fn compat_matches_naive_formula() {
        let fields = [vec![0.3, -1.2], vec![2.0, 2.0], vec![-4.0, 5.0, 0.1], vec![7.5]];
        for h in &fields {
            for &t in &[0.2, 0.9, 3.0, 25.0] {
                let got = compat_raw(h, t);
                let want = naive_compat(h, t);
                for (g, w) in got.iter().zip(&want) {
                    assert!((g - w).abs() < 1e-13, "{h:?} theta={t}: {g} vs {w}");
                }
            }
        }
    }

    #[test]
    fn compat_survives_huge_fields() {
        let h = FieldVec::new(vec![800.0, -800.0]).unwrap();
        let out = compatibility_map(&h, 5.0).unwrap();
        assert!(out.as_slice().iter().all(|v| v.is_finite()));
        // h1 dominates: ratio -> theta for F1, -> 1 for F2
        assert!((out.as_slice()[0] - 5f64.ln()).abs() < 1e-12);
        assert!(out.as_slice()[1].abs() < 1e-12);
    }

    #[test]
    fn compat_rejects_bad_theta() {
        let h = FieldVec::zeros(2);
        assert_eq!(compatibility_map(&h, 0.0), Err(Error::InvalidTheta(0.0)));
        assert!(compatibility_map(&h, -1.0).is_err());
        assert!(compatibility_map(&h, f64::NAN).is_err());
    }

    #[test]
    fn field_rejects_non_finite() {
        assert!(matches!(
            FieldVec::new(vec![0.0, f64::INFINITY]),
            Err(Error::NonFiniteField { index: 1, .. })
        ));
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let h = [0.7, -0.4];
        let t = 3.5;
        let (_, jac) = compat_with_jacobian(&h, t);
        let step = 1e-6;
        for m in 0..2 {
            let mut hp = h;
            let mut hm = h;
            hp[m] += step;
            hm[m] -= step;
            let fp = compat_raw(&hp, t);
            let fm = compat_raw(&hm, t);
            for i in 0..2 {
                let fd = (fp[i] - fm[i]) / (2.0 * step);
                assert!((jac[i * 2 + m] - fd).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn scalar_known_values() {
        assert_eq!(scalar_f(0.0, 3.7).unwrap(), 0.0);
        assert_eq!(scalar_phi(0.0, 0.2).unwrap(), 0.0);
        assert!((scalar_f(2f64.ln(), 4.0).unwrap() - (10.0f64 / 7.0).ln()).abs() < 1e-15);
        assert!((scalar_phi(2f64.ln(), 4.0).unwrap() - (11.0f64 / 8.0).ln()).abs() < 1e-15);
    }

    #[test]
    fn scalar_limits() {
        let t = 6.0;
        assert!((scalar_f(800.0, t).unwrap() - t.ln()).abs() < 1e-15);
        assert!((scalar_f(-800.0, t).unwrap() - (2.0 / (t + 1.0)).ln()).abs() < 1e-15);
        assert!((scalar_phi(800.0, t).unwrap() - ((t + 1.0) / 2.0).ln()).abs() < 1e-15);
        assert!((scalar_phi(-800.0, t).unwrap() - (1.0 / t).ln()).abs() < 1e-15);
    }

    #[test]
    fn scalar_f_matches_naive() {
        for i in -40..=40 {
            let x = i as f64 * 0.25;
            for &t in &[0.3, 2.0, 9.0] {
                assert!((scalar_f(x, t).unwrap() - naive_f(x, t)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn phi_is_reflected_f() {
        // phi(x) = -f(-x): the I3 reduction is the I1 reduction seen through
        // the spin permutation 1 <-> 3.
        for i in -30..=30 {
            let x = i as f64 * 0.3;
            for &t in &[0.4, 1.7, 12.0] {
                let lhs = scalar_phi(x, t).unwrap();
                let rhs = -scalar_f(-x, t).unwrap();
                assert!((lhs - rhs).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn derivative_at_origin() {
        for &t in &[0.3, 1.0, 2.0, 6.0, 50.0] {
            let want = (t - 1.0) / (t + 2.0);
            assert!((scalar_f_deriv(0.0, t).unwrap() - want).abs() <= 4.0 * f64::EPSILON);
            assert!((scalar_phi_deriv(0.0, t).unwrap() - want).abs() <= 4.0 * f64::EPSILON);
        }
    }

    #[test]
    fn invariant_set_reductions() {
        for i in -20..=20 {
            let x = i as f64 * 0.37;
            for &t in &[0.25, 2.5, 8.0] {
                let f = scalar_f(x, t).unwrap();
                let phi = scalar_phi(x, t).unwrap();
                let a = compat_raw(&[x, 0.0], t);
                let b = compat_raw(&[0.0, x], t);
                let c = compat_raw(&[x, x], t);
                assert!((a[0] - f).abs() < 1e-14 && a[1] == 0.0);
                assert!((b[1] - f).abs() < 1e-14 && b[0] == 0.0);
                assert!((c[0] - phi).abs() < 1e-14 && c[0] == c[1]);
            }
        }
    }

    #[test]
    fn condition_examples() {
        let m = BoundaryMatrix::new(0, 3, 3, 0).unwrap();
        let c = theorem2_condition(&m, 6.0).unwrap();
        assert!((c.lhs - 225.0 / 64.0).abs() < 1e-14 && c.satisfied);

        let c = theorem2_condition(&m, 1.0).unwrap();
        assert_eq!(c.lhs, 0.0);
        assert!(!c.satisfied);

        let m = BoundaryMatrix::new(1, 1, 1, 1).unwrap();
        let c = theorem2_condition(&m, 3.0).unwrap();
        assert!((c.lhs - 0.8).abs() < 1e-15 && !c.satisfied);
        assert!(theorem2_condition(&m, 0.0).is_err());
    }

    #[test]
    fn critical_theta_values() {
        assert_eq!(critical_theta_ti(2).unwrap(), 4.0);
        assert_eq!(critical_theta_ti(3).unwrap(), 2.5);
        assert!((critical_theta_ti(1_000_000).unwrap() - 1.0).abs() < 1e-5);
        assert_eq!(critical_theta_ti(1), Err(Error::DegenerateOrder(1)));
        assert!(critical_theta_ti(0).is_err());
    }

    #[test]
    fn matrix_validation() {
        assert!(BoundaryMatrix::new(2, 1, 0, 3).is_ok());
        assert!(BoundaryMatrix::new(2, 1, 0, 2).is_err());
        assert!(BoundaryMatrix::for_order(4, 2, 1, 0, 3).is_err());
        assert_eq!("0, 3,3,0".parse::<BoundaryMatrix>().unwrap(), BoundaryMatrix::new(0, 3, 3, 0).unwrap());
        assert!("0,3,3".parse::<BoundaryMatrix>().is_err());
        assert!("0,3,x,0".parse::<BoundaryMatrix>().is_err());
    }

    #[test]
    fn params_round_trip() {
        let p = ModelParams::from_coupling(3, 2, 0.8, 2.0).unwrap();
        assert!((p.theta() - 1.6f64.exp()).abs() < 1e-15);
        assert!(ModelParams::with_all(3, 2, 0.8, 2.0, 1.6f64.exp()).is_ok());
        assert!(ModelParams::with_all(3, 2, 0.8, 2.0, 5.0).is_err());
        assert!(ModelParams::new(1, 2, 2.0).is_err());
        assert!(ModelParams::new(3, 0, 2.0).is_err());
        assert!(ModelParams::new(3, 2, -2.0).is_err());
        assert!(ModelParams::from_coupling(3, 2, 1.0, 0.0).is_err());
        // antiferromagnetic coupling
        assert!(ModelParams::from_coupling(3, 2, -1.0, 1.0).unwrap().theta() < 1.0);
    }
}
