use nalgebra::{Matrix4, Vector4};

use super::newton::{damped_newton, halton_box};
use super::pair::{polish_pair, solve_pair_system};
use super::{lex_cmp, max_dist, InvariantTag, QuadSolution, SolveOutcome, SolverConfig};
use crate::error::Result;
use crate::model::{check_theta, compat_raw, compat_with_jacobian, BoundaryMatrix, ScalarKind};

/// One application of the boundary-matrix map to `(h1, h2, l1, l2)`:
/// `h' = a F(h) + b F(l)`, `l' = c F(h) + d F(l)` with `F` the `q = 3`
/// compatibility map.
pub fn w_map(s: [f64; 4], m: &BoundaryMatrix, theta: f64) -> Result<[f64; 4]> {
    check_theta(theta)?;
    Ok(w_raw(s, m, theta))
}

/// `max |s - W(s)|`.
pub fn quad_residual(s: [f64; 4], m: &BoundaryMatrix, theta: f64) -> Result<f64> {
    check_theta(theta)?;
    Ok(residual_raw(s, m, theta))
}

fn w_raw([h1, h2, l1, l2]: [f64; 4], m: &BoundaryMatrix, theta: f64) -> [f64; 4] {
    let fh = compat_raw(&[h1, h2], theta);
    let fl = compat_raw(&[l1, l2], theta);
    let (a, b, c, d) = (m.a as f64, m.b as f64, m.c as f64, m.d as f64);
    [
        a * fh[0] + b * fl[0],
        a * fh[1] + b * fl[1],
        c * fh[0] + d * fl[0],
        c * fh[1] + d * fl[1],
    ]
}

fn residual_raw(s: [f64; 4], m: &BoundaryMatrix, theta: f64) -> f64 {
    max_dist(&s, &w_raw(s, m, theta))
}

fn w_system(m: BoundaryMatrix, theta: f64) -> impl Fn(&Vector4<f64>) -> (Vector4<f64>, Matrix4<f64>) {
    let (a, b, c, d) = (m.a as f64, m.b as f64, m.c as f64, m.d as f64);
    move |v: &Vector4<f64>| {
        let (fh, jh) = compat_with_jacobian(&[v[0], v[1]], theta);
        let (fl, jl) = compat_with_jacobian(&[v[2], v[3]], theta);
        let r = Vector4::new(
            v[0] - a * fh[0] - b * fl[0],
            v[1] - a * fh[1] - b * fl[1],
            v[2] - c * fh[0] - d * fl[0],
            v[3] - c * fh[1] - d * fl[1],
        );
        let mut jac = Matrix4::identity();
        for i in 0..2 {
            for j in 0..2 {
                let (dh, dl) = (jh[i * 2 + j], jl[i * 2 + j]);
                jac[(i, j)] -= a * dh;
                jac[(i, j + 2)] -= b * dl;
                jac[(i + 2, j)] -= c * dh;
                jac[(i + 2, j + 2)] -= d * dl;
            }
        }
        (r, jac)
    }
}

/// Snaps a Newton root lying near an invariant set onto it and re-solves in
/// the reduced coordinates, so tagged solutions satisfy their set exactly.
fn project(
    x: [f64; 4],
    m: &BoundaryMatrix,
    theta: f64,
    cfg: &SolverConfig,
) -> Option<([f64; 4], InvariantTag)> {
    let eps = cfg.dedupe_eps;
    let [h1, h2, l1, l2] = x;
    if x.iter().all(|v| v.abs() <= eps) {
        return Some(([0.0; 4], InvariantTag::Zero));
    }
    if h2.abs() <= eps && l2.abs() <= eps {
        let (h, l) = polish_pair((h1, l1), m, theta, ScalarKind::F, cfg);
        return Some(([h, 0.0, l, 0.0], InvariantTag::I1));
    }
    if h1.abs() <= eps && l1.abs() <= eps {
        let (h, l) = polish_pair((h2, l2), m, theta, ScalarKind::F, cfg);
        return Some(([0.0, h, 0.0, l], InvariantTag::I2));
    }
    if (h1 - h2).abs() <= eps && (l1 - l2).abs() <= eps {
        let start = (0.5 * (h1 + h2), 0.5 * (l1 + l2));
        let (h, l) = polish_pair(start, m, theta, ScalarKind::Phi, cfg);
        return Some(([h, h, l, l], InvariantTag::I3));
    }
    Some((x, InvariantTag::General))
}

/// All fixed points of the `q = 3` boundary-matrix system that the solver
/// can reach.
///
/// The three invariant sets are enumerated through their pair systems
/// (`f` for `h2 = l2 = 0` and `h1 = l1 = 0`, `phi` for `h1 = h2, l1 = l2`)
/// and embedded; a 4D Newton sweep over `[-R, R]^4`, `R = k |ln theta| + 1`,
/// catches anything else. Each result is tagged with the set it lies on and
/// has residual at most `cfg.tol` under [`w_map`].
pub fn solve_system6(
    m: &BoundaryMatrix,
    theta: f64,
    cfg: &SolverConfig,
) -> Result<SolveOutcome<QuadSolution>> {
    check_theta(theta)?;
    cfg.validate()?;
    let on_f = solve_pair_system(m, theta, ScalarKind::F, cfg)?;
    let on_phi = solve_pair_system(m, theta, ScalarKind::Phi, cfg)?;

    let mut candidates: Vec<([f64; 4], InvariantTag)> = Vec::new();
    for s in &on_f.solutions {
        if s.h == 0.0 && s.l == 0.0 {
            candidates.push(([0.0; 4], InvariantTag::Zero));
        } else {
            candidates.push(([s.h, 0.0, s.l, 0.0], InvariantTag::I1));
        }
    }
    for s in on_f.solutions.iter().filter(|s| s.h != 0.0 || s.l != 0.0) {
        candidates.push(([0.0, s.h, 0.0, s.l], InvariantTag::I2));
    }
    for s in on_phi.solutions.iter().filter(|s| s.h != 0.0 || s.l != 0.0) {
        candidates.push(([s.h, s.h, s.l, s.l], InvariantTag::I3));
    }

    let mut kept: Vec<QuadSolution> = Vec::new();
    let admit = |(x, tag): ([f64; 4], InvariantTag), kept: &mut Vec<QuadSolution>| -> bool {
        let residual = residual_raw(x, m, theta);
        if !(residual <= cfg.tol) || kept.iter().any(|s| max_dist(&s.coords(), &x) <= cfg.dedupe_eps) {
            return false;
        }
        let [h1, h2, l1, l2] = x;
        kept.push(QuadSolution {
            h1,
            h2,
            l1,
            l2,
            invariant_tag: tag,
            residual,
        });
        true
    };
    for cand in candidates {
        admit(cand, &mut kept);
    }

    let radius = m.k() as f64 * theta.ln().abs() + 1.0;
    let system = w_system(*m, theta);
    let bound = 4.0 * radius + 10.0;
    let mut newton_added = 2 * on_f.newton_added + on_phi.newton_added;
    for start in halton_box::<4>(cfg.extra_starts, cfg.seed, -radius, radius) {
        let Some((v, _)) = damped_newton(Vector4::from(start), &system, cfg.max_iter, cfg.tol, bound) else {
            continue;
        };
        if let Some(cand) = project([v[0], v[1], v[2], v[3]], m, theta, cfg) {
            if admit(cand, &mut kept) {
                newton_added += 1;
            }
        }
    }

    kept.sort_by(|x, y| {
        x.invariant_tag
            .cmp(&y.invariant_tag)
            .then_with(|| lex_cmp(&x.coords(), &y.coords()))
    });
    Ok(SolveOutcome {
        solutions: kept,
        newton_added,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::theorem2_condition;

    fn mat(a: usize, b: usize, c: usize, d: usize) -> BoundaryMatrix {
        BoundaryMatrix::new(a, b, c, d).unwrap()
    }

    #[test]
    fn origin_is_fixed() {
        for m in [mat(0, 3, 3, 0), mat(2, 1, 0, 3)] {
            for t in [0.3, 1.0, 6.0] {
                assert_eq!(w_map([0.0; 4], &m, t).unwrap(), [0.0; 4]);
            }
        }
    }

    #[test]
    fn invariant_sets_preserved() {
        let m = mat(2, 1, 3, 0);
        let out = w_map([0.7, 0.0, -1.1, 0.0], &m, 4.0).unwrap();
        assert_eq!((out[1], out[3]), (0.0, 0.0));
        let out = w_map([0.0, 0.7, 0.0, -1.1], &m, 4.0).unwrap();
        assert_eq!((out[0], out[2]), (0.0, 0.0));
        let out = w_map([0.7, 0.7, -1.1, -1.1], &m, 4.0).unwrap();
        assert_eq!(out[0], out[1]);
        assert_eq!(out[2], out[3]);
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let m = mat(1, 2, 3, 0);
        let sys = w_system(m, 3.0);
        let x = Vector4::new(0.4, -0.3, 1.2, 0.8);
        let (_, jac) = sys(&x);
        let step = 1e-6;
        for j in 0..4 {
            let mut xp = x;
            let mut xm = x;
            xp[j] += step;
            xm[j] -= step;
            let fd = (sys(&xp).0 - sys(&xm).0) / (2.0 * step);
            for i in 0..4 {
                assert!((jac[(i, j)] - fd[i]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn flat_theta_only_origin() {
        let out = solve_system6(&mat(0, 3, 3, 0), 1.0, &SolverConfig::default()).unwrap();
        assert_eq!(out.solutions.len(), 1);
        assert_eq!(out.solutions[0].coords(), [0.0; 4]);
        assert_eq!(out.solutions[0].invariant_tag, InvariantTag::Zero);
    }

    #[test]
    fn seven_solutions_for_two_periodic_pattern() {
        let cfg = SolverConfig::default();
        let m = mat(0, 3, 3, 0);
        let out = solve_system6(&m, 6.0, &cfg).unwrap();
        let count = |t| out.solutions.iter().filter(|s| s.invariant_tag == t).count();
        assert_eq!(count(InvariantTag::Zero), 1);
        assert_eq!(count(InvariantTag::I1), 2);
        assert_eq!(count(InvariantTag::I2), 2);
        assert_eq!(count(InvariantTag::I3), 2);
        for s in &out.solutions {
            assert!(s.residual <= cfg.tol);
            assert!(s.lies_on(s.invariant_tag, 0.0));
        }
    }

    #[test]
    fn i1_and_i2_branches_coincide() {
        let cfg = SolverConfig::default();
        let m = mat(1, 2, 3, 0);
        let out = solve_system6(&m, 6.0, &cfg).unwrap();
        let mut i1: Vec<(f64, f64)> = out
            .solutions
            .iter()
            .filter(|s| s.invariant_tag == InvariantTag::I1)
            .map(|s| (s.h1, s.l1))
            .collect();
        let mut i2: Vec<(f64, f64)> = out
            .solutions
            .iter()
            .filter(|s| s.invariant_tag == InvariantTag::I2)
            .map(|s| (s.h2, s.l2))
            .collect();
        i1.sort_by(|a, b| a.0.total_cmp(&b.0));
        i2.sort_by(|a, b| a.0.total_cmp(&b.0));
        assert_eq!(i1, i2);
    }

    #[test]
    fn seven_whenever_condition_holds() {
        let cfg = SolverConfig::default();
        for m in [mat(0, 2, 2, 0), mat(1, 1, 1, 1), mat(2, 1, 3, 0), mat(1, 2, 2, 1), mat(0, 4, 4, 0)] {
            for t in [0.05, 0.3, 3.0, 6.0, 12.0] {
                if theorem2_condition(&m, t).unwrap().forces_new_fixed_points() {
                    let out = solve_system6(&m, t, &cfg).unwrap();
                    assert!(out.solutions.len() >= 7, "{m} theta={t}: {}", out.solutions.len());
                }
            }
        }
    }

    #[test]
    fn negative_side_of_condition_need_not_split() {
        // |lhs| > 1 but det(I - tM) > 2: each decoupled equation x = 2 f(x)
        // has a decreasing right-hand side and so only the root 0
        let m = mat(2, 0, 0, 2);
        let cond = theorem2_condition(&m, 0.01).unwrap();
        assert!(cond.satisfied && !cond.forces_new_fixed_points());
        let out = solve_system6(&m, 0.01, &SolverConfig::default()).unwrap();
        assert_eq!(out.solutions.len(), 1);
    }
}
