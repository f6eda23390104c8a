use nalgebra::{Matrix2, Vector2};

use super::newton::{damped_newton, halton_box};
use super::roots::find_roots_1d_with_deriv;
use super::{lex_cmp, max_dist, search_interval, PairSolution, SolveOutcome, SolverConfig};
use crate::error::{Error, Result};
use crate::model::{check_theta, BoundaryMatrix, ScalarKind};

/// Max-norm defect of `(h, l)` in `h = a g(h) + b g(l)`, `l = c g(h) + d g(l)`.
pub fn pair_residual(h: f64, l: f64, m: &BoundaryMatrix, theta: f64, kind: ScalarKind) -> Result<f64> {
    check_theta(theta)?;
    Ok(residual_raw(h, l, m, theta, kind))
}

fn residual_raw(h: f64, l: f64, m: &BoundaryMatrix, theta: f64, kind: ScalarKind) -> f64 {
    let (gh, gl) = (kind.eval(h, theta), kind.eval(l, theta));
    let r1 = h - m.a as f64 * gh - m.b as f64 * gl;
    let r2 = l - m.c as f64 * gh - m.d as f64 * gl;
    r1.abs().max(r2.abs())
}

fn pair_system(
    m: BoundaryMatrix,
    theta: f64,
    kind: ScalarKind,
) -> impl Fn(&Vector2<f64>) -> (Vector2<f64>, Matrix2<f64>) {
    let (a, b, c, d) = (m.a as f64, m.b as f64, m.c as f64, m.d as f64);
    move |v: &Vector2<f64>| {
        let (h, l) = (v[0], v[1]);
        let (gh, gl) = (kind.eval(h, theta), kind.eval(l, theta));
        let (dh, dl) = (kind.eval_deriv(h, theta), kind.eval_deriv(l, theta));
        let r = Vector2::new(h - a * gh - b * gl, l - c * gh - d * gl);
        let j = Matrix2::new(1.0 - a * dh, -b * dl, -c * dh, 1.0 - d * dl);
        (r, j)
    }
}

fn newton_bound(m: &BoundaryMatrix, theta: f64, kind: ScalarKind) -> f64 {
    let (lo, hi) = search_interval(m.k(), theta, kind);
    4.0 * (lo.abs() + hi.abs()) + 10.0
}

/// Newton-polishes a candidate, keeping it unchanged unless the residual drops.
pub(super) fn polish_pair(
    (h, l): (f64, f64),
    m: &BoundaryMatrix,
    theta: f64,
    kind: ScalarKind,
    cfg: &SolverConfig,
) -> (f64, f64) {
    let r = residual_raw(h, l, m, theta, kind);
    if r == 0.0 {
        return (h, l);
    }
    let system = pair_system(*m, theta, kind);
    match damped_newton(Vector2::new(h, l), system, cfg.max_iter, cfg.tol, newton_bound(m, theta, kind)) {
        Some((v, nr)) if nr < r => (v[0], v[1]),
        _ => (h, l),
    }
}

/// Roots of `x = k g(x)`, always containing an exact `0`.
fn scalar_fixed_points(k: usize, theta: f64, kind: ScalarKind, cfg: &SolverConfig) -> Result<Vec<f64>> {
    let kf = k as f64;
    let (lo, hi) = search_interval(k, theta, kind);
    let mut roots = find_roots_1d_with_deriv(
        |x| kf * kind.eval(x, theta),
        |x| kf * kind.eval_deriv(x, theta),
        lo,
        hi,
        cfg,
    )?;
    roots.retain(|x| x.abs() > cfg.dedupe_eps);
    roots.push(0.0);
    roots.sort_by(f64::total_cmp);
    Ok(roots)
}

/// Fixed points of the translation-invariant equation `h = k f(h)`.
///
/// Searches `[k ln(2/(theta+1)) - 1, k ln(theta) + 1]` (ordered); `0` is
/// always present.
pub fn solve_ti(k: usize, theta: f64, cfg: &SolverConfig) -> Result<Vec<f64>> {
    if k == 0 {
        return Err(Error::InvalidParams("tree order k must be at least 1".into()));
    }
    check_theta(theta)?;
    scalar_fixed_points(k, theta, ScalarKind::F, cfg)
}

/// Candidates from reducing the pair system to one variable, by the shape of `m`.
fn structured_candidates(
    m: &BoundaryMatrix,
    theta: f64,
    kind: ScalarKind,
    cfg: &SolverConfig,
) -> Result<Vec<(f64, f64)>> {
    let k = m.k();
    let kf = k as f64;
    let (a, b, c, d) = (m.a as f64, m.b as f64, m.c as f64, m.d as f64);
    let g = |x: f64| kind.eval(x, theta);
    let dg = |x: f64| kind.eval_deriv(x, theta);
    let (lo, hi) = search_interval(k, theta, kind);

    let mut out = vec![(0.0, 0.0)];
    if m.a == m.c {
        // b = d as well, so h - l = 0 and both satisfy x = k g(x)
        out.extend(scalar_fixed_points(k, theta, kind, cfg)?.into_iter().map(|x| (x, x)));
    } else if m.a == 0 {
        // h = k g(l) substituted into the second equation
        let reduced = |l: f64| c * g(kf * g(l)) + d * g(l);
        let slope = |l: f64| c * dg(kf * g(l)) * kf * dg(l) + d * dg(l);
        for l in find_roots_1d_with_deriv(reduced, slope, lo, hi, cfg)? {
            out.push((kf * g(l), l));
        }
    } else if m.b == 0 {
        // h = k g(h) decouples; every root of it drives its own l-equation
        for h in scalar_fixed_points(k, theta, kind, cfg)? {
            let drive = c * g(h);
            if m.d == 0 {
                out.push((h, drive));
                continue;
            }
            for l in find_roots_1d_with_deriv(|l| d * g(l) + drive, |l| d * dg(l), lo, hi, cfg)? {
                out.push((h, l));
            }
        }
    } else {
        // first equation solved for g(l), second then gives l as a function of h
        let cross = m.cross_term();
        let l_of = |h: f64| (cross * g(h) + d * h) / b;
        let psi = |h: f64| a * g(h) + b * g(l_of(h));
        let dpsi = |h: f64| a * dg(h) + dg(l_of(h)) * (cross * dg(h) + d);
        for h in find_roots_1d_with_deriv(psi, dpsi, lo, hi, cfg)? {
            out.push((h, l_of(h)));
        }
    }
    Ok(out)
}

/// Fixed points of `h = a g(h) + b g(l)`, `l = c g(h) + d g(l)` with `g` the
/// scalar map selected by `kind`.
///
/// The structured pass reduces the system to one variable according to the
/// shape of `m` (`a = c`, `a = 0`, `b = 0`, or the general `ab != 0` case)
/// and brackets every root on a grid. A 2D Newton sweep from
/// `cfg.extra_starts` Halton points then fills in anything the grid missed;
/// those are counted in [`SolveOutcome::newton_added`].
pub fn solve_pair_system(
    m: &BoundaryMatrix,
    theta: f64,
    kind: ScalarKind,
    cfg: &SolverConfig,
) -> Result<SolveOutcome<PairSolution>> {
    check_theta(theta)?;
    cfg.validate()?;
    let system = pair_system(*m, theta, kind);
    let (lo, hi) = search_interval(m.k(), theta, kind);
    let bound = newton_bound(m, theta, kind);

    let polish = |cand: (f64, f64)| polish_pair(cand, m, theta, kind, cfg);

    let mut kept: Vec<PairSolution> = Vec::new();
    let admit = |(h, l): (f64, f64), kept: &mut Vec<PairSolution>| -> bool {
        let residual = residual_raw(h, l, m, theta, kind);
        if !(residual <= cfg.tol) {
            return false;
        }
        if kept.iter().any(|s| max_dist(&[s.h, s.l], &[h, l]) <= cfg.dedupe_eps) {
            return false;
        }
        kept.push(PairSolution {
            h,
            l,
            residual,
            func_kind: kind,
        });
        true
    };

    for cand in structured_candidates(m, theta, kind, cfg)? {
        admit(polish(cand), &mut kept);
    }

    let mut newton_added = 0;
    for [h0, l0] in halton_box::<2>(cfg.extra_starts, cfg.seed, lo, hi) {
        if let Some((v, _)) = damped_newton(Vector2::new(h0, l0), &system, cfg.max_iter, cfg.tol, bound) {
            if admit((v[0], v[1]), &mut kept) {
                newton_added += 1;
            }
        }
    }

    kept.sort_by(|x, y| lex_cmp(&[x.h, x.l], &[y.h, y.l]));
    Ok(SolveOutcome {
        solutions: kept,
        newton_added,
    })
}

/// Boundary matrix `(k - |A|, |A|; k + 1 - |A|, |A| - 1)` of the index-two
/// weakly periodic construction, for `1 <= |A| <= k`.
pub fn weakly_periodic_matrix(k: usize, a_size: usize) -> Result<BoundaryMatrix> {
    if a_size < 1 || a_size > k {
        return Err(Error::SubsetSizeOutOfRange { a_size, k });
    }
    BoundaryMatrix::for_order(k, k - a_size, a_size, k + 1 - a_size, a_size - 1)
}

/// Weakly periodic fields restricted to `h1 = h4`, `h2 = h3`: the pair
/// system with [`weakly_periodic_matrix`] and `g = f`. Each solution is
/// `(h, l) = (h1, h2)`.
pub fn solve_weakly_periodic(
    k: usize,
    a_size: usize,
    theta: f64,
    cfg: &SolverConfig,
) -> Result<SolveOutcome<PairSolution>> {
    let m = weakly_periodic_matrix(k, a_size)?;
    solve_pair_system(&m, theta, ScalarKind::F, cfg)
}
