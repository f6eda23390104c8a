use super::SolverConfig;
use crate::error::{Error, Result};

/// All fixed points `x = g(x)` in `[lo, hi]` that the grid can bracket.
///
/// Scans `cfg.grid_points` equispaced nodes for sign changes of `g(x) - x`,
/// bisects each bracket and merges roots closer than `cfg.dedupe_eps`. Only
/// roots with `|g(x) - x| <= cfg.tol` are returned, sorted ascending.
/// Tangential roots (no sign change) are invisible unless they hit a node.
pub fn find_roots_1d<G>(g: G, lo: f64, hi: f64, cfg: &SolverConfig) -> Result<Vec<f64>>
where
    G: Fn(f64) -> f64,
{
    scan(&g, None::<&fn(f64) -> f64>, lo, hi, cfg)
}

/// As [`find_roots_1d`], polishing each bracketed root by Newton steps on
/// `g(x) - x` using the analytic derivative `dg`.
pub fn find_roots_1d_with_deriv<G, D>(
    g: G,
    dg: D,
    lo: f64,
    hi: f64,
    cfg: &SolverConfig,
) -> Result<Vec<f64>>
where
    G: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    scan(&g, Some(&dg), lo, hi, cfg)
}

fn scan<G, D>(g: &G, dg: Option<&D>, lo: f64, hi: f64, cfg: &SolverConfig) -> Result<Vec<f64>>
where
    G: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    cfg.validate()?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidInterval { lo, hi });
    }
    let defect = |x: f64| -> Result<f64> {
        let v = g(x) - x;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteEvaluation(x))
        }
    };

    let n = cfg.grid_points;
    let step = (hi - lo) / (n - 1) as f64;
    let nodes: Vec<f64> = (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
        .collect();
    let values = nodes.iter().map(|&x| defect(x)).collect::<Result<Vec<_>>>()?;

    let mut roots = Vec::new();
    for i in 0..n {
        if values[i] == 0.0 {
            roots.push(nodes[i]);
        }
        if i + 1 < n && values[i] * values[i + 1] < 0.0 {
            let x = bisect(&defect, nodes[i], nodes[i + 1], values[i], cfg.max_iter)?;
            let x = match dg {
                Some(dg) => polish(&defect, dg, x, nodes[i], nodes[i + 1])?,
                None => x,
            };
            roots.push(x);
        }
    }

    let mut kept: Vec<(f64, f64)> = Vec::with_capacity(roots.len());
    for x in roots {
        let r = defect(x)?.abs();
        if r > cfg.tol {
            continue;
        }
        match kept.last_mut() {
            Some(last) if (x - last.0).abs() <= cfg.dedupe_eps => {
                if r < last.1 {
                    *last = (x, r);
                }
            }
            _ => kept.push((x, r)),
        }
    }
    Ok(kept.into_iter().map(|(x, _)| x).collect())
}

fn bisect<F>(defect: &F, mut a: f64, mut b: f64, mut fa: f64, max_iter: usize) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut fb = -fa;
    for _ in 0..max_iter {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = defect(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
            fb = fm;
        }
    }
    Ok(if fa.abs() <= fb.abs() { a } else { b })
}

fn polish<F, D>(defect: &F, dg: &D, mut x: f64, lo: f64, hi: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
    D: Fn(f64) -> f64,
{
    let mut r = defect(x)?;
    for _ in 0..4 {
        if r == 0.0 {
            break;
        }
        let slope = dg(x) - 1.0;
        if slope == 0.0 || !slope.is_finite() {
            break;
        }
        let next = x - r / slope;
        if !(lo..=hi).contains(&next) {
            break;
        }
        let rn = defect(next)?;
        if rn.abs() >= r.abs() {
            break;
        }
        x = next;
        r = rn;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ScalarKind;

    #[test]
    fn shifted_identity_has_no_roots() {
        let roots = find_roots_1d(|x| x + 1.0, -5.0, 5.0, &SolverConfig::default()).unwrap();
        assert!(roots.is_empty());
    }

    #[test]
    fn flat_theta_gives_origin_only() {
        let cfg = SolverConfig::default();
        let roots = find_roots_1d(|x| 3.0 * ScalarKind::F.eval(x, 1.0), -4.0, 4.0, &cfg).unwrap();
        assert_eq!(roots, vec![0.0]);
    }

    #[test]
    fn two_f_at_theta_five() {
        let cfg = SolverConfig::default();
        let t = 5.0;
        let (lo, hi) = ScalarKind::F.range(t);
        let g = |x| 2.0 * ScalarKind::F.eval(x, t);
        let roots = find_roots_1d(g, 2.0 * lo, 2.0 * hi, &cfg).unwrap();
        assert_eq!(roots.len(), 3);
        assert!(roots[0] < 0.0 && roots[1].abs() < 1e-12 && roots[2] > 0.0);
        for x in roots {
            assert!((g(x) - x).abs() <= cfg.tol);
        }
    }

    #[test]
    fn polished_and_plain_agree() {
        let cfg = SolverConfig::default();
        let t = 6.0;
        let g = |x| 3.0 * ScalarKind::F.eval(x, t);
        let dg = |x| 3.0 * ScalarKind::F.eval_deriv(x, t);
        let a = find_roots_1d(g, -8.0, 8.0, &cfg).unwrap();
        let b = find_roots_1d_with_deriv(g, dg, -8.0, 8.0, &cfg).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn finds_polynomial_roots() {
        // g(x) - x = x^3 - 3x
        let cfg = SolverConfig::default();
        let roots = find_roots_1d(|x| x * x * x - 2.0 * x, -2.5, 2.3, &cfg).unwrap();
        let want = [-(3f64.sqrt()), 0.0, 3f64.sqrt()];
        assert_eq!(roots.len(), 3);
        for (r, w) in roots.iter().zip(&want) {
            assert!((r - w).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_interval_and_nan() {
        let cfg = SolverConfig::default();
        assert!(matches!(
            find_roots_1d(|x| x, 1.0, -1.0, &cfg),
            Err(Error::InvalidInterval { .. })
        ));
        assert!(find_roots_1d(|x| x, f64::NAN, 1.0, &cfg).is_err());
        assert!(matches!(
            find_roots_1d(|x: f64| x.ln(), -1.0, 1.0, &cfg),
            Err(Error::NonFiniteEvaluation(_))
        ));
    }

    #[test]
    fn rejects_bad_config() {
        let cfg = SolverConfig {
            grid_points: 2,
            ..SolverConfig::default()
        };
        assert!(find_roots_1d(|x| x, -1.0, 1.0, &cfg).is_err());
        let cfg = SolverConfig {
            dedupe_eps: 1e-13,
            ..SolverConfig::default()
        };
        assert!(find_roots_1d(|x| x, -1.0, 1.0, &cfg).is_err());
    }
}
