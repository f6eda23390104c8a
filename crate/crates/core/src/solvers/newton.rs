use nalgebra::{SMatrix, SVector};

/// Dense solve for the fixed sizes the solvers use.
pub(crate) trait SmallSolve<const N: usize> {
    fn solve_vec(&self, rhs: &SVector<f64, N>) -> Option<SVector<f64, N>>;
}

macro_rules! small_solve {
    ($($n:literal),*) => {$(
        impl SmallSolve<$n> for SMatrix<f64, $n, $n> {
            fn solve_vec(&self, rhs: &SVector<f64, $n>) -> Option<SVector<f64, $n>> {
                self.lu().solve(rhs)
            }
        }
    )*};
}

small_solve!(1, 2, 4);

/// Damped Newton iteration on `r(x) = 0` with step halving on the max-norm.
///
/// Iterates until the residual stops decreasing (or `max_iter`), so converged
/// points are polished to rounding level. Returns `None` when the iterate
/// leaves `[-bound, bound]^N`, the Jacobian is singular before convergence,
/// or the final residual exceeds `tol`.
pub(crate) fn damped_newton<const N: usize, F>(
    x0: SVector<f64, N>,
    eval: F,
    max_iter: usize,
    tol: f64,
    bound: f64,
) -> Option<(SVector<f64, N>, f64)>
where
    F: Fn(&SVector<f64, N>) -> (SVector<f64, N>, SMatrix<f64, N, N>),
    SMatrix<f64, N, N>: SmallSolve<N>,
{
    let mut x = x0;
    let (mut r, mut jac) = eval(&x);
    let mut norm = r.amax();
    if !norm.is_finite() {
        return None;
    }
    for _ in 0..max_iter {
        if norm == 0.0 {
            break;
        }
        let Some(step) = jac.solve_vec(&(-r)) else {
            break;
        };
        let mut lambda = 1.0;
        let mut accepted = None;
        while lambda >= 1.0 / 1024.0 {
            let trial = x + step * lambda;
            if trial.amax() > bound {
                lambda *= 0.5;
                continue;
            }
            let (tr, tj) = eval(&trial);
            let tn = tr.amax();
            if tn.is_finite() && tn < norm {
                accepted = Some((trial, tr, tj, tn));
                break;
            }
            lambda *= 0.5;
        }
        match accepted {
            Some((nx, nr, nj, nn)) => {
                x = nx;
                r = nr;
                jac = nj;
                norm = nn;
            }
            None => break,
        }
    }
    (norm <= tol).then_some((x, norm))
}

/// Radical inverse of `index` in `base`, the Halton coordinate.
pub(crate) fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut scale = inv;
    let mut out = 0.0;
    while index > 0 {
        out += (index % base) as f64 * scale;
        index /= base;
        scale *= inv;
    }
    out
}

const HALTON_BASES: [u64; 4] = [2, 3, 5, 7];

/// `count` Halton points in `[lo, hi]^N` starting at sequence index `seed + 1`.
pub(crate) fn halton_box<const N: usize>(count: usize, seed: u64, lo: f64, hi: f64) -> Vec<[f64; N]> {
    debug_assert!(N <= HALTON_BASES.len());
    (0..count as u64)
        .map(|i| {
            let idx = seed.wrapping_add(i + 1);
            std::array::from_fn(|d| lo + (hi - lo) * radical_inverse(idx, HALTON_BASES[d]))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{Matrix2, Vector2};

    #[test]
    fn radical_inverse_base_two() {
        assert_eq!(radical_inverse(1, 2), 0.5);
        assert_eq!(radical_inverse(2, 2), 0.25);
        assert_eq!(radical_inverse(3, 2), 0.75);
        assert!((radical_inverse(5, 3) - (2.0 / 3.0 + 1.0 / 9.0)).abs() < 1e-15);
    }

    #[test]
    fn halton_points_stay_in_box() {
        let pts: Vec<[f64; 4]> = halton_box(200, 7, -3.0, 2.0);
        assert_eq!(pts.len(), 200);
        assert!(pts.iter().flatten().all(|v| (-3.0..=2.0).contains(v)));
        let again: Vec<[f64; 4]> = halton_box(200, 7, -3.0, 2.0);
        assert_eq!(pts, again);
    }

    #[test]
    fn newton_solves_circle_line() {
        // x^2 + y^2 = 4, x = y
        let eval = |v: &Vector2<f64>| {
            let (x, y) = (v[0], v[1]);
            (
                Vector2::new(x * x + y * y - 4.0, x - y),
                Matrix2::new(2.0 * x, 2.0 * y, 1.0, -1.0),
            )
        };
        let (root, res) = damped_newton(Vector2::new(1.0, 0.5), eval, 100, 1e-12, 1e3).unwrap();
        assert!(res <= 1e-12);
        assert!((root[0] - 2f64.sqrt()).abs() < 1e-12);
        assert!((root[1] - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn newton_reports_failure() {
        // x^2 + 1 = 0 has no real root
        let eval = |v: &SVector<f64, 1>| (SVector::<f64, 1>::new(v[0] * v[0] + 1.0), SMatrix::<f64, 1, 1>::new(2.0 * v[0]));
        assert!(damped_newton(SVector::<f64, 1>::new(0.3), eval, 100, 1e-12, 1e3).is_none());
    }
}
