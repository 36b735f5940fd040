use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::lu;
use super::system::{Compiled, PolySystem};
use crate::error::{Error, Result};

/// Endpoint classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regularity {
    Regular,
    Suspect,
}

/// Result of [`newton_refine`].
#[derive(Clone, Debug)]
pub struct Refined {
    pub point: Vec<Complex64>,
    pub residual: f64,
    pub regularity: Regularity,
    pub iterations: usize,
    pub condition: f64,
}

pub const CONDITION_LIMIT: f64 = 1e12;
const EXTRA_ITERS: usize = 2;

/// Largest residual relative to the size of its equation's terms (at
/// least one). Rounding in an equation like `1 - z h` with a large but
/// finite `z` grows with `|z|`, so absolute residuals would reject such
/// points.
fn backward_error(c: &Compiled, f: &[Complex64], x: &[Complex64], sizes: &mut [f64]) -> f64 {
    c.term_sizes(x, sizes);
    f.iter().zip(sizes.iter()).fold(0.0, |m, (v, s)| m.max(v.norm() / s.max(1.0)))
}

/// Update size measured relative to coordinates larger than one, so a
/// large but finite auxiliary coordinate does not dominate.
fn relative_norm(dx: &[Complex64], x: &[Complex64]) -> f64 {
    dx.iter().zip(x).fold(0.0, |m, (d, v)| m.max(d.norm() / v.norm().max(1.0)))
}

/// Size of the Newton update that rounding in the equations alone would
/// cause: `J^{-1}` applied to `eps` times the term sizes. With large
/// terms this floor is well above what the condition number suggests.
fn rounding_update(
    jac: &[Complex64],
    x: &[Complex64],
    c: &Compiled,
    sizes: &mut [f64],
    perm: &mut [usize],
    scratch: &mut [Complex64],
) -> Option<f64> {
    let n = x.len();
    c.term_sizes(x, sizes);
    let mut lu_jac = jac.to_vec();
    if !lu::factor(&mut lu_jac, perm, n) {
        return None;
    }
    let mut b: Vec<Complex64> = sizes.iter().map(|s| Complex64::new(f64::EPSILON * s, 0.0)).collect();
    lu::solve(&lu_jac, perm, n, &mut b, scratch);
    Some(relative_norm(&b, x))
}

/// Condition number of `J diag(max(1, |x|))`.
fn scaled_condition(jac: &[Complex64], x: &[Complex64], n: usize) -> f64 {
    let scaled: Vec<Complex64> = jac.iter().enumerate().map(|(i, v)| v * x[i % n].norm().max(1.0)).collect();
    lu::condition_1norm(&scaled, n)
}

/// Newton's method on `sys` from `point` for at most `iters` iterations,
/// stopping once the relative residual drops below `tol`, followed by two more
/// iterations that must show quadratic decay (or stay at roundoff). A
/// point that never reaches `tol` or decays only linearly is `Suspect`.
pub fn newton_refine(sys: &PolySystem, point: &[Complex64], iters: usize, tol: f64) -> Result<Refined> {
    if point.len() != sys.nvars() {
        return Err(Error::DimensionMismatch { expected: sys.nvars(), got: point.len() });
    }
    refine_compiled(&Compiled::new(sys), point, iters, tol)
}

pub(crate) fn refine_compiled(c: &Compiled, point: &[Complex64], iters: usize, tol: f64) -> Result<Refined> {
    let n = c.n();
    let zero = Complex64::new(0.0, 0.0);
    let mut x = point.to_vec();
    let mut pow = vec![zero; c.pow_len()];
    let mut f = vec![zero; n];
    let mut jac = vec![zero; n * n];
    let mut perm = vec![0; n];
    let mut scratch = vec![zero; n];
    let mut sizes = vec![0.0; n];

    c.eval(&x, &mut pow, &mut f, Some(&mut jac));
    let condition = scaled_condition(&jac, &x, n);
    if !(condition <= CONDITION_LIMIT) {
        return Err(Error::SingularJacobian(condition));
    }
    let fl = 1e2 * f64::EPSILON * condition.max(1.0)
        + 1e2 * rounding_update(&jac, &x, c, &mut sizes, &mut perm, &mut scratch).unwrap_or(0.0);

    let mut deltas: Vec<f64> = Vec::new();
    let mut converged_at = None;
    let mut iterations = 0;
    let total = iters + EXTRA_ITERS;
    for k in 0..total {
        if converged_at.is_none() {
            if backward_error(c, &f, &x, &mut sizes) < tol {
                converged_at = Some(k);
            } else if k >= iters {
                break;
            }
        }
        if let Some(c0) = converged_at {
            if k >= c0 + EXTRA_ITERS {
                break;
            }
        }
        if !lu::factor(&mut jac, &mut perm, n) {
            return Err(Error::SingularJacobian(f64::INFINITY));
        }
        for v in f.iter_mut() {
            *v = -*v;
        }
        lu::solve(&jac, &perm, n, &mut f, &mut scratch);
        deltas.push(relative_norm(&f, &x));
        for i in 0..n {
            x[i] += f[i];
        }
        iterations += 1;
        c.eval(&x, &mut pow, &mut f, Some(&mut jac));
    }
    let residual = backward_error(c, &f, &x, &mut sizes);
    let quadratic = match converged_at {
        Some(c0) => {
            // The certification updates must be at roundoff level or much
            // smaller than the update before them.
            (c0.max(1)..deltas.len()).all(|k| {
                let (d, prev) = (deltas[k], deltas[k - 1]);
                d <= fl || (d <= 0.1 * prev && d <= 1e3 * prev.powi(2).max(fl))
            })
        }
        None => false,
    };
    // Newton can drift from a well-conditioned start onto a singular point.
    let condition = condition.max(scaled_condition(&jac, &x, n));
    let regular = quadratic && residual < tol && condition <= CONDITION_LIMIT;
    let regularity = if regular { Regularity::Regular } else { Regularity::Suspect };
    Ok(Refined { point: x, residual, regularity, iterations, condition })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn sys(eqs: &[&str], n: usize) -> PolySystem {
        PolySystem::new(eqs.iter().map(|e| parse_poly(e, n).unwrap().to_float().unwrap()).collect()).unwrap()
    }

    #[test]
    fn exact_solution_stays_put() {
        let s = sys(&["x0^2 + -1"], 1);
        let r = newton_refine(&s, &[Complex64::new(1.0, 0.0)], 5, 1e-10).unwrap();
        assert!(r.residual < 1e-14);
        assert_eq!(r.regularity, Regularity::Regular);
        assert_eq!(r.point[0], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn perturbed_root_converges_quadratically() {
        let s = sys(&["x0^2 + -1"], 1);
        for start in [1.001, -0.999] {
            let r = newton_refine(&s, &[Complex64::new(start, 0.0)], 5, 1e-10).unwrap();
            assert_eq!(r.regularity, Regularity::Regular);
            assert!((r.point[0].re.abs() - 1.0).abs() < 1e-14);
            assert!(r.iterations <= 5 + EXTRA_ITERS);
        }
    }

    #[test]
    fn double_root_is_flagged() {
        let s = sys(&["x0^2 + -2*x0 + 1"], 1);
        let r = newton_refine(&s, &[Complex64::new(1.001, 0.0)], 5, 1e-10).unwrap();
        assert_eq!(r.regularity, Regularity::Suspect);
        // Even with enough iterations to push the residual below tolerance,
        // the halving updates are not quadratic.
        let r = newton_refine(&s, &[Complex64::new(1.001, 0.0)], 60, 1e-10).unwrap();
        assert_eq!(r.regularity, Regularity::Suspect);
    }

    #[test]
    fn singular_jacobian_is_an_error() {
        let s = sys(&["x0^2 + x1^2", "x0 + x1"], 2);
        let r = newton_refine(&s, &[Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)], 5, 1e-10);
        assert!(matches!(r, Err(Error::SingularJacobian(_))));
    }
}
