//! Dense LU with partial pivoting on complex doubles.

use num_complex::Complex64;

/// In-place LU factorization of the row-major `n x n` matrix `a`.
/// Returns `false` if a pivot is exactly zero.
pub fn factor(a: &mut [Complex64], perm: &mut [usize], n: usize) -> bool {
    for (i, p) in perm.iter_mut().enumerate().take(n) {
        *p = i;
    }
    for k in 0..n {
        let mut piv = k;
        let mut best = a[k * n + k].norm_sqr();
        for i in k + 1..n {
            let v = a[i * n + k].norm_sqr();
            if v > best {
                best = v;
                piv = i;
            }
        }
        if best == 0.0 || !best.is_finite() {
            return false;
        }
        if piv != k {
            for j in 0..n {
                a.swap(k * n + j, piv * n + j);
            }
            perm.swap(k, piv);
        }
        let inv = a[k * n + k].inv();
        for i in k + 1..n {
            let l = a[i * n + k] * inv;
            a[i * n + k] = l;
            if l.re != 0.0 || l.im != 0.0 {
                for j in k + 1..n {
                    let u = a[k * n + j];
                    a[i * n + j] -= l * u;
                }
            }
        }
    }
    true
}

/// Solves `A x = b` given the factorization from [`factor`]; `b` is
/// overwritten with `x`. `scratch` must have length `n`.
pub fn solve(lu: &[Complex64], perm: &[usize], n: usize, b: &mut [Complex64], scratch: &mut [Complex64]) {
    for i in 0..n {
        scratch[i] = b[perm[i]];
    }
    for i in 0..n {
        let mut s = scratch[i];
        for j in 0..i {
            s -= lu[i * n + j] * scratch[j];
        }
        scratch[i] = s;
    }
    for i in (0..n).rev() {
        let mut s = scratch[i];
        for j in i + 1..n {
            s -= lu[i * n + j] * scratch[j];
        }
        scratch[i] = s / lu[i * n + i];
    }
    b[..n].copy_from_slice(&scratch[..n]);
}

/// One-norm condition number `||A||_1 ||A^-1||_1`, with the inverse formed
/// column by column. Infinite when `A` is singular.
pub fn condition_1norm(a: &[Complex64], n: usize) -> f64 {
    let norm1 = |m: &[Complex64]| {
        (0..n).map(|j| (0..n).map(|i| m[i * n + j].norm()).sum::<f64>()).fold(0.0, f64::max)
    };
    let anorm = norm1(a);
    let mut lu = a.to_vec();
    let mut perm = vec![0; n];
    if !factor(&mut lu, &mut perm, n) {
        return f64::INFINITY;
    }
    let mut inv = vec![Complex64::new(0.0, 0.0); n * n];
    let mut col = vec![Complex64::new(0.0, 0.0); n];
    let mut scratch = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        col.iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
        col[j] = Complex64::new(1.0, 0.0);
        solve(&lu, &perm, n, &mut col, &mut scratch);
        for i in 0..n {
            inv[i * n + j] = col[i];
        }
    }
    anorm * norm1(&inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn solves_with_pivoting() {
        let a = vec![c(0.0, 0.0), c(2.0, 0.0), c(1.0, 1.0), c(3.0, 0.0)];
        let mut lu = a.clone();
        let mut perm = vec![0; 2];
        assert!(factor(&mut lu, &mut perm, 2));
        let x = [c(1.0, -1.0), c(0.5, 2.0)];
        let mut b = vec![a[0] * x[0] + a[1] * x[1], a[2] * x[0] + a[3] * x[1]];
        let mut s = vec![c(0.0, 0.0); 2];
        solve(&lu, &perm, 2, &mut b, &mut s);
        for (u, v) in b.iter().zip(&x) {
            assert!((u - v).norm() < 1e-14);
        }
    }

    #[test]
    fn singular_matrix_detected() {
        let mut a = vec![c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)];
        let mut perm = vec![0; 2];
        assert!(!factor(&mut a, &mut perm, 2));
        assert!(condition_1norm(&[c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)], 2).is_infinite());
        assert!((condition_1norm(&[c(3.0, 0.0)], 1) - 1.0).abs() < 1e-15);
    }
}
