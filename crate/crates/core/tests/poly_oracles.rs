//! Determinants, adjugates and gradients against independent oracles.

use gradet::poly::{CPoly, QPoly, Rational, SymbolicMatrix};
use gradet::rng::{any_small_rational, seeded, SeededRng};
use num_complex::Complex64;
use proptest::prelude::*;

fn random_linear_form(rng: &mut SeededRng, nvars: usize) -> QPoly {
    let coeffs: Vec<Rational> = (0..nvars).map(|_| any_small_rational(rng, 4)).collect();
    QPoly::linear(&coeffs)
}

fn random_matrix(rng: &mut SeededRng, n: usize, nvars: usize) -> SymbolicMatrix<Rational> {
    let entries = (0..n * n).map(|_| random_linear_form(rng, nvars)).collect();
    SymbolicMatrix::from_rows(n, entries)
}

/// Cofactor expansion along the first row, written against plain vectors.
fn laplace(entries: &[QPoly], n: usize, nvars: usize) -> QPoly {
    if n == 0 {
        return QPoly::one(nvars);
    }
    let mut acc = QPoly::zero(nvars);
    for c in 0..n {
        let minor: Vec<QPoly> = (1..n)
            .flat_map(|r| (0..n).filter(move |&k| k != c).map(move |k| (r, k)))
            .map(|(r, k)| entries[r * n + k].clone())
            .collect();
        let term = &entries[c] * &laplace(&minor, n - 1, nvars);
        acc = if c % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

fn identity_times(p: &QPoly, n: usize) -> SymbolicMatrix<Rational> {
    let nv = p.nvars();
    let entries = (0..n * n).map(|k| if k / n == k % n { p.clone() } else { QPoly::zero(nv) }).collect();
    SymbolicMatrix::from_rows(n, entries)
}

#[test]
fn determinant_matches_laplace_expansion() {
    let mut rng = seeded(11);
    for n in 1..=5 {
        let instances = if n == 5 { 10 } else { 50 };
        for _ in 0..instances {
            let m = random_matrix(&mut rng, n, 3);
            assert_eq!(m.det(), laplace(m.entries(), n, 3), "n = {n}");
        }
    }
}

#[test]
fn adjugate_inverts_up_to_the_determinant() {
    let mut rng = seeded(12);
    for n in 1..=5 {
        for _ in 0..10 {
            let m = random_matrix(&mut rng, n, 2);
            let d = m.det();
            let ident = identity_times(&d, n);
            assert_eq!(m.mul(&m.adjugate()), ident);
            assert_eq!(m.adjugate().mul(&m), ident);
        }
    }
}

#[test]
fn gradient_is_the_trace_form_of_the_adjugate() {
    let mut rng = seeded(13);
    for n in 2..=4 {
        for _ in 0..10 {
            let nvars = 3;
            let m = random_matrix(&mut rng, n, nvars);
            let adj = m.adjugate();
            for c in 0..nvars {
                let mut expected = QPoly::zero(nvars);
                for i in 0..n {
                    for j in 0..n {
                        expected = &expected + &(adj.get(j, i) * &m.get(i, j).derivative(c));
                    }
                }
                assert_eq!(m.det().derivative(c), expected);
            }
        }
    }
}

#[test]
fn numeric_gradient_matches_finite_differences() {
    let mut rng = seeded(14);
    let m = random_matrix(&mut rng, 4, 3);
    let f = m.det().to_float().unwrap();
    let x = [Complex64::new(0.3, -0.2), Complex64::new(-1.1, 0.5), Complex64::new(0.7, 0.9)];
    let h = 1e-6;
    for (v, g) in f.gradient().iter().enumerate() {
        let mut xp = x;
        let mut xm = x;
        xp[v] += h;
        xm[v] -= h;
        let fd = (f.evaluate(&xp).unwrap() - f.evaluate(&xm).unwrap()) / (2.0 * h);
        let exact = g.evaluate(&x).unwrap();
        assert!((fd - exact).norm() <= 1e-6 * exact.norm().max(1.0), "variable {v}");
    }
}

#[test]
fn symmetric_generic_element_has_symmetric_adjugate() {
    let mut rng = seeded(15);
    let n = 3;
    let nvars = 6;
    let mut entries = vec![QPoly::zero(nvars); n * n];
    for i in 0..n {
        for j in i..n {
            let p = random_linear_form(&mut rng, nvars);
            entries[i * n + j] = p.clone();
            entries[j * n + i] = p;
        }
    }
    let m = SymbolicMatrix::from_rows(n, entries);
    assert!(m.adjugate().is_symmetric());
}

fn poly_from(nvars: usize, terms: &[(Vec<u16>, (i8, i8))]) -> CPoly {
    CPoly::from_terms(
        nvars,
        terms.iter().map(|(e, (re, im))| (e.clone(), Complex64::new(f64::from(*re), f64::from(*im)))),
    )
}

fn term_strategy(nvars: usize) -> impl Strategy<Value = Vec<(Vec<u16>, (i8, i8))>> {
    prop::collection::vec((prop::collection::vec(0u16..3, nvars), (-5i8..=5, -5i8..=5)), 1..6)
}

proptest! {
    #[test]
    fn evaluation_commutes_with_products(
        f in term_strategy(3),
        g in term_strategy(3),
        x in prop::collection::vec((-1.5f64..1.5, -1.5f64..1.5), 3),
    ) {
        let f = poly_from(3, &f);
        let g = poly_from(3, &g);
        let x: Vec<Complex64> = x.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
        let lhs = (&f * &g).evaluate(&x).unwrap();
        let rhs = f.evaluate(&x).unwrap() * g.evaluate(&x).unwrap();
        let scale = lhs.norm().max(rhs.norm()).max(1.0);
        prop_assert!((lhs - rhs).norm() <= 1e-10 * scale);
    }

    #[test]
    fn evaluation_commutes_with_sums(
        f in term_strategy(2),
        g in term_strategy(2),
        x in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 2),
    ) {
        let f = poly_from(2, &f);
        let g = poly_from(2, &g);
        let x: Vec<Complex64> = x.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
        let lhs = (&f + &g).evaluate(&x).unwrap();
        let rhs = f.evaluate(&x).unwrap() + g.evaluate(&x).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * lhs.norm().max(1.0));
    }

    #[test]
    fn exact_determinant_of_integer_matrices(vals in prop::collection::vec(-6i64..=6, 9)) {
        let entries: Vec<QPoly> = vals.iter().map(|&v| QPoly::constant(1, Rational::from_integer(v.into()))).collect();
        let m = SymbolicMatrix::from_rows(3, entries.clone());
        prop_assert_eq!(m.det(), laplace(&entries, 3, 1));
    }
}
