//! Chromatic polynomials and matrix-space constructions on random graphs.

use gradet::graphcomb::{chromatic, matroid_characteristic, multidegree_via_huh, reduced_chromatic, IntPolynomial};
use gradet::matspace::{Graph, Kind, MatrixSpace, QMatrix};
use gradet::poly::Rational;
use num_traits::Zero;
use proptest::prelude::*;

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let m = pairs.len();
        prop::collection::vec(any::<bool>(), m).prop_map(move |mask| {
            let edges = pairs.iter().zip(&mask).filter(|(_, &keep)| keep).map(|(&e, _)| e).collect();
            Graph::new(n, edges).unwrap()
        })
    })
}

fn connected_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    graph_strategy(max_n).prop_filter("connected with an edge", |g| g.nedges() > 0 && g.is_connected())
}

fn brute_force(g: &Graph, k: u64) -> i64 {
    let n = g.nvertices() as u32;
    (0..k.pow(n))
        .filter(|&code| {
            let color = |v: usize| (code / k.pow(v as u32)) % k;
            g.edges().iter().all(|&(a, b)| color(a) != color(b))
        })
        .count() as i64
}

fn delete(g: &Graph, e: usize) -> Graph {
    let mut edges = g.edges().to_vec();
    edges.remove(e);
    Graph::new(g.nvertices(), edges).unwrap()
}

/// Merges the endpoints of edge `e`, dropping the loops this creates.
fn contract(g: &Graph, e: usize) -> Graph {
    let (a, b) = g.edges()[e];
    let (keep, gone) = (a.min(b), a.max(b));
    let relabel = |v: usize| {
        let v = if v == gone { keep } else { v };
        if v > gone {
            v - 1
        } else {
            v
        }
    };
    let edges = g.edges().iter().map(|&(x, y)| (relabel(x), relabel(y))).filter(|(x, y)| x != y).collect();
    Graph::new(g.nvertices() - 1, edges).unwrap()
}

fn same_span(a: &MatrixSpace, b: &MatrixSpace) -> bool {
    a.dim() == b.dim() && a.basis().iter().all(|m| b.contains(m)) && b.basis().iter().all(|m| a.contains(m))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chromatic_counts_colorings(g in graph_strategy(6)) {
        let p = chromatic(&g);
        for k in 0..=3i64 {
            prop_assert_eq!(p.eval(k), brute_force(&g, k as u64));
        }
    }

    #[test]
    fn deletion_contraction(g in graph_strategy(6)) {
        let p = chromatic(&g);
        for e in 0..g.nedges() {
            prop_assert_eq!(&p, &(&chromatic(&delete(&g, e)) - &chromatic(&contract(&g, e))));
        }
    }

    #[test]
    fn reduced_times_k_minus_one(g in graph_strategy(6).prop_filter("has an edge", |g| g.nedges() > 0)) {
        let r = reduced_chromatic(&g).unwrap();
        prop_assert_eq!(&r * &IntPolynomial::linear_root(1), chromatic(&g));
    }

    #[test]
    fn reduced_coefficients_alternate(g in connected_strategy(6)) {
        let r = reduced_chromatic(&g).unwrap();
        let deg = r.degree().unwrap();
        for (i, &c) in r.coeffs().iter().enumerate() {
            let sign = if (deg - i) % 2 == 0 { 1 } else { -1 };
            prop_assert!(c == 0 || c.signum() == sign, "coefficient {} of {:?}", i, r.coeffs());
        }
    }

    #[test]
    fn signed_multidegree_sum_is_reduced_at_one(g in connected_strategy(6)) {
        let seq = multidegree_via_huh(&g).unwrap();
        let alt = seq.alternating_sum();
        prop_assert_eq!(alt, reduced_chromatic(&g).unwrap().eval(1));
    }

    #[test]
    fn incidence_space_dimension(g in connected_strategy(6)) {
        let s = MatrixSpace::from_graph_incidence(&g).unwrap();
        prop_assert_eq!(s.dim(), g.nvertices() - 1);
        prop_assert_eq!(s.kind(), Kind::Diagonal);
    }

    #[test]
    fn matroid_route_matches_chromatic(g in connected_strategy(5)) {
        // The characteristic polynomial of the graphic matroid is chi_G / k.
        let s = MatrixSpace::from_graph_incidence(&g).unwrap();
        let (q, r) = chromatic(&g).div_linear(0);
        prop_assert_eq!(r, 0);
        prop_assert_eq!(matroid_characteristic(&s).unwrap(), q);
    }

    #[test]
    fn orientation_does_not_change_the_multidegree(g in connected_strategy(5), flips in prop::collection::vec(any::<bool>(), 10)) {
        let mut h = g.clone();
        for (e, &f) in flips.iter().enumerate().take(g.nedges()) {
            if f {
                h = h.flip_edge(e);
            }
        }
        let a = MatrixSpace::from_graph_incidence(&g).unwrap();
        let b = MatrixSpace::from_graph_incidence(&h).unwrap();
        prop_assert_eq!(a.dim(), b.dim());
        prop_assert_eq!(matroid_characteristic(&a).unwrap(), matroid_characteristic(&b).unwrap());
        let (mg, mh) = (multidegree_via_huh(&g).unwrap(), multidegree_via_huh(&h).unwrap());
        prop_assert_eq!(mg.entries(), mh.entries());
    }

    #[test]
    fn complement_is_an_involution(seed in any::<u64>(), n in 2usize..=3, kind in prop::sample::select(vec![Kind::Diagonal, Kind::Symmetric, Kind::General])) {
        let ambient = kind.ambient_dim(n);
        let dim = 1 + (seed as usize) % (ambient - 1).max(1);
        let s = MatrixSpace::random(kind, n, dim.min(ambient), seed).unwrap();
        let c = s.orthogonal_complement();
        prop_assert_eq!(s.dim() + c.dim(), ambient);
        for a in s.basis() {
            for b in c.basis() {
                prop_assert!(a.trace_pairing(b).is_zero());
            }
        }
        prop_assert!(same_span(&c.orthogonal_complement(), &s));
    }

    #[test]
    fn quadrics_vanish_at_their_points(pts in prop::collection::vec(prop::collection::vec(-7i64..=7, 3), 1..=4)) {
        let points: Vec<Vec<Rational>> = pts.iter().map(|p| p.iter().map(|&v| Rational::from_integer(v.into())).collect()).collect();
        if let Ok(s) = MatrixSpace::quadrics_through_points(3, &points) {
            prop_assert_eq!(s.dim(), 6 - points.len());
            for q in s.basis() {
                for p in &points {
                    let mut v = Rational::zero();
                    for i in 0..3 {
                        for j in 0..3 {
                            v += q.get(i, j) * &p[i] * &p[j];
                        }
                    }
                    prop_assert!(v.is_zero());
                }
            }
        }
    }

    #[test]
    fn constructions_are_deterministic(seed in any::<u64>()) {
        let a = MatrixSpace::random(Kind::Symmetric, 3, 4, seed).unwrap();
        let b = MatrixSpace::random(Kind::Symmetric, 3, 4, seed).unwrap();
        prop_assert_eq!(a.coords(), b.coords());
    }
}

#[test]
fn path_and_cycle_closed_forms() {
    // k (k - 1)^(n - 1) for paths and (k - 1)^n + (-1)^n (k - 1) for cycles.
    for n in 2..=8usize {
        let p = chromatic(&Graph::path(n));
        for k in -3..=5i64 {
            assert_eq!(p.eval(k), k * (k - 1).pow(n as u32 - 1));
        }
    }
    for n in 3..=8usize {
        let c = chromatic(&Graph::cycle(n));
        for k in -3..=5i64 {
            let sign = if n % 2 == 0 { 1 } else { -1 };
            assert_eq!(c.eval(k), (k - 1).pow(n as u32) + sign * (k - 1));
        }
    }
}

#[test]
fn graphical_model_contains_the_identity() {
    for g in Graph::connected_simple_graphs(4, 6) {
        let s = MatrixSpace::from_graphical_model(&g).unwrap();
        assert_eq!(s.dim(), g.nvertices() + g.nedges());
        assert!(s.contains(&QMatrix::identity(g.nvertices())));
    }
}
