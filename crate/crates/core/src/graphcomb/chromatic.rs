use std::collections::HashMap;

use super::intpoly::IntPolynomial;
use crate::error::{Error, Result};
use crate::matspace::Graph;

/// Simple graph on at most 64 vertices as adjacency bitmasks.
#[derive(Clone, Debug)]
struct Simple {
    adj: Vec<u64>,
}

impl Simple {
    fn from_graph(g: &Graph) -> Self {
        assert!(g.nvertices() <= 64, "chromatic polynomials are limited to 64 vertices");
        let mut adj = vec![0u64; g.nvertices()];
        for &(a, b) in g.edges() {
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        Simple { adj }
    }

    fn n(&self) -> usize {
        self.adj.len()
    }

    fn degree(&self, v: usize) -> u32 {
        self.adj[v].count_ones()
    }

    fn nedges(&self) -> u32 {
        self.adj.iter().map(|a| a.count_ones()).sum::<u32>() / 2
    }

    fn delete(&self, a: usize, b: usize) -> Simple {
        let mut adj = self.adj.clone();
        adj[a] &= !(1 << b);
        adj[b] &= !(1 << a);
        Simple { adj }
    }

    /// Merges `b` into `a`; parallel edges collapse automatically.
    fn contract(&self, a: usize, b: usize) -> Simple {
        let n = self.n();
        let merged = (self.adj[a] | self.adj[b]) & !(1 << a) & !(1 << b);
        let mut adj = Vec::with_capacity(n - 1);
        // Bit positions above `b` shift down by one after removing `b`.
        let squeeze = |m: u64| -> u64 {
            let low = m & ((1u64 << b) - 1);
            let high = if b + 1 < 64 { (m >> (b + 1)) << b } else { 0 };
            low | high
        };
        for v in 0..n {
            if v == b {
                continue;
            }
            let mut m = self.adj[v];
            if v == a {
                m = merged;
            } else if m & (1 << b) != 0 {
                m = (m & !(1 << b)) | (1 << a);
            }
            adj.push(squeeze(m));
        }
        Simple { adj }
    }

    /// Exact graph identity after relabeling vertices by (degree, sorted
    /// neighbour degrees, old index). Isomorphic graphs may get different
    /// keys; equal keys always mean identical graphs.
    fn memo_key(&self) -> (usize, Vec<u64>) {
        let n = self.n();
        let deg: Vec<u32> = (0..n).map(|v| self.degree(v)).collect();
        let mut order: Vec<usize> = (0..n).collect();
        let signature = |v: usize| {
            let mut nd: Vec<u32> = (0..n).filter(|&w| self.adj[v] & (1 << w) != 0).map(|w| deg[w]).collect();
            nd.sort_unstable();
            (deg[v], nd)
        };
        let sigs: Vec<_> = (0..n).map(signature).collect();
        order.sort_by(|&x, &y| sigs[x].cmp(&sigs[y]).then(x.cmp(&y)));
        let mut pos = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let adj = order
            .iter()
            .map(|&v| {
                let mut m = 0u64;
                for w in 0..n {
                    if self.adj[v] & (1 << w) != 0 {
                        m |= 1 << pos[w];
                    }
                }
                m
            })
            .collect();
        (n, adj)
    }

    /// Edge whose endpoint has the largest degree (ties: smallest indices).
    fn pick_edge(&self) -> Option<(usize, usize)> {
        let a = (0..self.n()).filter(|&v| self.adj[v] != 0).max_by_key(|&v| (self.degree(v), std::cmp::Reverse(v)))?;
        let b = (0..self.n())
            .filter(|&w| self.adj[a] & (1 << w) != 0)
            .max_by_key(|&w| (self.degree(w), std::cmp::Reverse(w)))?;
        Some((a, b))
    }
}

type Memo = HashMap<(usize, Vec<u64>), IntPolynomial>;

fn chromatic_rec(g: &Simple, memo: &mut Memo) -> IntPolynomial {
    let n = g.n();
    let m = g.nedges() as usize;
    if m == 0 {
        return IntPolynomial::monomial(n);
    }
    if m == n * (n - 1) / 2 {
        return IntPolynomial::falling_factorial(n);
    }
    let key = g.memo_key();
    if let Some(p) = memo.get(&key) {
        return p.clone();
    }
    let (a, b) = g.pick_edge().expect("graph with edges has an edge");
    let deleted = chromatic_rec(&g.delete(a, b), memo);
    let contracted = chromatic_rec(&g.contract(a.min(b), a.max(b)), memo);
    let p = &deleted - &contracted;
    memo.insert(key, p.clone());
    p
}

/// Chromatic polynomial by deletion-contraction. Parallel edges are
/// collapsed first; graphs cannot carry loops.
pub fn chromatic(g: &Graph) -> IntPolynomial {
    chromatic_rec(&Simple::from_graph(g), &mut HashMap::new())
}

/// `chromatic(g) / (k - 1)`, defined when `g` has at least one edge.
pub fn reduced_chromatic(g: &Graph) -> Result<IntPolynomial> {
    if g.nedges() == 0 {
        return Err(Error::Edgeless);
    }
    let (q, r) = chromatic(g).div_linear(1);
    debug_assert_eq!(r, 0, "chromatic polynomial of a graph with an edge vanishes at 1");
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force_colorings(g: &Graph, k: u64) -> u64 {
        let n = g.nvertices() as u32;
        let total = k.pow(n);
        (0..total)
            .filter(|&code| {
                let color = |v: usize| (code / k.pow(v as u32)) % k;
                g.edges().iter().all(|&(a, b)| color(a) != color(b))
            })
            .count() as u64
    }

    #[test]
    fn paths_cycles_goldens() {
        for n in 1..=8 {
            // k (k - 1)^(n - 1)
            let want = (1..n).fold(IntPolynomial::monomial(1), |acc, _| &acc * &IntPolynomial::linear_root(1));
            assert_eq!(chromatic(&Graph::path(n)), want, "P_{n}");
        }
        assert_eq!(chromatic(&Graph::cycle(3)), IntPolynomial::falling_factorial(3));
        // k (k - 1) (k^2 - 3k + 3)
        let c4 = &IntPolynomial::falling_factorial(2) * &IntPolynomial::new(vec![3, -3, 1]);
        assert_eq!(chromatic(&Graph::cycle(4)), c4);
        assert_eq!(reduced_chromatic(&Graph::cycle(4)).unwrap().coeffs(), &[0, 3, -3, 1]);
        assert_eq!(reduced_chromatic(&Graph::cycle(3)).unwrap().coeffs(), &[0, -2, 1]);
    }

    #[test]
    fn matches_brute_force_on_small_graphs() {
        let graphs = [
            Graph::complete(4),
            Graph::cycle(5),
            Graph::new(5, vec![(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]).unwrap(),
            Graph::new(4, vec![(0, 1), (0, 1), (1, 2)]).unwrap(),
            Graph::new(6, vec![(0, 1), (2, 3), (4, 5), (1, 2)]).unwrap(),
        ];
        for g in &graphs {
            let p = chromatic(g);
            for k in 0..4 {
                assert_eq!(p.eval(k as i64) as u64, brute_force_colorings(g, k), "{g:?} at k={k}");
            }
        }
    }

    #[test]
    fn edgeless_reduced_is_an_error() {
        assert!(matches!(reduced_chromatic(&Graph::empty(3)), Err(Error::Edgeless)));
    }

    #[test]
    fn contraction_relabels() {
        // Merging vertex 2 of the path 0-1-2-3 into vertex 0: the merged
        // vertex sees 1 and old 3 (now index 2).
        let g = Simple::from_graph(&Graph::new(4, vec![(0, 1), (1, 2), (2, 3)]).unwrap());
        let c = g.contract(0, 2);
        assert_eq!(c.n(), 3);
        assert_eq!(c.adj, vec![0b110, 0b001, 0b001]);
    }
}
