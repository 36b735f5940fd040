use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Loopless graph with oriented edges; parallel edges are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    nvertices: usize,
    edges: Vec<(usize, usize)>,
}

#[derive(Deserialize)]
struct GraphJson {
    vertices: usize,
    edges: Vec<[usize; 2]>,
}

impl Graph {
    pub fn new(nvertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        for &(a, b) in &edges {
            if a == b {
                return Err(Error::InvalidGraph(format!("loop at vertex {a}")));
            }
            if a >= nvertices || b >= nvertices {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a},{b}) out of range for {nvertices} vertices"
                )));
            }
        }
        Ok(Graph { nvertices, edges })
    }

    pub fn path(n: usize) -> Self {
        Graph { nvertices: n, edges: (1..n).map(|i| (i - 1, i)).collect() }
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3);
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        edges.push((0, n - 1));
        Graph { nvertices: n, edges }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        Graph { nvertices: n, edges }
    }

    pub fn empty(n: usize) -> Self {
        Graph { nvertices: n, edges: Vec::new() }
    }

    pub fn nvertices(&self) -> usize {
        self.nvertices
    }

    pub fn nedges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Edges oriented from the lower to the higher vertex index.
    pub fn normalized_orientation(&self) -> Graph {
        let edges = self.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        Graph { nvertices: self.nvertices, edges }
    }

    /// Same graph with the orientation of edge `e` reversed.
    pub fn flip_edge(&self, e: usize) -> Graph {
        let mut g = self.clone();
        let (a, b) = g.edges[e];
        g.edges[e] = (b, a);
        g
    }

    /// Distinct unordered vertex pairs joined by at least one edge.
    pub fn simple_edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = self.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.nvertices];
        for &(a, b) in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    pub fn is_connected(&self) -> bool {
        if self.nvertices == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); self.nvertices];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; self.nvertices];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Parses `{"vertices": k, "edges": [[a, b], ...]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let g: GraphJson = serde_json::from_str(text)?;
        Graph::new(g.vertices, g.edges.into_iter().map(|[a, b]| (a, b)).collect())
    }

    pub fn to_json(&self) -> String {
        let edges: Vec<[usize; 2]> = self.edges.iter().map(|&(a, b)| [a, b]).collect();
        serde_json::json!({ "vertices": self.nvertices, "edges": edges }).to_string()
    }

    /// Parses an edge list, one `a b` pair per line, 0-indexed. Blank lines and
    /// lines starting with `#` are ignored; the vertex count is one more than
    /// the largest index seen.
    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let nums: Vec<usize> = line
                .split_whitespace()
                .map(str::parse)
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::InvalidGraph(format!("line {}: `{line}`", lineno + 1)))?;
            let [a, b] = nums[..] else {
                return Err(Error::InvalidGraph(format!("line {}: expected two indices", lineno + 1)));
            };
            edges.push((a, b));
        }
        let n = edges.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0);
        Graph::new(n, edges)
    }

    /// Connected simple graphs with at least one edge, at most
    /// `max_vertices` vertices and at most `max_edges` edges, one per
    /// isomorphism class. Edges are oriented from lower to higher index.
    pub fn connected_simple_graphs(max_vertices: usize, max_edges: usize) -> Vec<Graph> {
        assert!(max_vertices <= 6, "exhaustive enumeration is limited to 6 vertices");
        let mut out = Vec::new();
        for n in 2..=max_vertices {
            let pairs: Vec<(usize, usize)> = Graph::complete(n).edges;
            let perms = permutations(n);
            let mut seen = std::collections::HashSet::new();
            for mask in 1u32..(1 << pairs.len()) {
                if mask.count_ones() as usize > max_edges {
                    continue;
                }
                let edges: Vec<_> = (0..pairs.len()).filter(|&i| mask >> i & 1 == 1).map(|i| pairs[i]).collect();
                let g = Graph { nvertices: n, edges };
                if !g.is_connected() {
                    continue;
                }
                let canon = perms
                    .iter()
                    .map(|p| {
                        let mut e: Vec<_> = g.edges.iter().map(|&(a, b)| (p[a].min(p[b]), p[a].max(p[b]))).collect();
                        e.sort_unstable();
                        e
                    })
                    .min()
                    .unwrap();
                if seen.insert(canon) {
                    out.push(g);
                }
            }
        }
        out
    }

    /// Accepts either supported format, trying JSON first.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Graph::from_json(text)
        } else {
            Graph::from_edge_list(text)
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}
