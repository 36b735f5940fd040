use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::graph::Graph;
use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::{rational_from_str, rational_string, QPoly, Rational, SymbolicMatrix};
use crate::rng;

/// Which ambient space of `n x n` matrices a [`MatrixSpace`] lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Diagonal,
    Symmetric,
    General,
}

impl Kind {
    pub fn ambient_dim(self, n: usize) -> usize {
        match self {
            Kind::Diagonal => n,
            Kind::Symmetric => n * (n + 1) / 2,
            Kind::General => n * n,
        }
    }

    /// Matrix positions serving as coordinates of the ambient space.
    /// Symmetric spaces use the upper triangle, row by row.
    pub fn positions(self, n: usize) -> Vec<(usize, usize)> {
        match self {
            Kind::Diagonal => (0..n).map(|i| (i, i)).collect(),
            Kind::Symmetric => (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect(),
            Kind::General => (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Kind::Diagonal => "diagonal",
            Kind::Symmetric => "symmetric",
            Kind::General => "general",
        }
    }
}

impl std::str::FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "diagonal" => Ok(Kind::Diagonal),
            "symmetric" => Ok(Kind::Symmetric),
            "general" => Ok(Kind::General),
            _ => Err(Error::InvalidSpace(format!("unknown kind `{s}`"))),
        }
    }
}

/// Dense `n x n` rational matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    n: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(n: usize) -> Self {
        QMatrix { n, data: vec![Rational::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidSpace("matrix is not square".into()));
        }
        Ok(QMatrix { n, data: rows.into_iter().flatten().collect() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        self.data.chunks(self.n).map(<[Rational]>::to_vec).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.get(i, j).is_zero()))
    }

    /// `tr(self * other)`.
    pub fn trace_pairing(&self, other: &QMatrix) -> Rational {
        let n = self.n;
        let mut acc = Rational::zero();
        for i in 0..n {
            for j in 0..n {
                acc += self.get(i, j) * other.get(j, i);
            }
        }
        acc
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.data.iter().map(|q| crate::poly::rational_to_f64(q).unwrap_or(f64::NAN)).collect()
    }
}

/// A linear subspace of `n x n` matrices of a fixed [`Kind`], stored by a
/// basis in reduced row echelon form (over the kind's coordinates), so that
/// two spaces are equal exactly when their bases are.
#[derive(Clone, Debug)]
pub struct MatrixSpace {
    kind: Kind,
    n: usize,
    basis: Vec<QMatrix>,
    label: String,
}

impl PartialEq for MatrixSpace {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.n == other.n && self.basis == other.basis
    }
}

impl MatrixSpace {
    /// Validates kind membership and linear independence, then row-reduces
    /// the basis.
    pub fn new(kind: Kind, n: usize, basis: Vec<QMatrix>, label: impl Into<String>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpace("matrix side must be positive".into()));
        }
        if basis.is_empty() {
            return Err(Error::InvalidSpace("basis is empty".into()));
        }
        for m in &basis {
            if m.n() != n {
                return Err(Error::InvalidSpace(format!("basis matrix of side {} in a space of side {n}", m.n())));
            }
            let ok = match kind {
                Kind::Diagonal => m.is_diagonal(),
                Kind::Symmetric => m.is_symmetric(),
                Kind::General => true,
            };
            if !ok {
                return Err(Error::InvalidSpace(format!("basis matrix is not {}", kind.name())));
            }
        }
        let coords: Vec<_> = basis.iter().map(|m| to_coords(kind, m)).collect();
        let (reduced, _) = linalg::rref(&coords);
        if reduced.len() != basis.len() {
            return Err(Error::InvalidSpace("basis matrices are linearly dependent".into()));
        }
        Ok(Self::from_reduced(kind, n, reduced, label.into()))
    }

    fn from_reduced(kind: Kind, n: usize, reduced: Vec<Vec<Rational>>, label: String) -> Self {
        let basis = reduced.iter().map(|c| from_coords(kind, n, c)).collect();
        MatrixSpace { kind, n, basis, label }
    }

    /// The whole ambient space of the given kind.
    pub fn full(kind: Kind, n: usize) -> Self {
        let d = kind.ambient_dim(n);
        let rows = (0..d)
            .map(|i| (0..d).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        Self::from_reduced(kind, n, rows, format!("full {} {n}x{n}", kind.name()))
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.kind.ambient_dim(self.n)
    }

    pub fn basis(&self) -> &[QMatrix] {
        &self.basis
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Basis in ambient coordinates.
    pub fn coords(&self) -> Vec<Vec<Rational>> {
        self.basis.iter().map(|m| to_coords(self.kind, m)).collect()
    }

    pub fn contains(&self, m: &QMatrix) -> bool {
        let mut rows = self.coords();
        rows.push(to_coords(self.kind, m));
        linalg::rank(&rows) == self.dim()
    }

    /// `L_G`: the span of the signed incidence vectors `w_v` of a connected
    /// graph, embedded as diagonal `|E| x |E|` matrices.
    pub fn from_graph_incidence(g: &Graph) -> Result<Self> {
        if g.nedges() == 0 {
            return Err(Error::Edgeless);
        }
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        let ne = g.nedges();
        let rows: Vec<Vec<Rational>> = (0..g.nvertices())
            .map(|v| {
                g.edges()
                    .iter()
                    .map(|&(a, b)| {
                        if a == v {
                            Rational::one()
                        } else if b == v {
                            -Rational::one()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        let (reduced, _) = linalg::rref(&rows);
        debug_assert_eq!(reduced.len(), g.nvertices() - 1);
        Ok(Self::from_reduced(Kind::Diagonal, ne, reduced, format!("L_G of graph {}", g.to_json())))
    }

    /// `L^G`: symmetric matrices vanishing off the diagonal at non-edges.
    pub fn from_graphical_model(g: &Graph) -> Result<Self> {
        let n = g.nvertices();
        let mut basis = Vec::new();
        for i in 0..n {
            let mut m = QMatrix::zeros(n);
            m.set(i, i, Rational::one());
            basis.push(m);
        }
        for (a, b) in g.simple_edges() {
            let mut m = QMatrix::zeros(n);
            m.set(a, b, Rational::one());
            m.set(b, a, Rational::one());
            basis.push(m);
        }
        Self::new(Kind::Symmetric, n, basis, format!("L^G of graph {}", g.to_json()))
    }

    /// A random space with small integer basis entries; dependent draws are
    /// rejected and redrawn from the same stream.
    pub fn random(kind: Kind, n: usize, dim: usize, seed: u64) -> Result<Self> {
        let ambient = kind.ambient_dim(n);
        if dim == 0 || dim > ambient {
            return Err(Error::InvalidSpace(format!("dimension {dim} outside 1..={ambient}")));
        }
        let mut r = rng::seeded(seed);
        loop {
            let rows: Vec<Vec<Rational>> = (0..dim)
                .map(|_| (0..ambient).map(|_| rng::any_small_rational(&mut r, 5)).collect())
                .collect();
            let (reduced, _) = linalg::rref(&rows);
            if reduced.len() == dim {
                let label = format!("random {} {n}x{n} dim {dim} seed {seed}", kind.name());
                return Ok(Self::from_reduced(kind, n, reduced, label));
            }
        }
    }

    /// Symmetric matrices `M` with `p^T M p = 0` for every given point.
    pub fn quadrics_through_points(n: usize, points: &[Vec<Rational>]) -> Result<Self> {
        let positions = Kind::Symmetric.positions(n);
        let mut rows = Vec::with_capacity(points.len());
        for p in points {
            if p.len() != n {
                return Err(Error::InvalidSpace(format!("point of length {} in dimension {n}", p.len())));
            }
            let row: Vec<Rational> = positions
                .iter()
                .map(|&(i, j)| {
                    let v = &p[i] * &p[j];
                    if i == j {
                        v
                    } else {
                        v * Rational::from_integer(2.into())
                    }
                })
                .collect();
            rows.push(row);
            if linalg::rank(&rows) != rows.len() {
                return Err(Error::NotGeneric(format!(
                    "point {} imposes a dependent condition",
                    rows.len() - 1
                )));
            }
        }
        let kernel = linalg::kernel(&rows, positions.len());
        if kernel.is_empty() {
            return Err(Error::NotGeneric("no quadric passes through all points".into()));
        }
        let (reduced, _) = linalg::rref(&kernel);
        let label = format!("quadrics in {n} variables through {} points", points.len());
        Ok(Self::from_reduced(Kind::Symmetric, n, reduced, label))
    }

    /// Complement inside the ambient space of the same kind under
    /// `<A, B> = tr(AB)`. May be the zero space.
    pub fn orthogonal_complement(&self) -> Self {
        let ambient = self.ambient_dim();
        let units: Vec<QMatrix> = (0..ambient)
            .map(|c| {
                let mut e = vec![Rational::zero(); ambient];
                e[c] = Rational::one();
                from_coords(self.kind, self.n, &e)
            })
            .collect();
        let rows: Vec<Vec<Rational>> =
            self.basis.iter().map(|b| units.iter().map(|u| b.trace_pairing(u)).collect()).collect();
        let kernel = linalg::kernel(&rows, ambient);
        let (reduced, _) = linalg::rref(&kernel);
        Self::from_reduced(self.kind, self.n, reduced, format!("complement of {}", self.label))
    }

    /// `sum_i x_i B_i` as a matrix of linear forms in `dim` variables.
    pub fn generic_element(&self) -> SymbolicMatrix<Rational> {
        let k = self.dim();
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let coeffs: Vec<Rational> = self.basis.iter().map(|b| b.get(i, j).clone()).collect();
                entries.push(QPoly::linear(&coeffs));
            }
        }
        debug_assert!(entries.iter().all(|e| e.nvars() == k));
        SymbolicMatrix::from_rows(n, entries)
    }

    /// The basis as a JSON list of row-major matrices with `"p/q"` entries.
    pub fn to_json(&self) -> serde_json::Value {
        let mats: Vec<Vec<Vec<String>>> = self
            .basis
            .iter()
            .map(|m| m.rows().iter().map(|r| r.iter().map(rational_string).collect()).collect())
            .collect();
        serde_json::json!(mats)
    }

    pub fn from_json(kind: Kind, text: &str, label: impl Into<String>) -> Result<Self> {
        let mats: Vec<Vec<Vec<String>>> = serde_json::from_str(text)?;
        let n = mats.first().map_or(0, Vec::len);
        let basis = mats
            .into_iter()
            .map(|rows| {
                let rows = rows
                    .into_iter()
                    .map(|r| r.iter().map(|s| rational_from_str(s)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                QMatrix::from_rows(rows)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(kind, n, basis, label)
    }
}

pub(crate) fn to_coords(kind: Kind, m: &QMatrix) -> Vec<Rational> {
    kind.positions(m.n()).into_iter().map(|(i, j)| m.get(i, j).clone()).collect()
}

pub(crate) fn from_coords(kind: Kind, n: usize, c: &[Rational]) -> QMatrix {
    let mut m = QMatrix::zeros(n);
    for (&(i, j), v) in kind.positions(n).iter().zip(c) {
        m.set(i, j, v.clone());
        if kind == Kind::Symmetric {
            m.set(j, i, v.clone());
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    #[test]
    fn incidence_space_of_c4_is_traceless() {
        let s = MatrixSpace::from_graph_incidence(&Graph::cycle(4)).unwrap();
        assert_eq!((s.kind(), s.n(), s.dim()), (Kind::Diagonal, 4, 3));
        // The cyclic orientation 0->1->2->3->0 sums coordinates to zero.
        let cyclic = Graph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let sc = MatrixSpace::from_graph_incidence(&cyclic).unwrap();
        for b in sc.basis() {
            let tr: Rational = (0..4).map(|i| b.get(i, i).clone()).sum();
            assert!(tr.is_zero());
        }
        assert!(sc.orthogonal_complement().contains(&QMatrix::identity(4)));
    }

    #[test]
    fn incidence_small_graphs() {
        let single = MatrixSpace::from_graph_incidence(&Graph::path(2)).unwrap();
        assert_eq!((single.n(), single.dim()), (1, 1));
        let p3 = MatrixSpace::from_graph_incidence(&Graph::path(3)).unwrap();
        assert_eq!((p3.n(), p3.dim()), (2, 2));
        assert!(matches!(
            MatrixSpace::from_graph_incidence(&Graph::new(4, vec![(0, 1), (2, 3)]).unwrap()),
            Err(Error::Disconnected)
        ));
    }

    #[test]
    fn graphical_model_dimensions() {
        assert_eq!(MatrixSpace::from_graphical_model(&Graph::cycle(4)).unwrap().dim(), 8);
        let k3 = MatrixSpace::from_graphical_model(&Graph::complete(3)).unwrap();
        assert_eq!(k3, MatrixSpace::full(Kind::Symmetric, 3));
        let e = MatrixSpace::from_graphical_model(&Graph::empty(5)).unwrap();
        assert_eq!((e.kind(), e.dim()), (Kind::Symmetric, 5));
    }

    #[test]
    fn graphical_c4_generic_element_zero_pattern() {
        let s = MatrixSpace::from_graphical_model(&Graph::cycle(4)).unwrap();
        let m = s.generic_element();
        assert!(m.is_symmetric());
        for i in 0..4 {
            for j in 0..4 {
                let zero_expected = (i, j) == (0, 2) || (i, j) == (2, 0) || (i, j) == (1, 3) || (i, j) == (3, 1);
                assert_eq!(m.get(i, j).is_zero(), zero_expected, "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn complement_of_graphical_c4() {
        let s = MatrixSpace::from_graphical_model(&Graph::cycle(4)).unwrap();
        let c = s.orthogonal_complement();
        assert_eq!(c.dim(), 2);
        let mut e13 = QMatrix::zeros(4);
        e13.set(0, 2, q(1));
        e13.set(2, 0, q(1));
        let mut e24 = QMatrix::zeros(4);
        e24.set(1, 3, q(1));
        e24.set(3, 1, q(1));
        assert!(c.contains(&e13) && c.contains(&e24));
        assert!(MatrixSpace::full(Kind::Symmetric, 3).orthogonal_complement().dim() == 0);
    }

    #[test]
    fn quadrics_through_points_cases() {
        let s = MatrixSpace::quadrics_through_points(2, &[vec![q(1), q(0)]]).unwrap();
        assert_eq!(s.dim(), 2);
        for b in s.basis() {
            assert!(b.get(0, 0).is_zero());
        }
        let pts: Vec<Vec<Rational>> = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1], [1, 2, 3]]
            .iter()
            .map(|p| p.iter().map(|&v| q(v)).collect())
            .collect();
        assert_eq!(MatrixSpace::quadrics_through_points(3, &pts).unwrap().dim(), 1);
        let mut dependent = pts[..2].to_vec();
        dependent.push(vec![q(2), q(0), q(0)]);
        assert!(matches!(
            MatrixSpace::quadrics_through_points(3, &dependent),
            Err(Error::NotGeneric(_))
        ));
    }

    #[test]
    fn random_space_is_deterministic() {
        let a = MatrixSpace::random(Kind::Diagonal, 4, 3, 7).unwrap();
        let b = MatrixSpace::random(Kind::Diagonal, 4, 3, 7).unwrap();
        assert_eq!(a.basis(), b.basis());
        assert_eq!(MatrixSpace::random(Kind::Symmetric, 3, 6, 11).unwrap(), MatrixSpace::full(Kind::Symmetric, 3));
        assert!(MatrixSpace::random(Kind::Symmetric, 3, 7, 1).is_err());
    }

    #[test]
    fn json_round_trip() {
        let s = MatrixSpace::random(Kind::Symmetric, 3, 4, 3).unwrap();
        let back = MatrixSpace::from_json(Kind::Symmetric, &s.to_json().to_string(), "x").unwrap();
        assert_eq!(back, s);
    }
}
