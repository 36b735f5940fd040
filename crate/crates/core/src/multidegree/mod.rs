//! Multidegrees of the graph of the gradient-of-determinant map.
//!
//! For a space `L` of `n x n` matrices with `D = dim P(L)` there are two
//! maps out of `P(L)`: the restricted gradient, whose components are the
//! adjugate entries of the generic element, and the gradient of the
//! restricted determinant. Entry `mu_i` of the multidegree of either graph
//! is the number of graph points cut out by `D - i` general hyperplanes of
//! the domain and `i` general hyperplanes of the codomain.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matspace::{Kind, MatrixSpace};
use crate::poly::{CPoly, QPoly, Rational, SymbolicMatrix};
use crate::rng::{seeded, unit_disk};
use crate::tracker::{count_isolated_with, IsolatedCount, PolySystem, TrackerConfig};

/// Which of the two maps a sequence belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapTag {
    RestrictedGradient,
    GradientOfRestriction,
}

impl MapTag {
    pub fn name(self) -> &'static str {
        match self {
            MapTag::RestrictedGradient => "restricted-gradient",
            MapTag::GradientOfRestriction => "gradient-of-restriction",
        }
    }
}

impl std::str::FromStr for MapTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "restricted" | "restricted-gradient" => Ok(MapTag::RestrictedGradient),
            "lower" | "gradient-of-restriction" => Ok(MapTag::GradientOfRestriction),
            _ => Err(Error::InvalidConfig(format!("unknown map `{s}` (expected restricted or lower)"))),
        }
    }
}

/// How a number was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Combinatorial,
    Numeric,
    Formula,
}

/// `(mu_0, ..., mu_D)` together with its provenance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultidegreeSequence {
    entries: Vec<u64>,
    map: MapTag,
    space_label: String,
    engine: Engine,
    seeds: Vec<u64>,
    paths_tracked: usize,
    warnings: Vec<String>,
}

impl MultidegreeSequence {
    pub fn new(entries: Vec<u64>, map: MapTag, space_label: impl Into<String>, engine: Engine) -> Self {
        assert!(!entries.is_empty(), "a multidegree has at least one entry");
        MultidegreeSequence {
            entries,
            map,
            space_label: space_label.into(),
            engine,
            seeds: vec![],
            paths_tracked: 0,
            warnings: vec![],
        }
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    /// `D`, the dimension of the domain.
    pub fn dim(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn map(&self) -> MapTag {
        self.map
    }

    pub fn space_label(&self) -> &str {
        &self.space_label
    }

    pub fn engine(&self) -> Engine {
        self.engine
    }

    pub fn seeds(&self) -> &[u64] {
        &self.seeds
    }

    pub fn paths_tracked(&self) -> usize {
        self.paths_tracked
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// The last entry.
    pub fn last(&self) -> u64 {
        *self.entries.last().unwrap()
    }

    /// `sum_i (-1)^i mu_i`.
    pub fn alternating_sum(&self) -> i64 {
        self.entries.iter().enumerate().map(|(i, &m)| if i % 2 == 0 { m as i64 } else { -(m as i64) }).sum()
    }
}

/// The components `g_0, ..., g_m` of one of the two maps on `P(L)`, in the
/// `dim L` coordinates of the space.
#[derive(Clone, Debug)]
pub struct GraphMapSpec {
    space: MatrixSpace,
    map: MapTag,
    exact: Vec<QPoly>,
    float: Vec<CPoly>,
    degree: u32,
}

impl GraphMapSpec {
    pub fn space(&self) -> &MatrixSpace {
        &self.space
    }

    pub fn map(&self) -> MapTag {
        self.map
    }

    pub fn components(&self) -> &[QPoly] {
        &self.exact
    }

    pub fn float_components(&self) -> &[CPoly] {
        &self.float
    }

    /// Common degree of the components.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// `D = dim P(L)`.
    pub fn dim(&self) -> usize {
        self.space.dim() - 1
    }
}

fn diagonal_product(k: &SymbolicMatrix<Rational>, skip: Option<usize>) -> QPoly {
    (0..k.n()).filter(|&i| Some(i) != skip).fold(QPoly::one(k.nvars()), |acc, i| &acc * k.get(i, i))
}

/// Determinant of the generic element of `space`.
pub fn restricted_determinant(space: &MatrixSpace) -> QPoly {
    let k = space.generic_element();
    match space.kind() {
        Kind::Diagonal => diagonal_product(&k, None),
        _ => k.det(),
    }
}

/// Builds the component list of `map` on `space`.
///
/// Restricted gradient: adjugate entries of the generic element, keeping
/// the diagonal for diagonal spaces, the upper triangle for symmetric ones
/// and every entry otherwise. Gradient of restriction: the partials of the
/// restricted determinant. Zero components are dropped.
pub fn build_map(space: &MatrixSpace, map: MapTag) -> Result<GraphMapSpec> {
    let n = space.n();
    let det = restricted_determinant(space);
    if det.is_zero() {
        return Err(Error::DegenerateSpace(space.label().to_string()));
    }
    let k = space.generic_element();
    let mut exact: Vec<QPoly> = match map {
        MapTag::RestrictedGradient => match space.kind() {
            Kind::Diagonal => (0..n).map(|i| diagonal_product(&k, Some(i))).collect(),
            kind => {
                let adj = k.adjugate();
                kind.positions(n).into_iter().map(|(i, j)| adj.get(i, j).clone()).collect()
            }
        },
        MapTag::GradientOfRestriction => det.gradient(),
    };
    exact.retain(|g| !g.is_zero());
    let float = exact.iter().map(QPoly::to_float).collect::<Result<Vec<_>>>()?;
    Ok(GraphMapSpec { space: space.clone(), map, exact, float, degree: n as u32 - 1 })
}

fn random_vec(rng: &mut crate::rng::SeededRng, len: usize) -> Vec<Complex64> {
    (0..len).map(|_| unit_disk(rng)).collect()
}

/// Scales a polynomial so its largest coefficient has modulus one.
pub(crate) fn unit_scale(p: &CPoly) -> CPoly {
    let m = p.max_coeff_norm();
    if m == 0.0 {
        p.clone()
    } else {
        p.scale(&Complex64::new(1.0 / m, 0.0))
    }
}

/// The affine parametrization `x = p + N u` of a random `i`-dimensional
/// slice of the domain chart, as `dim L` linear polynomials in `nv`
/// variables (the first `i` being `u`).
pub(crate) fn random_slice(rng: &mut crate::rng::SeededRng, dim_l: usize, i: usize, nv: usize) -> Vec<CPoly> {
    (0..dim_l)
        .map(|_| {
            let mut coeffs = random_vec(rng, i);
            coeffs.resize(nv, Complex64::new(0.0, 0.0));
            &CPoly::linear(&coeffs) + &CPoly::constant(nv, unit_disk(rng))
        })
        .collect()
}

/// Points at which the typical size of an exclusion factor is sampled.
const SCALE_SAMPLES: usize = 16;

/// Geometric mean of `|h|` over fixed random points of the unit polydisk.
/// Expanded through the slice, `h` can have huge coefficients that cancel
/// at actual points; scaling by this instead keeps `z = 1 / h` of order
/// one at typical solutions, so they are not mistaken for base-locus
/// escapes where `z` grows without bound.
pub(crate) fn typical_size(h: &CPoly) -> f64 {
    let mut rng = seeded(0x7479_7069);
    let mut log_sum = 0.0;
    let mut used = 0;
    for _ in 0..SCALE_SAMPLES {
        let x = random_vec(&mut rng, h.nvars());
        if let Ok(v) = h.evaluate(&x) {
            if v.norm() > 0.0 && v.norm().is_finite() {
                log_sum += v.norm().ln();
                used += 1;
            }
        }
    }
    if used == 0 {
        h.max_coeff_norm()
    } else {
        (log_sum / used as f64).exp()
    }
}

/// Variables `u_0..u_{i-1}` for the slice and `z` (index `i`) for the
/// exclusion equation `1 - z h(u) = 0`.
pub(crate) fn exclusion_system(rows: Vec<CPoly>, h: &CPoly, i: usize) -> Result<PolySystem> {
    let nv = i + 1;
    let z = CPoly::var(nv, i);
    let size = typical_size(h);
    let h = if size > 0.0 { h.scale(&Complex64::new(1.0 / size, 0.0)) } else { h.clone() };
    let rab = &CPoly::one(nv) - &(&z * &h);
    let mut eqs: Vec<CPoly> = rows.iter().map(unit_scale).collect();
    eqs.push(rab);
    let groups = if i == 0 { vec![vec![0]] } else { vec![(0..i).collect(), vec![i]] };
    Ok(PolySystem::new(eqs)?.with_groups(groups)?.with_exclusion_var(i))
}

/// The square system whose isolated solutions count `mu_i`, for one seed.
pub fn mu_system(spec: &GraphMapSpec, i: usize, seed: u64) -> Result<PolySystem> {
    let d = spec.dim();
    if i > d {
        return Err(Error::IndexOutOfRange { index: i, max: d });
    }
    let mut rng = seeded(seed);
    let nv = i + 1;
    let slice = random_slice(&mut rng, spec.space.dim(), i, nv);
    let comps: Vec<CPoly> = spec.float.iter().map(|g| g.compose(&slice)).collect();
    let combo = |rng: &mut crate::rng::SeededRng| {
        comps.iter().fold(CPoly::zero(nv), |acc, g| &acc + &g.scale(&unit_disk(rng)))
    };
    let rows: Vec<CPoly> = (0..i).map(|_| combo(&mut rng)).collect();
    let h = combo(&mut rng);
    exclusion_system(rows, &h, i)
}

/// `mu_i`, agreed across `repeats` seeds derived from `cfg.seed`.
pub fn mu(spec: &GraphMapSpec, i: usize, cfg: &TrackerConfig, repeats: usize) -> Result<IsolatedCount> {
    if i > spec.dim() {
        return Err(Error::IndexOutOfRange { index: i, max: spec.dim() });
    }
    count_isolated_with(|s| mu_system(spec, i, s), cfg, repeats)
}

/// Fraction of paths lost to the exclusion equation above which a run is
/// flagged for review.
pub const EXCLUSION_WARN_FRACTION: f64 = 0.1;

/// `(mu_0, ..., mu_D)` computed numerically.
pub fn multidegree(spec: &GraphMapSpec, cfg: &TrackerConfig, repeats: usize) -> Result<MultidegreeSequence> {
    let mut entries = Vec::with_capacity(spec.dim() + 1);
    let mut paths = 0;
    let mut warnings = Vec::new();
    let mut seeds = Vec::new();
    for i in 0..=spec.dim() {
        let c = mu(spec, i, cfg, repeats)?;
        if c.excluded_fraction > EXCLUSION_WARN_FRACTION {
            warnings.push(format!(
                "mu_{i}: {:.0}% of paths ended on the base locus",
                100.0 * c.excluded_fraction
            ));
        }
        entries.push(c.count as u64);
        paths += c.paths_tracked;
        seeds = c.seeds;
    }
    let mut seq = MultidegreeSequence::new(entries, spec.map, spec.space.label(), Engine::Numeric);
    seq.seeds = seeds;
    seq.paths_tracked = paths;
    seq.warnings = warnings;
    Ok(seq)
}

fn require_symmetric(space: &MatrixSpace) -> Result<()> {
    if space.kind() != Kind::Symmetric {
        return Err(Error::InvalidSpace(format!("expected a symmetric space, got {}", space.kind().name())));
    }
    Ok(())
}

/// Degree of the model: the last entry for the restricted gradient.
pub fn model_degree(space: &MatrixSpace, cfg: &TrackerConfig, repeats: usize) -> Result<IsolatedCount> {
    require_symmetric(space)?;
    let spec = build_map(space, MapTag::RestrictedGradient)?;
    mu(&spec, spec.dim(), cfg, repeats)
}

/// ML-degree: the last entry for the gradient of the restriction.
pub fn ml_degree(space: &MatrixSpace, cfg: &TrackerConfig, repeats: usize) -> Result<IsolatedCount> {
    require_symmetric(space)?;
    let spec = build_map(space, MapTag::GradientOfRestriction)?;
    mu(&spec, spec.dim(), cfg, repeats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matspace::Graph;
    use crate::poly::parse_poly;

    fn q(s: &str, n: usize) -> QPoly {
        parse_poly(s, n).unwrap()
    }

    #[test]
    fn two_by_two_symmetric_adjugate() {
        let spec = build_map(&MatrixSpace::full(Kind::Symmetric, 2), MapTag::RestrictedGradient).unwrap();
        // Coordinates (a, b, c) of [[a, b], [b, c]]; adjugate [[c, -b], [-b, a]].
        assert_eq!(spec.components(), &[q("x2", 3), q("-x1", 3), q("x0", 3)]);
        assert_eq!(spec.degree(), 1);
        assert_eq!(spec.dim(), 2);
    }

    #[test]
    fn degenerate_space_is_refused() {
        // Strictly upper triangular 2x2 matrices have determinant zero.
        let mut m = crate::matspace::QMatrix::zeros(2);
        m.set(0, 1, Rational::from_integer(1.into()));
        let s = MatrixSpace::new(Kind::General, 2, vec![m], "nilpotent").unwrap();
        assert!(matches!(build_map(&s, MapTag::RestrictedGradient), Err(Error::DegenerateSpace(_))));
    }

    #[test]
    fn c4_components_are_cubic() {
        let s = MatrixSpace::from_graph_incidence(&Graph::cycle(4)).unwrap();
        let spec = build_map(&s, MapTag::RestrictedGradient).unwrap();
        assert_eq!(spec.components().len(), 4);
        assert!(spec.components().iter().all(|g| g.total_degree() == 3));
        assert_eq!(spec.dim(), 2);
    }

    #[test]
    fn mu_zero_is_one() {
        let s = MatrixSpace::from_graph_incidence(&Graph::cycle(4)).unwrap();
        let spec = build_map(&s, MapTag::RestrictedGradient).unwrap();
        assert_eq!(mu(&spec, 0, &TrackerConfig::default(), 3).unwrap().count, 1);
        assert!(matches!(mu(&spec, 3, &TrackerConfig::default(), 3), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn single_edge_is_a_point() {
        let s = MatrixSpace::from_graph_incidence(&Graph::path(2)).unwrap();
        let spec = build_map(&s, MapTag::RestrictedGradient).unwrap();
        assert_eq!(spec.dim(), 0);
        assert_eq!(multidegree(&spec, &TrackerConfig::default(), 3).unwrap().entries(), &[1]);
    }

    #[test]
    fn general_two_by_two_is_all_ones() {
        let spec = build_map(&MatrixSpace::full(Kind::General, 2), MapTag::RestrictedGradient).unwrap();
        let seq = multidegree(&spec, &TrackerConfig::default(), 3).unwrap();
        assert_eq!(seq.entries(), &[1, 1, 1, 1]);
        assert_eq!(seq.alternating_sum(), 0);
    }

    #[test]
    fn map_tags_parse() {
        assert_eq!("restricted".parse::<MapTag>().unwrap(), MapTag::RestrictedGradient);
        assert_eq!("lower".parse::<MapTag>().unwrap(), MapTag::GradientOfRestriction);
        assert!("upper".parse::<MapTag>().is_err());
    }
}
