//! Maximum likelihood estimation for linear concentration models.
//!
//! The critical points are the matrices `Sigma` with `Sigma^{-1} = K` in
//! `L` and `tr(B Sigma) = tr(B S)` for every basis element `B` of `L`,
//! where `S` is the sample covariance. Writing `Sigma` as a multiple of
//! `adj(K)`, whose pairings with the basis are the partials `p_j` of the
//! restricted determinant, the conditions become
//! `p_j(k) s_r - p_r(k) s_j = 0` for a reference combination `r`. These
//! have degree `n - 1`; together with an affine patch on `k` they cut out
//! one isolated point per critical point, plus base-locus components where
//! `det(K) p_r(k) = 0`.
//!
//! A fit first solves this system once at random complex data, with the
//! base locus excluded, then moves those solutions to the actual data by
//! parameter continuation.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matspace::{Kind, MatrixSpace};
use crate::multidegree::{ml_degree, restricted_determinant, unit_scale};
use crate::poly::CPoly;
use crate::rng::{derive_seed, seeded, unit_disk};
use crate::tracker::{solve, solve_from, PathCounts, PolySystem, TrackerConfig};

/// Mean-centred observations and their sample covariance
/// `(1/k) sum_i d_i d_i^T`.
#[derive(Clone, Debug, Serialize)]
pub struct SampleData {
    n: usize,
    samples: Vec<Vec<f64>>,
    covariance: Vec<Vec<f64>>,
}

const SYMMETRY_TOL: f64 = 1e-12;

impl SampleData {
    pub fn from_samples(samples: Vec<Vec<f64>>) -> Result<Self> {
        let n = samples.first().map(Vec::len).ok_or_else(|| Error::InvalidData("no samples".into()))?;
        if n == 0 || samples.iter().any(|d| d.len() != n) {
            return Err(Error::InvalidData("samples must be nonempty vectors of equal length".into()));
        }
        if samples.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidData("samples contain non-finite values".into()));
        }
        let k = samples.len() as f64;
        let mut cov = vec![vec![0.0; n]; n];
        for d in &samples {
            for i in 0..n {
                for j in 0..n {
                    cov[i][j] += d[i] * d[j];
                }
            }
        }
        cov.iter_mut().flatten().for_each(|v| *v /= k);
        Ok(SampleData { n, samples, covariance: cov })
    }

    /// Data given only by its covariance matrix, which must be symmetric
    /// positive semidefinite.
    pub fn from_covariance(covariance: Vec<Vec<f64>>) -> Result<Self> {
        let n = covariance.len();
        if n == 0 || covariance.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidData("covariance must be a nonempty square matrix".into()));
        }
        let scale = covariance.iter().flatten().fold(1.0f64, |m, v| m.max(v.abs()));
        for i in 0..n {
            for j in 0..n {
                if !covariance[i][j].is_finite() || (covariance[i][j] - covariance[j][i]).abs() > SYMMETRY_TOL * scale {
                    return Err(Error::InvalidData("covariance must be finite and symmetric".into()));
                }
            }
        }
        let m = DMatrix::from_fn(n, n, |i, j| covariance[i][j]);
        if SymmetricEigen::new(m).eigenvalues.iter().any(|&e| e < -1e-12 * scale) {
            return Err(Error::InvalidData("covariance is not positive semidefinite".into()));
        }
        Ok(SampleData { n, samples: vec![], covariance })
    }

    /// `k` samples `A g` with standard normal `g` and a random standard
    /// normal mixing matrix `A`.
    pub fn random(n: usize, k: usize, seed: u64) -> Result<Self> {
        let mut rng = seeded(seed);
        let a: Vec<f64> = (0..n * n).map(|_| rng.sample(StandardNormal)).collect();
        let samples = (0..k)
            .map(|_| {
                let g: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
                (0..n).map(|i| (0..n).map(|j| a[i * n + j] * g[j]).sum()).collect()
            })
            .collect();
        Self::from_samples(samples)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn samples(&self) -> &[Vec<f64>] {
        &self.samples
    }

    pub fn covariance(&self) -> &[Vec<f64>] {
        &self.covariance
    }
}

/// One complex critical point. Matrix entries are `[re, im]` pairs.
#[derive(Clone, Debug, Serialize)]
pub struct CriticalPoint {
    pub sigma: Vec<Vec<[f64; 2]>>,
    /// `max_j |tr(B_j Sigma) - tr(B_j S)|`, relative to the data scale.
    pub orthogonality_residual: f64,
    /// Size of the component of `Sigma^{-1}` orthogonal to `L`, relative
    /// to `Sigma^{-1}`.
    pub membership_residual: f64,
    pub real_positive_definite: bool,
    /// `-log det Sigma - tr(S Sigma^{-1})`, for real positive definite points.
    pub log_likelihood: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MleResult {
    pub critical_points: Vec<CriticalPoint>,
    pub maximizer: Option<Vec<Vec<f64>>>,
    pub maximizer_index: Option<usize>,
    pub count: usize,
    /// The ML-degree of the space.
    pub expected_count: usize,
    pub path_counts: PathCounts,
    pub warnings: Vec<String>,
}

/// Imaginary parts below this (relative to the entries) are dropped before
/// a critical point is tested for positive definiteness.
const REAL_TOL: f64 = 1e-8;
const PD_TOL: f64 = 1e-9;
const PD_DRAWS: usize = 50;

/// Fits data for one space. Construction solves the fiber over random
/// complex data and counts the ML-degree independently through the
/// multidegree, which are the expensive steps; each fit afterwards only
/// continues the known fiber.
pub struct MleSolver {
    space: MatrixSpace,
    cfg: TrackerConfig,
    basis: Vec<DMatrix<f64>>,
    complement: Vec<DMatrix<f64>>,
    partials: Vec<CPoly>,
    reference: Vec<Complex64>,
    patch: CPoly,
    start: PolySystem,
    start_points: Vec<Vec<Complex64>>,
    ml_degree: usize,
}

fn to_dmatrix(n: usize, data: &[f64]) -> DMatrix<f64> {
    DMatrix::from_row_slice(n, n, data)
}

fn pairing(a: &DMatrix<f64>, b: &DMatrix<Complex64>) -> Complex64 {
    let n = a.nrows();
    let mut t = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            t += b[(j, i)] * a[(i, j)];
        }
    }
    t
}

impl MleSolver {
    pub fn new(space: &MatrixSpace, cfg: &TrackerConfig) -> Result<Self> {
        if space.kind() != Kind::Symmetric {
            return Err(Error::InvalidSpace(format!("expected a symmetric space, got {}", space.kind().name())));
        }
        let n = space.n();
        let m = space.dim();
        let basis: Vec<DMatrix<f64>> = space.basis().iter().map(|b| to_dmatrix(n, &b.to_f64())).collect();
        check_positive_definite(space, &basis, cfg.seed)?;
        let complement = space.orthogonal_complement().basis().iter().map(|b| to_dmatrix(n, &b.to_f64())).collect();

        let det = restricted_determinant(space).to_float()?;
        let partials: Vec<CPoly> = (0..m).map(|j| det.derivative(j)).collect();
        let mut rng = seeded(derive_seed(cfg.seed, 0x6d6c65));
        let reference: Vec<Complex64> = (0..m).map(|_| unit_disk(&mut rng)).collect();
        let pr = combine(&partials, &reference, m);
        let patch_coefs: Vec<Complex64> = (0..m).map(|_| unit_disk(&mut rng)).collect();
        let patch = &CPoly::linear(&patch_coefs) - &CPoly::one(m);
        let start_params = unit_vector((0..m).map(|_| unit_disk(&mut rng)).collect());

        let mut solver = MleSolver {
            space: space.clone(),
            cfg: cfg.clone(),
            basis,
            complement,
            partials,
            reference,
            patch,
            start: PolySystem::new(vec![CPoly::one(1)])?,
            start_points: vec![],
            ml_degree: 0,
        };
        // The generic fiber is found with `det(K) p_r(k)` excluded through
        // an extra variable. Continuation from it needs no exclusion.
        let z = CPoly::var(m + 1, m);
        let rab = unit_scale(&(&CPoly::one(m + 1) - &(&z * &(&pr * &det).extend_vars(m + 1))));
        let fiber = solver.system(&start_params)?;
        let mut eqs: Vec<CPoly> = fiber.equations().iter().map(|e| e.extend_vars(m + 1)).collect();
        eqs.push(rab);
        let excluded = PolySystem::new(eqs)?.with_groups(vec![(0..m).collect(), vec![m]])?.with_exclusion_var(m);
        solver.start_points = solve(&excluded, cfg)?.points.into_iter().map(|mut x| {
            x.truncate(m);
            x
        }).collect();
        solver.start = fiber;
        solver.ml_degree = ml_degree(space, cfg, 3)?.count;
        Ok(solver)
    }

    /// The fiber system in `k` at normalized data pairings `s`.
    fn system(&self, s: &[Complex64]) -> Result<PolySystem> {
        let m = self.partials.len();
        let pr = combine(&self.partials, &self.reference, m);
        let sr: Complex64 = self.reference.iter().zip(s).map(|(r, v)| r * v).sum();
        let mut eqs = vec![self.patch.clone()];
        for j in 0..m.saturating_sub(1) {
            // Scaled by the data-free polynomials only, so every member of
            // the family shares one scaling and continuation stays inside it.
            let scale = self.partials[j].max_coeff_norm().max(pr.max_coeff_norm());
            let e = &self.partials[j].scale(&sr) - &pr.scale(&s[j]);
            eqs.push(e.scale(&Complex64::new(1.0 / scale, 0.0)));
        }
        PolySystem::new(eqs)
    }

    pub fn space(&self) -> &MatrixSpace {
        &self.space
    }

    /// ML-degree from the multidegree of the gradient of the restriction.
    pub fn ml_degree(&self) -> usize {
        self.ml_degree
    }

    /// Number of critical points over the random complex data.
    pub fn generic_count(&self) -> usize {
        self.start_points.len()
    }

    pub fn fit(&self, data: &SampleData) -> Result<MleResult> {
        let n = self.space.n();
        if data.n() != n {
            return Err(Error::DimensionMismatch { expected: n, got: data.n() });
        }
        let s_real = DMatrix::from_fn(n, n, |i, j| data.covariance()[i][j]);
        let s = self.pairings(&s_real);
        let s_scale = s.iter().fold(0.0f64, |m, v| m.max(v.norm()));
        if s_scale == 0.0 {
            return Err(Error::InvalidData("data pairs to zero with the space".into()));
        }
        // Badly scaled variables push critical points towards the base
        // locus in these coordinates. When the space allows it, solve for
        // the data rescaled to unit diagonal and scale back.
        let d: Vec<f64> = (0..n).map(|i| s_real[(i, i)]).map(|v| if v > 0.0 { v.sqrt().recip() } else { 1.0 }).collect();
        let scaled = self.congruence_preserves(&d);
        let dm = DMatrix::from_diagonal(&DVector::from_vec(d.clone()));
        let s_solve = if scaled { self.pairings(&(&dm * &s_real * &dm)) } else { s.clone() };
        let target = self.system(&unit_vector(s_solve.clone()))?;
        let set = solve_from(&target, &self.start, &self.start_points, &self.cfg)?;

        let m = self.space.dim();
        let undo = DMatrix::from_diagonal(&DVector::from_iterator(n, d.iter().map(|&v| Complex64::new(v.recip(), 0.0))));
        let mut points = Vec::with_capacity(set.len());
        for x in &set.points {
            let k = self.basis.iter().zip(&x[..m]).fold(DMatrix::<Complex64>::zeros(n, n), |acc, (b, c)| {
                acc + b.map(|v| Complex64::new(v, 0.0)) * *c
            });
            let Some(kinv) = k.clone().try_inverse() else { continue };
            let t: Vec<Complex64> = self.basis.iter().map(|b| pairing(b, &kinv)).collect();
            let num: Complex64 = t.iter().zip(&s_solve).map(|(a, b)| a.conj() * b).sum();
            let den: f64 = t.iter().map(|a| a.norm_sqr()).sum();
            let mut sigma = kinv * (num / den);
            if scaled {
                sigma = &undo * sigma * &undo;
            }
            points.push(self.critical_point(sigma, &s, s_scale, &s_real));
        }

        let maximizer_index = points
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.log_likelihood.map(|l| (i, l)))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(i, _)| i);
        let maximizer =
            maximizer_index.map(|i| points[i].sigma.iter().map(|r| r.iter().map(|c| c[0]).collect()).collect());
        let mut warnings = Vec::new();
        if points.len() != self.ml_degree {
            warnings.push(format!("{} critical points, ML-degree {}", points.len(), self.ml_degree));
        }
        if maximizer.is_none() {
            warnings.push(Error::NoPositiveDefinite.to_string());
        }
        Ok(MleResult {
            count: points.len(),
            critical_points: points,
            maximizer,
            maximizer_index,
            expected_count: self.ml_degree,
            path_counts: set.counts.clone(),
            warnings,
        })
    }

    fn pairings(&self, s: &DMatrix<f64>) -> Vec<Complex64> {
        let c = s.map(|v| Complex64::new(v, 0.0));
        self.basis.iter().map(|b| pairing(b, &c)).collect()
    }

    /// Whether `K -> D K D` maps the space to itself for `D = diag(d)`.
    fn congruence_preserves(&self, d: &[f64]) -> bool {
        let n = self.space.n();
        let m = self.basis.len();
        let dm = DMatrix::from_diagonal(&DVector::from_column_slice(d));
        let span = DMatrix::from_fn(n * n, m, |r, j| self.basis[j][(r / n, r % n)]);
        let svd = span.clone().svd(true, true);
        self.basis.iter().all(|b| {
            let img = &dm * b * &dm;
            let v = DVector::from_fn(n * n, |r, _| img[(r / n, r % n)]);
            match svd.solve(&v, 1e-12) {
                Ok(c) => (&span * c - &v).norm() <= 1e-10 * v.norm(),
                Err(_) => false,
            }
        })
    }

    fn critical_point(
        &self,
        sigma: DMatrix<Complex64>,
        s: &[Complex64],
        s_scale: f64,
        s_real: &DMatrix<f64>,
    ) -> CriticalPoint {
        let orth = self
            .basis
            .iter()
            .zip(s)
            .map(|(b, sj)| (pairing(b, &sigma) - sj).norm())
            .fold(0.0f64, f64::max)
            / s_scale;
        let membership = match sigma.clone().try_inverse() {
            Some(inv) => {
                let size = inv.iter().fold(0.0f64, |m, v| m.max(v.norm()));
                self.complement.iter().map(|c| pairing(c, &inv).norm()).fold(0.0f64, f64::max) / size
            }
            None => f64::INFINITY,
        };
        let size = sigma.iter().fold(0.0f64, |m, v| m.max(v.norm()));
        let real = sigma.iter().all(|v| v.im.abs() <= REAL_TOL * size.max(1.0));
        let mut log_likelihood = None;
        let mut pd = false;
        if real {
            let re = sigma.map(|v| v.re);
            let sym = (&re + re.transpose()) * 0.5;
            let eig = SymmetricEigen::new(sym.clone());
            pd = eig.eigenvalues.iter().all(|&e| e > PD_TOL);
            if pd {
                let logdet: f64 = eig.eigenvalues.iter().map(|e| e.ln()).sum();
                if let Some(inv) = sym.try_inverse() {
                    log_likelihood = Some(-logdet - (s_real * inv).trace());
                }
            }
        }
        CriticalPoint {
            sigma: (0..sigma.nrows()).map(|i| (0..sigma.ncols()).map(|j| [sigma[(i, j)].re, sigma[(i, j)].im]).collect()).collect(),
            orthogonality_residual: orth,
            membership_residual: membership,
            real_positive_definite: pd,
            log_likelihood,
        }
    }
}

/// Fits `data` on `space` from scratch; see [`MleSolver`] for repeated fits.
pub fn mle_fit(space: &MatrixSpace, data: &SampleData, cfg: &TrackerConfig) -> Result<MleResult> {
    MleSolver::new(space, cfg)?.fit(data)
}

fn combine(polys: &[CPoly], weights: &[Complex64], nv: usize) -> CPoly {
    polys.iter().zip(weights).fold(CPoly::zero(nv), |acc, (p, w)| &acc + &p.scale(w))
}

fn unit_vector(v: Vec<Complex64>) -> Vec<Complex64> {
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|c| c / norm).collect()
}

fn is_positive_definite(m: &DMatrix<f64>) -> bool {
    SymmetricEigen::new(m.clone()).eigenvalues.iter().all(|&e| e > PD_TOL)
}

fn check_positive_definite(space: &MatrixSpace, basis: &[DMatrix<f64>], seed: u64) -> Result<()> {
    let n = space.n();
    if space.contains(&crate::matspace::QMatrix::identity(n)) {
        return Ok(());
    }
    let mut rng = seeded(derive_seed(seed, 0x7064));
    for _ in 0..PD_DRAWS {
        let m = basis.iter().fold(DMatrix::zeros(n, n), |acc, b| acc + b * rng.random_range(-1.0..1.0));
        if is_positive_definite(&m) {
            return Ok(());
        }
    }
    Err(Error::InvalidSpace(format!("found no positive definite matrix in {}", space.label())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matspace::Graph;

    #[test]
    fn covariance_is_the_sample_average() {
        let d = SampleData::from_samples(vec![vec![1.0, 2.0], vec![-1.0, 0.0]]).unwrap();
        assert_eq!(d.covariance(), &[vec![1.0, 1.0], vec![1.0, 2.0]]);
        assert!(SampleData::from_samples(vec![vec![1.0], vec![1.0, 2.0]]).is_err());
        assert!(SampleData::from_covariance(vec![vec![1.0, 2.0], vec![2.0, 1.0]]).is_err());
    }

    #[test]
    fn saturated_model_returns_the_data() {
        let space = MatrixSpace::full(Kind::Symmetric, 3);
        let data = SampleData::random(3, 8, 5).unwrap();
        let r = mle_fit(&space, &data, &TrackerConfig::default()).unwrap();
        assert_eq!((r.count, r.expected_count), (1, 1));
        let m = r.maximizer.unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((m[i][j] - data.covariance()[i][j]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn independence_model_keeps_the_diagonal() {
        let space = MatrixSpace::from_graphical_model(&Graph::empty(3)).unwrap();
        let data = SampleData::random(3, 6, 9).unwrap();
        let r = mle_fit(&space, &data, &TrackerConfig::default()).unwrap();
        assert_eq!(r.count, 1);
        let m = r.maximizer.unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { data.covariance()[i][i] } else { 0.0 };
                assert!((m[i][j] - want).abs() < 1e-9, "{m:?}");
            }
        }
    }

    #[test]
    fn rejects_non_symmetric_spaces() {
        let space = MatrixSpace::full(Kind::General, 2);
        assert!(matches!(MleSolver::new(&space, &TrackerConfig::default()), Err(Error::InvalidSpace(_))));
    }
}
