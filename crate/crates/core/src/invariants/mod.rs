//! Invariants read off a multidegree: Euler characteristics of
//! determinantal hypersurfaces and their complements, degrees of generic
//! linear concentration models, quadric counts, closed forms for cycle
//! models, and maximum likelihood fitting.

mod mle;

pub use mle::{mle_fit, CriticalPoint, MleResult, MleSolver, SampleData};

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Pow};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matspace::{Kind, MatrixSpace};
use crate::multidegree::{build_map, mu_system, multidegree, MapTag, MultidegreeSequence};
use crate::rng::{any_small_rational, derive_seed, seeded};
use crate::tracker::{count_isolated_with, start_count, IsolatedCount, TrackerConfig};

/// Euler characteristics of `X = V(det) ∩ P(L)` and of its complement,
/// with the sequence they came from.
#[derive(Clone, Debug, Serialize)]
pub struct EulerData {
    pub sequence: MultidegreeSequence,
    pub complement: i64,
    pub hypersurface: i64,
}

/// Computes the multidegree of the gradient of the restricted determinant
/// and both Euler characteristics from it.
pub fn euler_characteristics(space: &MatrixSpace, cfg: &TrackerConfig, repeats: usize) -> Result<EulerData> {
    let spec = build_map(space, MapTag::GradientOfRestriction)?;
    let sequence = multidegree(&spec, cfg, repeats)?;
    let complement = sequence.alternating_sum();
    let hypersurface = (sequence.dim() as i64 + 1) - complement;
    Ok(EulerData { sequence, complement, hypersurface })
}

/// `chi(P(L) \ X)` as the alternating sum of the multidegree.
pub fn euler_complement(space: &MatrixSpace, cfg: &TrackerConfig, repeats: usize) -> Result<i64> {
    Ok(euler_characteristics(space, cfg, repeats)?.complement)
}

/// `chi(X) = (D + 1) - chi(P(L) \ X)`.
pub fn euler_hypersurface(space: &MatrixSpace, cfg: &TrackerConfig, repeats: usize) -> Result<i64> {
    Ok(euler_characteristics(space, cfg, repeats)?.hypersurface)
}

/// Euler characteristic of a smooth degree `d` hypersurface in `P^n`,
/// `(n + 1) - (1 - (1 - d)^(n + 1)) / d`.
pub fn smooth_hypersurface_euler(n: u32, d: u32) -> Result<i64> {
    if d == 0 {
        return Err(Error::Formula("degree must be positive".into()));
    }
    let d = i128::from(d);
    let num = 1 - (1 - d).pow(n + 1);
    Ok((i128::from(n) + 1 - num / d) as i64)
}

/// Multidegree of the gradient graph of a smooth degree `d` hypersurface
/// in `P^D`: `mu_i = (d - 1)^i`.
pub fn smooth_multidegree(dim: usize, d: u32) -> Vec<u64> {
    (0..=dim as u32).map(|i| u64::from(d.saturating_sub(1)).pow(i)).collect()
}

/// How far the last entry falls short of the smooth value `(d - 1)^D`.
/// For a hypersurface with isolated singularities this is the sum of
/// their Milnor numbers, and the other entries match the smooth values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MilnorCheck {
    pub deficit: i64,
    pub lower_entries_smooth: bool,
}

pub fn milnor_check(seq: &MultidegreeSequence, degree: u32) -> MilnorCheck {
    let smooth = smooth_multidegree(seq.dim(), degree);
    let e = seq.entries();
    let d = e.len() - 1;
    MilnorCheck { deficit: smooth[d] as i64 - e[d] as i64, lower_entries_smooth: e[..d] == smooth[..d] }
}

/// Per-seed path budgets for `phi`.
pub const PHI_BUDGET: u128 = 3_000;
pub const PHI_SLOW_BUDGET: u128 = 30_000;
const PHI_MAX_N: usize = 4;

/// `phi(n, a)`: the model degree of a random symmetric space of
/// codimension `a`, counted under three seeds derived from `cfg.seed`.
/// The space itself is drawn from a seed derived from `cfg.seed` too.
pub fn phi(n: usize, a: usize, cfg: &TrackerConfig, slow: bool) -> Result<IsolatedCount> {
    if !(2..=PHI_MAX_N).contains(&n) {
        return Err(Error::InvalidConfig(format!("phi is computed for 2 <= n <= {PHI_MAX_N}, got {n}")));
    }
    let ambient = Kind::Symmetric.ambient_dim(n);
    if a >= ambient {
        return Err(Error::IndexOutOfRange { index: a, max: ambient - 1 });
    }
    let space = MatrixSpace::random(Kind::Symmetric, n, ambient - a, derive_seed(cfg.seed, 0x7068_69))?;
    model_degree_within(&space, cfg, if slow { PHI_SLOW_BUDGET } else { PHI_BUDGET })
}

fn model_degree_within(space: &MatrixSpace, cfg: &TrackerConfig, budget: u128) -> Result<IsolatedCount> {
    let spec = build_map(space, MapTag::RestrictedGradient)?;
    let d = spec.dim();
    let paths = start_count(&mu_system(&spec, d, cfg.seed)?);
    if paths > budget {
        return Err(Error::PathBudget { paths, budget });
    }
    count_isolated_with(|s| mu_system(&spec, d, s), cfg, 3)
}

const QUADRIC_MAX_N: usize = 3;
const POINT_REDRAWS: usize = 10;

/// Number of quadrics in `n` variables through `npoints` random points and
/// tangent to `n(n+1)/2 - 1 - npoints` general hyperplanes, as the model
/// degree of the space of quadrics through the points.
pub fn quadric_tangency_count(n: usize, npoints: usize, cfg: &TrackerConfig) -> Result<IsolatedCount> {
    if !(2..=QUADRIC_MAX_N).contains(&n) {
        return Err(Error::InvalidConfig(format!("quadric counts are computed for 2 <= n <= {QUADRIC_MAX_N}")));
    }
    let top = Kind::Symmetric.ambient_dim(n) - 1;
    if npoints > top {
        return Err(Error::IndexOutOfRange { index: npoints, max: top });
    }
    let mut rng = seeded(derive_seed(cfg.seed, 0x7175_6164));
    let mut last = None;
    for _ in 0..POINT_REDRAWS {
        let points: Vec<Vec<_>> = (0..npoints).map(|_| (0..n).map(|_| any_small_rational(&mut rng, 9)).collect()).collect();
        match MatrixSpace::quadrics_through_points(n, &points) {
            Ok(space) => match model_degree_within(&space, cfg, PHI_SLOW_BUDGET) {
                Err(e @ Error::DegenerateSpace(_)) => last = Some(e),
                other => return other,
            },
            Err(e @ Error::NotGeneric(_)) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap_or_else(|| Error::NotGeneric("no usable point configuration".into())))
}

/// Degree of the Gaussian model of the `n`-cycle,
/// `(n + 2)/4 * C(2n, n) - 3 * 2^(2n - 3)`.
pub fn cycle_model_degree_formula(n: u32) -> Result<BigInt> {
    if n < 3 {
        return Err(Error::Formula(format!("cycle length {n} below 3")));
    }
    let central = binomial(BigInt::from(2 * n), BigInt::from(n));
    let v = BigRational::new(BigInt::from(n + 2), BigInt::from(4)) * BigRational::from_integer(central)
        - BigRational::from_integer(BigInt::from(3) * Pow::pow(BigInt::from(2), 2 * n - 3));
    if !v.is_integer() {
        return Err(Error::Formula(format!("non-integral value {v} at n = {n}")));
    }
    Ok(v.to_integer())
}

/// Conjectured ML-degree of the `n`-cycle model, `(n - 3) 2^(n - 2) + 1`.
pub fn cycle_ml_degree_conjecture(n: u32) -> Result<BigInt> {
    if n < 3 {
        return Err(Error::Formula(format!("cycle length {n} below 3")));
    }
    Ok(BigInt::from(n - 3) * Pow::pow(BigInt::from(2), n - 2) + BigInt::one())
}

/// Signed coefficients `(-1)^i` times the entries, for display.
pub fn signed_terms(seq: &MultidegreeSequence) -> Vec<i64> {
    seq.entries().iter().enumerate().map(|(i, &m)| if i % 2 == 0 { m as i64 } else { -(m as i64) }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matspace::Graph;

    #[test]
    fn smooth_formula_small_cases() {
        // Lines, conics and smooth cubic curves in the plane.
        assert_eq!(smooth_hypersurface_euler(2, 1).unwrap(), 2);
        assert_eq!(smooth_hypersurface_euler(2, 2).unwrap(), 2);
        assert_eq!(smooth_hypersurface_euler(2, 3).unwrap(), 0);
        // A smooth quadric surface is P^1 x P^1.
        assert_eq!(smooth_hypersurface_euler(3, 2).unwrap(), 4);
        // The alternating sum of the smooth multidegree gives the complement.
        for (n, d) in [(2u32, 3u32), (3, 4), (4, 2)] {
            let alt: i64 = smooth_multidegree(n as usize, d)
                .iter()
                .enumerate()
                .map(|(i, &m)| if i % 2 == 0 { m as i64 } else { -(m as i64) })
                .sum();
            assert_eq!(smooth_hypersurface_euler(n, d).unwrap(), n as i64 + 1 - alt);
        }
    }

    #[test]
    fn cycle_formulas() {
        let model: Vec<BigInt> = (3..=6).map(|n| cycle_model_degree_formula(n).unwrap()).collect();
        assert_eq!(model, [1, 9, 57, 312].map(BigInt::from).to_vec());
        let ml: Vec<BigInt> = (3..=6).map(|n| cycle_ml_degree_conjecture(n).unwrap()).collect();
        assert_eq!(ml, [1, 5, 17, 49].map(BigInt::from).to_vec());
        assert!(cycle_model_degree_formula(2).is_err());
        // Integral for every n in a long range.
        for n in 3..60 {
            cycle_model_degree_formula(n).unwrap();
        }
    }

    #[test]
    fn two_by_two_general_euler() {
        let e = euler_characteristics(&MatrixSpace::full(Kind::General, 2), &TrackerConfig::default(), 3).unwrap();
        assert_eq!(e.sequence.entries(), &[1, 1, 1, 1]);
        assert_eq!(e.complement, 0);
        assert_eq!(e.hypersurface, 4);
    }

    #[test]
    fn c4_arrangement_nodes() {
        let s = MatrixSpace::from_graph_incidence(&Graph::cycle(4)).unwrap();
        let e = euler_characteristics(&s, &TrackerConfig::default(), 3).unwrap();
        assert_eq!(e.complement, 1);
        assert_eq!(e.hypersurface, 2);
        // Four lines in general position meet in six nodes.
        let m = milnor_check(&e.sequence, 4);
        assert_eq!(m, MilnorCheck { deficit: 6, lower_entries_smooth: true });
    }

    #[test]
    fn phi_guards() {
        let cfg = TrackerConfig::default();
        assert!(matches!(phi(5, 0, &cfg, false), Err(Error::InvalidConfig(_))));
        assert!(matches!(phi(3, 6, &cfg, false), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(phi(4, 0, &cfg, false), Err(Error::PathBudget { .. })));
        assert!(quadric_tangency_count(4, 3, &cfg).is_err());
    }

    #[test]
    fn pencil_of_binary_quadrics() {
        let c = quadric_tangency_count(2, 2, &TrackerConfig::default()).unwrap();
        assert_eq!(c.count, 1);
    }
}
