//! Homotopy continuation for square polynomial systems.
//!
//! [`solve`] tracks one path per start solution of a linear-product start
//! system `G` along `H(x, t) = (1 - t) gamma G(x) + t F(x)` with a random
//! unit complex `gamma`, certifies each endpoint with Newton's method, and
//! deduplicates. [`count_isolated`] repeats this across derived seeds and
//! refuses to answer unless every run agrees.

mod config;
mod lu;
mod newton;
mod path;
mod start;
mod system;

use std::io::Write;
use std::path::Path as FsPath;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

pub use config::TrackerConfig;
pub use newton::{newton_refine, Refined, Regularity, CONDITION_LIMIT};
pub use path::{PathRecord, PathStatus};
pub use start::start_count;
pub use system::PolySystem;

use crate::error::{Error, Result};
use crate::poly::CPoly;
use crate::rng::{derive_seed, seeded, unit_circle};
use path::{Homotopy, Workspace};
use start::StartSystem;
use system::Compiled;

/// Path outcome tallies.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PathCounts {
    pub tracked: usize,
    pub converged: usize,
    pub at_infinity: usize,
    pub excluded: usize,
    pub failed: usize,
    pub suspect: usize,
    /// Converged endpoints that coincided with an earlier one.
    pub duplicates: usize,
    pub retracked: usize,
}

/// Certified, deduplicated endpoints of one homotopy run.
#[derive(Clone, Debug)]
pub struct SolutionSet {
    pub points: Vec<Vec<Complex64>>,
    pub residuals: Vec<f64>,
    pub flags: Vec<Regularity>,
    pub counts: PathCounts,
    pub seed: u64,
    pub paths: Vec<PathRecord>,
}

impl SolutionSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Fraction of tracked paths that escaped through the exclusion variable.
    pub fn excluded_fraction(&self) -> f64 {
        if self.counts.tracked == 0 {
            0.0
        } else {
            self.counts.excluded as f64 / self.counts.tracked as f64
        }
    }

    /// Writes one CSV line per path: `index,status,steps,t_end,residual`.
    pub fn write_path_log(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "index,status,steps,t_end,residual")?;
        for p in &self.paths {
            writeln!(out, "{},{},{},{:.17e},{:.6e}", p.index, p.status.as_str(), p.steps, p.t_end, p.residual)?;
        }
        Ok(())
    }

    pub fn write_path_log_file(&self, path: &FsPath) -> std::io::Result<()> {
        let f = std::fs::File::create(path)?;
        self.write_path_log(std::io::BufWriter::new(f))
    }
}

const REFINE_ITERS: usize = 8;
const BASE_LOCUS_RELATIVE: f64 = 1e-6;

/// Whether `h` vanishes at `x` relative to the size of its terms there.
/// Far out in the chart a base-locus point can have `|h|` of order one
/// while each term is huge, so `z = 1/h` never visibly diverges.
fn on_base_locus(h: &CPoly, x: &[Complex64]) -> bool {
    let abs_x: Vec<Complex64> = x.iter().map(|c| Complex64::new(c.norm(), 0.0)).collect();
    let size = h.map_coeffs(|c| Complex64::new(c.norm(), 0.0)).evaluate(&abs_x);
    match (h.evaluate(x), size) {
        (Ok(v), Ok(size)) => size.re > 0.0 && v.norm() < BASE_LOCUS_RELATIVE * size.re,
        _ => false,
    }
}

fn track_one(
    hom: &Homotopy<'_>,
    target: &Compiled,
    start: &StartSystem,
    idx: u128,
    cfg: &TrackerConfig,
    exclusion_var: Option<usize>,
    base: Option<&CPoly>,
) -> PathRecord {
    let mut ws = Workspace::new(target);
    let Some(x0) = start.solution(idx) else {
        return PathRecord { index: idx, status: PathStatus::Failed, steps: 0, t_end: 0.0, residual: f64::NAN, point: vec![] };
    };
    let end = hom.track(x0, cfg, exclusion_var, &mut ws);
    let mut rec =
        PathRecord { index: idx, status: end.status, steps: end.steps, t_end: end.t, residual: f64::NAN, point: end.x.clone() };
    if matches!(end.status, PathStatus::Converged | PathStatus::Suspect) {
        let refined = newton::refine_compiled(target, &end.x, REFINE_ITERS, cfg.newton_tol);
        match refined {
            // Near the base locus the other equations nearly vanish too, so
            // Newton can settle at a huge exclusion coordinate; such a point
            // sits where `h` is below `1 / divergence_bound`.
            Ok(r) if r.regularity == Regularity::Regular
                && exclusion_var.is_some_and(|v| r.point[v].norm() > cfg.divergence_bound) =>
            {
                rec.status = PathStatus::Excluded;
                rec.residual = r.residual;
            }
            Ok(r) if r.regularity == Regularity::Regular => {
                rec.status = PathStatus::Converged;
                rec.residual = r.residual;
                rec.point = r.point;
            }
            other => {
                if let Ok(r) = other {
                    rec.residual = r.residual;
                }
                rec.status = if base.is_some_and(|h| on_base_locus(h, &end.x)) {
                    PathStatus::Excluded
                } else {
                    path::classify_uncertified(&end, exclusion_var)
                };
            }
        }
    }
    rec
}

struct Prepared<'a> {
    sys: &'a PolySystem,
    target: Compiled,
    start: StartSystem,
    gamma: Complex64,
}

fn prepare<'a>(sys: &'a PolySystem, cfg: &TrackerConfig) -> Result<Prepared<'a>> {
    cfg.validate()?;
    start::check_guard(start_count(sys), cfg.bezout_limit)?;
    let mut rng = seeded(cfg.seed);
    let gamma = unit_circle(&mut rng);
    let start = StartSystem::new(sys, derive_seed(cfg.seed, 0x5747));
    Ok(Prepared { sys, target: Compiled::new(sys), start, gamma })
}

fn prepare_from<'a>(
    target: &'a PolySystem,
    start: &PolySystem,
    points: &[Vec<Complex64>],
    cfg: &TrackerConfig,
) -> Result<Prepared<'a>> {
    cfg.validate()?;
    let n = target.nvars();
    if start.nvars() != n {
        return Err(Error::DimensionMismatch { expected: n, got: start.nvars() });
    }
    if let Some(p) = points.iter().find(|p| p.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, got: p.len() });
    }
    let gamma = unit_circle(&mut seeded(cfg.seed));
    let start = StartSystem::explicit(start, points.to_vec());
    Ok(Prepared { sys: target, target: Compiled::new(target), start, gamma })
}

fn run_paths(p: &Prepared<'_>, indices: &[u128], cfg: &TrackerConfig) -> Vec<PathRecord> {
    let hom = Homotopy { target: &p.target, start: &p.start, gamma: p.gamma };
    let ex = p.sys.exclusion_var();
    let base = p.sys.exclusion_factor();
    indices.par_iter().map(|&i| track_one(&hom, &p.target, &p.start, i, cfg, ex, base.as_ref())).collect()
}

fn close(a: &[Complex64], b: &[Complex64], rel: f64) -> bool {
    let na = a.iter().fold(0.0f64, |m, c| m.max(c.norm()));
    let nb = b.iter().fold(0.0f64, |m, c| m.max(c.norm()));
    let d = a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).norm()));
    d <= rel * (1.0 + na.max(nb))
}

fn sort_key(p: &[Complex64]) -> Vec<(i64, i64)> {
    p.iter().map(|c| ((c.re * 1e8).round() as i64, (c.im * 1e8).round() as i64)).collect()
}

/// Groups converged records into clusters of coinciding endpoints, in
/// sorted order. Each cluster lists indices into `records`.
fn clusters(records: &[PathRecord], rel: f64) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> =
        (0..records.len()).filter(|&i| records[i].status == PathStatus::Converged).collect();
    order.sort_by(|&a, &b| sort_key(&records[a].point).cmp(&sort_key(&records[b].point)).then(a.cmp(&b)));
    let mut out: Vec<Vec<usize>> = Vec::new();
    for i in order {
        match out.iter_mut().find(|c| close(&records[c[0]].point, &records[i].point, rel)) {
            Some(c) => c.push(i),
            None => out.push(vec![i]),
        }
    }
    out
}

/// Tracks every path of the start system and returns the certified
/// solutions, sorted by their rounded coordinates.
///
/// Paths whose endpoints collide, and paths that failed, are tracked once
/// more with a tenth of the maximum step, which usually separates a path
/// that jumped from the one it landed on.
pub fn solve(sys: &PolySystem, cfg: &TrackerConfig) -> Result<SolutionSet> {
    check(solve_unchecked(sys, cfg)?, cfg)
}

/// [`solve`] without the failure and suspect checks, for inspecting runs
/// that would otherwise be rejected.
pub fn solve_unchecked(sys: &PolySystem, cfg: &TrackerConfig) -> Result<SolutionSet> {
    finish(&prepare(sys, cfg)?, cfg)
}

/// Parameter continuation: tracks the known solutions `points` of `start`
/// to `target`, which should be the same family of equations at other
/// coefficients. As in [`solve`], suspect endpoints and too many failures
/// are errors.
pub fn solve_from(
    target: &PolySystem,
    start: &PolySystem,
    points: &[Vec<Complex64>],
    cfg: &TrackerConfig,
) -> Result<SolutionSet> {
    let set = finish(&prepare_from(target, start, points, cfg)?, cfg)?;
    check(set, cfg)
}

fn check(set: SolutionSet, cfg: &TrackerConfig) -> Result<SolutionSet> {
    if set.counts.failed as f64 > cfg.max_failure_fraction * set.counts.tracked as f64 {
        return Err(Error::TrackingFailure { failed: set.counts.failed, tracked: set.counts.tracked });
    }
    if set.counts.suspect > 0 {
        return Err(Error::SuspectSolutions(set.counts.suspect));
    }
    Ok(set)
}

fn finish(prep: &Prepared<'_>, cfg: &TrackerConfig) -> Result<SolutionSet> {
    let total = prep.start.count();
    let indices: Vec<u128> = (0..total).collect();
    let mut records = run_paths(prep, &indices, cfg);

    let mut retracked = 0;
    // Paths that collided or gave up get one more pass with smaller steps.
    let mut dups: Vec<usize> =
        clusters(&records, cfg.dedup_distance).into_iter().filter(|c| c.len() > 1).flatten().collect();
    dups.extend(records.iter().enumerate().filter(|(_, r)| r.status == PathStatus::Failed).map(|(k, _)| k));
    dups.sort_unstable();
    dups.dedup();
    if !dups.is_empty() {
        let careful = TrackerConfig {
            max_step: cfg.max_step / 10.0,
            initial_step: cfg.initial_step / 10.0,
            min_step: cfg.min_step.min(cfg.initial_step / 20.0),
            ..cfg.clone()
        };
        let idx: Vec<u128> = dups.iter().map(|&i| records[i].index).collect();
        for (k, r) in dups.iter().zip(run_paths(prep, &idx, &careful)) {
            records[*k] = r;
        }
        retracked = dups.len();
    }

    let mut counts = PathCounts { tracked: records.len(), retracked, ..Default::default() };
    for r in &records {
        match r.status {
            PathStatus::Converged => counts.converged += 1,
            PathStatus::AtInfinity => counts.at_infinity += 1,
            PathStatus::Excluded => counts.excluded += 1,
            PathStatus::Suspect => counts.suspect += 1,
            PathStatus::Failed => counts.failed += 1,
        }
    }
    let groups = clusters(&records, cfg.dedup_distance);
    counts.duplicates = groups.iter().map(|c| c.len() - 1).sum();
    let mut set = SolutionSet {
        points: Vec::with_capacity(groups.len()),
        residuals: Vec::with_capacity(groups.len()),
        flags: Vec::with_capacity(groups.len()),
        counts,
        seed: cfg.seed,
        paths: Vec::new(),
    };
    for c in &groups {
        let r = &records[c[0]];
        set.points.push(r.point.clone());
        set.residuals.push(r.residual);
        set.flags.push(Regularity::Regular);
    }
    set.paths = records;
    Ok(set)
}

/// Agreed solution count across seeds.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IsolatedCount {
    pub count: usize,
    pub seeds: Vec<u64>,
    pub paths_tracked: usize,
    /// Largest fraction of paths lost to the exclusion variable in any run.
    pub excluded_fraction: f64,
}

/// The `k`-th seed `count_isolated` uses for master seed `master`.
pub fn run_seeds(master: u64, repeats: usize) -> Vec<u64> {
    (0..repeats as u64).map(|k| derive_seed(master, k)).collect()
}

/// Solves `sys` under `repeats` seeds derived from `cfg.seed` and returns
/// the common number of solutions.
pub fn count_isolated(sys: &PolySystem, cfg: &TrackerConfig, repeats: usize) -> Result<IsolatedCount> {
    count_isolated_with(|_| Ok(sys.clone()), cfg, repeats)
}

/// Like [`count_isolated`], but the system itself is rebuilt from each
/// derived seed, so random slices vary together with the start system.
pub fn count_isolated_with<F>(build: F, cfg: &TrackerConfig, repeats: usize) -> Result<IsolatedCount>
where
    F: Fn(u64) -> Result<PolySystem>,
{
    if repeats == 0 {
        return Err(Error::InvalidConfig("repeats must be at least 1".into()));
    }
    let seeds = run_seeds(cfg.seed, repeats);
    let mut counts = Vec::with_capacity(repeats);
    let mut paths = 0;
    let mut excluded: f64 = 0.0;
    for &s in &seeds {
        let sys = build(s)?;
        let set = solve(&sys, &cfg.with_seed(s))?;
        counts.push(set.len());
        paths += set.counts.tracked;
        excluded = excluded.max(set.excluded_fraction());
    }
    if counts.iter().any(|&c| c != counts[0]) {
        return Err(Error::SeedDisagreement { counts, seeds });
    }
    Ok(IsolatedCount { count: counts[0], seeds, paths_tracked: paths, excluded_fraction: excluded })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn sys(eqs: &[&str], n: usize) -> PolySystem {
        PolySystem::new(eqs.iter().map(|e| parse_poly(e, n).unwrap().to_float().unwrap()).collect()).unwrap()
    }

    #[test]
    fn square_roots_of_one() {
        let set = solve(&sys(&["x0^2 + -1"], 1), &TrackerConfig::default()).unwrap();
        assert_eq!(set.len(), 2);
        let mut re: Vec<f64> = set.points.iter().map(|p| p[0].re).collect();
        re.sort_by(f64::total_cmp);
        assert!((re[0] + 1.0).abs() < 1e-12 && (re[1] - 1.0).abs() < 1e-12);
        assert!(set.residuals.iter().all(|&r| r < 1e-10));
    }

    #[test]
    fn circle_meets_diagonal() {
        let set = solve(&sys(&["x0^2 + x1^2 + -2", "x0 + -1*x1"], 2), &TrackerConfig::default()).unwrap();
        assert_eq!(set.len(), 2);
        for p in &set.points {
            assert!((p[0] - p[1]).norm() < 1e-12);
            assert!((p[0].re.abs() - 1.0).abs() < 1e-12 && p[0].im.abs() < 1e-12);
        }
        // One root at infinity is impossible here; both paths converge.
        assert_eq!(set.counts.converged, 2);
    }

    #[test]
    fn cubic_count_is_stable() {
        let c = count_isolated(&sys(&["2*x0^3 + -3*x0 + 5"], 1), &TrackerConfig::default(), 3).unwrap();
        assert_eq!(c.count, 3);
        assert_eq!(c.seeds.len(), 3);
    }

    #[test]
    fn deficient_system_loses_paths_to_infinity() {
        // x0*x1 = 1, x0 = 2: one solution, Bezout 2.
        let set = solve(&sys(&["x0*x1 + -1", "x0 + -2"], 2), &TrackerConfig::default()).unwrap();
        assert_eq!(set.len(), 1);
        assert_eq!(set.counts.at_infinity, 1);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let s = sys(&["x0^2 + 3*x0*x1 + -1", "x1^3 + x0 + -2"], 2);
        let a = solve(&s, &TrackerConfig::default()).unwrap();
        let b = solve(&s, &TrackerConfig::default()).unwrap();
        assert_eq!(a.points, b.points);
        assert_eq!(a.residuals.iter().map(|r| r.to_bits()).collect::<Vec<_>>(),
                   b.residuals.iter().map(|r| r.to_bits()).collect::<Vec<_>>());
    }

    #[test]
    fn large_exclusion_coordinate_is_a_solution() {
        // x0^2 = 1/4 with h = 1e-6 x0 gives z = +-2e6 at both roots, far
        // out but finite; the x0 = 0 branch of the exclusion is empty.
        let s = sys(&["x0^2 + -1/4", "1 + -1/1000000*x0*x1"], 2).with_groups(vec![vec![0], vec![1]]).unwrap().with_exclusion_var(1);
        let set = solve(&s, &TrackerConfig::default()).unwrap();
        assert_eq!(set.len(), 2);
        for p in &set.points {
            assert!((p[1].norm() - 2e6).abs() < 1e-3);
        }
    }

    #[test]
    fn bezout_guard() {
        let s = sys(&["x0^20 + 1", "x1^20 + 1", "x2^20 + 1", "x3^20 + 1", "x4^20 + 1"], 5);
        assert!(matches!(solve(&s, &TrackerConfig::default()), Err(Error::BezoutGuard { .. })));
    }

    #[test]
    fn path_log_is_csv() {
        let set = solve(&sys(&["x0^2 + -1"], 1), &TrackerConfig::default()).unwrap();
        let mut buf = Vec::new();
        set.write_path_log(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "index,status,steps,t_end,residual");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("0,converged,"));
    }

    #[test]
    fn parameter_continuation_moves_known_roots() {
        let start = sys(&["x0^2 + -1", "x1 + -1*x0 + -1"], 2);
        let target = sys(&["x0^2 + -4", "x1 + -1*x0 + 3"], 2);
        let pts = vec![
            vec![Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)],
            vec![Complex64::new(-1.0, 0.0), Complex64::new(0.0, 0.0)],
        ];
        let set = solve_from(&target, &start, &pts, &TrackerConfig::default()).unwrap();
        assert_eq!(set.counts.tracked, 2);
        let mut got: Vec<(f64, f64)> = set.points.iter().map(|p| (p[0].re, p[1].re)).collect();
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((got[0].0 + 2.0).abs() < 1e-12 && (got[0].1 + 5.0).abs() < 1e-12);
        assert!((got[1].0 - 2.0).abs() < 1e-12 && (got[1].1 + 1.0).abs() < 1e-12);
    }
}
