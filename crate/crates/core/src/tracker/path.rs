use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::config::TrackerConfig;
use super::lu;
use super::start::StartSystem;
use super::system::Compiled;

/// How a path ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathStatus {
    /// Reached `t = 1` at a regular, certified solution.
    Converged,
    /// Left every bounded region as `t -> 1`.
    AtInfinity,
    /// Diverged in the exclusion variable alone: a base-locus point.
    Excluded,
    /// Ended near a finite point that did not certify as regular.
    Suspect,
    /// Step size collapsed away from `t = 1`, or the step budget ran out.
    Failed,
}

impl PathStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            PathStatus::Converged => "converged",
            PathStatus::AtInfinity => "at_infinity",
            PathStatus::Excluded => "excluded",
            PathStatus::Suspect => "suspect",
            PathStatus::Failed => "failed",
        }
    }
}

/// Outcome of one tracked path.
#[derive(Clone, Debug)]
pub struct PathRecord {
    pub index: u128,
    pub status: PathStatus,
    pub steps: usize,
    pub t_end: f64,
    pub residual: f64,
    pub point: Vec<Complex64>,
}

/// Per-path scratch space for homotopy evaluation and linear solves.
pub(crate) struct Workspace {
    n: usize,
    pow: Vec<Complex64>,
    f: Vec<Complex64>,
    jf: Vec<Complex64>,
    g: Vec<Complex64>,
    jg: Vec<Complex64>,
    vals: Vec<Complex64>,
    h: Vec<Complex64>,
    jh: Vec<Complex64>,
    ht: Vec<Complex64>,
    perm: Vec<usize>,
    scratch: Vec<Complex64>,
}

impl Workspace {
    pub fn new(target: &Compiled) -> Self {
        let n = target.n();
        let z = Complex64::new(0.0, 0.0);
        Workspace {
            n,
            pow: vec![z; target.pow_len()],
            f: vec![z; n],
            jf: vec![z; n * n],
            g: vec![z; n],
            jg: vec![z; n * n],
            vals: Vec::new(),
            h: vec![z; n],
            jh: vec![z; n * n],
            ht: vec![z; n],
            perm: vec![0; n],
            scratch: vec![z; n],
        }
    }
}

pub(crate) struct Homotopy<'a> {
    pub target: &'a Compiled,
    pub start: &'a StartSystem,
    pub gamma: Complex64,
}

fn inf_norm(v: &[Complex64]) -> f64 {
    v.iter().fold(0.0, |m, c| m.max(c.norm()))
}

impl Homotopy<'_> {
    /// `H = (1-t) gamma G + t F`, its Jacobian in x, and `dH/dt`.
    fn eval(&self, x: &[Complex64], t: f64, ws: &mut Workspace) {
        self.target.eval(x, &mut ws.pow, &mut ws.f, Some(&mut ws.jf));
        self.start.eval(x, &mut ws.g, &mut ws.jg, &mut ws.vals);
        let a = self.gamma * (1.0 - t);
        for i in 0..ws.n {
            ws.h[i] = a * ws.g[i] + ws.f[i] * t;
            ws.ht[i] = ws.f[i] - self.gamma * ws.g[i];
        }
        for k in 0..ws.n * ws.n {
            ws.jh[k] = a * ws.jg[k] + ws.jf[k] * t;
        }
    }

    /// Newton corrector at fixed `t`. Succeeds when an update falls below the
    /// relative tolerance within the iteration budget while every update
    /// contracts by the configured ratio.
    fn correct(&self, x: &mut [Complex64], t: f64, cfg: &TrackerConfig, ws: &mut Workspace) -> bool {
        let tol = cfg.corrector_tol();
        let mut prev = f64::INFINITY;
        for k in 0..cfg.max_newton_iters {
            self.eval(x, t, ws);
            if !lu::factor(&mut ws.jh, &mut ws.perm, ws.n) {
                return false;
            }
            for i in 0..ws.n {
                ws.h[i] = -ws.h[i];
            }
            lu::solve(&ws.jh, &ws.perm, ws.n, &mut ws.h, &mut ws.scratch);
            let d = inf_norm(&ws.h);
            if !d.is_finite() || (k > 0 && d > cfg.contraction * prev) {
                return false;
            }
            for i in 0..ws.n {
                x[i] += ws.h[i];
            }
            if d <= tol * (1.0 + inf_norm(x)) {
                return true;
            }
            prev = d;
        }
        false
    }

    /// Tangent `dx/dt = -H_x^{-1} H_t` into `dx`.
    fn tangent(&self, x: &[Complex64], t: f64, dx: &mut [Complex64], ws: &mut Workspace) -> bool {
        self.eval(x, t, ws);
        if !lu::factor(&mut ws.jh, &mut ws.perm, ws.n) {
            return false;
        }
        for i in 0..ws.n {
            dx[i] = -ws.ht[i];
        }
        lu::solve(&ws.jh, &ws.perm, ws.n, dx, &mut ws.scratch);
        dx.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    /// Tracks from `t = 0` towards `t = 1`. A `Converged` or `Suspect`
    /// status here is preliminary: the endpoint still has to be certified.
    pub fn track(
        &self,
        start: Vec<Complex64>,
        cfg: &TrackerConfig,
        exclusion_var: Option<usize>,
        ws: &mut Workspace,
    ) -> TrackEnd {
        let n = start.len();
        let mut x = start;
        let mut t = 0.0f64;
        let mut h = cfg.initial_step;
        let mut streak = 0;
        let mut steps = 0;
        let mut dx = vec![Complex64::new(0.0, 0.0); n];
        let mut trial = vec![Complex64::new(0.0, 0.0); n];
        let mut samples: Vec<Sample> = Vec::new();
        let mut recheck_above = 0.0;
        let end = |x, t, steps, status, samples| TrackEnd { x, t, steps, status, samples };
        while t < 1.0 {
            if steps >= cfg.max_steps_per_path {
                return end(x, t, steps, PathStatus::Failed, samples);
            }
            let step = h.min(1.0 - t);
            let t1 = if step >= 1.0 - t { 1.0 } else { t + step };
            let ok = self.tangent(&x, t, &mut dx, ws) && {
                for i in 0..n {
                    trial[i] = x[i] + dx[i] * (t1 - t);
                }
                self.correct(&mut trial, t1, cfg, ws)
            };
            if ok {
                x.copy_from_slice(&trial);
                t = t1;
                steps += 1;
                streak += 1;
                if streak >= 4 {
                    h = (h * 2.0).min(cfg.max_step);
                    streak = 0;
                }
                if let Some(status) = escape_kind(&x, exclusion_var, cfg) {
                    return end(x, t, steps, status, samples);
                }
                let s = 1.0 - t;
                if s < 0.1 && s > 0.0 {
                    samples.push(Sample::new(s, &x, exclusion_var));
                    if s < ENDGAME_ZONE {
                        // A finite solution can have large coordinates too.
                        // If Newton on the target certifies from here, keep
                        // tracking, and look again only once the path has
                        // grown another decade.
                        let size = inf_norm(&x);
                        if size > recheck_above {
                            if let Some(status) = clear_escape(&samples) {
                                if !certifies_from(self.target, &x, cfg) {
                                    return end(x, t, steps, status, samples);
                                }
                                recheck_above = 10.0 * size;
                            }
                        }
                    }
                }
            } else {
                h *= 0.5;
                streak = 0;
                // Inside the endgame zone steps only need to be small
                // relative to the distance left, so escaping paths can run
                // out to the divergence bound.
                let s = 1.0 - t;
                let floor = if s < ENDGAME_ZONE { (ENDGAME_STEP_RATIO * s).max(ENDGAME_FLOOR) } else { cfg.min_step };
                if h < floor {
                    let status = if 1.0 - t < ENDGAME_ZONE { PathStatus::Suspect } else { PathStatus::Failed };
                    return end(x, t, steps, status, samples);
                }
            }
        }
        end(x, t, steps, PathStatus::Converged, samples)
    }
}

/// Newton iterations spent deciding whether an apparent escape is a
/// finite solution with large coordinates.
const ESCAPE_CHECK_ITERS: usize = 8;

fn certifies_from(target: &Compiled, x: &[Complex64], cfg: &TrackerConfig) -> bool {
    super::newton::refine_compiled(target, x, ESCAPE_CHECK_ITERS, cfg.newton_tol)
        .is_ok_and(|r| r.regularity == super::newton::Regularity::Regular)
}

/// A path that stalls closer than this to `t = 1` is examined as a
/// possible singular or escaping endpoint rather than failed outright.
const ENDGAME_ZONE: f64 = 1e-3;
const ENDGAME_STEP_RATIO: f64 = 1e-4;
const ENDGAME_FLOOR: f64 = 1e-15;

/// Where a path stopped.
pub(crate) struct TrackEnd {
    pub x: Vec<Complex64>,
    pub t: f64,
    pub steps: usize,
    pub status: PathStatus,
    pub samples: Vec<Sample>,
}

/// Log-scale snapshot near `t = 1`: `ln s`, and `ln(1 + |.|)` of the
/// ordinary coordinates and of the exclusion variable.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Sample {
    ls: f64,
    main: f64,
    aux: f64,
}

impl Sample {
    fn new(s: f64, x: &[Complex64], exclusion_var: Option<usize>) -> Self {
        let aux = exclusion_var.map_or(0.0, |v| x[v].norm());
        Sample { ls: s.ln(), main: (1.0 + reduced_norm(x, exclusion_var)).ln(), aux: (1.0 + aux).ln() }
    }
}

fn reduced_norm(x: &[Complex64], skip: Option<usize>) -> f64 {
    x.iter().enumerate().filter(|(i, _)| Some(*i) != skip).fold(0.0, |m, (_, c)| m.max(c.norm()))
}

/// Genuine solutions can sit close to the zero set of the exclusion
/// factor, so the exclusion variable gets the square of the bound the
/// ordinary coordinates get.
fn escape_kind(x: &[Complex64], exclusion_var: Option<usize>, cfg: &TrackerConfig) -> Option<PathStatus> {
    if reduced_norm(x, exclusion_var) > cfg.divergence_bound {
        return Some(PathStatus::AtInfinity);
    }
    let aux = exclusion_var.map_or(0.0, |v| x[v].norm());
    (aux > cfg.divergence_bound * cfg.divergence_bound).then_some(PathStatus::Excluded)
}

/// Least-squares slope of `pick` against `ln s` over the final samples,
/// covering at least the last two decades of `s` (or the last four
/// samples if they span more). Negative when the quantity grows as `s -> 0`.
fn growth_slope(samples: &[Sample], pick: impl Fn(&Sample) -> f64) -> Option<f64> {
    let last = samples.last()?.ls;
    let in_window = samples.iter().filter(|s| s.ls < last + std::f64::consts::LN_10 * 2.0).count();
    let window = &samples[samples.len() - in_window.max(4).min(samples.len())..];
    if window.len() < 3 || (window[0].ls - last).abs() < 1.0 {
        return None;
    }
    let m = window.len() as f64;
    let mx = window.iter().map(|s| s.ls).sum::<f64>() / m;
    let my = window.iter().map(&pick).sum::<f64>() / m;
    let sxy: f64 = window.iter().map(|s| (s.ls - mx) * (pick(s) - my)).sum();
    let sxx: f64 = window.iter().map(|s| (s.ls - mx).powi(2)).sum();
    Some(sxy / sxx)
}

/// Slope of `pick` against `ln s` across the shortest tail of samples
/// (at least three) spanning `span` units of `ln s`.
fn local_slope(samples: &[Sample], span: f64, pick: impl Fn(&Sample) -> f64) -> Option<f64> {
    let last = samples.last()?;
    let first = samples.iter().rev().skip(2).find(|s| s.ls - last.ls >= span)?;
    Some((pick(last) - pick(first)) / (last.ls - first.ls))
}

/// Stops a path early once an ordinary coordinate has been growing like a
/// pole for several decades of `s`; waiting for the divergence bound costs
/// many small steps and gains nothing. The exclusion variable gets no such
/// shortcut: genuine solutions close to the zero set of the exclusion
/// factor look the same until very late.
fn clear_escape(samples: &[Sample]) -> Option<PathStatus> {
    let last = samples.last()?;
    let pole = last.main > POLE_SIZE.ln()
        && local_slope(samples, 2.0 * std::f64::consts::LN_10, |s| s.main).is_some_and(|m| m < POLE_SLOPE);
    pole.then_some(PathStatus::AtInfinity)
}

const POLE_SIZE: f64 = 1e4;
const POLE_SLOPE: f64 = -0.5;

const GROWTH_SLOPE: f64 = -0.05;
/// Near a finite endpoint, even one of winding number four, coordinates
/// move like `s^(1/4)` at most; a log-slope this steep over the last
/// samples means the coordinate is still running away.
const LOCAL_GROWTH_SLOPE: f64 = -0.1;

/// Classifies an endpoint that did not certify, from how the coordinates
/// grew on the way in.
pub(crate) fn classify_uncertified(end: &TrackEnd, exclusion_var: Option<usize>) -> PathStatus {
    let escaping = |pick: fn(&Sample) -> f64, size: f64| {
        let Some(last) = end.samples.last() else { return false };
        let trend = growth_slope(&end.samples, pick).is_some_and(|m| m < GROWTH_SLOPE) && pick(last) > size.ln();
        trend || local_slope(&end.samples, 1.0, pick).is_some_and(|m| m < LOCAL_GROWTH_SLOPE)
    };
    if escaping(|s| s.main, 1e2) {
        return PathStatus::AtInfinity;
    }
    if exclusion_var.is_some() && escaping(|s| s.aux, 10.0) {
        return PathStatus::Excluded;
    }
    if 1.0 - end.t < ENDGAME_ZONE {
        PathStatus::Suspect
    } else {
        PathStatus::Failed
    }
}
