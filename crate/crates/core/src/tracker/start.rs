//! Linear-product start systems.
//!
//! Equation `i` of the start system is a product of affine linear forms,
//! `deg_g(F_i)` of them supported on each variable group `g`. A start
//! solution picks one factor per equation such that every group receives as
//! many factors as it has variables; each group block is then a square
//! linear system. With a single group and factors `x_i - rho` this is the
//! classical total-degree start `x_i^{d_i} - r_i`.
//!
//! A start system can also be any polynomial system with known solutions,
//! typically the same family at other parameter values.

use num_complex::Complex64;

use super::lu;
use super::system::{Compiled, PolySystem};
use crate::error::{Error, Result};
use crate::rng::{seeded, unit_circle, unit_disk, SeededRng};

#[derive(Clone, Debug)]
struct Factor {
    group: usize,
    coefs: Vec<Complex64>,
    constant: Complex64,
}

impl Factor {
    fn eval(&self, x: &[Complex64]) -> Complex64 {
        self.coefs.iter().zip(x).fold(self.constant, |acc, (a, v)| acc + a * v)
    }
}

#[derive(Clone, Debug)]
pub(crate) enum StartSystem {
    Product(LinearProduct),
    Explicit { sys: Compiled, points: Vec<Vec<Complex64>> },
}

impl StartSystem {
    pub fn new(sys: &PolySystem, seed: u64) -> Self {
        StartSystem::Product(LinearProduct::new(sys, seed))
    }

    pub fn explicit(sys: &PolySystem, points: Vec<Vec<Complex64>>) -> Self {
        StartSystem::Explicit { sys: Compiled::new(sys), points }
    }

    pub fn count(&self) -> u128 {
        match self {
            StartSystem::Product(p) => p.total,
            StartSystem::Explicit { points, .. } => points.len() as u128,
        }
    }

    pub fn solution(&self, idx: u128) -> Option<Vec<Complex64>> {
        match self {
            StartSystem::Product(p) => p.solution(idx),
            StartSystem::Explicit { points, .. } => points.get(usize::try_from(idx).ok()?).cloned(),
        }
    }

    /// Values and row-major Jacobian; `vals` is scratch space.
    pub fn eval(&self, x: &[Complex64], g: &mut [Complex64], jac: &mut [Complex64], vals: &mut Vec<Complex64>) {
        match self {
            StartSystem::Product(p) => p.eval(x, g, jac, vals),
            StartSystem::Explicit { sys, .. } => {
                vals.resize(sys.pow_len(), Complex64::new(0.0, 0.0));
                sys.eval(x, vals, g, Some(jac));
            }
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct LinearProduct {
    n: usize,
    groups: Vec<Vec<usize>>,
    factors: Vec<Vec<Factor>>,
    /// Group choice per equation, with the number of start points it yields.
    patterns: Vec<(Vec<usize>, u128)>,
    total: u128,
}

impl LinearProduct {
    fn new(sys: &PolySystem, seed: u64) -> Self {
        let mut rng = seeded(seed);
        let n = sys.nvars();
        let groups = sys.groups().to_vec();
        let gdeg = sys.group_degrees();
        let factors: Vec<Vec<Factor>> = if groups.len() == 1 {
            // x_i^{d_i} - r_i with |r_i| = 1, split into its linear factors.
            (0..n)
                .map(|i| {
                    let d = sys.degrees()[i] as usize;
                    let r = unit_circle(&mut rng);
                    let root = r.powf(1.0 / d as f64);
                    (0..d)
                        .map(|k| {
                            let w = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / d as f64);
                            let mut coefs = vec![Complex64::new(0.0, 0.0); n];
                            coefs[i] = Complex64::new(1.0, 0.0);
                            Factor { group: 0, coefs, constant: -(root * w) }
                        })
                        .collect()
                })
                .collect()
        } else {
            (0..n)
                .map(|i| {
                    let mut fs = Vec::new();
                    for (g, vars) in groups.iter().enumerate() {
                        for _ in 0..gdeg[i][g] {
                            fs.push(random_form(&mut rng, n, g, vars));
                        }
                    }
                    fs
                })
                .collect()
        };
        let mut patterns = Vec::new();
        let caps: Vec<usize> = groups.iter().map(|g| g.len()).collect();
        let gcount: Vec<Vec<u128>> = (0..n)
            .map(|i| (0..groups.len()).map(|g| factors[i].iter().filter(|f| f.group == g).count() as u128).collect())
            .collect();
        enumerate_patterns(&gcount, caps, &mut Vec::new(), 1, &mut patterns);
        let total = patterns.iter().map(|p| p.1).sum();
        LinearProduct { n, groups, factors, patterns, total }
    }

    /// Start solution number `idx`, or `None` if its linear blocks are singular.
    fn solution(&self, mut idx: u128) -> Option<Vec<Complex64>> {
        let (pattern, _) = self.patterns.iter().find(|(_, c)| {
            if idx < *c {
                true
            } else {
                idx -= c;
                false
            }
        })?;
        // Mixed radix over factor choices, equation 0 most significant.
        let mut choice = vec![0usize; self.n];
        for i in (0..self.n).rev() {
            let cands: Vec<usize> =
                (0..self.factors[i].len()).filter(|&k| self.factors[i][k].group == pattern[i]).collect();
            let r = cands.len() as u128;
            choice[i] = cands[(idx % r) as usize];
            idx /= r;
        }
        let mut x = vec![Complex64::new(0.0, 0.0); self.n];
        for (g, vars) in self.groups.iter().enumerate() {
            let m = vars.len();
            let rows: Vec<&Factor> = (0..self.n).filter(|&i| pattern[i] == g).map(|i| &self.factors[i][choice[i]]).collect();
            let mut a = vec![Complex64::new(0.0, 0.0); m * m];
            let mut b = vec![Complex64::new(0.0, 0.0); m];
            for (r, f) in rows.iter().enumerate() {
                for (c, &v) in vars.iter().enumerate() {
                    a[r * m + c] = f.coefs[v];
                }
                b[r] = -f.constant;
            }
            let mut perm = vec![0; m];
            if !lu::factor(&mut a, &mut perm, m) {
                return None;
            }
            let mut scratch = vec![Complex64::new(0.0, 0.0); m];
            lu::solve(&a, &perm, m, &mut b, &mut scratch);
            for (c, &v) in vars.iter().enumerate() {
                x[v] = b[c];
            }
        }
        Some(x)
    }

    fn eval(&self, x: &[Complex64], g: &mut [Complex64], jac: &mut [Complex64], vals: &mut Vec<Complex64>) {
        let n = self.n;
        let one = Complex64::new(1.0, 0.0);
        for i in 0..n {
            let fs = &self.factors[i];
            vals.clear();
            vals.extend(fs.iter().map(|f| f.eval(x)));
            let row = &mut jac[i * n..(i + 1) * n];
            row.iter_mut().for_each(|r| *r = Complex64::new(0.0, 0.0));
            // d/dx of a product: each factor's gradient times the others.
            let mut prefix = one;
            for k in 0..fs.len() {
                let suffix: Complex64 = vals[k + 1..].iter().product();
                let w = prefix * suffix;
                for &v in &self.groups[fs[k].group] {
                    row[v] += fs[k].coefs[v] * w;
                }
                prefix *= vals[k];
            }
            g[i] = prefix;
        }
    }
}

fn random_form(rng: &mut SeededRng, n: usize, group: usize, vars: &[usize]) -> Factor {
    let mut coefs = vec![Complex64::new(0.0, 0.0); n];
    for &v in vars {
        coefs[v] = unit_disk(rng);
    }
    Factor { group, coefs, constant: unit_disk(rng) }
}

fn enumerate_patterns(
    gcount: &[Vec<u128>],
    caps: Vec<usize>,
    prefix: &mut Vec<usize>,
    weight: u128,
    out: &mut Vec<(Vec<usize>, u128)>,
) {
    let i = prefix.len();
    if i == gcount.len() {
        out.push((prefix.clone(), weight));
        return;
    }
    for g in 0..caps.len() {
        if caps[g] == 0 || gcount[i][g] == 0 {
            continue;
        }
        let mut next = caps.clone();
        next[g] -= 1;
        prefix.push(g);
        enumerate_patterns(gcount, next, prefix, weight.saturating_mul(gcount[i][g]), out);
        prefix.pop();
    }
}

/// Bezout number of the start system that `solve` would build, without
/// building it.
pub fn start_count(sys: &PolySystem) -> u128 {
    if sys.groups().len() == 1 {
        return sys.total_bezout();
    }
    let caps: Vec<usize> = sys.groups().iter().map(|g| g.len()).collect();
    let gcount: Vec<Vec<u128>> =
        sys.group_degrees().iter().map(|row| row.iter().map(|&d| d as u128).collect()).collect();
    let mut out = Vec::new();
    enumerate_patterns(&gcount, caps, &mut Vec::new(), 1, &mut out);
    out.iter().map(|p| p.1).sum()
}

pub(crate) fn check_guard(count: u128, limit: u128) -> Result<()> {
    if count > limit {
        return Err(Error::BezoutGuard { count, limit });
    }
    Ok(())
}
