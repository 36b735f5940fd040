use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::CPoly;

/// Square polynomial system over the complex numbers.
///
/// Variables may be split into groups; the start system then uses one
/// linear factor per unit of group degree, which can need far fewer paths
/// than the total-degree start when equations are low degree in some group.
#[derive(Clone, Debug)]
pub struct PolySystem {
    equations: Vec<CPoly>,
    nvars: usize,
    degrees: Vec<u32>,
    groups: Vec<Vec<usize>>,
    exclusion_var: Option<usize>,
}

impl PolySystem {
    /// Exactly-zero terms are dropped so that degrees reflect the support.
    pub fn new(equations: Vec<CPoly>) -> Result<Self> {
        let equations: Vec<CPoly> = equations.iter().map(CPoly::prune_zeros).collect();
        let nvars = equations.first().map(|e| e.nvars()).unwrap_or(0);
        if equations.len() != nvars || equations.iter().any(|e| e.nvars() != nvars) {
            return Err(Error::NotSquare { equations: equations.len(), vars: nvars });
        }
        if equations.iter().any(|e| e.is_zero()) {
            return Err(Error::ZeroEquation);
        }
        let degrees = equations.iter().map(|e| e.total_degree()).collect();
        Ok(PolySystem { equations, nvars, degrees, groups: vec![(0..nvars).collect()], exclusion_var: None })
    }

    /// Uses a variable partition for the start system. Groups must cover
    /// every variable exactly once.
    pub fn with_groups(mut self, groups: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; self.nvars];
        for &v in groups.iter().flatten() {
            if v >= self.nvars || seen[v] {
                return Err(Error::InvalidConfig(format!("variable {v} is repeated or out of range in groups")));
            }
            seen[v] = true;
        }
        if seen.iter().any(|s| !s) || groups.iter().any(|g| g.is_empty()) {
            return Err(Error::InvalidConfig("variable groups must partition the variables".into()));
        }
        self.groups = groups;
        Ok(self)
    }

    /// Marks the auxiliary variable of a base-locus exclusion equation, so
    /// paths escaping only in that coordinate can be counted separately.
    pub fn with_exclusion_var(mut self, v: usize) -> Self {
        assert!(v < self.nvars);
        self.exclusion_var = Some(v);
        self
    }

    pub fn equations(&self) -> &[CPoly] {
        &self.equations
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn exclusion_var(&self) -> Option<usize> {
        self.exclusion_var
    }

    /// For a system with an exclusion variable `z`, the polynomial `h` with
    /// the exclusion equation of the form `c - z h`.
    pub(crate) fn exclusion_factor(&self) -> Option<CPoly> {
        let v = self.exclusion_var?;
        let eq = self.equations.iter().find(|e| e.degrees_by_var()[v] == 1)?;
        Some(eq.derivative(v).prune_zeros())
    }

    /// `degree_matrix[i][g]`: degree of equation `i` in the variables of group `g`.
    pub fn group_degrees(&self) -> Vec<Vec<u32>> {
        self.equations
            .iter()
            .map(|e| {
                self.groups
                    .iter()
                    .map(|g| e.terms().map(|(m, _)| g.iter().map(|&v| m.exps()[v] as u32).sum()).max().unwrap_or(0))
                    .collect()
            })
            .collect()
    }

    /// Product of total degrees.
    pub fn total_bezout(&self) -> u128 {
        self.degrees.iter().map(|&d| d as u128).product()
    }

    /// Residual infinity norm at a point.
    pub fn residual(&self, x: &[Complex64]) -> Result<f64> {
        let mut r = 0.0f64;
        for e in &self.equations {
            r = r.max(e.evaluate(x)?.norm());
        }
        Ok(r)
    }
}

/// Flat evaluator for values and Jacobians of a polynomial system.
#[derive(Clone, Debug)]
pub(crate) struct Compiled {
    n: usize,
    stride: usize,
    polys: Vec<CompiledPoly>,
}

#[derive(Clone, Debug)]
struct CompiledPoly {
    coefs: Vec<Complex64>,
    starts: Vec<usize>,
    vars: Vec<usize>,
    exps: Vec<usize>,
}

const MAX_FACTORS: usize = 32;

impl Compiled {
    pub fn new(sys: &PolySystem) -> Self {
        let n = sys.nvars();
        let maxdeg = sys.equations.iter().flat_map(|e| e.degrees_by_var()).max().unwrap_or(0) as usize;
        let polys = sys
            .equations
            .iter()
            .map(|e| {
                let mut p = CompiledPoly { coefs: vec![], starts: vec![0], vars: vec![], exps: vec![] };
                for (m, c) in e.terms() {
                    p.coefs.push(*c);
                    for (v, &k) in m.exps().iter().enumerate() {
                        if k > 0 {
                            p.vars.push(v);
                            p.exps.push(k as usize);
                        }
                    }
                    assert!(p.vars.len() - p.starts.last().unwrap() <= MAX_FACTORS);
                    p.starts.push(p.vars.len());
                }
                p
            })
            .collect();
        Compiled { n, stride: maxdeg + 1, polys }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pow_len(&self) -> usize {
        self.n * self.stride
    }

    /// `sum |c| |x^a|` over the terms of each equation: the scale against
    /// which a residual is rounding error.
    pub fn term_sizes(&self, x: &[Complex64], out: &mut [f64]) {
        for (i, p) in self.polys.iter().enumerate() {
            let mut acc = 0.0;
            for t in 0..p.coefs.len() {
                let mut term = p.coefs[t].norm();
                for k in p.starts[t]..p.starts[t + 1] {
                    term *= x[p.vars[k]].norm().powi(p.exps[k] as i32);
                }
                acc += term;
            }
            out[i] = acc;
        }
    }

    /// Values into `f`, row-major Jacobian into `jac` (if given).
    pub fn eval(&self, x: &[Complex64], pow: &mut [Complex64], f: &mut [Complex64], jac: Option<&mut [Complex64]>) {
        let s = self.stride;
        let one = Complex64::new(1.0, 0.0);
        for v in 0..self.n {
            pow[v * s] = one;
            for e in 1..s {
                pow[v * s + e] = pow[v * s + e - 1] * x[v];
            }
        }
        let zero = Complex64::new(0.0, 0.0);
        match jac {
            None => {
                for (i, p) in self.polys.iter().enumerate() {
                    let mut acc = zero;
                    for t in 0..p.coefs.len() {
                        let mut term = p.coefs[t];
                        for k in p.starts[t]..p.starts[t + 1] {
                            term *= pow[p.vars[k] * s + p.exps[k]];
                        }
                        acc += term;
                    }
                    f[i] = acc;
                }
            }
            Some(jac) => {
                jac.iter_mut().for_each(|j| *j = zero);
                let mut prefix = [zero; MAX_FACTORS + 1];
                for (i, p) in self.polys.iter().enumerate() {
                    let row = &mut jac[i * self.n..(i + 1) * self.n];
                    let mut acc = zero;
                    for t in 0..p.coefs.len() {
                        let (a, b) = (p.starts[t], p.starts[t + 1]);
                        let c = p.coefs[t];
                        prefix[0] = c;
                        for k in a..b {
                            prefix[k - a + 1] = prefix[k - a] * pow[p.vars[k] * s + p.exps[k]];
                        }
                        acc += prefix[b - a];
                        let mut suffix = one;
                        for k in (a..b).rev() {
                            let (v, e) = (p.vars[k], p.exps[k]);
                            let d = pow[v * s + e - 1] * (e as f64);
                            row[v] += prefix[k - a] * d * suffix;
                            suffix *= pow[v * s + e];
                        }
                    }
                    f[i] = acc;
                }
            }
        }
    }
}
