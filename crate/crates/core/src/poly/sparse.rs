use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::coeff::{rational_to_f64, Coeff, Domain, Rational};
use crate::error::{Error, Result};

/// Exponent vector with one slot per variable, ordered graded-lexicographically
/// (total degree first, then exponent of `x0`, then `x1`, ...).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    degree: u32,
    exps: Vec<u16>,
}

impl Monomial {
    pub fn new(exps: Vec<u16>) -> Self {
        let degree = exps.iter().map(|&e| u32::from(e)).sum();
        Monomial { degree, exps }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial { degree: 0, exps: vec![0; nvars] }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Monomial { degree: 1, exps }
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let exps = self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect();
        Monomial { degree: self.degree + other.degree, exps }
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut exps = Vec::with_capacity(self.exps.len());
        for (a, b) in self.exps.iter().zip(&other.exps) {
            exps.push(a.checked_sub(*b)?);
        }
        Some(Monomial { degree: self.degree - other.degree, exps })
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial over a coefficient domain `C`.
///
/// Values are immutable once built; all arithmetic returns new polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct SparsePoly<C: Coeff> {
    nvars: usize,
    terms: BTreeMap<Monomial, C>,
}

/// Polynomial with exact rational coefficients.
pub type QPoly = SparsePoly<Rational>;
/// Polynomial with complex double coefficients.
pub type CPoly = SparsePoly<Complex64>;

impl<C: Coeff> SparsePoly<C> {
    pub fn zero(nvars: usize) -> Self {
        SparsePoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C::one())
    }

    /// The coordinate function `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars} variables");
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::var(nvars, i), C::one());
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, merging
    /// repeated exponents.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u16>, C)>,
    {
        let mut p = Self::zero(nvars);
        for (exps, c) in terms {
            assert_eq!(exps.len(), nvars, "exponent vector length must equal nvars");
            p.add_term(Monomial::new(exps), c);
        }
        p
    }

    /// Homogeneous linear form `sum_i coeffs[i] * x_i`.
    pub fn linear(coeffs: &[C]) -> Self {
        let nvars = coeffs.len();
        let mut p = Self::zero(nvars);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(nvars, i), c.clone());
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        if c.prunes_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_assign_ref(&c);
                if o.get().prunes_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn domain(&self) -> Domain {
        C::DOMAIN
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    /// True when no term is stored.  A float polynomial whose terms all have
    /// coefficient `0.0` is not zero until normalized.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, exps: &[u16]) -> C {
        self.terms.get(&Monomial::new(exps.to_vec())).cloned().unwrap_or_else(C::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().next_back().map_or(0, Monomial::degree)
    }

    /// Largest exponent of each variable.
    pub fn degrees_by_var(&self) -> Vec<u16> {
        let mut out = vec![0; self.nvars];
        for m in self.terms.keys() {
            for (o, &e) in out.iter_mut().zip(m.exps()) {
                *o = (*o).max(e);
            }
        }
        out
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut p = Self::zero(self.nvars);
        for (m, a) in &self.terms {
            p.add_term(m.clone(), a.mul_ref(c));
        }
        p
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative with respect to `x_i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut p = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exps[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps.clone();
            exps[i] -= 1;
            p.add_term(Monomial::new(exps), c.mul_ref(&C::from_i64(i64::from(e))));
        }
        p
    }

    /// All partial derivatives, in variable order.
    pub fn gradient(&self) -> Vec<Self> {
        (0..self.nvars).map(|i| self.derivative(i)).collect()
    }

    /// Evaluation at a complex point.
    ///
    /// Powers of each coordinate are tabulated once, then terms are summed in
    /// the fixed term order, so the result is deterministic.
    pub fn evaluate(&self, point: &[Complex64]) -> Result<Complex64> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: point.len() });
        }
        let maxdeg = self.degrees_by_var();
        let powers: Vec<Vec<Complex64>> = point
            .iter()
            .zip(&maxdeg)
            .map(|(&x, &d)| {
                let mut row = Vec::with_capacity(usize::from(d) + 1);
                let mut acc = Complex64::new(1.0, 0.0);
                row.push(acc);
                for _ in 0..d {
                    acc *= x;
                    row.push(acc);
                }
                row
            })
            .collect();
        let mut sum = Complex64::new(0.0, 0.0);
        for (m, c) in self.terms() {
            let mut t = c.to_c64().ok_or_else(|| Error::CoefficientOverflow(format!("{c:?}")))?;
            for (v, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    t *= powers[v][usize::from(e)];
                }
            }
            sum += t;
        }
        Ok(sum)
    }

    /// Applies `f` to every coefficient, keeping the term set (exact zeros
    /// produced by `f` are pruned when the target domain prunes).
    pub fn map_coeffs<D: Coeff>(&self, mut f: impl FnMut(&C) -> D) -> SparsePoly<D> {
        let mut p = SparsePoly::zero(self.nvars);
        for (m, c) in &self.terms {
            p.add_term(m.clone(), f(c));
        }
        p
    }

    /// Reinterprets the polynomial in a ring with more variables, placing the
    /// existing variables first.
    pub fn extend_vars(&self, nvars: usize) -> Self {
        assert!(nvars >= self.nvars);
        let mut p = Self::zero(nvars);
        for (m, c) in &self.terms {
            let mut exps = m.exps.clone();
            exps.resize(nvars, 0);
            p.add_term(Monomial::new(exps), c.clone());
        }
        p
    }

    /// Substitutes `x_i -> images[i]` (all images in a common ring).
    pub fn compose(&self, images: &[SparsePoly<C>]) -> SparsePoly<C> {
        assert_eq!(images.len(), self.nvars);
        let target = images.first().map_or(0, SparsePoly::nvars);
        let maxdeg = self.degrees_by_var();
        let powers: Vec<Vec<SparsePoly<C>>> = images
            .iter()
            .zip(&maxdeg)
            .map(|(img, &d)| {
                let mut row = vec![SparsePoly::one(target)];
                for k in 0..usize::from(d) {
                    let next = &row[k] * img;
                    row.push(next);
                }
                row
            })
            .collect();
        let mut out = SparsePoly::zero(target);
        for (m, c) in &self.terms {
            let mut t = SparsePoly::constant(target, c.clone());
            for (v, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    t = &t * &powers[v][usize::from(e)];
                }
            }
            out = &out + &t;
        }
        out
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        assert_eq!(self.nvars, other.nvars, "polynomials live in different rings");
        let mut p = self.clone();
        for (m, c) in &other.terms {
            let c = if negate { c.neg_ref() } else { c.clone() };
            p.add_term(m.clone(), c);
        }
        p
    }

    fn product(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "polynomials live in different rings");
        let mut p = Self::zero(self.nvars);
        for (ma, a) in &self.terms {
            for (mb, b) in &other.terms {
                p.add_term(ma.mul(mb), a.mul_ref(b));
            }
        }
        p
    }
}

impl QPoly {
    /// Converts every coefficient to the nearest complex double.
    pub fn to_float(&self) -> Result<CPoly> {
        let mut p = CPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let v = rational_to_f64(c).ok_or_else(|| Error::CoefficientOverflow(c.to_string()))?;
            p.terms.insert(m.clone(), Complex64::new(v, 0.0));
        }
        Ok(p)
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a
    /// remainder (or the divisor is zero).
    pub fn div_exact(&self, divisor: &QPoly) -> Option<QPoly> {
        let (lm, lc) = divisor.leading_term()?;
        let mut rem = self.clone();
        let mut quot = QPoly::zero(self.nvars);
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.div(lm)?;
            let qc = c.div_ref(lc);
            let mut step = QPoly::zero(self.nvars);
            step.add_term(qm, qc);
            rem = &rem - &(&step * divisor);
            quot = &quot + &step;
        }
        Some(quot)
    }
}

impl CPoly {
    /// Drops terms whose coefficient modulus is below `eps`.
    pub fn normalize(&self, eps: f64) -> CPoly {
        let mut p = CPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            if c.norm() >= eps {
                p.terms.insert(m.clone(), *c);
            }
        }
        p
    }

    /// Drops terms whose coefficient is exactly zero.
    pub fn prune_zeros(&self) -> CPoly {
        let mut p = self.clone();
        p.terms.retain(|_, c| c.re != 0.0 || c.im != 0.0);
        p
    }

    /// Largest coefficient modulus.
    pub fn max_coeff_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

impl<C: Coeff> Add for &SparsePoly<C> {
    type Output = SparsePoly<C>;
    fn add(self, rhs: Self) -> SparsePoly<C> {
        self.combine(rhs, false)
    }
}

impl<C: Coeff> Sub for &SparsePoly<C> {
    type Output = SparsePoly<C>;
    fn sub(self, rhs: Self) -> SparsePoly<C> {
        self.combine(rhs, true)
    }
}

impl<C: Coeff> Mul for &SparsePoly<C> {
    type Output = SparsePoly<C>;
    fn mul(self, rhs: Self) -> SparsePoly<C> {
        self.product(rhs)
    }
}

impl<C: Coeff> Neg for &SparsePoly<C> {
    type Output = SparsePoly<C>;
    fn neg(self) -> SparsePoly<C> {
        self.map_coeffs(C::neg_ref)
    }
}
