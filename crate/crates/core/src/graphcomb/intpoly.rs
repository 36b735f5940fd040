use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Univariate polynomial with integer coefficients, `coeffs[i]` multiplying
/// `k^i`. The zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<i64>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: i64) -> Self {
        Self::new(vec![c])
    }

    /// `k^e`.
    pub fn monomial(e: usize) -> Self {
        let mut c = vec![0; e + 1];
        c[e] = 1;
        IntPolynomial { coeffs: c }
    }

    /// `k - a`.
    pub fn linear_root(a: i64) -> Self {
        Self::new(vec![-a, 1])
    }

    /// Falling factorial `k (k - 1) ... (k - n + 1)`.
    pub fn falling_factorial(n: usize) -> Self {
        (0..n as i64).fold(Self::constant(1), |acc, a| &acc * &Self::linear_root(a))
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, k: i64) -> i64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * k + c)
    }

    /// Synthetic division by `k - a`, returning quotient and remainder.
    pub fn div_linear(&self, a: i64) -> (IntPolynomial, i64) {
        if self.coeffs.is_empty() {
            return (Self::zero(), 0);
        }
        let mut q = vec![0; self.coeffs.len() - 1];
        let mut carry = 0;
        for i in (0..self.coeffs.len()).rev() {
            let v = self.coeffs[i] + carry * a;
            if i == 0 {
                return (Self::new(q), v);
            }
            q[i - 1] = v;
            carry = v;
        }
        unreachable!()
    }

    /// Absolute values of the coefficients of `k^top, k^(top-1), ..., k^low`,
    /// where `low` is the lowest degree with a nonzero coefficient.
    pub fn abs_coeffs_from_top(&self) -> Vec<u64> {
        let low = self.coeffs.iter().position(|&c| c != 0).unwrap_or(0);
        self.coeffs[low..].iter().rev().map(|c| c.unsigned_abs()).collect()
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: Self) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let c = (0..n)
            .map(|i| self.coeffs.get(i).copied().unwrap_or(0) + rhs.coeffs.get(i).copied().unwrap_or(0))
            .collect();
        IntPolynomial::new(c)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: Self) -> IntPolynomial {
        self + &-rhs
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: Self) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut c = vec![0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        IntPolynomial::new(c)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            if !first {
                f.write_str(" ")?;
            }
            let a = c.unsigned_abs();
            let body = match (i, a) {
                (0, _) => a.to_string(),
                (1, 1) => "k".into(),
                (1, _) => format!("{a}k"),
                (_, 1) => format!("k^{i}"),
                _ => format!("{a}k^{i}"),
            };
            if first {
                write!(f, "{sign}{body}")?;
            } else {
                write!(f, "{sign} {body}")?;
            }
            first = false;
        }
        Ok(())
    }
}
