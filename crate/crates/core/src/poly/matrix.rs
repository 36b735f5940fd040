use super::coeff::Coeff;
use super::sparse::{QPoly, SparsePoly};

/// Square matrix whose entries are polynomials (linear forms, for matrices
/// produced by [`MatrixSpace::generic_element`](crate::matspace::MatrixSpace::generic_element)).
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolicMatrix<C: Coeff> {
    n: usize,
    nvars: usize,
    entries: Vec<SparsePoly<C>>,
}

impl<C: Coeff> SymbolicMatrix<C> {
    /// Builds an `n x n` matrix from row-major entries.
    pub fn from_rows(n: usize, entries: Vec<SparsePoly<C>>) -> Self {
        assert_eq!(entries.len(), n * n, "expected {} entries", n * n);
        let nvars = entries.first().map_or(0, SparsePoly::nvars);
        assert!(entries.iter().all(|e| e.nvars() == nvars), "entries live in different rings");
        SymbolicMatrix { n, nvars, entries }
    }

    pub fn zeros(n: usize, nvars: usize) -> Self {
        SymbolicMatrix { n, nvars, entries: vec![SparsePoly::zero(nvars); n * n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, i: usize, j: usize) -> &SparsePoly<C> {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: SparsePoly<C>) {
        self.entries[i * self.n + j] = p;
    }

    pub fn entries(&self) -> &[SparsePoly<C>] {
        &self.entries
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n, self.nvars);
        for i in 0..n {
            for j in 0..n {
                let mut acc = SparsePoly::zero(self.nvars);
                for k in 0..n {
                    acc = &acc + &(self.get(i, k) * other.get(k, j));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    /// Submatrix with row `r` and column `c` removed.
    pub fn minor(&self, r: usize, c: usize) -> Self {
        let n = self.n;
        let mut entries = Vec::with_capacity((n - 1) * (n - 1));
        for i in (0..n).filter(|&i| i != r) {
            for j in (0..n).filter(|&j| j != c) {
                entries.push(self.get(i, j).clone());
            }
        }
        SymbolicMatrix { n: n - 1, nvars: self.nvars, entries }
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

impl SymbolicMatrix<super::coeff::Rational> {
    /// Determinant by fraction-free (Bareiss) elimination with exact
    /// polynomial division.
    pub fn det(&self) -> QPoly {
        let n = self.n;
        if n == 0 {
            return QPoly::one(self.nvars);
        }
        let mut a: Vec<Vec<QPoly>> =
            (0..n).map(|i| (0..n).map(|j| self.get(i, j).clone()).collect()).collect();
        let mut negate = false;
        let mut prev = QPoly::one(self.nvars);
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        negate = !negate;
                    }
                    None => return QPoly::zero(self.nvars),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = num
                        .div_exact(&prev)
                        .expect("Bareiss step must divide exactly by the previous pivot");
                }
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        if negate {
            -&d
        } else {
            d
        }
    }

    /// Adjugate: entry `(i, j)` is the signed `(j, i)` cofactor.
    pub fn adjugate(&self) -> Self {
        let n = self.n;
        assert!(n >= 1);
        if n == 1 {
            return SymbolicMatrix::from_rows(1, vec![QPoly::one(self.nvars)]);
        }
        let mut out = Self::zeros(n, self.nvars);
        for i in 0..n {
            for j in 0..n {
                let c = self.minor(j, i).det();
                out.set(i, j, if (i + j) % 2 == 1 { -&c } else { c });
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::coeff::Rational;
    use num_bigint::BigInt;

    fn vars(k: usize) -> Vec<QPoly> {
        (0..k).map(|i| QPoly::var(k, i)).collect()
    }

    #[test]
    fn one_by_one_determinant() {
        let x = QPoly::var(1, 0);
        assert_eq!(SymbolicMatrix::from_rows(1, vec![x.clone()]).det(), x);
    }

    #[test]
    fn diagonal_determinant_and_adjugate() {
        let v = vars(4);
        let z = QPoly::zero(4);
        let mut m = SymbolicMatrix::zeros(4, 4);
        for i in 0..4 {
            m.set(i, i, v[i].clone());
        }
        let prod = &(&(&v[0] * &v[1]) * &v[2]) * &v[3];
        assert_eq!(m.det(), prod);
        let adj = m.adjugate();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { prod.div_exact(&v[i]).unwrap() } else { z.clone() };
                assert_eq!(adj.get(i, j), &want);
            }
        }
    }

    #[test]
    fn two_by_two_adjugate() {
        let v = vars(4);
        let m = SymbolicMatrix::from_rows(2, v.clone());
        let adj = m.adjugate();
        assert_eq!(adj.get(0, 0), &v[3]);
        assert_eq!(adj.get(0, 1), &-&v[1]);
        assert_eq!(adj.get(1, 0), &-&v[2]);
        assert_eq!(adj.get(1, 1), &v[0]);
    }

    #[test]
    fn zero_pivot_needs_row_swap() {
        // [[0, x], [y, 0]] has determinant -xy.
        let v = vars(2);
        let z = QPoly::zero(2);
        let m = SymbolicMatrix::from_rows(2, vec![z.clone(), v[0].clone(), v[1].clone(), z]);
        assert_eq!(m.det(), -&(&v[0] * &v[1]));
    }

    #[test]
    fn singular_constant_matrix() {
        let c = |k: i64| QPoly::constant(1, Rational::from_integer(BigInt::from(k)));
        let m = SymbolicMatrix::from_rows(2, vec![c(1), c(2), c(2), c(4)]);
        assert!(m.det().is_zero());
    }
}
