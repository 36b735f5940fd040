//! Sparse multivariate polynomials over exact rationals and complex doubles,
//! with symbolic determinants and adjugates of polynomial matrices.

mod coeff;
mod matrix;
mod sparse;
mod text;

pub use coeff::{rational_to_f64, Coeff, Domain, Rational};
pub use matrix::SymbolicMatrix;
pub use sparse::{CPoly, Monomial, QPoly, SparsePoly};
pub use text::{parse_poly, rational_from_str, rational_string};

/// Shorthand for [`SymbolicMatrix::det`].
pub fn det(m: &SymbolicMatrix<Rational>) -> QPoly {
    m.det()
}

/// Shorthand for [`SymbolicMatrix::adjugate`].
pub fn adjugate(m: &SymbolicMatrix<Rational>) -> SymbolicMatrix<Rational> {
    m.adjugate()
}

/// Shorthand for [`SparsePoly::gradient`].
pub fn gradient<C: Coeff>(f: &SparsePoly<C>) -> Vec<SparsePoly<C>> {
    f.gradient()
}
