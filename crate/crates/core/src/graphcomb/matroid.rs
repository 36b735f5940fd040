use super::intpoly::IntPolynomial;
use crate::error::{Error, Result};
use crate::linalg;
use crate::matspace::{Kind, MatrixSpace};
use crate::poly::Rational;

pub const MAX_GROUND_SET: usize = 20;

/// Characteristic polynomial of the matroid represented by the coordinate
/// functionals of a diagonal space: `sum_{S} (-1)^|S| k^(r(E) - r(S))`,
/// summed over all subsets of the ground set. Exponential in the ambient
/// dimension.
pub fn matroid_characteristic(s: &MatrixSpace) -> Result<IntPolynomial> {
    if s.kind() != Kind::Diagonal {
        return Err(Error::InvalidSpace("matroid characteristic needs a diagonal space".into()));
    }
    let ground = s.n();
    if ground > MAX_GROUND_SET {
        return Err(Error::GroundSetTooLarge(ground));
    }
    // Element e is the vector (B_k)_{ee} over basis matrices k.
    let vectors: Vec<Vec<Rational>> =
        (0..ground).map(|e| s.basis().iter().map(|b| b.get(e, e).clone()).collect()).collect();
    let full_rank = linalg::rank(&vectors);
    let mut coeffs = vec![0i64; full_rank + 1];
    for mask in 0u32..(1 << ground) {
        let subset: Vec<Vec<Rational>> =
            (0..ground).filter(|e| mask & (1 << e) != 0).map(|e| vectors[e].clone()).collect();
        let r = if subset.is_empty() { 0 } else { linalg::rank(&subset) };
        let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        coeffs[full_rank - r] += sign;
    }
    Ok(IntPolynomial::new(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphcomb::chromatic;
    use crate::matspace::Graph;

    #[test]
    fn c4_matches_chromatic_over_k() {
        let s = MatrixSpace::from_graph_incidence(&Graph::cycle(4)).unwrap();
        let chi_m = matroid_characteristic(&s).unwrap();
        assert_eq!(&chi_m * &IntPolynomial::monomial(1), chromatic(&Graph::cycle(4)));
    }

    #[test]
    fn single_element() {
        let s = MatrixSpace::full(Kind::Diagonal, 1);
        assert_eq!(matroid_characteristic(&s).unwrap().coeffs(), &[-1, 1]);
    }

    #[test]
    fn generic_diagonal_space_is_uniform() {
        // Uniform matroid U_{3,5}: k^3 - 5k^2 + 10k - (10 - 5 + 1).
        let s = MatrixSpace::random(Kind::Diagonal, 5, 3, 42).unwrap();
        let p = matroid_characteristic(&s).unwrap();
        assert_eq!(p.coeffs(), &[-6, 10, -5, 1]);
    }

    #[test]
    fn rejects_non_diagonal() {
        assert!(matroid_characteristic(&MatrixSpace::full(Kind::Symmetric, 2)).is_err());
        assert!(matches!(
            matroid_characteristic(&MatrixSpace::full(Kind::Diagonal, 21)),
            Err(Error::GroundSetTooLarge(21))
        ));
    }
}
