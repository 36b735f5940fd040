//! Chromatic polynomials, matroid characteristic polynomials, and the
//! combinatorial route to multidegrees of graph incidence spaces.

mod chromatic;
mod intpoly;
mod matroid;

pub use chromatic::{chromatic, reduced_chromatic};
pub use intpoly::IntPolynomial;
pub use matroid::{matroid_characteristic, MAX_GROUND_SET};

use crate::error::{Error, Result};
use crate::matspace::{Graph, MatrixSpace};
use crate::multidegree::{Engine, MapTag, MultidegreeSequence};

/// Multidegree of the restricted-gradient graph of `L_G`, read off the
/// reduced chromatic polynomial: absolute coefficients from the top degree
/// down, so the first entry is 1 and there are `|V| - 1` entries.
pub fn multidegree_via_huh(g: &Graph) -> Result<MultidegreeSequence> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let reduced = reduced_chromatic(g)?;
    let entries = reduced.abs_coeffs_from_top();
    debug_assert_eq!(entries.len(), g.nvertices() - 1);
    let label = MatrixSpace::from_graph_incidence(g)?.label().to_string();
    Ok(MultidegreeSequence::new(entries, MapTag::RestrictedGradient, label, Engine::Combinatorial))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn huh_goldens() {
        assert_eq!(multidegree_via_huh(&Graph::cycle(4)).unwrap().entries(), &[1, 3, 3]);
        assert_eq!(multidegree_via_huh(&Graph::cycle(3)).unwrap().entries(), &[1, 2]);
        assert_eq!(multidegree_via_huh(&Graph::path(4)).unwrap().entries(), &[1, 2, 1]);
        assert!(matches!(
            multidegree_via_huh(&Graph::new(4, vec![(0, 1), (2, 3)]).unwrap()),
            Err(Error::Disconnected)
        ));
    }
}
