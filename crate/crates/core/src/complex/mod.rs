//! Simplicial complexes, polytope face lattices, cube complexes and the
//! passages between them.

mod cubical;
mod iso;
mod lattice;
mod simplicial;

pub use cubical::{CubeCell, CubicalComplex, SignQuotient};
#[allow(unused_imports)]
pub(crate) use cubical::{bit_indices, submasks};
pub use iso::{cubical_isomorphic, find_set_isomorphism, isomorphic, SetSystem};
pub use lattice::{Face, FaceLattice, Mark};
#[allow(unused_imports)]
pub(crate) use lattice::{intersect_sorted, is_subset};
pub use simplicial::SimplicialComplex;

use crate::error::{Error, Result};

/// The simplicial complex dual to a simple polytope: one vertex per facet, one
/// simplex per face (the set of facets containing it).
pub fn dualize(p: &FaceLattice) -> Result<SimplicialComplex> {
    if let Some(face) = p.first_non_simple() {
        return Err(Error::NotSimple {
            face: face.facet_set.clone(),
            found: face.facet_set.len(),
            expected: p.rank() - face.rank,
        });
    }
    let facets: Vec<Vec<usize>> = p.vertices().iter().map(|v| v.facet_set.clone()).collect();
    if facets.is_empty() {
        return Err(Error::EmptyComplex);
    }
    Ok(SimplicialComplex::from_normalized(p.facet_count(), facets))
}

/// Inverse of [`dualize`]: the simple polytope whose boundary is dual to a
/// closed pseudomanifold `k`. Simplices become faces, vertices become facets.
pub fn dualize_complex(k: &SimplicialComplex) -> Result<FaceLattice> {
    if !k.is_pure() {
        return Err(Error::NotPure);
    }
    if !k.is_closed_pseudomanifold() {
        return Err(Error::NotPseudomanifold(
            "some ridge is not shared by exactly two facets".into(),
        ));
    }
    let used = k.used_vertices();
    if used.len() != k.vertex_count() {
        return Err(Error::NotPseudomanifold("complex has unused vertices".into()));
    }
    let n = k.dim() as usize + 1;
    let faces = k
        .all_faces()
        .map(|s| Face {
            rank: n - s.len(),
            facet_set: s.clone(),
            mark: Mark::Real,
        })
        .collect();
    FaceLattice::new(n, k.vertex_count(), faces)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn prism() -> FaceLattice {
        // Facets: 0 bottom triangle, 1 top triangle, 2..5 the three squares.
        // Vertices: bottom i lies in {0, square i, square i-1}.
        let mut faces = Vec::new();
        let sq = |i: usize| 2 + (i % 3);
        for (cap, _) in [(0usize, ()), (1, ())] {
            for i in 0..3 {
                let mut v = vec![cap, sq(i), sq(i + 2)];
                v.sort();
                faces.push(Face {
                    rank: 0,
                    facet_set: v,
                    mark: Mark::Real,
                });
                faces.push(Face {
                    rank: 1,
                    facet_set: vec![cap, sq(i)],
                    mark: Mark::Real,
                });
            }
        }
        for i in 0..3 {
            let mut e = vec![sq(i), sq(i + 1)];
            e.sort();
            faces.push(Face {
                rank: 1,
                facet_set: e,
                mark: Mark::Real,
            });
        }
        for f in 0..5 {
            faces.push(Face {
                rank: 2,
                facet_set: vec![f],
                mark: Mark::Real,
            });
        }
        FaceLattice::new(3, 5, faces).unwrap()
    }

    #[test]
    fn prism_is_valid() {
        let p = prism();
        assert_eq!(p.f_vector(), vec![6, 9, 5]);
        p.validate().unwrap();
    }

    #[test]
    fn prism_dualizes_to_bipyramid() {
        let k = dualize(&prism()).unwrap();
        assert_eq!(k.f_vector(), vec![5, 9, 6]);
        let back = dualize_complex(&k).unwrap();
        assert_eq!(back, prism());
    }

    #[test]
    fn non_simple_rejected() {
        let oct = prism().dual().unwrap();
        assert!(matches!(dualize(&oct), Err(Error::NotSimple { .. })));
    }

    #[test]
    fn non_pure_rejected() {
        let k = SimplicialComplex::new(4, vec![vec![0, 1, 2], vec![2, 3]]).unwrap();
        assert!(matches!(dualize_complex(&k), Err(Error::NotPure)));
    }
}
