use std::collections::HashMap;

use super::{chain_complex_of, AnyComplex, ClassBasis, Coeff, GF2Matrix, Variance};
use crate::error::{Error, Result};

/// For each `degree`-cell of `a`, its index among the `degree`-cells of `x`.
pub fn cell_inclusion<'a>(
    x: impl Into<AnyComplex<'a>>,
    a: impl Into<AnyComplex<'a>>,
    degree: usize,
) -> Result<Vec<u32>> {
    match (x.into(), a.into()) {
        (AnyComplex::Cubical(x), AnyComplex::Cubical(a)) => {
            if !a.is_subcomplex_of(x) {
                return Err(Error::NotSubcomplex("cells or sign group differ".into()));
            }
            if (degree as isize) > a.dim() {
                return Ok(Vec::new());
            }
            Ok(a.cells(degree)
                .iter()
                .map(|c| x.index_of(c).expect("checked subcomplex") as u32)
                .collect())
        }
        (AnyComplex::Simplicial(x), AnyComplex::Simplicial(a)) => {
            if (degree as isize) > a.dim() {
                return Ok(Vec::new());
            }
            if (degree as isize) > x.dim() {
                return Err(Error::NotSubcomplex(format!("no faces of dimension {degree}")));
            }
            let index: HashMap<&[usize], u32> = x
                .faces(degree)
                .iter()
                .enumerate()
                .map(|(i, f)| (f.as_slice(), i as u32))
                .collect();
            a.faces(degree)
                .iter()
                .map(|f| {
                    index
                        .get(f.as_slice())
                        .copied()
                        .ok_or_else(|| Error::NotSubcomplex(format!("face {f:?} missing")))
                })
                .collect()
        }
        _ => Err(Error::NotSubcomplex("complexes of different kinds".into())),
    }
}

/// Matrix of the map induced by an inclusion, from precomputed GF(2) bases.
///
/// For cohomology this is restriction `H^k(X) -> H^k(A)`, with one column per
/// class of `X`. For homology it is `H_k(A) -> H_k(X)`, one column per class of
/// `A`. `map` is the cell inclusion in the degree of the bases.
pub fn induced_from_bases(x_basis: &ClassBasis, a_basis: &ClassBasis, map: &[u32]) -> Result<GF2Matrix> {
    if x_basis.variance() != a_basis.variance() || x_basis.degree() != a_basis.degree() {
        return Err(Error::Precondition("bases of different kinds".into()));
    }
    match x_basis.variance() {
        Variance::Cohomology => {
            let mut m = GF2Matrix::zeros(a_basis.rank(), x_basis.rank());
            for (i, rep) in x_basis.representative_vectors().iter().enumerate() {
                let restricted: Vec<u32> = map
                    .iter()
                    .enumerate()
                    .filter(|&(_, &xi)| rep[xi as usize])
                    .map(|(ai, _)| ai as u32)
                    .collect();
                for (r, bit) in a_basis.coordinates(&restricted)?.into_iter().enumerate() {
                    m.set(r, i, bit);
                }
            }
            Ok(m)
        }
        Variance::Homology => {
            let mut m = GF2Matrix::zeros(x_basis.rank(), a_basis.rank());
            for (i, rep) in a_basis.representatives().iter().enumerate() {
                let mut pushed: Vec<u32> = rep.iter().map(|&c| map[c as usize]).collect();
                pushed.sort_unstable();
                for (r, bit) in x_basis.coordinates(&pushed)?.into_iter().enumerate() {
                    m.set(r, i, bit);
                }
            }
            Ok(m)
        }
    }
}

/// GF(2) matrix of the map induced by the inclusion of `a` into `x` in
/// `degree`, in the class bases computed by [`ClassBasis`].
pub fn induced_map<'a>(
    x: impl Into<AnyComplex<'a>>,
    a: impl Into<AnyComplex<'a>>,
    degree: usize,
    variance: Variance,
) -> Result<GF2Matrix> {
    let (x, a) = (x.into(), a.into());
    let map = cell_inclusion(x, a, degree)?;
    let xb = ClassBasis::compute(&chain_complex_of(x, Coeff::Z2)?, degree, variance)?;
    let ab = ClassBasis::compute(&chain_complex_of(a, Coeff::Z2)?, degree, variance)?;
    induced_from_bases(&xb, &ab, &map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::SimplicialComplex;

    fn circle() -> SimplicialComplex {
        SimplicialComplex::new(3, vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap()
    }

    #[test]
    fn identity_inclusion() {
        let k = circle();
        for v in [Variance::Homology, Variance::Cohomology] {
            assert_eq!(induced_map(&k, &k, 1, v).unwrap(), GF2Matrix::identity(1));
        }
    }

    #[test]
    fn point_inclusion_kills_degree_one() {
        let k = circle();
        let p = SimplicialComplex::new(3, vec![vec![0]]).unwrap();
        let m = induced_map(&k, &p, 1, Variance::Cohomology).unwrap();
        assert_eq!((m.rows(), m.cols()), (0, 1));
        let m0 = induced_map(&k, &p, 0, Variance::Cohomology).unwrap();
        assert_eq!(m0, GF2Matrix::identity(1));
    }

    #[test]
    fn non_subcomplex_rejected() {
        let k = circle();
        let other = SimplicialComplex::new(4, vec![vec![0, 3]]).unwrap();
        assert!(matches!(
            induced_map(&k, &other, 1, Variance::Homology),
            Err(Error::NotSubcomplex(_))
        ));
    }
}
