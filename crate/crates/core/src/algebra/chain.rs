use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::SparseIntMatrix;
use crate::complex::{bit_indices, CubicalComplex, SimplicialComplex};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coeff {
    Z,
    Z2,
}

impl std::str::FromStr for Coeff {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "z" | "Z" => Ok(Coeff::Z),
            "z2" | "Z2" | "z/2" => Ok(Coeff::Z2),
            other => Err(Error::Parse(format!("unknown coefficient ring {other:?}"))),
        }
    }
}

/// A complex whose cellular chains can be formed.
#[derive(Clone, Copy, Debug)]
pub enum AnyComplex<'a> {
    Simplicial(&'a SimplicialComplex),
    Cubical(&'a CubicalComplex),
}

impl<'a> From<&'a SimplicialComplex> for AnyComplex<'a> {
    fn from(k: &'a SimplicialComplex) -> Self {
        AnyComplex::Simplicial(k)
    }
}

impl<'a> From<&'a CubicalComplex> for AnyComplex<'a> {
    fn from(z: &'a CubicalComplex) -> Self {
        AnyComplex::Cubical(z)
    }
}

impl AnyComplex<'_> {
    pub fn cell_count(&self) -> usize {
        match self {
            AnyComplex::Simplicial(k) => k.face_count(),
            AnyComplex::Cubical(z) => z.cell_count(),
        }
    }
}

/// Cellular chain complex. Cells of each dimension are indexed in the order
/// the source complex stores them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplexData {
    coeff: Coeff,
    cell_counts: Vec<usize>,
    /// `boundaries[k]` is the matrix of `∂_k : C_k -> C_{k-1}`; `boundaries[0]`
    /// has no rows.
    boundaries: Vec<SparseIntMatrix>,
}

impl ChainComplexData {
    /// Assembles a chain complex from boundary matrices, checking shapes and
    /// that consecutive boundaries compose to zero.
    pub fn from_boundaries(coeff: Coeff, boundaries: Vec<SparseIntMatrix>) -> Result<Self> {
        let cell_counts: Vec<usize> = boundaries.iter().map(SparseIntMatrix::cols).collect();
        for (k, b) in boundaries.iter().enumerate() {
            let expected = if k == 0 { 0 } else { cell_counts[k - 1] };
            if b.rows() != expected {
                return Err(Error::Precondition(format!(
                    "boundary {k} has {} rows, expected {expected}",
                    b.rows()
                )));
            }
        }
        let boundaries = match coeff {
            Coeff::Z => boundaries,
            Coeff::Z2 => boundaries
                .into_iter()
                .map(|b| {
                    let cols = b
                        .mod2_columns()
                        .into_iter()
                        .map(|c| c.into_iter().map(|r| (r, 1)).collect())
                        .collect();
                    SparseIntMatrix::new(b.rows(), cols)
                })
                .collect::<Result<_>>()?,
        };
        let cc = ChainComplexData {
            coeff,
            cell_counts,
            boundaries,
        };
        cc.check_square_zero()?;
        Ok(cc)
    }

    pub fn coeff(&self) -> Coeff {
        self.coeff
    }

    /// Number of cells in each dimension.
    pub fn cell_counts(&self) -> &[usize] {
        &self.cell_counts
    }

    /// Top dimension, or `-1` for the empty complex.
    pub fn dim(&self) -> isize {
        self.cell_counts.len() as isize - 1
    }

    /// `∂_k`, if `k` is within range.
    pub fn boundary(&self, k: usize) -> Option<&SparseIntMatrix> {
        self.boundaries.get(k)
    }

    fn check_square_zero(&self) -> Result<()> {
        for k in 1..self.boundaries.len() {
            let lower = &self.boundaries[k - 1];
            let upper = &self.boundaries[k];
            for (j, col) in upper.columns().iter().enumerate() {
                let mut acc: HashMap<u32, i64> = HashMap::new();
                for &(r, v) in col {
                    for &(s, w) in lower.column(r as usize) {
                        *acc.entry(s).or_insert(0) += v * w;
                    }
                }
                let bad = acc.values().any(|&x| match self.coeff {
                    Coeff::Z => x != 0,
                    Coeff::Z2 => x % 2 != 0,
                });
                if bad {
                    return Err(Error::Precondition(format!(
                        "boundary of boundary is nonzero on cell {j} of dimension {k}"
                    )));
                }
            }
        }
        Ok(())
    }
}

fn simplicial_boundaries(k: &SimplicialComplex) -> Result<Vec<SparseIntMatrix>> {
    let dim = k.dim();
    if dim < 0 {
        return Ok(Vec::new());
    }
    let mut out = vec![SparseIntMatrix::zeros(0, k.faces(0).len())];
    for d in 1..=dim as usize {
        let index: HashMap<&[usize], u32> = k
            .faces(d - 1)
            .iter()
            .enumerate()
            .map(|(i, f)| (f.as_slice(), i as u32))
            .collect();
        let columns = k
            .faces(d)
            .iter()
            .map(|f| {
                (0..f.len())
                    .map(|i| {
                        let face: Vec<usize> = f.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect();
                        let sign = if i % 2 == 0 { 1 } else { -1 };
                        (index[face.as_slice()], sign)
                    })
                    .collect()
            })
            .collect();
        out.push(SparseIntMatrix::new(k.faces(d - 1).len(), columns)?);
    }
    Ok(out)
}

/// Cubical boundary: free coordinates in increasing order `a_0 < a_1 < ...`
/// contribute `(-1)^j ([face a_j = +1] - [face a_j = -1])`. In an orbit complex
/// each face is replaced by its canonical representative, with a sign change
/// whenever the identifying group element reverses orientation.
fn cubical_boundaries(z: &CubicalComplex) -> Result<Vec<SparseIntMatrix>> {
    let dim = z.dim();
    if dim < 0 {
        return Ok(Vec::new());
    }
    let mut out = vec![SparseIntMatrix::zeros(0, z.cells(0).len())];
    for d in 1..=dim as usize {
        let columns = z
            .cells(d)
            .iter()
            .map(|c| {
                let mut col = Vec::with_capacity(2 * d);
                for (j, axis) in bit_indices(c.support).enumerate() {
                    for plus in [true, false] {
                        let (face, flip) = z.face_of(c, axis, plus);
                        let idx = z.index_of(&face).ok_or_else(|| {
                            Error::InvalidCubical(format!("face {face:?} missing"))
                        })?;
                        let mut sign = if j % 2 == 0 { 1 } else { -1 };
                        if !plus {
                            sign = -sign;
                        }
                        if flip {
                            sign = -sign;
                        }
                        col.push((idx as u32, sign));
                    }
                }
                Ok(col)
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(SparseIntMatrix::new(z.cells(d - 1).len(), columns)?);
    }
    Ok(out)
}

/// Cellular chain complex of a finite complex with the given coefficients.
pub fn chain_complex_of<'a>(x: impl Into<AnyComplex<'a>>, coeff: Coeff) -> Result<ChainComplexData> {
    let x = x.into();
    let cap = crate::cell_budget();
    if x.cell_count() as u64 > cap {
        return Err(Error::BudgetExceeded {
            needed: x.cell_count().to_string(),
            cap,
        });
    }
    let boundaries = match x {
        AnyComplex::Simplicial(k) => simplicial_boundaries(k)?,
        AnyComplex::Cubical(z) => cubical_boundaries(z)?,
    };
    ChainComplexData::from_boundaries(coeff, boundaries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::gf2_rank;
    use crate::complex::CubeCell;

    fn triangle() -> SimplicialComplex {
        SimplicialComplex::new(3, vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap()
    }

    #[test]
    fn triangle_boundary_rank_two() {
        let cc = chain_complex_of(&triangle(), Coeff::Z2).unwrap();
        let d1 = cc.boundary(1).unwrap();
        assert_eq!((d1.rows(), d1.cols()), (3, 3));
        assert_eq!(gf2_rank(&d1.mod2_columns()), 2);
    }

    #[test]
    fn square_cells_have_alternating_signs() {
        let cells = crate::complex::submasks(0b11).flat_map(|s| {
            (0..4u64).filter(move |g| g & s == 0).map(move |g| CubeCell::new(s, g))
        });
        let z = CubicalComplex::new(2, cells).unwrap();
        let cc = chain_complex_of(&z, Coeff::Z).unwrap();
        let d2 = cc.boundary(2).unwrap();
        let mut signs: Vec<i64> = d2.column(0).iter().map(|e| e.1).collect();
        signs.sort();
        assert_eq!(signs, vec![-1, -1, 1, 1]);
    }

    #[test]
    fn nonzero_square_rejected() {
        let d1 = SparseIntMatrix::new(1, vec![vec![(0, 1)]]).unwrap();
        let d0 = SparseIntMatrix::zeros(0, 1);
        let d2 = SparseIntMatrix::new(1, vec![vec![(0, 1)]]).unwrap();
        assert!(ChainComplexData::from_boundaries(Coeff::Z, vec![d0, d1, d2]).is_err());
    }
}
