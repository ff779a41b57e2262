use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::snf::big_to_json;
use super::sparse::{reduce_gf2, symdiff};
use super::{invariant_factors, smith_normal_form, ChainComplexData, Coeff, IntMatrix};
use crate::error::{Error, Result};

/// Betti numbers and (over the integers) torsion coefficients per degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyReport {
    pub coeff: Coeff,
    pub betti: Vec<usize>,
    #[serde(serialize_with = "torsion_json")]
    pub torsion: Vec<Vec<BigInt>>,
}

fn torsion_json<S: Serializer>(t: &[Vec<BigInt>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let v: Vec<Vec<serde_json::Value>> = t.iter().map(|row| row.iter().map(big_to_json).collect()).collect();
    v.serialize(s)
}

impl HomologyReport {
    pub fn euler_characteristic(&self) -> i64 {
        self.betti
            .iter()
            .enumerate()
            .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }
}

/// Ranks of `∂_k` over GF(2), computed top-down so that pivot rows found in
/// degree `k + 1` clear the corresponding columns in degree `k`.
pub(crate) fn gf2_boundary_ranks(cc: &ChainComplexData) -> Vec<usize> {
    let top = cc.cell_counts().len();
    let mut ranks = vec![0; top + 1];
    let mut cleared: HashSet<u32> = HashSet::new();
    for k in (1..top).rev() {
        let cols = cc.boundary(k).expect("degree in range").mod2_columns();
        let red = reduce_gf2(cols, |j| cleared.contains(&(j as u32)), false);
        ranks[k] = red.rank();
        cleared = red.lows.keys().copied().collect();
    }
    ranks
}

/// Betti numbers (and torsion over `Z`) of a chain complex.
pub fn homology(cc: &ChainComplexData) -> Result<HomologyReport> {
    let counts = cc.cell_counts();
    let top = counts.len();
    let (ranks, torsion) = match cc.coeff() {
        Coeff::Z2 => (gf2_boundary_ranks(cc), vec![Vec::new(); top]),
        Coeff::Z => {
            let mut ranks = vec![0; top + 1];
            let mut torsion = vec![Vec::new(); top];
            for k in 1..top {
                let f = invariant_factors(cc.boundary(k).expect("degree in range"))?;
                ranks[k] = f.len();
                torsion[k - 1] = f.into_iter().filter(|x| !x.is_one()).collect();
            }
            (ranks, torsion)
        }
    };
    let betti = (0..top).map(|k| counts[k] - ranks[k] - ranks[k + 1]).collect();
    Ok(HomologyReport {
        coeff: cc.coeff(),
        betti,
        torsion,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variance {
    Homology,
    Cohomology,
}

/// A basis of `H_k` or `H^k` with GF(2) coefficients, given by cycle (or
/// cocycle) representatives, together with the data needed to write any
/// (co)cycle in that basis.
#[derive(Clone, Debug)]
pub struct ClassBasis {
    variance: Variance,
    degree: usize,
    cells: usize,
    reps: Vec<Vec<u32>>,
    /// Pivot cell to (reduced vector, representative index if it is one).
    table: HashMap<u32, (Vec<u32>, Option<usize>)>,
}

impl ClassBasis {
    pub fn compute(cc: &ChainComplexData, degree: usize, variance: Variance) -> Result<Self> {
        let counts = cc.cell_counts();
        if degree >= counts.len() {
            return Ok(ClassBasis {
                variance,
                degree,
                cells: 0,
                reps: Vec::new(),
                table: HashMap::new(),
            });
        }
        let w = counts[degree];
        let mod2 = |k: usize| cc.boundary(k).map(|b| b.mod2_columns());
        let transpose = |cols: Vec<Vec<u32>>, rows: usize| {
            let mut t = vec![Vec::new(); rows];
            for (j, c) in cols.iter().enumerate() {
                for &r in c {
                    t[r as usize].push(j as u32);
                }
            }
            t
        };
        let (incoming, outgoing) = match variance {
            Variance::Homology => (
                mod2(degree + 1).unwrap_or_default(),
                if degree == 0 { vec![Vec::new(); w] } else { mod2(degree).unwrap() },
            ),
            Variance::Cohomology => (
                if degree == 0 { Vec::new() } else { transpose(mod2(degree).unwrap(), w) },
                match mod2(degree + 1) {
                    Some(cols) => transpose(cols, w),
                    None => vec![Vec::new(); w],
                },
            ),
        };
        let red_in = reduce_gf2(incoming, |_| false, false);
        let red_out = reduce_gf2(outgoing, |j| red_in.lows.contains_key(&(j as u32)), true);
        let mut table: HashMap<u32, (Vec<u32>, Option<usize>)> = red_in
            .lows
            .iter()
            .map(|(&low, &owner)| (low, (red_in.reduced[owner].clone(), None)))
            .collect();
        let mut reps = Vec::new();
        for j in 0..w {
            if red_in.lows.contains_key(&(j as u32)) || !red_out.reduced[j].is_empty() {
                continue;
            }
            let rep = red_out.combos[j].clone();
            table.insert(j as u32, (rep.clone(), Some(reps.len())));
            reps.push(rep);
        }
        Ok(ClassBasis {
            variance,
            degree,
            cells: w,
            reps,
            table,
        })
    }

    pub fn variance(&self) -> Variance {
        self.variance
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn rank(&self) -> usize {
        self.reps.len()
    }

    /// Number of cells in the degree of this basis.
    pub fn cell_count(&self) -> usize {
        self.cells
    }

    /// Representatives as sorted cell-index lists.
    pub fn representatives(&self) -> &[Vec<u32>] {
        &self.reps
    }

    /// Representatives as indicator vectors.
    pub fn representative_vectors(&self) -> Vec<Vec<bool>> {
        self.reps
            .iter()
            .map(|r| {
                let mut v = vec![false; self.cells];
                for &i in r {
                    v[i as usize] = true;
                }
                v
            })
            .collect()
    }

    /// Coordinates of the class of a (co)cycle given as a sorted index list.
    /// Fails if the input is not a (co)cycle.
    pub fn coordinates(&self, chain: &[u32]) -> Result<Vec<bool>> {
        let mut coords = vec![false; self.reps.len()];
        let mut v = chain.to_vec();
        while let Some(&low) = v.last() {
            let Some((vec, rep)) = self.table.get(&low) else {
                return Err(Error::Precondition(format!(
                    "input is not a {}cycle in degree {}",
                    if self.variance == Variance::Cohomology { "co" } else { "" },
                    self.degree
                )));
            };
            v = symdiff(&v, vec);
            if let Some(i) = rep {
                coords[*i] ^= true;
            }
        }
        Ok(coords)
    }

    pub fn coordinates_of_vector(&self, chain: &[bool]) -> Result<Vec<bool>> {
        let idx: Vec<u32> = chain.iter().enumerate().filter(|e| *e.1).map(|e| e.0 as u32).collect();
        self.coordinates(&idx)
    }
}

/// Integral homology in one degree with explicit generators, for complexes
/// small enough for dense elimination.
#[derive(Clone, Debug)]
pub struct IntegralClasses {
    /// Free generators as integer chains.
    pub free: Vec<Vec<BigInt>>,
    /// Torsion generators with their orders.
    pub torsion: Vec<(BigInt, Vec<BigInt>)>,
}

/// Dense-cell cap for [`integral_classes`].
const DENSE_CELLS: usize = 3000;

pub fn integral_classes(cc: &ChainComplexData, degree: usize) -> Result<IntegralClasses> {
    if cc.coeff() != Coeff::Z {
        return Err(Error::Precondition("integral classes need integer coefficients".into()));
    }
    let counts = cc.cell_counts();
    let Some(&w) = counts.get(degree) else {
        return Ok(IntegralClasses {
            free: Vec::new(),
            torsion: Vec::new(),
        });
    };
    let above = counts.get(degree + 1).copied().unwrap_or(0);
    if w.max(above) > DENSE_CELLS {
        return Err(Error::BudgetExceeded {
            needed: format!("{} cells for dense integral classes", w.max(above)),
            cap: DENSE_CELLS as u64,
        });
    }
    // Cycles: kernel of ∂_k. With ∂_k = U D V, the kernel is spanned by the
    // columns of V^{-1} past the rank.
    let (kernel, v, rank) = if degree == 0 {
        (IntMatrix::identity(w), IntMatrix::identity(w), 0)
    } else {
        let s = smith_normal_form(&cc.boundary(degree).unwrap().to_dense());
        let r = s.rank();
        let mut k = IntMatrix::zeros(w, w - r);
        for (c, src) in (r..w).enumerate() {
            for row in 0..w {
                k.set(row, c, s.v_inv.get(row, src).clone());
            }
        }
        (k, s.v, r)
    };
    let z = w - rank;
    // Boundaries in cycle coordinates: rows past the rank of V * ∂_{k+1}.
    let mut rel = IntMatrix::zeros(z, above);
    if above > 0 {
        let vb = v.mul(&cc.boundary(degree + 1).unwrap().to_dense());
        for r in 0..z {
            for c in 0..above {
                rel.set(r, c, vb.get(rank + r, c).clone());
            }
        }
    }
    let s = smith_normal_form(&rel);
    let factors = s.invariant_factors();
    let chain_of = |coord_col: usize| -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); w];
        for (i, o) in out.iter_mut().enumerate() {
            for j in 0..z {
                let c = s.u.get(j, coord_col);
                if !c.is_zero() {
                    *o += kernel.get(i, j) * c;
                }
            }
        }
        out
    };
    let mut torsion = Vec::new();
    for (i, f) in factors.iter().enumerate() {
        if !f.is_one() {
            torsion.push((f.clone(), chain_of(i)));
        }
    }
    let free = (factors.len()..z).map(chain_of).collect();
    Ok(IntegralClasses { free, torsion })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::chain_complex_of;
    use crate::complex::SimplicialComplex;

    fn octahedron() -> SimplicialComplex {
        let mut f = Vec::new();
        for a in [0, 1] {
            for b in [2, 3] {
                for c in [4, 5] {
                    f.push(vec![a, b, c]);
                }
            }
        }
        SimplicialComplex::new(6, f).unwrap()
    }

    #[test]
    fn sphere_betti() {
        for coeff in [Coeff::Z, Coeff::Z2] {
            let h = homology(&chain_complex_of(&octahedron(), coeff).unwrap()).unwrap();
            assert_eq!(h.betti, vec![1, 0, 1]);
            assert_eq!(h.euler_characteristic(), 2);
        }
    }

    #[test]
    fn circle_classes() {
        let k = SimplicialComplex::new(3, vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let cc = chain_complex_of(&k, Coeff::Z2).unwrap();
        let h1 = ClassBasis::compute(&cc, 1, Variance::Homology).unwrap();
        assert_eq!(h1.rank(), 1);
        assert_eq!(h1.representatives()[0].len(), 3);
        let c1 = ClassBasis::compute(&cc, 1, Variance::Cohomology).unwrap();
        assert_eq!(c1.rank(), 1);
        // Any single edge is a cocycle representing the generator.
        assert_eq!(c1.coordinates(&[0]).unwrap(), vec![true]);
        assert!(h1.coordinates(&[0]).is_err());
        let zint = integral_classes(&chain_complex_of(&k, Coeff::Z).unwrap(), 1).unwrap();
        assert_eq!(zint.free.len(), 1);
        assert!(zint.torsion.is_empty());
    }
}
