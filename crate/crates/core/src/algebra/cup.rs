//! GF(2) cochains on cube complexes and the cubical cup product.
//!
//! On a cell with free coordinates `S`, for every split `S = A ⊔ B` with
//! `|A| = k`, the front face is the `A`-cell obtained by setting the `B`
//! coordinates to `-1` and the back face is the `B`-cell obtained by setting
//! the `A` coordinates to `+1`. Then `(a ⌣ b)(c) = Σ a(front) b(back)`.

use crate::complex::{bit_indices, submasks, CubeCell, CubicalComplex};
use super::GF2Matrix;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    pub degree: usize,
    pub values: Vec<bool>,
}

impl Cochain {
    pub fn zero(z: &CubicalComplex, degree: usize) -> Self {
        Cochain {
            degree,
            values: vec![false; cells_in(z, degree)],
        }
    }

    pub fn from_indices(z: &CubicalComplex, degree: usize, indices: &[u32]) -> Self {
        let mut c = Self::zero(z, degree);
        for &i in indices {
            c.values[i as usize] ^= true;
        }
        c
    }

    pub fn support(&self) -> Vec<u32> {
        self.values.iter().enumerate().filter(|e| *e.1).map(|e| e.0 as u32).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&x| !x)
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        assert_eq!(self.degree, other.degree, "degree mismatch");
        Cochain {
            degree: self.degree,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a ^ b).collect(),
        }
    }
}

fn cells_in(z: &CubicalComplex, degree: usize) -> usize {
    if (degree as isize) <= z.dim() {
        z.cells(degree).len()
    } else {
        0
    }
}

fn check_shape(z: &CubicalComplex, a: &Cochain) -> Result<()> {
    if a.values.len() != cells_in(z, a.degree) {
        return Err(Error::Precondition(format!(
            "cochain of degree {} has {} values, complex has {} cells",
            a.degree,
            a.values.len(),
            cells_in(z, a.degree)
        )));
    }
    Ok(())
}

/// `(δa)(c) = a(∂c)` over GF(2).
pub fn coboundary(z: &CubicalComplex, a: &Cochain) -> Result<Cochain> {
    check_shape(z, a)?;
    let d = a.degree + 1;
    let mut out = Cochain::zero(z, d);
    if out.values.is_empty() {
        return Ok(out);
    }
    for (i, c) in z.cells(d).iter().enumerate() {
        let mut acc = false;
        for axis in bit_indices(c.support) {
            for plus in [false, true] {
                let (face, _) = z.face_of(c, axis, plus);
                let j = z.index_of(&face).expect("closed complex");
                acc ^= a.values[j];
            }
        }
        out.values[i] = acc;
    }
    Ok(out)
}

pub fn is_cocycle(z: &CubicalComplex, a: &Cochain) -> Result<bool> {
    Ok(coboundary(z, a)?.is_zero())
}

/// Cup product of two cochains together with a flag telling whether both
/// inputs were cocycles. The product is computed either way.
#[derive(Clone, Debug)]
pub struct CupOutput {
    pub product: Cochain,
    pub inputs_are_cocycles: bool,
}

pub fn cup_product(z: &CubicalComplex, a: &Cochain, b: &Cochain) -> Result<CupOutput> {
    if z.is_quotient() {
        return Err(Error::Unsupported(
            "the front/back cup product needs a complex without sign identifications".into(),
        ));
    }
    check_shape(z, a)?;
    check_shape(z, b)?;
    let (k, l) = (a.degree, b.degree);
    let mut product = Cochain::zero(z, k + l);
    if !product.values.is_empty() {
        for (i, c) in z.cells(k + l).iter().enumerate() {
            let mut acc = false;
            for front_axes in submasks(c.support).filter(|s| s.count_ones() as usize == k) {
                let back_axes = c.support & !front_axes;
                let front = CubeCell::new(front_axes, c.signs);
                let back = CubeCell::new(back_axes, c.signs | front_axes);
                let fa = a.values[z.index_of(&front).expect("closed complex")];
                if fa {
                    acc ^= b.values[z.index_of(&back).expect("closed complex")];
                }
            }
            product.values[i] = acc;
        }
    }
    let inputs_are_cocycles = is_cocycle(z, a)? && is_cocycle(z, b)?;
    Ok(CupOutput {
        product,
        inputs_are_cocycles,
    })
}

/// Evaluation on the GF(2) fundamental class, the sum of all top cells.
pub fn evaluate_top(z: &CubicalComplex, a: &Cochain) -> Result<bool> {
    if z.dim() < 0 || a.degree != z.dim() as usize {
        return Err(Error::Precondition("evaluation needs a top-degree cochain".into()));
    }
    check_shape(z, a)?;
    Ok(a.values.iter().filter(|&&x| x).count() % 2 == 1)
}

/// The matrix `Q[i][j] = ⟨a_i ⌣ b_j, [Z]⟩` for cochains `a_i` of degree `k`
/// and `b_j` of degree `dim Z - k`.
///
/// Equivalent to calling [`cup_product`] and [`evaluate_top`] for every pair,
/// but walks the top cells once and accumulates rows as bitsets.
pub fn cup_pairing(z: &CubicalComplex, left: &[Cochain], right: &[Cochain]) -> Result<GF2Matrix> {
    if z.is_quotient() {
        return Err(Error::Unsupported(
            "the front/back cup product needs a complex without sign identifications".into(),
        ));
    }
    if z.dim() < 0 {
        return Err(Error::EmptyComplex);
    }
    let n = z.dim() as usize;
    let mut q = GF2Matrix::zeros(left.len(), right.len());
    let (Some(a0), Some(b0)) = (left.first(), right.first()) else {
        return Ok(q);
    };
    let (k, l) = (a0.degree, b0.degree);
    if k + l != n || left.iter().any(|a| a.degree != k) || right.iter().any(|b| b.degree != l) {
        return Err(Error::Precondition(format!(
            "pairing needs degrees adding up to the dimension {n}"
        )));
    }
    for c in left.iter().chain(right) {
        check_shape(z, c)?;
    }
    // Per cell, the set of cochains that are nonzero on it.
    let bitsets = |cochains: &[Cochain], degree: usize| -> Vec<Vec<u64>> {
        let words = cochains.len().div_ceil(64);
        let mut out = vec![vec![0u64; words]; cells_in(z, degree)];
        for (i, c) in cochains.iter().enumerate() {
            for (cell, &v) in c.values.iter().enumerate() {
                if v {
                    out[cell][i / 64] |= 1 << (i % 64);
                }
            }
        }
        out
    };
    let on_left = bitsets(left, k);
    let on_right = bitsets(right, l);
    let mut rows = vec![vec![0u64; right.len().div_ceil(64)]; left.len()];
    for c in z.cells(n) {
        for front_axes in submasks(c.support).filter(|s| s.count_ones() as usize == k) {
            let back_axes = c.support & !front_axes;
            let front = z.index_of(&CubeCell::new(front_axes, c.signs)).expect("closed complex");
            let fs = &on_left[front];
            if fs.iter().all(|&w| w == 0) {
                continue;
            }
            let back = z
                .index_of(&CubeCell::new(back_axes, c.signs | front_axes))
                .expect("closed complex");
            let bs = &on_right[back];
            if bs.iter().all(|&w| w == 0) {
                continue;
            }
            for (wi, &word) in fs.iter().enumerate() {
                let mut w = word;
                while w != 0 {
                    let i = wi * 64 + w.trailing_zeros() as usize;
                    w &= w - 1;
                    for (dst, &src) in rows[i].iter_mut().zip(bs) {
                        *dst ^= src;
                    }
                }
            }
        }
    }
    for (i, row) in rows.iter().enumerate() {
        for j in 0..right.len() {
            if row[j / 64] >> (j % 64) & 1 == 1 {
                q.set(i, j, true);
            }
        }
    }
    Ok(q)
}
