//! Sparse column-major integer matrices and GF(2) column reduction.

use std::collections::HashMap;

use num_bigint::BigInt;

use super::IntMatrix;
use crate::error::{Error, Result};

/// Integer matrix stored by columns; each column is a list of `(row, value)`
/// with strictly increasing rows and nonzero values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(u32, i64)>>,
}

impl SparseIntMatrix {
    /// Builds a matrix from arbitrary column entry lists: entries are sorted,
    /// duplicates summed and zeros dropped.
    pub fn new(rows: usize, columns: Vec<Vec<(u32, i64)>>) -> Result<Self> {
        let cols = columns.len();
        let mut out = Vec::with_capacity(cols);
        for mut col in columns {
            col.sort_unstable_by_key(|e| e.0);
            let mut merged: Vec<(u32, i64)> = Vec::with_capacity(col.len());
            for (r, v) in col {
                if r as usize >= rows {
                    return Err(Error::IndexOutOfRange {
                        index: r as usize,
                        count: rows,
                    });
                }
                match merged.last_mut() {
                    Some(last) if last.0 == r => {
                        last.1 = last.1.checked_add(v).ok_or_else(|| {
                            Error::Unsupported("matrix entry overflows i64".into())
                        })?
                    }
                    _ => merged.push((r, v)),
                }
            }
            merged.retain(|e| e.1 != 0);
            out.push(merged);
        }
        Ok(SparseIntMatrix {
            rows,
            cols,
            columns: out,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseIntMatrix {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &[(u32, i64)] {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[Vec<(u32, i64)>] {
        &self.columns
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.columns[c]
            .binary_search_by_key(&(r as u32), |e| e.0)
            .map(|i| self.columns[c][i].1)
            .unwrap_or(0)
    }

    /// Reduction modulo 2, as sorted row lists.
    pub fn mod2_columns(&self) -> Vec<Vec<u32>> {
        self.columns
            .iter()
            .map(|c| c.iter().filter(|e| e.1 % 2 != 0).map(|e| e.0).collect())
            .collect()
    }

    pub fn transpose(&self) -> SparseIntMatrix {
        let mut t = vec![Vec::new(); self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for &(r, v) in col {
                t[r as usize].push((j as u32, v));
            }
        }
        SparseIntMatrix {
            rows: self.cols,
            cols: self.rows,
            columns: t,
        }
    }

    /// Appends the columns of `other` on the right.
    pub fn hcat(&self, other: &SparseIntMatrix) -> SparseIntMatrix {
        assert_eq!(self.rows, other.rows, "row count mismatch");
        let mut columns = self.columns.clone();
        columns.extend(other.columns.iter().cloned());
        SparseIntMatrix {
            rows: self.rows,
            cols: self.cols + other.cols,
            columns,
        }
    }

    pub fn to_dense(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.cols);
        for (j, col) in self.columns.iter().enumerate() {
            for &(r, v) in col {
                m.set(r as usize, j, BigInt::from(v));
            }
        }
        m
    }

    pub fn from_dense(m: &IntMatrix) -> Result<Self> {
        let mut columns = vec![Vec::new(); m.cols()];
        for (j, col) in columns.iter_mut().enumerate() {
            for r in 0..m.rows() {
                let v = m.get(r, j);
                if v != &BigInt::from(0) {
                    let v = i64::try_from(v)
                        .map_err(|_| Error::Unsupported("matrix entry exceeds i64".into()))?;
                    col.push((r as u32, v));
                }
            }
        }
        Ok(SparseIntMatrix {
            rows: m.rows(),
            cols: m.cols(),
            columns,
        })
    }

    /// Product `self * other`.
    pub fn mul(&self, other: &SparseIntMatrix) -> Result<SparseIntMatrix> {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let columns = other
            .columns
            .iter()
            .map(|col| {
                let mut acc: HashMap<u32, i64> = HashMap::new();
                for &(k, b) in col {
                    for &(r, a) in &self.columns[k as usize] {
                        let e = acc.entry(r).or_insert(0);
                        *e = a
                            .checked_mul(b)
                            .and_then(|p| e.checked_add(p))
                            .ok_or_else(|| Error::Unsupported("product overflows i64".into()))?;
                    }
                }
                Ok(acc.into_iter().collect())
            })
            .collect::<Result<Vec<_>>>()?;
        SparseIntMatrix::new(self.rows, columns)
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }
}

/// Symmetric difference of two sorted index lists.
pub(crate) fn symdiff(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Outcome of a GF(2) column reduction where the pivot of a column is its
/// largest row index.
#[derive(Clone, Debug, Default)]
pub(crate) struct Reduction {
    /// Pivot row to the column owning it.
    pub lows: HashMap<u32, usize>,
    /// Reduced columns; skipped columns are left empty.
    pub reduced: Vec<Vec<u32>>,
    /// Column combinations producing each reduced column, when tracked.
    pub combos: Vec<Vec<u32>>,
}

impl Reduction {
    pub fn rank(&self) -> usize {
        self.lows.len()
    }
}

/// Left-to-right GF(2) column reduction. Columns for which `skip` returns true
/// are not processed (they are known to reduce to zero).
pub(crate) fn reduce_gf2(
    columns: Vec<Vec<u32>>,
    skip: impl Fn(usize) -> bool,
    track: bool,
) -> Reduction {
    let n = columns.len();
    let mut red = Reduction {
        lows: HashMap::new(),
        reduced: Vec::with_capacity(n),
        combos: Vec::with_capacity(if track { n } else { 0 }),
    };
    for (j, mut col) in columns.into_iter().enumerate() {
        let mut combo = if track { vec![j as u32] } else { Vec::new() };
        if skip(j) {
            red.reduced.push(Vec::new());
            if track {
                red.combos.push(Vec::new());
            }
            continue;
        }
        while let Some(&low) = col.last() {
            match red.lows.get(&low) {
                Some(&owner) => {
                    col = symdiff(&col, &red.reduced[owner]);
                    if track {
                        combo = symdiff(&combo, &red.combos[owner]);
                    }
                }
                None => break,
            }
        }
        if let Some(&low) = col.last() {
            red.lows.insert(low, j);
        }
        red.reduced.push(col);
        if track {
            red.combos.push(combo);
        }
    }
    red
}

/// Rank over GF(2) of a matrix given by sorted row lists.
pub fn gf2_rank(columns: &[Vec<u32>]) -> usize {
    reduce_gf2(columns.to_vec(), |_| false, false).rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_and_drop_zeros() {
        let m = SparseIntMatrix::new(3, vec![vec![(2, 1), (0, 1), (2, -1)], vec![]]).unwrap();
        assert_eq!(m.column(0), &[(0, 1)]);
        assert_eq!(m.nnz(), 1);
        assert!(SparseIntMatrix::new(1, vec![vec![(1, 1)]]).is_err());
    }

    #[test]
    fn symdiff_sorted() {
        assert_eq!(symdiff(&[1, 3, 5], &[3, 4]), vec![1, 4, 5]);
    }

    #[test]
    fn gf2_rank_of_cycle() {
        // Boundary of a triangle: three edges over three vertices.
        assert_eq!(gf2_rank(&[vec![0, 1], vec![1, 2], vec![0, 2]]), 2);
    }

    #[test]
    fn tracked_combination_reproduces_reduced_column() {
        let cols = vec![vec![0, 1], vec![1, 2], vec![0, 2], vec![2, 3]];
        let red = reduce_gf2(cols.clone(), |_| false, true);
        for (j, combo) in red.combos.iter().enumerate() {
            let mut acc: Vec<u32> = Vec::new();
            for &c in combo {
                acc = symdiff(&acc, &cols[c as usize]);
            }
            assert_eq!(acc, red.reduced[j]);
        }
        assert!(red.reduced[2].is_empty());
    }

    #[test]
    fn product_and_transpose() {
        let a = SparseIntMatrix::new(2, vec![vec![(0, 1), (1, 2)], vec![(1, 3)]]).unwrap();
        let at = a.transpose();
        let p = a.mul(&at).unwrap();
        assert_eq!(p.get(0, 0), 1);
        assert_eq!(p.get(1, 1), 13);
        assert_eq!(p.get(0, 1), 2);
    }
}
