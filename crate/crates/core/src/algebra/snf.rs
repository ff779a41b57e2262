//! Integer matrices and Smith normal form.
//!
//! The dense algorithm runs in checked `i128` arithmetic first and restarts in
//! `BigInt` if any intermediate value overflows. Large sparse boundary matrices
//! go through [`invariant_factors`], which removes unit pivots in place before
//! handing the (usually tiny) remainder to the dense routine.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::SparseIntMatrix;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{:?}", self.to_rows())
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<serde_json::Value>> = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| big_to_json(self.get(r, c))).collect())
            .collect();
        rows.serialize(s)
    }
}

/// JSON number when the value fits in `i64`, decimal string otherwise.
pub(crate) fn big_to_json(v: &BigInt) -> serde_json::Value {
    match i64::try_from(v) {
        Ok(x) => serde_json::Value::from(x),
        Err(_) => serde_json::Value::from(v.to_string()),
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            for (j, &x) in r.iter().enumerate() {
                m.set(i, j, BigInt::from(x));
            }
        }
        m
    }

    pub fn diagonal_matrix(rows: usize, cols: usize, diag: &[BigInt]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, d) in diag.iter().enumerate() {
            m.set(i, i, d.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|r| self.data[r * self.cols..(r + 1) * self.cols].to_vec())
            .collect()
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        out.data[r * other.cols + c] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|r| (0..self.cols).all(|c| r == c || self.get(r, c).is_zero()))
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            if p != k {
                a.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.determinant().abs().is_one()
    }
}

/// `A = U * D * V` with `U`, `V` unimodular and `D` diagonal with a
/// divisibility chain of nonnegative entries.
#[derive(Clone, Debug, Serialize)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    #[serde(skip)]
    pub u_inv: IntMatrix,
    #[serde(skip)]
    pub v_inv: IntMatrix,
}

impl SnfResult {
    /// Nonzero diagonal entries of `D`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d.get(i, i).clone())
            .filter(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

trait Scalar: Clone + PartialEq + Integer + Signed {
    fn mul_sub(&self, q: &Self, b: &Self) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl Scalar for i128 {
    fn mul_sub(&self, q: &Self, b: &Self) -> Option<Self> {
        q.checked_mul(*b).and_then(|p| self.checked_sub(p))
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Scalar for BigInt {
    fn mul_sub(&self, q: &Self, b: &Self) -> Option<Self> {
        Some(self - q * b)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

type Dense<T> = Vec<Vec<T>>;

fn identity<T: Scalar>(n: usize) -> Dense<T> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect()
}

struct Work<T> {
    a: Dense<T>,
    track: bool,
    u: Dense<T>,
    u_inv: Dense<T>,
    v: Dense<T>,
    v_inv: Dense<T>,
}

/// Unit of failure: some intermediate overflowed.
struct Overflow;

impl<T: Scalar> Work<T> {
    // Row i -= q * row j.
    fn row_sub(&mut self, i: usize, j: usize, q: &T) -> std::result::Result<(), Overflow> {
        if q.is_zero() {
            return Ok(());
        }
        for c in 0..self.a[0].len() {
            self.a[i][c] = self.a[i][c].mul_sub(q, &self.a[j][c]).ok_or(Overflow)?;
        }
        if self.track {
            let neg = T::zero() - q.clone();
            for r in 0..self.u.len() {
                self.u[r][j] = self.u[r][j].mul_sub(&neg, &self.u[r][i]).ok_or(Overflow)?;
            }
            for c in 0..self.u_inv[0].len() {
                self.u_inv[i][c] = self.u_inv[i][c].mul_sub(q, &self.u_inv[j][c]).ok_or(Overflow)?;
            }
        }
        Ok(())
    }

    // Column i -= q * column j.
    fn col_sub(&mut self, i: usize, j: usize, q: &T) -> std::result::Result<(), Overflow> {
        if q.is_zero() {
            return Ok(());
        }
        for r in 0..self.a.len() {
            self.a[r][i] = self.a[r][i].mul_sub(q, &self.a[r][j]).ok_or(Overflow)?;
        }
        if self.track {
            let neg = T::zero() - q.clone();
            for c in 0..self.v[0].len() {
                self.v[j][c] = self.v[j][c].mul_sub(&neg, &self.v[i][c]).ok_or(Overflow)?;
            }
            for r in 0..self.v_inv.len() {
                self.v_inv[r][i] = self.v_inv[r][i].mul_sub(q, &self.v_inv[r][j]).ok_or(Overflow)?;
            }
        }
        Ok(())
    }

    fn row_swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        if self.track {
            for row in self.u.iter_mut() {
                row.swap(i, j);
            }
            self.u_inv.swap(i, j);
        }
    }

    fn col_swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in self.a.iter_mut() {
            row.swap(i, j);
        }
        if self.track {
            self.v.swap(i, j);
            for row in self.v_inv.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    fn row_negate(&mut self, i: usize) {
        for x in self.a[i].iter_mut() {
            *x = T::zero() - x.clone();
        }
        if self.track {
            for row in self.u.iter_mut() {
                row[i] = T::zero() - row[i].clone();
            }
            for x in self.u_inv[i].iter_mut() {
                *x = T::zero() - x.clone();
            }
        }
    }

    fn run(&mut self) -> std::result::Result<(), Overflow> {
        let m = self.a.len();
        let n = if m == 0 { 0 } else { self.a[0].len() };
        for t in 0..m.min(n) {
            // Smallest nonzero entry of the trailing block becomes the pivot.
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if !self.a[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| self.a[i][j].abs() < self.a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            self.row_swap(t, bi);
            self.col_swap(t, bj);
            loop {
                let mut clean = true;
                for i in t + 1..m {
                    if !self.a[i][t].is_zero() {
                        let q = self.a[i][t].div_floor(&self.a[t][t]);
                        self.row_sub(i, t, &q)?;
                        clean &= self.a[i][t].is_zero();
                    }
                }
                for j in t + 1..n {
                    if !self.a[t][j].is_zero() {
                        let q = self.a[t][j].div_floor(&self.a[t][t]);
                        self.col_sub(j, t, &q)?;
                        clean &= self.a[t][j].is_zero();
                    }
                }
                if !clean {
                    let mut best = (t, t);
                    for i in t + 1..m {
                        let (bi, bj) = best;
                        if !self.a[i][t].is_zero() && self.a[i][t].abs() < self.a[bi][bj].abs() {
                            best = (i, t);
                        }
                    }
                    for j in t + 1..n {
                        let (bi, bj) = best;
                        if !self.a[t][j].is_zero() && self.a[t][j].abs() < self.a[bi][bj].abs() {
                            best = (t, j);
                        }
                    }
                    self.row_swap(t, best.0);
                    self.col_swap(t, best.1);
                    continue;
                }
                let bad = (t + 1..m).find(|&i| {
                    (t + 1..n).any(|j| !self.a[i][j].is_multiple_of(&self.a[t][t]))
                });
                match bad {
                    Some(i) => {
                        // Row t += row i brings the offending entry into the pivot row.
                        let minus_one = T::zero() - T::one();
                        self.row_sub(t, i, &minus_one)?;
                    }
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.row_negate(t);
            }
        }
        Ok(())
    }
}

fn attempt<T: Scalar>(a: &IntMatrix, conv: impl Fn(&BigInt) -> Option<T>, track: bool) -> Option<SnfResult> {
    let (m, n) = (a.rows, a.cols);
    let mut dense: Dense<T> = Vec::with_capacity(m);
    for r in 0..m {
        let mut row = Vec::with_capacity(n);
        for c in 0..n {
            row.push(conv(a.get(r, c))?);
        }
        dense.push(row);
    }
    let mut w = Work {
        a: dense,
        track,
        u: if track { identity(m) } else { Vec::new() },
        u_inv: if track { identity(m) } else { Vec::new() },
        v: if track { identity(n) } else { Vec::new() },
        v_inv: if track { identity(n) } else { Vec::new() },
    };
    if m > 0 && n > 0 {
        w.run().ok()?;
    }
    let to_int = |d: &Dense<T>, rows: usize, cols: usize| {
        let mut out = IntMatrix::zeros(rows, cols);
        for (r, row) in d.iter().enumerate() {
            for (c, x) in row.iter().enumerate() {
                out.set(r, c, x.to_big());
            }
        }
        out
    };
    let d = to_int(&w.a, m, n);
    let (u, u_inv, v, v_inv) = if track {
        (
            to_int(&w.u, m, m),
            to_int(&w.u_inv, m, m),
            to_int(&w.v, n, n),
            to_int(&w.v_inv, n, n),
        )
    } else {
        (
            IntMatrix::zeros(0, 0),
            IntMatrix::zeros(0, 0),
            IntMatrix::zeros(0, 0),
            IntMatrix::zeros(0, 0),
        )
    };
    Some(SnfResult { u, d, v, u_inv, v_inv })
}

fn snf(a: &IntMatrix, track: bool) -> SnfResult {
    attempt::<i128>(a, |x| i128::try_from(x).ok(), track)
        .or_else(|| attempt::<BigInt>(a, |x| Some(x.clone()), track))
        .expect("arbitrary precision elimination cannot overflow")
}

/// Smith normal form with transforms: `a = u * d * v`.
pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    snf(a, true)
}

/// Dense residual size above which sparse elimination gives up.
const DENSE_LIMIT: usize = 4_000_000;

/// Nonzero invariant factors of a sparse integer matrix, in divisibility order.
pub fn invariant_factors(m: &SparseIntMatrix) -> Result<Vec<BigInt>> {
    let mut cols: Vec<HashMap<u32, i64>> = m
        .columns()
        .iter()
        .map(|c| c.iter().copied().collect())
        .collect();
    let mut row_cols: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); m.rows()];
    for (j, c) in cols.iter().enumerate() {
        for &r in c.keys() {
            row_cols[r as usize].insert(j as u32);
        }
    }
    let mut active = vec![true; cols.len()];
    let mut units = 0usize;

    // Unit pivots: clear the pivot row with column operations, after which the
    // pivot row and column can both be dropped.
    let mut progress = true;
    while progress {
        progress = false;
        for c in 0..cols.len() {
            if !active[c] || cols[c].is_empty() {
                continue;
            }
            let pivot = cols[c]
                .iter()
                .filter(|(_, v)| v.abs() == 1)
                .map(|(&r, &v)| (row_cols[r as usize].len(), r, v))
                .min();
            let Some((_, r, pv)) = pivot else { continue };
            let others: Vec<u32> = row_cols[r as usize].iter().copied().filter(|&o| o as usize != c).collect();
            let pivot_col: Vec<(u32, i64)> = cols[c].iter().map(|(&k, &v)| (k, v)).collect();
            let mut overflow = false;
            for &o in &others {
                let o = o as usize;
                let factor = cols[o][&r] * pv;
                let mut updated = cols[o].clone();
                for &(k, v) in &pivot_col {
                    let e = updated.entry(k).or_insert(0);
                    match v.checked_mul(factor).and_then(|p| e.checked_sub(p)) {
                        Some(x) => *e = x,
                        None => {
                            overflow = true;
                            break;
                        }
                    }
                }
                if overflow {
                    break;
                }
                for &(k, _) in &pivot_col {
                    if updated[&k] == 0 {
                        updated.remove(&k);
                        row_cols[k as usize].remove(&(o as u32));
                    } else {
                        row_cols[k as usize].insert(o as u32);
                    }
                }
                cols[o] = updated;
            }
            if overflow {
                // Leave the remaining work to the arbitrary-precision routine.
                progress = false;
                break;
            }
            for &k in cols[c].keys() {
                row_cols[k as usize].remove(&(c as u32));
            }
            cols[c].clear();
            active[c] = false;
            units += 1;
            progress = true;
        }
    }

    let live_cols: Vec<usize> = (0..cols.len()).filter(|&c| active[c] && !cols[c].is_empty()).collect();
    let live_rows: Vec<usize> = (0..m.rows()).filter(|&r| !row_cols[r].is_empty()).collect();
    let mut factors = vec![BigInt::one(); units];
    if !live_cols.is_empty() {
        if live_cols.len() * live_rows.len() > DENSE_LIMIT {
            return Err(Error::BudgetExceeded {
                needed: format!("{}x{} dense residual", live_rows.len(), live_cols.len()),
                cap: DENSE_LIMIT as u64,
            });
        }
        let row_pos: HashMap<usize, usize> = live_rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let mut dense = IntMatrix::zeros(live_rows.len(), live_cols.len());
        for (j, &c) in live_cols.iter().enumerate() {
            for (&r, &v) in &cols[c] {
                dense.set(row_pos[&(r as usize)], j, BigInt::from(v));
            }
        }
        factors.extend(snf(&dense, false).invariant_factors());
    }
    // Unit factors divide everything, so prepending them keeps the chain.
    factors.sort();
    Ok(factors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check(a: &IntMatrix) -> SnfResult {
        let s = smith_normal_form(a);
        assert_eq!(&s.u.mul(&s.d).mul(&s.v), a);
        assert!(s.d.is_diagonal());
        assert!(s.u.is_unimodular() && s.v.is_unimodular());
        assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(a.rows()));
        assert_eq!(s.v_inv.mul(&s.v), IntMatrix::identity(a.cols()));
        let f = s.invariant_factors();
        for w in f.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        assert!(f.iter().all(|x| x.is_positive()));
        s
    }

    #[test]
    fn diag_two_three() {
        let s = check(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.invariant_factors(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn zero_matrix() {
        let s = check(&IntMatrix::zeros(3, 2));
        assert!(s.invariant_factors().is_empty());
    }

    #[test]
    fn empty_dimensions() {
        check(&IntMatrix::zeros(0, 3));
        check(&IntMatrix::zeros(2, 0));
    }

    #[test]
    fn overflowing_entries_use_big_integers() {
        let big = i64::MAX;
        let s = check(&IntMatrix::from_rows(&[vec![big, big - 1], vec![big - 2, big]]));
        assert_eq!(s.rank(), 2);
    }

    #[test]
    fn sparse_agrees_with_dense() {
        let a = IntMatrix::from_rows(&[vec![1, 1, 0], vec![0, 2, 4], vec![3, 1, 2], vec![0, 0, 6]]);
        let sparse = SparseIntMatrix::from_dense(&a).unwrap();
        assert_eq!(invariant_factors(&sparse).unwrap(), smith_normal_form(&a).invariant_factors());
    }

    #[test]
    fn determinant_small() {
        let a = IntMatrix::from_rows(&[vec![2, 1, 0], vec![1, 3, 1], vec![0, 1, 4]]);
        assert_eq!(a.determinant(), BigInt::from(18));
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-6i64..7, c), r)
        })
    }

    proptest! {
        #[test]
        fn reconstruction_and_divisibility(rows in small_matrix()) {
            let a = IntMatrix::from_rows(&rows);
            let s = check(&a);
            let sparse = SparseIntMatrix::from_dense(&a).unwrap();
            prop_assert_eq!(invariant_factors(&sparse).unwrap(), s.invariant_factors());
        }
    }
}
