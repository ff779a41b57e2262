//! Exact integer geometry: ranks, hyperplanes and brute-force facet search.

use std::collections::BTreeSet;

/// Rank over Q of a list of integer vectors (fraction-free elimination with
/// gcd normalization of each row).
pub(crate) fn rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..m.len() {
            if m[i][c] == 0 {
                continue;
            }
            let (a, b) = (m[r][c], m[i][c]);
            for k in c..cols {
                m[i][k] = m[i][k] * a - m[r][k] * b;
            }
            let g = m[i].iter().fold(0i128, |g, &x| gcd(g, x.abs()));
            if g > 1 {
                for x in m[i].iter_mut() {
                    *x /= g;
                }
            }
        }
        r += 1;
    }
    r
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Dimension of the affine hull of the given points.
pub(crate) fn affine_rank(points: &[&[i64]]) -> usize {
    if points.is_empty() {
        return 0;
    }
    let base = points[0];
    let diffs: Vec<Vec<i64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    rank(&diffs)
}

fn det(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| m[i][k] != 0) else {
            return 0;
        };
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// Normal of the hyperplane through `d` points of `Z^d` (generalized cross
/// product of the edge vectors); zero if the points are affinely dependent.
fn normal(points: &[&[i64]]) -> Vec<i128> {
    let d = points[0].len();
    let diffs: Vec<Vec<i128>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(points[0]).map(|(a, b)| (a - b) as i128).collect())
        .collect();
    (0..d)
        .map(|j| {
            let minor: Vec<Vec<i128>> = diffs
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                .collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * det(minor)
        })
        .collect()
}

fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut cur: Option<Vec<usize>> = if k <= n { Some((0..k).collect()) } else { None };
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let c = cur.as_mut().unwrap();
        let mut i = k;
        loop {
            if i == 0 {
                cur = None;
                break;
            }
            i -= 1;
            if c[i] < n - k + i {
                c[i] += 1;
                for j in i + 1..k {
                    c[j] = c[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    })
}

/// Facets of the convex hull of a full-dimensional point set in `Z^d`, as
/// sorted lists of the points lying on each facet. Exhaustive over all
/// `d`-subsets, so only suitable for small inputs.
pub(crate) fn hull_facets(points: &[Vec<i64>]) -> Vec<Vec<usize>> {
    let d = points[0].len();
    let mut out: BTreeSet<Vec<usize>> = BTreeSet::new();
    for combo in combinations(points.len(), d) {
        if out.iter().any(|f| combo.iter().all(|c| f.binary_search(c).is_ok())) {
            continue;
        }
        let sel: Vec<&[i64]> = combo.iter().map(|&i| points[i].as_slice()).collect();
        let nrm = normal(&sel);
        if nrm.iter().all(|&x| x == 0) {
            continue;
        }
        let dot = |p: &[i64]| p.iter().zip(&nrm).map(|(&a, &b)| a as i128 * b).sum::<i128>();
        let c = dot(sel[0]);
        let sides: Vec<i128> = points.iter().map(|p| dot(p) - c).collect();
        if sides.iter().all(|&s| s >= 0) || sides.iter().all(|&s| s <= 0) {
            out.insert((0..points.len()).filter(|&i| sides[i] == 0).collect());
        }
    }
    out.into_iter().collect()
}
