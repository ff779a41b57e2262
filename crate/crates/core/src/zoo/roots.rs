//! Root data of E_n (n ≤ 8) in doubled E8 coordinates, Weyl orbits of
//! fundamental weights, and facet search by weight orbits.
//!
//! Simple roots follow the Bourbaki numbering: the chain is 1-3-4-5-6-7-8
//! with node 2 attached to node 4, and E_n uses nodes 1..=n. All vectors are
//! integer; simple roots have squared norm 8, so the reflection in `α` is
//! `v ↦ v - (⟨v, α⟩ / 4) α`.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use num_integer::Integer;
use num_rational::Ratio;

use super::hull::affine_rank;
use crate::error::{Error, Result};

pub(crate) type Vector = Vec<i64>;

fn simple_root(i: usize) -> Vector {
    let mut v = vec![0i64; 8];
    match i {
        1 => {
            v = vec![1, -1, -1, -1, -1, -1, -1, 1];
        }
        2 => {
            v[0] = 2;
            v[1] = 2;
        }
        3 => {
            v[0] = -2;
            v[1] = 2;
        }
        _ => {
            v[i - 2] = 2;
            v[i - 3] = -2;
        }
    }
    v
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) struct RootSystem {
    roots: Vec<Vector>,
}

impl RootSystem {
    pub fn e(n: usize) -> Self {
        RootSystem {
            roots: (1..=n).map(simple_root).collect(),
        }
    }

    fn reflect(&self, v: &[i64], i: usize) -> Vector {
        let a = &self.roots[i];
        let c = dot(v, a);
        debug_assert_eq!(c % 4, 0, "orbit left the integer lattice");
        let c = c / 4;
        v.iter().zip(a).map(|(x, y)| x - c * y).collect()
    }

    /// The fundamental weight dual to simple root `j` (1-based), scaled to
    /// the smallest integer vector on its ray.
    pub fn fundamental_weight(&self, j: usize) -> Vector {
        let n = self.roots.len();
        // Solve Σ_k c_k ⟨α_i, α_k⟩ = 4 δ_ij over Q.
        let mut m: Vec<Vec<Ratio<i64>>> = (0..n)
            .map(|i| {
                let mut row: Vec<Ratio<i64>> =
                    (0..n).map(|k| Ratio::from_integer(dot(&self.roots[i], &self.roots[k]))).collect();
                row.push(Ratio::from_integer(if i + 1 == j { 4 } else { 0 }));
                row
            })
            .collect();
        for col in 0..n {
            let p = (col..n).find(|&r| m[r][col] != Ratio::from_integer(0)).expect("Cartan matrix is invertible");
            m.swap(col, p);
            let piv = m[col][col];
            for x in m[col].iter_mut() {
                *x /= piv;
            }
            for r in 0..n {
                if r != col {
                    let f = m[r][col];
                    if f != Ratio::from_integer(0) {
                        for k in 0..=n {
                            let sub = f * m[col][k];
                            m[r][k] -= sub;
                        }
                    }
                }
            }
        }
        let coeffs: Vec<Ratio<i64>> = (0..n).map(|r| m[r][n]).collect();
        let coords: Vec<Ratio<i64>> = (0..8)
            .map(|t| coeffs.iter().enumerate().map(|(k, c)| *c * self.roots[k][t]).sum())
            .collect();
        let denom = coords.iter().fold(1i64, |l, c| l.lcm(c.denom()));
        let ints: Vec<i64> = coords.iter().map(|c| (*c * denom).to_integer()).collect();
        let g = ints.iter().fold(0i64, |g, &x| g.gcd(&x));
        ints.iter().map(|x| x / g).collect()
    }

    /// Orbit of `start` under the Weyl group, or `None` if it exceeds `cap`.
    pub fn orbit(&self, start: &[i64], cap: usize) -> Option<Vec<Vector>> {
        // Multiplying by 4 keeps every reflection coefficient integral.
        let start: Vector = start.iter().map(|x| 4 * x).collect();
        let mut seen: HashSet<Vector> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start.clone());
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            for i in 0..self.roots.len() {
                let w = self.reflect(&v, i);
                if seen.insert(w.clone()) {
                    if seen.len() > cap {
                        return None;
                    }
                    queue.push_back(w);
                }
            }
        }
        let mut out: Vec<Vector> = seen.into_iter().collect();
        let g = out.iter().flatten().fold(0i64, |g, &x| g.gcd(&x)).max(1);
        for v in out.iter_mut() {
            for x in v.iter_mut() {
                *x /= g;
            }
        }
        out.sort();
        Some(out)
    }
}

/// Antipodal vertex pairs of a cross-polytope given by coordinates: `v + w`
/// equals twice the centroid.
pub(crate) fn antipodal_pairs(facet: &[usize], coords: &[Vector]) -> Option<Vec<(usize, usize)>> {
    let m = facet.len() as i64;
    let dim = coords[facet[0]].len();
    let sum: Vec<i64> = (0..dim).map(|t| facet.iter().map(|&v| coords[v][t]).sum()).collect();
    let mut pairs = Vec::new();
    for (i, &a) in facet.iter().enumerate() {
        for &b in &facet[i + 1..] {
            if (0..dim).all(|t| m * (coords[a][t] + coords[b][t]) == 2 * sum[t]) {
                pairs.push((a, b));
            }
        }
    }
    (pairs.len() * 2 == facet.len()).then_some(pairs)
}

/// Ridges of a simplex or cross-polytope facet.
fn ridges(facet: &[usize], n: usize, coords: &[Vector]) -> Result<Vec<Vec<usize>>> {
    if facet.len() == n {
        return Ok((0..n)
            .map(|skip| facet.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect())
            .collect());
    }
    if facet.len() == 2 * (n - 1) {
        let pairs = antipodal_pairs(facet, coords)
            .ok_or_else(|| Error::InvalidLattice("cross-polytope facet without antipodal pairs".into()))?;
        // A ridge picks one vertex from every antipodal pair.
        let mut out = Vec::with_capacity(1 << pairs.len());
        for mask in 0u64..(1 << pairs.len()) {
            let mut r: Vec<usize> = pairs
                .iter()
                .enumerate()
                .map(|(i, &(a, b))| if mask >> i & 1 == 1 { b } else { a })
                .collect();
            r.sort_unstable();
            out.push(r);
        }
        return Ok(out);
    }
    Err(Error::InvalidLattice(format!(
        "facet with {} vertices is neither a simplex nor a cross-polytope",
        facet.len()
    )))
}

/// Vertices and facets of the Wythoff polytope of E_n ringed at node `n`.
/// Facet normals are drawn from fundamental-weight orbits in increasing size
/// until every ridge lies in exactly two facets.
pub(crate) fn orbit_polytope(n: usize, orbit_cap: usize) -> Result<(Vec<Vector>, Vec<Vec<usize>>)> {
    let sys = RootSystem::e(n);
    let vertices = sys
        .orbit(&sys.fundamental_weight(n), orbit_cap)
        .ok_or_else(|| Error::BudgetExceeded {
            needed: "vertex orbit".into(),
            cap: orbit_cap as u64,
        })?;
    let mut candidates: Vec<Vec<Vector>> = (1..n)
        .filter_map(|j| sys.orbit(&sys.fundamental_weight(j), orbit_cap))
        .collect();
    candidates.sort_by_key(Vec::len);

    let mut facets: BTreeSet<Vec<usize>> = BTreeSet::new();
    for normals in candidates {
        for u in &normals {
            let vals: Vec<i64> = vertices.iter().map(|v| dot(u, v)).collect();
            let max = *vals.iter().max().unwrap();
            let face: Vec<usize> = (0..vertices.len()).filter(|&i| vals[i] == max).collect();
            if face.len() < n {
                continue;
            }
            let pts: Vec<&[i64]> = face.iter().map(|&i| vertices[i].as_slice()).collect();
            if affine_rank(&pts) == n - 1 {
                facets.insert(face);
            }
        }
        let mut ridge_count: HashMap<Vec<usize>, usize> = HashMap::new();
        for f in &facets {
            for r in ridges(f, n, &vertices)? {
                *ridge_count.entry(r).or_insert(0) += 1;
            }
        }
        if !facets.is_empty() && ridge_count.values().all(|&c| c == 2) {
            return Ok((vertices, facets.into_iter().collect()));
        }
    }
    Err(Error::InvalidLattice(format!(
        "weight orbits below the cap did not close up the boundary of the E{n} polytope"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_roots_have_norm_eight() {
        for i in 1..=8 {
            assert_eq!(dot(&simple_root(i), &simple_root(i)), 8);
        }
        assert_eq!(dot(&simple_root(1), &simple_root(3)), -4);
        assert_eq!(dot(&simple_root(2), &simple_root(4)), -4);
        assert_eq!(dot(&simple_root(2), &simple_root(3)), 0);
    }

    #[test]
    fn fundamental_weights_are_dual() {
        let sys = RootSystem::e(8);
        for j in 1..=8 {
            let w = sys.fundamental_weight(j);
            for i in 1..=8 {
                let d = dot(&w, &simple_root(i));
                assert_eq!(d != 0, i == j, "weight {j} against root {i}");
                assert!(d >= 0);
            }
        }
    }

    #[test]
    fn minuscule_orbit_sizes() {
        for (n, size) in [(4, 10), (5, 16), (6, 27), (7, 56), (8, 240)] {
            let sys = RootSystem::e(n);
            assert_eq!(sys.orbit(&sys.fundamental_weight(n), 100_000).unwrap().len(), size, "E{n}");
        }
    }
}
