//! Gosset polytopes G^n (3 ≤ n ≤ 8), their duals P^n with ideal vertices, and
//! right-angled Coxeter group data.

mod hull;
mod roots;

use std::collections::BTreeSet;
use std::path::PathBuf;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::algebra::{invariant_factors, SparseIntMatrix};
use crate::complex::{intersect_sorted, is_subset, Face, FaceLattice, Mark};
use crate::error::{Error, Result};

pub(crate) use roots::antipodal_pairs;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FacetKind {
    Simplex,
    CrossPolytope,
}

/// Cap on Weyl orbit sizes explored while searching for facet normals.
const ORBIT_CAP: usize = 50_000;

/// A Gosset polytope given by its vertex-facet incidences, with integer
/// vertex coordinates when it was generated rather than ingested.
#[derive(Clone, Debug)]
pub struct Gosset {
    n: usize,
    coordinates: Vec<Vec<i64>>,
    facets: Vec<Vec<usize>>,
    kinds: Vec<FacetKind>,
    lattice: Option<FaceLattice>,
}

fn classify(n: usize, facets: &[Vec<usize>]) -> Result<Vec<FacetKind>> {
    facets
        .iter()
        .map(|f| {
            if f.len() == n {
                Ok(FacetKind::Simplex)
            } else if f.len() == 2 * (n - 1) {
                Ok(FacetKind::CrossPolytope)
            } else {
                Err(Error::InvalidLattice(format!(
                    "facet with {} vertices is neither a simplex nor a cross-polytope",
                    f.len()
                )))
            }
        })
        .collect()
}

fn check_n(n: usize) -> Result<()> {
    if (3..=8).contains(&n) {
        Ok(())
    } else {
        Err(Error::DimensionOutOfRange(n))
    }
}

/// Location of an ingested lattice for `G^n`, if `CUSPFORGE_DATA` provides one.
pub fn data_file(n: usize) -> Option<PathBuf> {
    let dir = std::env::var_os("CUSPFORGE_DATA")?;
    let path = PathBuf::from(dir).join(format!("g{n}.json"));
    path.exists().then_some(path)
}

/// `G^n`, read from `CUSPFORGE_DATA` when a file is present and generated
/// otherwise.
pub fn gosset(n: usize) -> Result<Gosset> {
    check_n(n)?;
    if let Some(path) = data_file(n) {
        return Gosset::from_lattice(n, crate::io::read_face_lattice(&path)?);
    }
    match n {
        3..=5 => gosset_by_hull(n),
        _ => gosset_by_orbit(n),
    }
}

/// Explicit vertex coordinates and an exhaustive convex-hull facet search:
/// the triangular prism, the midpoints of the edges of the 4-simplex, and the
/// even-sign vertices of the 5-cube.
pub fn gosset_by_hull(n: usize) -> Result<Gosset> {
    let coordinates: Vec<Vec<i64>> = match n {
        3 => {
            let tri = [[0, 0], [1, 0], [0, 1]];
            [0, 1].iter().flat_map(|&z| tri.iter().map(move |p| vec![p[0], p[1], z])).collect()
        }
        4 => {
            let mut out = Vec::new();
            for i in 0..5 {
                for j in i + 1..5 {
                    let mut v = vec![0i64; 5];
                    v[i] = 1;
                    v[j] = 1;
                    v.pop();
                    out.push(v);
                }
            }
            out
        }
        5 => (0u32..32)
            .filter(|m| m.count_ones() % 2 == 0)
            .map(|m| (0..5).map(|i| if m >> i & 1 == 1 { -1 } else { 1 }).collect())
            .collect(),
        _ => return Err(Error::DimensionOutOfRange(n)),
    };
    let facets = hull::hull_facets(&coordinates);
    let kinds = classify(n, &facets)?;
    Ok(Gosset {
        n,
        coordinates,
        facets,
        kinds,
        lattice: None,
    })
}

/// Weyl orbit of the fundamental weight at node `n` of E_n, with facets found
/// from fundamental-weight orbits of facet normals.
pub fn gosset_by_orbit(n: usize) -> Result<Gosset> {
    if !(4..=8).contains(&n) {
        return Err(Error::DimensionOutOfRange(n));
    }
    let (coordinates, facets) = roots::orbit_polytope(n, ORBIT_CAP)?;
    let kinds = classify(n, &facets)?;
    Ok(Gosset {
        n,
        coordinates,
        facets,
        kinds,
        lattice: None,
    })
}

impl Gosset {
    /// Wraps a validated face lattice, checking that facets are simplices or
    /// cross-polytopes and that cross-polytopes (only) carry the ideal mark.
    pub fn from_lattice(n: usize, lattice: FaceLattice) -> Result<Self> {
        check_n(n)?;
        if lattice.rank() != n {
            return Err(Error::InvalidLattice(format!("rank {} but n = {n}", lattice.rank())));
        }
        lattice.validate()?;
        let vsets = lattice.vertex_sets();
        let mut facets = Vec::new();
        let mut marks = Vec::new();
        for (face, vs) in lattice.faces().iter().zip(&vsets) {
            if face.rank == n - 1 {
                facets.push(vs.clone());
                marks.push(face.mark);
            }
        }
        let kinds = classify(n, &facets)?;
        for (i, (k, m)) in kinds.iter().zip(&marks).enumerate() {
            if (*k == FacetKind::CrossPolytope) != (*m == Mark::Ideal) {
                return Err(Error::InvalidLattice(format!("facet {i} is {k:?} but marked {m:?}")));
            }
        }
        Ok(Gosset {
            n,
            coordinates: Vec::new(),
            facets,
            kinds,
            lattice: Some(lattice),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        self.coordinates.len().max(self.facets.iter().flatten().max().map_or(0, |m| m + 1))
    }

    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }

    /// Integer coordinates (empty for ingested polytopes).
    pub fn coordinates(&self) -> &[Vec<i64>] {
        &self.coordinates
    }

    /// Facets as sorted vertex lists.
    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn kinds(&self) -> &[FacetKind] {
        &self.kinds
    }

    pub fn count(&self, kind: FacetKind) -> usize {
        self.kinds.iter().filter(|&&k| k == kind).count()
    }

    fn marks(&self) -> Vec<Mark> {
        self.kinds
            .iter()
            .map(|k| if *k == FacetKind::CrossPolytope { Mark::Ideal } else { Mark::Real })
            .collect()
    }

    /// Full face lattice, with cross-polytope facets marked ideal. Faces are
    /// generated from facet intersections, which is costly for n = 8.
    pub fn lattice(&self) -> Result<FaceLattice> {
        if let Some(l) = &self.lattice {
            return Ok(l.clone());
        }
        FaceLattice::from_facet_vertex_sets(self.n, self.vertex_count(), &self.facets, &self.marks())
    }

    /// Vertex pairs spanning an edge: the intersection of all facets through
    /// both vertices is exactly the pair.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let nv = self.vertex_count();
        let words = nv.div_ceil(64);
        let bits: Vec<Vec<u64>> = self
            .facets
            .iter()
            .map(|f| {
                let mut b = vec![0u64; words];
                for &v in f {
                    b[v / 64] |= 1 << (v % 64);
                }
                b
            })
            .collect();
        let mut at: Vec<Vec<usize>> = vec![Vec::new(); nv];
        for (i, f) in self.facets.iter().enumerate() {
            for &v in f {
                at[v].push(i);
            }
        }
        let mut edges = Vec::new();
        for u in 0..nv {
            for w in u + 1..nv {
                let common = intersect_sorted(&at[u], &at[w]);
                if common.is_empty() {
                    continue;
                }
                let mut acc = bits[common[0]].clone();
                for &f in &common[1..] {
                    for (a, b) in acc.iter_mut().zip(&bits[f]) {
                        *a &= b;
                    }
                }
                if acc.iter().map(|x| x.count_ones()).sum::<u32>() == 2 {
                    edges.push((u, w));
                }
            }
        }
        edges
    }

    /// `P^n` from incidences alone: facets of `P^n` are the vertices of `G^n`
    /// and vertices of `P^n` are the facets of `G^n`, ideal exactly at the
    /// cross-polytopes. No face lattice is built.
    pub fn ideal_polytope(&self) -> Result<IdealPolytope> {
        let adjacency = self.edges();
        let p = IdealPolytope {
            rank: self.n,
            facet_count: self.vertex_count(),
            vertex_facets: self.facets.clone(),
            marks: self.marks(),
            adjacency,
            lattice: None,
        };
        p.check_vertex_degrees()?;
        if !self.coordinates.is_empty() {
            for (f, k) in self.facets.iter().zip(&self.kinds) {
                if *k == FacetKind::CrossPolytope && antipodal_pairs(f, &self.coordinates).is_none() {
                    return Err(Error::InvalidLattice("cross-polytope facet lacks antipodes".into()));
                }
            }
        }
        Ok(p)
    }
}

/// A polytope whose vertices are marked real or ideal. Real vertices are
/// simple; ideal vertices have cube links.
#[derive(Clone, Debug)]
pub struct IdealPolytope {
    rank: usize,
    facet_count: usize,
    vertex_facets: Vec<Vec<usize>>,
    marks: Vec<Mark>,
    adjacency: Vec<(usize, usize)>,
    lattice: Option<FaceLattice>,
}

/// `P^n` as the dual lattice of `G^n`, carrying the ideal marks over.
pub fn ideal_dual(g: &FaceLattice) -> Result<IdealPolytope> {
    IdealPolytope::from_lattice(g.dual()?)
}

impl IdealPolytope {
    pub fn from_lattice(p: FaceLattice) -> Result<Self> {
        let n = p.rank();
        let vertices: Vec<&Face> = p.vertices();
        let vertex_facets = vertices.iter().map(|v| v.facet_set.clone()).collect();
        let marks = vertices.iter().map(|v| v.mark).collect();
        let adjacency = p
            .faces_of_rank(n.saturating_sub(2))
            .filter(|f| f.facet_set.len() == 2)
            .map(|f| (f.facet_set[0], f.facet_set[1]))
            .collect();
        let ip = IdealPolytope {
            rank: n,
            facet_count: p.facet_count(),
            vertex_facets,
            marks,
            adjacency,
            lattice: None,
        };
        ip.check_vertex_degrees()?;
        for v in ip.ideal_vertices() {
            ip_axes(&p, &ip.vertex_facets[v])?;
        }
        Ok(IdealPolytope {
            lattice: Some(p),
            ..ip
        })
    }

    fn check_vertex_degrees(&self) -> Result<()> {
        let n = self.rank;
        for (i, (fs, m)) in self.vertex_facets.iter().zip(&self.marks).enumerate() {
            let expected = if *m == Mark::Ideal { 2 * (n - 1) } else { n };
            if fs.len() != expected {
                return Err(Error::InvalidLattice(format!(
                    "{m:?} vertex {i} lies in {} facets, expected {expected}",
                    fs.len()
                )));
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn facet_count(&self) -> usize {
        self.facet_count
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_facets.len()
    }

    pub fn lattice(&self) -> Option<&FaceLattice> {
        self.lattice.as_ref()
    }

    /// Facets through each vertex (vertex order of the lattice when present).
    pub fn vertex_facets(&self) -> &[Vec<usize>] {
        &self.vertex_facets
    }

    pub fn mark(&self, v: usize) -> Mark {
        self.marks[v]
    }

    pub fn ideal_vertices(&self) -> Vec<usize> {
        (0..self.marks.len()).filter(|&v| self.marks[v] == Mark::Ideal).collect()
    }

    pub fn real_vertices(&self) -> Vec<usize> {
        (0..self.marks.len()).filter(|&v| self.marks[v] == Mark::Real).collect()
    }

    /// Pairs of facets sharing a ridge.
    pub fn facet_adjacency(&self) -> &[(usize, usize)] {
        &self.adjacency
    }

    pub fn racg(&self) -> RACGData {
        RACGData {
            facet_count: self.facet_count,
            commuting_pairs: self.adjacency.clone(),
        }
    }

    /// Opposite facet pairs of the cube link at an ideal vertex, sorted by
    /// their smaller element. Needs the face lattice.
    pub fn axes(&self, v: usize) -> Result<Vec<(usize, usize)>> {
        if self.marks.get(v) != Some(&Mark::Ideal) {
            return Err(Error::InvalidChoice(format!("vertex {v} is not ideal")));
        }
        let p = self
            .lattice
            .as_ref()
            .ok_or_else(|| Error::Unsupported("cube-link axes need the face lattice".into()))?;
        ip_axes(p, &self.vertex_facets[v])
    }
}

/// Opposite facet pairs at a vertex whose link should be an (n-1)-cube: two
/// facets are opposite when no edge through the vertex lies in both.
pub(crate) fn ip_axes(p: &FaceLattice, s_v: &[usize]) -> Result<Vec<(usize, usize)>> {
    let n = p.rank();
    let edges: Vec<&Face> = p.faces_of_rank(1).filter(|e| is_subset(&e.facet_set, s_v)).collect();
    let bad = |why: &str| Error::InvalidLattice(format!("link at vertex {s_v:?} is not a cube: {why}"));
    if edges.len() != 1 << (n - 1) || edges.iter().any(|e| e.facet_set.len() != n - 1) {
        return Err(bad("wrong edge count"));
    }
    let mut pairs = Vec::new();
    let mut used = BTreeSet::new();
    for (i, &a) in s_v.iter().enumerate() {
        for &b in &s_v[i + 1..] {
            let together = edges.iter().any(|e| e.facet_set.contains(&a) && e.facet_set.contains(&b));
            if !together {
                if !used.insert(a) || !used.insert(b) {
                    return Err(bad("a facet has two opposites"));
                }
                pairs.push((a, b));
            }
        }
    }
    if pairs.len() != n - 1 {
        return Err(bad("opposite facets do not pair up"));
    }
    for e in &edges {
        if pairs.iter().any(|&(a, b)| e.facet_set.contains(&a) == e.facet_set.contains(&b)) {
            return Err(bad("an edge misses an axis"));
        }
    }
    pairs.sort();
    Ok(pairs)
}

/// Right-angled Coxeter group data: one involution per facet, commuting when
/// the facets are adjacent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RACGData {
    pub facet_count: usize,
    pub commuting_pairs: Vec<(usize, usize)>,
}

/// Number of `Z/2` summands in the abelianization. In the abelianization the
/// commutator relations vanish and each generator keeps `2 s = 0`, so the
/// relation matrix is `2 I`; its invariant factors are counted directly.
pub fn abelianization_rank(r: &RACGData) -> usize {
    let columns = (0..r.facet_count).map(|i| vec![(i as u32, 2)]).collect();
    let rel = SparseIntMatrix::new(r.facet_count, columns).expect("diagonal relation matrix");
    let factors = invariant_factors(&rel).expect("diagonal matrices need no dense fallback");
    factors.iter().filter(|&f| *f == BigInt::from(2)).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prism_by_hull() {
        let g = gosset(3).unwrap();
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.count(FacetKind::Simplex), 2);
        assert_eq!(g.count(FacetKind::CrossPolytope), 3);
        let l = g.lattice().unwrap();
        l.validate().unwrap();
        assert_eq!(l.f_vector(), vec![6, 9, 5]);
    }

    #[test]
    fn bipyramid_dual() {
        let p = ideal_dual(&gosset(3).unwrap().lattice().unwrap()).unwrap();
        assert_eq!(p.facet_count(), 6);
        assert_eq!(p.ideal_vertices().len(), 3);
        assert_eq!(p.real_vertices().len(), 2);
        for v in p.ideal_vertices() {
            assert_eq!(p.axes(v).unwrap().len(), 2);
        }
        assert_eq!(abelianization_rank(&p.racg()), 6);
    }

    #[test]
    fn incidence_and_lattice_paths_agree() {
        let g = gosset(4).unwrap();
        let a = g.ideal_polytope().unwrap();
        let b = ideal_dual(&g.lattice().unwrap()).unwrap();
        assert_eq!(a.ideal_vertices().len(), b.ideal_vertices().len());
        assert_eq!(a.facet_adjacency().len(), b.facet_adjacency().len());
    }

    #[test]
    fn out_of_range() {
        assert!(matches!(gosset(2), Err(Error::DimensionOutOfRange(2))));
        assert!(matches!(gosset(9), Err(Error::DimensionOutOfRange(9))));
    }

    #[test]
    fn orbit_construction_matches_hull() {
        use crate::complex::{find_set_isomorphism, SetSystem};
        for n in 4..=5 {
            let a = gosset_by_hull(n).unwrap();
            let b = gosset_by_orbit(n).unwrap();
            assert_eq!(a.vertex_count(), b.vertex_count());
            for k in [FacetKind::Simplex, FacetKind::CrossPolytope] {
                assert_eq!(a.count(k), b.count(k));
            }
            let sys = |g: &Gosset| SetSystem {
                points: g.vertex_count(),
                blocks: g.facets().to_vec(),
            };
            assert!(find_set_isomorphism(&sys(&a), &sys(&b)).is_some(), "n = {n}");
        }
    }

    #[test]
    fn large_gosset_counts() {
        for (n, v, s, c) in [(6, 27, 72, 27), (7, 56, 576, 126), (8, 240, 17280, 2160)] {
            let g = gosset_by_orbit(n).unwrap();
            assert_eq!(g.vertex_count(), v);
            assert_eq!(g.count(FacetKind::Simplex), s, "E{n}");
            assert_eq!(g.count(FacetKind::CrossPolytope), c, "E{n}");
        }
    }
}
