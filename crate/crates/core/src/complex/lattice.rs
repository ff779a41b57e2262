use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Vertex type of a polytope with ideal vertices. On a Gosset polytope the
/// same tag marks cross-polytope facets (the duals of ideal vertices).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mark {
    #[default]
    Real,
    Ideal,
}

/// A proper face, encoded by the sorted set of facets containing it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Face {
    pub rank: usize,
    pub facet_set: Vec<usize>,
    pub mark: Mark,
}

/// Boundary face poset of an abstract `rank`-polytope with `facet_count`
/// facets. Faces are sorted by `(rank, facet_set)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceLattice {
    rank: usize,
    facet_count: usize,
    faces: Vec<Face>,
    index: HashMap<Vec<usize>, usize>,
}

impl FaceLattice {
    /// Builds a lattice from proper faces. Facet `i` must appear as the rank
    /// `rank - 1` face with facet set `[i]`; face sets must be distinct.
    pub fn new(rank: usize, facet_count: usize, mut faces: Vec<Face>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidLattice("rank must be positive".into()));
        }
        for face in &mut faces {
            if face.rank >= rank {
                return Err(Error::InvalidLattice(format!(
                    "face rank {} not below polytope rank {rank}",
                    face.rank
                )));
            }
            face.facet_set.sort_unstable();
            face.facet_set.dedup();
            if let Some(&bad) = face.facet_set.iter().find(|&&i| i >= facet_count) {
                return Err(Error::IndexOutOfRange {
                    index: bad,
                    count: facet_count,
                });
            }
            if face.facet_set.is_empty() {
                return Err(Error::InvalidLattice("face contained in no facet".into()));
            }
        }
        faces.sort_by(|a, b| (a.rank, &a.facet_set).cmp(&(b.rank, &b.facet_set)));
        let mut index = HashMap::with_capacity(faces.len());
        for (i, face) in faces.iter().enumerate() {
            if index.insert(face.facet_set.clone(), i).is_some() {
                return Err(Error::InvalidLattice(format!(
                    "duplicate face with facet set {:?}",
                    face.facet_set
                )));
            }
        }
        for i in 0..facet_count {
            match index.get(&vec![i]) {
                Some(&j) if faces[j].rank == rank - 1 => {}
                _ => {
                    return Err(Error::InvalidLattice(format!("facet {i} missing")));
                }
            }
        }
        Ok(FaceLattice {
            rank,
            facet_count,
            faces,
            index,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn facet_count(&self) -> usize {
        self.facet_count
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn faces_of_rank(&self, k: usize) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(move |f| f.rank == k)
    }

    pub fn face(&self, facet_set: &[usize]) -> Option<&Face> {
        self.index.get(facet_set).map(|&i| &self.faces[i])
    }

    pub fn vertices(&self) -> Vec<&Face> {
        self.faces_of_rank(0).collect()
    }

    /// Number of faces of each rank, vertices first.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.rank];
        for face in &self.faces {
            f[face.rank] += 1;
        }
        f
    }

    /// Alternating sum of the f-vector of the boundary.
    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    /// Whether every face of rank `n - k` lies in exactly `k` facets.
    pub fn is_simple(&self) -> bool {
        self.first_non_simple().is_none()
    }

    pub(crate) fn first_non_simple(&self) -> Option<&Face> {
        self.faces
            .iter()
            .find(|f| f.facet_set.len() != self.rank - f.rank)
    }

    /// Indices (into [`FaceLattice::vertices`]) of the vertices of every face.
    pub fn vertex_sets(&self) -> Vec<Vec<usize>> {
        let vertices = self.vertices();
        let mut by_facet: Vec<Vec<usize>> = vec![Vec::new(); self.facet_count];
        for (vi, v) in vertices.iter().enumerate() {
            for &f in &v.facet_set {
                by_facet[f].push(vi);
            }
        }
        self.faces
            .iter()
            .map(|face| {
                let mut acc: Option<Vec<usize>> = None;
                for &f in &face.facet_set {
                    acc = Some(match acc {
                        None => by_facet[f].clone(),
                        Some(cur) => intersect_sorted(&cur, &by_facet[f]),
                    });
                }
                acc.unwrap_or_default()
            })
            .collect()
    }

    /// Faces of the dual polytope: a face of rank `k` becomes a face of rank
    /// `n - 1 - k` whose facet set is the vertex set of the original face. Marks
    /// travel with the faces.
    pub fn dual(&self) -> Result<FaceLattice> {
        let vsets = self.vertex_sets();
        let nverts = self.faces_of_rank(0).count();
        let faces = self
            .faces
            .iter()
            .zip(vsets)
            .map(|(face, vs)| Face {
                rank: self.rank - 1 - face.rank,
                facet_set: vs,
                mark: face.mark,
            })
            .collect();
        FaceLattice::new(self.rank, nverts, faces)
    }

    /// Checks the structural axioms: faces are determined by their vertices,
    /// every face has a vertex, meets with facets exist, ranks are graded and
    /// the boundary Euler relation holds.
    pub fn validate(&self) -> Result<()> {
        let vsets = self.vertex_sets();
        let vertices = self.vertices();
        let by_vertices: HashMap<&[usize], usize> =
            vsets.iter().enumerate().map(|(i, v)| (v.as_slice(), i)).collect();
        if by_vertices.len() != self.faces.len() {
            return Err(Error::InvalidLattice(
                "two faces share the same vertex set".into(),
            ));
        }
        for (face, vs) in self.faces.iter().zip(&vsets) {
            if vs.is_empty() {
                return Err(Error::InvalidLattice(format!(
                    "face {:?} has no vertices",
                    face.facet_set
                )));
            }
            // Galois closure: the facets containing all vertices are exactly the face's facets.
            let mut common: Option<Vec<usize>> = None;
            for &v in vs {
                let fs = &vertices[v].facet_set;
                common = Some(match common {
                    None => fs.clone(),
                    Some(c) => intersect_sorted(&c, fs),
                });
            }
            if common.as_deref() != Some(face.facet_set.as_slice()) {
                return Err(Error::InvalidLattice(format!(
                    "face {:?} is not closed",
                    face.facet_set
                )));
            }
        }
        // Meets with facets: intersecting a face with a facet gives a face or
        // nothing, and the maximal proper meets sit exactly one rank lower.
        let facet_vsets: Vec<&Vec<usize>> = (0..self.facet_count)
            .map(|i| &vsets[self.index[&vec![i]]])
            .collect();
        for (face, vs) in self.faces.iter().zip(&vsets) {
            let touching: BTreeSet<usize> = vs
                .iter()
                .flat_map(|&v| vertices[v].facet_set.iter().copied())
                .collect();
            let mut proper: BTreeSet<Vec<usize>> = BTreeSet::new();
            for f in touching {
                let meet = intersect_sorted(vs, facet_vsets[f]);
                if meet.is_empty() || meet.len() == vs.len() {
                    continue;
                }
                if !by_vertices.contains_key(meet.as_slice()) {
                    return Err(Error::InvalidLattice(format!(
                        "meet of face {:?} with facet {f} is not a face",
                        face.facet_set
                    )));
                }
                proper.insert(meet);
            }
            if face.rank == 0 {
                if vs.len() != 1 {
                    return Err(Error::InvalidLattice("vertex with several vertices".into()));
                }
                continue;
            }
            if proper.is_empty() {
                return Err(Error::InvalidLattice(format!(
                    "face {:?} of rank {} has no proper faces",
                    face.facet_set, face.rank
                )));
            }
            for m in &proper {
                let maximal = proper
                    .iter()
                    .all(|o| o == m || o.len() <= m.len() || !is_subset(m, o));
                if maximal && self.faces[by_vertices[m.as_slice()]].rank + 1 != face.rank {
                    return Err(Error::InvalidLattice(format!(
                        "face {:?} of rank {} is not graded",
                        face.facet_set, face.rank
                    )));
                }
            }
        }
        let expected = 1 - if self.rank.is_multiple_of(2) { 1 } else { -1 };
        if self.euler_characteristic() != expected {
            return Err(Error::InvalidLattice(format!(
                "boundary Euler characteristic {} differs from {expected}",
                self.euler_characteristic()
            )));
        }
        Ok(())
    }

    /// Builds the full lattice of a polytope from the vertex sets of its facets,
    /// by repeatedly taking maximal proper intersections with facets.
    pub fn from_facet_vertex_sets(
        rank: usize,
        vertex_count: usize,
        facets: &[Vec<usize>],
        facet_marks: &[Mark],
    ) -> Result<FaceLattice> {
        let words = vertex_count.div_ceil(64);
        let to_bits = |vs: &[usize]| {
            let mut b = vec![0u64; words];
            for &v in vs {
                b[v / 64] |= 1 << (v % 64);
            }
            b
        };
        let facet_bits: Vec<Vec<u64>> = facets.iter().map(|f| to_bits(f)).collect();
        let mut facets_at: Vec<Vec<usize>> = vec![Vec::new(); vertex_count];
        for (i, f) in facets.iter().enumerate() {
            for &v in f {
                facets_at[v].push(i);
            }
        }
        if let Some(v) = facets_at.iter().position(|fs| fs.is_empty()) {
            return Err(Error::InvalidLattice(format!("vertex {v} lies in no facet")));
        }
        let mut all: HashMap<Vec<u64>, usize> = HashMap::new();
        let mut layer: Vec<Vec<u64>> = facet_bits.clone();
        for b in &layer {
            all.insert(b.clone(), rank - 1);
        }
        let mut r = rank - 1;
        while r > 0 {
            let mut next: BTreeSet<Vec<u64>> = BTreeSet::new();
            for face in &layer {
                let mut touching: BTreeSet<usize> = BTreeSet::new();
                for v in bits_iter(face) {
                    touching.extend(facets_at[v].iter().copied());
                }
                let mut cands: BTreeSet<Vec<u64>> = BTreeSet::new();
                for f in touching {
                    let meet: Vec<u64> = face.iter().zip(&facet_bits[f]).map(|(a, b)| a & b).collect();
                    if meet != *face && meet.iter().any(|&w| w != 0) {
                        cands.insert(meet);
                    }
                }
                let cands: Vec<Vec<u64>> = cands.into_iter().collect();
                for (i, c) in cands.iter().enumerate() {
                    let maximal = cands
                        .iter()
                        .enumerate()
                        .all(|(j, d)| i == j || !bits_subset(c, d) || c == d);
                    if maximal {
                        next.insert(c.clone());
                    }
                }
            }
            r -= 1;
            for b in &next {
                if let Some(&old) = all.get(b) {
                    if old != r {
                        return Err(Error::InvalidLattice(
                            "face appears at two different ranks".into(),
                        ));
                    }
                } else {
                    all.insert(b.clone(), r);
                }
            }
            layer = next.into_iter().collect();
        }
        let mut faces = Vec::with_capacity(all.len());
        for (bits, rk) in all {
            let facet_set: Vec<usize> = (0..facets.len())
                .filter(|&f| bits_subset(&bits, &facet_bits[f]))
                .collect();
            let mark = if rk == rank - 1 {
                facet_marks.get(facet_set[0]).copied().unwrap_or_default()
            } else {
                Mark::Real
            };
            faces.push(Face {
                rank: rk,
                facet_set,
                mark,
            });
        }
        let vertices_as_faces = faces.iter().filter(|f| f.rank == 0).count();
        if vertices_as_faces != vertex_count {
            return Err(Error::InvalidLattice(format!(
                "{vertices_as_faces} vertices recovered, {vertex_count} expected"
            )));
        }
        FaceLattice::new(rank, facets.len(), faces)
    }
}

fn bits_iter(b: &[u64]) -> impl Iterator<Item = usize> + '_ {
    b.iter().enumerate().flat_map(|(w, &word)| {
        (0..64).filter(move |i| word >> i & 1 == 1).map(move |i| w * 64 + i)
    })
}

fn bits_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

pub(crate) fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

pub(crate) fn is_subset(a: &[usize], b: &[usize]) -> bool {
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j == b.len() || b[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The 3-cube: facets 0/1, 2/3, 4/5 are opposite pairs.
    pub(crate) fn cube() -> FaceLattice {
        let mut faces = Vec::new();
        for k in 0..3 {
            // faces of rank k are contained in 3 - k facets.
            let choose = 3 - k;
            for axes in (0u32..8).filter(|m| m.count_ones() as usize == choose) {
                let axes: Vec<usize> = (0..3).filter(|a| axes >> a & 1 == 1).collect();
                for signs in 0..(1 << axes.len()) {
                    let facet_set = axes
                        .iter()
                        .enumerate()
                        .map(|(i, &a)| 2 * a + (signs >> i & 1))
                        .collect();
                    faces.push(Face {
                        rank: k,
                        facet_set,
                        mark: Mark::Real,
                    });
                }
            }
        }
        FaceLattice::new(3, 6, faces).unwrap()
    }

    #[test]
    fn cube_is_simple_and_valid() {
        let c = cube();
        assert_eq!(c.f_vector(), vec![8, 12, 6]);
        assert!(c.is_simple());
        c.validate().unwrap();
        assert_eq!(c.euler_characteristic(), 2);
    }

    #[test]
    fn cube_dual_is_octahedron() {
        let oct = cube().dual().unwrap();
        assert_eq!(oct.f_vector(), vec![6, 12, 8]);
        oct.validate().unwrap();
        assert!(!oct.is_simple());
        // The double dual agrees with the cube up to a relabelling of facets.
        let back = oct.dual().unwrap();
        let sys = |l: &FaceLattice| crate::complex::SetSystem {
            points: l.facet_count(),
            blocks: l.vertices().iter().map(|v| v.facet_set.clone()).collect(),
        };
        assert!(crate::complex::find_set_isomorphism(&sys(&back), &sys(&cube())).is_some());
    }

    #[test]
    fn from_facets_recovers_cube() {
        let c = cube();
        let oct = c.dual().unwrap();
        // Facets of the octahedron as vertex sets are the vertex facet-sets of the cube.
        let facets: Vec<Vec<usize>> = c.vertices().iter().map(|v| v.facet_set.clone()).collect();
        let rebuilt = FaceLattice::from_facet_vertex_sets(3, 6, &facets, &[]).unwrap();
        assert_eq!(rebuilt.f_vector(), oct.f_vector());
        rebuilt.validate().unwrap();
    }

    #[test]
    fn missing_facet_rejected() {
        let faces = vec![Face {
            rank: 1,
            facet_set: vec![0],
            mark: Mark::Real,
        }];
        assert!(FaceLattice::new(2, 2, faces).is_err());
    }
}
