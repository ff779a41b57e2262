use std::collections::{BTreeSet, HashSet};

use crate::error::{Error, Result};

/// A finite abstract simplicial complex on the vertex set `0..vertex_count`.
///
/// Faces are stored sorted, grouped by dimension. Vertices that appear in no
/// facet are allowed ("ghost" vertices); they matter for the moment-angle
/// construction, which uses one coordinate per declared vertex.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    vertex_count: usize,
    facets: Vec<Vec<usize>>,
    faces: Vec<Vec<Vec<usize>>>,
    lookup: HashSet<Vec<usize>>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_count == other.vertex_count && self.facets == other.facets
    }
}

impl Eq for SimplicialComplex {}

impl SimplicialComplex {
    /// Builds the downward closure of `facets`, dropping duplicates and
    /// non-maximal entries.
    pub fn new(vertex_count: usize, facets: Vec<Vec<usize>>) -> Result<Self> {
        if facets.is_empty() {
            return Err(Error::EmptyComplex);
        }
        let mut normalized = Vec::with_capacity(facets.len());
        for (pos, facet) in facets.into_iter().enumerate() {
            if facet.is_empty() {
                return Err(Error::EmptyFacet(pos));
            }
            if let Some(&bad) = facet.iter().find(|&&v| v >= vertex_count) {
                return Err(Error::IndexOutOfRange {
                    index: bad,
                    count: vertex_count,
                });
            }
            let set: BTreeSet<usize> = facet.into_iter().collect();
            normalized.push(set.into_iter().collect::<Vec<_>>());
        }
        Ok(Self::from_normalized(vertex_count, normalized))
    }

    /// Builds a complex from facets that are already sorted and in range.
    pub(crate) fn from_normalized(vertex_count: usize, facets: Vec<Vec<usize>>) -> Self {
        let mut lookup: HashSet<Vec<usize>> = HashSet::new();
        for facet in &facets {
            insert_subsets(facet, &mut lookup);
        }
        let mut maximal: Vec<Vec<usize>> = facets
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .filter(|f| !has_coface(f, vertex_count, &lookup))
            .collect();
        maximal.sort_by(|a, b| a.len().cmp(&b.len()).reverse().then_with(|| a.cmp(b)));
        maximal.sort();

        let top = lookup.iter().map(|f| f.len()).max().unwrap_or(0);
        let mut faces: Vec<Vec<Vec<usize>>> = vec![Vec::new(); top];
        for face in &lookup {
            faces[face.len() - 1].push(face.clone());
        }
        for layer in &mut faces {
            layer.sort();
        }
        SimplicialComplex {
            vertex_count,
            facets: maximal,
            faces,
            lookup,
        }
    }

    /// The complex with no faces at all (the link of an isolated vertex).
    pub fn void(vertex_count: usize) -> Self {
        SimplicialComplex {
            vertex_count,
            facets: Vec::new(),
            faces: Vec::new(),
            lookup: HashSet::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn is_void(&self) -> bool {
        self.facets.is_empty()
    }

    /// Dimension of the largest face; `-1` for the void complex.
    pub fn dim(&self) -> isize {
        self.faces.len() as isize - 1
    }

    /// All faces of dimension `d`, sorted.
    pub fn faces(&self, d: usize) -> &[Vec<usize>] {
        self.faces.get(d).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn face_count(&self) -> usize {
        self.lookup.len()
    }

    /// Iterates all nonempty faces, dimension by dimension.
    pub fn all_faces(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.faces.iter().flatten()
    }

    pub fn contains(&self, face: &[usize]) -> bool {
        face.is_empty() || self.lookup.contains(face)
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.faces.iter().map(|l| l.len()).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.faces
            .iter()
            .enumerate()
            .map(|(d, l)| if d % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) })
            .sum()
    }

    /// Vertices that belong to at least one face.
    pub fn used_vertices(&self) -> Vec<usize> {
        self.faces(0).iter().map(|f| f[0]).collect()
    }

    pub fn is_pure(&self) -> bool {
        let d = self.faces.len();
        self.facets.iter().all(|f| f.len() == d)
    }

    /// The link of vertex `v`, on the same vertex labels.
    pub fn link(&self, v: usize) -> Result<SimplicialComplex> {
        if v >= self.vertex_count || !self.lookup.contains(&vec![v]) {
            return Err(Error::MissingVertex(v.to_string()));
        }
        let facets: Vec<Vec<usize>> = self
            .facets
            .iter()
            .filter(|f| f.binary_search(&v).is_ok())
            .map(|f| f.iter().copied().filter(|&w| w != v).collect::<Vec<_>>())
            .filter(|f| !f.is_empty())
            .collect();
        if facets.is_empty() {
            return Ok(SimplicialComplex::void(self.vertex_count));
        }
        Ok(Self::from_normalized(self.vertex_count, facets))
    }

    /// Checks that the complex is pure and every ridge lies in exactly two facets.
    pub fn is_closed_pseudomanifold(&self) -> bool {
        if self.is_void() || !self.is_pure() {
            return false;
        }
        let d = self.faces.len();
        if d == 1 {
            return self.facets.len() == 2;
        }
        let mut count: std::collections::HashMap<Vec<usize>, usize> = Default::default();
        for facet in &self.facets {
            for skip in 0..facet.len() {
                let ridge: Vec<usize> = facet
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &v)| v)
                    .collect();
                *count.entry(ridge).or_insert(0) += 1;
            }
        }
        count.len() == self.faces(d - 2).len() && count.values().all(|&c| c == 2)
    }

    /// The full subcomplex on the given vertices.
    pub fn induced(&self, vertices: &[usize]) -> SimplicialComplex {
        let keep: HashSet<usize> = vertices.iter().copied().collect();
        let faces: Vec<Vec<usize>> = self
            .facets
            .iter()
            .map(|f| f.iter().copied().filter(|v| keep.contains(v)).collect::<Vec<_>>())
            .filter(|f| !f.is_empty())
            .collect();
        if faces.is_empty() {
            SimplicialComplex::void(self.vertex_count)
        } else {
            Self::from_normalized(self.vertex_count, faces)
        }
    }

    /// Applies a vertex relabeling `perm[old] = new`.
    pub fn relabel(&self, perm: &[usize]) -> Result<SimplicialComplex> {
        let facets = self
            .facets
            .iter()
            .map(|f| f.iter().map(|&v| perm[v]).collect())
            .collect();
        SimplicialComplex::new(self.vertex_count, facets)
    }
}

fn insert_subsets(facet: &[usize], out: &mut HashSet<Vec<usize>>) {
    if out.contains(facet) {
        return;
    }
    let k = facet.len();
    assert!(k < 31, "facet too large for subset enumeration");
    for mask in 1u32..(1u32 << k) {
        let sub: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| facet[i]).collect();
        out.insert(sub);
    }
}

fn has_coface(face: &[usize], vertex_count: usize, lookup: &HashSet<Vec<usize>>) -> bool {
    let mut probe = Vec::with_capacity(face.len() + 1);
    (0..vertex_count).any(|v| {
        if face.binary_search(&v).is_ok() {
            return false;
        }
        probe.clear();
        probe.extend_from_slice(face);
        let pos = probe.binary_search(&v).unwrap_err();
        probe.insert(pos, v);
        lookup.contains(&probe)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn octahedron() -> SimplicialComplex {
        let mut facets = Vec::new();
        for a in [0, 1] {
            for b in [2, 3] {
                for c in [4, 5] {
                    facets.push(vec![a, b, c]);
                }
            }
        }
        SimplicialComplex::new(6, facets).unwrap()
    }

    #[test]
    fn triangle_boundary() {
        let k = SimplicialComplex::new(3, vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        assert_eq!(k.f_vector(), vec![3, 3]);
        assert_eq!(k.euler_characteristic(), 0);
        assert!(k.is_closed_pseudomanifold());
    }

    #[test]
    fn octahedron_counts() {
        let k = octahedron();
        assert_eq!(k.f_vector(), vec![6, 12, 8]);
        assert_eq!(k.euler_characteristic(), 2);
    }

    #[test]
    fn non_maximal_and_duplicate_facets_dropped() {
        let k = SimplicialComplex::new(3, vec![vec![0, 1, 2], vec![1, 0], vec![2, 1, 0]]).unwrap();
        assert_eq!(k.facets(), &[vec![0, 1, 2]]);
    }

    #[test]
    fn errors() {
        assert!(matches!(SimplicialComplex::new(3, vec![]), Err(Error::EmptyComplex)));
        assert!(matches!(
            SimplicialComplex::new(3, vec![vec![0], vec![]]),
            Err(Error::EmptyFacet(1))
        ));
        assert!(matches!(
            SimplicialComplex::new(3, vec![vec![0, 3]]),
            Err(Error::IndexOutOfRange { index: 3, count: 3 })
        ));
    }

    #[test]
    fn octahedron_vertex_link_is_square() {
        let k = octahedron();
        let link = k.link(0).unwrap();
        assert_eq!(link.f_vector(), vec![4, 4]);
        assert!(link.is_closed_pseudomanifold());
        assert!(matches!(k.link(9), Err(Error::MissingVertex(_))));
    }

    #[test]
    fn closure_holds() {
        let k = octahedron();
        for face in k.all_faces() {
            for skip in 0..face.len() {
                let sub: Vec<usize> = face
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &v)| v)
                    .collect();
                assert!(k.contains(&sub));
            }
        }
    }
}
