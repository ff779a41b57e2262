//! Dehn filling of ideal vertices by cubes, and the dual operation on the
//! Gosset side: subdividing every cross-polytope facet along a diagonal.
//!
//! At an ideal vertex `v` of `P` the link is an `(n-1)`-cube whose facets are
//! the `2(n-1)` facets of `P` through `v`, grouped into opposite pairs
//! ([`IdealPolytope::axes`]). Filling along the axis `{A, B}` deletes `v` and
//! inserts the `(n-2)`-cube `F = A ∩ B`, whose faces are `F ∩ T` for `T`
//! picking at most one facet from each remaining pair.
//!
//! On the dual side the facets through `v` are the vertices of a cross-polytope
//! facet of `G`, and opposite cube facets are antipodal vertices. The axis
//! `{A, B}` therefore corresponds to the diagonal `{A, B}`: cutting the
//! cross-polytope into simplices that all contain that diagonal creates the
//! edge dual to `F`.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use crate::complex::{dualize, isomorphic, Face, FaceLattice, Mark, SimplicialComplex};
use crate::error::{Error, Result};
use crate::io::{Document, FaceDoc};
use crate::zoo::IdealPolytope;

/// One axis index per ideal vertex, in the order of
/// [`IdealPolytope::ideal_vertices`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FillingChoice {
    axes: Vec<usize>,
}

impl FillingChoice {
    pub fn new(axes: Vec<usize>) -> Self {
        FillingChoice { axes }
    }

    pub fn uniform(p: &IdealPolytope, axis: usize) -> Self {
        FillingChoice {
            axes: vec![axis; p.ideal_vertices().len()],
        }
    }

    pub fn axes(&self) -> &[usize] {
        &self.axes
    }

    /// Builds a choice from explicit facet pairs, rejecting pairs that are not
    /// opposite in the cube link.
    pub fn from_pairs(p: &IdealPolytope, pairs: &[(usize, usize)]) -> Result<Self> {
        let ideal = p.ideal_vertices();
        if pairs.len() != ideal.len() {
            return Err(Error::InvalidChoice(format!(
                "{} pairs given for {} ideal vertices",
                pairs.len(),
                ideal.len()
            )));
        }
        let mut axes = Vec::with_capacity(pairs.len());
        for (k, (&v, &(a, b))) in ideal.iter().zip(pairs).enumerate() {
            let pair = (a.min(b), a.max(b));
            let idx = p.axes(v)?.iter().position(|&x| x == pair).ok_or_else(|| {
                Error::InvalidChoice(format!("facets {a} and {b} are not opposite at ideal vertex v{k}"))
            })?;
            axes.push(idx);
        }
        Ok(FillingChoice { axes })
    }

    /// Parses `"v0:0,v1:1,..."`, where `vK` is the K-th ideal vertex. Every
    /// ideal vertex needs exactly one entry.
    pub fn parse(text: &str, ideal_count: usize) -> Result<Self> {
        let mut axes: Vec<Option<usize>> = vec![None; ideal_count];
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let bad = || Error::InvalidChoice(format!("malformed entry {item:?}, expected vK:axis"));
            let (v, a) = item.split_once(':').ok_or_else(bad)?;
            let v: usize = v.trim().strip_prefix('v').ok_or_else(bad)?.parse().map_err(|_| bad())?;
            let a: usize = a.trim().parse().map_err(|_| bad())?;
            let slot = axes
                .get_mut(v)
                .ok_or_else(|| Error::InvalidChoice(format!("there is no ideal vertex v{v}")))?;
            if slot.replace(a).is_some() {
                return Err(Error::InvalidChoice(format!("ideal vertex v{v} chosen twice")));
            }
        }
        let axes = axes
            .into_iter()
            .enumerate()
            .map(|(v, a)| a.ok_or_else(|| Error::InvalidChoice(format!("missing choice for v{v}"))))
            .collect::<Result<_>>()?;
        Ok(FillingChoice { axes })
    }

    /// All `(n-1)^k` choices for `k` ideal vertices, in lexicographic order.
    pub fn enumerate(p: &IdealPolytope) -> impl Iterator<Item = FillingChoice> {
        let k = p.ideal_vertices().len();
        let base = p.rank().saturating_sub(1).max(1);
        let total = (base as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
        (0..total).map(move |mut idx| {
            let mut axes = vec![0; k];
            for slot in axes.iter_mut().rev() {
                *slot = (idx % base as u128) as usize;
                idx /= base as u128;
            }
            FillingChoice { axes }
        })
    }
}

impl fmt::Display for FillingChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.axes.iter().enumerate().map(|(v, a)| format!("v{v}:{a}")).collect();
        f.write_str(&parts.join(","))
    }
}

/// A filled polytope together with the facet pairs `{A, B}` of its new
/// `(n-2)`-cubes, one per former ideal vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilledPolytope {
    pub lattice: FaceLattice,
    pub filling_faces: Vec<Vec<usize>>,
}

impl FilledPolytope {
    pub fn to_document(&self) -> Document {
        match Document::from(&self.lattice) {
            Document::FaceLattice { rank, facets, faces, .. } => Document::FaceLattice {
                rank,
                facets,
                faces,
                filling: Some(self.filling_faces.clone()),
            },
            _ => unreachable!("a face lattice serializes as a face lattice document"),
        }
    }

    pub fn from_document(doc: Document) -> Result<Self> {
        let (lattice, filling) = doc.into_face_lattice()?;
        let filling_faces = filling.unwrap_or_default();
        for f in &filling_faces {
            if lattice.face(f).is_none() {
                return Err(Error::InvalidLattice(format!("filling face {f:?} is not a face")));
            }
        }
        Ok(FilledPolytope { lattice, filling_faces })
    }
}

/// Replaces every ideal vertex of `p` by a cube along the chosen axis.
pub fn dehn_fill(p: &IdealPolytope, choice: &FillingChoice) -> Result<FilledPolytope> {
    let l = p
        .lattice()
        .ok_or_else(|| Error::Unsupported("filling needs the face lattice of the polytope".into()))?;
    let n = l.rank();
    let ideal = p.ideal_vertices();
    if choice.axes.len() != ideal.len() {
        return Err(Error::InvalidChoice(format!(
            "{} axes given for {} ideal vertices",
            choice.axes.len(),
            ideal.len()
        )));
    }
    let mut removed: HashSet<&[usize]> = HashSet::new();
    let mut added: Vec<Face> = Vec::new();
    let mut filling_faces = Vec::with_capacity(ideal.len());
    for (k, &v) in ideal.iter().enumerate() {
        let axes = p.axes(v)?;
        let a = choice.axes[k];
        let &(fa, fb) = axes.get(a).ok_or_else(|| {
            Error::InvalidChoice(format!("axis {a} at v{k}, which has only {} axes", axes.len()))
        })?;
        let others: Vec<(usize, usize)> = axes.iter().enumerate().filter(|&(i, _)| i != a).map(|(_, &x)| x).collect();
        removed.insert(&p.vertex_facets()[v]);
        let mut code = vec![0u8; others.len()];
        loop {
            let mut set = vec![fa, fb];
            for (&c, &(x, y)) in code.iter().zip(&others) {
                match c {
                    1 => set.push(x),
                    2 => set.push(y),
                    _ => {}
                }
            }
            set.sort_unstable();
            added.push(Face {
                rank: n - set.len(),
                facet_set: set,
                mark: Mark::Real,
            });
            // Next ternary code; stop after wrapping around.
            let Some(pos) = code.iter().position(|&c| c < 2) else { break };
            code[..pos].iter_mut().for_each(|c| *c = 0);
            code[pos] += 1;
        }
        filling_faces.push(vec![fa, fb]);
    }
    let existing: HashSet<&[usize]> = l.faces().iter().map(|f| f.facet_set.as_slice()).collect();
    if let Some(f) = added.iter().find(|f| existing.contains(f.facet_set.as_slice())) {
        return Err(Error::InvalidLattice(format!(
            "facets {:?} already meet away from the filled vertex",
            f.facet_set
        )));
    }
    let mut faces: Vec<Face> = l
        .faces()
        .iter()
        .filter(|f| !(f.rank == 0 && removed.contains(f.facet_set.as_slice())))
        .cloned()
        .collect();
    faces.extend(added);
    let lattice = FaceLattice::new(n, l.facet_count(), faces)?;
    if let Some(face) = lattice.first_non_simple() {
        return Err(Error::NotSimple {
            face: face.facet_set.clone(),
            found: face.facet_set.len(),
            expected: n - face.rank,
        });
    }
    Ok(FilledPolytope { lattice, filling_faces })
}

/// Every rank `n-k` face lies in exactly `k` facets.
pub fn is_simple(p: &FaceLattice) -> bool {
    p.is_simple()
}

/// A cross-polytope facet of `G` with its antipodal vertex pairs, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossFacet {
    pub facet: usize,
    pub vertices: Vec<usize>,
    pub pairs: Vec<(usize, usize)>,
}

fn edge_set(g: &FaceLattice, vsets: &[Vec<usize>]) -> HashSet<(usize, usize)> {
    g.faces()
        .iter()
        .zip(vsets)
        .filter(|(f, vs)| f.rank == 1 && vs.len() == 2)
        .map(|(_, vs)| (vs[0], vs[1]))
        .collect()
}

/// Facets of `G` with `2(n-1)` vertices. Antipodes are the vertex pairs not
/// joined by an edge.
pub fn cross_facets(g: &FaceLattice) -> Result<Vec<CrossFacet>> {
    let n = g.rank();
    let vsets = g.vertex_sets();
    let edges = edge_set(g, &vsets);
    let mut out = Vec::new();
    for (face, vs) in g.faces().iter().zip(&vsets) {
        if face.rank + 1 != n || vs.len() != 2 * (n - 1) {
            continue;
        }
        let mut pairs = Vec::new();
        for (i, &a) in vs.iter().enumerate() {
            for &b in &vs[i + 1..] {
                if !edges.contains(&(a, b)) {
                    pairs.push((a, b));
                }
            }
        }
        let covered: BTreeSet<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        if pairs.len() != n - 1 || covered.len() != vs.len() {
            return Err(Error::InvalidLattice(format!(
                "facet {} has {} vertices but no antipodal pairing",
                face.facet_set[0],
                vs.len()
            )));
        }
        out.push(CrossFacet {
            facet: face.facet_set[0],
            vertices: vs.clone(),
            pairs,
        });
    }
    Ok(out)
}

/// The `2^(d-1)` simplices of a cross-polytope with `d` antipodal pairs that
/// contain the pair `pairs[diagonal]`.
pub fn subdivide_cross_polytope(pairs: &[(usize, usize)], diagonal: usize) -> Vec<Vec<usize>> {
    let (a, b) = pairs[diagonal];
    let rest: Vec<(usize, usize)> = pairs.iter().enumerate().filter(|&(i, _)| i != diagonal).map(|(_, &p)| p).collect();
    (0u64..1 << rest.len())
        .map(|mask| {
            let mut s = vec![a, b];
            s.extend(rest.iter().enumerate().map(|(i, &(x, y))| if mask >> i & 1 == 1 { y } else { x }));
            s.sort_unstable();
            s
        })
        .collect()
}

/// Chosen diagonal (an antipodal vertex pair) for each cross-polytope facet
/// of `G`, keyed by facet index.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiagonalChoice {
    pub diagonals: BTreeMap<usize, (usize, usize)>,
}

impl DiagonalChoice {
    /// The lexicographically least diagonal of every cross-polytope facet.
    pub fn auto(g: &FaceLattice) -> Result<Self> {
        Ok(DiagonalChoice {
            diagonals: cross_facets(g)?.into_iter().map(|c| (c.facet, c.pairs[0])).collect(),
        })
    }

    /// Diagonals matching a filling choice of the dual polytope `p`, whose
    /// facets are the vertices of `g`.
    pub fn for_filling(g: &FaceLattice, p: &IdealPolytope, choice: &FillingChoice) -> Result<Self> {
        let by_vertices: BTreeMap<Vec<usize>, usize> =
            cross_facets(g)?.into_iter().map(|c| (c.vertices, c.facet)).collect();
        let ideal = p.ideal_vertices();
        if choice.axes.len() != ideal.len() {
            return Err(Error::InvalidChoice("filling choice does not match the polytope".into()));
        }
        let mut diagonals = BTreeMap::new();
        for (k, &v) in ideal.iter().enumerate() {
            let facet = *by_vertices.get(&p.vertex_facets()[v]).ok_or_else(|| {
                Error::InvalidLattice(format!("ideal vertex v{k} has no dual cross-polytope facet"))
            })?;
            let axes = p.axes(v)?;
            let axis = *axes
                .get(choice.axes[k])
                .ok_or_else(|| Error::InvalidChoice(format!("axis {} out of range at v{k}", choice.axes[k])))?;
            diagonals.insert(facet, axis);
        }
        Ok(DiagonalChoice { diagonals })
    }

    /// Parses `"auto"` or `"f3:0,f7:1,..."`, where the number after the colon
    /// indexes the facet's antipodal pairs in sorted order. Facets left out
    /// get their least diagonal.
    pub fn parse(text: &str, g: &FaceLattice) -> Result<Self> {
        let mut out = DiagonalChoice::auto(g)?;
        if text.trim() == "auto" {
            return Ok(out);
        }
        let facets: BTreeMap<usize, CrossFacet> = cross_facets(g)?.into_iter().map(|c| (c.facet, c)).collect();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let bad = || Error::InvalidDiagonal(format!("malformed entry {item:?}, expected fK:index"));
            let (f, i) = item.split_once(':').ok_or_else(bad)?;
            let f: usize = f.trim().strip_prefix('f').ok_or_else(bad)?.parse().map_err(|_| bad())?;
            let i: usize = i.trim().parse().map_err(|_| bad())?;
            let c = facets
                .get(&f)
                .ok_or_else(|| Error::InvalidDiagonal(format!("facet {f} is not a cross-polytope")))?;
            let pair = *c
                .pairs
                .get(i)
                .ok_or_else(|| Error::InvalidDiagonal(format!("facet {f} has only {} diagonals", c.pairs.len())))?;
            out.diagonals.insert(f, pair);
        }
        Ok(out)
    }
}

/// `K^(n-1)`: simplex facets of `G` unchanged, cross-polytope facets cut into
/// `2^(n-2)` simplices around their chosen diagonal.
pub fn subdivide_cross_facets(g: &FaceLattice, d: &DiagonalChoice) -> Result<SimplicialComplex> {
    let n = g.rank();
    let cross: BTreeMap<usize, CrossFacet> = cross_facets(g)?.into_iter().map(|c| (c.facet, c)).collect();
    for f in d.diagonals.keys() {
        if !cross.contains_key(f) {
            return Err(Error::InvalidDiagonal(format!("facet {f} is not a cross-polytope")));
        }
    }
    let vsets = g.vertex_sets();
    let mut simplices = Vec::new();
    for (face, vs) in g.faces().iter().zip(&vsets) {
        if face.rank + 1 != n {
            continue;
        }
        let f = face.facet_set[0];
        match cross.get(&f) {
            Some(c) => {
                let &(a, b) = d
                    .diagonals
                    .get(&f)
                    .ok_or_else(|| Error::InvalidDiagonal(format!("no diagonal chosen for facet {f}")))?;
                let pair = (a.min(b), a.max(b));
                let idx = c.pairs.iter().position(|&p| p == pair).ok_or_else(|| {
                    Error::InvalidDiagonal(format!("{a} and {b} are not antipodal in facet {f}"))
                })?;
                simplices.extend(subdivide_cross_polytope(&c.pairs, idx));
            }
            None if vs.len() == n => simplices.push(vs.clone()),
            None => {
                return Err(Error::InvalidLattice(format!(
                    "facet {f} with {} vertices is neither a simplex nor a cross-polytope",
                    vs.len()
                )))
            }
        }
    }
    SimplicialComplex::new(g.faces_of_rank(0).count(), simplices)
}

/// Whether the boundary of `pbar` is dual to `k`, up to relabelling.
pub fn duality_check(pbar: &FaceLattice, k: &SimplicialComplex) -> bool {
    dualize(pbar).is_ok_and(|d| isomorphic(&d, k).is_some())
}

/// Whether the dual of `pbar` equals `k` with facets of `pbar` read as
/// vertices of `k`.
pub fn labelled_duality_check(pbar: &FaceLattice, k: &SimplicialComplex) -> bool {
    dualize(pbar).is_ok_and(|d| d.vertex_count() == k.vertex_count() && d.facets() == k.facets())
}

/// Face documents of the filling cubes only, for reports.
pub fn filling_face_docs(p: &FilledPolytope) -> Vec<FaceDoc> {
    p.filling_faces
        .iter()
        .filter_map(|f| p.lattice.face(f))
        .map(|f| FaceDoc {
            rank: f.rank,
            facet_set: f.facet_set.clone(),
            mark: f.mark,
        })
        .collect()
}
