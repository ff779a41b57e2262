//! Real moment-angle complexes, colouring quotients, the truncated core of a
//! cusped colour manifold, and component counts of cusp sections and filling
//! tori.
//!
//! Conventions: coordinate `i` of `[-1, 1]^m` belongs to facet `i` of the
//! polytope, so a vertex of `ℝZ_K` is one copy of the polytope and a cell with
//! support `σ` is dual to the face `∩_{i∈σ} F_i` in that copy.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use petgraph::unionfind::UnionFind;
use serde_json::{json, Value};

use crate::algebra::{homology, chain_complex_of, Coeff, GF2Matrix};
use crate::complex::{dualize, isomorphic, submasks, CubeCell, CubicalComplex, FaceLattice, SimplicialComplex};
use crate::error::{Error, Result};
use crate::filling::FilledPolytope;
use crate::io::{cubical_doc, cubical_from_doc, CuspDoc, Document};
use crate::zoo::IdealPolytope;

fn check_budget(count: &BigUint) -> Result<()> {
    let cap = crate::cell_budget();
    if *count > BigUint::from(cap) {
        return Err(Error::BudgetExceeded {
            needed: count.to_string(),
            cap,
        });
    }
    Ok(())
}

fn mask_of(face: &[usize]) -> u64 {
    face.iter().fold(0, |m, &i| m | 1 << i)
}

/// `Σ_{σ ∈ K ∪ {∅}} 2^(m - |σ|)`, the number of cells of `ℝZ_K`.
pub fn rzk_cell_count(k: &SimplicialComplex) -> BigUint {
    let m = k.vertex_count();
    std::iter::once(0)
        .chain(k.all_faces().map(Vec::len))
        .map(|s| BigUint::one() << (m - s))
        .sum()
}

/// `ℝZ_K`: the cells `[-1,1]^σ × {±1}^(rest)` for `σ ∈ K ∪ {∅}`.
pub fn real_moment_angle(k: &SimplicialComplex) -> Result<CubicalComplex> {
    let m = k.vertex_count();
    if k.is_void() {
        return Err(Error::EmptyComplex);
    }
    if m > 64 {
        return Err(Error::Unsupported(format!("{m} vertices exceed the 64 coordinate limit")));
    }
    check_budget(&rzk_cell_count(k))?;
    let full = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    let supports = std::iter::once(0).chain(k.all_faces().map(|f| mask_of(f)));
    let cells: Vec<CubeCell> = supports
        .flat_map(|s| submasks(full & !s).map(move |g| CubeCell::new(s, g)))
        .collect();
    CubicalComplex::new(m, cells)
}

/// A map from facets to nonzero vectors of `(Z/2)^rank`, stored as bitmasks.
/// The distinct colouring of more than 64 facets has no bitmask form and is
/// kept symbolically, with an empty colour list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Colouring {
    rank: usize,
    facets: usize,
    colours: Vec<u64>,
}

fn gf2_independent(vectors: impl IntoIterator<Item = u64>) -> bool {
    let mut basis: Vec<u64> = Vec::new();
    for mut v in vectors {
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v == 0 {
            return false;
        }
        basis.push(v);
        basis.sort_unstable_by(|a, b| b.cmp(a));
    }
    true
}

impl Colouring {
    /// Facet `i` gets the standard basis vector `e_i`.
    pub fn distinct(facets: usize) -> Result<Self> {
        if facets > 64 {
            return Ok(Colouring {
                rank: facets,
                facets,
                colours: Vec::new(),
            });
        }
        Colouring::new(facets, (0..facets).map(|i| 1u64 << i).collect())
    }

    pub fn new(rank: usize, colours: Vec<u64>) -> Result<Self> {
        if rank > 64 {
            return Err(Error::Unsupported(format!("colour rank {rank} exceeds 64")));
        }
        let full = if rank == 64 { u64::MAX } else { (1u64 << rank) - 1 };
        if let Some((i, c)) = colours.iter().enumerate().find(|&(_, &c)| c == 0 || c & !full != 0) {
            return Err(Error::ImproperColouring(format!("facet {i} has colour {c:#x} outside (Z/2)^{rank} minus 0")));
        }
        Ok(Colouring {
            rank,
            facets: colours.len(),
            colours,
        })
    }

    /// `"distinct"` or a comma-separated list of colour bitmasks.
    pub fn parse(text: &str, facets: usize) -> Result<Self> {
        if text.trim() == "distinct" {
            return Colouring::distinct(facets);
        }
        let colours: Vec<u64> = text
            .split(',')
            .map(|s| s.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad colour {s:?}"))))
            .collect::<Result<_>>()?;
        if colours.len() != facets {
            return Err(Error::ImproperColouring(format!(
                "{} colours given for {facets} facets",
                colours.len()
            )));
        }
        let rank = colours.iter().map(|c| 64 - c.leading_zeros() as usize).max().unwrap_or(0);
        Colouring::new(rank, colours)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn facet_count(&self) -> usize {
        self.facets
    }

    /// Colour bitmasks, empty for a symbolic distinct colouring.
    pub fn colours(&self) -> &[u64] {
        &self.colours
    }

    pub fn is_distinct(&self) -> bool {
        self.rank == self.facets && self.colours.iter().enumerate().all(|(i, &c)| c == 1 << i)
    }

    /// Basis of the kernel of `(Z/2)^f → (Z/2)^rank`, as sign masks.
    pub fn kernel_basis(&self) -> Vec<u64> {
        let f = self.colours.len();
        let mut m = GF2Matrix::zeros(self.rank, f);
        for (j, &c) in self.colours.iter().enumerate() {
            for i in 0..self.rank {
                if c >> i & 1 == 1 {
                    m.set(i, j, true);
                }
            }
        }
        m.kernel()
            .into_iter()
            .map(|v| v.iter().enumerate().filter(|(_, &b)| b).fold(0u64, |acc, (j, _)| acc | 1 << j))
            .collect()
    }

    /// The colours at every vertex of `p` are linearly independent.
    pub fn check_proper(&self, p: &FaceLattice) -> Result<()> {
        if self.facets != p.facet_count() {
            return Err(Error::ImproperColouring(format!(
                "{} colours for {} facets",
                self.facets,
                p.facet_count()
            )));
        }
        if self.is_distinct() {
            return Ok(());
        }
        for v in p.vertices() {
            if !gf2_independent(v.facet_set.iter().map(|&i| self.colours[i])) {
                return Err(Error::ImproperColouring(format!(
                    "colours at the vertex {:?} are dependent",
                    v.facet_set
                )));
            }
        }
        Ok(())
    }
}

/// The colour manifold of a simple polytope: `2^rank` copies of `p` glued
/// across each facet `i` by translation by `λ(i)`. Two copies of a face are
/// identified when they differ by the span of the colours of the facets
/// containing it. Realized as `ℝZ_K / ker λ` with `K` dual to `p`.
pub fn colour_manifold(p: &FaceLattice, colouring: &Colouring) -> Result<CubicalComplex> {
    colouring.check_proper(p)?;
    let k = dualize(p)?;
    let kernel = colouring.kernel_basis();
    let count = rzk_cell_count(&k) >> kernel.len();
    check_budget(&count)?;
    if kernel.is_empty() {
        return real_moment_angle(&k);
    }
    let m = k.vertex_count();
    let full = (1u64 << m) - 1;
    let supports = std::iter::once(0).chain(k.all_faces().map(|f| mask_of(f)));
    let cells: Vec<CubeCell> = supports
        .flat_map(|s| submasks(full & !s).map(move |g| CubeCell::new(s, g)))
        .collect();
    CubicalComplex::with_quotient(m, cells, kernel)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkFailure {
    /// Sign mask of the vertex.
    pub vertex: u64,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifoldReport {
    pub vertices_checked: usize,
    pub model_is_sphere: bool,
    pub failures: Vec<LinkFailure>,
}

impl ManifoldReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.vertices_checked > 0
    }

    pub fn to_json(&self) -> Value {
        json!({
            "vertices_checked": self.vertices_checked,
            "model_is_sphere": self.model_is_sphere,
            "passed": self.passed(),
            "failures": self.failures.iter().map(|f| json!({"vertex": f.vertex, "reason": f.reason})).collect::<Vec<_>>(),
        })
    }
}

/// Pure closed pseudomanifold with the mod 2 homology of a sphere.
pub fn is_homology_sphere(k: &SimplicialComplex) -> bool {
    let d = k.dim();
    if d < 0 || !k.is_pure() || !k.is_closed_pseudomanifold() {
        return false;
    }
    let used = k.used_vertices();
    let k = k.induced(&used);
    let Ok(cc) = chain_complex_of(&k, Coeff::Z2) else { return false };
    let Ok(report) = homology(&cc) else { return false };
    let betti = report.betti;
    let d = d as usize;
    let mut expected = vec![0usize; d + 1];
    if d == 0 {
        expected[0] = 2;
    } else {
        expected[0] = 1;
        expected[d] = 1;
    }
    betti == expected
}

/// Checks every vertex link of `z` against `k`, and that `k` is a sphere.
pub fn manifold_check(z: &CubicalComplex, k: &SimplicialComplex) -> ManifoldReport {
    let model_is_sphere = is_homology_sphere(k);
    let mut failures = Vec::new();
    let links = z.all_vertex_links();
    for (v, link) in &links {
        if isomorphic(link, k).is_none() {
            failures.push(LinkFailure {
                vertex: v.signs,
                reason: "link is not isomorphic to the model complex".into(),
            });
        } else if !model_is_sphere {
            failures.push(LinkFailure {
                vertex: v.signs,
                reason: "link is not a sphere".into(),
            });
        }
    }
    ManifoldReport {
        vertices_checked: links.len(),
        model_is_sphere,
        failures,
    }
}

/// Connected components of a cube complex, as sorted lists of vertex indices,
/// found by union-find along the 1-cells.
pub fn components(z: &CubicalComplex) -> Vec<Vec<usize>> {
    let n = z.cells(0).len();
    let mut uf = UnionFind::<usize>::new(n);
    for e in z.cells(1) {
        let ends = z.corners(e);
        let a = z.index_of(&ends[0]).expect("closed complex");
        let b = z.index_of(&ends[1]).expect("closed complex");
        uf.union(a, b);
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..n {
        groups.entry(uf.find(v)).or_default().push(v);
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    out.sort();
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CuspCount {
    pub vertex: usize,
    pub incident_facets: usize,
    pub components: BigUint,
    pub cross_section: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CuspCensus {
    pub facets: usize,
    pub cusps: Vec<CuspCount>,
    pub total: BigUint,
}

/// `"d.dd×10^e"` for a positive integer, rounded to three significant digits.
pub fn decimal_magnitude(x: &BigUint) -> String {
    let digits = x.to_string();
    if digits.len() <= 3 {
        return digits;
    }
    let lead: u32 = digits[..3].parse().expect("decimal digits");
    let round_up = digits.as_bytes()[3] >= b'5';
    let mut lead = lead + round_up as u32;
    let mut exp = digits.len() - 1;
    if lead == 1000 {
        lead = 100;
        exp += 1;
    }
    format!("{}.{:02}e{}", lead / 100, lead % 100, exp)
}

impl CuspCensus {
    pub fn magnitude(&self) -> String {
        decimal_magnitude(&self.total)
    }

    pub fn to_json(&self) -> Value {
        let big = |b: &BigUint| match b.to_u64() {
            Some(v) => json!(v),
            None => json!(b.to_string()),
        };
        json!({
            "facets": self.facets,
            "total": self.total.to_string(),
            "magnitude": self.magnitude(),
            "cusps": self.cusps.iter().map(|c| json!({
                "vertex": c.vertex,
                "incident_facets": c.incident_facets,
                "components": big(&c.components),
                "cross_section": c.cross_section,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Largest colour rank for which cusp components are counted copy by copy.
const EXPLICIT_RANK_LIMIT: usize = 22;

/// Cusps of the colour manifold over `p`. With distinct colours the cube link
/// at an ideal vertex `v` lifts to `2^(f - m_v)` tori, `m_v` being the number
/// of facets at `v`. Other colourings are counted explicitly: copies of the
/// link are the elements of `(Z/2)^rank`, joined across facet `i` by `λ(i)`.
pub fn cusp_census(p: &IdealPolytope, colouring: &Colouring) -> Result<CuspCensus> {
    census_with(p, colouring, !colouring.is_distinct())
}

/// [`cusp_census`] with every vertex counted by union-find over the
/// `2^rank` copies of its link, whatever the colouring.
pub fn cusp_census_union_find(p: &IdealPolytope, colouring: &Colouring) -> Result<CuspCensus> {
    census_with(p, colouring, true)
}

fn census_with(p: &IdealPolytope, colouring: &Colouring, explicit: bool) -> Result<CuspCensus> {
    let f = p.facet_count();
    if colouring.facet_count() != f {
        return Err(Error::ImproperColouring(format!(
            "{} colours for {f} facets",
            colouring.facet_count()
        )));
    }
    let n = p.rank();
    let torus = format!("T^{}", n - 1);
    let mut cusps = Vec::new();
    for v in p.ideal_vertices() {
        let at = &p.vertex_facets()[v];
        let m_v = at.len();
        let (components, cross_section) = if !explicit {
            (BigUint::one() << (f - m_v), torus.clone())
        } else {
            let r = colouring.rank();
            if r > EXPLICIT_RANK_LIMIT {
                return Err(Error::BudgetExceeded {
                    needed: format!("2^{r} link copies"),
                    cap: 1 << EXPLICIT_RANK_LIMIT,
                });
            }
            let mut uf = UnionFind::<usize>::new(1 << r);
            for g in 0..1usize << r {
                for &i in at {
                    uf.union(g, g ^ colouring.colours()[i] as usize);
                }
            }
            let roots = (0..1usize << r).filter(|&g| uf.find(g) == g).count();
            let injective = gf2_independent(at.iter().map(|&i| colouring.colours()[i]));
            let label = if injective { torus.clone() } else { format!("flat {}-manifold", n - 1) };
            (BigUint::from(roots), label)
        };
        cusps.push(CuspCount {
            vertex: v,
            incident_facets: m_v,
            components,
            cross_section,
        });
    }
    let total = cusps.iter().map(|c| &c.components).sum();
    Ok(CuspCensus { facets: f, cusps, total })
}

/// One cusp section: the lift of the cube link at `ideal_vertex` lying over
/// the sign pattern `outside_signs` on the facets away from that vertex.
#[derive(Clone, Debug)]
pub struct Cusp {
    pub id: usize,
    pub ideal_vertex: usize,
    pub outside_signs: u64,
    pub section: CubicalComplex,
}

/// The compact core of the cusped colour manifold with distinct colours.
///
/// Every ideal vertex `v` is truncated, which adds a facet `t_v` that is never
/// reflected. Coordinates `0..f` are the facets of `P`, coordinate `f + k` is
/// the truncation facet of the k-th ideal vertex. On a truncation coordinate
/// the sign `-1` points into the polytope and `+1` lies on `t_v`, so the
/// boundary of the core is the union over `v` of the cells with `t_v = +1`.
#[derive(Clone, Debug)]
pub struct CuspedManifold {
    pub facet_count: usize,
    pub ideal_vertices: Vec<usize>,
    pub core: CubicalComplex,
    pub cusps: Vec<Cusp>,
}

impl CuspedManifold {
    pub fn to_document(&self) -> Document {
        Document::CuspedManifold {
            core: cubical_doc(&self.core),
            cusps: self
                .cusps
                .iter()
                .map(|c| CuspDoc {
                    id: c.id,
                    ideal_vertex: c.ideal_vertex,
                    cells: c.section.all_cells().map(|x| (x.support, x.signs)).collect(),
                })
                .collect(),
        }
    }

    /// Reads a core and its cusp sections. Facet and vertex bookkeeping is
    /// recovered from the ambient rank and the cusp records.
    pub fn from_document(doc: Document) -> Result<Self> {
        let Document::CuspedManifold { core, cusps } = doc else {
            return Err(Error::Parse(format!("expected a cusped_manifold document, found {}", doc.kind())));
        };
        let core = cubical_from_doc(core)?;
        let mut ideal: Vec<usize> = cusps.iter().map(|c| c.ideal_vertex).collect();
        ideal.sort_unstable();
        ideal.dedup();
        let facet_count = core
            .ambient_rank()
            .checked_sub(ideal.len())
            .ok_or_else(|| Error::Parse("more ideal vertices than coordinates".into()))?;
        let mut out = Vec::with_capacity(cusps.len());
        for c in cusps {
            let section = core.subcomplex(c.cells.iter().map(|&(s, g)| CubeCell::new(s, g)))?;
            // Facets away from the vertex are the original coordinates that
            // stay constant over the section.
            let first = section.cells(0).first().map_or(0, |v| v.signs);
            let varying = section.all_cells().fold(0u64, |acc, x| acc | x.support | (x.signs ^ first));
            let orig = if facet_count >= 64 { u64::MAX } else { (1u64 << facet_count) - 1 };
            let outside_signs = first & orig & !varying;
            out.push(Cusp {
                id: c.id,
                ideal_vertex: c.ideal_vertex,
                outside_signs,
                section,
            });
        }
        Ok(CuspedManifold {
            facet_count,
            ideal_vertices: ideal,
            core,
            cusps: out,
        })
    }
}

/// Builds the truncated core and its cusp sections. Needs the cube-link axes,
/// hence the face lattice of `p`.
pub fn cusped_core(p: &IdealPolytope) -> Result<CuspedManifold> {
    let f = p.facet_count();
    let ideal = p.ideal_vertices();
    let m = f + ideal.len();
    if m > 64 {
        return Err(Error::Unsupported(format!("{m} coordinates exceed 64")));
    }
    let mut facets: Vec<Vec<usize>> = p.real_vertices().iter().map(|&v| p.vertex_facets()[v].clone()).collect();
    let mut outside = Vec::with_capacity(ideal.len());
    for (k, &v) in ideal.iter().enumerate() {
        let axes = p.axes(v)?;
        for mask in 0u64..1 << axes.len() {
            let mut s: Vec<usize> =
                axes.iter().enumerate().map(|(i, &(a, b))| if mask >> i & 1 == 1 { b } else { a }).collect();
            s.push(f + k);
            s.sort_unstable();
            facets.push(s);
        }
        let orig = (1u64 << f) - 1;
        outside.push(orig & !mask_of(&p.vertex_facets()[v]));
    }
    let kt = SimplicialComplex::new(m, facets)?;
    let orig_mask = (1u64 << f) - 1;
    let trunc_mask = ((1u64 << m) - 1) & !orig_mask;

    let mut count = BigUint::zero();
    for s in std::iter::once(&Vec::new()).chain(kt.all_faces()) {
        let o = s.iter().filter(|&&i| i < f).count();
        let t = s.len() - o;
        count += (BigUint::one() << (f - o)) * BigUint::from(1 + t);
    }
    check_budget(&count)?;

    let mut cells = Vec::new();
    for s in std::iter::once(&Vec::new()).chain(kt.all_faces()) {
        let sm = mask_of(s);
        let free = orig_mask & !sm;
        // Either every truncation coordinate of the face is spanned, or one
        // of them is pinned to the truncation facet.
        let mut variants = vec![(sm, 0u64)];
        for t in s.iter().copied().filter(|&i| i >= f) {
            variants.push((sm & !(1 << t), 1u64 << t));
        }
        for (support, pinned) in variants {
            for g in submasks(free) {
                cells.push(CubeCell::new(support, g | pinned));
            }
        }
    }
    let core = CubicalComplex::new(m, cells)?;

    let mut groups: BTreeMap<(usize, u64), Vec<CubeCell>> = BTreeMap::new();
    for c in core.all_cells() {
        let pinned = c.signs & trunc_mask;
        if pinned == 0 {
            continue;
        }
        let k = pinned.trailing_zeros() as usize - f;
        groups.entry((k, c.signs & outside[k])).or_default().push(*c);
    }
    let mut cusps = Vec::with_capacity(groups.len());
    for (id, ((k, key), cells)) in groups.into_iter().enumerate() {
        cusps.push(Cusp {
            id,
            ideal_vertex: ideal[k],
            outside_signs: key,
            section: CubicalComplex::new(m, cells)?,
        });
    }
    Ok(CuspedManifold {
        facet_count: f,
        ideal_vertices: ideal,
        core,
        cusps,
    })
}

/// Preimage of a filling cube `F = A ∩ B` in the distinct-colour manifold
/// `z` over the filled polytope. Copies of `F` are sign vectors off `{A, B}`;
/// two copies lie in one component when a cell of `z` meets both.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreimageReport {
    pub face: Vec<usize>,
    /// Each component as its sorted list of copies of `F`.
    pub components: Vec<Vec<u64>>,
}

impl PreimageReport {
    pub fn copies_per_component(&self) -> Vec<usize> {
        self.components.iter().map(Vec::len).collect()
    }
}

pub fn preimage_components(z: &CubicalComplex, filled: &FilledPolytope, index: usize) -> Result<PreimageReport> {
    let face = filled
        .filling_faces
        .get(index)
        .ok_or_else(|| Error::Precondition(format!("there is no filling face {index}")))?
        .clone();
    if z.is_quotient() || z.ambient_rank() != filled.lattice.facet_count() {
        return Err(Error::Precondition(
            "the complex must be the distinct-colour manifold of the filled polytope".into(),
        ));
    }
    filling_torus_components(z, &face)
}

/// Components of the preimage of the face `∩_{i∈face} F_i` in a
/// distinct-colour manifold `z`, without reference to a filled polytope.
pub fn filling_torus_components(z: &CubicalComplex, face: &[usize]) -> Result<PreimageReport> {
    if z.is_quotient() {
        return Err(Error::Precondition("the complex must not be a quotient".into()));
    }
    let face = face.to_vec();
    let fm = mask_of(&face);
    let mut ids: HashMap<u64, usize> = HashMap::new();
    let mut links: Vec<(u64, u64)> = Vec::new();
    for c in z.all_cells() {
        if c.support & fm != fm {
            continue;
        }
        let free = c.support & !fm;
        let base = c.signs;
        for u in submasks(free) {
            let next = ids.len();
            ids.entry(base | u).or_insert(next);
            links.push((base, base | u));
        }
    }
    if ids.is_empty() {
        return Err(Error::Precondition(format!("facets {face:?} do not meet in the complex")));
    }
    let mut uf = UnionFind::<usize>::new(ids.len());
    for (a, b) in links {
        uf.union(ids[&a], ids[&b]);
    }
    let mut groups: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
    for (&g, &i) in &ids {
        groups.entry(uf.find(i)).or_default().push(g);
    }
    let mut components: Vec<Vec<u64>> = groups
        .into_values()
        .map(|mut v| {
            v.sort_unstable();
            v
        })
        .collect();
    components.sort();
    Ok(PreimageReport { face, components })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{cubical_isomorphic, dualize_complex};
    use crate::filling::{dehn_fill, subdivide_cross_facets, DiagonalChoice, FillingChoice};
    use crate::zoo::{gosset, ideal_dual};

    fn cycle(n: usize) -> SimplicialComplex {
        SimplicialComplex::new(n, (0..n).map(|i| vec![i, (i + 1) % n]).collect()).unwrap()
    }

    fn octahedron() -> SimplicialComplex {
        let facets = (0..8u32).map(|m| (0..3).map(|i| 2 * i + (m >> i & 1) as usize).collect()).collect();
        SimplicialComplex::new(6, facets).unwrap()
    }

    fn betti(z: &CubicalComplex, coeff: Coeff) -> Vec<usize> {
        homology(&chain_complex_of(z, coeff).unwrap()).unwrap().betti
    }

    #[test]
    fn small_moment_angle_complexes() {
        let s0 = SimplicialComplex::new(2, vec![vec![0], vec![1]]).unwrap();
        let z = real_moment_angle(&s0).unwrap();
        assert_eq!(z.f_vector(), vec![4, 4]);
        let tri = cycle(3);
        let z = real_moment_angle(&tri).unwrap();
        assert_eq!(z.cell_count(), 26);
        assert_eq!(betti(&z, Coeff::Z2), vec![1, 0, 1]);
    }

    #[test]
    fn octahedral_torus() {
        let k = octahedron();
        let z = real_moment_angle(&k).unwrap();
        assert_eq!(z.cells(0).len(), 64);
        assert_eq!(z.cells(3).len(), 64);
        assert_eq!(BigUint::from(z.cell_count()), rzk_cell_count(&k));
        assert_eq!(z.euler_characteristic(), 0);
        assert!(manifold_check(&z, &k).passed());
        assert_eq!(betti(&z, Coeff::Z), vec![1, 3, 3, 1]);
    }

    #[test]
    fn square_colourings() {
        let square = dualize_complex(&cycle(4)).unwrap();
        let t2 = colour_manifold(&square, &Colouring::distinct(4).unwrap()).unwrap();
        assert_eq!(t2.cells(2).len(), 16);
        assert_eq!(betti(&t2, Coeff::Z2), vec![1, 2, 1]);
        let klein = colour_manifold(&square, &Colouring::new(2, vec![1, 2, 3, 2]).unwrap()).unwrap();
        assert_eq!(klein.cells(2).len(), 4);
        assert_eq!(betti(&klein, Coeff::Z2), vec![1, 2, 1]);
        let hz = homology(&chain_complex_of(&klein, Coeff::Z).unwrap()).unwrap();
        assert_eq!(hz.betti, vec![1, 1, 0]);
        assert_eq!(hz.torsion[1], vec![2.into()]);
        assert!(manifold_check(&klein, &cycle(4)).passed());
    }

    #[test]
    fn improper_colouring_is_rejected() {
        let square = dualize_complex(&cycle(4)).unwrap();
        let bad = Colouring::new(1, vec![1, 1, 1, 1]).unwrap();
        assert!(matches!(colour_manifold(&square, &bad), Err(Error::ImproperColouring(_))));
        assert!(Colouring::new(2, vec![0, 1, 2, 3]).is_err());
        assert_eq!(Colouring::parse("1,2,3,2", 4).unwrap().rank(), 2);
    }

    #[test]
    fn single_edge_fails_manifold_check() {
        let edge = SimplicialComplex::new(2, vec![vec![0, 1]]).unwrap();
        let z = real_moment_angle(&edge).unwrap();
        let r = manifold_check(&z, &edge);
        assert!(!r.passed());
        assert_eq!(r.failures.len(), 4);
        assert!(!r.model_is_sphere);
    }

    #[test]
    fn budget_is_enforced() {
        // Full 2-skeleton on 40 vertices has far more cells than any cap.
        let facets: Vec<Vec<usize>> = (0..40).map(|i| vec![i]).collect();
        let k = SimplicialComplex::new(40, facets).unwrap();
        assert!(matches!(real_moment_angle(&k), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn magnitude_strings() {
        assert_eq!(decimal_magnitude(&BigUint::from(12u32)), "12");
        assert_eq!(decimal_magnitude(&BigUint::from(123_456u32)), "1.23e5");
        assert_eq!(decimal_magnitude(&BigUint::from(999_600u32)), "1.00e6");
    }

    fn p(n: usize) -> (FaceLattice, IdealPolytope) {
        let g = gosset(n).unwrap().lattice().unwrap();
        let p = ideal_dual(&g).unwrap();
        (g, p)
    }

    #[test]
    fn census_matches_union_find_for_p3_and_p4() {
        for (n, total) in [(3usize, 12u32), (4, 80)] {
            let (_, p) = p(n);
            let census = cusp_census(&p, &Colouring::distinct(p.facet_count()).unwrap()).unwrap();
            assert_eq!(census.total, BigUint::from(total));
            let explicit = cusp_census_union_find(&p, &Colouring::distinct(p.facet_count()).unwrap()).unwrap();
            assert_eq!(explicit.total, census.total);
            assert!(census.cusps.iter().all(|c| c.incident_facets == 2 * (n - 1)));
            let y = cusped_core(&p).unwrap();
            assert_eq!(y.cusps.len(), total as usize);
            let interior = y.core.cells(0).iter().filter(|v| v.signs >> p.facet_count() == 0).count();
            assert_eq!(interior, 1 << p.facet_count());
            for c in &y.cusps {
                assert_eq!(components(&c.section).len(), 1);
                assert!(c.section.is_subcomplex_of(&y.core));
            }
            let boundary_pieces: usize = y
                .ideal_vertices
                .iter()
                .map(|&v| y.cusps.iter().filter(|c| c.ideal_vertex == v).count())
                .sum();
            assert_eq!(boundary_pieces, total as usize);
        }
    }

    #[test]
    fn cusp_sections_are_tori() {
        let (_, p) = p(3);
        let y = cusped_core(&p).unwrap();
        for c in &y.cusps {
            assert_eq!(betti(&c.section, Coeff::Z), vec![1, 2, 1]);
        }
        assert_eq!(y.core.dim(), 3);
    }

    #[test]
    fn general_colouring_census_is_explicit() {
        let (_, p) = p(3);
        // Colours e1..e6 merged pairwise along axes would be improper for the
        // manifold, but the census only counts components.
        let c = Colouring::new(3, vec![1, 2, 4, 1, 2, 4]).unwrap();
        let census = cusp_census(&p, &c).unwrap();
        assert_eq!(census.cusps.len(), 3);
        let distinct = cusp_census(&p, &Colouring::distinct(6).unwrap()).unwrap();
        assert_eq!(distinct.total, BigUint::from(12u32));
    }

    #[test]
    fn filling_tori_in_the_filled_manifold() {
        let (g, p) = p(3);
        let choice = FillingChoice::uniform(&p, 0);
        let filled = dehn_fill(&p, &choice).unwrap();
        let k = subdivide_cross_facets(&g, &DiagonalChoice::for_filling(&g, &p, &choice).unwrap()).unwrap();
        let z = colour_manifold(&filled.lattice, &Colouring::distinct(6).unwrap()).unwrap();
        assert!(cubical_isomorphic(&z, &real_moment_angle(&k).unwrap()).is_some());
        let mut total = 0;
        for i in 0..filled.filling_faces.len() {
            let r = preimage_components(&z, &filled, i).unwrap();
            assert_eq!(r.components.len(), 4);
            assert!(r.copies_per_component().iter().all(|&c| c == 4));
            total += r.components.len();
        }
        assert_eq!(total, 12);
    }

    #[test]
    fn filling_tori_n4() {
        let (_, p) = p(4);
        let filled = dehn_fill(&p, &FillingChoice::uniform(&p, 0)).unwrap();
        let z = colour_manifold(&filled.lattice, &Colouring::distinct(10).unwrap()).unwrap();
        for i in 0..5 {
            let r = preimage_components(&z, &filled, i).unwrap();
            assert_eq!(r.components.len(), 16);
            assert!(r.copies_per_component().iter().all(|&c| c == 16));
        }
    }

    #[test]
    fn cusped_document_roundtrip() {
        let (_, p) = p(3);
        let y = cusped_core(&p).unwrap();
        let text = serde_json::to_string(&y.to_document()).unwrap();
        let back = CuspedManifold::from_document(crate::io::parse_document(&text).unwrap()).unwrap();
        assert_eq!(back.core, y.core);
        assert_eq!(back.cusps.len(), 12);
        assert_eq!(back.facet_count, 6);
        for (a, b) in back.cusps.iter().zip(&y.cusps) {
            assert_eq!(a.section, b.section);
            assert_eq!(a.outside_signs, b.outside_signs);
        }
    }
}
