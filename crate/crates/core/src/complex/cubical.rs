use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};

use super::iso::SetSystem;
use super::SimplicialComplex;

/// A cell of a cube complex inside `[-1, 1]^m`: the coordinates in `support`
/// are free, every other coordinate is fixed to `+1` (bit set in `signs`) or
/// `-1` (bit clear).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CubeCell {
    pub support: u64,
    pub signs: u64,
}

impl CubeCell {
    pub fn new(support: u64, signs: u64) -> Self {
        CubeCell {
            support,
            signs: signs & !support,
        }
    }

    pub fn vertex(signs: u64) -> Self {
        CubeCell { support: 0, signs }
    }

    pub fn dim(&self) -> usize {
        self.support.count_ones() as usize
    }

    /// Free coordinates in increasing order.
    pub fn axes(&self) -> Vec<usize> {
        bit_indices(self.support).collect()
    }

    /// The face obtained by fixing free coordinate `axis` to `+1` or `-1`.
    pub fn face(&self, axis: usize, plus: bool) -> CubeCell {
        let bit = 1u64 << axis;
        debug_assert!(self.support & bit != 0);
        CubeCell {
            support: self.support & !bit,
            signs: if plus { self.signs | bit } else { self.signs },
        }
    }
}

pub(crate) fn bit_indices(mut x: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if x == 0 {
            None
        } else {
            let i = x.trailing_zeros() as usize;
            x &= x - 1;
            Some(i)
        }
    })
}

/// Iterates all sub-masks of `mask`, including `0` and `mask` itself.
pub(crate) fn submasks(mask: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & mask) };
        Some(cur)
    })
}

/// A subgroup of `(Z/2)^m` acting on `[-1, 1]^m` by coordinate sign changes.
/// Cube complexes carrying one are orbit complexes: every stored cell is the
/// canonical representative of its orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignQuotient {
    basis: Vec<u64>,
    reducers: HashMap<u64, Vec<(u64, u64)>>,
}

impl SignQuotient {
    pub fn basis(&self) -> &[u64] {
        &self.basis
    }

    /// Echelon data for reducing sign vectors of cells with the given support.
    fn reducer(basis: &[u64], support: u64) -> Result<Vec<(u64, u64)>> {
        // Rows are (projection onto fixed coordinates, full group element),
        // kept in decreasing pivot order; the pivot is the highest set bit.
        let pivot = |p: u64| 63 - p.leading_zeros();
        let mut rows: Vec<(u64, u64)> = Vec::new();
        for &h in basis {
            let mut p = h & !support;
            let mut full = h;
            for &(rp, rf) in &rows {
                if p >> pivot(rp) & 1 == 1 {
                    p ^= rp;
                    full ^= rf;
                }
            }
            if p == 0 {
                return Err(Error::ImproperColouring(format!(
                    "sign group element {full:#x} fixes cells with support {support:#x}"
                )));
            }
            rows.push((p, full));
            rows.sort_by_key(|r| std::cmp::Reverse(pivot(r.0)));
        }
        for i in 0..rows.len() {
            let pi = pivot(rows[i].0);
            for j in 0..rows.len() {
                if i != j && rows[j].0 >> pi & 1 == 1 {
                    rows[j].0 ^= rows[i].0;
                    rows[j].1 ^= rows[i].1;
                }
            }
        }
        Ok(rows)
    }

    /// Canonical representative of the orbit of `cell`, and whether the group
    /// element carrying `cell` to it reverses the cell's orientation.
    fn canonical(&self, cell: CubeCell) -> (CubeCell, bool) {
        let Some(rows) = self.reducers.get(&cell.support) else {
            return (cell, false);
        };
        let mut signs = cell.signs;
        let mut acc = 0u64;
        for &(p, full) in rows {
            let pivot = 63 - p.leading_zeros();
            if signs >> pivot & 1 == 1 {
                signs ^= p;
                acc ^= full;
            }
        }
        let flip = (acc & cell.support).count_ones() % 2 == 1;
        (
            CubeCell {
                support: cell.support,
                signs,
            },
            flip,
        )
    }
}

/// A finite cube complex whose cells are (support, signs) pairs, optionally
/// taken modulo a freely acting sign group.
#[derive(Clone, Debug)]
pub struct CubicalComplex {
    ambient_rank: usize,
    cells: Vec<Vec<CubeCell>>,
    index: HashMap<CubeCell, usize>,
    quotient: Option<SignQuotient>,
}

impl PartialEq for CubicalComplex {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_rank == other.ambient_rank
            && self.cells == other.cells
            && self.quotient.as_ref().map(|q| &q.basis) == other.quotient.as_ref().map(|q| &q.basis)
    }
}

impl Eq for CubicalComplex {}

impl CubicalComplex {
    /// Builds a complex from its cells, checking that they fit the ambient
    /// cube and that the cell set is closed under taking faces.
    pub fn new(ambient_rank: usize, cells: impl IntoIterator<Item = CubeCell>) -> Result<Self> {
        Self::with_quotient(ambient_rank, cells, Vec::new())
    }

    /// Like [`CubicalComplex::new`], with cells understood modulo the sign
    /// group spanned by `group_basis`. Cells are replaced by their canonical
    /// orbit representatives.
    pub fn with_quotient(
        ambient_rank: usize,
        cells: impl IntoIterator<Item = CubeCell>,
        group_basis: Vec<u64>,
    ) -> Result<Self> {
        if ambient_rank > 64 {
            return Err(Error::InvalidCubical(format!(
                "ambient rank {ambient_rank} exceeds 64"
            )));
        }
        let full = if ambient_rank == 64 { u64::MAX } else { (1u64 << ambient_rank) - 1 };
        let cells: Vec<CubeCell> = cells.into_iter().collect();
        for c in &cells {
            if c.support & !full != 0 || c.signs & !full != 0 {
                return Err(Error::InvalidCubical(format!(
                    "cell {c:?} leaves the ambient cube"
                )));
            }
            if c.signs & c.support != 0 {
                return Err(Error::InvalidCubical(format!(
                    "cell {c:?} fixes a free coordinate"
                )));
            }
        }
        let quotient = if group_basis.is_empty() {
            None
        } else {
            let supports: BTreeSet<u64> = cells.iter().map(|c| c.support).collect();
            let mut reducers = HashMap::new();
            for s in supports.iter().flat_map(|&s| submasks(s)).collect::<BTreeSet<_>>() {
                reducers.insert(s, SignQuotient::reducer(&group_basis, s)?);
            }
            Some(SignQuotient {
                basis: group_basis,
                reducers,
            })
        };
        let canon: BTreeSet<CubeCell> = cells
            .into_iter()
            .map(|c| match &quotient {
                Some(q) => q.canonical(c).0,
                None => c,
            })
            .collect();
        let mut by_dim: BTreeMap<usize, Vec<CubeCell>> = BTreeMap::new();
        for c in canon {
            by_dim.entry(c.dim()).or_default().push(c);
        }
        let top = by_dim.keys().next_back().map(|&d| d + 1).unwrap_or(0);
        let mut layers = vec![Vec::new(); top];
        for (d, mut v) in by_dim {
            v.sort();
            layers[d] = v;
        }
        let mut index = HashMap::new();
        for layer in &layers {
            for (i, c) in layer.iter().enumerate() {
                index.insert(*c, i);
            }
        }
        let complex = CubicalComplex {
            ambient_rank,
            cells: layers,
            index,
            quotient,
        };
        complex.check_closed()?;
        Ok(complex)
    }

    fn check_closed(&self) -> Result<()> {
        for c in self.cells.iter().flatten() {
            for axis in bit_indices(c.support) {
                for plus in [false, true] {
                    let (f, _) = self.face_of(c, axis, plus);
                    if !self.index.contains_key(&f) {
                        return Err(Error::InvalidCubical(format!(
                            "face {f:?} of {c:?} is missing"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn quotient(&self) -> Option<&SignQuotient> {
        self.quotient.as_ref()
    }

    pub fn is_quotient(&self) -> bool {
        self.quotient.is_some()
    }

    /// Top cell dimension, `-1` when empty.
    pub fn dim(&self) -> isize {
        self.cells.len() as isize - 1
    }

    pub fn cells(&self, d: usize) -> &[CubeCell] {
        self.cells.get(d).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn all_cells(&self) -> impl Iterator<Item = &CubeCell> {
        self.cells.iter().flatten()
    }

    pub fn cell_count(&self) -> usize {
        self.index.len()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.cells.iter().map(|l| l.len()).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cells
            .iter()
            .enumerate()
            .map(|(d, l)| if d % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) })
            .sum()
    }

    /// Position of a (canonical) cell within its dimension.
    pub fn index_of(&self, cell: &CubeCell) -> Option<usize> {
        self.index.get(cell).copied()
    }

    pub fn contains(&self, cell: &CubeCell) -> bool {
        self.index.contains_key(&self.canonical(*cell).0)
    }

    /// Canonical representative of a cell of the ambient cube.
    pub fn canonical(&self, cell: CubeCell) -> (CubeCell, bool) {
        match &self.quotient {
            Some(q) => q.canonical(cell),
            None => (cell, false),
        }
    }

    /// Face of `cell` in direction `axis`, as a canonical cell, together with
    /// the orientation reversal picked up by canonicalization.
    pub fn face_of(&self, cell: &CubeCell, axis: usize, plus: bool) -> (CubeCell, bool) {
        self.canonical(cell.face(axis, plus))
    }

    /// Canonical vertex cells at the corners of `cell`.
    pub fn corners(&self, cell: &CubeCell) -> Vec<CubeCell> {
        submasks(cell.support)
            .map(|u| self.canonical(CubeCell::vertex(cell.signs | u)).0)
            .collect()
    }

    /// Link of a vertex: the simplicial complex on the coordinates whose faces
    /// are the supports of the cells incident to `v`.
    pub fn link_of_vertex(&self, v: &CubeCell) -> Result<SimplicialComplex> {
        let v = self.canonical(*v).0;
        if v.support != 0 || !self.index.contains_key(&v) {
            return Err(Error::MissingVertex(format!("{:#x}", v.signs)));
        }
        let supports = self.incident_supports(&v);
        Ok(link_from_supports(self.ambient_rank, supports))
    }

    /// Links of every vertex, in vertex order.
    pub fn all_vertex_links(&self) -> Vec<(CubeCell, SimplicialComplex)> {
        let mut at: HashMap<CubeCell, BTreeSet<u64>> = HashMap::new();
        for c in self.all_cells() {
            if c.support == 0 {
                continue;
            }
            for u in submasks(c.support) {
                let corner = self.canonical(CubeCell::vertex(c.signs | u)).0;
                at.entry(corner).or_default().insert(c.support);
            }
        }
        self.cells(0)
            .iter()
            .map(|v| {
                let supports = at.remove(v).unwrap_or_default();
                (*v, link_from_supports(self.ambient_rank, supports))
            })
            .collect()
    }

    fn incident_supports(&self, v: &CubeCell) -> BTreeSet<u64> {
        let mut out = BTreeSet::new();
        for c in self.all_cells() {
            if c.support == 0 {
                continue;
            }
            if submasks(c.support).any(|u| self.canonical(CubeCell::vertex(c.signs | u)).0 == *v) {
                out.insert(c.support);
            }
        }
        out
    }

    /// Cells of `self` all belong to `other` (same ambient cube and group).
    pub fn is_subcomplex_of(&self, other: &CubicalComplex) -> bool {
        self.ambient_rank == other.ambient_rank
            && self.quotient.as_ref().map(|q| &q.basis) == other.quotient.as_ref().map(|q| &q.basis)
            && self.all_cells().all(|c| other.index.contains_key(c))
    }

    /// The subcomplex of the given cells and all their faces.
    pub fn subcomplex(&self, cells: impl IntoIterator<Item = CubeCell>) -> Result<CubicalComplex> {
        let mut out: BTreeSet<CubeCell> = BTreeSet::new();
        let mut stack: Vec<CubeCell> = Vec::new();
        for c in cells {
            let c = self.canonical(c).0;
            if !self.index.contains_key(&c) {
                return Err(Error::NotSubcomplex(format!("cell {c:?} not in complex")));
            }
            stack.push(c);
        }
        while let Some(c) = stack.pop() {
            if !out.insert(c) {
                continue;
            }
            for axis in bit_indices(c.support) {
                for plus in [false, true] {
                    stack.push(self.face_of(&c, axis, plus).0);
                }
            }
        }
        CubicalComplex::with_quotient(
            self.ambient_rank,
            out,
            self.quotient.as_ref().map(|q| q.basis.clone()).unwrap_or_default(),
        )
    }

    /// Points are vertices, blocks are corner sets of all cells.
    pub(crate) fn corner_system(&self) -> SetSystem {
        let blocks = self
            .all_cells()
            .map(|c| {
                let mut b: Vec<usize> = self
                    .corners(c)
                    .iter()
                    .map(|v| self.index[v])
                    .collect();
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        SetSystem {
            points: self.cells(0).len(),
            blocks,
        }
    }
}

fn link_from_supports(ambient_rank: usize, supports: BTreeSet<u64>) -> SimplicialComplex {
    let faces: Vec<Vec<usize>> = supports.into_iter().map(|s| bit_indices(s).collect()).collect();
    if faces.is_empty() {
        SimplicialComplex::void(ambient_rank)
    } else {
        SimplicialComplex::from_normalized(ambient_rank, faces)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square_boundary() -> CubicalComplex {
        let mut cells = Vec::new();
        for s in 0..4u64 {
            cells.push(CubeCell::vertex(s));
        }
        for axis in 0..2 {
            let bit = 1u64 << axis;
            for s in [0u64, 3 & !bit] {
                cells.push(CubeCell::new(bit, s));
            }
        }
        CubicalComplex::new(2, cells).unwrap()
    }

    #[test]
    fn square_boundary_counts() {
        let z = square_boundary();
        assert_eq!(z.f_vector(), vec![4, 4]);
        assert_eq!(z.euler_characteristic(), 0);
    }

    #[test]
    fn missing_face_rejected() {
        let r = CubicalComplex::new(2, vec![CubeCell::new(1, 0)]);
        assert!(matches!(r, Err(Error::InvalidCubical(_))));
    }

    #[test]
    fn submask_enumeration() {
        let subs: BTreeSet<u64> = submasks(0b101).collect();
        assert_eq!(subs, [0, 1, 4, 5].into_iter().collect());
        assert_eq!(submasks(0).count(), 1);
    }

    #[test]
    fn quotient_canonicalization_is_idempotent() {
        // Antipodal action on the square boundary gives a 2-cycle.
        let z = square_boundary();
        let q = CubicalComplex::with_quotient(2, z.all_cells().copied(), vec![0b11]).unwrap();
        assert_eq!(q.f_vector(), vec![2, 2]);
        for c in q.all_cells() {
            assert_eq!(q.canonical(*c).0, *c);
        }
    }

    #[test]
    fn non_free_group_rejected() {
        let cells = (0..4u64).map(CubeCell::vertex).chain([
            CubeCell::new(1, 0),
            CubeCell::new(1, 2),
            CubeCell::new(2, 0),
            CubeCell::new(2, 1),
            CubeCell::new(3, 0),
        ]);
        let r = CubicalComplex::with_quotient(2, cells, vec![0b01]);
        assert!(matches!(r, Err(Error::ImproperColouring(_))));
    }
}
