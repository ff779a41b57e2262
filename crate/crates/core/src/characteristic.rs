//! Orientability, the second Stiefel-Whitney class in low dimensions, spin
//! structure counts, and the cusp certificates that decide between bounding
//! and Lie spin structures on torus cross-sections.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{
    cell_inclusion, chain_complex_of, cup_pairing, homology, induced_from_bases, integral_classes, invariant_factors,
    smith_normal_form, ClassBasis, Cochain, Coeff, GF2Matrix, IntMatrix, SparseIntMatrix, Variance,
};
use crate::complex::{bit_indices, CubeCell, CubicalComplex};
use crate::error::{Error, Result};
use crate::moment_angle::{filling_torus_components, CuspedManifold};

fn closed_dimension(z: &CubicalComplex) -> Result<usize> {
    if z.dim() < 1 {
        return Err(Error::NotPseudomanifold("need a complex of positive dimension".into()));
    }
    let n = z.dim() as usize;
    let mut cofaces = vec![0u32; z.cells(n - 1).len()];
    for c in z.cells(n) {
        for axis in bit_indices(c.support) {
            for plus in [false, true] {
                let (face, _) = z.face_of(c, axis, plus);
                cofaces[z.index_of(&face).expect("closed complex")] += 1;
            }
        }
    }
    if let Some(i) = cofaces.iter().position(|&k| k != 2) {
        return Err(Error::NotPseudomanifold(format!(
            "codimension-one cell {i} lies in {} top cells",
            cofaces[i]
        )));
    }
    Ok(n)
}

/// `w₁ = 0`: the top integral homology of a closed complex is `Z`.
pub fn orientability(z: &CubicalComplex) -> Result<bool> {
    let n = closed_dimension(z)?;
    let cc = chain_complex_of(z, Coeff::Z)?;
    let rank = invariant_factors(cc.boundary(n).expect("top boundary"))?.len();
    Ok(z.cells(n).len() - rank == 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum W2Status {
    Vanishes,
    Obstructed,
    Undetermined,
}

/// Outcome of the spin obstruction computation on a closed complex.
#[derive(Clone, Debug)]
pub struct SpinCheck {
    pub dim: usize,
    pub orientable: bool,
    pub w2: W2Status,
    pub provenance: String,
    /// GF(2) intersection form on `H²`, in dimension 4.
    pub intersection_form: Option<GF2Matrix>,
    /// Solution of `Q v = diag(Q)`, in dimension 4.
    pub wu_class: Option<Vec<bool>>,
}

impl SpinCheck {
    pub fn spin_verified(&self) -> bool {
        self.orientable && self.w2 == W2Status::Vanishes
    }

    pub fn to_json(&self) -> Value {
        json!({
            "dim": self.dim,
            "orientable": self.orientable,
            "w2": self.w2,
            "provenance": self.provenance,
            "intersection_form_rank": self.intersection_form.as_ref().map(|q| q.rows()),
            "wu_class": self.wu_class.as_ref().map(|v| v.iter().map(|&b| b as u8).collect::<Vec<_>>()),
        })
    }
}

/// The GF(2) intersection form `Q(a, b) = ⟨a ⌣ b, [Z]⟩` on a basis of
/// `H^k` of a closed `2k`-dimensional complex.
pub fn intersection_form(z: &CubicalComplex) -> Result<GF2Matrix> {
    let n = closed_dimension(z)?;
    if n % 2 == 1 {
        return Err(Error::Precondition(format!("no middle degree in dimension {n}")));
    }
    let k = n / 2;
    let cc = chain_complex_of(z, Coeff::Z2)?;
    let basis = ClassBasis::compute(&cc, k, Variance::Cohomology)?;
    let reps: Vec<Cochain> = basis
        .representative_vectors()
        .into_iter()
        .map(|values| Cochain { degree: k, values })
        .collect();
    cup_pairing(z, &reps, &reps)
}

/// `w₂` from a GF(2) intersection form in dimension 4: after checking that
/// `q` is nondegenerate, solves `q v = diag(q)` for the Wu class `v = w₂`.
pub fn w2_from_form(q: &GF2Matrix) -> Result<(W2Status, Vec<bool>)> {
    if q.rank() != q.rows() || q.rows() != q.cols() {
        return Err(Error::Certificate(format!(
            "intersection form of rank {} on H^2 of dimension {} is degenerate",
            q.rank(),
            q.rows()
        )));
    }
    let diag = q.diagonal();
    let v = q
        .solve(&diag)
        .ok_or_else(|| Error::Certificate("no characteristic vector for a nondegenerate form".into()))?;
    let status = if v.iter().any(|&b| b) { W2Status::Obstructed } else { W2Status::Vanishes };
    Ok((status, v))
}

/// Decides `w₂ = 0` on a closed complex of dimension at most 4.
///
/// Dimensions up to 3 are settled by orientability. In dimension 4 the
/// intersection form must be nondegenerate, and `w₂` is the Wu class `v₂`,
/// which vanishes exactly when the form is even. Higher dimensions are
/// reported as undetermined.
pub fn spin_obstruction(z: &CubicalComplex) -> Result<SpinCheck> {
    let dim = closed_dimension(z)?;
    let orientable = orientability(z)?;
    let mut check = SpinCheck {
        dim,
        orientable,
        w2: W2Status::Undetermined,
        provenance: String::new(),
        intersection_form: None,
        wu_class: None,
    };
    if !orientable {
        check.provenance = "w1 is nonzero, the top integral homology is not Z".into();
        return Ok(check);
    }
    match dim {
        1..=3 => {
            check.w2 = W2Status::Vanishes;
            check.provenance = "dimension-forced: orientable manifolds of dimension at most 3 are spin".into();
        }
        4 => {
            if z.is_quotient() {
                check.provenance = "the cup product is not available on sign quotients".into();
                return Ok(check);
            }
            let q = intersection_form(z)?;
            let (w2, v) = w2_from_form(&q)?;
            let even = w2 == W2Status::Vanishes;
            check.w2 = w2;
            check.provenance = format!(
                "Wu class from the {0}x{0} intersection form on H^2, which is {1}",
                q.rows(),
                if even { "even" } else { "odd" }
            );
            check.intersection_form = Some(q);
            check.wu_class = Some(v);
        }
        _ => {
            check.provenance = "w2 is not computed above dimension 4; real moment-angle manifolds over \
                                simplicial spheres have vanishing Stiefel-Whitney classes"
                .into();
        }
    }
    Ok(check)
}

/// Spin structures form an affine space over `H¹(Z; Z/2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpinStructureSet {
    pub spinnable: bool,
    pub b1: usize,
    pub count: BigUint,
}

impl SpinStructureSet {
    pub fn from_check(z: &CubicalComplex, check: &SpinCheck) -> Result<Self> {
        if !check.spin_verified() {
            return Err(Error::Precondition(format!("complex is not spin-verified: {}", check.provenance)));
        }
        let b1 = homology(&chain_complex_of(z, Coeff::Z2)?)?.betti.get(1).copied().unwrap_or(0);
        Ok(SpinStructureSet {
            spinnable: true,
            b1,
            count: BigUint::one() << b1,
        })
    }
}

pub fn spin_structures(z: &CubicalComplex) -> Result<SpinStructureSet> {
    SpinStructureSet::from_check(z, &spin_obstruction(z)?)
}

/// True when the integer matrix of a map `Z^r -> Z^s` has a left inverse:
/// full column rank and every invariant factor equal to one.
pub fn summand_certificate_matrix(a: &IntMatrix) -> bool {
    let factors = smith_normal_form(a).invariant_factors();
    factors.len() == a.cols() && factors.iter().all(|f| f.is_one())
}

/// Evidence that `H₁(T; Z)` is, or is not, a direct summand of `H₁(M; Z)`.
///
/// With `γ` the integral cycles spanning `H₁(T)` pushed into `M`, the image is
/// a summand exactly when adjoining `γ` to `∂₂` raises the rank by `rank H₁(T)`
/// and leaves the product of the invariant factors (the order of the torsion)
/// unchanged.
#[derive(Clone, Debug)]
pub struct SummandCertificate {
    pub holds: bool,
    pub torus_rank: usize,
    pub boundary_factors: Vec<BigInt>,
    pub extended_factors: Vec<BigInt>,
    /// The pushed cycles as `(1-cell of M, coefficient)` lists.
    pub cycles: Vec<Vec<(u32, i64)>>,
}

impl SummandCertificate {
    pub fn to_json(&self) -> Value {
        let strings = |v: &[BigInt]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        json!({
            "holds": self.holds,
            "torus_rank": self.torus_rank,
            "boundary_invariant_factors": strings(&self.boundary_factors),
            "extended_invariant_factors": strings(&self.extended_factors),
            "cycles": self.cycles,
        })
    }
}

/// Reuses the reduction of `∂₂` of `M` across several subcomplexes.
pub struct SummandChecker<'a> {
    m: &'a CubicalComplex,
    d2: SparseIntMatrix,
    factors: Vec<BigInt>,
}

fn torsion_order(factors: &[BigInt]) -> BigInt {
    factors.iter().product()
}

impl<'a> SummandChecker<'a> {
    pub fn new(m: &'a CubicalComplex) -> Result<Self> {
        let cc = chain_complex_of(m, Coeff::Z)?;
        let edges = cc.cell_counts().get(1).copied().unwrap_or(0);
        let d2 = cc.boundary(2).cloned().unwrap_or_else(|| SparseIntMatrix::zeros(edges, 0));
        let factors = invariant_factors(&d2)?;
        Ok(SummandChecker { m, d2, factors })
    }

    pub fn check(&self, t: &CubicalComplex) -> Result<SummandCertificate> {
        let map = cell_inclusion(self.m, t, 1)?;
        let classes = integral_classes(&chain_complex_of(t, Coeff::Z)?, 1)?;
        if !classes.torsion.is_empty() {
            return Err(Error::Precondition("H_1 of the subcomplex has torsion".into()));
        }
        if classes.free.is_empty() {
            return Err(Error::Precondition("H_1 of the subcomplex vanishes".into()));
        }
        let mut cycles = Vec::with_capacity(classes.free.len());
        for chain in &classes.free {
            let mut col = Vec::new();
            for (i, c) in chain.iter().enumerate() {
                if c.is_positive() || c.is_negative() {
                    let v = c
                        .to_i64()
                        .ok_or_else(|| Error::Unsupported("cycle coefficient overflows i64".into()))?;
                    col.push((map[i], v));
                }
            }
            cycles.push(col);
        }
        let gamma = SparseIntMatrix::new(self.d2.rows(), cycles.clone())?;
        let extended = invariant_factors(&self.d2.hcat(&gamma))?;
        let r = cycles.len();
        let holds = extended.len() == self.factors.len() + r
            && torsion_order(&extended) == torsion_order(&self.factors);
        let mut sorted: Vec<Vec<(u32, i64)>> = gamma.columns().to_vec();
        sorted.iter_mut().for_each(|c| c.sort_unstable());
        Ok(SummandCertificate {
            holds,
            torus_rank: r,
            boundary_factors: self.factors.clone(),
            extended_factors: extended,
            cycles: sorted,
        })
    }
}

/// Is `H₁(T; Z)` a direct summand of `H₁(M; Z)` via the inclusion?
pub fn summand_certificate(m: &CubicalComplex, t: &CubicalComplex) -> Result<SummandCertificate> {
    SummandChecker::new(m)?.check(t)
}

/// Restriction `H¹(M; Z/2) -> H¹(T; Z/2)` and whether it is onto.
#[derive(Clone, Debug)]
pub struct LieCertificate {
    pub holds: bool,
    pub torus_b1: usize,
    pub restriction: GF2Matrix,
}

/// Reuses the cohomology basis of `M` across several subcomplexes.
pub struct LieChecker<'a> {
    m: &'a CubicalComplex,
    basis: ClassBasis,
}

impl<'a> LieChecker<'a> {
    pub fn new(m: &'a CubicalComplex) -> Result<Self> {
        let basis = ClassBasis::compute(&chain_complex_of(m, Coeff::Z2)?, 1, Variance::Cohomology)?;
        Ok(LieChecker { m, basis })
    }

    pub fn check(&self, t: &CubicalComplex) -> Result<LieCertificate> {
        let map = cell_inclusion(self.m, t, 1)?;
        let tb = ClassBasis::compute(&chain_complex_of(t, Coeff::Z2)?, 1, Variance::Cohomology)?;
        if tb.rank() == 0 {
            return Err(Error::Precondition("H^1 of the subcomplex vanishes, not a torus".into()));
        }
        let restriction = induced_from_bases(&self.basis, &tb, &map)?;
        Ok(LieCertificate {
            holds: restriction.rank() == tb.rank(),
            torus_b1: tb.rank(),
            restriction,
        })
    }
}

/// Surjectivity of `H¹(M; Z/2) -> H¹(T; Z/2)`: every spin structure on `T`,
/// the Lie one included, extends to `M`. Spinnability of `M` itself is the
/// caller's concern; for a cusped core it comes from a spin filling.
pub fn lie_cusp_certificate(m: &CubicalComplex, t: &CubicalComplex) -> Result<LieCertificate> {
    LieChecker::new(m)?.check(t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CuspLabel {
    Bounding,
    Lie,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CuspType {
    pub id: usize,
    pub label: CuspLabel,
    pub provenance: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DiracLabel {
    Real,
    Discrete,
    Unknown,
}

pub fn dirac_label(labels: &[CuspLabel]) -> DiracLabel {
    if labels.contains(&CuspLabel::Lie) {
        DiracLabel::Real
    } else if !labels.is_empty() && labels.iter().all(|&l| l == CuspLabel::Bounding) {
        DiracLabel::Discrete
    } else {
        DiracLabel::Unknown
    }
}

fn face_mask(face: &[usize]) -> u64 {
    face.iter().fold(0, |m, &i| m | 1 << i)
}

/// Original facets around the `k`-th ideal vertex: the union of the section
/// supports restricted to the facets of the polytope.
fn vertex_facets(m: &CuspedManifold, k: usize) -> u64 {
    let orig = (1u64 << m.facet_count) - 1;
    let v = m.ideal_vertices[k];
    m.cusps
        .iter()
        .filter(|c| c.ideal_vertex == v)
        .flat_map(|c| c.section.all_cells().map(|x| x.support))
        .fold(0, |a, s| a | s)
        & orig
}

/// Recovers the filling face `{A, B}` at every ideal vertex from the filled
/// complex: the one pair of facets at the vertex that meet in `n` but never
/// in a cusp section.
pub fn infer_filling_faces(m: &CuspedManifold, n: &CubicalComplex) -> Result<Vec<Vec<usize>>> {
    let edges: BTreeSet<u64> = n
        .all_cells()
        .filter(|c| c.support.count_ones() == 2)
        .map(|c| c.support)
        .collect();
    let mut out = Vec::with_capacity(m.ideal_vertices.len());
    for k in 0..m.ideal_vertices.len() {
        let v = m.ideal_vertices[k];
        let at_v = vertex_facets(m, k);
        let in_section: BTreeSet<u64> = m
            .cusps
            .iter()
            .filter(|c| c.ideal_vertex == v)
            .flat_map(|c| c.section.all_cells().map(|x| x.support))
            .filter(|s| s.count_ones() == 2)
            .collect();
        let found: Vec<u64> = edges
            .iter()
            .copied()
            .filter(|&s| s & !at_v == 0 && !in_section.contains(&s))
            .collect();
        match found.as_slice() {
            [s] => out.push(bit_indices(*s).collect()),
            _ => {
                return Err(Error::Precondition(format!(
                    "ideal vertex {v}: expected one filling pair, found {}",
                    found.len()
                )))
            }
        }
    }
    Ok(out)
}

/// Labels every cusp of `m` Bounding from a spin-verified Dehn filling `n`.
///
/// `faces[k]` is the filling face `{A, B}` at the k-th ideal vertex. The
/// certificate checks that the part of the core away from the truncation
/// facets sits inside `n`, and that the cusps at each ideal vertex match the
/// components of the filling torus over `A ∩ B` one to one, keyed by their
/// signs on the facets away from the vertex. A spin structure on `n` then
/// restricts to one on `m` that extends over every solid torus factor, so it
/// is bounding on every cusp; conversely such a structure exists exactly when
/// a spinnable filling does.
pub fn bounding_filling_certificate(
    m: &CuspedManifold,
    n: &CubicalComplex,
    spin: &SpinCheck,
    faces: &[Vec<usize>],
) -> Result<Vec<CuspType>> {
    if !spin.spin_verified() {
        return Err(Error::Precondition(format!("the filling is not spin-verified: {}", spin.provenance)));
    }
    let f = m.facet_count;
    if n.ambient_rank() != f || n.is_quotient() {
        return Err(Error::Precondition(format!(
            "the filling must be a distinct-colour complex on {f} coordinates"
        )));
    }
    if faces.len() != m.ideal_vertices.len() {
        return Err(Error::Precondition(format!(
            "{} filling faces for {} ideal vertices",
            faces.len(),
            m.ideal_vertices.len()
        )));
    }
    let orig = (1u64 << f) - 1;
    for c in m.core.all_cells() {
        if (c.support | c.signs) & !orig == 0 && !n.contains(&CubeCell::new(c.support, c.signs)) {
            return Err(Error::Certificate(format!(
                "core cell ({:#x}, {:#x}) is missing from the filling",
                c.support, c.signs
            )));
        }
    }
    let mut labels = BTreeMap::new();
    for (k, face) in faces.iter().enumerate() {
        let v = m.ideal_vertices[k];
        let at_v = vertex_facets(m, k);
        if face.len() != 2 || face_mask(face) & !at_v != 0 {
            return Err(Error::Precondition(format!("filling face {face:?} is not a pair of facets at vertex {v}")));
        }
        let outside = orig & !at_v;
        let report = filling_torus_components(n, face)?;
        let mut keys = BTreeMap::new();
        for (i, comp) in report.components.iter().enumerate() {
            let key = comp[0] & outside;
            if comp.iter().any(|&g| g & outside != key) || keys.insert(key, i).is_some() {
                return Err(Error::Certificate(format!(
                    "filling torus over {face:?} is not separated by the signs away from the vertex"
                )));
            }
        }
        let cusps: Vec<_> = m.cusps.iter().filter(|c| c.ideal_vertex == v).collect();
        if cusps.len() != keys.len() {
            return Err(Error::Certificate(format!(
                "{} cusps at vertex {v} but {} filling torus components",
                cusps.len(),
                keys.len()
            )));
        }
        for c in cusps {
            let Some(&comp) = keys.get(&c.outside_signs) else {
                return Err(Error::Certificate(format!("cusp {} has no filling torus component", c.id)));
            };
            labels.insert(
                c.id,
                CuspType {
                    id: c.id,
                    label: CuspLabel::Bounding,
                    provenance: format!(
                        "extends over component {comp} of the filling torus over facets {face:?} in a spin-verified \
                         filling ({}); a spinnable filling exists exactly when all cusps can be made bounding",
                        spin.provenance
                    ),
                },
            );
        }
    }
    Ok(labels.into_values().collect())
}

/// Summary written by `spin-report` and the pipeline.
#[derive(Clone, Debug)]
pub struct SpinReport {
    pub spinnable: bool,
    pub structure_count: Option<BigUint>,
    pub cusps: Vec<CuspType>,
    pub dirac: DiracLabel,
    pub filling: Option<SpinCheck>,
}

impl SpinReport {
    pub fn new(spinnable: bool, structure_count: Option<BigUint>, cusps: Vec<CuspType>, filling: Option<SpinCheck>) -> Self {
        let labels: Vec<CuspLabel> = cusps.iter().map(|c| c.label).collect();
        SpinReport {
            spinnable,
            structure_count,
            dirac: dirac_label(&labels),
            cusps,
            filling,
        }
    }

    pub fn to_json(&self) -> Value {
        let count = self.structure_count.as_ref().map(|c| match c.to_u64() {
            Some(x) => Value::from(x),
            None => Value::from(c.to_string()),
        });
        json!({
            "spinnable": self.spinnable,
            "structure_count": count,
            "cusps": self.cusps,
            "dirac": self.dirac,
            "filling_verification": self.filling.as_ref().map(SpinCheck::to_json),
        })
    }
}

/// Spin report for a cusped manifold from a filled complex: the cusps are
/// labelled by the bounding certificate and the structures on the core are
/// counted by `H¹(M; Z/2)`.
pub fn spin_report(m: &CuspedManifold, n: &CubicalComplex, faces: Option<&[Vec<usize>]>) -> Result<SpinReport> {
    let check = spin_obstruction(n)?;
    let inferred;
    let faces = match faces {
        Some(f) => f,
        None => {
            inferred = infer_filling_faces(m, n)?;
            &inferred
        }
    };
    let cusps = bounding_filling_certificate(m, n, &check, faces)?;
    let b1 = homology(&chain_complex_of(&m.core, Coeff::Z2)?)?.betti.get(1).copied().unwrap_or(0);
    Ok(SpinReport::new(true, Some(BigUint::one() << b1), cusps, Some(check)))
}
