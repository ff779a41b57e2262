//! Self-check suites behind `cuspforge verify`. Each suite recomputes a set of
//! known values from scratch and reports one line per check.

use num_bigint::{BigInt, BigUint};
use serde_json::{json, Value};

use crate::algebra::{chain_complex_of, homology, Coeff, IntMatrix};
use crate::characteristic::{
    dirac_label, orientability, spin_obstruction, spin_structures, summand_certificate_matrix, CuspLabel,
    DiracLabel, LieChecker, SummandChecker, W2Status,
};
use crate::complex::{dualize_complex, FaceLattice, SimplicialComplex};
use crate::error::{Error, Result};
use crate::filling::{
    dehn_fill, labelled_duality_check, subdivide_cross_facets, subdivide_cross_polytope, DiagonalChoice,
    FillingChoice,
};
use crate::moment_angle::{
    colour_manifold, cusp_census, cusp_census_union_find, cusped_core, manifold_check, real_moment_angle, Colouring,
};
use crate::zoo::{gosset, ideal_dual, IdealPolytope};

pub const SUITES: [&str; 5] = ["links", "duality", "homology", "census", "characteristic"];

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "passed": self.passed(),
            "checks": self.checks.iter().map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail})).collect::<Vec<_>>(),
        })
    }

    pub fn lines(&self) -> Vec<String> {
        self.checks
            .iter()
            .map(|c| format!("[{}] {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail))
            .collect()
    }
}

struct Suite {
    checks: Vec<Check>,
}

impl Suite {
    /// Records a check; an error inside counts as a failure with its message.
    fn check(&mut self, name: &str, f: impl FnOnce() -> Result<(bool, String)>) {
        let (passed, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            detail,
        });
    }
}

pub fn verify(suite: &str) -> Result<VerifyReport> {
    let mut s = Suite { checks: Vec::new() };
    match suite {
        "links" => links(&mut s),
        "duality" => duality(&mut s),
        "homology" => homology_suite(&mut s),
        "census" => census(&mut s),
        "characteristic" => characteristic(&mut s),
        other => {
            return Err(Error::Precondition(format!(
                "unknown suite {other:?}, expected one of {}",
                SUITES.join(", ")
            )))
        }
    }
    Ok(VerifyReport {
        suite: suite.to_string(),
        checks: s.checks,
    })
}

/// Boundary of the `d`-dimensional cross-polytope on vertices `2i, 2i+1`.
pub fn cross_polytope_boundary(d: usize) -> SimplicialComplex {
    let facets = (0..1u32 << d)
        .map(|m| (0..d).map(|i| 2 * i + (m >> i & 1) as usize).collect())
        .collect();
    SimplicialComplex::new(2 * d, facets).expect("valid cross-polytope")
}

/// The square as a polytope, dual to a 4-cycle.
pub fn square() -> FaceLattice {
    let cycle = SimplicialComplex::new(4, (0..4).map(|i| vec![i, (i + 1) % 4]).collect()).expect("cycle");
    dualize_complex(&cycle).expect("square")
}

/// Colour manifold of the square with colours `e₁, e₂, e₁+e₂, e₂`.
pub fn klein_bottle() -> Result<crate::complex::CubicalComplex> {
    colour_manifold(&square(), &Colouring::new(2, vec![1, 2, 3, 2])?)
}

fn polytope(n: usize) -> Result<(FaceLattice, IdealPolytope)> {
    let g = gosset(n)?.lattice()?;
    let p = ideal_dual(&g)?;
    Ok((g, p))
}

/// `K^(n-1)` and the filled polytope for the all-zero filling choice.
fn filled_complex(n: usize) -> Result<(FaceLattice, SimplicialComplex)> {
    let (g, p) = polytope(n)?;
    let choice = FillingChoice::uniform(&p, 0);
    let filled = dehn_fill(&p, &choice)?;
    let k = subdivide_cross_facets(&g, &DiagonalChoice::for_filling(&g, &p, &choice)?)?;
    Ok((filled.lattice, k))
}

fn links(s: &mut Suite) {
    s.check("links of RZ over the octahedron boundary", || {
        let k = cross_polytope_boundary(3);
        let z = real_moment_angle(&k)?;
        let r = manifold_check(&z, &k);
        let ok = r.passed() && z.cells(0).len() == 64 && z.cells(3).len() == 64;
        Ok((ok, format!("{} vertices, {} top cells, {} failures", z.cells(0).len(), z.cells(3).len(), r.failures.len())))
    });
    for n in [3usize, 4] {
        s.check(&format!("links of RZ over K^{}", n - 1), || {
            let (_, k) = filled_complex(n)?;
            let z = real_moment_angle(&k)?;
            let r = manifold_check(&z, &k);
            Ok((r.passed(), format!("{} vertices checked", r.vertices_checked)))
        });
    }
    s.check("a single edge is rejected", || {
        let k = SimplicialComplex::new(2, vec![vec![0, 1]])?;
        let z = real_moment_angle(&k)?;
        let r = manifold_check(&z, &k);
        Ok((!r.passed(), format!("{} failing vertices", r.failures.len())))
    });
}

fn duality(s: &mut Suite) {
    for (d, expected) in [(2usize, 2usize), (3, 4), (4, 8)] {
        s.check(&format!("cross-polytope of dimension {d} splits into {expected} simplices"), || {
            let pairs: Vec<(usize, usize)> = (0..d).map(|i| (2 * i, 2 * i + 1)).collect();
            let got = (0..d).map(|a| subdivide_cross_polytope(&pairs, a).len()).collect::<Vec<_>>();
            Ok((got.iter().all(|&c| c == expected), format!("{got:?}")))
        });
    }
    s.check("P3 is a bipyramid with 3 ideal and 2 real vertices", || {
        let (_, p) = polytope(3)?;
        let ok = p.facet_count() == 6 && p.ideal_vertices().len() == 3 && p.real_vertices().len() == 2;
        Ok((ok, format!("{} facets", p.facet_count())))
    });
    s.check("every filling of P3 is simple with 6 facets and dual to its subdivision", || {
        let (g, p) = polytope(3)?;
        let mut count = 0;
        let mut cubes = 0;
        for choice in FillingChoice::enumerate(&p) {
            let filled = dehn_fill(&p, &choice)?;
            let k = subdivide_cross_facets(&g, &DiagonalChoice::for_filling(&g, &p, &choice)?)?;
            if !filled.lattice.is_simple() || filled.lattice.facet_count() != 6 || !labelled_duality_check(&filled.lattice, &k) {
                return Ok((false, format!("filling {choice} fails")));
            }
            count += 1;
            cubes += (filled.lattice.f_vector() == vec![8, 12, 6]) as usize;
        }
        Ok((count == 8 && cubes > 0, format!("{count} fillings, {cubes} cubes")))
    });
    s.check("every filling of P4 is simple and dual to its subdivision", || {
        let (g, p) = polytope(4)?;
        let mut count = 0;
        for choice in FillingChoice::enumerate(&p) {
            let filled = dehn_fill(&p, &choice)?;
            let k = subdivide_cross_facets(&g, &DiagonalChoice::for_filling(&g, &p, &choice)?)?;
            if !labelled_duality_check(&filled.lattice, &k) {
                return Ok((false, format!("filling {choice} fails")));
            }
            count += 1;
        }
        Ok((count == 243, format!("{count} fillings")))
    });
}

fn homology_suite(s: &mut Suite) {
    s.check("RZ over the octahedron boundary has the Betti numbers of T3", || {
        let z = real_moment_angle(&cross_polytope_boundary(3))?;
        let z2 = homology(&chain_complex_of(&z, Coeff::Z2)?)?;
        let zz = homology(&chain_complex_of(&z, Coeff::Z)?)?;
        let ok = z2.betti == [1, 3, 3, 1]
            && zz.betti == [1, 3, 3, 1]
            && zz.torsion.iter().all(Vec::is_empty)
            && z.euler_characteristic() == 0;
        Ok((ok, format!("Z2 {:?}, Z {:?}", z2.betti, zz.betti)))
    });
    s.check("the Klein bottle has H1 = Z + Z/2", || {
        let z = klein_bottle()?;
        let h = homology(&chain_complex_of(&z, Coeff::Z)?)?;
        let ok = h.betti == [1, 1, 0] && h.torsion[1] == [BigInt::from(2)];
        Ok((ok, format!("betti {:?}, torsion {:?}", h.betti, h.torsion)))
    });
    s.check("the distinct colour manifold of the filled P3 is RZ over K2", || {
        let (filled, k) = filled_complex(3)?;
        let a = colour_manifold(&filled, &Colouring::distinct(filled.facet_count())?)?;
        let b = real_moment_angle(&k)?;
        let h = homology(&chain_complex_of(&b, Coeff::Z2)?)?;
        Ok((a == b, format!("Z2 Betti {:?}", h.betti)))
    });
}

fn census(s: &mut Suite) {
    for (n, expected) in [(3usize, 12u32), (4, 80)] {
        s.check(&format!("cusp count of M{n} by formula and union-find"), || {
            let (_, p) = polytope(n)?;
            let c = Colouring::distinct(p.facet_count())?;
            let formula = cusp_census(&p, &c)?.total;
            let explicit = cusp_census_union_find(&p, &c)?.total;
            let core = cusped_core(&p)?.cusps.len();
            let ok = formula == BigUint::from(expected) && explicit == formula && core == expected as usize;
            Ok((ok, format!("formula {formula}, union-find {explicit}, core sections {core}")))
        });
    }
    s.check("cusp count of M8 is 2160 * 2^226", || {
        let p = gosset(8)?.ideal_polytope()?;
        let c = cusp_census(&p, &Colouring::distinct(p.facet_count())?)?;
        let expected = BigUint::from(2160u32) << 226;
        Ok((c.total == expected, format!("{} (~{})", c.total, c.magnitude())))
    });
}

fn characteristic(s: &mut Suite) {
    s.check("T3 is orientable with 8 spin structures", || {
        let z = real_moment_angle(&cross_polytope_boundary(3))?;
        let set = spin_structures(&z)?;
        Ok((set.count == BigUint::from(8u32), format!("{} structures", set.count)))
    });
    s.check("the Klein bottle is not orientable", || {
        let o = orientability(&klein_bottle()?)?;
        Ok((!o, format!("orientable = {o}")))
    });
    s.check("diag(2) is not a summand inclusion", || {
        let ok = !summand_certificate_matrix(&IntMatrix::from_rows(&[vec![2]]))
            && summand_certificate_matrix(&IntMatrix::identity(2));
        Ok((ok, "index-2 image rejected".into()))
    });
    s.check("T4 has an even intersection form", || {
        let z = real_moment_angle(&cross_polytope_boundary(4))?;
        let c = spin_obstruction(&z)?;
        Ok((c.w2 == W2Status::Vanishes, c.provenance))
    });
    s.check("summand implies Lie on the cusps of M3", || {
        let (_, p) = polytope(3)?;
        let m = cusped_core(&p)?;
        let sc = SummandChecker::new(&m.core)?;
        let lc = LieChecker::new(&m.core)?;
        let mut summands = 0;
        for c in &m.cusps {
            let a = sc.check(&c.section)?.holds;
            let b = lc.check(&c.section)?.holds;
            if a && !b {
                return Ok((false, format!("cusp {} is a summand without Lie extension", c.id)));
            }
            summands += a as usize;
        }
        Ok((true, format!("{summands} of {} cusps are summands", m.cusps.len())))
    });
    s.check("Dirac labels follow the cusp labels", || {
        use CuspLabel::*;
        let ok = dirac_label(&[Lie, Bounding, Bounding]) == DiracLabel::Real
            && dirac_label(&[Bounding; 12]) == DiracLabel::Discrete
            && dirac_label(&[Undetermined, Bounding]) == DiracLabel::Unknown;
        Ok((ok, "Real, Discrete, Unknown".into()))
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(matches!(verify("nope"), Err(Error::Precondition(_))));
    }

    #[test]
    fn fast_suites_pass() {
        for suite in ["homology", "characteristic"] {
            let r = verify(suite).unwrap();
            assert!(r.passed(), "{:#?}", r.lines());
        }
    }
}
