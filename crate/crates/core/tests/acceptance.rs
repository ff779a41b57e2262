//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};

use cuspforge::algebra::{chain_complex_of, homology, Coeff, IntMatrix};
use cuspforge::characteristic::{
    dirac_label, orientability, spin_obstruction, summand_certificate, summand_certificate_matrix, CuspLabel,
    DiracLabel, LieChecker, SummandChecker, W2Status, lie_cusp_certificate,
};
use cuspforge::complex::{cubical_isomorphic, find_set_isomorphism, SetSystem, SimplicialComplex};
use cuspforge::filling::{
    dehn_fill, labelled_duality_check, subdivide_cross_facets, subdivide_cross_polytope, DiagonalChoice,
    FillingChoice,
};
use cuspforge::moment_angle::{
    colour_manifold, cusp_census, cusp_census_union_find, cusped_core, manifold_check, preimage_components,
    real_moment_angle, Colouring,
};
use cuspforge::pipeline::{run_pipeline, PipelineConfig};
use cuspforge::verify::{cross_polytope_boundary, klein_bottle};
use cuspforge::zoo::{
    abelianization_rank, gosset, gosset_by_hull, gosset_by_orbit, ideal_dual, FacetKind, Gosset, IdealPolytope,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

fn polytope(n: usize) -> Result<(cuspforge::complex::FaceLattice, IdealPolytope), String> {
    let g = gosset(n).map_err(e)?.lattice().map_err(e)?;
    let p = ideal_dual(&g).map_err(e)?;
    Ok((g, p))
}

fn cube_choice(p: &IdealPolytope) -> Option<FillingChoice> {
    FillingChoice::enumerate(p).find(|c| dehn_fill(p, c).is_ok_and(|f| f.lattice.f_vector() == vec![8, 12, 6]))
}

fn c1_p3_data() -> Outcome {
    let (_, p) = polytope(3)?;
    ensure(p.facet_count() == 6, format!("{} facets", p.facet_count()))?;
    ensure(p.ideal_vertices().len() == 3 && p.real_vertices().len() == 2, "vertex marks")?;
    let mut count = 0;
    for choice in FillingChoice::enumerate(&p) {
        let f = dehn_fill(&p, &choice).map_err(e)?;
        ensure(f.lattice.is_simple() && f.lattice.facet_count() == 6, format!("filling {choice}"))?;
        count += 1;
    }
    ensure(count == 8, format!("{count} fillings"))?;
    let cube = cube_choice(&p).ok_or("no filling is a cube")?;
    Ok(format!("bipyramid 6 facets / 3 ideal / 2 real; 8 simple fillings; {cube} gives a cube"))
}

fn c2_subdivision() -> Outcome {
    let mut got = Vec::new();
    for (d, expected) in [(2usize, 2usize), (3, 4), (4, 8)] {
        let pairs: Vec<(usize, usize)> = (0..d).map(|i| (2 * i, 2 * i + 1)).collect();
        let simplices = subdivide_cross_polytope(&pairs, 0);
        ensure(simplices.len() == expected, format!("dimension {d}: {}", simplices.len()))?;
        // Independent oracle: each simplex contains both ends of the diagonal
        // and one end of every other pair, and all such simplices appear.
        let mut oracle: Vec<Vec<usize>> = (0..1u32 << (d - 1))
            .map(|m| {
                let mut s = vec![0, 1];
                for i in 1..d {
                    s.push(2 * i + (m >> (i - 1) & 1) as usize);
                }
                s.sort_unstable();
                s
            })
            .collect();
        oracle.sort();
        let mut mine: Vec<Vec<usize>> = simplices
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s
            })
            .collect();
        mine.sort();
        ensure(mine == oracle, format!("dimension {d}: simplices differ from the oracle"))?;
        got.push(expected);
    }
    Ok(format!("square, octahedron, 16-cell split into {got:?}"))
}

fn c3_torus() -> Outcome {
    let k = cross_polytope_boundary(3);
    let z = real_moment_angle(&k).map_err(e)?;
    ensure(z.cells(0).len() == 64 && z.cells(3).len() == 64, "cell counts")?;
    let r = manifold_check(&z, &k);
    ensure(r.passed() && r.vertices_checked == 64, "vertex links")?;
    for coeff in [Coeff::Z, Coeff::Z2] {
        let h = homology(&chain_complex_of(&z, coeff).map_err(e)?).map_err(e)?;
        ensure(h.betti == [1, 3, 3, 1], format!("{coeff:?} Betti {:?}", h.betti))?;
        ensure(h.torsion.iter().all(Vec::is_empty), "torsion")?;
    }
    ensure(z.euler_characteristic() == 0, "Euler characteristic")?;
    Ok("64 vertices, 64 cubes, links are octahedra, Betti (1,3,3,1) over Z and Z/2, chi = 0".into())
}

fn c4_colour_iso() -> Outcome {
    let (g, p) = polytope(3)?;
    let choice = FillingChoice::uniform(&p, 0);
    let filled = dehn_fill(&p, &choice).map_err(e)?;
    let k = subdivide_cross_facets(&g, &DiagonalChoice::for_filling(&g, &p, &choice).map_err(e)?).map_err(e)?;
    let a = colour_manifold(&filled.lattice, &Colouring::distinct(6).map_err(e)?).map_err(e)?;
    let b = real_moment_angle(&k).map_err(e)?;
    ensure(cubical_isomorphic(&a, &b).is_some(), "not isomorphic")?;
    Ok(format!("colour manifold and RZ_K2 isomorphic ({} cells)", a.cell_count()))
}

fn c5_census() -> Outcome {
    let (_, p3) = polytope(3)?;
    let distinct = Colouring::distinct(6).map_err(e)?;
    let c3 = cusp_census(&p3, &distinct).map_err(e)?;
    ensure(c3.total == BigUint::from(12u32), format!("M3 total {}", c3.total))?;

    let choice = cube_choice(&p3).ok_or("no cube filling")?;
    let filled = dehn_fill(&p3, &choice).map_err(e)?;
    let n3 = colour_manifold(&filled.lattice, &distinct).map_err(e)?;
    for i in 0..filled.filling_faces.len() {
        let rep = preimage_components(&n3, &filled, i).map_err(e)?;
        ensure(rep.copies_per_component().iter().all(|&c| c == 4), "copies per component")?;
    }

    for (n, total) in [(3usize, 12u32), (4, 80)] {
        let (_, p) = polytope(n)?;
        let c = Colouring::distinct(p.facet_count()).map_err(e)?;
        let a = cusp_census(&p, &c).map_err(e)?.total;
        let b = cusp_census_union_find(&p, &c).map_err(e)?.total;
        ensure(a == b && a == BigUint::from(total), format!("n = {n}: formula {a}, union-find {b}"))?;
    }

    let p8 = gosset(8).map_err(e)?.ideal_polytope().map_err(e)?;
    let c8 = cusp_census(&p8, &Colouring::distinct(240).map_err(e)?).map_err(e)?;
    ensure(c8.total == BigUint::from(2160u32) << 226, "M8 total")?;
    ensure(c8.magnitude().starts_with("2.3") && c8.magnitude().ends_with("e71"), c8.magnitude())?;
    Ok(format!("M3 = 12 with 4 copies per component, M8 = 2160*2^226 ~ {}", c8.magnitude()))
}

fn c6_abelianization() -> Outcome {
    let (_, p3) = polytope(3)?;
    let p8 = gosset(8).map_err(e)?.ideal_polytope().map_err(e)?;
    let (a, b) = (abelianization_rank(&p3.racg()), abelianization_rank(&p8.racg()));
    ensure(a == 6 && b == 240, format!("{a}, {b}"))?;
    Ok(format!("rank {a} for P3, {b} for P8"))
}

fn c7_spin() -> Outcome {
    let (_, k2) = {
        let (g, p) = polytope(3)?;
        let choice = FillingChoice::uniform(&p, 0);
        (p.clone(), subdivide_cross_facets(&g, &DiagonalChoice::for_filling(&g, &p, &choice).map_err(e)?).map_err(e)?)
    };
    let z3 = real_moment_angle(&k2).map_err(e)?;
    let c3 = spin_obstruction(&z3).map_err(e)?;
    ensure(c3.orientable && c3.w2 == W2Status::Vanishes, "RZ_K2")?;
    ensure(c3.provenance.starts_with("dimension-forced"), "provenance tag")?;

    let (g, p) = polytope(4)?;
    let choice = FillingChoice::uniform(&p, 0);
    let filled = dehn_fill(&p, &choice).map_err(e)?;
    let k3 = subdivide_cross_facets(&g, &DiagonalChoice::for_filling(&g, &p, &choice).map_err(e)?).map_err(e)?;
    ensure(labelled_duality_check(&filled.lattice, &k3), "duality")?;
    let z4 = real_moment_angle(&k3).map_err(e)?;
    let m4 = colour_manifold(&filled.lattice, &Colouring::distinct(p.facet_count()).map_err(e)?).map_err(e)?;
    ensure(z4 == m4, "filled colour manifold differs from RZ_K3")?;
    let c4 = spin_obstruction(&z4).map_err(e)?;
    ensure(c4.orientable && c4.w2 == W2Status::Vanishes, c4.provenance.clone())?;
    let q = c4.intersection_form.as_ref().ok_or("no form")?;
    ensure(q.rank() == q.rows() && q.diagonal().iter().all(|&d| !d), "form not even and unimodular")?;
    Ok(format!("w1 = w2 = 0 on T3 and on {} cells of M4bar ({}x{} even form)", z4.cell_count(), q.rows(), q.rows()))
}

fn c8_pipeline() -> Outcome {
    let mut lines = Vec::new();
    for (n, cusps) in [(3usize, 12usize), (4, 80)] {
        let dir = tempfile::tempdir().map_err(e)?;
        let mut cfg = PipelineConfig::preset(n);
        cfg.out_dir = Some(dir.path().to_path_buf());
        let run = run_pipeline(&cfg).map_err(e)?;
        let report = run.report.as_ref().ok_or("no report")?;
        ensure(report.cusps.len() == cusps, format!("n = {n}: {} cusps", report.cusps.len()))?;
        ensure(report.cusps.iter().all(|c| c.label == CuspLabel::Bounding), "labels")?;
        ensure(report.dirac == DiracLabel::Discrete, "dirac")?;
        let check = report.filling.as_ref().ok_or("no spin verification attached")?;
        ensure(check.spin_verified(), "filling not verified")?;
        let json = report.to_json();
        ensure(json["filling_verification"]["w2"] == "vanishes", "verification missing from json")?;
        lines.push(format!("n={n}: {cusps} Bounding, Discrete"));
    }
    Ok(lines.join("; "))
}

fn c9_lemma() -> Outcome {
    let mut instances = 0;
    let mut summands = 0;
    let mut record = |s: bool, l: bool| -> Result<(), String> {
        instances += 1;
        summands += s as usize;
        ensure(!s || l, "summand without Lie extension")
    };
    let t3 = real_moment_angle(&cross_polytope_boundary(3)).map_err(e)?;
    let s = summand_certificate(&t3, &t3).map_err(e)?.holds;
    let l = lie_cusp_certificate(&t3, &t3).map_err(e)?.holds;
    record(s, l)?;
    for n in [3usize, 4] {
        let (_, p) = polytope(n)?;
        let m = cusped_core(&p).map_err(e)?;
        let sc = SummandChecker::new(&m.core).map_err(e)?;
        let lc = LieChecker::new(&m.core).map_err(e)?;
        // Every cusp at n = 3; one cusp per ideal vertex at n = 4.
        let mut seen = std::collections::BTreeSet::new();
        for c in &m.cusps {
            if n == 4 && !seen.insert(c.ideal_vertex) {
                continue;
            }
            let s = sc.check(&c.section).map_err(e)?.holds;
            let l = lc.check(&c.section).map_err(e)?.holds;
            record(s, l)?;
        }
    }
    let mut labels = vec![CuspLabel::Bounding; 12];
    ensure(dirac_label(&labels) == DiracLabel::Discrete, "baseline")?;
    labels[5] = CuspLabel::Lie;
    ensure(dirac_label(&labels) == DiracLabel::Real, "injected Lie label")?;
    Ok(format!("{summands} summands among {instances} instances, all Lie; injected Lie gives Real"))
}

fn c10_negative() -> Outcome {
    let kb = klein_bottle().map_err(e)?;
    ensure(!orientability(&kb).map_err(e)?, "Klein bottle orientable")?;
    let h = homology(&chain_complex_of(&kb, Coeff::Z).map_err(e)?).map_err(e)?;
    ensure(h.betti[2] == 0 && h.torsion[1] == [BigInt::from(2)], "Klein bottle homology")?;
    ensure(!summand_certificate_matrix(&IntMatrix::from_rows(&[vec![2]])), "diag(2)")?;
    let edge = SimplicialComplex::new(2, vec![vec![0, 1]]).map_err(e)?;
    let z = real_moment_angle(&edge).map_err(e)?;
    let r = manifold_check(&z, &edge);
    ensure(!r.passed(), "single edge accepted")?;
    Ok(format!("Klein bottle non-orientable, diag(2) rejected, edge fails at {} vertices", r.failures.len()))
}

fn c11_gosset() -> Outcome {
    let sys = |g: &Gosset| SetSystem {
        points: g.vertex_count(),
        blocks: g.facets().to_vec(),
    };
    // The orbit construction starts at E4; G^3 is the triangular prism.
    let prism = SetSystem {
        points: 6,
        blocks: vec![vec![0, 1, 2], vec![3, 4, 5], vec![0, 1, 3, 4], vec![1, 2, 4, 5], vec![0, 2, 3, 5]],
    };
    ensure(find_set_isomorphism(&sys(&gosset_by_hull(3).map_err(e)?), &prism).is_some(), "n = 3: hull is not the prism")?;
    for n in 4..=5 {
        let a = gosset_by_hull(n).map_err(e)?;
        let b = gosset_by_orbit(n).map_err(e)?;
        ensure(find_set_isomorphism(&sys(&a), &sys(&b)).is_some(), format!("n = {n}: hull and orbit differ"))?;
    }
    for (n, v, s, c) in [(6usize, 27usize, 72usize, 27usize), (7, 56, 576, 126), (8, 240, 17280, 2160)] {
        let g = gosset_by_orbit(n).map_err(e)?;
        ensure(
            g.vertex_count() == v && g.count(FacetKind::Simplex) == s && g.count(FacetKind::CrossPolytope) == c,
            format!("n = {n} counts"),
        )?;
    }
    let p8 = gosset(8).map_err(e)?.ideal_polytope().map_err(e)?;
    ensure(p8.ideal_vertices().len() == 2160 && p8.facet_count() == 240, "P8")?;
    Ok("hull matches orbit (n = 4, 5) and the prism (n = 3); E6, E7, E8 counts; P8 has 2160 ideal vertices and 240 facets".into())
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn main() {
    let criteria: [Criterion; 11] = [
        ("1 P3 data and fillings", c1_p3_data, Duration::from_secs(1)),
        ("2 subdivision counts", c2_subdivision, Duration::from_secs(1)),
        ("3 RZ over the octahedron boundary", c3_torus, Duration::from_secs(10)),
        ("4 colour manifold = RZ_K2", c4_colour_iso, Duration::from_secs(10)),
        ("5 cusp censuses", c5_census, Duration::from_secs(30)),
        ("6 abelianization ranks", c6_abelianization, Duration::from_secs(30)),
        ("7 w1 = w2 = 0 at n = 3, 4", c7_spin, Duration::from_secs(300)),
        ("8 bounding chain at n = 3, 4", c8_pipeline, Duration::from_secs(300)),
        ("9 summand implies Lie, Dirac labels", c9_lemma, Duration::from_secs(300)),
        ("10 negative controls", c10_negative, Duration::from_secs(10)),
        ("11 Gosset constructions", c11_gosset, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (name, f, limit) in criteria {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > limit => Err(format!("{msg}; took {elapsed:.1?}, limit {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("[PASS] criterion {name}: {msg} ({elapsed:.2?})"),
            Err(msg) => {
                failed += 1;
                println!("[FAIL] criterion {name}: {msg} ({elapsed:.2?})");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 11 criteria passed");
}
