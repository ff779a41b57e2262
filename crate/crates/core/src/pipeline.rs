//! The end-to-end chain from the Gosset polytope to the spin report of the
//! cusped manifold, with every intermediate object written to disk.

use std::fmt;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::algebra::{chain_complex_of, homology, Coeff};
use crate::characteristic::{bounding_filling_certificate, spin_obstruction, SpinCheck, SpinReport};
use crate::complex::FaceLattice;
use crate::error::{Error, Result};
use crate::filling::{dehn_fill, labelled_duality_check, subdivide_cross_facets, DiagonalChoice, FillingChoice};
use crate::io::{write_binary, write_document, Document};
use crate::moment_angle::{
    colour_manifold, cusp_census, cusped_core, manifold_check, real_moment_angle, Colouring, CuspCensus,
};
use crate::zoo::{gosset, ideal_dual, IdealPolytope};

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub n: usize,
    /// Filling axes; the preset picks one when absent.
    pub filling: Option<FillingChoice>,
    /// `"auto"` or `"fK:i,..."`. Defaults to the diagonals dual to the filling.
    pub diagonals: Option<String>,
    /// Colouring for the census stage, `"distinct"` when absent.
    pub colours: Option<String>,
    pub budget: Option<u64>,
    pub out_dir: Option<PathBuf>,
    /// Stop after the census; used where the explicit complexes are too large.
    pub census_only: bool,
}

impl PipelineConfig {
    /// Full chain for `n ≤ 4`, census only above.
    pub fn preset(n: usize) -> Self {
        PipelineConfig {
            n,
            filling: None,
            diagonals: None,
            colours: None,
            budget: None,
            out_dir: None,
            census_only: n >= 5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(3..=8).contains(&self.n) {
            return Err(Error::DimensionOutOfRange(self.n));
        }
        if self.budget == Some(0) {
            return Err(Error::Precondition("the cell budget must be positive".into()));
        }
        Ok(())
    }
}

/// A failure together with the stage that produced it.
#[derive(Debug)]
pub struct PipelineError {
    pub stage: &'static str,
    pub error: Error,
}

impl fmt::Display for PipelineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "stage {}: {} [{}]", self.stage, self.error, self.error.code())
    }
}

impl std::error::Error for PipelineError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.error)
    }
}

impl PipelineError {
    pub fn exit_code(&self) -> i32 {
        self.error.exit_code()
    }

    pub fn to_json(&self) -> Value {
        json!({"stage": self.stage, "code": self.error.code(), "message": self.error.to_string()})
    }
}

#[derive(Clone, Debug)]
pub struct StageRecord {
    pub stage: &'static str,
    pub detail: Value,
}

#[derive(Clone, Debug)]
pub struct PipelineRun {
    pub n: usize,
    pub stages: Vec<StageRecord>,
    pub census: CuspCensus,
    pub report: Option<SpinReport>,
    pub filling_check: Option<SpinCheck>,
    pub artifacts: Vec<PathBuf>,
}

impl PipelineRun {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "stages": self.stages.iter().map(|s| json!({"stage": s.stage, "detail": s.detail})).collect::<Vec<_>>(),
            "census": self.census.to_json(),
            "report": self.report.as_ref().map(SpinReport::to_json),
            "artifacts": self.artifacts.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
        })
    }
}

struct Runner<'a> {
    out_dir: Option<&'a Path>,
    stages: Vec<StageRecord>,
    artifacts: Vec<PathBuf>,
}

impl Runner<'_> {
    fn stage<T>(&mut self, stage: &'static str, f: impl FnOnce() -> Result<(T, Value)>) -> std::result::Result<T, PipelineError> {
        let (out, detail) = f().map_err(|error| PipelineError { stage, error })?;
        self.stages.push(StageRecord { stage, detail });
        Ok(out)
    }

    fn write(&mut self, stage: &'static str, name: &str, doc: &Document) -> std::result::Result<(), PipelineError> {
        if let Some(dir) = self.out_dir {
            let path = dir.join(name);
            write_document(&path, doc).map_err(|error| PipelineError { stage, error })?;
            self.artifacts.push(path);
        }
        Ok(())
    }

    fn write_json(&mut self, stage: &'static str, name: &str, v: &Value) -> std::result::Result<(), PipelineError> {
        if let Some(dir) = self.out_dir {
            let path = dir.join(name);
            let text = serde_json::to_string_pretty(v).expect("serializable") + "\n";
            std::fs::write(&path, text).map_err(|e| PipelineError {
                stage,
                error: e.into(),
            })?;
            self.artifacts.push(path);
        }
        Ok(())
    }
}

/// For `n = 3` the polytope has six facets and some fillings are cubes, whose
/// colour manifold is the 3-torus; the preset prefers those. Otherwise every
/// ideal vertex is filled along its first axis.
fn default_filling(p: &IdealPolytope) -> Result<FillingChoice> {
    if p.facet_count() == 2 * p.rank() {
        let cube: Vec<usize> = (0..p.rank()).map(|k| cube_faces(p.rank(), k)).collect();
        for choice in FillingChoice::enumerate(p) {
            if dehn_fill(p, &choice).is_ok_and(|f| f.lattice.f_vector() == cube) {
                return Ok(choice);
            }
        }
    }
    Ok(FillingChoice::uniform(p, 0))
}

/// Number of `k`-dimensional faces of the `n`-cube, `C(n,k) 2^(n-k)`.
fn cube_faces(n: usize, k: usize) -> usize {
    let binom = (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1));
    binom << (n - k)
}

pub fn run_pipeline(cfg: &PipelineConfig) -> std::result::Result<PipelineRun, PipelineError> {
    cfg.validate().map_err(|error| PipelineError { stage: "config", error })?;
    if let Some(dir) = &cfg.out_dir {
        std::fs::create_dir_all(dir).map_err(|e| PipelineError {
            stage: "config",
            error: e.into(),
        })?;
    }
    match cfg.budget {
        Some(b) => crate::with_budget(b, || run(cfg)),
        None => run(cfg),
    }
}

fn run(cfg: &PipelineConfig) -> std::result::Result<PipelineRun, PipelineError> {
    let n = cfg.n;
    let mut r = Runner {
        out_dir: cfg.out_dir.as_deref(),
        stages: Vec::new(),
        artifacts: Vec::new(),
    };

    let (g, gl) = r.stage("gosset", || {
        let g = gosset(n)?;
        let gl: Option<FaceLattice> = if cfg.census_only { None } else { Some(g.lattice()?) };
        let detail = json!({"vertices": g.vertex_count(), "facets": g.facets().len()});
        Ok(((g, gl), detail))
    })?;

    if cfg.census_only {
        let p = r.stage("dual", || {
            let p = g.ideal_polytope()?;
            let d = json!({"facets": p.facet_count(), "vertices": p.vertex_count(), "ideal": p.ideal_vertices().len()});
            Ok((p, d))
        })?;
        let census = census_stage(&mut r, cfg, &p)?;
        return Ok(PipelineRun {
            n,
            stages: r.stages,
            census,
            report: None,
            filling_check: None,
            artifacts: r.artifacts,
        });
    }

    let gl = gl.expect("built unless census only");
    r.write("gosset", "gosset.json", &Document::from(&gl))?;

    let p = r.stage("dual", || {
        let p = ideal_dual(&gl)?;
        let d = json!({"facets": p.facet_count(), "vertices": p.vertex_count(), "ideal": p.ideal_vertices().len()});
        Ok((p, d))
    })?;
    r.write("dual", "polytope.json", &Document::from(p.lattice().expect("built from a lattice")))?;

    let (choice, filled) = r.stage("fill", || {
        let choice = match &cfg.filling {
            Some(c) => c.clone(),
            None => default_filling(&p)?,
        };
        let filled = dehn_fill(&p, &choice)?;
        let d = json!({
            "choice": choice.to_string(),
            "f_vector": filled.lattice.f_vector(),
            "filling_faces": filled.filling_faces,
        });
        Ok(((choice, filled), d))
    })?;
    r.write("fill", "filled.json", &filled.to_document())?;

    let k = r.stage("subdivide", || {
        let d = match &cfg.diagonals {
            Some(text) => DiagonalChoice::parse(text, &gl)?,
            None => DiagonalChoice::for_filling(&gl, &p, &choice)?,
        };
        let k = subdivide_cross_facets(&gl, &d)?;
        let detail = json!({"f_vector": k.f_vector()});
        Ok((k, detail))
    })?;
    r.write("subdivide", "complex.json", &Document::from(&k))?;

    r.stage("duality", || {
        if !labelled_duality_check(&filled.lattice, &k) {
            return Err(Error::Certificate(
                "the subdivided complex is not the dual of the filled polytope".into(),
            ));
        }
        Ok(((), json!({"labelled": true})))
    })?;

    let manifold = r.stage("rzk", || {
        let z = real_moment_angle(&k)?;
        let colour = colour_manifold(&filled.lattice, &Colouring::distinct(filled.lattice.facet_count())?)?;
        if colour != z {
            return Err(Error::Certificate(
                "colour manifold of the filling differs from the real moment-angle complex".into(),
            ));
        }
        let d = json!({"cells": z.cell_count(), "f_vector": z.f_vector(), "euler": z.euler_characteristic()});
        Ok((z, d))
    })?;
    r.write("rzk", "filling.json", &Document::from(&manifold))?;
    if n >= 4 {
        if let Some(dir) = cfg.out_dir.as_deref() {
            let path = dir.join("filling.rzk");
            write_binary(&path, &manifold).map_err(|error| PipelineError { stage: "rzk", error })?;
            r.artifacts.push(path);
        }
    }

    r.stage("manifold_check", || {
        let report = manifold_check(&manifold, &k);
        if !report.passed() {
            return Err(Error::Certificate(format!("{} vertex links fail", report.failures.len())));
        }
        Ok(((), report.to_json()))
    })?;

    let hom = r.stage("homology", || {
        let z2 = homology(&chain_complex_of(&manifold, Coeff::Z2)?)?;
        let z = homology(&chain_complex_of(&manifold, Coeff::Z)?)?;
        let v = json!({"z2": z2, "z": z});
        Ok((v.clone(), v))
    })?;
    r.write_json("homology", "homology.json", &hom)?;

    let check = r.stage("spin", || {
        let check = spin_obstruction(&manifold)?;
        if !check.spin_verified() {
            return Err(Error::Certificate(format!("the filling is not spin: {}", check.provenance)));
        }
        let d = check.to_json();
        Ok((check, d))
    })?;

    let cusped = r.stage("cusped_core", || {
        let m = cusped_core(&p)?;
        let d = json!({"core_cells": m.core.cell_count(), "cusps": m.cusps.len()});
        Ok((m, d))
    })?;
    r.write("cusped_core", "cusped.json", &cusped.to_document())?;

    let census = census_stage(&mut r, cfg, &p)?;
    if census.total != num_bigint::BigUint::from(cusped.cusps.len()) {
        return Err(PipelineError {
            stage: "census",
            error: Error::Certificate(format!(
                "census counts {} cusps, the core has {}",
                census.total,
                cusped.cusps.len()
            )),
        });
    }

    let cusps = r.stage("bounding", || {
        let labels = bounding_filling_certificate(&cusped, &manifold, &check, &filled.filling_faces)?;
        let d = json!({"bounding": labels.len()});
        Ok((labels, d))
    })?;

    let report = r.stage("dirac", || {
        let b1 = homology(&chain_complex_of(&cusped.core, Coeff::Z2)?)?.betti.get(1).copied().unwrap_or(0);
        let report = SpinReport::new(
            true,
            Some(num_bigint::BigUint::from(1u8) << b1),
            cusps,
            Some(check.clone()),
        );
        let d = json!({"dirac": report.dirac});
        Ok((report, d))
    })?;
    r.write_json("dirac", "report.json", &report.to_json())?;

    Ok(PipelineRun {
        n,
        stages: r.stages,
        census,
        report: Some(report),
        filling_check: Some(check),
        artifacts: r.artifacts,
    })
}

fn census_stage(r: &mut Runner, cfg: &PipelineConfig, p: &IdealPolytope) -> std::result::Result<CuspCensus, PipelineError> {
    let census = r.stage("census", || {
        let colouring = match &cfg.colours {
            Some(text) => Colouring::parse(text, p.facet_count())?,
            None => Colouring::distinct(p.facet_count())?,
        };
        let c = cusp_census(p, &colouring)?;
        let d = json!({"total": c.total.to_string(), "magnitude": c.magnitude()});
        Ok((c, d))
    })?;
    r.write_json("census", "census.json", &census.to_json())?;
    Ok(census)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characteristic::{CuspLabel, DiracLabel};

    #[test]
    fn cube_face_numbers() {
        assert_eq!((0..4).map(|k| cube_faces(3, k)).collect::<Vec<_>>(), vec![8, 12, 6, 1]);
    }

    #[test]
    fn three_dimensional_preset() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = PipelineConfig::preset(3);
        cfg.out_dir = Some(dir.path().to_path_buf());
        let run = run_pipeline(&cfg).unwrap();
        let report = run.report.unwrap();
        assert_eq!(report.cusps.len(), 12);
        assert!(report.cusps.iter().all(|c| c.label == CuspLabel::Bounding));
        assert_eq!(report.dirac, DiracLabel::Discrete);
        for name in ["gosset.json", "filled.json", "complex.json", "filling.json", "cusped.json", "report.json"] {
            assert!(dir.path().join(name).exists(), "{name}");
        }
        let fill = run.stages.iter().find(|s| s.stage == "fill").unwrap();
        assert_eq!(fill.detail["f_vector"], json!([8, 12, 6]));
    }

    #[test]
    fn errors_name_their_stage() {
        let mut cfg = PipelineConfig::preset(3);
        cfg.budget = Some(10);
        let err = run_pipeline(&cfg).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        assert!(!err.stage.is_empty());
        cfg.budget = None;
        cfg.n = 9;
        assert_eq!(run_pipeline(&cfg).unwrap_err().stage, "config");
    }
}
