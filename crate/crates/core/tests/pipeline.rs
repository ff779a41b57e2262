use std::collections::BTreeMap;
use std::path::Path;

use cuspforge::pipeline::{run_pipeline, PipelineConfig};

fn artifacts(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect()
}

#[test]
fn pipeline_artifacts_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let mut cfg = PipelineConfig::preset(3);
        cfg.out_dir = Some(dir.path().to_path_buf());
        run_pipeline(&cfg).unwrap();
    }
    let (x, y) = (artifacts(a.path()), artifacts(b.path()));
    assert!(x.contains_key("report.json") && x.contains_key("census.json"));
    assert_eq!(x, y);
}

#[test]
fn census_only_run_skips_the_complexes() {
    let run = run_pipeline(&PipelineConfig::preset(6)).unwrap();
    assert!(run.report.is_none());
    assert!(run.census.total > 0u32.into());
}

#[test]
fn failures_name_their_stage() {
    let mut cfg = PipelineConfig::preset(3);
    cfg.diagonals = Some("f99:0".into());
    let err = run_pipeline(&cfg).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    assert_eq!(err.to_json()["stage"], "subdivide");
}
