//! Replays the checked-in fuzz corpus through the same parsers and
//! round-trip checks the fuzz targets use, so the seeds stay valid on
//! stable builds.

use std::fs;
use std::path::PathBuf;

use trtc_bench::output::{parse_csv, parse_json, to_string, Format};
use trtc_bench::spec::ExperimentSpec;

fn seeds(target: &str) -> Vec<(PathBuf, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|entry| {
            let path = entry.unwrap().path();
            let text = fs::read_to_string(&path).unwrap();
            (path, text)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn experiment_spec_seeds_parse_and_round_trip() {
    for (path, text) in seeds("experiment_spec") {
        let spec =
            ExperimentSpec::from_json(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(ExperimentSpec::from_json(&spec.to_json()).unwrap(), spec);
    }
}

#[test]
fn result_seeds_parse_and_round_trip() {
    for (path, text) in seeds("result_csv") {
        let rows = parse_csv(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(parse_csv(&to_string(&rows, Format::Csv)).unwrap(), rows);
    }
    for (path, text) in seeds("result_json") {
        let rows = parse_json(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(parse_json(&to_string(&rows, Format::Json)).unwrap(), rows);
    }
}
