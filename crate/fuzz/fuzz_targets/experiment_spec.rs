#![no_main]

use libfuzzer_sys::fuzz_target;
use trtc_bench::spec::ExperimentSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(spec) = ExperimentSpec::from_json(text) {
        // anything accepted must survive a round trip and expand into points
        let back = ExperimentSpec::from_json(&spec.to_json()).expect("re-encoded spec parses");
        assert_eq!(back, spec);
        assert!(!spec.points().expect("validated spec expands").is_empty());
    }
});
