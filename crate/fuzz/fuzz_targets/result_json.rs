#![no_main]

use libfuzzer_sys::fuzz_target;
use trtc_bench::output::{parse_json, to_string, Format};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(rows) = parse_json(text) {
        let again = parse_json(&to_string(&rows, Format::Json)).expect("emitted JSON parses");
        assert_eq!(again.len(), rows.len());
    }
});
