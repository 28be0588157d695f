#![no_main]

use libfuzzer_sys::fuzz_target;
use trtc_bench::output::{parse_csv, to_string, Format};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(rows) = parse_csv(text) {
        let again = parse_csv(&to_string(&rows, Format::Csv)).expect("emitted CSV parses");
        assert_eq!(again.len(), rows.len());
    }
});
