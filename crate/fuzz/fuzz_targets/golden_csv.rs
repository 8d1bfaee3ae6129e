#![no_main]

use libfuzzer_sys::fuzz_target;
use sgphonon_oracle::{golden_to_string, parse_golden};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(rows) = parse_golden(text) else {
        return;
    };
    let again = parse_golden(&golden_to_string(&rows)).unwrap();
    assert_eq!(again.len(), rows.len());
});
