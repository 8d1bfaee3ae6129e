#![no_main]

use libfuzzer_sys::fuzz_target;
use sgphonon::CouplingChannel;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(ch) = CouplingChannel::from_json(text) {
        let doc = serde_json::to_string(&ch.to_doc()).unwrap();
        assert_eq!(CouplingChannel::from_json(&doc).unwrap(), ch);
    }
});
