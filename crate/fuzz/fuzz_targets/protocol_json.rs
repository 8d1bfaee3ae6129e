#![no_main]

use libfuzzer_sys::fuzz_target;
use sgphonon::SplitProtocol;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(p) = SplitProtocol::from_json(text) else {
        return;
    };
    assert_eq!(SplitProtocol::from_json(&p.to_json()).unwrap(), p);
    let _ = p.gradient_at(p.start());
    let _ = p.separation_at(0.0);
});
