#![no_main]

use libfuzzer_sys::fuzz_target;
use sgphonon::MaterialModel;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(m) = MaterialModel::from_json(text) {
        let back = MaterialModel::from_json(&serde_json::to_string(&m).unwrap()).unwrap();
        assert_eq!(back, m);
    }
});
