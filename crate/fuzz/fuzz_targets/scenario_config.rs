#![no_main]

use libfuzzer_sys::fuzz_target;
use sgphonon_cli::ScenarioConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(cfg) = ScenarioConfig::from_json(text) else {
        return;
    };
    if let Ok(s) = cfg.scenario() {
        let _ = s.validate();
    }
});
