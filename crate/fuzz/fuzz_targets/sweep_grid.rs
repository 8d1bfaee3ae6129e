#![no_main]

use libfuzzer_sys::fuzz_target;
use sgphonon_cli::SweepGrid;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(grid) = SweepGrid::from_json(text) else {
        return;
    };
    let _ = grid.options();
    let _ = grid.points();
});
