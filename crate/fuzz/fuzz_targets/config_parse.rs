#![no_main]

use fdrelay::config::ConfigFile;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(file) = ConfigFile::parse(text) {
        // conversion must reject or accept without panicking
        let _ = file.to_scenario();
    }
});
