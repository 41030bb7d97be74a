#![no_main]

use fdrelay::config::parse_sweep_flag;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok((param, values)) = parse_sweep_flag(text) {
        assert!(!values.is_empty());
        assert!(values.iter().all(|v| v.is_finite()));
        assert_eq!(param.name().parse::<fdrelay::harness::SweepParam>().ok(), Some(param));
    }
});
