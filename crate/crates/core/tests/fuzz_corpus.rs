//! Replays the checked-in fuzz corpus through the parser entry points.

use std::fs;
use std::path::PathBuf;

use fdrelay::config::{parse_sweep_flag, ConfigFile};
use fdrelay::harness::SweepParam;

fn corpus(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<(String, String)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let path = e.unwrap().path();
            (path.file_name().unwrap().to_string_lossy().into_owned(), fs::read_to_string(&path).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty());
    out
}

#[test]
fn config_seeds_parse_or_fail_cleanly() {
    let mut accepted = 0;
    for (name, text) in corpus("config_parse") {
        let parsed = ConfigFile::parse(&text).and_then(|c| c.to_scenario());
        match name.as_str() {
            "unknown_key.toml" | "coincident.toml" => assert!(parsed.is_err(), "{name}"),
            _ => {
                parsed.unwrap_or_else(|e| panic!("{name}: {e}"));
                accepted += 1;
            }
        }
    }
    assert!(accepted >= 5);
}

#[test]
fn sweep_seeds_parse_or_fail_cleanly() {
    for (name, text) in corpus("sweep_flag") {
        let parsed = parse_sweep_flag(&text);
        match name.as_str() {
            "unknown" | "empty_values" => assert!(parsed.is_err(), "{name}"),
            _ => {
                let (param, values) = parsed.unwrap_or_else(|e| panic!("{name}: {e}"));
                assert!(!values.is_empty());
                // values are only range-checked once applied to a scenario
                let applied = values.iter().map(|&v| param.apply(&Default::default(), v)).collect::<Vec<_>>();
                assert_eq!(applied.iter().all(|r| r.is_ok()), name != "array_fraction", "{name}");
                assert_eq!(param.name().parse::<SweepParam>().unwrap(), param);
            }
        }
    }
}
