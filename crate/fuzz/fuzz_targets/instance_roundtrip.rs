#![no_main]

use kantorovich_cli::parse_instance;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    let Ok(first) = parse_instance(text) else { return };
    let json = first.to_json();
    let second = parse_instance(&json).expect("serialized instances parse");
    assert_eq!(first, second);
    assert_eq!(json, second.to_json());
});
