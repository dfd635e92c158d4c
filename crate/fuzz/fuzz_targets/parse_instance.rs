#![no_main]

use kantorovich_cli::{parse_instance, run_scenario, Command, Options};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    let Ok(instance) = parse_instance(text) else { return };
    // Accepted instances must run to a report or a typed error, never a panic.
    if instance.x.weights.len() * instance.y.weights.len() <= 16 {
        for command in [Command::Chain, Command::Cover, Command::Arveson, Command::Extend] {
            let _ = run_scenario(&instance, &command, &Options::default());
        }
    }
});
