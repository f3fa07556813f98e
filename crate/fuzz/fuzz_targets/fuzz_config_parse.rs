//! Fuzz the flat key = value config parser: arbitrary bytes must never
//! panic, and accepted configs must survive resolution and re-merging.

#![no_main]

use libfuzzer_sys::fuzz_target;

use gpe_zero_energy::config::{parse_str, resolve};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(raw) = parse_str(text) {
        // Merging with itself is idempotent for any accepted config.
        let merged = raw.merged_with(&raw);
        assert_eq!(merged, raw);
        // Resolution may reject the config but must not panic.
        let _ = resolve(&raw);
    }
});
