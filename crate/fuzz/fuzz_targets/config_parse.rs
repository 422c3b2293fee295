#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(cfg) = vmi_core::config::RunConfig::parse(text) {
            // typed accessors must reject bad values without panicking
            let _ = cfg.rapidity();
            let _ = cfg.decoherence_model();
            let _ = cfg.grid();
            let _ = cfg.generator_config();
            let _ = cfg.build_layout();
            let _ = cfg.scenario();
            let _ = cfg.hash_hex();
        }
    }
});
