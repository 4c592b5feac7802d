#![no_main]

use libfuzzer_sys::fuzz_target;
use qfloor::pipeline::PipelineConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(cfg) = text.parse::<PipelineConfig>() {
        // Compared as text so NaN fields still round-trip.
        let written = cfg.to_string();
        let again: PipelineConfig = written.parse().expect("display output must parse");
        assert_eq!(written, again.to_string());
        let _ = cfg.validate();
    }
});
