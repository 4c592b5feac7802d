#![no_main]

use libfuzzer_sys::fuzz_target;
use qfloor::pipeline::SampleSet;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(set) = text.parse::<SampleSet>() {
        let written = set.to_text().expect("parsed set must serialize");
        let again: SampleSet = written.parse().expect("serialized set must parse");
        assert_eq!(set, again);
    }
});
