#![no_main]

use libfuzzer_sys::fuzz_target;
use qfloor::pipeline::{binarize, build_db, ingest_reader, select_aps, PipelineConfig, SplitConfig};

fuzz_target!(|data: &[u8]| {
    let cfg = PipelineConfig::default();
    let Ok(records) = ingest_reader(data, &cfg) else {
        return;
    };
    for r in &records {
        assert!(r.rss.values().all(|v| (-110.0..=0.0).contains(v)));
    }
    let Ok(aps) = select_aps(&records, 4) else {
        return;
    };
    for r in &records {
        binarize(r, &aps, None).expect("selected aps binarize");
    }
    let split = SplitConfig { train_fraction: 0.7, seed: 0 };
    let _ = build_db(&records, &aps, split, None);
});
