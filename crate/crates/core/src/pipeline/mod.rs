//! Survey data to labeled sign vectors: CSV ingestion, binarization,
//! access-point selection, padding and the seeded train/test split.

mod config;
mod db;
mod ingest;
pub mod synth;

pub use config::PipelineConfig;
pub use db::{
    build_db, pad_ap_order, pad_to_power_of_two, DbSplit, FingerprintDb, LabeledSample,
    SampleSet, SplitConfig, TestSet, PAD_PREFIX,
};
pub use ingest::{binarize, ingest, ingest_reader, select_aps, RssRecord, RSS_RANGE_DBM};
