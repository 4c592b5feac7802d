//! CSV survey ingestion and heard/not-heard binarization.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::PipelineConfig;
use crate::error::{Error, Result};
use crate::sign::SignVector;

/// Weakest and strongest RSS accepted for a detected access point.
pub const RSS_RANGE_DBM: (f64, f64) = (-110.0, 0.0);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RssRecord {
    pub building_id: String,
    pub floor: i32,
    pub location_id: String,
    /// Detected access points only.
    pub rss: BTreeMap<String, f64>,
}

pub fn ingest(path: impl AsRef<Path>, cfg: &PipelineConfig) -> Result<Vec<RssRecord>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    ingest_reader(file, cfg)
}

struct Layout {
    aps: Vec<(usize, String)>,
    floor: usize,
    building: usize,
    location: usize,
}

fn layout(headers: &csv::StringRecord, cfg: &PipelineConfig) -> Result<Layout> {
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Error::Layout(format!("missing `{name}` column")))
    };
    let floor = find(&cfg.floor_column)?;
    let building = find(&cfg.building_column)?;
    let location = find(&cfg.location_column)?;

    let mut seen = BTreeSet::new();
    let mut aps = Vec::new();
    for (i, h) in headers.iter().enumerate() {
        let h = h.trim();
        if cfg.ap_prefixes.iter().any(|p| h.starts_with(p.as_str())) {
            if !seen.insert(h) {
                return Err(Error::Layout(format!("duplicate access point column `{h}`")));
            }
            aps.push((i, h.to_string()));
        }
    }
    if aps.is_empty() {
        return Err(Error::Layout(format!(
            "no access point columns (prefixes {:?})",
            cfg.ap_prefixes
        )));
    }
    Ok(Layout {
        aps,
        floor,
        building,
        location,
    })
}

/// Parses a survey CSV. The header names the access-point columns (by
/// prefix) plus floor, building and location columns; any other column is
/// ignored. Readings equal to the configured sentinel mean "not detected".
pub fn ingest_reader<R: Read>(reader: R, cfg: &PipelineConfig) -> Result<Vec<RssRecord>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(reader);
    let headers = rdr.headers().map_err(csv_error)?.clone();
    if headers.is_empty() {
        return Err(Error::EmptyInput);
    }
    let layout = layout(&headers, cfg)?;

    let mut records = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(csv_error)?;
        let line = row.position().map_or(0, |p| p.line());
        let malformed = |reason: String| Error::MalformedRow { line, reason };
        let field = |i: usize| row.get(i).unwrap_or("").trim();

        let floor_text = field(layout.floor);
        let floor: i32 = floor_text
            .parse()
            .map_err(|_| malformed(format!("floor `{floor_text}` is not an integer")))?;
        if floor < cfg.min_floor || cfg.max_floor.is_some_and(|m| floor > m) {
            return Err(malformed(format!(
                "floor {floor} outside declared range {}..={}",
                cfg.min_floor,
                cfg.max_floor.map_or("".into(), |m| m.to_string())
            )));
        }
        let building_id = field(layout.building).to_string();
        let location_id = field(layout.location).to_string();
        if building_id.is_empty() || location_id.is_empty() {
            return Err(malformed("empty building or location id".into()));
        }

        let mut rss = BTreeMap::new();
        for (col, name) in &layout.aps {
            let text = field(*col);
            let value: f64 = text
                .parse()
                .map_err(|_| malformed(format!("{name}: `{text}` is not a number")))?;
            if value == cfg.sentinel_value {
                continue;
            }
            if !(RSS_RANGE_DBM.0..=RSS_RANGE_DBM.1).contains(&value) {
                return Err(malformed(format!(
                    "{name}: {value} dBm outside [{}, {}]",
                    RSS_RANGE_DBM.0, RSS_RANGE_DBM.1
                )));
            }
            rss.insert(name.clone(), value);
        }
        records.push(RssRecord {
            building_id,
            floor,
            location_id,
            rss,
        });
    }
    if records.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(records)
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io("<csv input>", io),
        other => Error::MalformedRow {
            line,
            reason: format!("{other:?}"),
        },
    }
}

/// Entry `i` is +1 iff `ap_order[i]` was detected (at or above `threshold`
/// when one is given). Errors only on an empty `ap_order`.
pub fn binarize(
    record: &RssRecord,
    ap_order: &[String],
    threshold: Option<f64>,
) -> Result<SignVector> {
    SignVector::from_heard(ap_order.iter().map(|ap| {
        record
            .rss
            .get(ap)
            .is_some_and(|&v| threshold.is_none_or(|t| v >= t))
    }))
}

/// The `n_target` most frequently detected access points, ties broken by
/// identifier.
pub fn select_aps(records: &[RssRecord], n_target: usize) -> Result<Vec<String>> {
    if n_target < 2 || !n_target.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n_target));
    }
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for r in records {
        for ap in r.rss.keys() {
            *counts.entry(ap.as_str()).or_default() += 1;
        }
    }
    if counts.len() < n_target {
        return Err(Error::InsufficientAps {
            wanted: n_target,
            available: counts.len(),
        });
    }
    let mut ranked: Vec<(&str, usize)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    Ok(ranked
        .into_iter()
        .take(n_target)
        .map(|(ap, _)| ap.to_string())
        .collect())
}
