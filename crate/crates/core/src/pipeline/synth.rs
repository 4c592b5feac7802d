//! Synthetic multi-building survey generator.
//!
//! Each building has `floors` floors with `aps_per_floor` access points
//! spread along a unit-length corridor. A sample on floor `f` hears an
//! access point on floor `g` of the same building when `|f - g|` is within
//! the hearability radius; each heard/not-heard outcome is then flipped
//! with probability `noise_flip_prob`.

use std::collections::BTreeMap;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ingest::RssRecord;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub buildings: usize,
    pub floors: usize,
    pub aps_per_floor: usize,
    pub hearability_radius: usize,
    pub noise_flip_prob: f64,
    pub samples_per_floor: usize,
    pub locations_per_floor: usize,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            buildings: 4,
            floors: 4,
            aps_per_floor: 8,
            hearability_radius: 1,
            noise_flip_prob: 0.05,
            samples_per_floor: 60,
            locations_per_floor: 10,
            seed: 1,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        if self.buildings == 0
            || self.floors == 0
            || self.aps_per_floor == 0
            || self.samples_per_floor == 0
            || self.locations_per_floor == 0
        {
            return Err(Error::Config("synthetic dataset dimensions must be positive".into()));
        }
        if !(0.0..=0.5).contains(&self.noise_flip_prob) {
            return Err(Error::Config("noise_flip_prob must lie in [0, 0.5]".into()));
        }
        Ok(())
    }

    pub fn total_aps(&self) -> usize {
        self.buildings * self.floors * self.aps_per_floor
    }

    /// Access point names in column order (`WAP001`, `WAP002`, ...).
    pub fn ap_names(&self) -> Vec<String> {
        let width = self.total_aps().to_string().len().max(3);
        (1..=self.total_aps()).map(|i| format!("WAP{i:0width$}")).collect()
    }
}

struct Ap {
    building: usize,
    floor: usize,
    position: f64,
}

pub fn generate(cfg: &SynthConfig) -> Result<Vec<RssRecord>> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let names = cfg.ap_names();
    let mut aps = Vec::with_capacity(names.len());
    for building in 0..cfg.buildings {
        for floor in 0..cfg.floors {
            for _ in 0..cfg.aps_per_floor {
                aps.push(Ap {
                    building,
                    floor,
                    position: rng.random::<f64>(),
                });
            }
        }
    }

    let mut records = Vec::new();
    for building in 0..cfg.buildings {
        for floor in 0..cfg.floors {
            for s in 0..cfg.samples_per_floor {
                let location = s % cfg.locations_per_floor;
                let position =
                    (location as f64 + rng.random::<f64>()) / cfg.locations_per_floor as f64;
                let mut rss = BTreeMap::new();
                for (ap, name) in aps.iter().zip(&names) {
                    let gap = ap.floor.abs_diff(floor);
                    let audible = ap.building == building && gap <= cfg.hearability_radius;
                    let heard = audible ^ rng.random_bool(cfg.noise_flip_prob);
                    if heard {
                        let value = if audible {
                            -40.0
                                - 12.0 * gap as f64
                                - 30.0 * (ap.position - position).abs()
                                - 8.0 * rng.random::<f64>()
                        } else {
                            -100.0 + 10.0 * rng.random::<f64>()
                        };
                        rss.insert(name.clone(), value.round().clamp(-110.0, 0.0));
                    }
                }
                records.push(RssRecord {
                    building_id: building.to_string(),
                    floor: floor as i32,
                    location_id: format!("{}", 100 * (floor + 1) + location),
                    rss,
                });
            }
        }
    }
    Ok(records)
}

/// Writes records as a survey CSV: one column per access point in
/// `ap_names` (undetected readings as `sentinel`), then FLOOR, BUILDINGID
/// and SPACEID.
pub fn write_csv<W: Write>(
    records: &[RssRecord],
    ap_names: &[String],
    sentinel: f64,
    out: W,
) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Format(e.to_string());
    let mut header: Vec<&str> = ap_names.iter().map(String::as_str).collect();
    header.extend(["FLOOR", "BUILDINGID", "SPACEID"]);
    wtr.write_record(&header).map_err(io)?;
    for r in records {
        let mut row: Vec<String> = ap_names
            .iter()
            .map(|ap| r.rss.get(ap).copied().unwrap_or(sentinel).to_string())
            .collect();
        row.push(r.floor.to_string());
        row.push(r.building_id.clone());
        row.push(r.location_id.clone());
        wtr.write_record(&row).map_err(io)?;
    }
    wtr.flush().map_err(|e| Error::Format(e.to_string()))?;
    Ok(())
}
