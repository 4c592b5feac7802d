//! Fingerprint database, train/test split and the `.fp` text format.
//!
//! ```text
//! N 4 M 2
//! WAP001 WAP002 WAP003 ~pad0
//! 0 0 101 +++-
//! 0 1 205 ++--
//! ```

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ingest::{binarize, RssRecord};
use crate::error::{Error, Result};
use crate::sign::SignVector;

/// Prefix of the virtual never-heard sources added by padding.
pub const PAD_PREFIX: &str = "~pad";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledSample {
    pub building_id: String,
    pub floor: i32,
    pub location_id: String,
    pub vector: SignVector,
    /// Number of survey records collapsed into this sample.
    #[serde(default = "one")]
    pub count: usize,
}

fn one() -> usize {
    1
}

/// An ordered set of access points and vectors labeled with their floor.
/// Used both for the offline fingerprint database and for the online test
/// set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleSet {
    pub ap_order: Vec<String>,
    pub samples: Vec<LabeledSample>,
}

pub type FingerprintDb = SampleSet;
pub type TestSet = SampleSet;

impl SampleSet {
    /// Vector length.
    pub fn n(&self) -> usize {
        self.ap_order.len()
    }

    /// Number of samples.
    pub fn m(&self) -> usize {
        self.samples.len()
    }

    pub fn floors(&self) -> BTreeSet<i32> {
        self.samples.iter().map(|s| s.floor).collect()
    }

    pub fn floor_histogram(&self) -> BTreeMap<i32, usize> {
        let mut hist = BTreeMap::new();
        for s in &self.samples {
            *hist.entry(s.floor).or_default() += 1;
        }
        hist
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        text.parse()
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let text = self.to_text()?;
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    /// Serializes to the `.fp` format. Identifiers must be non-empty and
    /// free of whitespace.
    pub fn to_text(&self) -> Result<String> {
        let check = |what: &str, id: &str| {
            if id.is_empty() || id.chars().any(char::is_whitespace) {
                Err(Error::Format(format!("{what} `{id}` is empty or contains whitespace")))
            } else {
                Ok(())
            }
        };
        for ap in &self.ap_order {
            check("access point", ap)?;
        }
        for s in &self.samples {
            check("building", &s.building_id)?;
            check("location", &s.location_id)?;
            if s.vector.len() != self.n() {
                return Err(Error::LengthMismatch {
                    left: self.n(),
                    right: s.vector.len(),
                });
            }
        }
        Ok(self.to_string())
    }

    /// Checks that `other` uses the same access points in the same order.
    pub fn check_compatible(&self, other: &SampleSet) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::LengthMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        if self.ap_order != other.ap_order {
            return Err(Error::Layout("access point order differs".into()));
        }
        Ok(())
    }
}

impl fmt::Display for SampleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "N {} M {}", self.n(), self.m())?;
        writeln!(f, "{}", self.ap_order.join(" "))?;
        for s in &self.samples {
            writeln!(
                f,
                "{} {} {} {}",
                s.building_id,
                s.floor,
                s.location_id,
                s.vector.to_bitstring()
            )?;
        }
        Ok(())
    }
}

impl FromStr for SampleSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let parse_err = |line: usize, reason: String| Error::Parse { line, reason };

        let (line, header) = lines.next().ok_or(Error::EmptyInput)?;
        let (n, m) = match header.split_whitespace().collect::<Vec<_>>()[..] {
            ["N", n, "M", m] => (
                n.parse::<usize>()
                    .map_err(|e| parse_err(line, format!("bad N `{n}`: {e}")))?,
                m.parse::<usize>()
                    .map_err(|e| parse_err(line, format!("bad M `{m}`: {e}")))?,
            ),
            _ => return Err(parse_err(line, "expected header `N <n> M <m>`".into())),
        };
        if n < 2 || !n.is_power_of_two() {
            return Err(parse_err(line, format!("N = {n} is not a power of two >= 2")));
        }

        let (line, aps) = lines
            .next()
            .ok_or_else(|| parse_err(line + 1, "missing access point line".into()))?;
        let ap_order: Vec<String> = aps.split_whitespace().map(str::to_string).collect();
        if ap_order.len() != n {
            return Err(parse_err(
                line,
                format!("expected {n} access points, found {}", ap_order.len()),
            ));
        }
        if ap_order.iter().collect::<BTreeSet<_>>().len() != n {
            return Err(parse_err(line, "duplicate access point".into()));
        }

        let mut samples = Vec::new();
        for (line, text) in lines {
            let (building, floor, location, bits) =
                match text.split_whitespace().collect::<Vec<_>>()[..] {
                    [b, f, l, v] => (b, f, l, v),
                    _ => {
                        return Err(parse_err(
                            line,
                            "expected `<building> <floor> <location> <bits>`".into(),
                        ))
                    }
                };
            let floor: i32 = floor
                .parse()
                .map_err(|e| parse_err(line, format!("bad floor `{floor}`: {e}")))?;
            let vector = SignVector::from_bitstring(bits).map_err(|e| parse_err(line, e.to_string()))?;
            if vector.len() != n {
                return Err(parse_err(
                    line,
                    format!("vector has {} entries, expected {n}", vector.len()),
                ));
            }
            samples.push(LabeledSample {
                building_id: building.to_string(),
                floor,
                location_id: location.to_string(),
                vector,
                count: 1,
            });
        }
        if samples.len() != m {
            return Err(parse_err(
                0,
                format!("header declares {m} samples, found {}", samples.len()),
            ));
        }
        Ok(Self { ap_order, samples })
    }
}

/// Pads an access-point order with virtual never-heard sources up to the
/// next power of two (at least 2).
pub fn pad_ap_order(ap_order: &[String]) -> Vec<String> {
    let target = ap_order.len().next_power_of_two().max(2);
    let mut padded = ap_order.to_vec();
    padded.extend((0..target - ap_order.len()).map(|k| format!("{PAD_PREFIX}{k}")));
    padded
}

/// Pads a sign vector with -1 entries; see [`SignVector::padded`].
pub fn pad_to_power_of_two(v: &SignVector) -> SignVector {
    v.padded()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitConfig {
    pub train_fraction: f64,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct DbSplit {
    pub db: FingerprintDb,
    pub test: TestSet,
    pub warnings: Vec<String>,
}

/// Binarizes `records` over `ap_order` (padded to a power of two) and
/// splits them into a fingerprint database and a test set.
///
/// The split is seeded and stratified by (building, floor). A stratum with
/// fewer than two records goes entirely to training, with a warning.
/// Training vectors that repeat within a stratum are collapsed into one
/// fingerprint whose `count` records the multiplicity.
pub fn build_db(
    records: &[RssRecord],
    ap_order: &[String],
    split: SplitConfig,
    threshold: Option<f64>,
) -> Result<DbSplit> {
    if !(split.train_fraction > 0.0 && split.train_fraction < 1.0) {
        return Err(Error::InvalidSplit(split.train_fraction));
    }
    if records.is_empty() {
        return Err(Error::EmptyInput);
    }
    let ap_order = pad_ap_order(ap_order);

    let mut strata: BTreeMap<(&str, i32), Vec<usize>> = BTreeMap::new();
    for (i, r) in records.iter().enumerate() {
        strata.entry((r.building_id.as_str(), r.floor)).or_default().push(i);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(split.seed);
    let mut in_train = vec![false; records.len()];
    let mut warnings = Vec::new();
    for ((building, floor), mut idx) in strata {
        if idx.len() < 2 {
            warnings.push(format!(
                "building {building} floor {floor} has {} record(s); kept entirely for training",
                idx.len()
            ));
            idx.iter().for_each(|&i| in_train[i] = true);
            continue;
        }
        idx.shuffle(&mut rng);
        let n_train = ((idx.len() as f64 * split.train_fraction).round() as usize)
            .clamp(1, idx.len() - 1);
        idx[..n_train].iter().for_each(|&i| in_train[i] = true);
    }

    let mut db_samples: Vec<LabeledSample> = Vec::new();
    let mut seen: HashMap<(&str, i32, SignVector), usize> = HashMap::new();
    let mut test_samples = Vec::new();
    for (i, r) in records.iter().enumerate() {
        let vector = binarize(r, &ap_order, threshold)?;
        if in_train[i] {
            match seen.entry((r.building_id.as_str(), r.floor, vector.clone())) {
                std::collections::hash_map::Entry::Occupied(e) => db_samples[*e.get()].count += 1,
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(db_samples.len());
                    db_samples.push(LabeledSample {
                        building_id: r.building_id.clone(),
                        floor: r.floor,
                        location_id: r.location_id.clone(),
                        vector,
                        count: 1,
                    });
                }
            }
        } else {
            test_samples.push(LabeledSample {
                building_id: r.building_id.clone(),
                floor: r.floor,
                location_id: r.location_id.clone(),
                vector,
                count: 1,
            });
        }
    }

    Ok(DbSplit {
        db: SampleSet {
            ap_order: ap_order.clone(),
            samples: db_samples,
        },
        test: SampleSet {
            ap_order,
            samples: test_samples,
        },
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(floor: i32, loc: usize, aps: &[&str]) -> RssRecord {
        RssRecord {
            building_id: "0".into(),
            floor,
            location_id: loc.to_string(),
            rss: aps.iter().map(|a| (a.to_string(), -60.0)).collect(),
        }
    }

    fn order(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn varied(n: usize) -> Vec<RssRecord> {
        let aps = ["A", "B", "C", "D", "E", "F", "G"];
        (0..n)
            .map(|i| {
                let heard: Vec<&str> = aps
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| (i >> k) & 1 == 1)
                    .map(|(_, a)| *a)
                    .collect();
                rec(0, i, &heard)
            })
            .collect()
    }

    #[test]
    fn seventy_thirty_and_deterministic() {
        let recs = varied(100);
        let split = SplitConfig {
            train_fraction: 0.7,
            seed: 7,
        };
        let ap = order(&["A", "B", "C", "D", "E", "F", "G"]);
        let a = build_db(&recs, &ap, split, None).unwrap();
        assert_eq!(a.db.m(), 70);
        assert_eq!(a.test.m(), 30);
        assert_eq!(a.db.n(), 8);
        let b = build_db(&recs, &ap, split, None).unwrap();
        assert_eq!(a.db, b.db);
        assert_eq!(a.test, b.test);
        let c = build_db(&recs, &ap, SplitConfig { seed: 8, ..split }, None).unwrap();
        assert_ne!(a.test, c.test);
    }

    #[test]
    fn identical_records_collapse() {
        let mut recs: Vec<RssRecord> = (0..10).map(|i| rec(0, i, &["A"])).collect();
        recs.extend((0..10).map(|i| rec(1, i, &["A"])));
        let split = SplitConfig {
            train_fraction: 0.5,
            seed: 1,
        };
        let out = build_db(&recs, &order(&["A", "B"]), split, None).unwrap();
        assert_eq!(out.db.m(), 2);
        assert_eq!(out.db.floors(), BTreeSet::from([0, 1]));
        assert!(out.db.samples.iter().all(|s| s.count == 5));
        assert_eq!(out.test.m(), 10);
    }

    #[test]
    fn tiny_stratum_goes_to_training() {
        let mut recs = varied(10);
        recs.push(rec(3, 99, &["A"]));
        let split = SplitConfig {
            train_fraction: 0.7,
            seed: 1,
        };
        let out = build_db(&recs, &order(&["A", "B"]), split, None).unwrap();
        assert_eq!(out.warnings.len(), 1);
        assert!(out.db.samples.iter().any(|s| s.floor == 3));
        assert!(out.test.samples.iter().all(|s| s.floor != 3));
    }

    #[test]
    fn split_fraction_precondition() {
        let recs = varied(4);
        for f in [0.0, 1.0, -0.5, f64::NAN] {
            let split = SplitConfig {
                train_fraction: f,
                seed: 0,
            };
            assert!(matches!(
                build_db(&recs, &order(&["A"]), split, None),
                Err(Error::InvalidSplit(_))
            ));
        }
    }

    #[test]
    fn padding_names() {
        assert_eq!(pad_ap_order(&order(&["a", "b", "c"])), order(&["a", "b", "c", "~pad0"]));
        assert_eq!(pad_ap_order(&order(&["a", "b"])), order(&["a", "b"]));
        let v: SignVector = "1,1,1".parse().unwrap();
        assert_eq!(pad_to_power_of_two(&v).entries(), &[1, 1, 1, -1]);
    }

    #[test]
    fn text_format() {
        let set = SampleSet {
            ap_order: order(&["WAP001", "WAP002", "WAP003", "~pad0"]),
            samples: vec![
                LabeledSample {
                    building_id: "0".into(),
                    floor: 0,
                    location_id: "101".into(),
                    vector: "1,1,1,-1".parse().unwrap(),
                    count: 1,
                },
                LabeledSample {
                    building_id: "0".into(),
                    floor: 1,
                    location_id: "205".into(),
                    vector: "1,1,-1,-1".parse().unwrap(),
                    count: 1,
                },
            ],
        };
        let text = set.to_text().unwrap();
        assert_eq!(
            text,
            "N 4 M 2\nWAP001 WAP002 WAP003 ~pad0\n0 0 101 +++-\n0 1 205 ++--\n"
        );
        assert_eq!(text.parse::<SampleSet>().unwrap(), set);
    }

    #[test]
    fn text_format_errors() {
        let bad = [
            "",
            "N 3 M 0\na b c\n",
            "N 2 M 1\na\n",
            "N 2 M 1\na a\n0 0 1 ++\n",
            "N 2 M 1\na b\n0 0 1 +++\n",
            "N 2 M 1\na b\n0 x 1 ++\n",
            "N 2 M 1\na b\n0 0 1 +0\n",
            "N 2 M 2\na b\n0 0 1 ++\n",
            "N 2 M 1\na b\n0 0 ++\n",
            "M 2 N 1\n",
        ];
        for text in bad {
            assert!(text.parse::<SampleSet>().is_err(), "{text:?}");
        }
        let set = SampleSet {
            ap_order: order(&["a b", "c"]),
            samples: vec![],
        };
        assert!(matches!(set.to_text(), Err(Error::Format(_))));
    }
}
