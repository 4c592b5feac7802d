use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Heard/not-heard pattern over N signal sources: entry `i` is +1 when
/// source `i` is heard and -1 otherwise.
///
/// Any non-zero length is accepted so that raw vectors can be built before
/// padding; circuit synthesis additionally requires a power-of-two length.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct SignVector(Vec<i8>);

impl SignVector {
    pub fn new(entries: Vec<i8>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidSignVector("vector is empty".into()));
        }
        if let Some((i, v)) = entries.iter().enumerate().find(|(_, v)| v.abs() != 1) {
            return Err(Error::InvalidSignVector(format!(
                "entry {i} is {v}, expected +1 or -1"
            )));
        }
        Ok(Self(entries))
    }

    pub fn from_heard<I: IntoIterator<Item = bool>>(heard: I) -> Result<Self> {
        Self::new(heard.into_iter().map(|h| if h { 1 } else { -1 }).collect())
    }

    pub fn all_ones(len: usize) -> Result<Self> {
        Self::new(vec![1; len])
    }

    pub fn entries(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_canonical(&self) -> bool {
        self.0[0] == 1
    }

    /// log2 of the length; errors unless the length is a power of two >= 2.
    pub fn num_qubits(&self) -> Result<usize> {
        let n = self.len();
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(n));
        }
        Ok(n.trailing_zeros() as usize)
    }

    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|v| -v).collect())
    }

    /// Entrywise product.
    pub fn product(&self, other: &Self) -> Result<Self> {
        self.check_len(other)?;
        Ok(Self(self.0.iter().zip(&other.0).map(|(a, b)| a * b).collect()))
    }

    /// Unnormalized dot product, an even integer in [-N, N] when N is even.
    pub fn dot(&self, other: &Self) -> Result<i64> {
        self.check_len(other)?;
        Ok(self
            .0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| i64::from(a * b))
            .sum())
    }

    /// Amplitudes of the encoded state, entry / sqrt(N).
    pub fn amplitudes(&self) -> Vec<f64> {
        let scale = 1.0 / (self.len() as f64).sqrt();
        self.0.iter().map(|&v| f64::from(v) * scale).collect()
    }

    /// `+`/`-` string, one character per entry.
    pub fn to_bitstring(&self) -> String {
        self.0.iter().map(|&v| if v > 0 { '+' } else { '-' }).collect()
    }

    pub fn from_bitstring(s: &str) -> Result<Self> {
        let entries = s
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                other => Err(Error::InvalidSignVector(format!(
                    "unexpected character `{other}` in bitstring"
                ))),
            })
            .collect::<Result<Vec<i8>>>()?;
        Self::new(entries)
    }

    /// Appends never-heard (-1) entries up to the next power of two (at
    /// least 2).
    pub fn padded(&self) -> Self {
        let target = self.len().next_power_of_two().max(2);
        let mut entries = self.0.clone();
        entries.resize(target, -1);
        Self(entries)
    }

    fn check_len(&self, other: &Self) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(())
    }
}

impl TryFrom<Vec<i8>> for SignVector {
    type Error = Error;

    fn try_from(v: Vec<i8>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<SignVector> for Vec<i8> {
    fn from(v: SignVector) -> Self {
        v.0
    }
}

/// Comma-separated literal, e.g. `1,1,-1,1`.
impl FromStr for SignVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let entries = s
            .split(',')
            .map(|tok| match tok.trim() {
                "1" | "+1" => Ok(1),
                "-1" => Ok(-1),
                other => Err(Error::InvalidSignVector(format!(
                    "`{other}` is not +1 or -1"
                ))),
            })
            .collect::<Result<Vec<i8>>>()?;
        Self::new(entries)
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// Returns the vector with a +1 first entry together with the global sign
/// that was stripped (+1 or -1).
pub fn canonicalize(v: &SignVector) -> (SignVector, i8) {
    if v.is_canonical() {
        (v.clone(), 1)
    } else {
        (v.negated(), -1)
    }
}
