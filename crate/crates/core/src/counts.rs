//! Aggregated shot outcomes and the counts file format.
//!
//! A bitstring is the concatenation of every classical register in
//! declaration order, each register written from bit 0 to its last bit.
//! `c[0]` is therefore the leftmost character of register `c`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CountsError {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("bitstring '{0}' contains characters other than 0 and 1")]
    BadBitstring(String),
    #[error("bitstring '{found}' has width {}, expected {expected}", found.len())]
    WidthMismatch { found: String, expected: usize },
    #[error("header says {header} shots but counts sum to {sum}")]
    ShotMismatch { header: u64, sum: u64 },
}

/// Outcome bitstring to occurrence count. Counts always sum to `shots`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CountsTable {
    counts: BTreeMap<String, u64>,
    shots: u64,
}

impl CountsTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_map(counts: BTreeMap<String, u64>) -> Result<Self, CountsError> {
        let mut width = None;
        for key in counts.keys() {
            if !key.bytes().all(|b| b == b'0' || b == b'1') {
                return Err(CountsError::BadBitstring(key.clone()));
            }
            match width {
                None => width = Some(key.len()),
                Some(w) if w != key.len() => {
                    return Err(CountsError::WidthMismatch {
                        found: key.clone(),
                        expected: w,
                    })
                }
                Some(_) => {}
            }
        }
        let mut counts = counts;
        counts.retain(|_, n| *n > 0);
        let shots = counts.values().sum();
        Ok(CountsTable { counts, shots })
    }

    pub fn record(&mut self, bitstring: &str) {
        self.add(bitstring, 1);
    }

    pub fn add(&mut self, bitstring: &str, n: u64) {
        if n == 0 {
            return;
        }
        *self.counts.entry(bitstring.to_string()).or_insert(0) += n;
        self.shots += n;
    }

    pub fn merge(&mut self, other: &CountsTable) {
        for (k, n) in &other.counts {
            self.add(k, *n);
        }
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn get(&self, bitstring: &str) -> u64 {
        self.counts.get(bitstring).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.counts.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Common width of the stored bitstrings, `None` when empty.
    pub fn bit_width(&self) -> Option<usize> {
        self.counts.keys().next().map(|k| k.len())
    }

    pub fn frequency(&self, bitstring: &str) -> f64 {
        if self.shots == 0 {
            0.0
        } else {
            self.get(bitstring) as f64 / self.shots as f64
        }
    }

    /// `# shots=S seed=SEED rng=NAME` then `BITSTRING<TAB>COUNT` lines in
    /// lexicographic order.
    pub fn to_text(&self, seed: u64, rng: &str) -> String {
        let mut out = format!("# shots={} seed={} rng={}\n", self.shots, seed, rng);
        for (k, n) in &self.counts {
            writeln!(out, "{k}\t{n}").unwrap();
        }
        out
    }

    /// Parses [`CountsTable::to_text`] output. Metadata (seed, rng) is
    /// returned alongside when present.
    pub fn parse_text(text: &str) -> Result<(CountsTable, CountsMeta), CountsError> {
        let mut meta = CountsMeta::default();
        let mut counts = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() {
                continue;
            }
            let err = |message: &str| CountsError::Format {
                line: i + 1,
                message: message.to_string(),
            };
            if let Some(header) = line.strip_prefix('#') {
                for field in header.split_whitespace() {
                    let Some((k, v)) = field.split_once('=') else {
                        continue;
                    };
                    match k {
                        "shots" => meta.shots = Some(v.parse().map_err(|_| err("bad shots"))?),
                        "seed" => meta.seed = Some(v.parse().map_err(|_| err("bad seed"))?),
                        "rng" => meta.rng = Some(v.to_string()),
                        _ => {}
                    }
                }
                continue;
            }
            let (bits, n) = line
                .split_once('\t')
                .ok_or_else(|| err("expected BITSTRING<TAB>COUNT"))?;
            let n: u64 = n.trim().parse().map_err(|_| err("bad count"))?;
            if counts.insert(bits.to_string(), n).is_some() {
                return Err(err("duplicate bitstring"));
            }
        }
        let table = CountsTable::from_map(counts)?;
        if let Some(h) = meta.shots {
            if h != table.shots {
                return Err(CountsError::ShotMismatch {
                    header: h,
                    sum: table.shots,
                });
            }
        }
        Ok((table, meta))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CountsMeta {
    pub shots: Option<u64>,
    pub seed: Option<u64>,
    pub rng: Option<String>,
}
