//! Outcome distributions and total variation distance.

use std::collections::BTreeMap;

use crate::counts::CountsTable;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricsError {
    #[error("cannot normalize an empty counts table")]
    Empty,
    #[error("probability {value} for '{key}' is outside [0, 1]")]
    BadProbability { key: String, value: f64 },
    #[error("probabilities sum to {0}, expected 1")]
    NotNormalized(f64),
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct OutcomeDistribution {
    probs: BTreeMap<String, f64>,
}

impl OutcomeDistribution {
    pub fn new(probs: BTreeMap<String, f64>) -> Result<Self, MetricsError> {
        let mut sum = 0.0;
        for (k, &p) in &probs {
            if !(0.0..=1.0).contains(&p) {
                return Err(MetricsError::BadProbability {
                    key: k.clone(),
                    value: p,
                });
            }
            sum += p;
        }
        if (sum - 1.0).abs() > 1e-9 {
            return Err(MetricsError::NotNormalized(sum));
        }
        Ok(OutcomeDistribution { probs })
    }

    pub fn get(&self, key: &str) -> f64 {
        self.probs.get(key).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.probs.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn support(&self) -> impl Iterator<Item = &str> {
        self.probs
            .iter()
            .filter(|(_, &p)| p > 0.0)
            .map(|(k, _)| k.as_str())
    }
}

pub fn normalize(counts: &CountsTable) -> Result<OutcomeDistribution, MetricsError> {
    if counts.shots() == 0 {
        return Err(MetricsError::Empty);
    }
    let s = counts.shots() as f64;
    Ok(OutcomeDistribution {
        probs: counts
            .iter()
            .map(|(k, n)| (k.to_string(), n as f64 / s))
            .collect(),
    })
}

/// Half the L1 distance over the union of supports.
pub fn tvd(p: &OutcomeDistribution, q: &OutcomeDistribution) -> f64 {
    let mut total = 0.0;
    for (k, pv) in &p.probs {
        total += (pv - q.get(k)).abs();
    }
    for (k, qv) in &q.probs {
        if !p.probs.contains_key(k) {
            total += qv;
        }
    }
    (total / 2.0).clamp(0.0, 1.0)
}

/// Mean and max of per-part distances to one reference.
pub fn tvd_summary(parts: &[OutcomeDistribution], reference: &OutcomeDistribution) -> (f64, f64) {
    if parts.is_empty() {
        return (0.0, 0.0);
    }
    let d: Vec<f64> = parts.iter().map(|p| tvd(p, reference)).collect();
    let mean = d.iter().sum::<f64>() / d.len() as f64;
    let max = d.iter().cloned().fold(0.0, f64::max);
    (mean, max)
}
