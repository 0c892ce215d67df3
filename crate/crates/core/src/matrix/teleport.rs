use std::io::Write;

use log::warn;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TeleportKind {
    Uniform,
    Pageview,
}

/// Preferential vector of the Google matrix. The uniform kind stores nothing.
#[derive(Debug, Clone, PartialEq)]
pub enum TeleportVector {
    Uniform { n: usize },
    Pageview { values: Vec<f64> },
}

impl TeleportVector {
    pub fn uniform(n: usize) -> Self {
        TeleportVector::Uniform { n }
    }

    pub fn kind(&self) -> TeleportKind {
        match self {
            TeleportVector::Uniform { .. } => TeleportKind::Uniform,
            TeleportVector::Pageview { .. } => TeleportKind::Pageview,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            TeleportVector::Uniform { n } => *n,
            TeleportVector::Pageview { values } => values.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> f64 {
        match self {
            TeleportVector::Uniform { n } => 1.0 / *n as f64,
            TeleportVector::Pageview { values } => values[i],
        }
    }

    pub fn to_vec(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.get(i)).collect()
    }

    /// `# id<TAB>value` header followed by one line per node.
    pub fn write_tsv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "# id\tvalue")?;
        for i in 0..self.len() {
            writeln!(w, "{i}\t{}", self.get(i))?;
        }
        Ok(())
    }
}

/// Normalized pageview teleport `v_j / sum(v)`. With `epsilon > 0` the result
/// is mixed with the uniform vector: `epsilon / N + (1 - epsilon) v_j`.
/// All-zero views fall back to the uniform vector with a warning; the second
/// return value reports that fallback.
pub fn teleport_from_pageviews(views: &[u64], epsilon: f64) -> Result<(TeleportVector, bool)> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::InvalidEpsilon(epsilon));
    }
    let n = views.len();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let total: u64 = views.iter().sum();
    if total == 0 {
        warn!("all pageviews are zero; using the uniform teleport vector");
        return Ok((TeleportVector::uniform(n), true));
    }
    if epsilon == 1.0 {
        return Ok((TeleportVector::uniform(n), false));
    }
    let total = total as f64;
    let uniform = 1.0 / n as f64;
    let values = views
        .iter()
        .map(|&v| {
            let p = v as f64 / total;
            if epsilon > 0.0 {
                epsilon * uniform + (1.0 - epsilon) * p
            } else {
                p
            }
        })
        .collect();
    Ok((TeleportVector::Pageview { values }, false))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization() {
        let (t, fallback) = teleport_from_pageviews(&[3, 1, 0, 0], 0.0).unwrap();
        assert!(!fallback);
        assert_eq!(t.to_vec(), vec![0.75, 0.25, 0.0, 0.0]);
    }

    #[test]
    fn all_zero_falls_back() {
        let (t, fallback) = teleport_from_pageviews(&[0, 0, 0, 0], 0.0).unwrap();
        assert!(fallback);
        assert_eq!(t.to_vec(), vec![0.25; 4]);
    }

    #[test]
    fn single_node() {
        assert_eq!(
            teleport_from_pageviews(&[17], 0.0).unwrap().0.to_vec(),
            vec![1.0]
        );
    }

    #[test]
    fn epsilon_mixing() {
        let (t, _) = teleport_from_pageviews(&[1, 0], 0.5).unwrap();
        assert_eq!(t.to_vec(), vec![0.75, 0.25]);
        assert!(teleport_from_pageviews(&[1], 1.5).is_err());
    }

    proptest::proptest! {
        #[test]
        fn sums_to_one(views in proptest::collection::vec(0u64..1_000_000, 1..300), eps in 0.0f64..1.0) {
            let (t, _) = teleport_from_pageviews(&views, eps).unwrap();
            let v = t.to_vec();
            proptest::prop_assert!(v.iter().all(|&x| x >= 0.0));
            proptest::prop_assert!((v.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}
