//! Chain JSON: `{"n": <int>, "P": [[...]], "labels": [...]}`.
//!
//! Floats are written with shortest round-trip formatting and parsed exactly, so
//! a write/read cycle reproduces every entry bit for bit.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::MarkovChain;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainFile {
    pub n: usize,
    #[serde(rename = "P")]
    pub p: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl ChainFile {
    pub fn from_chain(chain: &MarkovChain) -> Self {
        ChainFile {
            n: chain.n(),
            p: chain.rows(),
            labels: chain.labels().map(<[String]>::to_vec),
        }
    }

    /// Checks shape and stochasticity; ergodicity is recorded but not required.
    pub fn into_chain(self) -> Result<MarkovChain> {
        if self.p.len() != self.n {
            return Err(Error::Config(format!(
                "field `P` has {} rows but `n` is {}",
                self.p.len(),
                self.n
            )));
        }
        if let Some((i, row)) = self.p.iter().enumerate().find(|(_, r)| r.len() != self.n) {
            return Err(Error::Config(format!(
                "field `P` row {i} has {} entries but `n` is {}",
                row.len(),
                self.n
            )));
        }
        let n = self.n;
        let chain = MarkovChain::new(DMatrix::from_fn(n, n, |i, j| self.p[i][j]))?;
        match self.labels {
            Some(labels) => chain.with_labels(labels).map_err(|_| {
                Error::Config(format!("field `labels` must have exactly {n} entries"))
            }),
            None => Ok(chain),
        }
    }
}

pub fn read_chain_json(text: &str) -> Result<MarkovChain> {
    serde_json::from_str::<ChainFile>(text)?.into_chain()
}

pub fn write_chain_json(chain: &MarkovChain) -> String {
    serde_json::to_string(&ChainFile::from_chain(chain)).expect("chain file serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::markov::{gen_family, Family};
    use proptest::prelude::*;

    #[test]
    fn reads_minimal_file() {
        let c = read_chain_json(r#"{"n": 2, "P": [[0.9, 0.1], [0.2, 0.8]]}"#).unwrap();
        assert_eq!(c.get(1, 0), 0.2);
        assert!(c.labels().is_none());
    }

    #[test]
    fn labels_round_trip() {
        let c = gen_family(Family::Complete, 3, 0)
            .unwrap()
            .with_labels(vec!["a".into(), "b".into(), "c".into()])
            .unwrap();
        let back = read_chain_json(&write_chain_json(&c)).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn malformed_files_name_the_field() {
        let e = read_chain_json(r#"{"n": 2}"#).unwrap_err().to_string();
        assert!(e.contains("`P`"), "{e}");
        let e = read_chain_json(r#"{"n": 3, "P": [[1.0]]}"#).unwrap_err().to_string();
        assert!(e.contains("`P`"), "{e}");
        let e = read_chain_json(r#"{"n": 1, "P": [[1.0]], "labels": ["a", "b"]}"#)
            .unwrap_err()
            .to_string();
        assert!(e.contains("`labels`"), "{e}");
    }

    proptest! {
        #[test]
        fn random_chains_round_trip_bit_exactly(seed in any::<u64>(), n in 2usize..9) {
            let c = gen_family(Family::RandomReversible, n, seed).unwrap();
            let back = read_chain_json(&write_chain_json(&c)).unwrap();
            for (a, b) in c.matrix().iter().zip(back.matrix().iter()) {
                prop_assert_eq!(a.to_bits(), b.to_bits());
            }
        }
    }
}
