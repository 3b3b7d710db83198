//! Deterministic chain generators for test ensembles.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::MarkovChain;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    /// `[[1-p, p], [q, 1-q]]`; `n` must be 2.
    TwoState { p: f64, q: f64 },
    /// Lazy walk on a ring: stay with 1/2, step either way with 1/4.
    CycleLazy,
    /// Every entry `1/n`.
    Complete,
    /// Tridiagonal walk: up with `up`, down with `down`, remainder on the self-loop.
    BirthDeath { up: f64, down: f64 },
    /// Positive symmetric weights in (0, 1], rows normalized.
    RandomReversible,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::TwoState { .. } => "two-state",
            Family::CycleLazy => "cycle-lazy",
            Family::Complete => "complete",
            Family::BirthDeath { .. } => "birth-death",
            Family::RandomReversible => "random-reversible",
        }
    }
}

/// Builds a member of `family` on `n` states. Only `RandomReversible` consumes the seed.
pub fn gen_family(family: Family, n: usize, seed: u64) -> Result<MarkovChain> {
    if n < 2 {
        return Err(Error::BadParams(format!("n = {n}, need at least 2 states")));
    }
    let p = match family {
        Family::TwoState { p, q } => {
            if n != 2 {
                return Err(Error::BadParams(format!("two-state family needs n = 2, got {n}")));
            }
            if !(p > 0.0 && p <= 1.0 && q > 0.0 && q <= 1.0) || (p == 1.0 && q == 1.0) {
                return Err(Error::BadParams(format!(
                    "two-state needs p, q in (0, 1], not both 1; got p = {p}, q = {q}"
                )));
            }
            DMatrix::from_row_slice(2, 2, &[1.0 - p, p, q, 1.0 - q])
        }
        Family::CycleLazy => {
            let mut m = DMatrix::zeros(n, n);
            for i in 0..n {
                m[(i, i)] += 0.5;
                m[(i, (i + 1) % n)] += 0.25;
                m[(i, (i + n - 1) % n)] += 0.25;
            }
            m
        }
        Family::Complete => DMatrix::from_element(n, n, 1.0 / n as f64),
        Family::BirthDeath { up, down } => {
            if !(up > 0.0 && down > 0.0 && up + down <= 1.0) {
                return Err(Error::BadParams(format!(
                    "birth-death needs up, down > 0 and up + down <= 1; got {up}, {down}"
                )));
            }
            let mut m = DMatrix::zeros(n, n);
            for i in 0..n {
                if i + 1 < n {
                    m[(i, i + 1)] = up;
                }
                if i > 0 {
                    m[(i, i - 1)] = down;
                }
                let off: f64 = m.row(i).sum();
                m[(i, i)] = 1.0 - off;
            }
            m
        }
        Family::RandomReversible => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut w = DMatrix::zeros(n, n);
            for i in 0..n {
                for j in i..n {
                    let x = 1.0 - rng.random::<f64>();
                    w[(i, j)] = x;
                    w[(j, i)] = x;
                }
            }
            for i in 0..n {
                let s: f64 = w.row(i).sum();
                w.row_mut(i).unscale_mut(s);
            }
            w
        }
    };
    let chain = MarkovChain::new(p)?;
    if !chain.is_ergodic() {
        return Err(Error::BadParams(format!(
            "{} on {n} states is not ergodic",
            family.name()
        )));
    }
    Ok(chain)
}
