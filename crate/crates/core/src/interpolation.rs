//! The j-absorbing variant `P′`, the interpolated chain `P(s) = (1 − s)P + sP′`,
//! the critical parameter `s*` and the closed-form stationary distribution of `P(s)`.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{check_range, Error, Result};
use crate::markov::{stationary_linear_solve, MarkovChain};

/// Replaces row `j` with a unit self-loop.
pub fn absorbing_variant(chain: &MarkovChain, j: usize) -> Result<MarkovChain> {
    chain.check_index(j)?;
    let mut p = chain.matrix().clone();
    p.row_mut(j).fill(0.0);
    p[(j, j)] = 1.0;
    let out = MarkovChain::new(p)?;
    match chain.labels() {
        Some(l) => out.with_labels(l.to_vec()),
        None => Ok(out),
    }
}

/// Entrywise `(1 − s)P + sP′`.
pub fn interpolate(p: &MarkovChain, p_prime: &MarkovChain, s: f64) -> Result<MarkovChain> {
    check_range("s", s, (0.0..=1.0).contains(&s), "[0, 1]")?;
    if p.n() != p_prime.n() {
        return Err(Error::DimensionMismatch {
            expected: p.n(),
            got: p_prime.n(),
        });
    }
    let m: DMatrix<f64> = p.matrix() * (1.0 - s) + p_prime.matrix() * s;
    MarkovChain::new(m)
}

/// `P(s)` built against the j-absorbing variant of `chain`.
pub fn interpolated_chain(chain: &MarkovChain, j: usize, s: f64) -> Result<MarkovChain> {
    interpolate(chain, &absorbing_variant(chain, j)?, s)
}

/// `s* = 1 − π_j/(1 − π_j)`.
///
/// Inside `(0, 1)` only for `π_j < 1/2`; other `π_j ∈ (0, 1)` are accepted with a warning.
pub fn s_star(pi_j: f64) -> Result<f64> {
    check_range("pi_j", pi_j, pi_j > 0.0 && pi_j < 1.0, "(0, 1)")?;
    if pi_j >= 0.5 {
        log::warn!("pi_j = {pi_j} >= 1/2: s* = {} lies outside (0, 1)", 1.0 - pi_j / (1.0 - pi_j));
    }
    Ok(1.0 - pi_j / (1.0 - pi_j))
}

/// States whose stationary mass is below one half, i.e. those with `s* ∈ (0, 1)`.
pub fn valid_targets(pi: &DVector<f64>) -> Vec<usize> {
    pi.iter()
        .enumerate()
        .filter(|(_, &p)| p > 0.0 && p < 0.5)
        .map(|(j, _)| j)
        .collect()
}

/// Closed-form stationary distribution of `P(s)` toward the j-absorbing variant:
/// `π_j(s) = π_j / Z`, `π_x(s) = π_x (1 − s) / Z` for `x ≠ j`, with `Z = 1 − s(1 − π_j)`.
pub fn interpolated_stationary(chain: &MarkovChain, j: usize, s: f64) -> Result<DVector<f64>> {
    chain.check_index(j)?;
    check_range("s", s, (0.0..1.0).contains(&s), "[0, 1) (P(1) is absorbing)")?;
    chain.require_ergodic()?;
    let pi = stationary_linear_solve(chain.matrix())?;
    Ok(interpolated_stationary_from(&pi, j, s))
}

pub fn interpolated_stationary_from(pi: &DVector<f64>, j: usize, s: f64) -> DVector<f64> {
    let z = 1.0 - s * (1.0 - pi[j]);
    DVector::from_iterator(
        pi.len(),
        pi.iter().enumerate().map(|(x, &p)| {
            if x == j {
                p / z
            } else {
                p * (1.0 - s) / z
            }
        }),
    )
}

/// A point on the interpolation path.
#[derive(Debug, Clone, Serialize)]
pub struct InterpolationSpec {
    pub target_j: usize,
    pub s: f64,
    /// `None` when `π_j ≥ 1/2`, where no `s* ∈ (0, 1)` exists.
    pub s_star: Option<f64>,
}

impl InterpolationSpec {
    pub fn new(chain: &MarkovChain, target_j: usize, s: f64) -> Result<Self> {
        chain.check_index(target_j)?;
        check_range("s", s, (0.0..=1.0).contains(&s), "[0, 1]")?;
        chain.require_ergodic()?;
        let pi = stationary_linear_solve(chain.matrix())?;
        let pj = pi[target_j];
        Ok(InterpolationSpec {
            target_j,
            s,
            s_star: (pj > 0.0 && pj < 0.5).then(|| 1.0 - pj / (1.0 - pj)),
        })
    }
}
