//! Irreducibility and aperiodicity on the positive-entry transition graph.
//!
//! Both checks are exact integer procedures: strong connectivity via forward and
//! backward BFS from state 0, and the period as the gcd of `level(u) + 1 - level(v)`
//! over all edges `u -> v` of the BFS tree levels.

use std::collections::VecDeque;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::ErgodicityFailure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Ergodicity {
    pub irreducible: bool,
    /// Period of the communicating class reachable from state 0.
    pub period: usize,
}

impl Ergodicity {
    pub fn of(p: &DMatrix<f64>) -> Self {
        let n = p.nrows();
        let forward = bfs_levels(n, |u, v| p[(u, v)] > 0.0);
        let backward = bfs_levels(n, |u, v| p[(v, u)] > 0.0);
        let irreducible = forward.iter().all(Option::is_some) && backward.iter().all(Option::is_some);

        let mut period = 0usize;
        for u in 0..n {
            let Some(lu) = forward[u] else { continue };
            for v in 0..n {
                if p[(u, v)] > 0.0 {
                    if let Some(lv) = forward[v] {
                        let diff = (lu + 1).abs_diff(lv);
                        period = gcd(period, diff);
                    }
                }
            }
        }
        // every row of a stochastic matrix has an out-edge, so some cycle is always reachable
        Ergodicity {
            irreducible,
            period: period.max(1),
        }
    }

    pub fn is_ergodic(&self) -> bool {
        self.irreducible && self.period == 1
    }

    pub fn failure(&self) -> Option<ErgodicityFailure> {
        match (self.irreducible, self.period) {
            (true, 1) => None,
            (true, period) => Some(ErgodicityFailure::Periodic { period }),
            (false, 1) => Some(ErgodicityFailure::Reducible),
            (false, period) => Some(ErgodicityFailure::ReducibleAndPeriodic { period }),
        }
    }
}

fn bfs_levels(n: usize, edge: impl Fn(usize, usize) -> bool) -> Vec<Option<usize>> {
    let mut level = vec![None; n];
    if n == 0 {
        return level;
    }
    level[0] = Some(0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        let lu = level[u].unwrap_or(0);
        for v in 0..n {
            if level[v].is_none() && edge(u, v) {
                level[v] = Some(lu + 1);
                queue.push_back(v);
            }
        }
    }
    level
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
