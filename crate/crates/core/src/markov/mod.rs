//! Finite, homogeneous Markov chains and the classical quantities every other
//! module is measured against: the stationary distribution, the spectral gap,
//! the worst-case mixing time and the hitting time of a marked state.
//!
//! A [`MarkovChain`] is always row-stochastic; ergodicity is recorded, not
//! required, so that derived chains such as the absorbing variant can be
//! represented. Operations that need an ergodic chain check it.

mod families;
mod graph;
mod json;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{check_range, Error, Result};
use crate::linalg::{lu_solve, symmetric_eigen_desc};

pub use families::{gen_family, Family};
pub use graph::Ergodicity;
pub use json::{read_chain_json, write_chain_json, ChainFile};

/// Allowed deviation of a row sum from 1.
pub const ROW_SUM_TOL: f64 = 1e-9;
/// Detailed-balance tolerance used when a chain must be reversible.
pub const REVERSIBILITY_TOL: f64 = 1e-10;
/// Default cap on the number of steps `mixing_time` will take.
pub const MIXING_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, Default)]
pub struct ValidateOptions {
    /// Divide each row by its sum instead of rejecting rows that miss 1 by more than
    /// [`ROW_SUM_TOL`]. Negative entries are still rejected.
    pub renormalize_rows: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarkovChain {
    p: DMatrix<f64>,
    labels: Option<Vec<String>>,
    ergodicity: Ergodicity,
}

impl MarkovChain {
    /// Checks stochasticity and records ergodicity. Non-ergodic chains are accepted.
    pub fn new(p: DMatrix<f64>) -> Result<Self> {
        Self::with_options(p, ValidateOptions::default())
    }

    pub fn with_options(mut p: DMatrix<f64>, opts: ValidateOptions) -> Result<Self> {
        if p.nrows() != p.ncols() {
            return Err(Error::NotSquare {
                rows: p.nrows(),
                cols: p.ncols(),
            });
        }
        if p.nrows() == 0 {
            return Err(Error::Empty);
        }
        let n = p.nrows();
        for i in 0..n {
            for j in 0..n {
                let v = p[(i, j)];
                if !v.is_finite() {
                    return Err(Error::BadEntry { row: i, col: j, value: v });
                }
                if v < 0.0 {
                    return Err(Error::NegativeEntry { row: i, col: j, value: v });
                }
            }
        }
        for i in 0..n {
            let sum: f64 = p.row(i).sum();
            if (sum - 1.0).abs() > ROW_SUM_TOL {
                if opts.renormalize_rows && sum > 0.0 {
                    p.row_mut(i).unscale_mut(sum);
                } else {
                    return Err(Error::RowSum { row: i, sum, tol: ROW_SUM_TOL });
                }
            }
            for j in 0..n {
                if p[(i, j)] > 1.0 + ROW_SUM_TOL {
                    return Err(Error::BadEntry { row: i, col: j, value: p[(i, j)] });
                }
            }
        }
        let ergodicity = Ergodicity::of(&p);
        Ok(MarkovChain {
            p,
            labels: None,
            ergodicity,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::NotSquare { rows: n, cols: bad.len() });
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.p.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.p
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.p[(i, j)]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn ergodicity(&self) -> Ergodicity {
        self.ergodicity
    }

    pub fn is_ergodic(&self) -> bool {
        self.ergodicity.is_ergodic()
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n())
            .map(|i| self.p.row(i).iter().copied().collect())
            .collect()
    }

    pub(crate) fn require_ergodic(&self) -> Result<()> {
        match self.ergodicity.failure() {
            None => Ok(()),
            Some(f) => Err(Error::NotErgodic(f)),
        }
    }

    pub(crate) fn check_index(&self, j: usize) -> Result<()> {
        if j < self.n() {
            Ok(())
        } else {
            Err(Error::Index { index: j, n: self.n() })
        }
    }
}

/// Validates a transition matrix and requires the chain to be ergodic.
pub fn validate_chain(p: DMatrix<f64>) -> Result<MarkovChain> {
    let chain = MarkovChain::new(p)?;
    chain.require_ergodic()?;
    Ok(chain)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StationaryMethod {
    PowerIteration,
    LinearSolve,
}

#[derive(Debug, Clone, Copy)]
pub struct PowerIterationOptions {
    /// Stop once successive iterates differ by at most this much in any entry.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PowerIterationOptions {
    fn default() -> Self {
        PowerIterationOptions {
            tol: 1e-15,
            max_iter: 1_000_000,
        }
    }
}

pub fn stationary_distribution(chain: &MarkovChain, method: StationaryMethod) -> Result<DVector<f64>> {
    chain.require_ergodic()?;
    match method {
        StationaryMethod::LinearSolve => stationary_linear_solve(chain.matrix()),
        StationaryMethod::PowerIteration => {
            stationary_power_iteration(chain.matrix(), PowerIterationOptions::default())
        }
    }
}

/// Solves `(Pᵀ - I) π = 0` together with `Σ π = 1`. The normalization replaces the
/// last balance equation, which is redundant for an irreducible chain.
pub(crate) fn stationary_linear_solve(p: &DMatrix<f64>) -> Result<DVector<f64>> {
    let n = p.nrows();
    let mut a = p.transpose() - DMatrix::identity(n, n);
    a.row_mut(n - 1).fill(1.0);
    let mut b = DVector::zeros(n);
    b[n - 1] = 1.0;
    let mut pi = lu_solve(a, &b, "stationary balance equations")?;
    let s = pi.sum();
    pi.unscale_mut(s);
    Ok(pi)
}

pub fn stationary_power_iteration(p: &DMatrix<f64>, opts: PowerIterationOptions) -> Result<DVector<f64>> {
    let n = p.nrows();
    let pt = p.transpose();
    let mut v = DVector::from_element(n, 1.0 / n as f64);
    let mut change = f64::INFINITY;
    for _ in 0..opts.max_iter {
        let mut next = &pt * &v;
        let s = next.sum();
        next.unscale_mut(s);
        change = (&next - &v).amax();
        v = next;
        if change <= opts.tol {
            return Ok(v);
        }
    }
    Err(Error::Convergence {
        iterations: opts.max_iter,
        change,
    })
}

/// Detailed balance `|π_i P_ij − π_j P_ji| ≤ tol` for every pair.
pub fn is_reversible(chain: &MarkovChain, pi: &DVector<f64>, tol: f64) -> bool {
    detailed_balance_violation(chain, pi) <= tol
}

pub fn detailed_balance_violation(chain: &MarkovChain, pi: &DVector<f64>) -> f64 {
    let n = chain.n();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            let d = (pi[i] * chain.get(i, j) - pi[j] * chain.get(j, i)).abs();
            worst = worst.max(d);
        }
    }
    worst
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumRoute {
    /// Real spectrum from the symmetric discriminant of a reversible chain.
    SymmetricDiscriminant,
    /// General (Schur) eigensolver; only the moduli are trusted.
    General,
}

/// Eigenvalues of a transition matrix, sorted by decreasing modulus.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex64>,
    /// Orthonormal eigenvectors of the discriminant, present for the symmetric route.
    pub eigenvectors: Option<DMatrix<f64>>,
    pub route: SpectrumRoute,
}

impl Spectrum {
    pub fn moduli(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|z| z.norm()).collect()
    }

    /// `|λ2|`, zero for a one-state chain.
    pub fn second_modulus(&self) -> f64 {
        self.eigenvalues.get(1).map_or(0.0, |z| z.norm())
    }

    /// `Δ = |λ1| − |λ2|` with `λ1 = 1`.
    pub fn gap(&self) -> f64 {
        1.0 - self.second_modulus()
    }

    pub fn is_low_confidence(&self) -> bool {
        self.route == SpectrumRoute::General
    }
}

pub fn spectrum(chain: &MarkovChain) -> Result<Spectrum> {
    chain.require_ergodic()?;
    let pi = stationary_linear_solve(chain.matrix())?;
    if is_reversible(chain, &pi, REVERSIBILITY_TOL) {
        let d = crate::hamiltonian::discriminant_unchecked(chain.matrix());
        let eig = symmetric_eigen_desc(&d)?;
        let mut pairs: Vec<(f64, usize)> = eig.values.iter().copied().zip(0..).collect();
        pairs.sort_by(|a, b| b.0.abs().total_cmp(&a.0.abs()).then(b.0.total_cmp(&a.0)));
        let n = chain.n();
        let mut vectors = DMatrix::zeros(n, n);
        for (dst, &(_, src)) in pairs.iter().enumerate() {
            vectors.set_column(dst, &eig.vectors.column(src));
        }
        Ok(Spectrum {
            eigenvalues: pairs.iter().map(|&(v, _)| Complex64::new(v, 0.0)).collect(),
            eigenvectors: Some(vectors),
            route: SpectrumRoute::SymmetricDiscriminant,
        })
    } else {
        let mut values: Vec<Complex64> = general_eigenvalues(chain.matrix());
        values.sort_by(|a, b| b.norm().total_cmp(&a.norm()).then(b.re.total_cmp(&a.re)));
        Ok(Spectrum {
            eigenvalues: values,
            eigenvectors: None,
            route: SpectrumRoute::General,
        })
    }
}

pub(crate) fn general_eigenvalues(p: &DMatrix<f64>) -> Vec<Complex64> {
    p.complex_eigenvalues().iter().copied().collect()
}

/// `Δ = 1 − |λ2|`.
pub fn spectral_gap(chain: &MarkovChain) -> Result<f64> {
    Ok(spectrum(chain)?.gap())
}

/// Largest total-variation distance between a row of `m` and `pi`.
pub fn worst_tv_distance(m: &DMatrix<f64>, pi: &DVector<f64>) -> f64 {
    (0..m.nrows())
        .map(|x| {
            0.5 * m
                .row(x)
                .iter()
                .zip(pi.iter())
                .map(|(a, b)| (a - b).abs())
                .sum::<f64>()
        })
        .fold(0.0, f64::max)
}

/// Slack on the mixing threshold, so exact ties do not depend on rounding.
pub const TV_TIE_TOL: f64 = 1e-12;

/// Smallest `t ≥ 1` with `max_x ‖Pᵗ(x, ·) − π‖_TV ≤ eps_mix` (up to [`TV_TIE_TOL`]).
pub fn mixing_time(chain: &MarkovChain, eps_mix: f64) -> Result<u64> {
    mixing_time_with_cap(chain, eps_mix, MIXING_CAP)
}

pub fn mixing_time_with_cap(chain: &MarkovChain, eps_mix: f64, cap: u64) -> Result<u64> {
    check_range("eps_mix", eps_mix, eps_mix > 0.0 && eps_mix < 1.0, "(0, 1)")?;
    chain.require_ergodic()?;
    let pi = stationary_linear_solve(chain.matrix())?;
    let p = chain.matrix();
    let mut power = p.clone();
    let mut t = 1u64;
    loop {
        if worst_tv_distance(&power, &pi) <= eps_mix + TV_TIE_TOL {
            return Ok(t);
        }
        if t >= cap {
            return Err(Error::IterationCap { cap });
        }
        power = &power * p;
        t += 1;
    }
}

/// Expected steps to first reach `j` from each start state (zero at `j`).
pub fn hitting_times_to(chain: &MarkovChain, j: usize) -> Result<DVector<f64>> {
    chain.check_index(j)?;
    let n = chain.n();
    let others: Vec<usize> = (0..n).filter(|&x| x != j).collect();
    let m = others.len();
    let mut h_full = DVector::zeros(n);
    if m == 0 {
        return Ok(h_full);
    }
    let a = DMatrix::from_fn(m, m, |r, c| {
        let id = if r == c { 1.0 } else { 0.0 };
        id - chain.get(others[r], others[c])
    });
    let h = lu_solve(a, &DVector::from_element(m, 1.0), "hitting-time system (I - P_minor)")?;
    for (r, &x) in others.iter().enumerate() {
        h_full[x] = h[r];
    }
    Ok(h_full)
}

/// Hitting time of `j` with the start state drawn from `π`.
pub fn hitting_time(chain: &MarkovChain, j: usize) -> Result<f64> {
    chain.require_ergodic()?;
    let pi = stationary_linear_solve(chain.matrix())?;
    let h = hitting_times_to(chain, j)?;
    Ok(pi.dot(&h))
}

/// Time reversal `P̂_ij = π_j P_ji / π_i`.
pub fn time_reverse(chain: &MarkovChain, pi: &DVector<f64>) -> Result<MarkovChain> {
    chain.require_ergodic()?;
    if pi.len() != chain.n() {
        return Err(Error::DimensionMismatch {
            expected: chain.n(),
            got: pi.len(),
        });
    }
    if let Some(i) = pi.iter().position(|&v| v <= 0.0) {
        return Err(Error::ZeroStationaryEntry(i));
    }
    let n = chain.n();
    let rev = DMatrix::from_fn(n, n, |i, j| pi[j] * chain.get(j, i) / pi[i]);
    let mut out = MarkovChain::new(rev)?;
    out.labels = chain.labels.clone();
    Ok(out)
}

/// `(I + P) / 2`.
pub fn lazify(chain: &MarkovChain) -> MarkovChain {
    let n = chain.n();
    let p = (DMatrix::identity(n, n) + chain.matrix()) * 0.5;
    let ergodicity = Ergodicity::of(&p);
    MarkovChain {
        p,
        labels: chain.labels.clone(),
        ergodicity,
    }
}

/// Relaxation-time sandwich for reversible ergodic chains:
/// `(1/Δ − 1)·ln(1/(2ε)) ≤ t_mix(ε) ≤ (1/Δ)·ln(1/(ε·π_min))`.
pub fn relaxation_bounds(delta: f64, eps_mix: f64, pi_min: f64) -> (f64, f64) {
    let t_rel = 1.0 / delta;
    (
        (t_rel - 1.0) * (1.0 / (2.0 * eps_mix)).ln(),
        t_rel * (1.0 / (eps_mix * pi_min)).ln(),
    )
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainStatistics {
    pub pi: Vec<f64>,
    pub delta: f64,
    pub t_mix: u64,
    pub t_hit: f64,
    pub eps_mix: f64,
    pub target_j: usize,
    pub reversible: bool,
    pub spectrum_route: SpectrumRoute,
}

pub fn chain_statistics(chain: &MarkovChain, eps_mix: f64, target_j: usize) -> Result<ChainStatistics> {
    chain.check_index(target_j)?;
    let pi = stationary_distribution(chain, StationaryMethod::LinearSolve)?;
    let spec = spectrum(chain)?;
    Ok(ChainStatistics {
        reversible: is_reversible(chain, &pi, REVERSIBILITY_TOL),
        pi: pi.iter().copied().collect(),
        delta: spec.gap(),
        t_mix: mixing_time(chain, eps_mix)?,
        t_hit: hitting_time(chain, target_j)?,
        eps_mix,
        target_j,
        spectrum_route: spec.route,
    })
}
