//! Two-stage stationary-state preparation.
//!
//! Stage 1 filters the basis state `|j⟩` with the Hamiltonian of `P(s′)`, landing
//! near `√π(s′)`. Stage 2 filters that output with the Hamiltonian of `P`,
//! landing near `√π`. `s′` is either supplied by the caller or resolved to `s*`
//! from the exact stationary distribution, in which case the run is labeled
//! oracle-assisted.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::filter::{default_pointer_size, filter_stage, StageDiagnostics, StageParams, TimeRule};
use super::pointer::init_pointer;
use crate::cost::default_copies;
use crate::error::{check_range, Error, Result};
use crate::hamiltonian::HamiltonianModel;
use crate::interpolation::{interpolated_chain, s_star};
use crate::markov::{spectral_gap, stationary_linear_solve, MarkovChain};

/// Cap on restarts of one stage in sampled mode.
pub const MAX_ATTEMPTS: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "value")]
pub enum SPrime {
    /// `s*` computed from the exact `π_j`.
    Auto,
    /// `s*` plus an offset.
    StarOffset(f64),
    Value(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "value")]
pub enum GapEstimate {
    /// The true spectral gap.
    Exact,
    /// An absolute value `Δ′`.
    Value(f64),
    /// `C` times the true gap.
    Factor(f64),
}

impl GapEstimate {
    fn resolve(self, true_gap: f64) -> Result<f64> {
        let v = match self {
            GapEstimate::Exact => true_gap,
            GapEstimate::Value(v) => v,
            GapEstimate::Factor(c) => c * true_gap,
        };
        if v > 0.0 && v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonPositiveGap(v))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "seed")]
pub enum Mode {
    /// Renormalize after each post-selection and record its probability.
    ExactConditional,
    /// Draw each post-selection outcome; a rejection restarts the stage.
    Sampled(u64),
}

#[derive(Debug, Clone, Copy)]
pub struct ProtocolConfig {
    pub eps: f64,
    pub s_prime: SPrime,
    pub gap_stage1: GapEstimate,
    pub gap_stage2: GapEstimate,
    /// `None` uses `ceil(log₂(4/ε))`.
    pub copies_stage1: Option<u64>,
    pub copies_stage2: Option<u64>,
    pub time_rule: TimeRule,
    /// `None` picks the smallest power of two ≥ max(16, 4t/dx) per stage.
    pub pointer_size: Option<usize>,
    pub dx: f64,
    pub mode: Mode,
}

impl ProtocolConfig {
    pub fn new(eps: f64) -> Self {
        ProtocolConfig {
            eps,
            s_prime: SPrime::Auto,
            gap_stage1: GapEstimate::Exact,
            gap_stage2: GapEstimate::Exact,
            copies_stage1: None,
            copies_stage2: None,
            time_rule: TimeRule::default(),
            pointer_size: None,
            dx: 1.0,
            mode: Mode::ExactConditional,
        }
    }

    pub fn with_s_prime(mut self, s: f64) -> Self {
        self.s_prime = SPrime::Value(s);
        self
    }

    fn validate(&self) -> Result<()> {
        check_range("eps", self.eps, self.eps > 0.0 && self.eps < 1.0, "(0, 1)")?;
        check_range("dx", self.dx, self.dx > 0.0, "> 0")?;
        for c in [self.copies_stage1, self.copies_stage2].into_iter().flatten() {
            if c == 0 {
                return Err(Error::Config("copies must be at least 1".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StageReport {
    #[serde(flatten)]
    pub diagnostics: StageDiagnostics,
    /// True spectral gap of the stage's chain.
    pub true_gap: f64,
    /// Sampled mode only: attempts until every round accepted.
    pub attempts: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProtocolResult {
    pub fidelity_sq: f64,
    /// `1 − fidelity_sq`, summed from the non-stationary eigencomponents.
    pub infidelity: f64,
    pub success_prob: f64,
    pub total_evolution_time: f64,
    pub stage1: StageReport,
    pub stage2: StageReport,
    pub leakage: f64,
    pub target_j: usize,
    pub pi_j: f64,
    pub s_prime: f64,
    /// `"oracle-assisted"` when `s′` was resolved from the exact `π_j`, else `"user"`.
    pub s_prime_source: &'static str,
    pub s_star: Option<f64>,
    pub eps: f64,
    pub mode: Mode,
    /// `[re, im]` amplitudes of the output system state.
    pub final_state: Vec<[f64; 2]>,
}

impl ProtocolResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("protocol result serializes")
    }
}

fn basis_state(n: usize, j: usize) -> DVector<Complex64> {
    let mut v = DVector::from_element(n, Complex64::new(0.0, 0.0));
    v[j] = Complex64::new(1.0, 0.0);
    v
}

fn run_stage(
    h: &HamiltonianModel,
    psi: &DVector<Complex64>,
    gap_estimate: f64,
    copies: u64,
    config: &ProtocolConfig,
) -> Result<(DVector<Complex64>, StageDiagnostics)> {
    let t = config.time_rule.round_time(gap_estimate, config.dx)?;
    let size = config
        .pointer_size
        .unwrap_or_else(|| default_pointer_size(t, config.dx));
    let pointer = init_pointer(size, config.dx)?;
    let params = StageParams {
        eps: config.eps,
        gap_estimate,
        copies,
        time_rule: config.time_rule,
    };
    filter_stage(h, psi, &params, &pointer)
}

/// Draws post-selection outcomes round by round, restarting on rejection.
/// Returns (attempts, total evolution time including rejected attempts).
pub fn sample_stage_attempts<R: Rng>(
    round_probabilities: &[f64],
    t_per_round: f64,
    rng: &mut R,
) -> Result<(u64, f64)> {
    let mut time = 0.0;
    for attempt in 1..=MAX_ATTEMPTS {
        let mut accepted = true;
        for &p in round_probabilities {
            time += t_per_round;
            if rng.random::<f64>() >= p {
                accepted = false;
                break;
            }
        }
        if accepted {
            return Ok((attempt, time));
        }
    }
    Err(Error::TooManyAttempts(MAX_ATTEMPTS))
}

/// Fraction of `trials` independent passes through the rounds in which every
/// post-selection accepted.
pub fn acceptance_frequency(round_probabilities: &[f64], trials: u64, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hits = (0..trials)
        .filter(|_| round_probabilities.iter().all(|&p| rng.random::<f64>() < p))
        .count();
    hits as f64 / trials as f64
}

pub fn run_protocol(chain: &MarkovChain, j: usize, config: &ProtocolConfig) -> Result<ProtocolResult> {
    config.validate()?;
    chain.check_index(j)?;
    chain.require_ergodic()?;
    let pi = stationary_linear_solve(chain.matrix())?;
    let pi_j = pi[j];
    check_range("pi_j", pi_j, pi_j > 0.0 && pi_j < 1.0, "(0, 1)")?;
    let star = (pi_j < 0.5).then(|| 1.0 - pi_j / (1.0 - pi_j));

    let (s_prime, source) = match config.s_prime {
        SPrime::Auto => {
            if pi_j >= 0.5 {
                return Err(Error::NoValidJ { j, pi_j });
            }
            (s_star(pi_j)?, "oracle-assisted")
        }
        SPrime::StarOffset(d) => {
            if pi_j >= 0.5 {
                return Err(Error::NoValidJ { j, pi_j });
            }
            let v = s_star(pi_j)? + d;
            check_range("s_prime", v, (0.0..1.0).contains(&v), "[0, 1)")?;
            (v, "oracle-assisted")
        }
        SPrime::Value(v) => {
            check_range("s_prime", v, (0.0..1.0).contains(&v), "[0, 1)")?;
            (v, "user")
        }
    };

    let h1 = HamiltonianModel::interpolated(chain, j, s_prime)?;
    let h2 = HamiltonianModel::for_chain(chain)?;
    let gap1 = spectral_gap(&interpolated_chain(chain, j, s_prime)?)?;
    let gap2 = spectral_gap(chain)?;
    let default = default_copies(config.eps)?;

    let (mid, d1) = run_stage(
        &h1,
        &basis_state(chain.n(), j),
        config.gap_stage1.resolve(gap1)?,
        config.copies_stage1.unwrap_or(default),
        config,
    )?;
    let (out, d2) = run_stage(
        &h2,
        &mid,
        config.gap_stage2.resolve(gap2)?,
        config.copies_stage2.unwrap_or(default),
        config,
    )?;

    let (attempts1, attempts2, total_time) = match config.mode {
        Mode::ExactConditional => (None, None, d1.evolution_time + d2.evolution_time),
        Mode::Sampled(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (a1, t1) = sample_stage_attempts(&d1.round_probabilities, d1.t_per_round, &mut rng)?;
            let (a2, t2) = sample_stage_attempts(&d2.round_probabilities, d2.t_per_round, &mut rng)?;
            (Some(a1), Some(a2), t1 + t2)
        }
    };

    let sqrt_pi = pi.map(f64::sqrt);
    let overlap: Complex64 = sqrt_pi.iter().zip(out.iter()).map(|(&a, &z)| z * a).sum();
    Ok(ProtocolResult {
        fidelity_sq: overlap.norm_sqr().min(1.0),
        infidelity: d2.infidelity_out,
        success_prob: d1.success_prob * d2.success_prob,
        total_evolution_time: total_time,
        leakage: d1.leakage + d2.leakage,
        stage1: StageReport {
            diagnostics: d1,
            true_gap: gap1,
            attempts: attempts1,
        },
        stage2: StageReport {
            diagnostics: d2,
            true_gap: gap2,
            attempts: attempts2,
        },
        target_j: j,
        pi_j,
        s_prime,
        s_prime_source: source,
        s_star: star,
        eps: config.eps,
        mode: config.mode,
        final_state: out.iter().map(|z| [z.re, z.im]).collect(),
    })
}
