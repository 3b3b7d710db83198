//! Closed-form cost analysis of the two-stage preparation run at a possibly
//! wrong interpolation parameter `s′` and with possibly wrong spectral gaps.
//!
//! Logarithms are natural throughout. The factor 4 in front of `A` is dropped,
//! and nothing else is.

use nalgebra::DVector;
use serde::Serialize;

use crate::error::{check_range, Error, Result};
use crate::interpolation::{interpolated_chain, s_star};
use crate::markov::{hitting_time, spectral_gap, stationary_linear_solve, MarkovChain};

/// `(ε, π_j)` pairs plotted in the reference A/B figure.
pub const FIGURE1_PRESETS: [(f64, f64); 2] = [(0.01, 0.1), (0.05, 0.5)];
pub const DEFAULT_SWEEP_GRID: usize = 512;
pub const LOG_CONVENTION: &str = "natural";

/// Formats with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// `ceil(x)` that does not round an exact integer up because of a trailing ulp.
pub(crate) fn robust_ceil(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * r.abs().max(1.0) {
        r
    } else {
        x.ceil()
    }
}

fn check_eps(eps: f64) -> Result<()> {
    check_range("eps", eps, eps > 0.0 && eps < 1.0, "(0, 1)")
}

/// `α = ⟨j|√π(s′)⟩ = sqrt(π_j / (1 − s′(1 − π_j)))`.
pub fn overlap_alpha(pi_j: f64, s_prime: f64) -> Result<f64> {
    check_range("pi_j", pi_j, pi_j > 0.0 && pi_j < 1.0, "(0, 1)")?;
    check_range("s_prime", s_prime, (0.0..=1.0).contains(&s_prime), "[0, 1]")?;
    Ok((pi_j / (1.0 - s_prime * (1.0 - pi_j))).sqrt())
}

/// `β = ⟨√π(s′)|√π⟩ = π_j/sqrt(Z) + Σ_{x≠j} π_x sqrt((1 − s′)/Z)`, `Z = 1 − s′(1 − π_j)`.
pub fn overlap_beta(pi: &DVector<f64>, j: usize, s_prime: f64) -> Result<f64> {
    if j >= pi.len() {
        return Err(Error::Index { index: j, n: pi.len() });
    }
    let pi_j = pi[j];
    check_range("pi_j", pi_j, pi_j > 0.0 && pi_j < 1.0, "(0, 1)")?;
    check_range("s_prime", s_prime, (0.0..=1.0).contains(&s_prime), "[0, 1]")?;
    let z = 1.0 - s_prime * (1.0 - pi_j);
    let rest: f64 = pi
        .iter()
        .enumerate()
        .filter(|&(x, _)| x != j)
        .map(|(_, &p)| p)
        .sum();
    Ok(pi_j * (1.0 / z).sqrt() + rest * ((1.0 - s_prime) / z).sqrt())
}

/// `β` as a function of `π_j` alone (the other masses sum to `1 − π_j`).
pub fn overlap_beta_from_pi_j(pi_j: f64, s_prime: f64) -> Result<f64> {
    check_range("pi_j", pi_j, pi_j > 0.0 && pi_j < 1.0, "(0, 1)")?;
    overlap_beta(&DVector::from_vec(vec![pi_j, 1.0 - pi_j]), 0, s_prime)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CostVariant {
    /// `sqrt(1/(Δ|α|²))·ln(2/(ε|α|²))`, the per-stage form.
    SqrtProduct,
    /// `1/(√Δ·|α|²)·ln(2/(ε|α|²))`, the form used when the stages are summed.
    LinearOverlap,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StageCosts {
    pub stage1: f64,
    pub stage2: f64,
    pub stage1_linear_overlap: f64,
    pub stage2_linear_overlap: f64,
}

impl StageCosts {
    pub fn get(&self, variant: CostVariant) -> (f64, f64) {
        match variant {
            CostVariant::SqrtProduct => (self.stage1, self.stage2),
            CostVariant::LinearOverlap => (self.stage1_linear_overlap, self.stage2_linear_overlap),
        }
    }
}

fn stage_cost(gap: f64, overlap: f64, eps: f64, variant: CostVariant) -> f64 {
    let o2 = overlap * overlap;
    let log = (2.0 / (eps * o2)).ln();
    match variant {
        CostVariant::SqrtProduct => (1.0 / (gap * o2)).sqrt() * log,
        CostVariant::LinearOverlap => log / (gap.sqrt() * o2),
    }
}

/// Stage 1 runs on `P(s′)` with overlap `α`; stage 2 on `P` with overlap `β`.
pub fn stage_costs(delta_s: f64, delta: f64, alpha: f64, beta: f64, eps: f64) -> Result<StageCosts> {
    check_range("delta_s", delta_s, delta_s > 0.0, "> 0")?;
    check_range("delta", delta, delta > 0.0, "> 0")?;
    check_range("alpha", alpha, alpha > 0.0 && alpha <= 1.0, "(0, 1]")?;
    check_range("beta", beta, beta > 0.0 && beta <= 1.0, "(0, 1]")?;
    check_eps(eps)?;
    Ok(StageCosts {
        stage1: stage_cost(delta_s, alpha, eps, CostVariant::SqrtProduct),
        stage2: stage_cost(delta, beta, eps, CostVariant::SqrtProduct),
        stage1_linear_overlap: stage_cost(delta_s, alpha, eps, CostVariant::LinearOverlap),
        stage2_linear_overlap: stage_cost(delta, beta, eps, CostVariant::LinearOverlap),
    })
}

/// `A = ln(2/(εα²)) / (α² sqrt(1 − α²))`, `B = ln(2/(εβ²)) / β²`.
pub fn coefficients_ab(alpha: f64, beta: f64, eps: f64) -> Result<(f64, f64)> {
    check_range("alpha", alpha, alpha > 0.0 && alpha <= 1.0, "(0, 1)")?;
    check_range("beta", beta, beta > 0.0 && beta <= 1.0, "(0, 1]")?;
    check_eps(eps)?;
    let a2 = alpha * alpha;
    if a2 >= 1.0 {
        return Err(Error::Divergence);
    }
    let b2 = beta * beta;
    let a = (2.0 / (eps * a2)).ln() / (a2 * (1.0 - a2).sqrt());
    let b = (2.0 / (eps * b2)).ln() / b2;
    Ok((a, b))
}

/// `A·sqrt(T_hit) + B·sqrt(T_mix)`.
pub fn total_scaling(a: f64, b: f64, t_hit: f64, t_mix: f64) -> f64 {
    a * t_hit.sqrt() + b * t_mix.sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub s_prime: f64,
    pub alpha: f64,
    pub beta: f64,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Sweep {
    pub eps: f64,
    pub pi_j: f64,
    pub rows: Vec<SweepRow>,
    /// `None` when `s*` falls outside `[0, 1)`.
    pub s_star: Option<f64>,
    /// Grid point with the smallest `A`.
    pub argmin_a: f64,
}

impl Sweep {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s_prime,alpha,beta,A,B\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                fmt17(r.s_prime),
                fmt17(r.alpha),
                fmt17(r.beta),
                fmt17(r.a),
                fmt17(r.b)
            ));
        }
        out
    }

    /// File name keyed by the `(ε, π_j)` pair.
    pub fn file_name(&self) -> String {
        format!("sweep_eps{}_pij{}.csv", self.eps, self.pi_j)
    }
}

/// `A` and `B` on `s′ = i/grid`, `i = 0..grid` (the divergent endpoint `s′ = 1` is excluded).
pub fn sweep_ab(pi_j: f64, eps: f64, grid: usize) -> Result<Sweep> {
    if grid < 16 {
        return Err(Error::Range {
            name: "grid",
            value: grid as f64,
            expected: ">= 16",
        });
    }
    check_range("pi_j", pi_j, pi_j > 0.0 && pi_j < 1.0, "(0, 1)")?;
    check_eps(eps)?;
    let rows = (0..grid)
        .map(|i| {
            let s = i as f64 / grid as f64;
            let alpha = overlap_alpha(pi_j, s)?;
            let beta = overlap_beta_from_pi_j(pi_j, s)?;
            let (a, b) = coefficients_ab(alpha, beta, eps)?;
            Ok(SweepRow {
                s_prime: s,
                alpha,
                beta,
                a,
                b,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let argmin_a = rows
        .iter()
        .min_by(|x, y| x.a.total_cmp(&y.a))
        .map(|r| r.s_prime)
        .unwrap_or(0.0);
    let star = 1.0 - pi_j / (1.0 - pi_j);
    Ok(Sweep {
        eps,
        pi_j,
        rows,
        s_star: (0.0..1.0).contains(&star).then_some(star),
        argmin_a,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HitBound {
    pub s_prime: f64,
    pub delta_s: f64,
    pub t_hit: f64,
    pub alpha: f64,
    /// `(1/Δ(s′))·(1 − α²)/(4·T_hit)`; at least 1 when `1/Δ(s′) ≥ 4·T_hit/(1 − α²)` holds.
    pub ratio: f64,
}

pub fn hitting_bound_ratio(chain: &MarkovChain, j: usize, s_prime: f64) -> Result<HitBound> {
    check_range("s_prime", s_prime, (0.0..1.0).contains(&s_prime), "[0, 1)")?;
    chain.check_index(j)?;
    chain.require_ergodic()?;
    let pi = stationary_linear_solve(chain.matrix())?;
    let delta_s = spectral_gap(&interpolated_chain(chain, j, s_prime)?)?;
    let t_hit = hitting_time(chain, j)?;
    let alpha = overlap_alpha(pi[j], s_prime)?;
    Ok(HitBound {
        s_prime,
        delta_s,
        t_hit,
        alpha,
        ratio: (1.0 / delta_s) * (1.0 - alpha * alpha) / (4.0 * t_hit),
    })
}

/// Pointer-register copies `ceil(log_{2/C}(4/ε))` needed when the gap used is `C` times the true one.
pub fn sensitivity_copies(c: f64, eps: f64) -> Result<u64> {
    check_c(c)?;
    check_eps(eps)?;
    let copies = if c == 1.0 {
        robust_ceil((4.0 / eps).log2())
    } else {
        robust_ceil((4.0 / eps).ln() / (2.0 / c).ln())
    };
    Ok(copies.max(1.0) as u64)
}

/// Copies used with a correct gap, `ceil(log₂(4/ε))`.
pub fn default_copies(eps: f64) -> Result<u64> {
    sensitivity_copies(1.0, eps)
}

/// Overlap `δ = (ε/4)^{log_{1/2}(C/2)}` left after stage 1 when it runs with a gap `C` times too large.
pub fn sensitivity_delta(c: f64, eps: f64) -> Result<f64> {
    check_c(c)?;
    check_eps(eps)?;
    let exponent = (c / 2.0).ln() / 0.5f64.ln();
    Ok((eps / 4.0).powf(exponent))
}

fn check_c(c: f64) -> Result<()> {
    if c.is_finite() && c > 0.0 && c < 2.0 {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "C = {c} is outside (0, 2): a gap estimate at least twice the true gap leaves no \
             guaranteed overlap between the filtered and target states, so no number of \
             pointer copies recovers the precision"
        )))
    }
}

/// Stage-2 cost `(1/(Δδ))·ln(1/δ)` when starting from overlap `δ`.
pub fn alt_stage2_cost(delta: f64, delta_overlap: f64) -> Result<f64> {
    check_range("delta", delta, delta > 0.0, "> 0")?;
    check_range(
        "delta_overlap",
        delta_overlap,
        delta_overlap > 0.0 && delta_overlap < 1.0,
        "(0, 1)",
    )?;
    Ok((1.0 / (delta * delta_overlap)) * (1.0 / delta_overlap).ln())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GapStage {
    /// `Δ(s′)`, the gap of the interpolated chain.
    Stage1,
    /// `Δ`, the gap of the original chain.
    Stage2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    ExtraCopies,
    AltStage2,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RouteComparison {
    pub copies: u64,
    pub baseline_copies: u64,
    pub delta_overlap: f64,
    /// Leading-order cost when the overestimated stage uses the extra copies.
    pub extra_copies_cost: f64,
    /// Leading-order cost when stage 1 keeps its copies and stage 2 starts from overlap `δ`;
    /// only defined for an overestimated stage-1 gap.
    pub alt_cost: Option<f64>,
    pub cheaper: Route,
}

/// Compares the two remedies for an overestimated gap at ratio `C`.
///
/// Costs are in leading-order units `1/sqrt(Δ(s*)) + 1/sqrt(Δ)` with logarithmic
/// factors dropped; the extra-copies route multiplies the affected term by the
/// copy-count ratio.
pub fn compare_routes(c: f64, eps: f64, delta: f64, delta_s: f64, which: GapStage) -> Result<RouteComparison> {
    check_range("delta", delta, delta > 0.0, "> 0")?;
    check_range("delta_s", delta_s, delta_s > 0.0, "> 0")?;
    let copies = sensitivity_copies(c, eps)?;
    let baseline = default_copies(eps)?;
    let factor = copies as f64 / baseline as f64;
    let delta_overlap = sensitivity_delta(c, eps)?;
    let term1 = 1.0 / delta_s.sqrt();
    let term2 = 1.0 / delta.sqrt();
    let (extra, alt) = match which {
        GapStage::Stage1 => (
            factor * term1 + term2,
            Some(term1 + alt_stage2_cost(delta, delta_overlap)?),
        ),
        GapStage::Stage2 => (term1 + factor * term2, None),
    };
    let cheaper = match alt {
        Some(a) if a < extra => Route::AltStage2,
        _ => Route::ExtraCopies,
    };
    Ok(RouteComparison {
        copies,
        baseline_copies: baseline,
        delta_overlap,
        extra_copies_cost: extra,
        alt_cost: alt,
        cheaper,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct CostInputs {
    pub pi_j: f64,
    pub s_prime: f64,
    pub eps: f64,
    /// `Δ(s′)`.
    pub delta_s: f64,
    /// `Δ`.
    pub delta: f64,
    pub t_hit: f64,
    pub t_mix: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostReport {
    pub alpha: f64,
    pub beta: f64,
    pub cost_stage1: f64,
    pub cost_stage2: f64,
    pub cost_stage1_linear_overlap: f64,
    pub cost_stage2_linear_overlap: f64,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    pub t_hit: f64,
    pub t_mix: f64,
    pub total_scaling: f64,
    pub log_convention: &'static str,
    /// Set once an underestimated gap has been accounted for.
    pub precision_preserved: bool,
    /// Multiplicative inflation applied to (stage 1, stage 2) costs.
    pub gap_inflation: (f64, f64),
}

pub fn cost_report(inp: CostInputs) -> Result<CostReport> {
    let alpha = overlap_alpha(inp.pi_j, inp.s_prime)?;
    let beta = overlap_beta_from_pi_j(inp.pi_j, inp.s_prime)?;
    let costs = stage_costs(inp.delta_s, inp.delta, alpha, beta, inp.eps)?;
    let (a, b) = coefficients_ab(alpha, beta, inp.eps)?;
    Ok(CostReport {
        alpha,
        beta,
        cost_stage1: costs.stage1,
        cost_stage2: costs.stage2,
        cost_stage1_linear_overlap: costs.stage1_linear_overlap,
        cost_stage2_linear_overlap: costs.stage2_linear_overlap,
        a,
        b,
        t_hit: inp.t_hit,
        t_mix: inp.t_mix,
        total_scaling: total_scaling(a, b, inp.t_hit, inp.t_mix),
        log_convention: LOG_CONVENTION,
        precision_preserved: true,
        gap_inflation: (1.0, 1.0),
    })
}

/// Accounts for running `which` stage with a gap `delta_used ≤ delta_true`: precision is
/// kept and that stage's `1/sqrt(Δ)` cost grows by `sqrt(delta_true / delta_used)`.
pub fn underestimate_effect(
    report: &CostReport,
    which: GapStage,
    delta_true: f64,
    delta_used: f64,
) -> Result<CostReport> {
    check_range("delta_true", delta_true, delta_true > 0.0, "> 0")?;
    check_range(
        "delta_used",
        delta_used,
        delta_used > 0.0 && delta_used <= delta_true,
        "(0, delta_true]",
    )?;
    let factor = (delta_true / delta_used).sqrt();
    let mut out = report.clone();
    match which {
        GapStage::Stage1 => {
            out.cost_stage1 *= factor;
            out.cost_stage1_linear_overlap *= factor;
            out.gap_inflation.0 *= factor;
        }
        GapStage::Stage2 => {
            out.cost_stage2 *= factor;
            out.cost_stage2_linear_overlap *= factor;
            out.gap_inflation.1 *= factor;
        }
    }
    out.precision_preserved = true;
    Ok(out)
}

/// `α(s*)` and `A(s*)` for a target mass below one half.
pub fn a_at_s_star(pi_j: f64, eps: f64) -> Result<f64> {
    let star = s_star(pi_j)?;
    let alpha = overlap_alpha(pi_j, star)?;
    let beta = overlap_beta_from_pi_j(pi_j, star)?;
    Ok(coefficients_ab(alpha, beta, eps)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, SQRT_2};

    #[test]
    fn alpha_examples() {
        assert!((overlap_alpha(0.3, 0.0).unwrap() - 0.3f64.sqrt()).abs() < 1e-15);
        let star = s_star(0.1).unwrap();
        assert!((overlap_alpha(0.1, star).unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
        assert!((overlap_alpha(0.1, 0.5).unwrap() - (0.1f64 / 0.55).sqrt()).abs() < 1e-15);
        assert!((overlap_alpha(0.1, 0.5).unwrap() - 0.426401).abs() < 1e-6);
        assert!(overlap_alpha(0.0, 0.5).is_err());
        assert!(overlap_alpha(0.1, 1.5).is_err());
    }

    #[test]
    fn beta_examples() {
        let pi = DVector::from_vec(vec![0.1, 0.2, 0.3, 0.4]);
        assert_eq!(overlap_beta(&pi, 0, 0.0).unwrap(), 1.0);
        let star = s_star(0.1).unwrap();
        let expected = (0.1f64.sqrt() + 0.9f64.sqrt()) / SQRT_2;
        assert!((overlap_beta(&pi, 0, star).unwrap() - expected).abs() < 1e-12);
        assert!((expected - 0.894427).abs() < 1e-6);
    }

    #[test]
    fn stage_cost_examples() {
        let c = stage_costs(1.0, 1.0, 1.0, 1.0, 2.0 / E).unwrap();
        assert!((c.stage1 - 1.0).abs() < 1e-15);
        let c = stage_costs(0.01, 0.3, 0.5f64.sqrt(), 1.0, 0.05).unwrap();
        let expected = 200f64.sqrt() * 80f64.ln();
        assert!((c.stage1 - expected).abs() < 1e-9);
        assert!((c.stage1 - 61.97).abs() < 0.01);
        assert!((c.stage2 - (1.0 / 0.3f64).sqrt() * 40f64.ln()).abs() < 1e-12);
        // at alpha^2 = 1/2 the linear reading is sqrt(2) times larger
        assert!((c.stage1_linear_overlap / c.stage1 - SQRT_2).abs() < 1e-12);
        assert!(stage_costs(0.0, 0.3, 0.5, 1.0, 0.05).is_err());
    }

    #[test]
    fn ab_examples() {
        let (a, _) = coefficients_ab(0.5f64.sqrt(), 0.9, 0.01).unwrap();
        assert!((a - 2.0 * SQRT_2 * 400f64.ln()).abs() < 1e-12);
        assert!((a - 16.946).abs() < 1e-3);
        let (a, b) = coefficients_ab(0.1f64.sqrt(), 1.0, 0.01).unwrap();
        assert!((a - 2000f64.ln() / (0.1 * 0.9f64.sqrt())).abs() < 1e-12);
        assert!((a - 80.12).abs() < 0.01);
        assert!((b - 200f64.ln()).abs() < 1e-15);
        let (_, b) = coefficients_ab(0.5, 1.0, 2.0 / E).unwrap();
        assert!((b - 1.0).abs() < 1e-15);
        assert!(matches!(coefficients_ab(1.0, 1.0, 0.1), Err(Error::Divergence)));
    }

    #[test]
    fn total_scaling_examples() {
        assert_eq!(total_scaling(1.0, 1.0, 4.0, 9.0), 5.0);
        assert_eq!(total_scaling(3.0, 0.0, 4.0, 9.0), 6.0);
    }

    #[test]
    fn copies_examples() {
        assert_eq!(sensitivity_copies(1.0, 0.05).unwrap(), 7);
        assert_eq!(sensitivity_copies(1.5, 0.05).unwrap(), 16);
        assert_eq!(sensitivity_copies(1.99, 0.05).unwrap(), 875);
        for eps in [0.5, 0.05, 0.005] {
            assert_eq!(
                sensitivity_copies(1.0, eps).unwrap(),
                (4.0 / eps).log2().ceil() as u64
            );
        }
        assert!(sensitivity_copies(2.0, 0.05).is_err());
        assert!(sensitivity_copies(0.0, 0.05).is_err());
    }

    #[test]
    fn delta_examples() {
        assert_eq!(sensitivity_delta(1.0, 0.05).unwrap(), 0.05 / 4.0);
        assert!((sensitivity_delta(1.5, 0.05).unwrap() - 0.1621).abs() < 1e-3);
        let grid: Vec<f64> = (1..200).map(|i| sensitivity_delta(i as f64 / 100.0, 0.05).unwrap()).collect();
        assert!(grid.windows(2).all(|w| w[1] > w[0]), "delta increases with C");
    }

    #[test]
    fn alt_cost_examples() {
        assert!((alt_stage2_cost(1.0, 1.0 / E).unwrap() - E).abs() < 1e-12);
        let v = alt_stage2_cost(0.01, 0.1621).unwrap();
        assert!((v - 1122.6).abs() / 1122.6 < 1e-3, "{v}");
        // unrounded delta
        let d = 0.0125f64.powf(0.75f64.ln() / 0.5f64.ln());
        let v = alt_stage2_cost(0.01, sensitivity_delta(1.5, 0.05).unwrap()).unwrap();
        assert!((v - 100.0 / d * (1.0 / d).ln()).abs() < 1e-9);
        assert!(alt_stage2_cost(0.01, 1.0).is_err());
    }

    #[test]
    fn route_comparison_picks_cheaper() {
        let cmp = compare_routes(1.5, 0.05, 0.01, 0.001, GapStage::Stage1).unwrap();
        assert_eq!(cmp.copies, 16);
        let alt = cmp.alt_cost.unwrap();
        assert_eq!(cmp.cheaper == Route::AltStage2, alt < cmp.extra_copies_cost);
        let cmp = compare_routes(1.5, 0.05, 0.01, 0.001, GapStage::Stage2).unwrap();
        assert_eq!(cmp.alt_cost, None);
        assert_eq!(cmp.cheaper, Route::ExtraCopies);
    }

    #[test]
    fn underestimate_scales_by_sqrt() {
        let r = cost_report(CostInputs {
            pi_j: 0.1,
            s_prime: 0.5,
            eps: 0.05,
            delta_s: 0.05,
            delta: 0.2,
            t_hit: 10.0,
            t_mix: 5.0,
        })
        .unwrap();
        assert_eq!(underestimate_effect(&r, GapStage::Stage2, 0.2, 0.2).unwrap(), r);
        let u = underestimate_effect(&r, GapStage::Stage2, 0.2, 0.05).unwrap();
        assert!((u.cost_stage2 / r.cost_stage2 - 2.0).abs() < 1e-12);
        assert_eq!(u.cost_stage1, r.cost_stage1);
        assert!(u.precision_preserved);
        assert!(underestimate_effect(&r, GapStage::Stage1, 0.2, 0.3).is_err());
    }

    #[test]
    fn sweep_presets() {
        let s = sweep_ab(0.1, 0.01, 64).unwrap();
        assert_eq!(s.rows.len(), 64);
        assert!((s.rows[0].b - 200f64.ln()).abs() < 1e-15);
        assert!((s.s_star.unwrap() - 8.0 / 9.0).abs() < 1e-15);
        let s = sweep_ab(0.5, 0.05, 64).unwrap();
        assert_eq!(s.s_star, Some(0.0));
        assert!(sweep_ab(0.5, 0.05, 8).is_err());
        let csv = s.to_csv();
        assert!(csv.starts_with("s_prime,alpha,beta,A,B\n"));
        assert_eq!(csv.lines().count(), 65);
    }

    #[test]
    fn robust_ceil_on_exact_powers() {
        assert_eq!(robust_ceil(3.0000000000000004), 3.0);
        assert_eq!(robust_ceil(3.2), 4.0);
    }
}
