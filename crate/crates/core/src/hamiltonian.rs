//! Hamiltonian whose zero-eigenvector is `√π` of a reversible chain.
//!
//! The chain is symmetrized through its discriminant `D_xy = sqrt(P_xy P_yx)`,
//! which for a reversible chain shares the spectrum of `P` and has top eigenvector
//! `√π`. With `(λ_k, v_k)` the eigenpairs of `D`, the Hamiltonian is
//! `H = Σ_k sqrt(1 − λ_k²) |v_k⟩⟨v_k| = sqrt(I − D²)`: the top pair maps to 0 and,
//! because `|λ_k| < 1` for every other pair of an ergodic chain, the rest of the
//! spectrum lies in `(0, 1]`.
//!
//! The model lives on the `n`-dimensional state space. Eigenvalues are called `mu`
//! to keep them apart from the chain eigenvalues `λ`; `mu[0] = 0` is the eigenvalue
//! that the pair-space formulation indexes last.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interpolation::interpolated_chain;
use crate::linalg::symmetric_eigen_desc;
use crate::markov::{detailed_balance_violation, stationary_linear_solve, MarkovChain, REVERSIBILITY_TOL};

/// Hamiltonian eigenvalues below this (other than the pinned zero) mean the top
/// eigenvalue of `D` was not simple.
const DEGENERACY_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct DiscriminantMatrix {
    d: DMatrix<f64>,
}

impl DiscriminantMatrix {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.d
    }

    pub fn n(&self) -> usize {
        self.d.nrows()
    }
}

pub(crate) fn discriminant_unchecked(p: &DMatrix<f64>) -> DMatrix<f64> {
    let n = p.nrows();
    DMatrix::from_fn(n, n, |x, y| (p[(x, y)] * p[(y, x)]).sqrt())
}

/// `D_xy = sqrt(P_xy P_yx)` for a reversible ergodic chain.
pub fn discriminant(chain: &MarkovChain) -> Result<DiscriminantMatrix> {
    chain.require_ergodic()?;
    let pi = stationary_linear_solve(chain.matrix())?;
    let violation = detailed_balance_violation(chain, &pi);
    if violation > REVERSIBILITY_TOL {
        return Err(Error::NotReversible { violation });
    }
    Ok(DiscriminantMatrix {
        d: discriminant_unchecked(chain.matrix()),
    })
}

/// Where a model came from: the base chain (`s = 0`) or a point on the interpolation path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelSource {
    pub n: usize,
    pub s: f64,
    pub target_j: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct HamiltonianModel {
    mu: Vec<f64>,
    u: DMatrix<f64>,
    chain_eigenvalues: Vec<f64>,
    gap: f64,
    source: ModelSource,
}

/// Builds `H = sqrt(I − D²)` in the eigenbasis of `D`.
pub fn build_hamiltonian(d: &DiscriminantMatrix) -> Result<HamiltonianModel> {
    let n = d.n();
    let eig = symmetric_eigen_desc(d.matrix())?;
    let mut mu: Vec<f64> = eig
        .values
        .iter()
        .map(|&l| ((1.0 - l) * (1.0 + l)).max(0.0).sqrt())
        .collect();
    // the top eigenvalue of a stochastic discriminant is exactly 1
    mu[0] = 0.0;

    let mut order: Vec<usize> = (0..n).collect();
    order[1..].sort_by(|&a, &b| mu[a].total_cmp(&mu[b]));

    let mut u = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        u.set_column(dst, &eig.vectors.column(src));
    }
    let mut zero = u.column(0).into_owned();
    if zero.sum() < 0.0 {
        zero.neg_mut();
    }
    u.set_column(0, &zero);

    let mu: Vec<f64> = order.iter().map(|&k| mu[k]).collect();
    let chain_eigenvalues: Vec<f64> = order.iter().map(|&k| eig.values[k]).collect();
    let gap = mu.get(1).copied().unwrap_or(1.0);
    if n > 1 && gap < DEGENERACY_FLOOR {
        return Err(Error::DegenerateTopEigenvalue { next_mu: gap });
    }
    Ok(HamiltonianModel {
        mu,
        u,
        chain_eigenvalues,
        gap,
        source: ModelSource {
            n,
            s: 0.0,
            target_j: None,
        },
    })
}

impl HamiltonianModel {
    /// Hamiltonian of a reversible ergodic chain.
    pub fn for_chain(chain: &MarkovChain) -> Result<Self> {
        build_hamiltonian(&discriminant(chain)?)
    }

    /// Hamiltonian of `P(s)` interpolating toward the j-absorbing variant.
    pub fn interpolated(chain: &MarkovChain, j: usize, s: f64) -> Result<Self> {
        let ps = interpolated_chain(chain, j, s)?;
        let mut h = Self::for_chain(&ps)?;
        h.source = ModelSource {
            n: chain.n(),
            s,
            target_j: Some(j),
        };
        Ok(h)
    }

    pub fn n(&self) -> usize {
        self.mu.len()
    }

    /// Eigenvalues, ascending, `mu[0] = 0`.
    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    /// Orthonormal eigenvectors as columns, in the order of [`mu`](Self::mu).
    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.u
    }

    /// Discriminant eigenvalue `λ_k` paired with `mu[k]`.
    pub fn chain_eigenvalues(&self) -> &[f64] {
        &self.chain_eigenvalues
    }

    /// Non-negative eigenvector for eigenvalue 0; equals `√π`.
    pub fn zero_eigenvector(&self) -> DVector<f64> {
        self.u.column(0).into_owned()
    }

    pub fn gap(&self) -> f64 {
        self.gap
    }

    pub fn source(&self) -> ModelSource {
        self.source
    }

    /// Dense `U diag(mu) Uᵀ`.
    pub fn matrix(&self) -> DMatrix<f64> {
        let scaled = DMatrix::from_fn(self.n(), self.n(), |i, k| self.u[(i, k)] * self.mu[k]);
        scaled * self.u.transpose()
    }

    /// `H v` computed through the eigenbasis.
    pub fn apply(&self, v: &DVector<f64>) -> DVector<f64> {
        let mut coeff = self.u.tr_mul(v);
        for (c, m) in coeff.iter_mut().zip(&self.mu) {
            *c *= m;
        }
        &self.u * coeff
    }

    /// Orthogonal projectors onto each distinct eigenvalue's eigenspace; eigenvalues
    /// closer than `tol` are grouped.
    pub fn eigenspace_projectors(&self, tol: f64) -> Vec<(f64, DMatrix<f64>)> {
        let mut out: Vec<(f64, DMatrix<f64>)> = Vec::new();
        let mut k = 0;
        while k < self.n() {
            let start = k;
            while k + 1 < self.n() && (self.mu[k + 1] - self.mu[start]).abs() < tol {
                k += 1;
            }
            let cols = self.u.columns(start, k - start + 1);
            out.push((self.mu[start], &cols * cols.transpose()));
            k += 1;
        }
        out
    }

    pub fn dump_json(&self) -> String {
        #[derive(Serialize)]
        struct Dump<'a> {
            mu: &'a [f64],
            #[serde(rename = "U")]
            u: Vec<Vec<f64>>,
        }
        let u = (0..self.n())
            .map(|i| self.u.row(i).iter().copied().collect())
            .collect();
        serde_json::to_string(&Dump { mu: &self.mu, u }).expect("model dump serializes")
    }
}

/// Smallest nonzero eigenvalue.
pub fn hamiltonian_gap(h: &HamiltonianModel) -> f64 {
    h.gap()
}

/// Hamiltonian gap `sqrt(1 − (1 − Δ)²)` implied by a chain spectral gap `Δ`.
pub fn hamiltonian_gap_from_chain_gap(delta: f64) -> f64 {
    (delta * (2.0 - delta)).max(0.0).sqrt()
}

/// Coefficients `α_k = ⟨u_k|ψ⟩` of a normalized state.
pub fn expand_in_eigenbasis(h: &HamiltonianModel, psi: &DVector<Complex64>) -> Result<DVector<Complex64>> {
    if psi.len() != h.n() {
        return Err(Error::DimensionMismatch {
            expected: h.n(),
            got: psi.len(),
        });
    }
    let norm_sq = psi.norm_squared();
    if (norm_sq - 1.0).abs() > 1e-9 {
        return Err(Error::NotNormalized { norm_sq });
    }
    Ok(h.u.map(|x| Complex64::new(x, 0.0)).tr_mul(psi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::overlap_alpha;
    use crate::linalg::orthonormality_error;
    use crate::markov::{gen_family, Family};

    fn two_state(p: f64) -> MarkovChain {
        gen_family(Family::TwoState { p, q: p }, 2, 0).unwrap()
    }

    #[test]
    fn discriminant_examples() {
        let sym = gen_family(Family::CycleLazy, 5, 0).unwrap();
        assert_eq!(discriminant(&sym).unwrap().matrix(), sym.matrix());
        let c = MarkovChain::from_rows(&[vec![0.9, 0.1], vec![0.2, 0.8]]).unwrap();
        let d = discriminant(&c).unwrap();
        assert!((d.matrix()[(0, 1)] - 0.02f64.sqrt()).abs() < 1e-15);
        assert_eq!(d.matrix()[(0, 1)], d.matrix()[(1, 0)]);
    }

    #[test]
    fn discriminant_rejects_non_reversible() {
        let c = MarkovChain::from_rows(&[
            vec![0.4, 0.6, 0.0],
            vec![0.1, 0.5, 0.4],
            vec![0.5, 0.0, 0.5],
        ])
        .unwrap();
        assert!(matches!(discriminant(&c), Err(Error::NotReversible { .. })));
    }

    #[test]
    fn two_state_spectra() {
        let h = HamiltonianModel::for_chain(&two_state(0.5)).unwrap();
        assert_eq!(h.mu()[0], 0.0);
        assert!((h.mu()[1] - 1.0).abs() < 1e-12);
        let h = HamiltonianModel::for_chain(&two_state(0.1)).unwrap();
        assert!((h.mu()[1] - 0.6).abs() < 1e-12);
        assert!((hamiltonian_gap(&h) - 0.6).abs() < 1e-12);
        assert!(hamiltonian_gap(&h) >= 0.2f64.sqrt());
        let z = h.zero_eigenvector();
        assert!((z[0] - 0.5f64.sqrt()).abs() < 1e-12 && (z[1] - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn degenerate_top_is_rejected() {
        // block-diagonal chain bypassing the ergodicity check
        let p = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1.0]);
        let d = DiscriminantMatrix { d: discriminant_unchecked(&p) };
        assert!(matches!(build_hamiltonian(&d), Err(Error::DegenerateTopEigenvalue { .. })));
    }

    #[test]
    fn orthonormal_and_reconstructs() {
        let c = gen_family(Family::RandomReversible, 6, 11).unwrap();
        let h = HamiltonianModel::for_chain(&c).unwrap();
        assert!(orthonormality_error(h.eigenvectors()) < 1e-10);
        let v = DVector::from_fn(6, |i, _| (i as f64 * 0.7).sin());
        assert!((h.matrix() * &v - h.apply(&v)).amax() < 1e-10);
        // H = sqrt(I - D^2)  =>  H^2 = I - D^2
        let d = discriminant(&c).unwrap();
        let lhs = h.matrix() * h.matrix();
        let rhs = DMatrix::identity(6, 6) - d.matrix() * d.matrix();
        assert!((lhs - rhs).amax() < 1e-12);
    }

    #[test]
    fn projectors_handle_degenerate_spectrum() {
        // lazy cycle on 6 states has doubly degenerate eigenvalues
        let c = gen_family(Family::CycleLazy, 6, 0).unwrap();
        let h = HamiltonianModel::for_chain(&c).unwrap();
        let projectors = h.eigenspace_projectors(1e-9);
        assert!(projectors.len() < 6);
        let sum = projectors
            .iter()
            .fold(DMatrix::zeros(6, 6), |acc, (_, p)| acc + p);
        assert!((sum - DMatrix::<f64>::identity(6, 6)).amax() < 1e-10);
        let rebuilt = projectors
            .iter()
            .fold(DMatrix::zeros(6, 6), |acc, (m, p)| acc + p * *m);
        assert!((rebuilt - h.matrix()).amax() < 1e-12);
    }

    #[test]
    fn expansion_of_basis_state_matches_alpha() {
        let c = gen_family(Family::BirthDeath { up: 0.4, down: 0.25 }, 4, 0).unwrap();
        let pi = stationary_linear_solve(c.matrix()).unwrap();
        let s = 0.5;
        let h = HamiltonianModel::interpolated(&c, 0, s).unwrap();
        let mut psi = DVector::from_element(4, Complex64::new(0.0, 0.0));
        psi[0] = Complex64::new(1.0, 0.0);
        let coeff = expand_in_eigenbasis(&h, &psi).unwrap();
        assert!((coeff[0].re - overlap_alpha(pi[0], s).unwrap()).abs() < 1e-9);
        assert!((coeff.norm_squared() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn expansion_requires_normalization() {
        let h = HamiltonianModel::for_chain(&two_state(0.1)).unwrap();
        let psi = DVector::from_element(2, Complex64::new(1.0, 0.0));
        assert!(matches!(expand_in_eigenbasis(&h, &psi), Err(Error::NotNormalized { .. })));
        let zero = h.zero_eigenvector().map(|x| Complex64::new(x, 0.0));
        let coeff = expand_in_eigenbasis(&h, &zero).unwrap();
        assert!((coeff[0].re - 1.0).abs() < 1e-12 && coeff[1].norm() < 1e-12);
    }

    #[test]
    fn gap_from_chain_gap() {
        assert!((hamiltonian_gap_from_chain_gap(0.2) - 0.6).abs() < 1e-15);
        assert_eq!(hamiltonian_gap_from_chain_gap(1.0), 1.0);
    }

    #[test]
    fn dump_has_mu_and_u() {
        let h = HamiltonianModel::for_chain(&two_state(0.1)).unwrap();
        let v: serde_json::Value = serde_json::from_str(&h.dump_json()).unwrap();
        assert_eq!(v["mu"].as_array().unwrap().len(), 2);
        assert_eq!(v["U"].as_array().unwrap().len(), 2);
    }
}
