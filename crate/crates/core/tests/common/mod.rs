//! Test-side oracles, written without the library's numerical routes.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::f64::consts::PI;
use qssamp::markov::{gen_family, Family, MarkovChain};

/// Reversible chains with n ≤ 6 used for the protocol-level checks.
pub fn protocol_ensemble() -> Vec<(String, MarkovChain)> {
    let members = [
        (Family::TwoState { p: 0.1, q: 0.3 }, 2, 0),
        (Family::CycleLazy, 5, 0),
        (Family::Complete, 4, 0),
        (Family::BirthDeath { up: 0.4, down: 0.25 }, 4, 0),
        (Family::BirthDeath { up: 0.3, down: 0.25 }, 5, 0),
        (Family::RandomReversible, 5, 1),
        (Family::RandomReversible, 6, 2),
    ];
    members
        .into_iter()
        .map(|(f, n, seed)| (format!("{}-n{n}-seed{seed}", f.name()), gen_family(f, n, seed).unwrap()))
        .collect()
}

/// Wider reversible ensemble for chain-level properties.
pub fn chain_ensemble() -> Vec<(String, MarkovChain)> {
    let mut out = protocol_ensemble();
    for n in 3..=8 {
        out.push((format!("cycle-lazy-n{n}"), gen_family(Family::CycleLazy, n, 0).unwrap()));
        out.push((format!("complete-n{n}"), gen_family(Family::Complete, n, 0).unwrap()));
        out.push((
            format!("birth-death-n{n}"),
            gen_family(Family::BirthDeath { up: 0.35, down: 0.2 }, n, 0).unwrap(),
        ));
        for seed in 0..3 {
            out.push((
                format!("random-reversible-n{n}-seed{seed}"),
                gen_family(Family::RandomReversible, n, seed).unwrap(),
            ));
        }
    }
    out
}

/// Index of the smallest stationary mass, lowest index on ties.
pub fn argmin(pi: &DVector<f64>) -> usize {
    let mut best = 0;
    for i in 1..pi.len() {
        if pi[i] < pi[best] {
            best = i;
        }
    }
    best
}

/// Eigenvector of Pᵀ for eigenvalue 1, read off as the right singular vector of
/// `Pᵀ − I` with the smallest singular value.
pub fn null_vector_pi(p: &DMatrix<f64>) -> DVector<f64> {
    let n = p.nrows();
    let a = p.transpose() - DMatrix::identity(n, n);
    let svd = a.svd(false, true);
    let v_t = svd.v_t.unwrap();
    let k = svd.singular_values.imin();
    let v = v_t.row(k).transpose();
    v.unscale(v.sum())
}

/// `E_π τ_j = Z_jj / π_j` with `Z = Σ_t (P^t − 1πᵀ) = (I − P + 1πᵀ)^{-1} − 1πᵀ`.
pub fn fundamental_hitting_time(p: &DMatrix<f64>, j: usize) -> f64 {
    let n = p.nrows();
    let pi = null_vector_pi(p);
    let ones = DVector::from_element(n, 1.0);
    let z = (DMatrix::identity(n, n) - p + ones * pi.transpose())
        .try_inverse()
        .unwrap();
    (z[(j, j)] - pi[j]) / pi[j]
}

/// `1 − |λ2|` from the Schur-based eigenvalues of P itself.
pub fn schur_gap(p: &DMatrix<f64>) -> f64 {
    let mut moduli: Vec<f64> = p.complex_eigenvalues().iter().map(|z| z.norm()).collect();
    moduli.sort_by(|a, b| b.partial_cmp(a).unwrap());
    1.0 - moduli[1]
}

/// Smallest t ≥ 1 with max_x TV(P^t(x, ·), π) ≤ eps + 1e-12, by repeated multiplication.
pub fn brute_mixing_time(p: &DMatrix<f64>, eps: f64, cap: u64) -> u64 {
    let n = p.nrows();
    let pi = null_vector_pi(p);
    let mut m = p.clone();
    for t in 1..=cap {
        let worst = (0..n)
            .map(|x| 0.5 * (0..n).map(|y| (m[(x, y)] - pi[y]).abs()).sum::<f64>())
            .fold(0.0, f64::max);
        if worst <= eps + 1e-12 {
            return t;
        }
        m = &m * p;
    }
    panic!("no mixing within {cap} steps");
}

/// Momentum operator on an L-site periodic lattice, built from an explicit DFT matrix.
pub fn momentum_operator(l: usize, dx: f64) -> DMatrix<Complex64> {
    let f = DMatrix::from_fn(l, l, |k, x| {
        Complex64::from_polar(1.0 / (l as f64).sqrt(), -2.0 * PI * (k * x) as f64 / l as f64)
    });
    let p = DMatrix::from_fn(l, l, |k, q| {
        if k != q {
            return Complex64::new(0.0, 0.0);
        }
        let m = if k < l / 2 { k as f64 } else { k as f64 - l as f64 };
        Complex64::new(2.0 * PI * m / (l as f64 * dx), 0.0)
    });
    f.adjoint() * p * f
}

/// `(1 − s)P + sP′` with row j of P′ replaced by the unit vector at j.
pub fn interpolate_by_hand(p: &DMatrix<f64>, j: usize, s: f64) -> DMatrix<f64> {
    let n = p.nrows();
    DMatrix::from_fn(n, n, |x, y| {
        let absorbing = if x == j { if y == j { 1.0 } else { 0.0 } } else { p[(x, y)] };
        (1.0 - s) * p[(x, y)] + s * absorbing
    })
}
