//! Pointer register, joint system ⊗ pointer states, evolution under `H ⊗ p̂`
//! and post-selection on the pointer's origin.
//!
//! The pointer is a periodic position lattice `x_m = m·dx`,
//! `m ∈ {−L/2, …, L/2 − 1}`, with DFT-conjugate momenta `p_k = 2πk/(L·dx)`.
//! Arrays are stored in FFT order: index `i` holds `m = i` for `i < L/2` and
//! `m = i − L` otherwise, so `x = 0` sits at index 0.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::hamiltonian::HamiltonianModel;

/// Post-selection probabilities below this are treated as an annihilated state.
pub const ZERO_PROBABILITY_FLOOR: f64 = 1e-24;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointerRegister {
    len: usize,
    dx: f64,
}

/// Pointer of `len` sites with spacing `dx`, initialised at `|x = 0⟩`.
pub fn init_pointer(len: usize, dx: f64) -> Result<PointerRegister> {
    if len < 4 || !len.is_power_of_two() {
        return Err(Error::BadSize(len));
    }
    if !(dx > 0.0 && dx.is_finite()) {
        return Err(Error::Range {
            name: "dx",
            value: dx,
            expected: "> 0",
        });
    }
    Ok(PointerRegister { len, dx })
}

impl PointerRegister {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Signed lattice index of storage slot `i`.
    pub fn signed_index(&self, i: usize) -> i64 {
        if i < self.len / 2 {
            i as i64
        } else {
            i as i64 - self.len as i64
        }
    }

    /// Storage slot of signed lattice index `m`.
    pub fn slot(&self, m: i64) -> usize {
        m.rem_euclid(self.len as i64) as usize
    }

    pub fn positions(&self) -> Vec<f64> {
        (0..self.len).map(|i| self.signed_index(i) as f64 * self.dx).collect()
    }

    pub fn momenta(&self) -> Vec<f64> {
        let scale = 2.0 * PI / (self.len as f64 * self.dx);
        (0..self.len).map(|i| self.signed_index(i) as f64 * scale).collect()
    }

    /// Total extent `L·dx` of the lattice.
    pub fn extent(&self) -> f64 {
        self.len as f64 * self.dx
    }

    /// `|x = 0⟩`.
    pub fn origin(&self) -> DVector<Complex64> {
        let mut v = DVector::from_element(self.len, Complex64::new(0.0, 0.0));
        v[0] = Complex64::new(1.0, 0.0);
        v
    }

    /// Unitary DFT from position to momentum amplitudes.
    pub fn to_momentum(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        self.transform(v, false)
    }

    pub fn to_position(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        self.transform(v, true)
    }

    fn transform(&self, v: &DVector<Complex64>, inverse: bool) -> DVector<Complex64> {
        let mut planner = FftPlanner::new();
        let fft = if inverse {
            planner.plan_fft_inverse(self.len)
        } else {
            planner.plan_fft_forward(self.len)
        };
        let mut buf: Vec<Complex64> = v.iter().copied().collect();
        fft.process(&mut buf);
        let norm = 1.0 / (self.len as f64).sqrt();
        DVector::from_iterator(self.len, buf.into_iter().map(|z| z * norm))
    }
}

/// Amplitudes over (system basis) × (pointer position basis).
#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    amps: DMatrix<Complex64>,
    pointer: PointerRegister,
    cumulative_probability: f64,
}

impl JointState {
    /// `|ψ⟩ ⊗ |x = 0⟩`.
    pub fn product(system: &DVector<Complex64>, pointer: PointerRegister) -> Self {
        let mut amps = DMatrix::from_element(system.len(), pointer.len(), Complex64::new(0.0, 0.0));
        amps.set_column(0, system);
        JointState {
            amps,
            pointer,
            cumulative_probability: 1.0,
        }
    }

    pub fn from_amplitudes(amps: DMatrix<Complex64>, pointer: PointerRegister) -> Result<Self> {
        if amps.ncols() != pointer.len() {
            return Err(Error::DimensionMismatch {
                expected: pointer.len(),
                got: amps.ncols(),
            });
        }
        Ok(JointState {
            amps,
            pointer,
            cumulative_probability: 1.0,
        })
    }

    pub fn amplitudes(&self) -> &DMatrix<Complex64> {
        &self.amps
    }

    pub fn pointer(&self) -> PointerRegister {
        self.pointer
    }

    pub fn n(&self) -> usize {
        self.amps.nrows()
    }

    pub fn norm_squared(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Product of all post-selection probabilities applied so far.
    pub fn cumulative_probability(&self) -> f64 {
        self.cumulative_probability
    }

    /// Row-major flattening, system index major: entry `a·L + i`.
    pub fn flatten(&self) -> DVector<Complex64> {
        let (n, l) = self.amps.shape();
        DVector::from_fn(n * l, |idx, _| self.amps[(idx / l, idx % l)])
    }

    /// Marginal probability of each pointer site.
    pub fn pointer_distribution(&self) -> Vec<f64> {
        (0..self.pointer.len())
            .map(|i| self.amps.column(i).norm_squared())
            .collect()
    }
}

/// Applies `exp(−i t H ⊗ p̂)`: phases `exp(−i·mu_k·p_q·t)` in the (eigenbasis of H) ×
/// (momentum) product basis, then back to computational × position amplitudes.
pub fn evolve(h: &HamiltonianModel, state: &JointState, t: f64) -> Result<JointState> {
    if state.n() != h.n() {
        return Err(Error::DimensionMismatch {
            expected: h.n(),
            got: state.n(),
        });
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Range {
            name: "t",
            value: t,
            expected: ">= 0",
        });
    }
    let pointer = state.pointer;
    let l = pointer.len();
    let u = h.eigenvectors().map(|x| Complex64::new(x, 0.0));
    let mut coeff = u.tr_mul(&state.amps);

    let mut planner = FftPlanner::new();
    let forward = planner.plan_fft_forward(l);
    let inverse = planner.plan_fft_inverse(l);
    let momenta = pointer.momenta();
    let mut buf = vec![Complex64::new(0.0, 0.0); l];
    for (k, &mu) in h.mu().iter().enumerate() {
        if mu == 0.0 || t == 0.0 {
            continue;
        }
        for (i, b) in buf.iter_mut().enumerate() {
            *b = coeff[(k, i)];
        }
        forward.process(&mut buf);
        for (b, &p) in buf.iter_mut().zip(&momenta) {
            *b *= Complex64::from_polar(1.0 / l as f64, -mu * p * t);
        }
        inverse.process(&mut buf);
        for (i, b) in buf.iter().enumerate() {
            coeff[(k, i)] = *b;
        }
    }
    Ok(JointState {
        amps: u * coeff,
        pointer,
        cumulative_probability: state.cumulative_probability,
    })
}

#[derive(Debug, Clone)]
pub struct PostSelected {
    /// Renormalized joint state with the pointer projected onto the window.
    pub joint: JointState,
    /// Conditional probability of the accepted outcome.
    pub probability: f64,
    /// Renormalized system state; only defined for the single-site window.
    pub system: Option<DVector<Complex64>>,
}

/// Projects the pointer onto sites `|m| ≤ window` and renormalizes.
pub fn postselect_zero(state: &JointState, window: usize) -> Result<PostSelected> {
    let pointer = state.pointer;
    let keep: Vec<usize> = (0..pointer.len())
        .filter(|&i| pointer.signed_index(i).unsigned_abs() as usize <= window)
        .collect();
    let total = state.norm_squared();
    let kept: f64 = keep.iter().map(|&i| state.amps.column(i).norm_squared()).sum();
    let probability = kept / total;
    if !(probability > ZERO_PROBABILITY_FLOOR) {
        return Err(Error::ZeroProbability { probability });
    }
    let scale = 1.0 / kept.sqrt();
    let mut amps = DMatrix::from_element(state.n(), pointer.len(), Complex64::new(0.0, 0.0));
    for &i in &keep {
        amps.set_column(i, &(state.amps.column(i) * Complex64::new(scale, 0.0)));
    }
    let system = (window == 0).then(|| amps.column(0).into_owned());
    Ok(PostSelected {
        joint: JointState {
            amps,
            pointer,
            cumulative_probability: state.cumulative_probability * probability,
        },
        probability,
        system,
    })
}
