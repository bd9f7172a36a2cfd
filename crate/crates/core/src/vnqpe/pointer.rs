//! Pointer register: preparation, (banded) inverse QFT, the ideal outcome
//! distribution, and read-out.
//!
//! The pointer always occupies the low-order `r` bits of a state vector, so
//! basis index `= rest·2^r + z` and pointer qubit 1 is the most significant
//! bit of `z`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::params::QpeParams;
use crate::error::{Error, Result};
use crate::pauli::MAX_POINTER_QUBITS;

fn check_r(r: usize) -> Result<()> {
    if r == 0 || r > MAX_POINTER_QUBITS {
        return Err(Error::TooLarge {
            what: "pointer qubits",
            value: r,
            limit: MAX_POINTER_QUBITS,
        });
    }
    Ok(())
}

/// `H^{⊗r}|0⟩`, the uniform superposition over `z`.
pub fn pointer_initial_state(r: usize) -> Result<Vec<Complex64>> {
    check_r(r)?;
    let n = 1usize << r;
    Ok(vec![Complex64::new(1.0 / (n as f64).sqrt(), 0.0); n])
}

fn check_state(state: &[Complex64], r: usize) -> Result<()> {
    check_r(r)?;
    let n = 1usize << r;
    if state.is_empty() || state.len() % n != 0 {
        return Err(Error::DimMismatch {
            expected: n,
            found: state.len(),
        });
    }
    Ok(())
}

/// Bit mask of pointer qubit `j` (1-based, 1 = most significant).
fn mask(r: usize, j: usize) -> usize {
    1 << (r - j)
}

/// `|z⟩ ↦ 2^{−r/2} Σ_x e^{2πizx/2^r}|x⟩` on the pointer, keeping only the
/// controlled rotations `R_m = diag(1, e^{2πi/2^m})` with `m ≤ band`.
///
/// `band = r` is exact; `band = 1` leaves only Hadamards.
pub fn inverse_qft(state: &mut [Complex64], r: usize, band: usize) -> Result<()> {
    check_state(state, r)?;
    if band == 0 || band > r {
        return Err(Error::BadBand { band, r });
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for j in 1..=r {
        let mj = mask(r, j);
        for i in 0..state.len() {
            if i & mj == 0 {
                let (a, b) = (state[i], state[i | mj]);
                state[i] = (a + b) * s;
                state[i | mj] = (a - b) * s;
            }
        }
        for m in 2..=(r - j + 1).min(band) {
            let mc = mask(r, j + m - 1);
            let ph = Complex64::from_polar(1.0, 2.0 * PI / (1u64 << m) as f64);
            let both = mj | mc;
            for (i, v) in state.iter_mut().enumerate() {
                if i & both == both {
                    *v *= ph;
                }
            }
        }
    }
    // the circuit leaves the output bits reversed
    let n = 1usize << r;
    for chunk in state.chunks_mut(n) {
        for z in 0..n {
            let rev = z.reverse_bits() >> (usize::BITS as usize - r);
            if z < rev {
                chunk.swap(z, rev);
            }
        }
    }
    Ok(())
}

/// Exact forward transform, `|x⟩ ↦ 2^{−r/2} Σ_z e^{−2πizx/2^r}|z⟩`.
pub fn qft(state: &mut [Complex64], r: usize) -> Result<()> {
    // the exact kernel is symmetric, so its adjoint is its conjugate
    for v in state.iter_mut() {
        *v = v.conj();
    }
    inverse_qft(state, r, r)?;
    for v in state.iter_mut() {
        *v = v.conj();
    }
    Ok(())
}

/// `|κ_x|²`, the probability of outcome `x` for an eigenvalue `λ` after
/// exact evolution for time `t`: `sin²(φ/2)/(4^r sin²(φ/2^{r+1}))` with
/// `φ = 2πx − λt`.
pub fn analytic_kappa(x: i64, lambda: f64, t: f64, r: usize) -> f64 {
    let n = (1u64 << r) as f64;
    let phi = 2.0 * PI * x as f64 - lambda * t;
    let den = (phi / (2.0 * n)).sin();
    if den.abs() < 1e-6 {
        // near the removable singularity sum the geometric series directly
        let mut acc = Complex64::new(0.0, 0.0);
        for z in 0..(1u64 << r) {
            acc += Complex64::from_polar(1.0, phi * z as f64 / n);
        }
        return (acc.norm_sqr() / (n * n)).min(1.0);
    }
    (phi / 2.0).sin().powi(2) / (n * n * den * den)
}

/// Lower bound on the probability of landing within `k` bins of the true
/// eigenvalue: `(1 − leakage)/(1 + 4^r ε_HS)·(1 − 1/(2(k − 1)))`.
pub fn success_probability_bound(params: &QpeParams, eps_hs: f64, leakage: f64) -> f64 {
    let k = params.k as f64;
    let four_r = 4f64.powi(params.r as i32);
    (1.0 - leakage) / (1.0 + four_r * eps_hs) * (1.0 - 1.0 / (2.0 * (k - 1.0)))
}

/// Outcome `x ∈ [0, 2^r)` read as a signed integer in `[−2^{r−1}, 2^{r−1})`.
pub fn unwrap_outcome(x: usize, r: usize) -> i64 {
    let n = 1i64 << r;
    let x = x as i64;
    if x >= n / 2 {
        x - n
    } else {
        x
    }
}

/// `λ̂ = 2πx/t`.
pub fn estimate_from_x(x: i64, t: f64) -> f64 {
    2.0 * PI * x as f64 / t
}
