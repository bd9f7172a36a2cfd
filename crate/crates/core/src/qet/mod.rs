//! Quantum eigenvalue transformation: Laurent polynomials on U(1), the
//! Jacobi–Anger approximation of `e^{−itx}`, phase factors, circuits, and
//! block-encoded Hamiltonian simulation.

mod circuit;
mod phases;
mod simulation;

pub use circuit::{assemble_qet_circuit, evaluate_circuit, ErrorInjection, QetCircuit};
pub use phases::{compute_phase_factors, qsp_response, Convention, PhaseSequence, Rotation};
pub use simulation::{hamiltonian_simulation, HamiltonianSimulation, SimulationDiagnostics};

use std::f64::consts::{E, PI};

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::numerics::bessel_j_sequence;

/// Grid size for sup-norm invariants.
pub const SUP_GRID: usize = 512;
/// Slack on `|P| ≤ 1`.
pub const SUP_TOL: f64 = 1e-9;

/// Jacobi–Anger truncation order `R̃` with `‖P_HS − e^{−it cos θ}‖_∞ ≤ ε`.
///
/// Natural logarithms throughout.
pub fn degree_bound(t: f64, eps: f64) -> usize {
    let t = t.abs();
    if t == 0.0 {
        return 0;
    }
    let l = (1.0 / eps).ln();
    if t > l / E {
        (E * t).ceil() as usize
    } else {
        (4.0 * l / (E + l / t).ln()).ceil() as usize
    }
}

/// Symmetry of a Laurent polynomial under `z ↦ 1/z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reciprocity {
    None,
    /// `P(z) = P(1/z)`
    Reciprocal,
    /// `P(z) = −P(1/z)`
    AntiReciprocal,
}

/// `P(z) = Σ_{k=−d}^{d} c_k z^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPolynomial {
    degree: usize,
    /// `coeffs[k + d] = c_k`
    coeffs: Vec<Complex64>,
    reciprocity: Reciprocity,
}

impl LaurentPolynomial {
    /// Coefficients for degrees `−d..=d` in increasing order.
    pub fn new(coeffs: Vec<Complex64>, reciprocity: Reciprocity) -> Result<Self> {
        if coeffs.len() % 2 == 0 {
            return Err(Error::BadRange(format!(
                "need 2d+1 coefficients, got {}",
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::BadRange("non-finite coefficient".into()));
        }
        Ok(Self {
            degree: coeffs.len() / 2,
            coeffs,
            reciprocity,
        })
    }

    /// `c_{−d}, …, c_d` with the invariants of the type checked.
    pub fn validated(coeffs: Vec<Complex64>, reciprocity: Reciprocity) -> Result<Self> {
        let p = Self::new(coeffs, reciprocity)?;
        p.check_conditions()?;
        Ok(p)
    }

    pub fn monomial(k: i64) -> Self {
        let d = k.unsigned_abs() as usize;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * d + 1];
        coeffs[(k + d as i64) as usize] = Complex64::new(1.0, 0.0);
        Self {
            degree: d,
            coeffs,
            reciprocity: if k == 0 {
                Reciprocity::Reciprocal
            } else {
                Reciprocity::None
            },
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn reciprocity(&self) -> Reciprocity {
        self.reciprocity
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        let d = self.degree as i64;
        if k < -d || k > d {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs[(k + d) as usize]
    }

    /// `c_{−d}, …, c_d`.
    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|z| z * s).collect(),
            reciprocity: self.reciprocity,
        }
    }

    /// `P(e^{iθ})`.
    pub fn eval_angle(&self, theta: f64) -> Complex64 {
        let z = Complex64::from_polar(1.0, theta);
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc * Complex64::from_polar(1.0, -(self.degree as f64) * theta)
    }

    /// `P` on the uniform grid `θ_j = 2πj/n`, via FFT when `n` is large enough.
    pub fn eval_grid(&self, n: usize) -> Vec<Complex64> {
        let len = self.coeffs.len();
        if n < len {
            return (0..n)
                .map(|j| self.eval_angle(2.0 * PI * j as f64 / n as f64))
                .collect();
        }
        // Σ_k c_k e^{ikθ_j}, with negative k folded modulo n
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        let d = self.degree as i64;
        for (i, c) in self.coeffs.iter().enumerate() {
            let k = i as i64 - d;
            buf[k.rem_euclid(n as i64) as usize] += c;
        }
        let mut planner = FftPlanner::new();
        planner.plan_fft_inverse(n).process(&mut buf);
        buf
    }

    /// `max |P|` on an `n`-point grid.
    pub fn sup_norm(&self, n: usize) -> f64 {
        self.eval_grid(n).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Boundedness and the declared reciprocity on the 512-point grid.
    pub fn check_conditions(&self) -> Result<()> {
        let n = SUP_GRID.max(4 * self.coeffs.len()).next_power_of_two();
        let vals = self.eval_grid(n);
        let sup = vals.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if sup > 1.0 + SUP_TOL {
            return Err(Error::ConditionViolated(format!(
                "sup |P| = {sup} exceeds 1"
            )));
        }
        let sign = match self.reciprocity {
            Reciprocity::None => return Ok(()),
            Reciprocity::Reciprocal => 1.0,
            Reciprocity::AntiReciprocal => -1.0,
        };
        // P(1/z) at θ_j is P at θ_{−j}
        let worst = (0..n)
            .map(|j| (vals[j] - vals[(n - j) % n] * sign).norm())
            .fold(0.0, f64::max);
        if worst > SUP_TOL {
            return Err(Error::ConditionViolated(format!(
                "declared reciprocity off by {worst:e}"
            )));
        }
        Ok(())
    }
}

/// `P_HS(z) = Σ_{|k| ≤ 2R+1} (−i)^k J_k(t) z^k`, the truncated Jacobi–Anger
/// series of `e^{−it cos θ}`.
///
/// With `J_{−k} = (−1)^k J_k` the coefficients satisfy `c_{−k} = c_k`; even
/// degrees are real and odd degrees imaginary.
pub fn jacobi_anger_coefficients(t: f64, r: usize) -> LaurentPolynomial {
    let d = 2 * r + 1;
    let j = bessel_j_sequence(d, t);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * d + 1];
    for k in 0..=d {
        let c = match k % 4 {
            0 => Complex64::new(j[k], 0.0),
            1 => Complex64::new(0.0, -j[k]),
            2 => Complex64::new(-j[k], 0.0),
            _ => Complex64::new(0.0, j[k]),
        };
        coeffs[d + k] = c;
        coeffs[d - k] = c;
    }
    LaurentPolynomial {
        degree: d,
        coeffs,
        reciprocity: Reciprocity::Reciprocal,
    }
}

/// `max_θ |P(e^{iθ}) − e^{−it cos θ}|` on a `gridsize`-point grid.
pub fn truncation_error(p: &LaurentPolynomial, t: f64, gridsize: usize) -> Result<f64> {
    if gridsize < 4 * p.degree().max(1) {
        return Err(Error::BadRange(format!(
            "grid of {gridsize} points is too coarse for degree {}",
            p.degree()
        )));
    }
    let vals = p.eval_grid(gridsize);
    Ok(vals
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let theta = 2.0 * PI * j as f64 / gridsize as f64;
            (v - Complex64::from_polar(1.0, -t * theta.cos())).norm()
        })
        .fold(0.0, f64::max))
}
