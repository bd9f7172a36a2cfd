//! `e^{−itH}` from a block-encoding of `H/β`: qubitize, approximate
//! `e^{−it'x}` with `t' = βt` by the Jacobi–Anger polynomial, solve phases,
//! and post-select on `|+, G'⟩`.

use num_complex::Complex64;

use super::circuit::{assemble_qet_circuit, QetCircuit};
use super::phases::compute_phase_factors;
use super::{degree_bound, jacobi_anger_coefficients, truncation_error};
use crate::blockenc::{qubitize, BlockEncoding};
use crate::error::{Error, Result};
use crate::numerics::{vector_norm, ComplexMatrix};

/// Everything measured while building a simulation circuit.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationDiagnostics {
    pub time: f64,
    /// `t' = β·t`, the argument of the Bessel coefficients.
    pub scaled_time: f64,
    /// `R̃` from the degree bound.
    pub truncation_order: usize,
    /// Laurent degree `2R̃ + 1` (number of `CW`/`CW†` pairs).
    pub half_degree: usize,
    pub signal_calls: usize,
    /// `‖P_HS − e^{−it' cos θ}‖_∞` before rescaling.
    pub truncation_error: f64,
    /// Factor bringing `|P| ≤ 1 − η` so a complement exists.
    pub scale: f64,
    /// `‖s·P_HS − e^{−it' cos θ}‖_∞`, the polynomial part of the error.
    pub approximation_error: f64,
    pub phase_residual: f64,
}

/// A ready-to-run post-selected simulation.
#[derive(Debug, Clone)]
pub struct HamiltonianSimulation {
    pub circuit: QetCircuit,
    pub diagnostics: SimulationDiagnostics,
}

impl HamiltonianSimulation {
    /// Degree from `degree_bound(βt, eps)`.
    pub fn build(be: &BlockEncoding, t: f64, eps: f64) -> Result<Self> {
        let order = degree_bound(be.beta() * t, eps);
        Self::with_order(be, t, eps, order)
    }

    /// Explicit truncation order `R̃`.
    pub fn with_order(be: &BlockEncoding, t: f64, eps: f64, order: usize) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::BadRange(format!("eps = {eps} must lie in (0, 1)")));
        }
        if !t.is_finite() {
            return Err(Error::BadRange("time must be finite".into()));
        }
        let w = qubitize(be);
        let tp = be.beta() * t;
        let p = jacobi_anger_coefficients(tp, order);
        let grid = (8 * (2 * p.degree() + 1)).max(512).next_power_of_two();
        let trunc = truncation_error(&p, tp, grid)?;
        let eta = eps / 4.0;
        let scale = (1.0 - eta) / p.sup_norm(grid);
        let scaled = p.scaled(scale);
        let approx = truncation_error(&scaled, tp, grid)?;
        let tol = (eps / 20.0).max(1e-12);
        let phases = compute_phase_factors(&scaled, tol)?;
        let residual = phases.residual;
        let circuit = assemble_qet_circuit(&w, phases)?;
        let diagnostics = SimulationDiagnostics {
            time: t,
            scaled_time: tp,
            truncation_order: order,
            half_degree: circuit.d(),
            signal_calls: circuit.signal_calls(),
            truncation_error: trunc,
            scale,
            approximation_error: approx,
            phase_residual: residual,
        };
        Ok(Self {
            circuit,
            diagnostics,
        })
    }

    /// Post-selected image of `|ψ⟩` and the branch probability.
    pub fn apply(&self, psi: &[Complex64]) -> (Vec<Complex64>, f64) {
        let out = self.circuit.postselected_apply(psi);
        let p = vector_norm(&out).powi(2) / vector_norm(psi).powi(2);
        (out, p)
    }

    /// Dense post-selected map on the system.
    pub fn map(&self) -> ComplexMatrix {
        self.circuit.postselected_map()
    }
}

/// Post-selected QET approximation of `e^{−itH}` with diagnostics.
pub fn hamiltonian_simulation(
    be: &BlockEncoding,
    t: f64,
    eps: f64,
) -> Result<(ComplexMatrix, SimulationDiagnostics)> {
    let sim = HamiltonianSimulation::build(be, t, eps)?;
    Ok((sim.map(), sim.diagnostics))
}
