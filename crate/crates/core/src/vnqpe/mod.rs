//! Von Neumann phase estimation: a pointer register coupled through
//! `e^{−itH ⊗ p}` and read out with an inverse QFT.

mod params;
mod pipeline;
mod pointer;

pub use params::{
    pointer_precision_qubits, select_parameters, select_parameters_with, slack_for_delta,
    ErrorBudget, ParameterPolicy, PointerSizing, QpeParams, TimeScale,
};
pub use pipeline::{run_vnqpe, EstimateReport, RunOptions, SimulationMode, MIN_POSTSELECT};
pub use pointer::{
    analytic_kappa, estimate_from_x, inverse_qft, pointer_initial_state, qft,
    success_probability_bound, unwrap_outcome,
};

/// `Δ_k`: distance from the `k`-th (ascending) eigenvalue to the nearest
/// distinct one; infinite for a degenerate or one-point spectrum.
pub fn spectral_gap(eigenvalues: &[f64], k: usize) -> f64 {
    let lk = eigenvalues[k];
    eigenvalues
        .iter()
        .map(|l| (l - lk).abs())
        .filter(|d| *d > 1e-12)
        .fold(f64::INFINITY, f64::min)
}
