//! End-to-end phase estimation: prepare, evolve `H ⊗ p`, iQFT, sample.

use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::params::QpeParams;
use super::pointer::{
    analytic_kappa, estimate_from_x, inverse_qft, pointer_initial_state, success_probability_bound,
    unwrap_outcome,
};
use crate::blockenc::lcu_block_encoding;
use crate::error::{Error, Result};
use crate::numerics::{hermitian_eigendecomposition, inner, kron_vec, vector_norm, ComplexMatrix};
use crate::pauli::{couple_pointer, lcp_to_matrix, LcpHamiltonian};
use crate::qet::{ErrorInjection, HamiltonianSimulation, SimulationDiagnostics};

/// Below this the post-selected branch is treated as lost.
pub const MIN_POSTSELECT: f64 = 1e-12;

/// How the controlled evolution is realised.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SimulationMode {
    /// Exact `e^{−itλz/2^r}` per pointer value, from the spectrum of `H`.
    ExactOracle,
    /// QET circuit on the LCU encoding of `H ⊗ p`, optionally with
    /// coherent errors injected.
    Qet(Option<ErrorInjection>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub mode: SimulationMode,
    pub shots: usize,
    pub seed: u64,
    /// Read outcomes as signed integers in `[−2^{r−1}, 2^{r−1})`.
    pub symmetric: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            mode: SimulationMode::ExactOracle,
            shots: 1000,
            seed: 0,
            symmetric: true,
        }
    }
}

/// Result of one run.
#[derive(Debug, Clone)]
pub struct EstimateReport {
    pub params: QpeParams,
    /// `P(x)` for `x = 0..2^r`.
    pub distribution: Vec<f64>,
    pub counts: Vec<usize>,
    /// Raw outcome of every shot, in order.
    pub samples: Vec<usize>,
    /// `λ̂` for every shot.
    pub estimates: Vec<f64>,
    /// Most frequent outcome (most likely if no shots), unwrapped if requested.
    pub x_hat: i64,
    pub lambda_hat: f64,
    /// Eigenvalue carrying the largest weight in the initial state.
    pub dominant_eigenvalue: f64,
    pub dominant_weight: f64,
    /// Ideal probability of landing within `k` bins of the dominant
    /// eigenvalue, from the closed-form outcome distribution.
    pub success_prob_analytic: f64,
    /// `(1 − leakage)/(1 + 4^r ε_HS)·(1 − 1/(2(k−1)))` with the leakage of
    /// the initial state.
    pub success_prob_bound: f64,
    pub postselect_prob: f64,
    pub shots: usize,
    pub seed: u64,
    pub simulation: Option<SimulationDiagnostics>,
}

/// Distance between outcome `x` and the real position `c` modulo `2^r`.
fn wrapped_distance(x: usize, c: f64, r: usize) -> f64 {
    let n = (1u64 << r) as f64;
    let d = (x as f64 - c).rem_euclid(n);
    d.min(n - d)
}

/// Run phase estimation on `|ψ₀⟩` for the Hamiltonian `h`.
pub fn run_vnqpe(
    h: &LcpHamiltonian,
    psi0: &[Complex64],
    params: &QpeParams,
    opts: &RunOptions,
) -> Result<EstimateReport> {
    let n = 1usize << h.num_qubits();
    if psi0.len() != n {
        return Err(Error::DimMismatch {
            expected: n,
            found: psi0.len(),
        });
    }
    let norm = vector_norm(psi0);
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::BadRange("initial state must be a nonzero finite vector".into()));
    }
    let psi: Vec<Complex64> = psi0.iter().map(|z| z / norm).collect();
    let r = params.r;
    let nz = 1usize << r;
    let t = params.t;
    let spectrum = hermitian_eigendecomposition(&lcp_to_matrix(h)?)?;
    let weights: Vec<f64> = (0..n)
        .map(|j| inner(&spectrum.eigenvector(j), &psi).norm_sqr())
        .collect();

    let (mut state, postselect_prob, simulation) = match opts.mode {
        SimulationMode::ExactOracle => (exact_evolution(&spectrum.eigenvectors, &spectrum.eigenvalues, &psi, r, t), 1.0, None),
        SimulationMode::Qet(injection) => {
            let be = lcu_block_encoding(&couple_pointer(h, r)?)?;
            let mut sim = HamiltonianSimulation::with_order(
                &be,
                t,
                params.budget.eps_qet,
                params.truncation_order,
            )?;
            if let Some(inj) = injection {
                sim.circuit = sim.circuit.with_injection(inj)?;
            }
            let start = kron_vec(&psi, &pointer_initial_state(r)?);
            let (out, p) = sim.apply(&start);
            if !(p >= MIN_POSTSELECT) {
                return Err(Error::PostselectFailed(p));
            }
            let s = 1.0 / p.sqrt();
            (out.into_iter().map(|z| z * s).collect(), p, Some(sim.diagnostics))
        }
    };

    inverse_qft(&mut state, r, params.band)?;
    let mut distribution = vec![0.0; nz];
    for chunk in state.chunks(nz) {
        for (x, a) in chunk.iter().enumerate() {
            distribution[x] += a.norm_sqr();
        }
    }
    let total: f64 = distribution.iter().sum();
    for p in distribution.iter_mut() {
        *p /= total;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut counts = vec![0usize; nz];
    let mut samples = Vec::with_capacity(opts.shots);
    if opts.shots > 0 {
        let dist = WeightedIndex::new(&distribution)
            .map_err(|e| Error::BadRange(format!("outcome distribution: {e}")))?;
        for _ in 0..opts.shots {
            let x = dist.sample(&mut rng);
            counts[x] += 1;
            samples.push(x);
        }
    }
    let read = |x: usize| {
        if opts.symmetric {
            unwrap_outcome(x, r)
        } else {
            x as i64
        }
    };
    let estimates = samples.iter().map(|&x| estimate_from_x(read(x), t)).collect();
    let best = if opts.shots > 0 {
        argmax(counts.iter().map(|&c| c as f64))
    } else {
        argmax(distribution.iter().copied())
    };
    let x_hat = read(best);

    let dom = argmax(weights.iter().copied());
    let lambda = spectrum.eigenvalues[dom];
    let centre = lambda * t / (2.0 * std::f64::consts::PI);
    let window: f64 = (0..nz)
        .filter(|&x| wrapped_distance(x, centre, r) <= params.k as f64)
        .map(|x| analytic_kappa(x as i64, lambda, t, r))
        .sum();
    let leakage = (1.0 - weights[dom]).max(0.0);

    Ok(EstimateReport {
        params: params.clone(),
        distribution,
        counts,
        samples,
        estimates,
        x_hat,
        lambda_hat: estimate_from_x(x_hat, t),
        dominant_eigenvalue: lambda,
        dominant_weight: weights[dom],
        success_prob_analytic: weights[dom] * window,
        success_prob_bound: success_probability_bound(params, params.budget.eps_hs, leakage),
        postselect_prob,
        shots: opts.shots,
        seed: opts.seed,
        simulation,
    })
}

/// `Σ_z |z⟩ ⊗ e^{−itHz/2^r}|ψ⟩ / 2^{r/2}`, laid out as `s·2^r + z`.
fn exact_evolution(
    vecs: &ComplexMatrix,
    vals: &[f64],
    psi: &[Complex64],
    r: usize,
    t: f64,
) -> Vec<Complex64> {
    let n = psi.len();
    let nz = 1usize << r;
    let c = vecs.adjoint_mul_vec(psi);
    let amp = 1.0 / (nz as f64).sqrt();
    let mut state = vec![Complex64::new(0.0, 0.0); n * nz];
    for z in 0..nz {
        let frac = z as f64 / nz as f64;
        let rotated: Vec<Complex64> = c
            .iter()
            .zip(vals)
            .map(|(cj, &l)| cj * Complex64::from_polar(amp, -t * l * frac))
            .collect();
        for (s, v) in vecs.mul_vec(&rotated).into_iter().enumerate() {
            state[s * nz + z] = v;
        }
    }
    state
}

fn argmax(it: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, v) in it.enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best.0
}
