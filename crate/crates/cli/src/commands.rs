//! The three subcommands.

use std::io::Write;
use std::path::PathBuf;

use num_complex::Complex64;

use vnqpe_core::numerics::{hermitian_eigendecomposition, inner};
use vnqpe_core::pauli::{lcp_to_matrix, parse_lcp, LcpHamiltonian};
use vnqpe_core::resources::{cu_oracle_cost, lcp_pipeline_cost, thm3_cost, CostReport};
use vnqpe_core::vnqpe::{
    run_vnqpe, select_parameters_with, spectral_gap, unwrap_outcome, EstimateReport,
    ParameterPolicy, QpeParams, RunOptions, SimulationMode,
};

use crate::config::{read_amplitudes, InitialState, Mode, Policy, RunConfig};
use crate::output::{csv_file, num, summary_path};
use crate::{Axis, CliError, Model};

/// Hamiltonian, initial state and the eigenvalue it targets.
struct Problem {
    h: LcpHamiltonian,
    psi: Vec<Complex64>,
    lambda: f64,
    delta_k: f64,
}

fn load_problem(cfg: &RunConfig) -> Result<Problem, CliError> {
    let text = std::fs::read_to_string(&cfg.hamiltonian_path).map_err(|e| {
        CliError::config(format!("cannot read {}: {e}", cfg.hamiltonian_path.display()))
    })?;
    let h = parse_lcp(&text)?;
    let spec = hermitian_eigendecomposition(&lcp_to_matrix(&h)?)?;
    let dim = spec.eigenvalues.len();
    let (psi, target) = match &cfg.initial_state {
        InitialState::Eigenstate(k) => {
            if *k >= dim {
                return Err(CliError::config(format!(
                    "eigenstate {k} out of range for dimension {dim}"
                )));
            }
            (spec.eigenvector(*k), *k)
        }
        InitialState::Amplitudes(p) => {
            let psi = read_amplitudes(p)?;
            if psi.len() != dim {
                return Err(CliError::config(format!(
                    "{} holds {} amplitudes, H needs {dim}",
                    p.display(),
                    psi.len()
                )));
            }
            let weight = |j: usize| inner(&spec.eigenvector(j), &psi).norm_sqr();
            let target = (0..dim)
                .max_by(|&a, &b| weight(a).total_cmp(&weight(b)))
                .unwrap_or(0);
            (psi, target)
        }
    };
    let delta_k = match cfg.delta_k {
        Some(g) => g,
        None => {
            let g = spectral_gap(&spec.eigenvalues, target);
            if !g.is_finite() {
                return Err(CliError::config(
                    "spectrum has a single distinct eigenvalue; set delta_k explicitly",
                ));
            }
            g
        }
    };
    Ok(Problem {
        lambda: spec.eigenvalues[target],
        h,
        psi,
        delta_k,
    })
}

fn policy(p: Policy) -> ParameterPolicy {
    match p {
        Policy::Default => ParameterPolicy::default(),
        Policy::Literal => ParameterPolicy::literal(),
    }
}

fn select(cfg: &RunConfig, prob: &Problem) -> Result<QpeParams, CliError> {
    let p = select_parameters_with(
        prob.delta_k,
        cfg.eps_vn,
        cfg.delta,
        prob.h.one_norm(),
        cfg.eps_be,
        policy(cfg.policy),
    )?;
    finish_params(cfg, p)
}

fn finish_params(cfg: &RunConfig, p: QpeParams) -> Result<QpeParams, CliError> {
    Ok(match cfg.band {
        Some(b) => p.with_band(b)?,
        None => p,
    })
}

fn execute(cfg: &RunConfig, prob: &Problem, params: &QpeParams) -> Result<EstimateReport, CliError> {
    let opts = RunOptions {
        mode: match cfg.simulation_mode {
            Mode::Qet => SimulationMode::Qet(None),
            Mode::ExactOracle => SimulationMode::ExactOracle,
        },
        shots: cfg.shots,
        seed: cfg.seed,
        symmetric: true,
    };
    Ok(run_vnqpe(&prob.h, &prob.psi, params, &opts)?)
}

/// Fraction of shots within `ε_vN` of the targeted eigenvalue.
fn hit_fraction(rep: &EstimateReport, lambda: f64, eps_vn: f64) -> f64 {
    if rep.shots == 0 {
        return f64::NAN;
    }
    let hits = rep.estimates.iter().filter(|e| (*e - lambda).abs() <= eps_vn).count();
    hits as f64 / rep.shots as f64
}

pub fn simulate(cfg: &RunConfig) -> Result<(), CliError> {
    let prob = load_problem(cfg)?;
    let params = select(cfg, &prob)?;
    let rep = execute(cfg, &prob, &params)?;

    let r = params.r;
    let mut rows: Vec<(i64, usize)> = (0..rep.distribution.len()).map(|x| (unwrap_outcome(x, r), x)).collect();
    rows.sort();
    let mut w = csv_file(&cfg.output_path)?;
    w.write_record(["x", "probability", "lambda_estimate", "shots_observed"])?;
    for (x, raw) in rows {
        w.write_record([
            x.to_string(),
            num(rep.distribution[raw]),
            num(vnqpe_core::vnqpe::estimate_from_x(x, params.t)),
            rep.counts[raw].to_string(),
        ])?;
    }
    w.flush()?;

    let hits = hit_fraction(&rep, prob.lambda, cfg.eps_vn);
    let mut s = String::new();
    let mut kv = |k: &str, v: String| {
        s.push_str(k);
        s.push_str(" = ");
        s.push_str(&v);
        s.push('\n');
    };
    kv("lambda_hat", num(rep.lambda_hat));
    kv("x_hat", rep.x_hat.to_string());
    kv("target_eigenvalue", num(prob.lambda));
    kv("hit_fraction", num(hits));
    kv("success_prob_analytic", num(rep.success_prob_analytic));
    kv("success_prob_bound", num(rep.success_prob_bound));
    kv("postselect_prob", num(rep.postselect_prob));
    kv("hamiltonian_path", cfg.hamiltonian_path.display().to_string());
    kv("simulation_mode", cfg.simulation_mode.as_str().to_string());
    kv("policy", cfg.policy.as_str().to_string());
    kv("shots", cfg.shots.to_string());
    kv("seed", cfg.seed.to_string());
    kv("delta", num(params.delta));
    kv("eps_vn", num(cfg.eps_vn));
    kv("delta_k", num(params.delta_k));
    kv("beta", num(params.beta));
    kv("r", params.r.to_string());
    kv("t", num(params.t));
    kv("k", params.k.to_string());
    kv("truncation_order", params.truncation_order.to_string());
    kv("d", params.d.to_string());
    kv("signal_calls", params.signal_calls.to_string());
    kv("band", params.band.to_string());
    kv("eps_qet", num(params.budget.eps_qet));
    kv("eps_be", num(params.budget.eps_be));
    kv("eps_r", num(params.budget.eps_r));
    kv("eps_hs", num(params.budget.eps_hs));
    kv("encoding_error", num(params.encoding_error));
    kv("delta_floor", num(params.delta_floor));
    std::fs::write(summary_path(&cfg.output_path), s)?;

    println!(
        "lambda_hat = {} (x = {}), target {}, hit fraction {}",
        rep.lambda_hat, rep.x_hat, prob.lambda, hits
    );
    Ok(())
}

pub struct EstimateInput {
    pub models: Vec<Model>,
    pub beta: Option<f64>,
    pub delta_k: Option<f64>,
    pub delta: Option<f64>,
    pub eps_be: Option<f64>,
    pub eps_vn: Option<f64>,
    pub norm_h: Option<f64>,
    pub num_terms: Option<usize>,
    pub n: Option<usize>,
    pub n_anc: Option<usize>,
    pub alpha: Option<f64>,
    pub output_path: Option<PathBuf>,
}

fn need<T>(v: Option<T>, flag: &str, model: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::config(format!("--model {model} needs --{flag}")))
}

fn breakdown(c: &CostReport) -> String {
    c.breakdown
        .iter()
        .map(|p| format!("{}:{}:{}:{}", p.label, num(p.gate_count), num(p.depth), num(p.query_count)))
        .collect::<Vec<_>>()
        .join(";")
}

pub fn estimate(a: &EstimateInput) -> Result<(), CliError> {
    let mut reports = Vec::new();
    for m in &a.models {
        let (name, rep) = match m {
            Model::Thm3 => {
                let n = "thm3";
                (
                    n,
                    thm3_cost(
                        need(a.beta, "beta", n)?,
                        need(a.delta_k, "delta-k", n)?,
                        need(a.delta, "delta", n)?,
                        need(a.eps_be, "eps-be", n)?,
                    )?,
                )
            }
            Model::Cor1 => {
                let n = "cor1";
                (
                    n,
                    cu_oracle_cost(
                        need(a.norm_h, "norm-h", n)?,
                        need(a.delta_k, "delta-k", n)?,
                        need(a.delta, "delta", n)?,
                        need(a.eps_vn, "eps-vn", n)?,
                        need(a.n, "n", n)?,
                    )?,
                )
            }
            Model::Cor2 => {
                let n = "cor2";
                (
                    n,
                    lcp_pipeline_cost(
                        need(a.num_terms, "num-terms", n)?,
                        need(a.n, "n", n)?,
                        need(a.n_anc, "n-anc", n)?,
                        need(a.alpha, "alpha", n)?,
                        need(a.delta_k, "delta-k", n)?,
                        need(a.delta, "delta", n)?,
                        need(a.eps_vn, "eps-vn", n)?,
                    )?,
                )
            }
        };
        reports.push((name, rep));
    }
    let sink: Box<dyn Write> = match &a.output_path {
        Some(p) => Box::new(std::fs::File::create(p)?),
        None => Box::new(std::io::stdout()),
    };
    let mut w = csv::Writer::from_writer(sink);
    w.write_record([
        "model",
        "gate_count",
        "depth",
        "qubits",
        "ancillas",
        "query_count",
        "breakdown",
        "clamped",
    ])?;
    for (name, c) in reports {
        w.write_record([
            name.to_string(),
            num(c.gate_count),
            num(c.depth),
            c.qubits.to_string(),
            c.ancillas.to_string(),
            num(c.query_count),
            breakdown(&c),
            c.clamped.join(";"),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Linear or geometric grid from `from` to `to` inclusive.
pub fn grid(from: f64, to: f64, points: usize, geometric: bool) -> Result<Vec<f64>, CliError> {
    if points == 0 {
        return Err(CliError::config("sweep grid is empty"));
    }
    if !(from.is_finite() && to.is_finite()) {
        return Err(CliError::config("sweep bounds must be finite"));
    }
    if geometric && !(from > 0.0 && to > 0.0) {
        return Err(CliError::config("geometric grid needs positive bounds"));
    }
    if points == 1 {
        return Ok(vec![from]);
    }
    let last = (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            let s = i as f64 / last;
            if geometric {
                from * (to / from).powf(s)
            } else {
                from + (to - from) * s
            }
        })
        .collect())
}

fn axis_name(a: Axis) -> &'static str {
    match a {
        Axis::Delta => "delta",
        Axis::EpsVn => "eps_vN",
        Axis::T => "t",
        Axis::R => "r",
        Axis::EpsBe => "eps_BE",
    }
}

pub fn sweep(cfg: &RunConfig, axis: Axis, grid: &[f64]) -> Result<(), CliError> {
    let base = load_problem(cfg)?;
    let mut w = csv_file(&cfg.output_path)?;
    w.write_record([
        "axis",
        "value",
        "r",
        "t",
        "k",
        "d",
        "signal_calls",
        "delta",
        "eps_vn",
        "lambda_hat",
        "hit_fraction",
        "success_prob_analytic",
        "success_prob_bound",
        "postselect_prob",
    ])?;
    for &v in grid {
        let mut c = cfg.clone();
        let params = match axis {
            Axis::Delta => {
                c.delta = v;
                select(&c, &base)?
            }
            Axis::EpsVn => {
                c.eps_vn = v;
                select(&c, &base)?
            }
            Axis::EpsBe => {
                c.eps_be = v;
                select(&c, &base)?
            }
            Axis::T | Axis::R => {
                let p = select(&c, &base)?;
                let (t, r) = match axis {
                    Axis::T => (v, p.r),
                    _ => {
                        if !(v >= 1.0 && v == v.round()) {
                            return Err(CliError::config(format!("r = {v} must be a positive integer")));
                        }
                        (p.t, v as usize)
                    }
                };
                finish_params(&c, QpeParams::manual(t, r, c.delta, base.h.one_norm())?)?
            }
        };
        if !(c.delta > 0.0 && c.delta < 1.0) {
            return Err(CliError::config(format!("delta = {} must lie in (0, 1)", c.delta)));
        }
        let rep = execute(&c, &base, &params)?;
        w.write_record([
            axis_name(axis).to_string(),
            num(v),
            params.r.to_string(),
            num(params.t),
            params.k.to_string(),
            params.d.to_string(),
            params.signal_calls.to_string(),
            num(c.delta),
            num(c.eps_vn),
            num(rep.lambda_hat),
            num(hit_fraction(&rep, base.lambda, c.eps_vn)),
            num(rep.success_prob_analytic),
            num(rep.success_prob_bound),
            num(rep.postselect_prob),
        ])?;
    }
    w.flush()?;
    Ok(())
}
