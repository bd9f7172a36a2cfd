//! Analytic Clifford+T cost model.
//!
//! Every asymptotic bound is evaluated with unit constants and natural
//! logarithms (except where a formula is stated in `log2`), so the numbers
//! are "model units": meaningful for scaling and comparison only.

use std::f64::consts::E;

use crate::error::{Error, Result};
use crate::vnqpe::pointer_precision_qubits;

/// One labelled contribution to a [`CostReport`].
#[derive(Debug, Clone, PartialEq)]
pub struct CostComponent {
    pub label: &'static str,
    pub gate_count: f64,
    pub depth: f64,
    pub query_count: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostReport {
    pub gate_count: f64,
    pub depth: f64,
    pub qubits: usize,
    pub ancillas: usize,
    pub query_count: f64,
    pub breakdown: Vec<CostComponent>,
    /// Log factors that went negative and were clamped to zero.
    pub clamped: Vec<&'static str>,
}

impl CostReport {
    fn from_parts(
        qubits: usize,
        ancillas: usize,
        breakdown: Vec<CostComponent>,
        clamped: Vec<&'static str>,
    ) -> Self {
        Self {
            gate_count: breakdown.iter().map(|c| c.gate_count).sum(),
            depth: breakdown.iter().map(|c| c.depth).sum(),
            query_count: breakdown.iter().map(|c| c.query_count).sum(),
            qubits,
            ancillas,
            breakdown,
            clamped,
        }
    }

    /// Zero cost on `qubits` qubits.
    pub fn empty(qubits: usize) -> Self {
        Self::from_parts(qubits, 0, Vec::new(), Vec::new())
    }
}

fn component(label: &'static str, gate_count: f64, depth: f64, query_count: f64) -> CostComponent {
    CostComponent {
        label,
        gate_count,
        depth,
        query_count,
    }
}

fn unit(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v < 1.0) {
        return Err(Error::BadRange(format!("{name} = {v} must lie in (0, 1)")));
    }
    Ok(())
}

fn unit_closed(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v <= 1.0) {
        return Err(Error::BadRange(format!("{name} = {v} must lie in (0, 1]")));
    }
    Ok(())
}

fn positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::BadRange(format!("{name} = {v} must be positive")));
    }
    Ok(())
}

/// `max(x, 0)`, recording `label` if the clamp fired.
fn clamp_log(x: f64, label: &'static str, clamped: &mut Vec<&'static str>) -> f64 {
    if x < 0.0 {
        clamped.push(label);
        0.0
    } else {
        x
    }
}

/// LCU encoding of a `|P|`-term Pauli sum on `n` qubits with `n_anc`
/// ancillas: count `|P|(n + ln(1/ε))`, depth `|P|·n·ln(1/ε)·ln(n_anc)/n_anc`.
pub fn lcp_encoding_cost(num_terms: usize, n: usize, n_anc: usize, eps: f64) -> Result<CostReport> {
    if num_terms == 0 || n == 0 {
        return Err(Error::BadRange("need at least one term on one qubit".into()));
    }
    unit_closed("eps", eps)?;
    let min = (num_terms as f64).log2().ceil() as usize;
    let max = if n >= 40 {
        usize::MAX
    } else {
        (1usize << n).saturating_mul(num_terms)
    };
    if n_anc < min || n_anc > max {
        return Err(Error::AncillaRange { n_anc, min, max });
    }
    let p = num_terms as f64;
    let l = (1.0 / eps).ln();
    let spread = if n_anc <= 1 {
        0.0
    } else {
        (n_anc as f64).ln() / n_anc as f64
    };
    Ok(CostReport::from_parts(
        n + n_anc,
        n_anc,
        vec![
            component("pauli strings", p * n as f64, 0.0, 0.0),
            component("coefficient rotations", p * l, p * n as f64 * l * spread, 0.0),
        ],
        Vec::new(),
    ))
}

/// `ln(2/ε_R)` gates per synthesised single-qubit rotation.
pub fn rotation_synthesis_cost(eps_r: f64) -> Result<f64> {
    unit("eps_R", eps_r)?;
    Ok((2.0 / eps_r).ln())
}

/// QET circuit of `d` degree steps: `d·𝒞(BE) + (2d + 1)·ln(2/ε_R)`, one
/// QSP qubit and one qubitization qubit on top of the encoding.
pub fn qet_cost(d: usize, be_cost: &CostReport, eps_r: f64) -> Result<CostReport> {
    if d == 0 {
        return Err(Error::BadRange("QET needs d >= 1".into()));
    }
    let rot = (2 * d + 1) as f64 * rotation_synthesis_cost(eps_r)?;
    let df = d as f64;
    Ok(CostReport::from_parts(
        be_cost.qubits + 2,
        be_cost.ancillas + 2,
        vec![
            component(
                "block-encoding calls",
                df * be_cost.gate_count,
                df * be_cost.depth,
                df,
            ),
            component("rotations", rot, rot, 0.0),
        ],
        be_cost.clamped.clone(),
    ))
}

/// Block-encoding calls for phase estimation:
/// `β/(δΔ_k) + ln(1/ε_BE)/ln(e + (δΔ_k/β)·ln(1/ε_BE))`.
pub fn vnqpe_query_complexity(beta: f64, delta_k: f64, delta: f64, eps_be: f64) -> f64 {
    let l = (1.0 / eps_be).ln();
    beta / (delta * delta_k) + l / (E + delta * delta_k / beta * l).ln()
}

/// [`vnqpe_query_complexity`] as a report split into its two terms.
pub fn thm3_cost(beta: f64, delta_k: f64, delta: f64, eps_be: f64) -> Result<CostReport> {
    positive("beta", beta)?;
    positive("delta_k", delta_k)?;
    unit("delta", delta)?;
    unit_closed("eps_BE", eps_be)?;
    let lead = beta / (delta * delta_k);
    let tail = vnqpe_query_complexity(beta, delta_k, delta, eps_be) - lead;
    Ok(CostReport::from_parts(
        0,
        0,
        vec![
            component("evolution time", 0.0, 0.0, lead),
            component("encoding precision", 0.0, 0.0, tail.max(0.0)),
        ],
        Vec::new(),
    ))
}

/// Phase estimation from controlled `U = e^{iH}`:
/// `(‖H‖/(δε) + log2(Δ_k/ε))·log2(√(‖H‖Δ_k)/(δε))` calls and the same
/// leading factor times `log2(√‖H‖·Δ_k/(δε))²` further 1- and 2-qubit gates,
/// on `6 + r + n` qubits.
pub fn cu_oracle_cost(
    norm_h: f64,
    delta_k: f64,
    delta: f64,
    eps_vn: f64,
    system_qubits: usize,
) -> Result<CostReport> {
    positive("norm_H", norm_h)?;
    positive("delta_k", delta_k)?;
    unit("delta", delta)?;
    positive("eps_vN", eps_vn)?;
    let mut clamped = Vec::new();
    let de = delta * eps_vn;
    let lead = norm_h / de
        + clamp_log((delta_k / eps_vn).log2(), "log2(delta_k/eps_vN)", &mut clamped);
    let call_log = clamp_log(
        ((norm_h * delta_k).sqrt() / de).log2(),
        "log2(sqrt(norm_H delta_k)/(delta eps_vN))",
        &mut clamped,
    );
    let gate_log = clamp_log(
        (norm_h.sqrt() * delta_k / de).log2(),
        "log2(sqrt(norm_H) delta_k/(delta eps_vN))",
        &mut clamped,
    );
    let queries = lead * call_log;
    let gates = lead * gate_log * gate_log;
    let r = pointer_precision_qubits(delta_k, eps_vn);
    Ok(CostReport::from_parts(
        6 + r + system_qubits,
        6,
        vec![
            component("controlled-U calls", 0.0, queries, queries),
            component("1,2-qubit gates", gates, gates, 0.0),
        ],
        clamped,
    ))
}

/// iQFT band `⌈ln(r/δ)⌉`, clamped to `[2, r]` (to `r` when `r < 2`).
pub fn aqft_band(r: usize, delta: f64) -> usize {
    let b = (r as f64 / delta).ln().ceil().max(0.0) as usize;
    b.max(2).min(r)
}

/// Full LCP pipeline: approximate iQFT plus the QET simulation of `H ⊗ p`,
/// with `r = 1 + ⌈log2(Δ_k/ε_vN)⌉`.
///
/// Gate count
/// `r·ln(r/δ) + ln(r/δ)·ln(ln(r/δ)/δ) + |P|·r·(α/(δΔ_k) + r)·(n + r + L)`,
/// depth the same with the last factor replaced by
/// `n·(ln n_anc/n_anc)·(r + L)`, where `L = ln(αΔ_k/(α + δΔ_k r))`.
pub fn lcp_pipeline_cost(
    num_terms: usize,
    n: usize,
    n_anc: usize,
    alpha: f64,
    delta_k: f64,
    delta: f64,
    eps_vn: f64,
) -> Result<CostReport> {
    if num_terms == 0 || n == 0 {
        return Err(Error::BadRange("need at least one term on one qubit".into()));
    }
    positive("alpha", alpha)?;
    positive("delta_k", delta_k)?;
    unit("delta", delta)?;
    positive("eps_vN", eps_vn)?;
    let r = pointer_precision_qubits(delta_k, eps_vn);
    let min = (((1 + r) * num_terms) as f64).log2().ceil() as usize;
    if n_anc < min {
        return Err(Error::AncillaRange {
            n_anc,
            min,
            max: usize::MAX,
        });
    }
    let mut clamped = Vec::new();
    let rf = r as f64;
    let lr = clamp_log((rf / delta).ln(), "ln(r/delta)", &mut clamped);
    let llr = if lr > 0.0 {
        clamp_log((lr / delta).ln(), "ln(ln(r/delta)/delta)", &mut clamped)
    } else {
        0.0
    };
    let aqft = rf * lr + lr * llr;
    let l = clamp_log(
        (alpha * delta_k / (alpha + delta * delta_k * rf)).ln(),
        "ln(alpha delta_k/(alpha + delta delta_k r))",
        &mut clamped,
    );
    let steps = alpha / (delta * delta_k) + rf;
    let p = num_terms as f64;
    let spread = if n_anc <= 1 {
        0.0
    } else {
        (n_anc as f64).ln() / n_anc as f64
    };
    let qet_gates = p * rf * steps * (n as f64 + rf + l);
    let qet_depth = p * rf * n as f64 * steps * spread * (rf + l);
    let b = aqft_band(r, delta);
    Ok(CostReport::from_parts(
        r + n + n_anc + 2,
        (3 * b).saturating_sub(4).max(2),
        vec![
            component("approximate iQFT", aqft, aqft, 0.0),
            component("QET simulation", qet_gates, qet_depth, steps),
        ],
        clamped,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encoding_examples() {
        let c = lcp_encoding_cost(4, 3, 2, 1e-3).unwrap();
        assert!((c.gate_count - 4.0 * (3.0 + 1e3f64.ln())).abs() < 1e-12);
        assert!((lcp_encoding_cost(4, 3, 2, 1.0).unwrap().gate_count - 12.0).abs() < 1e-12);
        let twice = lcp_encoding_cost(8, 3, 3, 1e-3).unwrap();
        assert!((twice.gate_count - 2.0 * c.gate_count).abs() < 1e-12);
        assert!(matches!(
            lcp_encoding_cost(4, 3, 1, 1e-3),
            Err(Error::AncillaRange { min: 2, .. })
        ));
        assert!(lcp_encoding_cost(4, 1, 9, 1e-3).is_err());
    }

    #[test]
    fn rotation_examples() {
        assert!((rotation_synthesis_cost(2.0 / E).unwrap() - 1.0).abs() < 1e-15);
        assert!((rotation_synthesis_cost(1e-10).unwrap() - 23.7189981105004).abs() < 1e-9);
        let a = rotation_synthesis_cost(1e-4).unwrap();
        let b = rotation_synthesis_cost(5e-5).unwrap();
        assert!((b - a - 2f64.ln()).abs() < 1e-12);
        assert!(rotation_synthesis_cost(1.0).is_err());
    }

    #[test]
    fn qet_examples() {
        let c = qet_cost(1, &CostReport::empty(0), 2.0 / E).unwrap();
        assert!((c.gate_count - 3.0).abs() < 1e-12);
        assert_eq!(c.qubits, 2);
        assert!(qet_cost(0, &CostReport::empty(0), 0.1).is_err());
    }

    #[test]
    fn query_examples() {
        let q = vnqpe_query_complexity(1.0, 0.5, 0.25, 1e-3);
        let l = 1e3f64.ln();
        assert!((q - (8.0 + l / (E + 0.125 * l).ln())).abs() < 1e-12);
        assert!((q - 13.414).abs() < 1e-3);
        assert!((vnqpe_query_complexity(1.0, 0.5, 0.25, 1.0) - 8.0).abs() < 1e-15);
        let c = thm3_cost(1.0, 0.5, 0.25, 1e-3).unwrap();
        assert!((c.query_count - q).abs() < 1e-12);
    }

    #[test]
    fn band_examples() {
        assert_eq!(aqft_band(4, 0.25), 3);
        assert_eq!(aqft_band(6, 1e-9), 6);
        assert_eq!(aqft_band(5, 0.99), 2);
    }

    #[test]
    fn pipeline_example() {
        let c = lcp_pipeline_cost(2, 1, 3, 0.75, 1.0, 0.25, 0.25).unwrap();
        assert_eq!(c.qubits, 3 + 1 + 3 + 2);
        assert!(c.breakdown.iter().all(|p| p.gate_count > 0.0 && p.depth > 0.0));
        assert!(c.clamped.is_empty() || c.clamped.iter().all(|s| s.starts_with("ln(alpha")));
    }

    #[test]
    fn cu_oracle_qubits() {
        let c = cu_oracle_cost(1.0, 0.5, 0.2, 0.05, 3).unwrap();
        assert_eq!(c.qubits, 6 + 5 + 3);
        assert!(c.query_count > 0.0 && c.gate_count > 0.0);
    }
}
