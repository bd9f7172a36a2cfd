//! Parameter selection: time, pointer size, slack `k`, and the error budget.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::pauli::MAX_POINTER_QUBITS;
use crate::qet::degree_bound;

/// What sets the evolution time `t = 2πk/scale`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeScale {
    /// `scale = ε_vN`: `k` bins of width `2π/t` span exactly the target
    /// precision, so the Brassard bound speaks about `ε_vN` directly.
    Precision,
    /// `scale = Δ_k`: only enough time to separate neighbouring eigenvalues.
    Gap,
}

/// How many pointer qubits to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointerSizing {
    /// Enough bins that every outcome `λt/2π ± k` with `|λ| ≤ β` fits in
    /// `[−2^{r−1}, 2^{r−1})` without aliasing; never fewer than the formula.
    CoverSpectrum,
    /// `r = 1 + ⌈log2(Δ_k/ε_vN)⌉` exactly.
    Formula,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParameterPolicy {
    pub time: TimeScale,
    pub pointer: PointerSizing,
}

impl Default for ParameterPolicy {
    fn default() -> Self {
        Self {
            time: TimeScale::Precision,
            pointer: PointerSizing::CoverSpectrum,
        }
    }
}

impl ParameterPolicy {
    /// `t = 2πk/Δ_k`, `r = 1 + ⌈log2(Δ_k/ε_vN)⌉`.
    pub fn literal() -> Self {
        Self {
            time: TimeScale::Gap,
            pointer: PointerSizing::Formula,
        }
    }
}

/// `(ε_QET, ε_BE, ε_R, ε_HS)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorBudget {
    pub eps_qet: f64,
    pub eps_be: f64,
    pub eps_r: f64,
    pub eps_hs: f64,
}

/// Solved parameter bundle for one phase-estimation run.
#[derive(Debug, Clone, PartialEq)]
pub struct QpeParams {
    pub r: usize,
    /// `1 + ⌈log2(Δ_k/ε_vN)⌉`, kept for reference whatever the policy.
    pub r_precision: usize,
    pub t: f64,
    /// `β_c·t` with `β_c = β(1 − 2^{−r})` the norm of the coupled sum.
    pub t_prime: f64,
    /// `max(t', ln(1/ε_QET))`, the argument handed to the degree bound.
    pub degree_time: f64,
    pub k: usize,
    pub truncation_order: usize,
    /// Laurent degree `2R̃ + 1`.
    pub d: usize,
    pub signal_calls: usize,
    pub delta: f64,
    pub eps_vn: f64,
    pub delta_k: f64,
    pub beta: f64,
    pub beta_coupled: f64,
    pub budget: ErrorBudget,
    /// Encoding error actually available, `0` for exact encodings.
    pub encoding_error: f64,
    /// `δ̃ = 6·4^r·(calls + 1)·encoding_error`.
    pub delta_floor: f64,
    /// iQFT band `b`; `b = r` is exact.
    pub band: usize,
    pub policy: ParameterPolicy,
}

/// `k = ⌈3/(2δ)⌉ + 1`.
pub fn slack_for_delta(delta: f64) -> usize {
    (3.0 / (2.0 * delta)).ceil() as usize + 1
}

/// `1 + ⌈log2(Δ_k/ε_vN)⌉`, at least 1.
pub fn pointer_precision_qubits(delta_k: f64, eps_vn: f64) -> usize {
    let l = (delta_k / eps_vn).log2();
    // guard against round-off right at powers of two
    let l = if (l - l.round()).abs() < 1e-12 { l.round() } else { l };
    1 + l.ceil().max(0.0) as usize
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v < 1.0) {
        return Err(Error::BadRange(format!("{name} = {v} must lie in (0, 1)")));
    }
    Ok(())
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::BadRange(format!("{name} = {v} must be positive")));
    }
    Ok(())
}

impl QpeParams {
    /// Fill the budget and degree for a given `(t, r, k)`.
    #[allow(clippy::too_many_arguments)]
    fn complete(
        r: usize,
        r_precision: usize,
        t: f64,
        k: usize,
        delta: f64,
        eps_vn: f64,
        delta_k: f64,
        beta: f64,
        encoding_error: f64,
        policy: ParameterPolicy,
    ) -> Result<Self> {
        if r == 0 || r > MAX_POINTER_QUBITS {
            return Err(Error::TooLarge {
                what: "pointer qubits",
                value: r,
                limit: MAX_POINTER_QUBITS,
            });
        }
        let four_r = 4f64.powi(r as i32);
        let eps_hs = delta / (3.0 * four_r);
        let eps_qet = eps_hs / 3.0;
        let beta_coupled = beta * (1.0 - 0.5f64.powi(r as i32));
        let t_prime = beta_coupled * t;
        let degree_time = t_prime.max((1.0 / eps_qet).ln());
        let truncation_order = degree_bound(degree_time, eps_qet);
        let d = 2 * truncation_order + 1;
        let signal_calls = 2 * d;
        let eps_r = eps_hs / (3.0 * (signal_calls as f64 + 1.0));
        let eps_be = eps_hs / (3.0 * signal_calls as f64 * beta);
        let delta_floor = 6.0 * four_r * (signal_calls as f64 + 1.0) * encoding_error;
        if delta <= delta_floor {
            return Err(Error::InfeasibleDelta {
                delta,
                floor: delta_floor,
            });
        }
        Ok(Self {
            r,
            r_precision,
            t,
            t_prime,
            degree_time,
            k,
            truncation_order,
            d,
            signal_calls,
            delta,
            eps_vn,
            delta_k,
            beta,
            beta_coupled,
            budget: ErrorBudget {
                eps_qet,
                eps_be,
                eps_r,
                eps_hs,
            },
            encoding_error,
            delta_floor,
            band: r,
            policy,
        })
    }

    /// Explicit time and pointer size; `ε_vN` becomes the resolution `2πk/t`.
    pub fn manual(t: f64, r: usize, delta: f64, beta: f64) -> Result<Self> {
        check_positive("t", t)?;
        check_unit("delta", delta)?;
        check_positive("beta", beta)?;
        let k = slack_for_delta(delta);
        let eps_vn = 2.0 * PI * k as f64 / t;
        Self::complete(r, r, t, k, delta, eps_vn, eps_vn, beta, 0.0, ParameterPolicy::default())
    }

    /// Same parameters with an approximate iQFT of band `b`.
    pub fn with_band(mut self, band: usize) -> Result<Self> {
        if band == 0 || band > self.r {
            return Err(Error::BadBand { band, r: self.r });
        }
        self.band = band;
        Ok(self)
    }

    /// Check the bundle's invariants.
    pub fn validate(&self) -> Result<()> {
        if self.r < self.r_precision {
            return Err(Error::BadRange(format!(
                "r = {} below the precision requirement {}",
                self.r, self.r_precision
            )));
        }
        if self.k != slack_for_delta(self.delta) {
            return Err(Error::BadRange("k does not match delta".into()));
        }
        let b = self.budget;
        for (name, v) in [
            ("eps_QET", b.eps_qet),
            ("eps_BE", b.eps_be),
            ("eps_R", b.eps_r),
            ("eps_HS", b.eps_hs),
        ] {
            check_unit(name, v)?;
        }
        Ok(())
    }
}

/// Phase-estimation parameters under the default policy, exact encoding.
pub fn select_parameters(delta_k: f64, eps_vn: f64, delta: f64, beta: f64) -> Result<QpeParams> {
    select_parameters_with(delta_k, eps_vn, delta, beta, 0.0, ParameterPolicy::default())
}

/// Phase-estimation parameters with an explicit policy and available encoding
/// error (which sets the `δ̃` floor).
pub fn select_parameters_with(
    delta_k: f64,
    eps_vn: f64,
    delta: f64,
    beta: f64,
    encoding_error: f64,
    policy: ParameterPolicy,
) -> Result<QpeParams> {
    check_positive("delta_k", delta_k)?;
    check_positive("eps_vN", eps_vn)?;
    check_unit("delta", delta)?;
    check_positive("beta", beta)?;
    if !(encoding_error >= 0.0 && encoding_error.is_finite()) {
        return Err(Error::BadRange(format!(
            "encoding error {encoding_error} must be nonnegative"
        )));
    }
    let k = slack_for_delta(delta);
    let scale = match policy.time {
        TimeScale::Precision => eps_vn,
        TimeScale::Gap => delta_k,
    };
    let t = 2.0 * PI * k as f64 / scale;
    let r_precision = pointer_precision_qubits(delta_k, eps_vn);
    let r = match policy.pointer {
        PointerSizing::Formula => r_precision,
        PointerSizing::CoverSpectrum => {
            let reach = beta * t / (2.0 * PI) + k as f64 + 1.0;
            r_precision.max(1 + reach.log2().ceil() as usize)
        }
    };
    QpeParams::complete(
        r,
        r_precision,
        t,
        k,
        delta,
        eps_vn,
        delta_k,
        beta,
        encoding_error,
        policy,
    )
}
