//! Run configuration: a flat `key = value` file, overridden by flags.
//!
//! Grammar, one entry per line:
//!
//! ```text
//! line    := blank | comment | entry
//! comment := '#' anything
//! entry   := key '=' value [comment]
//! ```
//!
//! Keys are the snake_case names of [`RunConfig`] fields. Relative paths in
//! a file resolve against the file's directory.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;

use crate::CliError;

/// Keys accepted in a config file.
pub const KEYS: [&str; 13] = [
    "hamiltonian_path",
    "delta",
    "eps_vn",
    "delta_k",
    "shots",
    "seed",
    "simulation_mode",
    "eigenstate",
    "amplitudes",
    "output_path",
    "eps_be",
    "policy",
    "band",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Qet,
    ExactOracle,
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "qet" => Ok(Mode::Qet),
            "exact-oracle" => Ok(Mode::ExactOracle),
            _ => Err(format!("unknown simulation mode '{s}' (qet | exact-oracle)")),
        }
    }
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Qet => "qet",
            Mode::ExactOracle => "exact-oracle",
        }
    }
}

/// Time and pointer-size policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Policy {
    /// `t = 2πk/ε_vN`, pointer sized to cover the spectrum.
    Default,
    /// `t = 2πk/Δ_k`, `r = 1 + ⌈log2(Δ_k/ε_vN)⌉`.
    Literal,
}

impl FromStr for Policy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "default" => Ok(Policy::Default),
            "literal" => Ok(Policy::Literal),
            _ => Err(format!("unknown policy '{s}' (default | literal)")),
        }
    }
}

impl Policy {
    pub fn as_str(self) -> &'static str {
        match self {
            Policy::Default => "default",
            Policy::Literal => "literal",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    /// Eigenvector `k` of `H`, eigenvalues ascending.
    Eigenstate(usize),
    /// One amplitude per line, `re` or `re im`.
    Amplitudes(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub hamiltonian_path: PathBuf,
    pub delta: f64,
    pub eps_vn: f64,
    pub delta_k: Option<f64>,
    pub shots: usize,
    pub seed: u64,
    pub simulation_mode: Mode,
    pub initial_state: InitialState,
    pub output_path: PathBuf,
    /// Error of the available encoding, `0` for exact LCU.
    pub eps_be: f64,
    pub policy: Policy,
    pub band: Option<usize>,
}

/// Values from the command line; `None` leaves the file value in place.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub hamiltonian_path: Option<PathBuf>,
    pub delta: Option<f64>,
    pub eps_vn: Option<f64>,
    pub delta_k: Option<f64>,
    pub shots: Option<usize>,
    pub seed: Option<u64>,
    pub simulation_mode: Option<Mode>,
    pub eigenstate: Option<usize>,
    pub amplitudes: Option<PathBuf>,
    pub output_path: Option<PathBuf>,
    pub eps_be: Option<f64>,
    pub policy: Option<Policy>,
    pub band: Option<usize>,
}

/// Parse `key = value` text into a map, rejecting unknown and repeated keys.
pub fn parse_entries(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::config(format!("line {}: expected key = value", i + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if !KEYS.contains(&k) {
            return Err(CliError::config(format!("line {}: unknown key '{k}'", i + 1)));
        }
        if out.insert(k.to_string(), v.to_string()).is_some() {
            return Err(CliError::config(format!("line {}: duplicate key '{k}'", i + 1)));
        }
    }
    Ok(out)
}

fn parse_value<T: FromStr>(key: &str, v: &str) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    v.parse()
        .map_err(|e| CliError::config(format!("{key}: cannot parse '{v}': {e}")))
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))
}

impl RunConfig {
    /// Merge an optional config file with flag overrides and check ranges.
    pub fn load(file: Option<&Path>, o: Overrides) -> Result<Self, CliError> {
        let (map, base) = match file {
            Some(p) => (
                parse_entries(&read_text(p)?)?,
                p.parent().map(Path::to_path_buf).unwrap_or_default(),
            ),
            None => (BTreeMap::new(), PathBuf::new()),
        };
        let get = |k: &str| map.get(k).map(String::as_str);
        let path = |k: &str| get(k).map(|v| base.join(v));
        let num = |k: &str| -> Result<Option<f64>, CliError> {
            get(k).map(|v| parse_value(k, v)).transpose()
        };

        let hamiltonian_path = o
            .hamiltonian_path
            .or_else(|| path("hamiltonian_path"))
            .ok_or_else(|| CliError::config("hamiltonian_path is required"))?;
        let delta = o
            .delta
            .or(num("delta")?)
            .ok_or_else(|| CliError::config("delta is required"))?;
        let eps_vn = o
            .eps_vn
            .or(num("eps_vn")?)
            .ok_or_else(|| CliError::config("eps_vn is required"))?;
        let delta_k = o.delta_k.or(num("delta_k")?);
        let shots = match o.shots {
            Some(s) => s,
            None => get("shots").map(|v| parse_value("shots", v)).transpose()?.unwrap_or(1000),
        };
        let seed = match o.seed {
            Some(s) => s,
            None => get("seed").map(|v| parse_value("seed", v)).transpose()?.unwrap_or(0),
        };
        let simulation_mode = match o.simulation_mode {
            Some(m) => m,
            None => get("simulation_mode")
                .map(|v| parse_value("simulation_mode", v))
                .transpose()?
                .unwrap_or(Mode::ExactOracle),
        };
        let initial_state = if let Some(k) = o.eigenstate {
            InitialState::Eigenstate(k)
        } else if let Some(p) = o.amplitudes {
            InitialState::Amplitudes(p)
        } else {
            match (get("eigenstate"), path("amplitudes")) {
                (Some(_), Some(_)) => {
                    return Err(CliError::config("give either eigenstate or amplitudes, not both"))
                }
                (Some(v), None) => InitialState::Eigenstate(parse_value("eigenstate", v)?),
                (None, Some(p)) => InitialState::Amplitudes(p),
                (None, None) => InitialState::Eigenstate(0),
            }
        };
        let output_path = o
            .output_path
            .or_else(|| path("output_path"))
            .unwrap_or_else(|| PathBuf::from("results.csv"));
        let eps_be = o.eps_be.or(num("eps_be")?).unwrap_or(0.0);
        let policy = match o.policy {
            Some(p) => p,
            None => get("policy")
                .map(|v| parse_value("policy", v))
                .transpose()?
                .unwrap_or(Policy::Default),
        };
        let band = match o.band {
            Some(b) => Some(b),
            None => get("band").map(|v| parse_value("band", v)).transpose()?,
        };

        let cfg = Self {
            hamiltonian_path,
            delta,
            eps_vn,
            delta_k,
            shots,
            seed,
            simulation_mode,
            initial_state,
            output_path,
            eps_be,
            policy,
            band,
        };
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<(), CliError> {
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(CliError::config(format!("delta = {} must lie in (0, 1)", self.delta)));
        }
        if !(self.eps_vn > 0.0 && self.eps_vn.is_finite()) {
            return Err(CliError::config(format!("eps_vn = {} must be positive", self.eps_vn)));
        }
        if let Some(g) = self.delta_k {
            if !(g > 0.0 && g.is_finite()) {
                return Err(CliError::config(format!("delta_k = {g} must be positive")));
            }
        }
        if !(self.eps_be >= 0.0 && self.eps_be.is_finite()) {
            return Err(CliError::config(format!("eps_be = {} must be nonnegative", self.eps_be)));
        }
        Ok(())
    }
}

/// Amplitude file: `re` or `re im` per line, `#` comments.
pub fn read_amplitudes(path: &Path) -> Result<Vec<Complex64>, CliError> {
    let text = read_text(path)?;
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str| {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::config(format!("{}:{}: bad number '{s}'", path.display(), i + 1)))
        };
        let z = match parts.as_slice() {
            [re] => Complex64::new(num(re)?, 0.0),
            [re, im] => Complex64::new(num(re)?, num(im)?),
            _ => {
                return Err(CliError::config(format!(
                    "{}:{}: expected 're' or 're im'",
                    path.display(),
                    i + 1
                )))
            }
        };
        out.push(z);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_entries() {
        let m = parse_entries("# run\ndelta = 0.25  # slack\n\neps_vn=0.05\n").unwrap();
        assert_eq!(m["delta"], "0.25");
        assert_eq!(m["eps_vn"], "0.05");
        assert!(parse_entries("colour = red").is_err());
        assert!(parse_entries("delta 0.25").is_err());
        assert!(parse_entries("delta = 1\ndelta = 2").is_err());
    }

    #[test]
    fn overrides_win() {
        let o = Overrides {
            hamiltonian_path: Some("h.txt".into()),
            delta: Some(0.3),
            eps_vn: Some(0.1),
            seed: Some(9),
            ..Default::default()
        };
        let c = RunConfig::load(None, o).unwrap();
        assert_eq!(c.seed, 9);
        assert_eq!(c.shots, 1000);
        assert_eq!(c.simulation_mode, Mode::ExactOracle);
        assert_eq!(c.initial_state, InitialState::Eigenstate(0));
    }

    #[test]
    fn range_checks() {
        let o = Overrides {
            hamiltonian_path: Some("h.txt".into()),
            delta: Some(1.5),
            eps_vn: Some(0.1),
            ..Default::default()
        };
        assert!(RunConfig::load(None, o).is_err());
        assert!(RunConfig::load(None, Overrides::default()).is_err());
    }
}
