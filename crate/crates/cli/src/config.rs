//! Scenario file loading and parameter handling.
//!
//! A scenario file is a single JSON object:
//!
//! ```json
//! {
//!   "kind": "HeterodyneTarget",
//!   "params": {"alpha_lo": 2.0, "beta_t": {"re": 1.0, "im": 0.0}, "r": 0.5},
//!   "cutoff": 32
//! }
//! ```
//!
//! Complex parameters take either a plain number (real) or an `{re, im}`
//! pair. `cutoff` is optional; per-mode automatic sizing is used when it is
//! absent.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64 as C64;
use serde::Deserialize;

use sqradar::scenario::{ScenarioKind, ScenarioParams};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    kind: String,
    #[serde(default)]
    params: BTreeMap<String, ParamValue>,
    #[serde(default)]
    cutoff: Option<usize>,
}

#[derive(Copy, Clone, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Real(f64),
    Complex { re: f64, im: f64 },
}

impl ParamValue {
    fn as_complex(self) -> C64 {
        match self {
            ParamValue::Real(x) => C64::from(x),
            ParamValue::Complex { re, im } => C64::new(re, im),
        }
    }

    fn as_real(self, name: &str) -> Result<f64, String> {
        match self {
            ParamValue::Real(x) => Ok(x),
            ParamValue::Complex { .. } => Err(format!("parameter `{name}` must be real")),
        }
    }
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("cannot parse {}: {e}", path.display()))
    }

    pub fn into_scenario(self) -> Result<(ScenarioKind, ScenarioParams), String> {
        let kind: ScenarioKind = self.kind.parse().map_err(|e| format!("{e}"))?;
        let mut params = ScenarioParams {
            cutoff: self.cutoff,
            ..Default::default()
        };

        for name in kind.required_params() {
            if !self.params.contains_key(*name) {
                return Err(format!("scenario {kind} requires parameter `{name}`"));
            }
        }
        let known: Vec<&str> = kind
            .required_params()
            .iter()
            .chain(kind.optional_params())
            .copied()
            .collect();
        for (name, value) in &self.params {
            if !known.contains(&name.as_str()) {
                return Err(format!(
                    "parameter `{name}` does not apply to scenario {kind}; known: {}",
                    known.join(", ")
                ));
            }
            match name.as_str() {
                "alpha_lo" => params.alpha_lo = value.as_complex(),
                "beta_t" => params.beta_t = value.as_complex(),
                "r" => params.r = value.as_real(name)?,
                "theta_sq" => params.theta_sq = Some(value.as_real(name)?),
                "theta_h" => params.theta_h = value.as_real(name)?,
                "delta" => params.delta = value.as_real(name)?,
                "width" => params.width = value.as_real(name)?,
                "eta" => params.eta = value.as_real(name)?,
                "delta_theta_t" => params.delta_theta_t = value.as_real(name)?,
                "cutoff" => {
                    let v = value.as_real(name)?;
                    params.cutoff = Some(v as usize);
                }
                other => return Err(format!("unhandled parameter `{other}`")),
            }
        }
        Ok((kind, params))
    }
}

/// Parameters a sweep may vary for the given scenario kind.
pub fn sweepable_params(kind: ScenarioKind) -> Vec<&'static str> {
    kind.required_params()
        .iter()
        .chain(kind.optional_params())
        .copied()
        .filter(|p| *p != "cutoff")
        .collect()
}

/// Overwrite one parameter by name; complex amplitudes are swept in
/// magnitude with their phase kept.
pub fn apply_param(params: &mut ScenarioParams, name: &str, value: f64) -> Result<(), String> {
    match name {
        "alpha_lo" => {
            let phase = params.alpha_lo.arg();
            params.alpha_lo = C64::from_polar(value.abs(), phase);
        }
        "beta_t" => {
            let phase = params.beta_t.arg();
            params.beta_t = C64::from_polar(value.abs(), phase);
        }
        "r" => params.r = value,
        "theta_sq" => params.theta_sq = Some(value),
        "theta_h" => params.theta_h = value,
        "delta" => params.delta = value,
        "width" => params.width = value,
        "eta" => params.eta = value,
        "delta_theta_t" => params.delta_theta_t = value,
        other => return Err(format!("unknown sweep parameter `{other}`")),
    }
    Ok(())
}
