//! Machine-readable report schemas emitted by the CLI.

use serde::{Deserialize, Serialize};

use crate::bohr::BohrVerdict;
use crate::obs::{Method, ObservabilityReport};
use crate::torus::{CertMethod, Certification, TorusConstruction};

/// `{"observable", "mu_min", "C_obs", "T", "witness", "method"}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ObservabilityJson {
    pub observable: bool,
    pub mu_min: f64,
    #[serde(rename = "C_obs")]
    pub c_obs: Option<f64>,
    #[serde(rename = "T")]
    pub t: Option<f64>,
    /// Complex entries as `[re, im]` pairs.
    pub witness: Option<Vec<[f64; 2]>>,
    pub method: Method,
}

impl From<&ObservabilityReport> for ObservabilityJson {
    fn from(r: &ObservabilityReport) -> Self {
        ObservabilityJson {
            observable: r.observable,
            mu_min: r.mu_min,
            c_obs: r.c_obs,
            t: r.t,
            witness: r
                .witness
                .as_ref()
                .map(|w| w.iter().map(|z| [z.re, z.im]).collect()),
            method: r.method,
        }
    }
}

/// `{"observable", "g", "m_T", "C_obs", "failing_fiber"}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BohrJson {
    pub observable: bool,
    pub g: u64,
    #[serde(rename = "m_T")]
    pub m_t: f64,
    #[serde(rename = "C_obs")]
    pub c_obs: Option<f64>,
    pub failing_fiber: Option<f64>,
}

impl From<&BohrVerdict> for BohrJson {
    fn from(v: &BohrVerdict) -> Self {
        BohrJson {
            observable: v.observable,
            g: v.g,
            m_t: v.m_t,
            c_obs: v.c_obs_estimate,
            failing_fiber: v.failing_fiber.as_ref().map(|f| f.x),
        }
    }
}

/// `{"E_size", "ratio", "mu", "verified_unobservable", "method"}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TorusJson {
    #[serde(rename = "E_size")]
    pub e_size: u64,
    pub ratio: f64,
    pub mu: f64,
    pub verified_unobservable: bool,
    pub method: CertMethod,
}

impl TorusJson {
    pub fn new(c: &TorusConstruction, cert: &Certification) -> Self {
        TorusJson {
            e_size: c.e_size,
            ratio: c.density_ratio(),
            mu: c.eigenvalue,
            verified_unobservable: cert.verified,
            method: cert.method,
        }
    }
}

/// Envelope around every CLI run: inputs, tolerances, and seed are echoed so
/// a report is reproducible from itself.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub inputs: serde_json::Value,
    pub tolerances: serde_json::Value,
    pub seed: u64,
    pub outputs: serde_json::Value,
    /// Excluded from reproducibility comparisons.
    pub wall_time_s: f64,
}

impl Report {
    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}
