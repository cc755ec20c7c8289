use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::PortCoefficients;
use crate::young::NumericMode;

/// Which port state a report describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProtocolMode {
    /// `N` maximally entangled pairs.
    Standard,
    /// A fixed symmetric port state given by `{c_mu}`.
    GivenCoefficients,
    /// The fidelity-maximizing symmetric port state.
    Optimized,
}

impl ProtocolMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ProtocolMode::Standard => "standard",
            ProtocolMode::GivenCoefficients => "given-coefficients",
            ProtocolMode::Optimized => "optimized",
        }
    }
}

impl fmt::Display for ProtocolMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProtocolMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "standard" => Ok(ProtocolMode::Standard),
            "given-coefficients" | "given" => Ok(ProtocolMode::GivenCoefficients),
            "optimized" => Ok(ProtocolMode::Optimized),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EigenMethod {
    Dense,
    Lanczos,
    PowerIteration,
}

/// Diagnostics of the principal eigenpair behind an optimized fidelity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenData {
    pub principal_eigenvalue: f64,
    pub second_eigenvalue: Option<f64>,
    pub method: EigenMethod,
    /// Lanczos steps or power iterations; zero for the dense solver.
    pub iterations: usize,
    /// `||M u - lambda u|| / ||u||`.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FidelityReport {
    pub d: u32,
    #[serde(rename = "N")]
    pub n: u32,
    pub mode: ProtocolMode,
    #[serde(rename = "F")]
    pub fidelity: f64,
    #[serde(rename = "p_succ")]
    pub success_probability: f64,
    pub numeric_mode: NumericMode,
    pub coefficients: Option<PortCoefficients>,
    pub eigen: Option<EigenData>,
    /// Top eigenvalue of the incidence matrix was numerically degenerate.
    pub degenerate: bool,
}

impl FidelityReport {
    pub(crate) fn new(d: u32, n: u32, mode: ProtocolMode, fidelity: f64, numeric_mode: NumericMode) -> Self {
        Self {
            d,
            n,
            mode,
            fidelity,
            success_probability: success_from_fidelity(d, n, fidelity),
            numeric_mode,
            coefficients: None,
            eigen: None,
            degenerate: false,
        }
    }
}

/// `p_succ = F d^2 / N`.
pub fn success_from_fidelity(d: u32, n: u32, fidelity: f64) -> f64 {
    fidelity * (d as f64 * d as f64) / n as f64
}

/// `F = N p_succ / d^2`.
pub fn fidelity_from_success(d: u32, n: u32, success: f64) -> f64 {
    success * n as f64 / (d as f64 * d as f64)
}
