//! Closed-form entanglement fidelities of port-based teleportation and the
//! block coefficients of the average state and of the dual certificates.

mod coefficients;
pub mod eigen;
mod formulas;
mod optimize;
mod report;

use rayon::prelude::*;

pub use coefficients::{partition_key, PortCoefficients, NORMALIZATION_TOLERANCE};
pub use eigen::EigenOptions;
pub use formulas::{
    avg_state_eigenvalue, avg_state_eigenvalue_exact, block_rank, block_spectrum, block_trace,
    fidelity_given_coefficients, fidelity_standard, given_from_table, opt_block_coefficient,
    pgm_block_coefficient, standard_from_table, BlockEntry, BlockOperator,
};
pub use optimize::{optimize_coefficients, optimize_from_table, IncidenceMatrix};
pub use report::{
    fidelity_from_success, success_from_fidelity, EigenData, EigenMethod, FidelityReport, ProtocolMode,
};

use crate::error::{PbtError, Result};
use crate::young::{BranchingTable, DEFAULT_EXACT_THRESHOLD};

/// Environment variable overriding the exact-mode threshold.
pub const EXACT_THRESHOLD_ENV: &str = "PBT_EXACT_THRESHOLD";

#[derive(Clone, Debug)]
pub struct Settings {
    /// Largest `N` evaluated with exact integer dimensions.
    pub exact_threshold: u32,
    pub eigen: EigenOptions,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            exact_threshold: DEFAULT_EXACT_THRESHOLD,
            eigen: EigenOptions::default(),
        }
    }
}

impl Settings {
    /// Defaults, with `PBT_EXACT_THRESHOLD` applied when set.
    pub fn from_env() -> Result<Self> {
        let mut settings = Self::default();
        if let Ok(raw) = std::env::var(EXACT_THRESHOLD_ENV) {
            settings.exact_threshold = raw.trim().parse().map_err(|_| {
                PbtError::InvalidArgument(format!("{EXACT_THRESHOLD_ENV} must be a nonnegative integer, got `{raw}`"))
            })?;
        }
        Ok(settings)
    }

    /// One report per `n`, in the order given. Each `n` is evaluated
    /// independently, so the output does not depend on scheduling.
    pub fn scan(&self, d: u32, ns: &[u32], mode: ProtocolMode) -> Result<Vec<FidelityReport>> {
        if ns.is_empty() {
            return Err(PbtError::InvalidArgument("empty range of N".into()));
        }
        if mode == ProtocolMode::GivenCoefficients {
            return Err(PbtError::InvalidArgument(
                "scan supports the standard and optimized modes".into(),
            ));
        }
        ns.par_iter()
            .map(|&n| {
                let table = BranchingTable::with_threshold(d, n, self.exact_threshold)?;
                match mode {
                    ProtocolMode::Optimized => optimize_from_table(&table, &self.eigen),
                    _ => Ok(standard_from_table(&table)),
                }
            })
            .collect()
    }
}

/// See [`Settings::scan`]; uses default settings.
pub fn scan(d: u32, ns: &[u32], mode: ProtocolMode) -> Result<Vec<FidelityReport>> {
    Settings::default().scan(d, ns, mode)
}

/// Leading-order large-`N` behaviour of the standard protocol,
/// `1 - (d^2 - 1) / (4N)`.
pub fn asymptote_standard(d: u32, n: u32) -> f64 {
    let d = d as f64;
    1.0 - (d * d - 1.0) / (4.0 * n as f64)
}

/// Lower bound `max(0, 1 - (d^2 - 1) / N)` on the standard fidelity.
pub fn lower_bound_standard(d: u32, n: u32) -> f64 {
    let d = d as f64;
    (1.0 - (d * d - 1.0) / n as f64).max(0.0)
}
