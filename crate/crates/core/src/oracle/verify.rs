use serde::Serialize;

use super::certificate::{certify_optimality, pgm_certificate, scaled};
use super::channel::PortState;
use super::measurement::{pretty_good_measurement, success_probability};
use super::spectrum::compare_spectrum;
use super::OracleConfig;
use crate::error::Result;
use crate::fidelity::{
    block_spectrum, given_from_table, optimize_from_table, standard_from_table, BlockOperator, FidelityReport,
    PortCoefficients, ProtocolMode, Settings,
};
use crate::young::BranchingTable;

/// Tolerance of the formula-vs-oracle fidelity comparison.
pub const FIDELITY_TOLERANCE: f64 = 1e-9;
/// Tolerance of spectrum matching.
pub const SPECTRUM_TOLERANCE: f64 = 1e-9;
/// Tolerance of `tr K / N` against the PGM success probability.
pub const TRACE_TOLERANCE: f64 = 1e-10;
/// Tolerance of `lambda_min(K - rho_i)`.
pub const FEASIBILITY_TOLERANCE: f64 = 1e-9;
/// Tolerance of the duality gap.
pub const GAP_TOLERANCE: f64 = 1e-8;

/// One named comparison; `value` is a nonnegative violation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn new(name: &'static str, value: f64, tolerance: f64) -> Self {
        Self {
            name,
            value,
            tolerance,
            passed: value <= tolerance,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verification {
    pub d: u32,
    #[serde(rename = "N")]
    pub n: u32,
    pub mode: ProtocolMode,
    /// Formula fidelity being verified.
    #[serde(rename = "F")]
    pub fidelity: f64,
    /// Success probability measured on the oracle.
    pub oracle_p_succ: f64,
    pub checks: Vec<Check>,
    pub passed: bool,
    /// Worst certificate slack, `min(lambda_min(K - p_i rho_i), -|gap|)`.
    pub certificate_margin: f64,
}

impl Verification {
    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }
}

impl OracleConfig {
    /// Runs every oracle check for one `(d, N)`: fidelity against the PGM
    /// success probability, spectra of the average state and of the
    /// certificate, the dual certificate itself, and the channel simulation
    /// when it fits under `channel_cap`.
    ///
    /// `c` is required for [`ProtocolMode::GivenCoefficients`] and ignored
    /// otherwise.
    pub fn verify(
        &self,
        settings: &Settings,
        d: u32,
        n: u32,
        mode: ProtocolMode,
        c: Option<&PortCoefficients>,
    ) -> Result<Verification> {
        self.port_dim(d, n)?;
        let table = BranchingTable::with_threshold(d, n, settings.exact_threshold)?;
        let report: FidelityReport = match mode {
            ProtocolMode::Standard => standard_from_table(&table),
            ProtocolMode::Optimized => optimize_from_table(&table, &settings.eigen)?,
            ProtocolMode::GivenCoefficients => {
                let c = c.ok_or_else(|| {
                    crate::error::PbtError::InvalidArgument("given-coefficients mode needs coefficients".into())
                })?;
                given_from_table(&table, c)?
            }
        };
        let coefficients = report.coefficients.clone().or_else(|| c.cloned());
        let coefficients = match mode {
            ProtocolMode::Standard => None,
            _ => coefficients,
        };

        let rho = self.pbt_ensemble(d, n)?;
        let povm = pretty_good_measurement(&rho)?;
        let nf = n as f64;
        let d2 = (d as f64).powi(2);
        let mut checks = Vec::new();

        let avg = super::states::average_state(&rho, false);
        let avg_entries = block_spectrum(&table, BlockOperator::AverageState, None)?;
        checks.push(Check::new(
            "average_state_spectrum",
            compare_spectrum(&avg_entries, &avg)?.max_deviation,
            SPECTRUM_TOLERANCE,
        ));

        let (ensemble, operator, port) = match &coefficients {
            None => (rho.clone(), BlockOperator::X, PortState::Standard),
            Some(c) => (self.eta_ensemble(d, n, c)?, BlockOperator::Y, PortState::Coefficients(c)),
        };
        let p_succ = success_probability(&ensemble, &povm.elements)?;
        checks.push(Check::new(
            "fidelity_vs_oracle_pgm",
            (report.fidelity - nf / d2 * p_succ).abs(),
            FIDELITY_TOLERANCE,
        ));

        let k = pgm_certificate(ensemble.states(), &povm.elements)?;
        let entries = block_spectrum(&table, operator, coefficients.as_ref())?;
        let (spectrum_name, trace_name, feas_name, gap_name) = match operator {
            BlockOperator::Y => ("y_spectrum", "y_trace", "y_feasibility", "y_duality_gap"),
            _ => ("x_spectrum", "x_trace", "x_feasibility", "x_duality_gap"),
        };
        checks.push(Check::new(
            spectrum_name,
            compare_spectrum(&entries, &k.operator)?.max_deviation,
            SPECTRUM_TOLERANCE,
        ));
        checks.push(Check::new(
            trace_name,
            (k.operator.trace().re / nf - p_succ).abs(),
            TRACE_TOLERANCE,
        ));
        let cert = certify_optimality(&ensemble, &povm.elements, &scaled(&k.operator, nf))?;
        checks.push(Check::new(feas_name, (-cert.feasibility).max(0.0), FEASIBILITY_TOLERANCE));
        checks.push(Check::new(gap_name, cert.gap.abs(), GAP_TOLERANCE));

        if self.channel_dim(d, n).is_ok() {
            let direct = self.teleportation_fidelity_direct(d, n, port, &povm.elements)?;
            checks.push(Check::new(
                "direct_channel_fidelity",
                (direct - report.fidelity).abs(),
                FIDELITY_TOLERANCE,
            ));
        }

        let passed = checks.iter().all(|c| c.passed);
        Ok(Verification {
            d,
            n,
            mode,
            fidelity: report.fidelity,
            oracle_p_succ: p_succ,
            checks,
            passed,
            certificate_margin: cert.feasibility.min(-cert.gap.abs()),
        })
    }
}

/// [`OracleConfig::verify`] with default caps and settings.
pub fn verify(d: u32, n: u32, mode: ProtocolMode, c: Option<&PortCoefficients>) -> Result<Verification> {
    OracleConfig::default().verify(&Settings::default(), d, n, mode, c)
}
