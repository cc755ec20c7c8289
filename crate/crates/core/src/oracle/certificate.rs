use serde::Serialize;

use super::measurement::{pretty_good_measurement, raw_success};
use super::operator::DenseOperator;
use super::states::Ensemble;
use super::OracleConfig;
use crate::error::{PbtError, Result};
use crate::fidelity::PortCoefficients;

/// Default tolerance of [`certify_optimality`].
pub const CERTIFICATE_TOLERANCE: f64 = 1e-8;

/// An operator symmetrized as `(M + M^dagger) / 2`, with the defect before.
#[derive(Clone, Debug)]
pub struct Hermitized {
    pub operator: DenseOperator,
    pub defect: f64,
}

/// Outcome of checking a dual point `K` against a measurement.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CertificateReport {
    /// `tr K - sum_i p_i tr(rho_i E_i)`.
    pub gap: f64,
    /// `min_i lambda_min(K - p_i rho_i)`.
    pub feasibility: f64,
    pub tolerance: f64,
    /// `feasibility >= -tolerance` and `|gap| <= tolerance`.
    pub certified: bool,
}

/// `sum_i tau_i E_i`, Hermitized. With `tau_i = rho_i` and the PGM of the
/// `rho_i` this is `X`; with `tau_i = eta_i` it is `Y`.
pub fn pgm_certificate(states: &[DenseOperator], povm: &[DenseOperator]) -> Result<Hermitized> {
    if states.is_empty() || states.len() != povm.len() {
        return Err(PbtError::InvalidArgument(format!(
            "{} states with {} POVM elements",
            states.len(),
            povm.len()
        )));
    }
    let mut sum = states[0].matrix() * povm[0].matrix();
    for (s, e) in states.iter().zip(povm).skip(1) {
        sum += s.matrix() * e.matrix();
    }
    let (operator, defect) = DenseOperator::new(sum, states[0].factor_dims().to_vec())?.hermitized("certificate")?;
    Ok(Hermitized { operator, defect })
}

/// `X = sum_i rho_i rhobar^{-1/2} rho_i rhobar^{-1/2}`.
pub fn certificate_x(d: u32, n: u32) -> Result<Hermitized> {
    OracleConfig::default().certificate_x(d, n)
}

/// `Y = sum_i eta_i rhobar^{-1/2} rho_i rhobar^{-1/2}`.
pub fn certificate_y(d: u32, n: u32, c: &PortCoefficients) -> Result<Hermitized> {
    OracleConfig::default().certificate_y(d, n, c)
}

impl OracleConfig {
    pub fn certificate_x(&self, d: u32, n: u32) -> Result<Hermitized> {
        let e = self.pbt_ensemble(d, n)?;
        let povm = pretty_good_measurement(&e)?;
        pgm_certificate(e.states(), &povm.elements)
    }

    pub fn certificate_y(&self, d: u32, n: u32, c: &PortCoefficients) -> Result<Hermitized> {
        let povm = pretty_good_measurement(&self.pbt_ensemble(d, n)?)?;
        let eta = self.eta_ensemble(d, n, c)?;
        pgm_certificate(eta.states(), &povm.elements)
    }
}

/// Weak-duality check of `povm` on `e` against the dual point `k`, with the
/// default tolerance.
pub fn certify_optimality(e: &Ensemble, povm: &[DenseOperator], k: &DenseOperator) -> Result<CertificateReport> {
    certify_optimality_with(e, povm, k, CERTIFICATE_TOLERANCE)
}

pub fn certify_optimality_with(
    e: &Ensemble,
    povm: &[DenseOperator],
    k: &DenseOperator,
    tolerance: f64,
) -> Result<CertificateReport> {
    if !k.is_hermitian() {
        return Err(PbtError::InvalidArgument("dual point is not Hermitian".into()));
    }
    if k.factor_dims() != e.factor_dims() || povm.len() != e.len() {
        return Err(PbtError::InvalidArgument("dual point, POVM and ensemble do not match".into()));
    }
    let gap = k.trace().re - raw_success(e, povm);
    let mut feasibility = f64::INFINITY;
    for (s, &p) in e.states().iter().zip(e.probs()) {
        let mut diff = k.clone();
        diff.add_scaled(s, -p);
        feasibility = feasibility.min(diff.lambda_min()?);
    }
    Ok(CertificateReport {
        gap,
        feasibility,
        tolerance,
        certified: feasibility >= -tolerance && gap.abs() <= tolerance,
    })
}

/// `k / scale`, e.g. `X / N` as a dual point for uniform priors.
pub fn scaled(k: &DenseOperator, scale: f64) -> DenseOperator {
    let mut out = DenseOperator::zeros(k.factor_dims().to_vec());
    out.add_scaled(k, 1.0 / scale);
    out
}
