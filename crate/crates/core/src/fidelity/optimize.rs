use twofloat::TwoFloat;

use super::eigen::{principal_eigenpair, EigenOptions, SymmetricOperator};
use super::{EigenData, FidelityReport, PortCoefficients, ProtocolMode, Settings};
use crate::error::{PbtError, Result};
use crate::young::{BranchingTable, NumericMode};

/// The box-addition incidence matrix `M = B B^T` over `mu ⊢_d N`, where
/// `B[mu][alpha] = 1` iff `mu = alpha + box`. `M[mu][nu]` counts the common
/// predecessors of `mu` and `nu`.
pub struct IncidenceMatrix<'a> {
    table: &'a BranchingTable,
}

impl<'a> IncidenceMatrix<'a> {
    pub fn new(table: &'a BranchingTable) -> Self {
        Self { table }
    }
}

impl SymmetricOperator for IncidenceMatrix<'_> {
    fn dim(&self) -> usize {
        self.table.mus().len()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        // y = B (B^T x), both products in canonical order.
        let alpha_sums: Vec<f64> = (0..self.table.alphas().len())
            .map(|a| self.table.successors(a).iter().map(|&m| x[m]).sum())
            .collect();
        for (m, out) in y.iter_mut().enumerate() {
            *out = self.table.predecessors(m).iter().map(|&a| alpha_sums[a]).sum();
        }
    }
}

/// Maximizes the fidelity over symmetric port states.
///
/// With `u_mu = sqrt(c_mu d_mu m_mu / d^N)` the objective
/// `sum_alpha (sum_{mu = alpha + box} u_mu)^2` is `u^T M u` under
/// `|u| = 1`, so `F* = lambda_max(M) / d^2` and the optimal coefficients come
/// from the nonnegative principal eigenvector.
pub fn optimize_from_table(table: &BranchingTable, options: &EigenOptions) -> Result<FidelityReport> {
    if !table.is_connected() {
        return Err(PbtError::Numerical(
            "incidence matrix is reducible; no Perron vector".into(),
        ));
    }
    let pair = principal_eigenpair(&IncidenceMatrix::new(table), options)?;
    let coefficients: Vec<f64> = pair
        .vector
        .iter()
        .zip(table.mus())
        .map(|(&u, block)| {
            if u == 0.0 {
                return 0.0;
            }
            match table.mode() {
                NumericMode::ExactHybrid => (TwoFloat::from(u) * u / block.weight).into(),
                NumericMode::LogDomain => (2.0 * u.ln() - block.log_weight).exp(),
            }
        })
        .collect();
    let d2 = (table.d() as f64).powi(2);
    let mut report = FidelityReport::new(
        table.d(),
        table.n(),
        ProtocolMode::Optimized,
        pair.value / d2,
        table.mode(),
    );
    report.coefficients = Some(PortCoefficients::from_table_values(table, coefficients));
    report.eigen = Some(EigenData {
        principal_eigenvalue: pair.value,
        second_eigenvalue: pair.second,
        method: pair.method,
        iterations: pair.iterations,
        residual: pair.residual,
    });
    report.degenerate = pair.degenerate;
    Ok(report)
}

/// Optimal fidelity `F*_d(N)` and the maximizing `{c_mu}`.
pub fn optimize_coefficients(d: u32, n: u32) -> Result<FidelityReport> {
    Settings::default().optimize_coefficients(d, n)
}

impl Settings {
    pub fn optimize_coefficients(&self, d: u32, n: u32) -> Result<FidelityReport> {
        let table = BranchingTable::with_threshold(d, n, self.exact_threshold)?;
        optimize_from_table(&table, &self.eigen)
    }
}
