use num_traits::ToPrimitive;
use serde::Serialize;

use super::certificate::Hermitized;
use super::measurement::PSEUDO_INVERSE_CUTOFF;
use super::operator::DenseOperator;
use super::states::average_state;
use super::OracleConfig;
use crate::error::{PbtError, Result};
use crate::fidelity::{BlockEntry, BlockOperator, PortCoefficients};

/// A formula block next to the oracle eigenvalues matched to it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumRow {
    #[serde(flatten)]
    pub entry: BlockEntry,
    /// The matched oracle eigenvalue farthest from `entry.value`.
    pub oracle: f64,
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumComparison {
    pub rows: Vec<SpectrumRow>,
    pub formula_rank: usize,
    pub oracle_rank: usize,
    /// Largest elementwise deviation of the sorted spectra; infinite when
    /// the ranks differ.
    pub max_deviation: f64,
}

/// Matches the nonzero spectrum of `op` against the formula multiset
/// `{value repeated multiplicity times}`, both sorted ascending.
pub fn compare_spectrum(entries: &[BlockEntry], op: &DenseOperator) -> Result<SpectrumComparison> {
    let oracle = op.nonzero_spectrum(PSEUDO_INVERSE_CUTOFF)?;
    let top = entries.iter().fold(0.0f64, |m, e| m.max(e.value.abs()));
    let mut expanded: Vec<(f64, usize)> = Vec::new();
    for (k, e) in entries.iter().enumerate() {
        if e.value.abs() <= PSEUDO_INVERSE_CUTOFF * top {
            continue;
        }
        let times = e.multiplicity.to_usize().ok_or_else(|| {
            PbtError::InvalidArgument(format!("multiplicity {} too large to expand", e.multiplicity))
        })?;
        expanded.extend(std::iter::repeat((e.value, k)).take(times));
    }
    expanded.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut rows: Vec<SpectrumRow> = entries
        .iter()
        .map(|e| SpectrumRow {
            entry: e.clone(),
            oracle: if e.value.abs() <= PSEUDO_INVERSE_CUTOFF * top { 0.0 } else { f64::NAN },
            deviation: 0.0,
        })
        .collect();
    let ranks_match = expanded.len() == oracle.len();
    let mut max_deviation: f64 = if ranks_match { 0.0 } else { f64::INFINITY };
    if ranks_match {
        for (&(value, k), &lambda) in expanded.iter().zip(&oracle) {
            let dev = (lambda - value).abs();
            let row = &mut rows[k];
            if row.oracle.is_nan() || dev >= row.deviation {
                row.oracle = lambda;
                row.deviation = dev;
            }
            max_deviation = max_deviation.max(dev);
        }
    }
    Ok(SpectrumComparison {
        rows,
        formula_rank: expanded.len(),
        oracle_rank: oracle.len(),
        max_deviation,
    })
}

/// The dense operator whose spectrum [`crate::fidelity::block_spectrum`]
/// tabulates.
pub fn oracle_operator(d: u32, n: u32, operator: BlockOperator, c: Option<&PortCoefficients>) -> Result<DenseOperator> {
    OracleConfig::default().oracle_operator(d, n, operator, c)
}

impl OracleConfig {
    pub fn oracle_operator(
        &self,
        d: u32,
        n: u32,
        operator: BlockOperator,
        c: Option<&PortCoefficients>,
    ) -> Result<DenseOperator> {
        let certificate = |h: Hermitized| h.operator;
        match operator {
            BlockOperator::AverageState => Ok(average_state(&self.pbt_ensemble(d, n)?, false)),
            BlockOperator::X => self.certificate_x(d, n).map(certificate),
            BlockOperator::Y => {
                let c = c.ok_or_else(|| PbtError::InvalidArgument("the Y operator needs port coefficients".into()))?;
                self.certificate_y(d, n, c).map(certificate)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fidelity::block_spectrum;
    use crate::young::{BranchingTable, NumericMode};

    #[test]
    fn average_state_blocks() {
        let table = BranchingTable::new(2, 2, NumericMode::ExactHybrid).unwrap();
        let entries = block_spectrum(&table, BlockOperator::AverageState, None).unwrap();
        let op = oracle_operator(2, 2, BlockOperator::AverageState, None).unwrap();
        let cmp = compare_spectrum(&entries, &op).unwrap();
        assert_eq!(cmp.formula_rank, 4);
        assert_eq!(cmp.oracle_rank, 4);
        assert!(cmp.max_deviation < 1e-12);
        assert!(cmp.rows.iter().all(|r| r.deviation < 1e-12));
    }

    #[test]
    fn rank_mismatch_is_infinite() {
        let table = BranchingTable::new(2, 2, NumericMode::ExactHybrid).unwrap();
        let mut entries = block_spectrum(&table, BlockOperator::X, None).unwrap();
        entries.pop();
        let op = oracle_operator(2, 2, BlockOperator::X, None).unwrap();
        assert!(compare_spectrum(&entries, &op).unwrap().max_deviation.is_infinite());
    }
}
