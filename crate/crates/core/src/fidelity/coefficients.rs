use std::collections::HashMap;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use twofloat::TwoFloat;

use crate::error::{PbtError, Result};
use crate::young::{BranchingTable, Partition};

/// Relative tolerance on `sum c_mu d_mu m_mu = d^N`.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;

/// Block weights `{c_mu}` of a symmetric port state: the steering operator is
/// `O = sum_mu sqrt(c_mu) P_mu`.
///
/// Entries cover every `mu ⊢_d N` in canonical order; partitions absent from
/// the input are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct PortCoefficients {
    d: u32,
    n: u32,
    entries: Vec<(Partition, f64)>,
}

impl PortCoefficients {
    /// Validates nonnegativity and the normalization against `table`.
    pub fn new(table: &BranchingTable, entries: impl IntoIterator<Item = (Partition, f64)>) -> Result<Self> {
        let coefficients = Self::collect(table, entries)?;
        let residual = coefficients.constraint_residual(table);
        if residual.abs() > NORMALIZATION_TOLERANCE {
            return Err(PbtError::InvalidCoefficients {
                reason: format!(
                    "sum of c_mu d_mu m_mu must equal d^N = {}^{}",
                    table.d(),
                    table.n()
                ),
                residual,
            });
        }
        Ok(coefficients)
    }

    /// Like [`Self::new`] but rescales the entries onto the constraint surface.
    pub fn renormalized(table: &BranchingTable, entries: impl IntoIterator<Item = (Partition, f64)>) -> Result<Self> {
        let mut coefficients = Self::collect(table, entries)?;
        let total = coefficients.weighted_sum(table);
        if total <= 0.0 || !total.is_finite() {
            return Err(PbtError::InvalidCoefficients {
                reason: "cannot renormalize: all weight is zero".into(),
                residual: -1.0,
            });
        }
        for (_, c) in &mut coefficients.entries {
            *c /= total;
        }
        Ok(coefficients)
    }

    /// All `c_mu = 1`: the maximally entangled port state.
    pub fn uniform(table: &BranchingTable) -> Self {
        Self {
            d: table.d(),
            n: table.n(),
            entries: table.mus().iter().map(|b| (b.partition.clone(), 1.0)).collect(),
        }
    }

    /// Builds from values already on the constraint surface, in table order.
    pub(crate) fn from_table_values(table: &BranchingTable, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), table.mus().len());
        Self {
            d: table.d(),
            n: table.n(),
            entries: table
                .mus()
                .iter()
                .map(|b| b.partition.clone())
                .zip(values)
                .collect(),
        }
    }

    fn collect(table: &BranchingTable, entries: impl IntoIterator<Item = (Partition, f64)>) -> Result<Self> {
        let mut given: HashMap<Partition, f64> = HashMap::new();
        for (mu, c) in entries {
            if table.mu_index(&mu).is_none() {
                return Err(PbtError::InvalidCoefficients {
                    reason: format!(
                        "{mu} is not a diagram with {} boxes and at most {} rows",
                        table.n(),
                        table.d()
                    ),
                    residual: f64::NAN,
                });
            }
            if c < 0.0 || !c.is_finite() {
                return Err(PbtError::InvalidCoefficients {
                    reason: format!("c{mu} = {c} is not a finite nonnegative number"),
                    residual: f64::NAN,
                });
            }
            if given.insert(mu.clone(), c).is_some() {
                return Err(PbtError::InvalidCoefficients {
                    reason: format!("{mu} given twice"),
                    residual: f64::NAN,
                });
            }
        }
        let entries = table
            .mus()
            .iter()
            .map(|b| (b.partition.clone(), given.get(&b.partition).copied().unwrap_or(0.0)))
            .collect();
        Ok(Self {
            d: table.d(),
            n: table.n(),
            entries,
        })
    }

    fn weighted_sum(&self, table: &BranchingTable) -> f64 {
        let total = self
            .entries
            .iter()
            .zip(table.mus())
            .fold(TwoFloat::from(0.0), |acc, ((_, c), b)| acc + b.weight * *c);
        total.into()
    }

    /// `sum_mu c_mu d_mu m_mu / d^N - 1`.
    pub fn constraint_residual(&self, table: &BranchingTable) -> f64 {
        self.weighted_sum(table) - 1.0
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn get(&self, mu: &Partition) -> Option<f64> {
        self.entries.iter().find(|(p, _)| p == mu).map(|(_, c)| *c)
    }

    /// Values in canonical partition order.
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|(_, c)| *c)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Partition, f64)> {
        self.entries.iter().map(|(p, c)| (p, *c))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub(crate) fn check_table(&self, table: &BranchingTable) -> Result<()> {
        if self.d != table.d() || self.n != table.n() {
            return Err(PbtError::InvalidArgument(format!(
                "coefficients for d = {}, N = {} used with d = {}, N = {}",
                self.d,
                self.n,
                table.d(),
                table.n()
            )));
        }
        Ok(())
    }
}

/// Serialized as a JSON object keyed by the partition's row lengths, e.g.
/// `{"[2]": 0.666, "[1,1]": 2.0}`, in canonical order.
impl Serialize for PortCoefficients {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.entries.len()))?;
        for (mu, c) in &self.entries {
            map.serialize_entry(&partition_key(mu), c)?;
        }
        map.end()
    }
}

pub fn partition_key(mu: &Partition) -> String {
    let rows: Vec<String> = mu.parts().iter().map(u32::to_string).collect();
    format!("[{}]", rows.join(","))
}
