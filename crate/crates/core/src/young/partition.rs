use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{PbtError, Result};

/// A Young diagram, stored as weakly decreasing positive row lengths.
///
/// The row bound `d` is never part of the value: the same diagram serves every
/// `d` that is at least its number of rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Validates and builds a partition. Trailing zero rows are dropped.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.contains(&0) {
            return Err(PbtError::InvalidPartition {
                parts,
                reason: "zero row before a nonzero row",
            });
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(PbtError::InvalidPartition {
                parts,
                reason: "rows are not weakly decreasing",
            });
        }
        Ok(Self { parts })
    }

    /// Callers guarantee the invariants.
    pub(crate) fn from_parts_unchecked(parts: Vec<u32>) -> Self {
        debug_assert!(parts.iter().all(|&p| p > 0));
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        Self { parts }
    }

    pub fn empty() -> Self {
        Self { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of boxes.
    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn rows(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Length of row `i` (zero past the last row).
    pub fn row(&self, i: usize) -> u32 {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Self {
        let cols = self.row(0) as usize;
        let parts = (0..cols)
            .map(|j| self.parts.iter().filter(|&&p| p as usize > j).count() as u32)
            .collect();
        Self { parts }
    }

    /// Hook lengths of every cell, row by row.
    pub fn hooks(&self) -> impl Iterator<Item = u32> + '_ {
        let conj = self.conjugate();
        self.cells()
            .map(move |(i, j)| self.parts[i] - j as u32 + conj.parts[j] - i as u32 - 1)
    }

    /// Cells `(row, column)`, zero-based, row by row.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| (0..p as usize).map(move |j| (i, j)))
    }

    pub(crate) fn with_row_added(&self, i: usize) -> Self {
        let mut parts = self.parts.clone();
        if i == parts.len() {
            parts.push(1);
        } else {
            parts[i] += 1;
        }
        Self::from_parts_unchecked(parts)
    }

    pub(crate) fn with_row_removed(&self, i: usize) -> Self {
        let mut parts = self.parts.clone();
        parts[i] -= 1;
        if parts[i] == 0 {
            parts.pop();
        }
        Self::from_parts_unchecked(parts)
    }

    /// Rejects diagrams with more than `d` rows.
    pub fn check_rows(&self, d: u32) -> Result<()> {
        if self.rows() > d as usize {
            return Err(PbtError::TooManyRows {
                partition: self.clone(),
                rows: self.rows(),
                d,
            });
        }
        Ok(())
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, p) in self.parts.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.parts.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<u32>::deserialize(deserializer)?;
        Partition::new(parts).map_err(serde::de::Error::custom)
    }
}

/// Every partition of `n` into at most `max_rows` parts, in descending
/// lexicographic order. `n = 0` yields the single empty partition.
pub fn enumerate_partitions(n: u32, max_rows: u32) -> Vec<Partition> {
    fn rec(remaining: u32, cap: u32, rows_left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition::from_parts_unchecked(prefix.clone()));
            return;
        }
        if rows_left == 0 {
            return;
        }
        // The first row must be large enough for the rest to fit below it.
        let lowest = remaining.div_ceil(rows_left);
        let mut first = remaining.min(cap);
        while first >= lowest {
            prefix.push(first);
            rec(remaining - first, first, rows_left - 1, prefix, out);
            prefix.pop();
            first -= 1;
        }
    }
    let mut out = Vec::new();
    if max_rows == 0 {
        if n == 0 {
            out.push(Partition::empty());
        }
        return out;
    }
    rec(n, n, max_rows, &mut Vec::new(), &mut out);
    out
}

/// `mu` is `alpha` with one box added in row `row` (zero-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxRelation {
    pub alpha: Partition,
    pub mu: Partition,
    pub row: usize,
}

/// All diagrams with at most `d` rows obtained from `alpha` by adding one box.
///
/// Candidates that are not diagrams are never produced, so the result is in
/// descending lexicographic order of `mu`.
pub fn add_box_successors(alpha: &Partition, d: u32) -> Vec<BoxRelation> {
    let limit = (alpha.rows() + 1).min(d as usize);
    (0..limit)
        .filter(|&i| i == 0 || alpha.row(i - 1) > alpha.row(i))
        .map(|i| BoxRelation {
            alpha: alpha.clone(),
            mu: alpha.with_row_added(i),
            row: i,
        })
        .collect()
}

/// All diagrams obtained from `mu` by removing one box: rows with `mu_i > mu_{i+1}`.
pub fn remove_box_predecessors(mu: &Partition) -> Vec<BoxRelation> {
    (0..mu.rows())
        .filter(|&i| mu.row(i) > mu.row(i + 1))
        .map(|i| BoxRelation {
            alpha: mu.with_row_removed(i),
            mu: mu.clone(),
            row: i,
        })
        .collect()
}

/// Returns the row where `mu` has one more box than `alpha`, if any.
pub fn box_row(alpha: &Partition, mu: &Partition) -> Option<usize> {
    if mu.size() != alpha.size() + 1 {
        return None;
    }
    let rows = mu.rows().max(alpha.rows());
    let mut found = None;
    for i in 0..rows {
        match mu.row(i).checked_sub(alpha.row(i)) {
            Some(0) => {}
            Some(1) if found.is_none() => found = Some(i),
            _ => return None,
        }
    }
    found
}
