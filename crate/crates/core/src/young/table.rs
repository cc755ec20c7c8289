use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::Pow;
use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use super::dims::{log_specht_dim_tf, log_weyl_dim_tf, ratio_to_twofloat};
use super::{add_box_successors, enumerate_partitions, specht_dim, weyl_dim, Partition};
use crate::error::{PbtError, Result};

/// Default largest `N` evaluated with exact integer dimensions.
pub const DEFAULT_EXACT_THRESHOLD: u32 = 40;

/// How dimension data is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NumericMode {
    /// Exact integer dimensions; surds and sums in double-double.
    ExactHybrid,
    /// Sums of logarithms of hook and content factors.
    LogDomain,
}

impl NumericMode {
    pub fn for_size(n: u32, exact_threshold: u32) -> Self {
        if n <= exact_threshold {
            NumericMode::ExactHybrid
        } else {
            NumericMode::LogDomain
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            NumericMode::ExactHybrid => "exact-hybrid",
            NumericMode::LogDomain => "log-domain",
        }
    }
}

/// Dimension data of one diagram inside a [`BranchingTable`].
#[derive(Clone, Debug)]
pub struct BlockDims {
    pub partition: Partition,
    pub log_specht: f64,
    pub log_weyl: f64,
    /// `(d_mu, m_{d,mu})`, present in exact mode.
    pub exact: Option<(BigUint, BigUint)>,
    /// Fraction of the tensor space occupied by the isotypic block,
    /// `d_mu m_{d,mu} / d^|mu|`.
    pub weight: TwoFloat,
    pub log_weight: f64,
}

impl BlockDims {
    fn new(mu: &Partition, d: u32, mode: NumericMode, total: &BigUint, log_total: TwoFloat) -> Self {
        let log_specht = log_specht_dim_tf(mu);
        let log_weyl = log_weyl_dim_tf(mu, d);
        let log_weight = log_specht + log_weyl - log_total;
        let (exact, weight) = match mode {
            NumericMode::ExactHybrid => {
                let s = specht_dim(mu);
                let w = weyl_dim(mu, d).expect("row bound checked by enumeration");
                let weight = ratio_to_twofloat(&(&s * &w), total);
                (Some((s, w)), weight)
            }
            NumericMode::LogDomain => (None, TwoFloat::from(f64::from(log_weight).exp())),
        };
        Self {
            partition: mu.clone(),
            log_specht: log_specht.into(),
            log_weyl: log_weyl.into(),
            exact,
            weight,
            log_weight: log_weight.into(),
        }
    }
}

/// Every diagram `mu ⊢_d N` and `alpha ⊢_d N-1` with dimensions and the
/// single-box incidence between them, built once and then read-only.
///
/// All lists are in descending lexicographic order, and every summation over
/// the table iterates in that order.
#[derive(Clone, Debug)]
pub struct BranchingTable {
    d: u32,
    n: u32,
    mode: NumericMode,
    mus: Vec<BlockDims>,
    alphas: Vec<BlockDims>,
    successors: Vec<Vec<usize>>,
    predecessors: Vec<Vec<usize>>,
    mu_index: HashMap<Partition, usize>,
    alpha_index: HashMap<Partition, usize>,
}

impl BranchingTable {
    pub fn new(d: u32, n: u32, mode: NumericMode) -> Result<Self> {
        if d == 0 || n == 0 {
            return Err(PbtError::InvalidArgument(format!(
                "need d >= 1 and N >= 1, got d = {d}, N = {n}"
            )));
        }
        let dims = |size: u32| {
            let total = BigUint::from(d).pow(size);
            let log_total = TwoFloat::from(size as f64) * TwoFloat::from(d as f64).ln();
            enumerate_partitions(size, d)
                .iter()
                .map(|p| BlockDims::new(p, d, mode, &total, log_total))
                .collect::<Vec<_>>()
        };
        let mus = dims(n);
        let alphas = dims(n - 1);
        let mu_index: HashMap<_, _> = mus
            .iter()
            .enumerate()
            .map(|(k, b)| (b.partition.clone(), k))
            .collect();
        let alpha_index: HashMap<_, _> = alphas
            .iter()
            .enumerate()
            .map(|(k, b)| (b.partition.clone(), k))
            .collect();
        let successors: Vec<Vec<usize>> = alphas
            .iter()
            .map(|a| {
                add_box_successors(&a.partition, d)
                    .into_iter()
                    .map(|rel| mu_index[&rel.mu])
                    .collect()
            })
            .collect();
        let mut predecessors = vec![Vec::new(); mus.len()];
        for (a, succ) in successors.iter().enumerate() {
            for &m in succ {
                predecessors[m].push(a);
            }
        }
        Ok(Self {
            d,
            n,
            mode,
            mus,
            alphas,
            successors,
            predecessors,
            mu_index,
            alpha_index,
        })
    }

    /// Picks the numeric mode from `n` and the exact threshold.
    pub fn with_threshold(d: u32, n: u32, exact_threshold: u32) -> Result<Self> {
        Self::new(d, n, NumericMode::for_size(n, exact_threshold))
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn mode(&self) -> NumericMode {
        self.mode
    }

    /// Diagrams `mu ⊢_d N`.
    pub fn mus(&self) -> &[BlockDims] {
        &self.mus
    }

    /// Diagrams `alpha ⊢_d N-1`.
    pub fn alphas(&self) -> &[BlockDims] {
        &self.alphas
    }

    /// Indices into [`Self::mus`] of `alpha + box`, for the alpha at `alpha`.
    pub fn successors(&self, alpha: usize) -> &[usize] {
        &self.successors[alpha]
    }

    /// Indices into [`Self::alphas`] of `mu - box`.
    pub fn predecessors(&self, mu: usize) -> &[usize] {
        &self.predecessors[mu]
    }

    pub fn mu_index(&self, mu: &Partition) -> Option<usize> {
        self.mu_index.get(mu).copied()
    }

    pub fn alpha_index(&self, alpha: &Partition) -> Option<usize> {
        self.alpha_index.get(alpha).copied()
    }

    /// Resolves a `(mu, alpha)` pair, checking that `mu = alpha + box`.
    pub fn pair(&self, mu: &Partition, alpha: &Partition) -> Result<(usize, usize)> {
        let not_related = || PbtError::NotBoxRelated {
            alpha: alpha.clone(),
            mu: mu.clone(),
        };
        let a = self.alpha_index(alpha).ok_or_else(not_related)?;
        let m = self.mu_index(mu).ok_or_else(not_related)?;
        if !self.successors[a].contains(&m) {
            return Err(not_related());
        }
        Ok((m, a))
    }

    /// Number of `(alpha, mu)` pairs with `mu = alpha + box`.
    pub fn pair_count(&self) -> usize {
        self.successors.iter().map(Vec::len).sum()
    }

    /// Checks the table is connected through shared predecessors, so the
    /// incidence matrix `B B^T` is irreducible.
    pub fn is_connected(&self) -> bool {
        if self.mus.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.mus.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(m) = stack.pop() {
            for &a in &self.predecessors[m] {
                for &next in &self.successors[a] {
                    if !seen[next] {
                        seen[next] = true;
                        stack.push(next);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}
