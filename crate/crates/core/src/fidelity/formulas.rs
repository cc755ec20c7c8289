use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Pow, ToPrimitive, Zero};
use serde::Serialize;
use twofloat::TwoFloat;

use super::{FidelityReport, PortCoefficients, ProtocolMode, Settings};
use crate::error::Result;
use crate::young::{specht_dim, weyl_dim, BlockDims, BranchingTable, Partition};

fn table_for(settings: &Settings, d: u32, n: u32) -> Result<BranchingTable> {
    BranchingTable::with_threshold(d, n, settings.exact_threshold)
}

// sqrt(c_mu d_mu m_mu / d^N) for every mu, in table order.
fn block_amplitudes(table: &BranchingTable, c: Option<&PortCoefficients>) -> Vec<TwoFloat> {
    match c {
        None => table.mus().iter().map(|b| b.weight.sqrt()).collect(),
        Some(c) => table
            .mus()
            .iter()
            .zip(c.values())
            .map(|(b, c)| if c == 0.0 { TwoFloat::from(0.0) } else { (b.weight * c).sqrt() })
            .collect(),
    }
}

// Sum over mu = alpha + box of the amplitudes, per alpha.
fn alpha_sums(table: &BranchingTable, amplitudes: &[TwoFloat]) -> Vec<TwoFloat> {
    (0..table.alphas().len())
        .map(|a| {
            table
                .successors(a)
                .iter()
                .fold(TwoFloat::from(0.0), |acc, &m| acc + amplitudes[m])
        })
        .collect()
}

/// `d^2 F = sum_alpha (sum_{mu = alpha + box} sqrt(c_mu d_mu m_mu / d^N))^2`.
fn scaled_objective(table: &BranchingTable, c: Option<&PortCoefficients>) -> TwoFloat {
    let amplitudes = block_amplitudes(table, c);
    alpha_sums(table, &amplitudes)
        .into_iter()
        .fold(TwoFloat::from(0.0), |acc, s| acc + s * s)
}

fn fidelity_of(table: &BranchingTable, c: Option<&PortCoefficients>) -> f64 {
    let d = TwoFloat::from(table.d() as f64);
    (scaled_objective(table, c) / (d * d)).into()
}

/// Standard protocol fidelity over a prepared table.
pub fn standard_from_table(table: &BranchingTable) -> FidelityReport {
    FidelityReport::new(
        table.d(),
        table.n(),
        ProtocolMode::Standard,
        fidelity_of(table, None),
        table.mode(),
    )
}

/// Fidelity of the port state `c` over a prepared table.
pub fn given_from_table(table: &BranchingTable, c: &PortCoefficients) -> Result<FidelityReport> {
    c.check_table(table)?;
    let mut report = FidelityReport::new(
        table.d(),
        table.n(),
        ProtocolMode::GivenCoefficients,
        fidelity_of(table, Some(c)),
        table.mode(),
    );
    report.coefficients = Some(c.clone());
    Ok(report)
}

/// Entanglement fidelity of the standard protocol,
/// `F = d^-(N+2) sum_alpha (sum_{mu = alpha + box} sqrt(d_mu m_mu))^2`.
pub fn fidelity_standard(d: u32, n: u32) -> Result<FidelityReport> {
    Settings::default().fidelity_standard(d, n)
}

/// Entanglement fidelity with the port state given by `c`.
pub fn fidelity_given_coefficients(c: &PortCoefficients) -> Result<FidelityReport> {
    Settings::default().fidelity_given_coefficients(c)
}

impl Settings {
    pub fn fidelity_standard(&self, d: u32, n: u32) -> Result<FidelityReport> {
        Ok(standard_from_table(&table_for(self, d, n)?))
    }

    pub fn fidelity_given_coefficients(&self, c: &PortCoefficients) -> Result<FidelityReport> {
        given_from_table(&table_for(self, c.d(), c.n())?, c)
    }
}

/// Eigenvalue `r_{mu,alpha}` of the unnormalized average state on the block
/// `V_alpha ⊗ W_mu`: `(N / d^N) m_mu d_alpha / (m_alpha d_mu)`, exactly.
pub fn avg_state_eigenvalue_exact(d: u32, n: u32, mu: &Partition, alpha: &Partition) -> Result<BigRational> {
    let table = BranchingTable::new(d, n, crate::young::NumericMode::LogDomain)?;
    table.pair(mu, alpha)?;
    let num = BigUint::from(n) * weyl_dim(mu, d)? * specht_dim(alpha);
    let den = BigUint::from(d).pow(n) * weyl_dim(alpha, d)? * specht_dim(mu);
    Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

/// Floating value of [`avg_state_eigenvalue_exact`].
pub fn avg_state_eigenvalue(d: u32, n: u32, mu: &Partition, alpha: &Partition) -> Result<f64> {
    let table = table_for(&Settings::default(), d, n)?;
    let (m, a) = table.pair(mu, alpha)?;
    Ok(avg_eigenvalue_in(&table, m, a))
}

fn avg_eigenvalue_in(table: &BranchingTable, m: usize, a: usize) -> f64 {
    let (mu, alpha) = (&table.mus()[m], &table.alphas()[a]);
    match (&mu.exact, &alpha.exact) {
        (Some((d_mu, m_mu)), Some((d_alpha, m_alpha))) => {
            let num = BigInt::from(table.n()) * BigInt::from(m_mu * d_alpha);
            let den = BigInt::from(BigUint::from(table.d()).pow(table.n()) * m_alpha * d_mu);
            BigRational::new(num, den).to_f64().unwrap_or(f64::NAN)
        }
        _ => {
            let log = (table.n() as f64).ln() - table.n() as f64 * (table.d() as f64).ln() + mu.log_weyl
                + alpha.log_specht
                - alpha.log_weyl
                - mu.log_specht;
            log.exp()
        }
    }
}

// sqrt(c_mu w_mu) (sum_{mu'} sqrt(c_mu' w_mu')) / (m_alpha d_mu), the shared
// shape of the X and Y block coefficients.
fn certificate_block(table: &BranchingTable, amplitudes: &[TwoFloat], sums: &[TwoFloat], m: usize, a: usize) -> f64 {
    let (mu, alpha): (&BlockDims, &BlockDims) = (&table.mus()[m], &table.alphas()[a]);
    let numerator = amplitudes[m] * sums[a];
    if f64::from(numerator) == 0.0 {
        return 0.0;
    }
    match (&mu.exact, &alpha.exact) {
        (Some((d_mu, _)), Some((_, m_alpha))) => {
            let denominator = (m_alpha * d_mu).to_f64().unwrap_or(f64::INFINITY);
            (numerator / denominator).into()
        }
        _ => (f64::from(numerator).ln() - alpha.log_weyl - mu.log_specht).exp(),
    }
}

/// PGM certificate coefficient
/// `x_{mu,alpha} = d^-N sqrt(m_mu / d_mu) m_alpha^-1 sum_{mu' = alpha + box} sqrt(d_mu' m_mu')`.
pub fn pgm_block_coefficient(d: u32, n: u32, mu: &Partition, alpha: &Partition) -> Result<f64> {
    let table = table_for(&Settings::default(), d, n)?;
    let (m, a) = table.pair(mu, alpha)?;
    let amplitudes = block_amplitudes(&table, None);
    let sums = alpha_sums(&table, &amplitudes);
    Ok(certificate_block(&table, &amplitudes, &sums, m, a))
}

/// Optimized-state certificate coefficient
/// `y_{mu,alpha} = d^-N (m_alpha d_mu)^-1 sqrt(c_mu m_mu d_mu) sum_{mu' = alpha + box} sqrt(c_mu' m_mu' d_mu')`.
pub fn opt_block_coefficient(mu: &Partition, alpha: &Partition, c: &PortCoefficients) -> Result<f64> {
    let table = table_for(&Settings::default(), c.d(), c.n())?;
    let (m, a) = table.pair(mu, alpha)?;
    let amplitudes = block_amplitudes(&table, Some(c));
    let sums = alpha_sums(&table, &amplitudes);
    Ok(certificate_block(&table, &amplitudes, &sums, m, a))
}

/// Which block-diagonal operator on `A^N B` to tabulate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BlockOperator {
    /// Unnormalized average state `sum_i rho_i`.
    AverageState,
    /// PGM certificate `X`.
    X,
    /// Certificate `Y` for a port state `{c_mu}`.
    Y,
}

/// One block `V_alpha ⊗ W_mu` of a block-diagonal operator.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlockEntry {
    pub alpha: Partition,
    pub mu: Partition,
    pub value: f64,
    /// `m_alpha d_mu`.
    #[serde(serialize_with = "serialize_decimal")]
    pub multiplicity: BigUint,
}

fn serialize_decimal<S: serde::Serializer>(value: &BigUint, serializer: S) -> std::result::Result<S::Ok, S::Error> {
    serializer.collect_str(value)
}

/// Eigenvalues of `operator` with their multiplicities, alpha-major in
/// canonical order. `Y` requires coefficients; the others ignore them.
pub fn block_spectrum(
    table: &BranchingTable,
    operator: BlockOperator,
    c: Option<&PortCoefficients>,
) -> Result<Vec<BlockEntry>> {
    if let Some(c) = c {
        c.check_table(table)?;
    }
    let amplitudes = match operator {
        BlockOperator::Y => {
            let c = c.ok_or_else(|| {
                crate::error::PbtError::InvalidArgument("the Y spectrum needs port coefficients".into())
            })?;
            block_amplitudes(table, Some(c))
        }
        _ => block_amplitudes(table, None),
    };
    let sums = alpha_sums(table, &amplitudes);
    let d = table.d();
    let mut rows = Vec::with_capacity(table.pair_count());
    for (a, alpha) in table.alphas().iter().enumerate() {
        let m_alpha = weyl_dim(&alpha.partition, d)?;
        for &m in table.successors(a) {
            let mu = &table.mus()[m];
            let value = match operator {
                BlockOperator::AverageState => avg_eigenvalue_in(table, m, a),
                BlockOperator::X | BlockOperator::Y => certificate_block(table, &amplitudes, &sums, m, a),
            };
            rows.push(BlockEntry {
                alpha: alpha.partition.clone(),
                mu: mu.partition.clone(),
                value,
                multiplicity: &m_alpha * specht_dim(&mu.partition),
            });
        }
    }
    Ok(rows)
}

/// `sum_{alpha,mu} value * m_alpha d_mu`, the trace of the tabulated operator.
pub fn block_trace(entries: &[BlockEntry]) -> f64 {
    entries
        .iter()
        .fold(TwoFloat::from(0.0), |acc, e| {
            acc + TwoFloat::from(e.value) * e.multiplicity.to_f64().unwrap_or(f64::INFINITY)
        })
        .into()
}

/// Total multiplicity: the rank of the tabulated operator when all values are nonzero.
pub fn block_rank(entries: &[BlockEntry]) -> BigUint {
    entries
        .iter()
        .filter(|e| e.value != 0.0)
        .fold(BigUint::zero(), |acc, e| acc + &e.multiplicity)
}
