use itertools::Itertools;
use nalgebra::DMatrix;
use num_traits::ToPrimitive;

use super::config::{check_dim, check_port_index, check_projector_ports};
use super::operator::{permutation_index_map, DenseOperator, C64};
use super::OracleConfig;
use crate::error::{PbtError, Result};
use crate::fidelity::PortCoefficients;
use crate::young::{enumerate_partitions, specht_dim, CharacterTable, Partition};

/// Tolerance on positivity and unit trace of ensemble states.
pub const STATE_TOLERANCE: f64 = 1e-12;
/// Tolerance on the normalization of ensemble probabilities.
pub const PROBABILITY_TOLERANCE: f64 = 1e-14;

/// States `rho_i` drawn with probabilities `p_i`.
#[derive(Clone, Debug)]
pub struct Ensemble {
    states: Vec<DenseOperator>,
    probs: Vec<f64>,
}

impl Ensemble {
    /// Checks that every state is a density operator on the same space and
    /// that the probabilities form a distribution.
    pub fn new(states: Vec<DenseOperator>, probs: Vec<f64>) -> Result<Self> {
        if states.is_empty() || states.len() != probs.len() {
            return Err(PbtError::InvalidArgument(format!(
                "{} states with {} probabilities",
                states.len(),
                probs.len()
            )));
        }
        if probs.iter().any(|&p| p < 0.0 || p.is_nan()) {
            return Err(PbtError::InvalidArgument("negative probability".into()));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > PROBABILITY_TOLERANCE {
            return Err(PbtError::InvalidArgument(format!("probabilities sum to {total}")));
        }
        let dims = states[0].factor_dims().to_vec();
        for (i, s) in states.iter().enumerate() {
            if s.factor_dims() != dims.as_slice() {
                return Err(PbtError::InvalidArgument(format!("state {i} lives on another space")));
            }
            let trace = s.trace();
            if (trace.re - 1.0).abs() > STATE_TOLERANCE || trace.im.abs() > STATE_TOLERANCE {
                return Err(PbtError::InvalidArgument(format!("state {i} has trace {trace}")));
            }
            let low = s.lambda_min()?;
            if low < -STATE_TOLERANCE {
                return Err(PbtError::InvalidArgument(format!(
                    "state {i} has negative eigenvalue {low:e}"
                )));
            }
        }
        Ok(Self { states, probs })
    }

    /// Uniform ensemble of states built here, valid by construction.
    fn uniform_trusted(states: Vec<DenseOperator>) -> Self {
        let p = 1.0 / states.len() as f64;
        let probs = vec![p; states.len()];
        Self { states, probs }
    }

    pub fn states(&self) -> &[DenseOperator] {
        &self.states
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn factor_dims(&self) -> &[usize] {
        self.states[0].factor_dims()
    }
}

/// `|Phi+><Phi+|` with `|Phi+> = d^{-1/2} sum_i |ii>`.
pub fn maximally_entangled(d: u32) -> DenseOperator {
    let d = d as usize;
    let mut m = DMatrix::zeros(d * d, d * d);
    for x in 0..d {
        for y in 0..d {
            m[(x * d + x, y * d + y)] = 1.0 / d as f64;
        }
    }
    DenseOperator::from_real(m, vec![d, d])
}

/// `rho_i = Phi+_{A_i B} ⊗ (1/d)^{⊗(N-1)}` on `A_1 ... A_N B`, `i` one-based.
pub fn build_rho(d: u32, n: u32, i: u32) -> Result<DenseOperator> {
    OracleConfig::default().build_rho(d, n, i)
}

/// The `N` port states with uniform probabilities.
pub fn pbt_ensemble(d: u32, n: u32) -> Result<Ensemble> {
    OracleConfig::default().pbt_ensemble(d, n)
}

/// `sum_i rho_i`, or `sum_i p_i rho_i` when `normalized`.
pub fn average_state(e: &Ensemble, normalized: bool) -> DenseOperator {
    let mut avg = DenseOperator::zeros(e.factor_dims().to_vec());
    for (s, &p) in e.states.iter().zip(&e.probs) {
        avg.add_scaled(s, if normalized { p } else { 1.0 });
    }
    avg
}

/// Isotypic projector `P_mu = (d_mu / N!) sum_pi chi_mu(pi) R(pi)` on
/// `(C^d)^{⊗N}`. Zero when `mu` has more than `d` rows.
pub fn young_projector(mu: &Partition, d: u32, n: u32) -> Result<DenseOperator> {
    OracleConfig::default().young_projector(mu, d, n)
}

/// `P_mu` for every `mu ⊢_d N`, in canonical order.
pub fn young_projectors(d: u32, n: u32) -> Result<Vec<(Partition, DenseOperator)>> {
    OracleConfig::default().young_projectors(d, n)
}

/// `O = sum_mu sqrt(c_mu) P_mu` on `A^N`.
pub fn build_port_operator(d: u32, n: u32, c: &PortCoefficients) -> Result<DenseOperator> {
    OracleConfig::default().build_port_operator(d, n, c)
}

/// `eta_i = O rho_i O^dagger`, with `O` acting on the `A` factors.
pub fn build_eta(d: u32, n: u32, i: u32, c: &PortCoefficients) -> Result<DenseOperator> {
    OracleConfig::default().build_eta(d, n, i, c)
}

/// The `N` states `eta_i` with uniform probabilities.
pub fn eta_ensemble(d: u32, n: u32, c: &PortCoefficients) -> Result<Ensemble> {
    OracleConfig::default().eta_ensemble(d, n, c)
}

fn cycle_type(perm: &[usize]) -> Partition {
    let mut seen = vec![false; perm.len()];
    let mut lengths = Vec::new();
    for start in 0..perm.len() {
        let mut len = 0;
        let mut k = start;
        while !seen[k] {
            seen[k] = true;
            k = perm[k];
            len += 1;
        }
        if len > 0 {
            lengths.push(len);
        }
    }
    lengths.sort_unstable_by(|a, b| b.cmp(a));
    Partition::from_parts_unchecked(lengths)
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

impl OracleConfig {
    pub fn build_rho(&self, d: u32, n: u32, i: u32) -> Result<DenseOperator> {
        check_port_index(n, i)?;
        let dim = self.port_dim(d, n)?;
        let du = d as usize;
        // Stride of A_i in the fused index; B has stride 1.
        let s = du.pow(n - i + 1);
        let value = (d as f64).powi(-(n as i32));
        let mut m = DMatrix::zeros(dim, dim);
        for x in 0..dim {
            let (a, b) = ((x / s) % du, x % du);
            if a != b {
                continue;
            }
            let base = x - a * s - b;
            for t in 0..du {
                m[(x, base + t * s + t)] = value;
            }
        }
        Ok(DenseOperator::from_real(m, vec![du; n as usize + 1]))
    }

    pub fn pbt_ensemble(&self, d: u32, n: u32) -> Result<Ensemble> {
        let states = (1..=n).map(|i| self.build_rho(d, n, i)).collect::<Result<Vec<_>>>()?;
        if states.is_empty() {
            return Err(PbtError::InvalidArgument("N must be at least 1".into()));
        }
        Ok(Ensemble::uniform_trusted(states))
    }

    pub fn young_projector(&self, mu: &Partition, d: u32, n: u32) -> Result<DenseOperator> {
        if mu.size() != n {
            return Err(PbtError::SizeMismatch {
                left: mu.size(),
                right: n,
            });
        }
        let mut all = self.projectors_for(std::slice::from_ref(mu), d, n)?;
        Ok(all.pop().expect("one projector").1)
    }

    pub fn young_projectors(&self, d: u32, n: u32) -> Result<Vec<(Partition, DenseOperator)>> {
        self.projectors_for(&enumerate_partitions(n, d), d, n)
    }

    // One pass over S_N shared by all requested projectors.
    fn projectors_for(&self, mus: &[Partition], d: u32, n: u32) -> Result<Vec<(Partition, DenseOperator)>> {
        check_projector_ports(n)?;
        let dim = check_dim(d, n, self.cap)?;
        let du = d as usize;
        let mut tables: Vec<CharacterTable> = mus.iter().map(CharacterTable::new).collect();
        let mut sums = vec![DMatrix::<f64>::zeros(dim, dim); mus.len()];
        for perm in (0..n as usize).permutations(n as usize) {
            let map = permutation_index_map(du, &perm);
            let shape = cycle_type(&perm);
            for (table, sum) in tables.iter_mut().zip(sums.iter_mut()) {
                let chi = table.value(&shape)?;
                if chi == 0 {
                    continue;
                }
                for (x, &y) in map.iter().enumerate() {
                    sum[(y, x)] += chi as f64;
                }
            }
        }
        let group_order = factorial(n);
        Ok(mus
            .iter()
            .zip(sums)
            .map(|(mu, sum)| {
                let scale = specht_dim(mu).to_f64().unwrap_or(f64::NAN) / group_order;
                (mu.clone(), DenseOperator::from_real(sum * scale, vec![du; n as usize]))
            })
            .collect())
    }

    pub fn build_port_operator(&self, d: u32, n: u32, c: &PortCoefficients) -> Result<DenseOperator> {
        if c.d() != d || c.n() != n {
            return Err(PbtError::InvalidArgument(format!(
                "coefficients for (d, N) = ({}, {}) used at ({d}, {n})",
                c.d(),
                c.n()
            )));
        }
        let mut o = DenseOperator::zeros(vec![d as usize; n as usize]);
        for (mu, p) in self.young_projectors(d, n)? {
            let weight = c.get(&mu).unwrap_or(0.0);
            if weight > 0.0 {
                o.add_scaled(&p, weight.sqrt());
            }
        }
        Ok(o)
    }

    pub fn build_eta(&self, d: u32, n: u32, i: u32, c: &PortCoefficients) -> Result<DenseOperator> {
        let rho = self.build_rho(d, n, i)?;
        let o = self.build_port_operator(d, n, c)?;
        steer(&rho, &o)
    }

    pub fn eta_ensemble(&self, d: u32, n: u32, c: &PortCoefficients) -> Result<Ensemble> {
        let o = self.build_port_operator(d, n, c)?;
        let states = (1..=n)
            .map(|i| steer(&self.build_rho(d, n, i)?, &o))
            .collect::<Result<Vec<_>>>()?;
        Ok(Ensemble::uniform_trusted(states))
    }
}

// (O ⊗ 1_B) rho (O ⊗ 1_B)^dagger.
fn steer(rho: &DenseOperator, o: &DenseOperator) -> Result<DenseOperator> {
    let d = *rho.factor_dims().last().expect("B factor");
    let full = o.matrix().kronecker(&DMatrix::<C64>::identity(d, d));
    let (eta, _) = rho.conjugated(&full).hermitized("eta")?;
    Ok(eta)
}
