//! Reference computations written independently of the library: partition
//! enumeration, dimensions via the Weyl product formula, and a projected
//! gradient maximizer of the port-state objective.

#![allow(dead_code)]

use pbt::fidelity::PortCoefficients;
use pbt::young::{BranchingTable, Partition};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 7_2019;

/// Partitions of `n` with at most `rows` parts, each part at most `max`.
pub fn partitions(n: u32, rows: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, rows: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        if rows == 0 {
            return;
        }
        for first in (1..=n.min(max)).rev() {
            prefix.push(first);
            go(n - first, rows - 1, first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, rows, n, &mut Vec::new(), &mut out);
    out
}

/// `d_mu = n! / prod hooks`, in floating point.
pub fn specht(mu: &[u32]) -> f64 {
    let n: u32 = mu.iter().sum();
    let mut value: f64 = (1..=n).map(f64::from).product();
    for (i, &row) in mu.iter().enumerate() {
        for j in 0..row {
            let arm = row - j - 1;
            let leg = mu[i + 1..].iter().filter(|&&r| r > j).count() as u32;
            value /= f64::from(arm + leg + 1);
        }
    }
    value.round()
}

/// `m_{d,mu} = prod_{i<j} (mu_i - mu_j + j - i) / (j - i)`.
pub fn weyl(mu: &[u32], d: u32) -> f64 {
    if mu.len() > d as usize {
        return 0.0;
    }
    let row = |i: usize| mu.get(i).copied().unwrap_or(0) as f64;
    let mut value = 1.0;
    for i in 0..d as usize {
        for j in i + 1..d as usize {
            value *= (row(i) - row(j) + (j - i) as f64) / (j - i) as f64;
        }
    }
    value.round()
}

/// Diagrams obtained from `alpha` by adding one box, at most `d` rows.
pub fn add_box(alpha: &[u32], d: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for i in 0..=alpha.len() {
        if i == d as usize {
            break;
        }
        let current = alpha.get(i).copied().unwrap_or(0);
        if i == 0 || alpha[i - 1] > current {
            let mut mu = alpha.to_vec();
            if i == alpha.len() {
                mu.push(1);
            } else {
                mu[i] += 1;
            }
            out.push(mu);
        }
    }
    out
}

/// Diagrams obtained from `mu` by removing one box.
pub fn remove_box(mu: &[u32]) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for i in 0..mu.len() {
        let next = mu.get(i + 1).copied().unwrap_or(0);
        if mu[i] > next {
            let mut alpha = mu.to_vec();
            alpha[i] -= 1;
            if alpha[i] == 0 {
                alpha.pop();
            }
            out.push(alpha);
        }
    }
    out
}

pub fn part(rows: &[u32]) -> Partition {
    Partition::new(rows.to_vec()).unwrap()
}

/// Structure of the maximization over `u_mu = sqrt(c_mu d_mu m_mu / d^N)`.
pub struct Objective {
    pub d: u32,
    pub n: u32,
    pub mus: Vec<Vec<u32>>,
    /// For each `alpha ⊢_d N-1`, the indices of `mu = alpha + box`.
    pub groups: Vec<Vec<usize>>,
    /// `d_mu m_mu / d^N`.
    pub weights: Vec<f64>,
}

impl Objective {
    pub fn new(d: u32, n: u32) -> Self {
        let mus = partitions(n, d);
        let groups = partitions(n - 1, d)
            .iter()
            .map(|alpha| {
                add_box(alpha, d)
                    .iter()
                    .map(|mu| mus.iter().position(|m| m == mu).unwrap())
                    .collect()
            })
            .collect();
        let scale = f64::from(d).powi(n as i32);
        let weights = mus.iter().map(|mu| specht(mu) * weyl(mu, d) / scale).collect();
        Self {
            d,
            n,
            mus,
            groups,
            weights,
        }
    }

    /// `F = d^-2 sum_alpha (sum_{mu = alpha + box} u_mu)^2`.
    pub fn fidelity(&self, u: &[f64]) -> f64 {
        let total: f64 = self
            .groups
            .iter()
            .map(|g| g.iter().map(|&m| u[m]).sum::<f64>().powi(2))
            .sum();
        total / f64::from(self.d * self.d)
    }

    fn gradient(&self, u: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; u.len()];
        for group in &self.groups {
            let s: f64 = group.iter().map(|&m| u[m]).sum();
            for &m in group {
                g[m] += 2.0 * s / f64::from(self.d * self.d);
            }
        }
        g
    }

    /// `c_mu = u_mu^2 / w_mu`.
    pub fn coefficients(&self, u: &[f64]) -> Vec<(Partition, f64)> {
        self.mus
            .iter()
            .zip(u)
            .zip(&self.weights)
            .map(|((mu, &x), &w)| (part(mu), x * x / w))
            .collect()
    }

    /// Projected gradient ascent on the unit sphere intersected with the
    /// nonnegative orthant, best of `starts` random starts.
    pub fn maximize(&self, starts: usize, seed: u64) -> (f64, Vec<f64>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut best = (f64::NEG_INFINITY, Vec::new());
        let step = f64::from(self.d * self.d);
        for _ in 0..starts {
            let mut u: Vec<f64> = (0..self.mus.len()).map(|_| rng.random::<f64>()).collect();
            project(&mut u);
            let mut value = self.fidelity(&u);
            for _ in 0..200_000 {
                let g = self.gradient(&u);
                let mut next: Vec<f64> = u.iter().zip(&g).map(|(x, gx)| x + step * gx).collect();
                project(&mut next);
                let next_value = self.fidelity(&next);
                let moved = next.iter().zip(&u).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                u = next;
                if moved < 1e-14 && (next_value - value).abs() < 1e-16 {
                    value = next_value;
                    break;
                }
                value = next_value;
            }
            if value > best.0 {
                best = (value, u);
            }
        }
        best
    }
}

fn project(u: &mut [f64]) {
    for x in u.iter_mut() {
        *x = x.max(0.0);
    }
    let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in u.iter_mut() {
        *x /= norm;
    }
}

/// A valid `{c_mu}` with entries drawn uniformly from `[0.05, 3)` and then
/// rescaled onto the constraint.
pub fn random_coefficients(table: &BranchingTable, rng: &mut impl Rng) -> PortCoefficients {
    let entries: Vec<(Partition, f64)> = table
        .mus()
        .iter()
        .map(|b| (b.partition.clone(), rng.random_range(0.05..3.0)))
        .collect();
    PortCoefficients::renormalized(table, entries).unwrap()
}

/// Sorted `{value repeated multiplicity times}`.
pub fn expand(entries: &[pbt::fidelity::BlockEntry]) -> Vec<f64> {
    let mut out = Vec::new();
    for e in entries {
        let times: usize = e.multiplicity.to_string().parse().unwrap();
        out.extend(std::iter::repeat(e.value).take(times));
    }
    out.sort_by(f64::total_cmp);
    out
}

/// Largest elementwise deviation of two sorted lists, infinite on length
/// mismatch.
pub fn max_deviation(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
