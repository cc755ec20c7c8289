//! Principal eigenpairs of symmetric entrywise-nonnegative matrices.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::EigenMethod;
use crate::error::{PbtError, Result};

/// A symmetric matrix given by its action `y = M x`.
pub trait SymmetricOperator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);

    fn to_dense(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        let mut e = vec![0.0; n];
        let mut col = vec![0.0; n];
        for j in 0..n {
            e[j] = 1.0;
            self.apply(&e, &mut col);
            for i in 0..n {
                m[(i, j)] = col[i];
            }
            e[j] = 0.0;
        }
        m
    }
}

impl SymmetricOperator for DMatrix<f64> {
    fn dim(&self) -> usize {
        self.nrows()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let v = self * DVector::from_column_slice(x);
        y.copy_from_slice(v.as_slice());
    }

    fn to_dense(&self) -> DMatrix<f64> {
        self.clone()
    }
}

#[derive(Clone, Debug)]
pub struct Eigenpair {
    pub value: f64,
    /// Unit norm, entrywise nonnegative.
    pub vector: Vec<f64>,
    pub second: Option<f64>,
    pub method: EigenMethod,
    pub iterations: usize,
    pub residual: f64,
    pub degenerate: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct EigenOptions {
    /// Largest dimension handled by the dense solver.
    pub dense_limit: usize,
    /// Stopping tolerance on `||M u - lambda u||` for iterative methods.
    pub tolerance: f64,
    /// Relative gap below which the top eigenvalue counts as degenerate.
    pub degeneracy_gap: f64,
    pub krylov_dim: usize,
    pub max_iterations: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            dense_limit: 2000,
            tolerance: 1e-13,
            degeneracy_gap: 1e-10,
            krylov_dim: 150,
            max_iterations: 2_000_000,
        }
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn residual_norm(op: &dyn SymmetricOperator, lambda: f64, u: &[f64]) -> f64 {
    let mut mu = vec![0.0; u.len()];
    op.apply(u, &mut mu);
    let r: f64 = mu.iter().zip(u).map(|(a, b)| (a - lambda * b).powi(2)).sum();
    r.sqrt() / norm(u)
}

/// Flips the sign so the vector is nonnegative, checks it is, and clamps
/// round-off negatives to zero.
fn make_nonnegative(mut v: Vec<f64>) -> Result<Vec<f64>> {
    if v.iter().sum::<f64>() < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let worst = v.iter().fold(0.0f64, |m, &x| m.min(x));
    if worst < -1e-12 * scale.max(1.0) {
        return Err(PbtError::Numerical(format!(
            "principal eigenvector has a negative entry {worst:e}"
        )));
    }
    v.iter_mut().for_each(|x| *x = x.max(0.0));
    let n = norm(&v);
    v.iter_mut().for_each(|x| *x /= n);
    Ok(v)
}

/// Largest eigenvalue and a nonnegative eigenvector of `op`, which must be
/// symmetric with nonnegative entries.
///
/// Dense for `dim <= dense_limit`, restarted Lanczos above. When the top two
/// eigenvalues are closer than `degeneracy_gap` (relative), the vector is
/// recomputed by power iteration from the all-ones start, which stays
/// nonnegative, and the pair is flagged.
pub fn principal_eigenpair(op: &dyn SymmetricOperator, options: &EigenOptions) -> Result<Eigenpair> {
    let n = op.dim();
    if n == 0 {
        return Err(PbtError::Numerical("empty matrix".into()));
    }
    let mut pair = if n <= options.dense_limit {
        dense(op)?
    } else {
        lanczos(op, options)?
    };
    if let Some(second) = pair.second {
        if pair.value - second <= options.degeneracy_gap * pair.value.abs() {
            let start = vec![1.0 / (n as f64).sqrt(); n];
            let (value, vector, iterations) = power_iteration(op, start, options)?;
            pair.value = value;
            pair.vector = vector;
            pair.iterations = iterations;
            pair.method = EigenMethod::PowerIteration;
            pair.degenerate = true;
        }
    }
    pair.vector = make_nonnegative(pair.vector)?;
    pair.residual = residual_norm(op, pair.value, &pair.vector);
    Ok(pair)
}

fn dense(op: &dyn SymmetricOperator) -> Result<Eigenpair> {
    let eig = SymmetricEigen::new(op.to_dense());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let top = order[0];
    let vector = eig.eigenvectors.column(top).iter().copied().collect();
    Ok(Eigenpair {
        value: eig.eigenvalues[top],
        vector,
        second: order.get(1).map(|&k| eig.eigenvalues[k]),
        method: EigenMethod::Dense,
        iterations: 0,
        residual: f64::NAN,
        degenerate: false,
    })
}

/// Power iteration from `start`; returns (eigenvalue, unit vector, iterations).
pub fn power_iteration(
    op: &dyn SymmetricOperator,
    start: Vec<f64>,
    options: &EigenOptions,
) -> Result<(f64, Vec<f64>, usize)> {
    let n = op.dim();
    let mut v = start;
    let s = norm(&v);
    v.iter_mut().for_each(|x| *x /= s);
    let mut w = vec![0.0; n];
    for it in 1..=options.max_iterations {
        op.apply(&v, &mut w);
        let lambda = dot(&v, &w);
        let r: f64 = w.iter().zip(&v).map(|(a, b)| (a - lambda * b).powi(2)).sum::<f64>().sqrt();
        if r <= options.tolerance {
            return Ok((lambda, v, it));
        }
        let s = norm(&w);
        if s == 0.0 {
            return Ok((0.0, v, it));
        }
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / s;
        }
    }
    Err(PbtError::Numerical(format!(
        "power iteration did not reach {:e} in {} steps",
        options.tolerance, options.max_iterations
    )))
}

/// Explicitly restarted Lanczos with full reorthogonalization, restarting
/// from the current top Ritz vector.
fn lanczos(op: &dyn SymmetricOperator, options: &EigenOptions) -> Result<Eigenpair> {
    let n = op.dim();
    let m = options.krylov_dim.min(n).max(2);
    let mut start = vec![1.0; n];
    let mut total_steps = 0usize;
    let mut w = vec![0.0; n];
    let max_restarts = options.max_iterations / m + 1;
    for _ in 0..max_restarts {
        let s = norm(&start);
        let mut basis: Vec<Vec<f64>> = vec![start.iter().map(|x| x / s).collect()];
        let mut alpha = Vec::with_capacity(m);
        let mut beta: Vec<f64> = Vec::with_capacity(m);
        for j in 0..m {
            op.apply(&basis[j], &mut w);
            total_steps += 1;
            let a = dot(&basis[j], &w);
            alpha.push(a);
            // Two passes of classical Gram-Schmidt against the whole basis.
            for _ in 0..2 {
                for q in &basis {
                    let h = dot(q, &w);
                    for (wi, qi) in w.iter_mut().zip(q) {
                        *wi -= h * qi;
                    }
                }
            }
            let b = norm(&w);
            if j + 1 == m || b <= 1e-14 * a.abs().max(1.0) {
                break;
            }
            beta.push(b);
            basis.push(w.iter().map(|x| x / b).collect());
        }
        let k = alpha.len();
        let mut t = DMatrix::zeros(k, k);
        for i in 0..k {
            t[(i, i)] = alpha[i];
            if i + 1 < k {
                t[(i, i + 1)] = beta[i];
                t[(i + 1, i)] = beta[i];
            }
        }
        let eig = SymmetricEigen::new(t);
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let theta = eig.eigenvalues[order[0]];
        let y = eig.eigenvectors.column(order[0]);
        let mut ritz = vec![0.0; n];
        for (coef, q) in y.iter().zip(&basis) {
            for (ri, qi) in ritz.iter_mut().zip(q) {
                *ri += coef * qi;
            }
        }
        let rn = norm(&ritz);
        ritz.iter_mut().for_each(|x| *x /= rn);
        let residual = residual_norm(op, theta, &ritz);
        if residual <= options.tolerance || k < m {
            return Ok(Eigenpair {
                value: theta,
                vector: ritz,
                second: order.get(1).map(|&i| eig.eigenvalues[i]),
                method: EigenMethod::Lanczos,
                iterations: total_steps,
                residual,
                degenerate: false,
            });
        }
        start = ritz;
    }
    Err(PbtError::Numerical(format!(
        "Lanczos did not reach {:e} in {total_steps} steps",
        options.tolerance
    )))
}
