use nalgebra::{Complex, DMatrix, SymmetricEigen};

use crate::error::{PbtError, Result};

pub type C64 = Complex<f64>;

/// Largest `||M - M^dagger||_max` for an operator to count as Hermitian.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;
/// Largest defect tolerated when symmetrizing the result of multi-step
/// arithmetic.
pub const HERMITIZATION_LIMIT: f64 = 1e-10;

/// A square complex matrix on a tensor product of factors.
///
/// Factors are fused row-major, so the last factor varies fastest. Port
/// operators use the order `A_1, ..., A_N, B`.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    matrix: DMatrix<C64>,
    factor_dims: Vec<usize>,
    hermitian: bool,
}

fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

impl DenseOperator {
    pub fn new(matrix: DMatrix<C64>, factor_dims: Vec<usize>) -> Result<Self> {
        let dim: usize = factor_dims.iter().product();
        if !matrix.is_square() || matrix.nrows() != dim {
            return Err(PbtError::InvalidArgument(format!(
                "{}x{} matrix on factors {factor_dims:?}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let mut op = Self {
            matrix,
            factor_dims,
            hermitian: false,
        };
        op.hermitian = op.hermitian_defect() <= HERMITIAN_TOLERANCE;
        Ok(op)
    }

    pub(crate) fn from_real(matrix: DMatrix<f64>, factor_dims: Vec<usize>) -> Self {
        Self {
            matrix: matrix.map(|x| C64::new(x, 0.0)),
            factor_dims,
            hermitian: true,
        }
    }

    pub fn identity(factor_dims: Vec<usize>) -> Self {
        let dim = factor_dims.iter().product();
        Self {
            matrix: DMatrix::identity(dim, dim),
            factor_dims,
            hermitian: true,
        }
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// `||M - M^dagger||_max`.
    pub fn hermitian_defect(&self) -> f64 {
        max_abs(&(&self.matrix - self.matrix.adjoint()))
    }

    /// Replaces `M` by `(M + M^dagger) / 2` and returns the defect before.
    pub fn hermitize(&mut self) -> f64 {
        let defect = self.hermitian_defect();
        self.matrix = (&self.matrix + self.matrix.adjoint()) * C64::new(0.5, 0.0);
        self.hermitian = true;
        defect
    }

    /// Hermitizes, failing when the defect exceeds [`HERMITIZATION_LIMIT`]
    /// relative to the largest entry.
    pub(crate) fn hermitized(mut self, what: &str) -> Result<(Self, f64)> {
        let scale = max_abs(&self.matrix).max(1.0);
        let defect = self.hermitize();
        if defect > HERMITIZATION_LIMIT * scale {
            return Err(PbtError::Numerical(format!("{what} is not Hermitian: defect {defect:e}")));
        }
        Ok((self, defect))
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// `tr(self · other)`.
    pub fn trace_product(&self, other: &DenseOperator) -> C64 {
        // Sum of elementwise products with the transpose, without forming the product.
        let (a, b) = (&self.matrix, &other.matrix);
        let n = a.nrows();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..n {
            for k in 0..n {
                acc += a[(i, k)] * b[(k, i)];
            }
        }
        acc
    }

    pub fn max_abs_diff(&self, other: &DenseOperator) -> f64 {
        max_abs(&(&self.matrix - &other.matrix))
    }

    /// `||[self, u]||_max`.
    pub fn commutator_norm(&self, u: &DMatrix<C64>) -> f64 {
        max_abs(&(&self.matrix * u - u * &self.matrix))
    }

    /// `u M u^dagger`, keeping the factor structure.
    pub fn conjugated(&self, u: &DMatrix<C64>) -> DenseOperator {
        let matrix = u * &self.matrix * u.adjoint();
        DenseOperator {
            hermitian: self.hermitian && max_abs(&(&matrix - matrix.adjoint())) <= HERMITIAN_TOLERANCE,
            matrix,
            factor_dims: self.factor_dims.clone(),
        }
    }

    pub fn tensor(&self, other: &DenseOperator) -> DenseOperator {
        let mut factor_dims = self.factor_dims.clone();
        factor_dims.extend_from_slice(&other.factor_dims);
        DenseOperator {
            matrix: self.matrix.kronecker(&other.matrix),
            factor_dims,
            hermitian: self.hermitian && other.hermitian,
        }
    }

    fn require_hermitian(&self) -> Result<()> {
        if self.hermitian {
            Ok(())
        } else {
            Err(PbtError::InvalidArgument(format!(
                "operator is not Hermitian (defect {:e})",
                self.hermitian_defect()
            )))
        }
    }

    /// Dense Hermitian eigendecomposition.
    pub fn eigen(&self) -> Result<SymmetricEigen<C64, nalgebra::Dyn>> {
        self.require_hermitian()?;
        Ok(SymmetricEigen::new(self.matrix.clone()))
    }

    /// All eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        self.require_hermitian()?;
        let mut values: Vec<f64> = self.matrix.clone().symmetric_eigenvalues().iter().copied().collect();
        values.sort_by(f64::total_cmp);
        Ok(values)
    }

    pub fn lambda_min(&self) -> Result<f64> {
        Ok(self.eigenvalues()?[0])
    }

    /// Eigenvalues above `rel_cutoff` times the spectral radius, ascending.
    pub fn nonzero_spectrum(&self, rel_cutoff: f64) -> Result<Vec<f64>> {
        let values = self.eigenvalues()?;
        let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        Ok(values.into_iter().filter(|v| v.abs() > rel_cutoff * scale).collect())
    }

    /// `f` applied to the eigenvalues above `rel_cutoff * lambda_max`, with
    /// the rest sent to zero, together with the projector onto their span.
    pub fn support_function(&self, rel_cutoff: f64, f: impl Fn(f64) -> f64) -> Result<(DenseOperator, DenseOperator)> {
        let eig = self.eigen()?;
        let top = eig.eigenvalues.iter().fold(0.0f64, |m, &v| m.max(v));
        let n = self.dim();
        let mut value = DMatrix::<C64>::zeros(n, n);
        let mut support = DMatrix::<C64>::zeros(n, n);
        for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
            if lambda <= rel_cutoff * top {
                continue;
            }
            let v = eig.eigenvectors.column(k);
            let outer = v * v.adjoint();
            value += &outer * C64::new(f(lambda), 0.0);
            support += outer;
        }
        let wrap = |matrix: DMatrix<C64>| {
            let mut op = DenseOperator {
                matrix,
                factor_dims: self.factor_dims.clone(),
                hermitian: true,
            };
            op.hermitize();
            op
        };
        Ok((wrap(value), wrap(support)))
    }

    /// Trace over the first tensor factor.
    pub fn partial_trace_first(&self) -> Result<DenseOperator> {
        if self.factor_dims.len() < 2 {
            return Err(PbtError::InvalidArgument(
                "partial trace needs at least two tensor factors".into(),
            ));
        }
        let first = self.factor_dims[0];
        let rest = self.dim() / first;
        let mut out = DMatrix::<C64>::zeros(rest, rest);
        for k in 0..first {
            out += self.matrix.view((k * rest, k * rest), (rest, rest));
        }
        Ok(DenseOperator {
            hermitian: self.hermitian,
            matrix: out,
            factor_dims: self.factor_dims[1..].to_vec(),
        })
    }

    pub(crate) fn add_scaled(&mut self, other: &DenseOperator, weight: f64) {
        self.matrix += &other.matrix * C64::new(weight, 0.0);
        self.hermitian = self.hermitian && other.hermitian;
    }

    pub(crate) fn zeros(factor_dims: Vec<usize>) -> Self {
        let dim = factor_dims.iter().product();
        Self {
            matrix: DMatrix::zeros(dim, dim),
            factor_dims,
            hermitian: true,
        }
    }
}

/// Trace over the first tensor factor of `op`.
pub fn partial_trace_first(op: &DenseOperator) -> Result<DenseOperator> {
    op.partial_trace_first()
}

/// The matrix of the permutation `perm` of `perm.len()` factors of
/// dimension `d`, followed by an untouched factor of dimension `tail`.
/// Factor `k` is moved to position `perm[k]`.
pub fn permutation_operator(d: usize, perm: &[usize], tail: usize) -> DMatrix<C64> {
    let map = permutation_index_map(d, perm);
    let dim = map.len() * tail;
    let mut m = DMatrix::zeros(dim, dim);
    for (x, &y) in map.iter().enumerate() {
        for t in 0..tail {
            m[(y * tail + t, x * tail + t)] = C64::new(1.0, 0.0);
        }
    }
    m
}

/// Image of every basis index of `(C^d)^{⊗n}` under the factor permutation.
pub(crate) fn permutation_index_map(d: usize, perm: &[usize]) -> Vec<usize> {
    let n = perm.len();
    let dim = d.pow(n as u32);
    let stride = |k: usize| d.pow((n - 1 - k) as u32);
    (0..dim)
        .map(|x| {
            (0..n)
                .map(|k| ((x / stride(k)) % d) * stride(perm[k]))
                .sum()
        })
        .collect()
}

/// `u^{⊗n}`.
pub fn tensor_power(u: &DMatrix<C64>, n: usize) -> DMatrix<C64> {
    (0..n).fold(DMatrix::identity(1, 1), |acc, _| acc.kronecker(u))
}
