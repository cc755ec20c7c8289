use nalgebra::DMatrix;

use super::operator::{DenseOperator, C64};
use super::OracleConfig;
use crate::error::{PbtError, Result};
use crate::fidelity::PortCoefficients;

/// The resource state shared by the two parties.
#[derive(Clone, Copy, Debug)]
pub enum PortState<'a> {
    /// `N` maximally entangled pairs.
    Standard,
    /// `(O ⊗ 1) |Phi+>^{⊗N}` with `O = sum_mu sqrt(c_mu) P_mu`.
    Coefficients(&'a PortCoefficients),
}

/// `<Phi+| omega |Phi+>` for a state on two factors of equal dimension.
pub fn entanglement_fidelity(omega: &DenseOperator) -> Result<f64> {
    let dims = omega.factor_dims();
    if dims.len() != 2 || dims[0] != dims[1] {
        return Err(PbtError::InvalidArgument(format!("expected two equal factors, got {dims:?}")));
    }
    let d = dims[0];
    let m = omega.matrix();
    let mut acc = C64::new(0.0, 0.0);
    for x in 0..d {
        for y in 0..d {
            acc += m[(x * d + x, y * d + y)];
        }
    }
    Ok(acc.re / d as f64)
}

/// Entanglement fidelity of the identity channel, 1.
pub fn identity_channel_fidelity(d: u32) -> f64 {
    entanglement_fidelity(&super::states::maximally_entangled(d)).expect("two equal factors")
}

/// Entanglement fidelity of the teleportation channel, simulated on
/// `Phi+_{A_0 R} ⊗ port state` with `povm` measured on `A_1 ... A_N A_0`.
pub fn teleportation_fidelity_direct(d: u32, n: u32, port: PortState<'_>, povm: &[DenseOperator]) -> Result<f64> {
    OracleConfig::default().teleportation_fidelity_direct(d, n, port, povm)
}

impl OracleConfig {
    pub fn teleportation_fidelity_direct(
        &self,
        d: u32,
        n: u32,
        port: PortState<'_>,
        povm: &[DenseOperator],
    ) -> Result<f64> {
        if n == 0 {
            return Err(PbtError::InvalidArgument("N must be at least 1".into()));
        }
        let dim = self.channel_dim(d, n)?;
        let du = d as usize;
        if povm.len() != n as usize || povm.iter().any(|e| e.dim() != dim) {
            return Err(PbtError::InvalidArgument(format!(
                "need {n} POVM elements on a space of dimension {dim}"
            )));
        }

        // The global pure state as a matrix psi[(a_1..a_N, a_0), (b_1..b_N, r)].
        // Before steering it is prod_k delta(a_k, b_k) delta(a_0, r) / sqrt(d^{N+1}).
        let mut psi = DMatrix::<C64>::identity(dim, dim) * C64::new((dim as f64).powf(-0.5), 0.0);
        if let PortState::Coefficients(c) = port {
            let o = self.build_port_operator(d, n, c)?;
            psi = o.matrix().kronecker(&DMatrix::<C64>::identity(du, du)) * psi;
        }

        let mut fidelity = 0.0;
        for (i, e) in povm.iter().enumerate() {
            // Unnormalized post-measurement state on (b, r) is the transpose
            // of psi^dagger E psi.
            let g = psi.adjoint() * e.matrix() * &psi;
            // Stride of B_{i+1} in the column index; R has stride 1.
            let s = du.pow(n - i as u32);
            let mut acc = C64::new(0.0, 0.0);
            for col in 0..dim {
                let (x, r) = ((col / s) % du, col % du);
                if x != r {
                    continue;
                }
                let base = col - x * s - r;
                for y in 0..du {
                    acc += g[(base + y * s + y, col)];
                }
            }
            fidelity += acc.re / du as f64;
        }
        Ok(fidelity)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_measurement_depolarizes() {
        let id = DenseOperator::identity(vec![2, 2]);
        let f = teleportation_fidelity_direct(2, 1, PortState::Standard, &[id]).unwrap();
        assert!((f - 0.25).abs() < 1e-15);
    }

    #[test]
    fn identity_channel() {
        for d in 1..=4 {
            assert!((identity_channel_fidelity(d) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn size_cap() {
        let err = teleportation_fidelity_direct(2, 10, PortState::Standard, &[]).unwrap_err();
        assert!(matches!(err, PbtError::SizeCap { dim: 2048, cap: 1024 }));
    }
}
