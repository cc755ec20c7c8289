use super::operator::DenseOperator;
use super::states::{average_state, Ensemble};
use crate::error::{PbtError, Result};

/// Eigenvalues below this fraction of the largest one are treated as zero
/// when inverting on the support.
pub const PSEUDO_INVERSE_CUTOFF: f64 = 1e-10;
/// Tolerance on positivity and completeness of POVMs.
pub const POVM_TOLERANCE: f64 = 1e-10;

/// A measurement on the support of an average state.
#[derive(Clone, Debug)]
pub struct Povm {
    pub elements: Vec<DenseOperator>,
    /// Projector onto the support of the average state; the elements sum to it.
    pub support: DenseOperator,
    /// Largest Hermitization defect over the elements.
    pub hermitian_defect: f64,
}

/// `E_i = sigma^{-1/2} p_i sigma_i sigma^{-1/2}` with `sigma = sum_i p_i sigma_i`
/// inverted on its support.
pub fn pretty_good_measurement(e: &Ensemble) -> Result<Povm> {
    let avg = average_state(e, true);
    let (root, support) = avg.support_function(PSEUDO_INVERSE_CUTOFF, |x| x.powf(-0.5))?;
    let mut defect = 0.0f64;
    let elements = e
        .states()
        .iter()
        .zip(e.probs())
        .map(|(s, &p)| {
            let mut m = root.matrix() * s.matrix() * root.matrix();
            m *= nalgebra::Complex::new(p, 0.0);
            let (op, dev) = DenseOperator::new(m, s.factor_dims().to_vec())?.hermitized("PGM element")?;
            defect = defect.max(dev);
            Ok(op)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Povm {
        elements,
        support,
        hermitian_defect: defect,
    })
}

/// Largest violation of positivity, of `sum_i E_i <= 1`, and of
/// completeness on the support of each state.
pub fn povm_defect(e: &Ensemble, povm: &[DenseOperator]) -> Result<f64> {
    if povm.len() != e.len() {
        return Err(PbtError::InvalidPovm {
            reason: format!("{} elements for {} states", povm.len(), e.len()),
            defect: f64::INFINITY,
        });
    }
    let mut total = DenseOperator::zeros(e.factor_dims().to_vec());
    let mut defect = 0.0f64;
    for el in povm {
        if el.factor_dims() != e.factor_dims() {
            return Err(PbtError::InvalidPovm {
                reason: "element lives on another space".into(),
                defect: f64::INFINITY,
            });
        }
        if !el.is_hermitian() {
            return Err(PbtError::InvalidPovm {
                reason: "element is not Hermitian".into(),
                defect: el.hermitian_defect(),
            });
        }
        defect = defect.max(-el.lambda_min()?);
        total.add_scaled(el, 1.0);
    }
    let top = *total.eigenvalues()?.last().expect("nonempty");
    defect = defect.max(top - 1.0);
    for s in e.states() {
        defect = defect.max((total.trace_product(s).re - 1.0).abs());
    }
    Ok(defect.max(0.0))
}

/// `sum_i p_i tr(rho_i E_i)`, after checking that `povm` is a valid
/// measurement on the support of the ensemble.
pub fn success_probability(e: &Ensemble, povm: &[DenseOperator]) -> Result<f64> {
    let defect = povm_defect(e, povm)?;
    if defect > POVM_TOLERANCE {
        return Err(PbtError::InvalidPovm {
            reason: "not positive or not complete on the ensemble support".into(),
            defect,
        });
    }
    Ok(raw_success(e, povm))
}

pub(crate) fn raw_success(e: &Ensemble, povm: &[DenseOperator]) -> f64 {
    e.states()
        .iter()
        .zip(e.probs())
        .zip(povm)
        .map(|((s, &p), el)| p * s.trace_product(el).re)
        .sum()
}
