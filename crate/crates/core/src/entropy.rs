//! Von Neumann entropy and the logarithmic relative entropy.
//!
//! The relative entropy is reported with the sign convention under which it
//! is *maximized*: `S(rho || rho0) = -tr[rho (log rho - log rho0)] <= 0`.
//! It is the negative of the usual quantum Kullback-Leibler divergence.

use crate::error::{Error, Result};
use crate::operator::{check_dims, DensityOperator, LOG_FLOOR};
use crate::scalar::Real;

/// `-sum p ln p` over a probability spectrum, with `0 ln 0 = 0`.
pub(crate) fn spectrum_entropy<T: Real>(p: &[T]) -> T {
    let floor = T::tol(LOG_FLOOR);
    p.iter()
        .filter(|&&x| x > floor)
        .fold(T::zero(), |acc, &x| acc - x * x.ln())
}

/// `S(rho) = -tr(rho ln rho)` in nats.
pub fn von_neumann_entropy<T: Real>(rho: &DensityOperator<T>) -> Result<T> {
    let p = rho.eigenvalues()?;
    Ok(spectrum_entropy(&p).max(T::zero()))
}

/// `-tr[rho (ln rho - ln rho0)]`, nonpositive and zero iff `rho == rho0`.
///
/// Fails with [`Error::SupportViolation`] when `rho` carries weight on the
/// kernel of `rho0`, where the value is unbounded below.
pub fn relative_entropy<T: Real>(
    rho: &DensityOperator<T>,
    reference: &DensityOperator<T>,
) -> Result<T> {
    check_dims(reference.dim(), rho.dim())?;
    let floor = T::tol(LOG_FLOOR);
    let eig = reference.eig()?;
    let in_ref = eig.to_eigenbasis(rho.matrix());

    let mut kernel_weight = T::zero();
    let mut cross = T::zero();
    for (k, &q) in eig.eigenvalues.iter().enumerate() {
        let w = in_ref[(k, k)].re;
        if q > floor {
            cross += w * q.ln();
        } else {
            kernel_weight += w;
        }
    }
    if kernel_weight > floor {
        return Err(Error::SupportViolation {
            weight: kernel_weight.as_f64(),
        });
    }
    let s = von_neumann_entropy(rho)?;
    Ok(s + cross)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::HermitianOperator;

    fn diag(p: &[f64]) -> DensityOperator<f64> {
        DensityOperator::new(HermitianOperator::diagonal(p).into_matrix()).unwrap()
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(von_neumann_entropy(&diag(&[1.0, 0.0])).unwrap(), 0.0);
        let s = von_neumann_entropy(&DensityOperator::<f64>::maximally_mixed(2)).unwrap();
        assert!((s - std::f64::consts::LN_2).abs() < 1e-15);
        let s = von_neumann_entropy(&diag(&[0.8, 0.2])).unwrap();
        let expected = -0.8 * 0.8f64.ln() - 0.2 * 0.2f64.ln();
        assert!((s - expected).abs() < 1e-15);
        assert!((s - 0.5004).abs() < 1e-4);
    }

    #[test]
    fn relative_entropy_examples() {
        let rho = diag(&[0.8, 0.2]);
        assert!(relative_entropy(&rho, &rho).unwrap().abs() < 1e-15);

        let mixed = DensityOperator::maximally_mixed(2);
        let r = relative_entropy(&rho, &mixed).unwrap();
        let s = von_neumann_entropy(&rho).unwrap();
        assert!((r - (s - std::f64::consts::LN_2)).abs() < 1e-15);
        assert!((r + 0.1927).abs() < 1e-4);

        let up = diag(&[1.0, 0.0]);
        let down = diag(&[0.0, 1.0]);
        assert!(matches!(
            relative_entropy(&up, &down),
            Err(Error::SupportViolation { .. })
        ));
    }

    #[test]
    fn pure_reference_with_matching_support_is_allowed() {
        let up = diag(&[1.0, 0.0]);
        assert!(relative_entropy(&up, &up).unwrap().abs() < 1e-15);
    }
}
