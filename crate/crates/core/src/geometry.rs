//! Metric structure on the manifold of density operators.
//!
//! Tangent vectors at a state are traceless Hermitian operators and 1-forms
//! are observables, acting on states through `<F, rho> = tr(F rho)`. The
//! metric on 1-forms is the symmetrized correlation
//! `g(A, B) = tr[rho (AB + BA)/2]`; the raising map `R(B) = (rho B + B rho)/2`
//! turns 1-forms into vectors and its inverse, the lowering map, defines the
//! metric on vectors, `g(V, W) = tr[W L(V)]`.

use nalgebra::Complex;

use crate::error::{Error, Result};
use crate::operator::{
    check_dims, expectation, DensityOperator, HermitianOperator, SpectralDecomposition,
};
use crate::scalar::Real;

/// Smallest eigenvalue a base state needs for the lowering map to exist.
pub const FULL_RANK_TOL: f64 = 1e-10;
const TRACELESS_TOL: f64 = 1e-12;

/// Observable viewed as a 1-form on the state manifold.
#[derive(Debug, Clone, PartialEq)]
pub struct OneForm<T: Real> {
    pub value: HermitianOperator<T>,
}

impl<T: Real> OneForm<T> {
    pub fn new(value: HermitianOperator<T>) -> Self {
        Self { value }
    }

    /// The unit 1-form, pairing to one with every state.
    pub fn unit(dim: usize) -> Self {
        Self::new(HermitianOperator::identity(dim))
    }

    pub fn dim(&self) -> usize {
        self.value.dim()
    }
}

impl<T: Real> From<HermitianOperator<T>> for OneForm<T> {
    fn from(value: HermitianOperator<T>) -> Self {
        Self::new(value)
    }
}

/// Traceless Hermitian direction at a base state.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector<T: Real> {
    pub at: DensityOperator<T>,
    pub value: HermitianOperator<T>,
}

impl<T: Real> TangentVector<T> {
    pub fn new(at: DensityOperator<T>, value: HermitianOperator<T>) -> Result<Self> {
        check_dims(at.dim(), value.dim())?;
        let tr = value.trace();
        let scale = T::one().max(value.frobenius_norm());
        if tr.abs() > T::tol(TRACELESS_TOL) * scale {
            return Err(Error::NotTraceless { trace: tr.as_f64() });
        }
        Ok(Self { at, value })
    }
}

/// Infinitesimal displacement of a state in spectral coordinates: a change
/// `dp` of its eigenvalues plus a rotation `exp(i dtheta h)` of its
/// eigenbasis. `h` is written in the eigenbasis of the base state, with
/// eigenvalues ordered as [`crate::operator::eig_hermitian`] returns them.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentDecomposition<T: Real> {
    pub dp: Vec<T>,
    pub dtheta: T,
    pub h: HermitianOperator<T>,
}

impl<T: Real> TangentDecomposition<T> {
    pub fn new(dp: Vec<T>, dtheta: T, h: HermitianOperator<T>) -> Result<Self> {
        check_dims(dp.len(), h.dim())?;
        let sum = dp.iter().fold(T::zero(), |a, &x| a + x);
        let scale = dp.iter().fold(T::one(), |a, &x| a.max(x.abs()));
        if sum.abs() > T::tol(TRACELESS_TOL) * scale {
            return Err(Error::NotTraceless {
                trace: sum.as_f64(),
            });
        }
        Ok(Self { dp, dtheta, h })
    }

    pub fn dim(&self) -> usize {
        self.dp.len()
    }
}

/// `<F, rho> = tr(F rho)`.
pub fn pair<T: Real>(form: &OneForm<T>, rho: &DensityOperator<T>) -> Result<T> {
    expectation(rho, &form.value)
}

/// Raising map `R_rho(B) = (rho B + B rho) / 2`.
///
/// The result is traceless only when the form has zero mean at `rho`.
pub fn raise<T: Real>(rho: &DensityOperator<T>, form: &OneForm<T>) -> Result<HermitianOperator<T>> {
    rho.as_operator().anticommutator_half(&form.value)
}

fn full_rank_eig<T: Real>(rho: &DensityOperator<T>) -> Result<SpectralDecomposition<T>> {
    let eig = rho.eig()?;
    let min = eig.eigenvalues[eig.dim() - 1];
    if min <= T::tol(FULL_RANK_TOL) {
        return Err(Error::SingularBase {
            min_eigenvalue: min.as_f64(),
        });
    }
    Ok(eig)
}

/// Lowering map, the inverse of [`raise`]: solves `rho X + X rho = 2 V`.
///
/// In the eigenbasis of `rho` the solution is `X_jk = 2 V_jk / (p_j + p_k)`.
pub fn lower<T: Real>(
    rho: &DensityOperator<T>,
    vector: &HermitianOperator<T>,
) -> Result<OneForm<T>> {
    check_dims(rho.dim(), vector.dim())?;
    let eig = full_rank_eig(rho)?;
    Ok(OneForm::new(lower_with(&eig, vector)))
}

fn lower_with<T: Real>(
    eig: &SpectralDecomposition<T>,
    vector: &HermitianOperator<T>,
) -> HermitianOperator<T> {
    let p = &eig.eigenvalues;
    let two = T::lit(2.0);
    let mut v = eig.to_eigenbasis(vector.matrix());
    for j in 0..p.len() {
        for k in 0..p.len() {
            v[(j, k)] = v[(j, k)].scale(two / (p[j] + p[k]));
        }
    }
    HermitianOperator::from_matrix_unchecked(eig.from_eigenbasis(&v))
}

/// `g(A, B) = tr[rho (AB + BA) / 2]`.
pub fn metric_forms<T: Real>(
    rho: &DensityOperator<T>,
    a: &OneForm<T>,
    b: &OneForm<T>,
) -> Result<T> {
    check_dims(rho.dim(), a.dim())?;
    let sym = a.value.anticommutator_half(&b.value)?;
    expectation(rho, &sym)
}

/// `g(V, W) = tr[W L_rho(V)]`; positive definite for full-rank `rho`.
pub fn metric_vectors<T: Real>(
    rho: &DensityOperator<T>,
    v: &HermitianOperator<T>,
    w: &HermitianOperator<T>,
) -> Result<T> {
    check_dims(rho.dim(), v.dim())?;
    check_dims(rho.dim(), w.dim())?;
    let eig = full_rank_eig(rho)?;
    Ok(w.inner(&lower_with(&eig, v)))
}

/// Displacement `d rho` in the computational basis:
/// `sum_j dp_j |j><j| + i dtheta sum_{l,m} (p_m - p_l) h_lm |l><m|`
/// in the eigenbasis of `rho`, rotated back.
pub fn assemble_tangent<T: Real>(
    rho: &DensityOperator<T>,
    d: &TangentDecomposition<T>,
) -> Result<TangentVector<T>> {
    check_dims(rho.dim(), d.dim())?;
    let eig = rho.eig()?;
    let p = &eig.eigenvalues;
    let n = p.len();
    let h = d.h.matrix();
    let mut m = crate::operator::CMatrix::zeros(n, n);
    for l in 0..n {
        m[(l, l)] = Complex::new(d.dp[l], T::zero());
        for k in 0..n {
            if k != l {
                let i_dtheta = Complex::new(T::zero(), d.dtheta);
                m[(l, k)] += i_dtheta * h[(l, k)].scale(p[k] - p[l]);
            }
        }
    }
    let value = HermitianOperator::from_matrix_unchecked(eig.from_eigenbasis(&m));
    TangentVector::new(rho.clone(), value)
}

/// Line element in spectral coordinates,
/// `ds^2 = sum_k dp_k^2 / p_k + 2 dtheta^2 sum_{j != k} (p_j - p_k)^2 / (p_j + p_k) |h_jk|^2`.
pub fn line_element<T: Real>(rho: &DensityOperator<T>, d: &TangentDecomposition<T>) -> Result<T> {
    check_dims(rho.dim(), d.dim())?;
    let eig = full_rank_eig(rho)?;
    let p = &eig.eigenvalues;
    let n = p.len();
    let h = d.h.matrix();
    let classical = (0..n).fold(T::zero(), |a, k| a + d.dp[k] * d.dp[k] / p[k]);
    let mut rotation = T::zero();
    for j in 0..n {
        for k in 0..n {
            if j != k {
                let gap = p[j] - p[k];
                rotation += gap * gap / (p[j] + p[k]) * h[(j, k)].norm_sqr();
            }
        }
    }
    Ok(classical + T::lit(2.0) * d.dtheta * d.dtheta * rotation)
}

/// Zero-mean observable `A - <A, rho> 1`.
pub fn zero_mean_form<T: Real>(
    rho: &DensityOperator<T>,
    a: &HermitianOperator<T>,
) -> Result<OneForm<T>> {
    let mean = expectation(rho, a)?;
    Ok(OneForm::new(
        a - &HermitianOperator::identity(a.dim()).scaled(mean),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> HermitianOperator<f64> {
        HermitianOperator::pauli_x()
    }
    fn z() -> HermitianOperator<f64> {
        HermitianOperator::pauli_z()
    }
    fn diag(p: &[f64]) -> DensityOperator<f64> {
        DensityOperator::new(HermitianOperator::diagonal(p).into_matrix()).unwrap()
    }
    fn mixed() -> DensityOperator<f64> {
        DensityOperator::maximally_mixed(2)
    }
    fn dist(a: &HermitianOperator<f64>, b: &HermitianOperator<f64>) -> f64 {
        (a - b).frobenius_norm()
    }

    #[test]
    fn pair_examples() {
        assert!((pair(&OneForm::unit(2), &diag(&[0.3, 0.7])).unwrap() - 1.0).abs() < 1e-15);
        assert!((pair(&z().into(), &diag(&[0.8, 0.2])).unwrap() - 0.6).abs() < 1e-15);
        assert_eq!(pair(&x().into(), &mixed()).unwrap(), 0.0);
    }

    #[test]
    fn raise_examples() {
        let r = raise(&mixed(), &x().into()).unwrap();
        assert!(dist(&r, &x().scaled(0.5)) < 1e-15);
        let r = raise(&diag(&[0.8, 0.2]), &x().into()).unwrap();
        assert!(dist(&r, &x().scaled(0.5)) < 1e-15);
        let r = raise(&diag(&[0.8, 0.2]), &HermitianOperator::zeros(2).into()).unwrap();
        assert_eq!(r.frobenius_norm(), 0.0);
    }

    #[test]
    fn lower_examples() {
        let l = lower(&mixed(), &x()).unwrap();
        assert!(dist(&l.value, &x().scaled(2.0)) < 1e-14);
        let l = lower(&diag(&[0.8, 0.2]), &x()).unwrap();
        assert!(dist(&l.value, &x().scaled(2.0)) < 1e-14);
        assert!(matches!(
            lower(&diag(&[1.0, 0.0]), &x()),
            Err(Error::SingularBase { .. })
        ));
    }

    #[test]
    fn metric_form_examples() {
        assert!((metric_forms(&mixed(), &x().into(), &x().into()).unwrap() - 1.0).abs() < 1e-15);
        let rho = diag(&[0.9, 0.1]);
        assert!(
            (metric_forms(&rho, &OneForm::unit(2), &OneForm::unit(2)).unwrap() - 1.0).abs() < 1e-15
        );
        assert_eq!(
            metric_forms(&mixed(), &x().into(), &z().into()).unwrap(),
            0.0
        );
    }

    #[test]
    fn metric_vector_examples() {
        assert!((metric_vectors(&mixed(), &x(), &x()).unwrap() - 4.0).abs() < 1e-14);
        assert_eq!(
            metric_vectors(&mixed(), &HermitianOperator::zeros(2), &x()).unwrap(),
            0.0
        );
        let v = raise(&mixed(), &x().into()).unwrap();
        let g = metric_vectors(&mixed(), &v, &v).unwrap();
        let expected = metric_forms(&mixed(), &x().into(), &x().into()).unwrap();
        assert!((g - 1.0).abs() < 1e-14 && (g - expected).abs() < 1e-14);
    }

    #[test]
    fn line_element_examples() {
        let d = TangentDecomposition::new(vec![0.01, -0.01], 0.0, x()).unwrap();
        assert!((line_element(&mixed(), &d).unwrap() - 4e-4).abs() < 1e-18);

        let eps = 1e-3;
        let d = TangentDecomposition::new(vec![0.0, 0.0], eps, x()).unwrap();
        let ds2 = line_element(&diag(&[0.8, 0.2]), &d).unwrap();
        assert!((ds2 - 1.44 * eps * eps).abs() < 1e-16);

        let h = HermitianOperator::from_real(2, &[0.3, -1.1, -1.1, 2.0]).unwrap();
        let d = TangentDecomposition::new(vec![0.0, 0.0], 0.5, h).unwrap();
        assert_eq!(line_element(&mixed(), &d).unwrap(), 0.0);
    }

    #[test]
    fn line_element_matches_assembled_metric() {
        let rho = diag(&[0.8, 0.2]);
        let d = TangentDecomposition::new(vec![0.02, -0.02], 0.1, x()).unwrap();
        let t = assemble_tangent(&rho, &d).unwrap();
        let g = metric_vectors(&rho, &t.value, &t.value).unwrap();
        assert!((g - line_element(&rho, &d).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn decomposition_must_preserve_trace() {
        assert!(matches!(
            TangentDecomposition::new(vec![0.1, 0.0], 0.0, x()),
            Err(Error::NotTraceless { .. })
        ));
        assert!(matches!(
            TangentVector::new(mixed(), HermitianOperator::identity(2)),
            Err(Error::NotTraceless { .. })
        ));
    }

    #[test]
    fn zero_mean_form_examples() {
        let f = zero_mean_form(&mixed(), &z()).unwrap();
        assert!(dist(&f.value, &z()) < 1e-15);
        let rho = diag(&[0.8, 0.2]);
        let f = zero_mean_form(&rho, &z()).unwrap();
        let expected = z() - HermitianOperator::identity(2).scaled(0.6);
        assert!(dist(&f.value, &expected) < 1e-15);
        assert!(pair(&f, &rho).unwrap().abs() < 1e-15);
        let f = zero_mean_form(&rho, &HermitianOperator::identity(2)).unwrap();
        assert!(f.value.frobenius_norm() < 1e-15);
    }
}
