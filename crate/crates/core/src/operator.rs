//! Dense Hermitian operator algebra.
//!
//! Every operator is a dense `dim x dim` complex matrix stored in one fixed
//! computational basis. Observables, 1-forms and tangent vectors are all
//! [`HermitianOperator`]s; states are [`DensityOperator`]s.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Complex, ComplexField, DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Dense complex matrix.
pub type CMatrix<T> = DMatrix<Complex<T>>;

/// Absolute Hermiticity tolerance for unit-scale matrices.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Allowed deviation of a density operator's trace from one.
pub const TRACE_TOL: f64 = 1e-10;
/// Most negative eigenvalue accepted in a density operator.
pub const POSITIVITY_TOL: f64 = 1e-10;
/// Eigenvalues at or below this are treated as zero by logarithms.
pub const LOG_FLOOR: f64 = 1e-12;

const PHASE_TIE: f64 = 1e-8;

/// Hermitian operator on a finite-dimensional Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator<T: Real> {
    m: CMatrix<T>,
}

/// Hermitian, unit-trace, positive-semidefinite operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator<T: Real> {
    op: HermitianOperator<T>,
}

/// Eigen-decomposition `U diag(p) U^dagger` of a Hermitian operator.
///
/// Eigenvalues are sorted in descending order. Each eigenvector column is
/// rotated so that its largest-magnitude component (the first one, on ties)
/// is real and positive.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition<T: Real> {
    pub eigenvalues: Vec<T>,
    pub eigenvectors: CMatrix<T>,
}

/// Real functions that can be lifted to Hermitian operators through the
/// spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralFunction {
    Exp,
    /// Natural logarithm; eigenvalues at or below [`LOG_FLOOR`] are rejected.
    Log,
    /// Square root; negative eigenvalues within [`POSITIVITY_TOL`] map to zero.
    Sqrt,
    Abs,
}

fn c<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

/// Largest entry magnitude, at least one; used to scale absolute tolerances.
fn scale_of<T: Real>(m: &CMatrix<T>) -> T {
    m.iter().fold(T::one(), |acc, z| acc.max(z.modulus()))
}

/// Largest `|M_jk - conj(M_kj)|`.
pub fn hermitian_asymmetry<T: Real>(m: &CMatrix<T>) -> T {
    let n = m.nrows();
    let mut worst = T::zero();
    for j in 0..n {
        for k in j..n {
            let d = (m[(j, k)] - m[(k, j)].conj()).modulus();
            worst = worst.max(d);
        }
    }
    worst
}

/// `(M + M^dagger) / 2`, leaving already conjugate-symmetric pairs
/// untouched so the map is idempotent bit for bit.
fn symmetrize<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    let half = T::lit(0.5);
    let mut out = m.clone();
    for j in 0..m.nrows() {
        for k in j..m.ncols() {
            let (a, b) = (m[(j, k)], m[(k, j)].conj());
            if a != b {
                let s = (a + b) * half;
                out[(j, k)] = s;
                out[(k, j)] = s.conj();
            }
        }
    }
    out
}

impl<T: Real> HermitianOperator<T> {
    /// Validates and symmetrizes a raw matrix.
    pub fn new(raw: CMatrix<T>) -> Result<Self> {
        let (rows, cols) = raw.shape();
        if rows != cols {
            return Err(Error::NonSquare { rows, cols });
        }
        if rows == 0 {
            return Err(Error::EmptyOperator);
        }
        for j in 0..rows {
            for k in 0..cols {
                let z = raw[(j, k)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::NonFinite { row: j, col: k });
                }
            }
        }
        let asym = hermitian_asymmetry(&raw);
        if asym > T::tol(HERMITIAN_TOL) * scale_of(&raw) {
            return Err(Error::NotHermitian {
                asymmetry: asym.as_f64(),
            });
        }
        Ok(Self {
            m: symmetrize(&raw),
        })
    }

    /// Wraps a matrix known to be Hermitian up to rounding, symmetrizing it.
    pub(crate) fn from_matrix_unchecked(m: CMatrix<T>) -> Self {
        Self { m: symmetrize(&m) }
    }

    /// Builds an operator from real entries.
    pub fn from_real(dim: usize, entries: &[T]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Self::new(CMatrix::from_row_iterator(
            dim,
            dim,
            entries.iter().map(|&x| c(x)),
        ))
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            m: CMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            m: CMatrix::identity(dim, dim),
        }
    }

    pub fn diagonal(values: &[T]) -> Self {
        let n = values.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = c(v);
        }
        Self { m }
    }

    /// Matrix unit `|row><col| + |col><row|` (real symmetric part of `e_ij`).
    pub fn symmetric_unit(dim: usize, row: usize, col: usize) -> Self {
        let mut m = CMatrix::zeros(dim, dim);
        m[(row, col)] += c(T::one());
        m[(col, row)] += c(T::one());
        Self { m }
    }

    pub fn pauli_x() -> Self {
        Self::symmetric_unit(2, 0, 1)
    }

    pub fn pauli_y() -> Self {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 1)] = Complex::new(T::zero(), -T::one());
        m[(1, 0)] = Complex::new(T::zero(), T::one());
        Self { m }
    }

    pub fn pauli_z() -> Self {
        Self::diagonal(&[T::one(), -T::one()])
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.m
    }

    /// Real part of the trace.
    pub fn trace(&self) -> T {
        self.m.trace().re
    }

    pub fn frobenius_norm(&self) -> T {
        self.m
            .iter()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr())
            .sqrt()
    }

    /// Hilbert-Schmidt inner product `tr(A B)` (real for Hermitian pairs).
    pub fn inner(&self, other: &Self) -> T {
        let n = self.dim();
        let mut acc = T::zero();
        for j in 0..n {
            for k in 0..n {
                acc += (self.m[(j, k)] * other.m[(k, j)]).re;
            }
        }
        acc
    }

    pub fn scaled(&self, a: T) -> Self {
        Self {
            m: self.m.map(|z| z * a),
        }
    }

    /// `(A B + B A) / 2`.
    pub fn anticommutator_half(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        let p = &self.m * &other.m;
        Ok(Self::from_matrix_unchecked(
            (&p + p.adjoint()).map(|z| z * T::lit(0.5)),
        ))
    }

    /// Part of the operator orthogonal to the identity, `A - tr(A)/n`.
    pub fn traceless_part(&self) -> Self {
        let shift = self.trace() / T::lit(self.dim() as f64);
        self - &Self::identity(self.dim()).scaled(shift)
    }

    pub fn eig(&self) -> Result<SpectralDecomposition<T>> {
        eig_hermitian(self)
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Result<Vec<T>> {
        Ok(eig_hermitian(self)?.eigenvalues)
    }

    /// Largest absolute eigenvalue.
    pub fn spectral_radius(&self) -> Result<T> {
        let ev = self.eigenvalues()?;
        Ok(ev.iter().fold(T::zero(), |a, &x| a.max(x.abs())))
    }

    pub fn apply(&self, f: SpectralFunction) -> Result<Self> {
        apply_spectral_function(self, f)
    }
}

pub(crate) fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimMismatch { expected, found });
    }
    Ok(())
}

impl<T: Real> Add for &HermitianOperator<T> {
    type Output = HermitianOperator<T>;
    fn add(self, rhs: Self) -> HermitianOperator<T> {
        assert_eq!(self.dim(), rhs.dim(), "operator dimensions differ");
        HermitianOperator {
            m: &self.m + &rhs.m,
        }
    }
}

impl<T: Real> Sub for &HermitianOperator<T> {
    type Output = HermitianOperator<T>;
    fn sub(self, rhs: Self) -> HermitianOperator<T> {
        assert_eq!(self.dim(), rhs.dim(), "operator dimensions differ");
        HermitianOperator {
            m: &self.m - &rhs.m,
        }
    }
}

impl<T: Real> Add for HermitianOperator<T> {
    type Output = HermitianOperator<T>;
    fn add(self, rhs: Self) -> HermitianOperator<T> {
        &self + &rhs
    }
}

impl<T: Real> Sub for HermitianOperator<T> {
    type Output = HermitianOperator<T>;
    fn sub(self, rhs: Self) -> HermitianOperator<T> {
        &self - &rhs
    }
}

impl<T: Real> Neg for HermitianOperator<T> {
    type Output = HermitianOperator<T>;
    fn neg(self) -> HermitianOperator<T> {
        HermitianOperator { m: -self.m }
    }
}

impl<T: Real> Mul<T> for &HermitianOperator<T> {
    type Output = HermitianOperator<T>;
    fn mul(self, a: T) -> HermitianOperator<T> {
        self.scaled(a)
    }
}

impl<T: Real> Mul<T> for HermitianOperator<T> {
    type Output = HermitianOperator<T>;
    fn mul(self, a: T) -> HermitianOperator<T> {
        self.scaled(a)
    }
}

impl<T: Real> DensityOperator<T> {
    /// Validates a raw matrix as a quantum state.
    pub fn new(raw: CMatrix<T>) -> Result<Self> {
        Self::from_hermitian(HermitianOperator::new(raw)?)
    }

    pub fn from_hermitian(op: HermitianOperator<T>) -> Result<Self> {
        let tr = op.trace();
        if (tr - T::one()).abs() > T::tol(TRACE_TOL) {
            return Err(Error::TraceNotOne { trace: tr.as_f64() });
        }
        let ev = op.eigenvalues()?;
        let min = ev[ev.len() - 1];
        if min < -T::tol(POSITIVITY_TOL) {
            return Err(Error::NotPositive {
                min_eigenvalue: min.as_f64(),
            });
        }
        Ok(Self { op })
    }

    /// The maximally mixed state `I / n`.
    pub fn maximally_mixed(dim: usize) -> Self {
        let op = HermitianOperator::identity(dim).scaled(T::one() / T::lit(dim as f64));
        Self { op }
    }

    /// Pure state `|psi><psi|` from a (not necessarily normalized) vector.
    pub fn pure(psi: &[Complex<T>]) -> Result<Self> {
        let norm = psi.iter().fold(T::zero(), |a, z| a + z.norm_sqr()).sqrt();
        if psi.is_empty() || norm <= T::zero() {
            return Err(Error::InvalidArgument("zero state vector".into()));
        }
        let v = nalgebra::DVector::from_iterator(psi.len(), psi.iter().map(|z| z.unscale(norm)));
        Self::from_hermitian(HermitianOperator::from_matrix_unchecked(&v * v.adjoint()))
    }

    /// Single-qubit state `(I + x X + y Y + z Z) / 2`.
    pub fn from_bloch(x: T, y: T, z: T) -> Result<Self> {
        let half = T::lit(0.5);
        let op = HermitianOperator::identity(2).scaled(half)
            + HermitianOperator::pauli_x().scaled(x * half)
            + HermitianOperator::pauli_y().scaled(y * half)
            + HermitianOperator::pauli_z().scaled(z * half);
        Self::from_hermitian(op)
    }

    /// Wraps an operator assumed to be a state, skipping the spectral check.
    pub(crate) fn from_hermitian_unchecked(op: HermitianOperator<T>) -> Self {
        Self { op }
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn as_operator(&self) -> &HermitianOperator<T> {
        &self.op
    }

    pub fn into_operator(self) -> HermitianOperator<T> {
        self.op
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        self.op.matrix()
    }

    pub fn eig(&self) -> Result<SpectralDecomposition<T>> {
        self.op.eig()
    }

    pub fn eigenvalues(&self) -> Result<Vec<T>> {
        self.op.eigenvalues()
    }

    /// Conjugation `U rho U^dagger` by a unitary matrix.
    pub fn conjugate_by(&self, u: &CMatrix<T>) -> Result<Self> {
        check_dims(self.dim(), u.nrows())?;
        Self::from_hermitian(HermitianOperator::from_matrix_unchecked(
            u * self.op.matrix() * u.adjoint(),
        ))
    }
}

/// Validates `raw` as Hermitian; see [`HermitianOperator::new`].
pub fn make_hermitian<T: Real>(raw: CMatrix<T>) -> Result<HermitianOperator<T>> {
    HermitianOperator::new(raw)
}

/// Validates `raw` as a density operator; see [`DensityOperator::new`].
pub fn make_density<T: Real>(raw: CMatrix<T>) -> Result<DensityOperator<T>> {
    DensityOperator::new(raw)
}

pub fn eig_hermitian<T: Real>(h: &HermitianOperator<T>) -> Result<SpectralDecomposition<T>> {
    let n = h.dim();
    let eig = SymmetricEigen::try_new(h.m.clone(), T::default_epsilon(), 200 * n.max(8))
        .ok_or(Error::ConvergenceFailure)?;
    if eig.eigenvalues.iter().any(|x| !x.is_finite()) {
        return Err(Error::ConvergenceFailure);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    let tie = T::one() - T::lit(PHASE_TIE);
    let mut vectors = CMatrix::zeros(n, n);
    let mut values = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        values.push(eig.eigenvalues[src]);
        let col = eig.eigenvectors.column(src);
        let max = col.iter().fold(T::zero(), |a, z| a.max(z.modulus()));
        let pivot = col
            .iter()
            .position(|z| z.modulus() >= max * tie)
            .unwrap_or(0);
        let z = col[pivot];
        let phase = if z.modulus() > T::zero() {
            z.conj().unscale(z.modulus())
        } else {
            c(T::one())
        };
        for i in 0..n {
            vectors[(i, dst)] = col[i] * phase;
        }
        // Pivot exactly real after rotation.
        vectors[(pivot, dst)] = c(vectors[(pivot, dst)].modulus());
    }
    Ok(SpectralDecomposition {
        eigenvalues: values,
        eigenvectors: vectors,
    })
}

impl<T: Real> SpectralDecomposition<T> {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `U diag(f(p)) U^dagger`.
    pub fn map<F: Fn(T) -> T>(&self, f: F) -> HermitianOperator<T> {
        let weights: Vec<T> = self.eigenvalues.iter().map(|&p| f(p)).collect();
        self.compose(&weights)
    }

    /// `U diag(weights) U^dagger`.
    pub fn compose(&self, weights: &[T]) -> HermitianOperator<T> {
        let u = &self.eigenvectors;
        let mut scaled = u.clone();
        for (k, &w) in weights.iter().enumerate() {
            scaled.column_mut(k).scale_mut(w);
        }
        HermitianOperator::from_matrix_unchecked(scaled * u.adjoint())
    }

    pub fn reconstruct(&self) -> HermitianOperator<T> {
        self.compose(&self.eigenvalues)
    }

    /// Expresses `op` in this eigenbasis: `U^dagger op U`.
    pub fn to_eigenbasis(&self, op: &CMatrix<T>) -> CMatrix<T> {
        self.eigenvectors.adjoint() * op * &self.eigenvectors
    }

    /// Inverse of [`Self::to_eigenbasis`].
    pub fn from_eigenbasis(&self, op: &CMatrix<T>) -> CMatrix<T> {
        &self.eigenvectors * op * self.eigenvectors.adjoint()
    }
}

pub fn apply_spectral_function<T: Real>(
    h: &HermitianOperator<T>,
    f: SpectralFunction,
) -> Result<HermitianOperator<T>> {
    let eig = eig_hermitian(h)?;
    match f {
        SpectralFunction::Exp => Ok(eig.map(|p| p.exp())),
        SpectralFunction::Log => {
            let floor = T::tol(LOG_FLOOR);
            if let Some(&p) = eig.eigenvalues.iter().find(|&&p| p <= floor) {
                return Err(Error::DomainError {
                    eigenvalue: p.as_f64(),
                });
            }
            Ok(eig.map(|p| p.ln()))
        }
        SpectralFunction::Sqrt => {
            let slack = T::tol(POSITIVITY_TOL);
            if let Some(&p) = eig.eigenvalues.iter().find(|&&p| p < -slack) {
                return Err(Error::DomainError {
                    eigenvalue: p.as_f64(),
                });
            }
            Ok(eig.map(|p| p.max(T::zero()).sqrt()))
        }
        SpectralFunction::Abs => Ok(eig.map(|p| p.abs())),
    }
}

/// `tr(rho A)`.
pub fn expectation<T: Real>(rho: &DensityOperator<T>, a: &HermitianOperator<T>) -> Result<T> {
    check_dims(rho.dim(), a.dim())?;
    let (r, m) = (rho.matrix(), a.matrix());
    let n = rho.dim();
    let mut acc = Complex::new(T::zero(), T::zero());
    for j in 0..n {
        for k in 0..n {
            acc += r[(j, k)] * m[(k, j)];
        }
    }
    if acc.im.abs() > T::tol(HERMITIAN_TOL) * scale_of(m) {
        return Err(Error::NonRealResult {
            imaginary: acc.im.as_f64(),
        });
    }
    Ok(acc.re)
}

/// Frobenius norm of `AB - BA`.
pub fn commutator_norm<T: Real>(a: &HermitianOperator<T>, b: &HermitianOperator<T>) -> Result<T> {
    check_dims(a.dim(), b.dim())?;
    let ab = a.matrix() * b.matrix();
    let ba = b.matrix() * a.matrix();
    Ok((ab - ba)
        .iter()
        .fold(T::zero(), |acc, z| acc + z.norm_sqr())
        .sqrt())
}

/// Trace distance `||rho - sigma||_1 / 2`.
pub fn trace_distance<T: Real>(rho: &DensityOperator<T>, sigma: &DensityOperator<T>) -> Result<T> {
    check_dims(rho.dim(), sigma.dim())?;
    let diff = rho.as_operator() - sigma.as_operator();
    let ev = diff.eigenvalues()?;
    Ok(ev.iter().fold(T::zero(), |a, x| a + x.abs()) * T::lit(0.5))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2(e: [[(f64, f64); 2]; 2]) -> CMatrix<f64> {
        CMatrix::from_fn(2, 2, |j, k| Complex::new(e[j][k].0, e[j][k].1))
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn make_hermitian_accepts_pauli_z() {
        let z = make_hermitian(m2([[(1.0, 0.0), (0.0, 0.0)], [(0.0, 0.0), (-1.0, 0.0)]])).unwrap();
        assert_eq!(z, HermitianOperator::pauli_z());
    }

    #[test]
    fn make_hermitian_rejects_antisymmetric_imaginary() {
        let err = make_hermitian(m2([[(0.0, 0.0), (0.0, 1.0)], [(0.0, 1.0), (0.0, 0.0)]]));
        assert!(matches!(err, Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn make_hermitian_symmetrizes_tiny_asymmetry() {
        let raw = m2([[(1.0, 0.0), (0.0, 1e-13)], [(0.0, -1.2e-13), (2.0, 0.0)]]);
        let h = make_hermitian(raw).unwrap();
        let m = h.matrix();
        assert_eq!(m[(0, 1)], m[(1, 0)].conj());
        assert!(close(m[(0, 1)].im, 1.1e-13, 1e-20));
    }

    #[test]
    fn make_hermitian_rejects_non_square_and_non_finite() {
        let raw = CMatrix::<f64>::zeros(2, 3);
        assert_eq!(
            make_hermitian(raw),
            Err(Error::NonSquare { rows: 2, cols: 3 })
        );
        let mut raw = CMatrix::<f64>::zeros(2, 2);
        raw[(1, 1)] = Complex::new(f64::NAN, 0.0);
        assert!(matches!(make_hermitian(raw), Err(Error::NonFinite { .. })));
    }

    #[test]
    fn make_density_examples() {
        let mixed = CMatrix::<f64>::identity(2, 2).map(|z| z * 0.5);
        assert!(make_density(mixed).is_ok());
        let diag = HermitianOperator::diagonal(&[0.8, 0.2]).into_matrix();
        assert!(make_density(diag).is_ok());
        let bad = HermitianOperator::diagonal(&[1.2, -0.2]).into_matrix();
        assert!(matches!(make_density(bad), Err(Error::NotPositive { .. })));
        let unnormalized = HermitianOperator::diagonal(&[0.7, 0.2]).into_matrix();
        assert!(matches!(
            make_density(unnormalized),
            Err(Error::TraceNotOne { .. })
        ));
    }

    #[test]
    fn eig_pauli_z_is_identity_basis() {
        let d = HermitianOperator::<f64>::pauli_z().eig().unwrap();
        assert_eq!(d.eigenvalues, vec![1.0, -1.0]);
        let id = CMatrix::<f64>::identity(2, 2);
        assert!((d.eigenvectors - id).norm() < 1e-14);
    }

    #[test]
    fn eig_pauli_x_phase_convention() {
        let d = HermitianOperator::<f64>::pauli_x().eig().unwrap();
        assert!(close(d.eigenvalues[0], 1.0, 1e-14));
        assert!(close(d.eigenvalues[1], -1.0, 1e-14));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let expected = m2([[(s, 0.0), (s, 0.0)], [(s, 0.0), (-s, 0.0)]]);
        assert!((d.eigenvectors - expected).norm() < 1e-14);
    }

    #[test]
    fn eig_degenerate_identity() {
        let d = HermitianOperator::<f64>::identity(3).eig().unwrap();
        for p in d.eigenvalues {
            assert!(close(p, 1.0, 1e-15));
        }
    }

    #[test]
    fn spectral_function_examples() {
        let e = apply_spectral_function(&HermitianOperator::<f64>::zeros(2), SpectralFunction::Exp)
            .unwrap();
        assert!((e.matrix() - CMatrix::identity(2, 2)).norm() < 1e-15);

        let ln2 = std::f64::consts::LN_2;
        let e = HermitianOperator::pauli_z()
            .scaled(ln2)
            .apply(SpectralFunction::Exp)
            .unwrap();
        let expected = HermitianOperator::diagonal(&[2.0, 0.5]);
        assert!((e.matrix() - expected.matrix()).norm() < 1e-14);

        let half = HermitianOperator::<f64>::identity(2).scaled(0.5);
        let l = half.apply(SpectralFunction::Log).unwrap();
        assert!((l.matrix() - CMatrix::identity(2, 2).map(|z| z * -ln2)).norm() < 1e-14);
    }

    #[test]
    fn log_rejects_vanishing_eigenvalue() {
        let h = HermitianOperator::<f64>::diagonal(&[1.0, 0.0]);
        assert!(matches!(
            h.apply(SpectralFunction::Log),
            Err(Error::DomainError { .. })
        ));
    }

    #[test]
    fn expectation_examples() {
        let z = HermitianOperator::<f64>::pauli_z();
        let x = HermitianOperator::<f64>::pauli_x();
        let mixed = DensityOperator::maximally_mixed(2);
        assert!(close(expectation(&mixed, &z).unwrap(), 0.0, 1e-15));
        let diag =
            DensityOperator::new(HermitianOperator::diagonal(&[0.8, 0.2]).into_matrix()).unwrap();
        assert!(close(expectation(&diag, &z).unwrap(), 0.6, 1e-15));
        let rho = DensityOperator::new(
            HermitianOperator::from_real(2, &[0.8, 0.2, 0.2, 0.2])
                .unwrap()
                .into_matrix(),
        )
        .unwrap();
        assert!(close(expectation(&rho, &x).unwrap(), 0.4, 1e-15));
        assert!(matches!(
            expectation(&rho, &HermitianOperator::identity(3)),
            Err(Error::DimMismatch { .. })
        ));
    }

    #[test]
    fn commutator_norm_examples() {
        let z = HermitianOperator::<f64>::pauli_z();
        let x = HermitianOperator::<f64>::pauli_x();
        let d = HermitianOperator::diagonal(&[3.0, 7.0]);
        assert_eq!(commutator_norm(&z, &d).unwrap(), 0.0);
        assert!(close(
            commutator_norm(&x, &z).unwrap(),
            2.0 * 2f64.sqrt(),
            1e-14
        ));
        assert_eq!(commutator_norm(&x, &x).unwrap(), 0.0);
    }

    #[test]
    fn trace_distance_of_orthogonal_pure_states_is_one() {
        let a = DensityOperator::<f64>::from_bloch(0.0, 0.0, 1.0).unwrap();
        let b = DensityOperator::<f64>::from_bloch(0.0, 0.0, -1.0).unwrap();
        assert!(close(trace_distance(&a, &b).unwrap(), 1.0, 1e-14));
    }

    #[test]
    fn single_precision_operators_work() {
        let d = HermitianOperator::<f32>::pauli_x().eig().unwrap();
        assert!((d.eigenvalues[0] - 1.0).abs() < 1e-6);
        let rho = DensityOperator::<f32>::maximally_mixed(2);
        assert!(
            expectation(&rho, &HermitianOperator::pauli_z())
                .unwrap()
                .abs()
                < 1e-6
        );
    }
}
