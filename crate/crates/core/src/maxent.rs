//! Maximum-entropy estimation of a density operator from expectation-value
//! constraints, and the single-observable tilt of a prior state.
//!
//! The estimate has the canonical form `rho = exp(-lambda0 - sum_j lambda_j A_j)`
//! with `lambda0 = ln Z`. The multipliers are found by minimizing the convex
//! dual `ln Z(lambda) + sum_j lambda_j t_j`, whose gradient
//! `t_j - <A_j>_{rho(lambda)}` vanishes exactly at the constrained maximum.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::operator::{
    check_dims, CMatrix, DensityOperator, HermitianOperator, SpectralDecomposition,
};
use crate::roots::{decreasing_root, RootOptions};
use crate::scalar::Real;

/// Largest `|exponent|` accepted before `exp` is considered to overflow.
pub const EXPONENT_GUARD: f64 = 700.0;
/// Multipliers beyond this magnitude signal a target on the boundary of the
/// achievable set.
pub const MULTIPLIER_CAP: f64 = 1e4;
/// Gram-matrix condition number above which constraints count as dependent.
pub const DEPENDENCE_CONDITION: f64 = 1e12;

const ARMIJO_SLOPE: f64 = 1e-4;
const ARMIJO_SHRINK: f64 = 0.5;
const MAX_BACKTRACKS: usize = 60;

/// Expectation-value constraints `tr(rho A_j) = t_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintSet<T: Real> {
    observables: Vec<HermitianOperator<T>>,
    targets: Vec<T>,
    dim: usize,
}

impl<T: Real> ConstraintSet<T> {
    /// Validates the constraints.
    ///
    /// All observables must share one dimension, each target must lie in the
    /// closed spectral range of its observable, and the traceless parts of
    /// the observables must be linearly independent.
    pub fn new(
        observables: Vec<HermitianOperator<T>>,
        targets: Vec<T>,
        dim: usize,
    ) -> Result<Self> {
        check_dims(observables.len(), targets.len())?;
        for a in &observables {
            check_dims(dim, a.dim())?;
        }
        for (j, (a, &t)) in observables.iter().zip(&targets).enumerate() {
            if !t.is_finite() {
                return Err(Error::InvalidArgument(format!("target {j} is not finite")));
            }
            let ev = a.eigenvalues()?;
            let (hi, lo) = (ev[0], ev[ev.len() - 1]);
            let slack = T::tol(1e-12) * (T::one() + hi.abs().max(lo.abs()));
            if t < lo - slack || t > hi + slack {
                return Err(Error::infeasible(format!(
                    "target {} of constraint {j} lies outside the spectrum [{}, {}]",
                    t.as_f64(),
                    lo.as_f64(),
                    hi.as_f64()
                )));
            }
        }
        if !observables.is_empty() {
            let condition = gram_condition(&observables)?;
            if !(condition <= T::lit(DEPENDENCE_CONDITION)) {
                return Err(Error::DependentConstraints {
                    condition: condition.as_f64(),
                });
            }
        }
        Ok(Self {
            observables,
            targets,
            dim,
        })
    }

    /// No constraints on a `dim`-dimensional space.
    pub fn unconstrained(dim: usize) -> Self {
        Self {
            observables: Vec::new(),
            targets: Vec::new(),
            dim,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.observables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observables.is_empty()
    }

    pub fn observables(&self) -> &[HermitianOperator<T>] {
        &self.observables
    }

    pub fn targets(&self) -> &[T] {
        &self.targets
    }

    /// Same observables with different targets.
    pub fn with_targets(&self, targets: Vec<T>) -> Result<Self> {
        Self::new(self.observables.clone(), targets, self.dim)
    }
}

/// Condition number of the Gram matrix `tr(B_j B_k)` of traceless parts.
fn gram_condition<T: Real>(observables: &[HermitianOperator<T>]) -> Result<T> {
    let parts: Vec<_> = observables.iter().map(|a| a.traceless_part()).collect();
    let m = parts.len();
    let gram = DMatrix::from_fn(m, m, |j, k| parts[j].inner(&parts[k]));
    let ev = SymmetricEigen::try_new(gram, T::default_epsilon(), 0)
        .ok_or(Error::ConvergenceFailure)?
        .eigenvalues;
    let max = ev.iter().fold(T::zero(), |a, &x| a.max(x));
    let min = ev.iter().fold(max, |a, &x| a.min(x));
    if min <= T::zero() {
        return Ok(T::max_value().unwrap_or(T::lit(f64::MAX)));
    }
    Ok(max / min)
}

/// Solver settings shared by the MaxEnt and prior-tilt routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions<T> {
    /// Maximum allowed `|<A_j> - t_j|` at the solution.
    pub tol: T,
    pub max_iter: usize,
}

impl<T: Real> Default for SolverOptions<T> {
    fn default() -> Self {
        Self {
            tol: T::tol(1e-10),
            max_iter: 500,
        }
    }
}

/// Result of [`solve_maxent`].
#[derive(Debug, Clone, PartialEq)]
pub struct MaxEntSolution<T: Real> {
    pub multipliers: Vec<T>,
    /// `ln Z` at the solution.
    pub lambda0: T,
    pub estimate: DensityOperator<T>,
    pub achieved: Vec<T>,
    /// Maximum entropy in nats, `lambda0 + sum_j lambda_j t_j`.
    pub s_max: T,
    pub iterations: usize,
    /// `max_j |achieved_j - t_j|`.
    pub residual: T,
}

/// Generator `-sum_k lambda_k A_k` of the canonical state.
fn generator<T: Real>(
    multipliers: &[T],
    observables: &[HermitianOperator<T>],
) -> Result<HermitianOperator<T>> {
    check_dims(multipliers.len(), observables.len())?;
    let dim = match observables.first() {
        Some(a) => a.dim(),
        None => {
            return Err(Error::InvalidArgument(
                "dimension cannot be inferred without observables".into(),
            ))
        }
    };
    let mut h = HermitianOperator::zeros(dim);
    for (&l, a) in multipliers.iter().zip(observables) {
        check_dims(dim, a.dim())?;
        h = &h - &a.scaled(l);
    }
    Ok(h)
}

fn guard_overflow<T: Real>(eigenvalues: &[T]) -> Result<()> {
    let radius = eigenvalues.iter().fold(T::zero(), |a, &x| a.max(x.abs()));
    if radius > T::lit(EXPONENT_GUARD) {
        return Err(Error::Overflow {
            exponent: radius.as_f64(),
        });
    }
    Ok(())
}

/// Canonical state and `ln Z` for a generator, stabilized by shifting the
/// spectrum so the largest exponent is zero.
struct Canonical<T: Real> {
    log_z: T,
    state: DensityOperator<T>,
}

fn canonical<T: Real>(eig: &SpectralDecomposition<T>) -> Canonical<T> {
    let top = eig.eigenvalues[0];
    let w: Vec<T> = eig.eigenvalues.iter().map(|&e| (e - top).exp()).collect();
    let sum = w.iter().fold(T::zero(), |a, &x| a + x);
    let p: Vec<T> = w.iter().map(|&x| x / sum).collect();
    Canonical {
        log_z: top + sum.ln(),
        state: DensityOperator::from_hermitian_unchecked(eig.compose(&p)),
    }
}

fn canonical_at<T: Real>(
    multipliers: &[T],
    observables: &[HermitianOperator<T>],
) -> Result<Canonical<T>> {
    let eig = generator(multipliers, observables)?.eig()?;
    Ok(canonical(&eig))
}

/// `Z = tr exp(-sum_k lambda_k A_k)`.
pub fn partition_function<T: Real>(
    multipliers: &[T],
    observables: &[HermitianOperator<T>],
) -> Result<T> {
    let ev = generator(multipliers, observables)?.eigenvalues()?;
    guard_overflow(&ev)?;
    Ok(ev.iter().fold(T::zero(), |a, &e| a + e.exp()))
}

/// `exp(-sum_k lambda_k A_k) / Z`.
pub fn gibbs_state<T: Real>(
    multipliers: &[T],
    observables: &[HermitianOperator<T>],
) -> Result<DensityOperator<T>> {
    let eig = generator(multipliers, observables)?.eig()?;
    guard_overflow(&eig.eigenvalues)?;
    Ok(canonical(&eig).state)
}

/// Dual objective value and gradient at one multiplier vector.
#[derive(Debug, Clone, PartialEq)]
pub struct DualPoint<T: Real> {
    /// `ln Z(lambda) + sum_j lambda_j t_j`.
    pub value: T,
    /// `t_j - <A_j>_{rho(lambda)}`.
    pub gradient: Vec<T>,
}

struct DualEval<T: Real> {
    value: T,
    gradient: DVector<T>,
    log_z: T,
    state: DensityOperator<T>,
    achieved: Vec<T>,
}

fn evaluate_dual<T: Real>(multipliers: &DVector<T>, cs: &ConstraintSet<T>) -> Result<DualEval<T>> {
    if cs.is_empty() {
        let n = T::lit(cs.dim as f64);
        return Ok(DualEval {
            value: n.ln(),
            gradient: DVector::zeros(0),
            log_z: n.ln(),
            state: DensityOperator::maximally_mixed(cs.dim),
            achieved: Vec::new(),
        });
    }
    let c = canonical_at(multipliers.as_slice(), &cs.observables)?;
    let achieved: Vec<T> = cs
        .observables
        .iter()
        .map(|a| c.state.as_operator().inner(a))
        .collect();
    let value = c.log_z + multipliers.dot(&DVector::from_column_slice(&cs.targets));
    let gradient = DVector::from_iterator(
        achieved.len(),
        cs.targets.iter().zip(&achieved).map(|(&t, &a)| t - a),
    );
    Ok(DualEval {
        value,
        gradient,
        log_z: c.log_z,
        state: c.state,
        achieved,
    })
}

/// Convex dual of the MaxEnt problem and its exact gradient.
pub fn dual_objective<T: Real>(multipliers: &[T], cs: &ConstraintSet<T>) -> Result<DualPoint<T>> {
    check_dims(cs.len(), multipliers.len())?;
    if !cs.is_empty() {
        let ev = generator(multipliers, &cs.observables)?.eigenvalues()?;
        guard_overflow(&ev)?;
    }
    let e = evaluate_dual(&DVector::from_column_slice(multipliers), cs)?;
    Ok(DualPoint {
        value: e.value,
        gradient: e.gradient.iter().copied().collect(),
    })
}

fn max_abs<T: Real>(v: &DVector<T>) -> T {
    v.iter().fold(T::zero(), |a, &x| a.max(x.abs()))
}

/// Rejects targets sitting within `tol` of the edge of an observable's
/// spectrum; those require a state supported on an eigenspace, reachable
/// only in the limit of infinite multipliers.
fn check_interior<T: Real>(cs: &ConstraintSet<T>, tol: T) -> Result<()> {
    for (j, (a, &t)) in cs.observables.iter().zip(&cs.targets).enumerate() {
        let ev = a.eigenvalues()?;
        let (hi, lo) = (ev[0], ev[ev.len() - 1]);
        if t >= hi - tol || t <= lo + tol {
            return Err(Error::infeasible(format!(
                "target {} of constraint {j} is on the boundary of the achievable range [{}, {}]",
                t.as_f64(),
                lo.as_f64(),
                hi.as_f64()
            )));
        }
    }
    Ok(())
}

/// Rejects a converged solution whose targets lie (to within `tol`) on a
/// supporting hyperplane of the joint numerical range, in the direction the
/// multipliers grew.
fn check_not_on_face<T: Real>(
    multipliers: &DVector<T>,
    cs: &ConstraintSet<T>,
    tol: T,
) -> Result<()> {
    let norm = multipliers.norm();
    if norm <= T::zero() {
        return Ok(());
    }
    let u = multipliers.unscale(norm);
    let mut b = HermitianOperator::zeros(cs.dim);
    for (&w, a) in u.iter().zip(&cs.observables) {
        b = &b + &a.scaled(w);
    }
    let ev = b.eigenvalues()?;
    let floor = ev[ev.len() - 1];
    let projected = u
        .iter()
        .zip(&cs.targets)
        .fold(T::zero(), |acc, (&w, &t)| acc + w * t);
    if projected - floor <= tol {
        return Err(Error::infeasible(format!(
            "targets lie on the boundary of the achievable set (gap {:e})",
            (projected - floor).as_f64()
        )));
    }
    Ok(())
}

/// Maximum-entropy state consistent with the constraints.
///
/// Minimizes the dual with BFGS and an Armijo backtracking line search,
/// starting from the maximally mixed state (`lambda = 0`).
pub fn solve_maxent<T: Real>(
    cs: &ConstraintSet<T>,
    opts: SolverOptions<T>,
) -> Result<MaxEntSolution<T>> {
    if cs.is_empty() {
        let n = T::lit(cs.dim as f64);
        return Ok(MaxEntSolution {
            multipliers: Vec::new(),
            lambda0: n.ln(),
            estimate: DensityOperator::maximally_mixed(cs.dim),
            achieved: Vec::new(),
            s_max: n.ln(),
            iterations: 0,
            residual: T::zero(),
        });
    }
    check_interior(cs, opts.tol)?;

    let m = cs.len();
    let cap = T::lit(MULTIPLIER_CAP);
    let eps = T::default_epsilon();
    let mut lambda = DVector::<T>::zeros(m);
    let mut cur = evaluate_dual(&lambda, cs)?;
    let mut inv_hessian = DMatrix::<T>::identity(m, m);
    let mut fresh = true;
    let mut iterations = 0;

    loop {
        let residual = max_abs(&cur.gradient);
        if residual <= opts.tol {
            break;
        }
        if max_abs(&lambda) > cap {
            return Err(Error::infeasible(format!(
                "multipliers diverged beyond {} with residual {:e}",
                MULTIPLIER_CAP,
                residual.as_f64()
            )));
        }
        if iterations >= opts.max_iter {
            return Err(Error::MaxIterExceeded {
                iterations,
                residual: residual.as_f64(),
            });
        }
        iterations += 1;

        let mut direction = -(&inv_hessian * &cur.gradient);
        let mut slope = cur.gradient.dot(&direction);
        if !(slope < T::zero()) {
            inv_hessian = DMatrix::identity(m, m);
            fresh = true;
            direction = -cur.gradient.clone();
            slope = cur.gradient.dot(&direction);
        }

        // Armijo backtracking; the rounding allowance lets the search accept
        // steps once the decrease falls below the resolution of the value.
        let allowance = T::lit(16.0) * eps * (T::one() + cur.value.abs());
        let mut t = T::one();
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            let trial = &lambda + &direction * t;
            match evaluate_dual(&trial, cs) {
                Ok(next)
                    if next.value <= cur.value + T::lit(ARMIJO_SLOPE) * t * slope + allowance =>
                {
                    accepted = Some((trial, next));
                    break;
                }
                Ok(_) | Err(Error::ConvergenceFailure) => t *= T::lit(ARMIJO_SHRINK),
                Err(e) => return Err(e),
            }
        }
        let Some((next_lambda, next)) = accepted else {
            if fresh {
                return Err(Error::MaxIterExceeded {
                    iterations,
                    residual: residual.as_f64(),
                });
            }
            inv_hessian = DMatrix::identity(m, m);
            fresh = true;
            continue;
        };

        let s = &next_lambda - &lambda;
        let y = &next.gradient - &cur.gradient;
        let sy = s.dot(&y);
        if sy > eps * s.norm() * y.norm() {
            if fresh {
                inv_hessian = DMatrix::identity(m, m) * (sy / y.dot(&y));
            }
            let rho = T::one() / sy;
            let id = DMatrix::<T>::identity(m, m);
            let left = &id - &s * y.transpose() * rho;
            let right = &id - &y * s.transpose() * rho;
            inv_hessian = &left * &inv_hessian * &right + &s * s.transpose() * rho;
            fresh = false;
        }
        lambda = next_lambda;
        cur = next;
    }

    check_not_on_face(&lambda, cs, opts.tol)?;
    let residual = max_abs(&cur.gradient);
    Ok(MaxEntSolution {
        multipliers: lambda.iter().copied().collect(),
        lambda0: cur.log_z,
        s_max: cur.value,
        estimate: cur.state,
        achieved: cur.achieved,
        iterations,
        residual,
    })
}

/// Central finite-difference estimate of `dS_max / dt_j` for each target.
///
/// At the solution these derivatives equal the multipliers, which makes the
/// result an independent check on [`solve_maxent`].
pub fn entropy_sensitivity<T: Real>(
    cs: &ConstraintSet<T>,
    step: T,
    opts: SolverOptions<T>,
) -> Result<Vec<T>> {
    if !(step > T::zero()) {
        return Err(Error::StepInvalid {
            step: step.as_f64(),
        });
    }
    let mut out = Vec::with_capacity(cs.len());
    for j in 0..cs.len() {
        let mut up = cs.targets.clone();
        let mut down = cs.targets.clone();
        up[j] += step;
        down[j] -= step;
        let s_up = solve_maxent(&cs.with_targets(up)?, opts)?.s_max;
        let s_down = solve_maxent(&cs.with_targets(down)?, opts)?.s_max;
        out.push((s_up - s_down) / (step * T::lit(2.0)));
    }
    Ok(out)
}

/// Result of [`solve_prior_tilt`].
#[derive(Debug, Clone, PartialEq)]
pub struct TiltSolution<T: Real> {
    pub lambda: T,
    pub estimate: DensityOperator<T>,
    pub achieved: T,
    pub iterations: usize,
    /// `|achieved - target|`.
    pub residual: T,
}

/// Prior and observable expressed in the observable's eigenbasis.
pub(crate) struct TiltSpectrum<T: Real> {
    pub eig: SpectralDecomposition<T>,
    /// Prior in the observable's eigenbasis.
    pub prior: CMatrix<T>,
    /// Diagonal of `prior`: the prior's weight on each eigenvector.
    pub weights: Vec<T>,
    /// Smallest and largest eigenvalue carrying prior weight.
    pub lo: T,
    pub hi: T,
}

pub(crate) fn tilt_spectrum<T: Real>(
    prior: &DensityOperator<T>,
    a: &HermitianOperator<T>,
) -> Result<TiltSpectrum<T>> {
    check_dims(prior.dim(), a.dim())?;
    let eig = a.eig()?;
    let in_basis = eig.to_eigenbasis(prior.matrix());
    let floor = T::tol(1e-12);
    let weights: Vec<T> = (0..a.dim())
        .map(|i| in_basis[(i, i)].re.max(T::zero()))
        .collect();
    let mut lo = None::<T>;
    let mut hi = None::<T>;
    for (&v, &d) in eig.eigenvalues.iter().zip(&weights) {
        if d > floor {
            lo = Some(lo.map_or(v, |x| x.min(v)));
            hi = Some(hi.map_or(v, |x| x.max(v)));
        }
    }
    let (Some(lo), Some(hi)) = (lo, hi) else {
        return Err(Error::InvalidArgument("prior has no weight".into()));
    };
    Ok(TiltSpectrum {
        eig,
        prior: in_basis,
        weights,
        lo,
        hi,
    })
}

impl<T: Real> TiltSpectrum<T> {
    /// Checks `target` against the open achievable interval. Returns `false`
    /// when the observable is constant on the prior's support and the target
    /// equals that constant, in which case every tilt leaves the prior fixed.
    pub fn check_target(&self, target: T, tol: T) -> Result<bool> {
        if !target.is_finite() {
            return Err(Error::InvalidArgument("target is not finite".into()));
        }
        if self.hi - self.lo <= tol {
            if (target - self.lo).abs() <= tol {
                return Ok(false);
            }
        } else if target > self.lo + tol && target < self.hi - tol {
            return Ok(true);
        }
        Err(Error::infeasible(format!(
            "target {} outside the open achievable interval ({}, {})",
            target.as_f64(),
            self.lo.as_f64(),
            self.hi.as_f64()
        )))
    }

    /// Tilted mean `sum a_i d_i e^{-lambda a_i} / sum d_i e^{-lambda a_i}` and
    /// its derivative, minus the tilted variance.
    fn mean_and_slope(&self, lambda: T) -> (T, T) {
        let floor = T::tol(1e-12);
        let exps: Vec<Option<T>> = self
            .eig
            .eigenvalues
            .iter()
            .zip(&self.weights)
            .map(|(&a, &d)| (d > floor).then(|| -lambda * a + d.ln()))
            .collect();
        let top = exps
            .iter()
            .flatten()
            .fold(T::min_value().unwrap_or(T::lit(f64::MIN)), |m, &e| m.max(e));
        let (mut z, mut first, mut second) = (T::zero(), T::zero(), T::zero());
        for (e, &a) in exps.iter().zip(&self.eig.eigenvalues) {
            if let Some(e) = e {
                let w = (*e - top).exp();
                z += w;
                first += w * a;
                second += w * a * a;
            }
        }
        let mean = first / z;
        let var = (second / z - mean * mean).max(T::zero());
        (mean, -var)
    }

    /// `e^{-lambda A/2} rho0 e^{-lambda A/2} / tr(e^{-lambda A} rho0)`,
    /// assembled in the observable's eigenbasis.
    fn tilted_state(&self, lambda: T) -> Result<DensityOperator<T>> {
        let n = self.weights.len();
        let half = T::lit(0.5);
        let exps: Vec<T> = self
            .eig
            .eigenvalues
            .iter()
            .map(|&a| -lambda * a * half)
            .collect();
        let top = exps.iter().fold(exps[0], |m, &e| m.max(e));
        let s: Vec<T> = exps.iter().map(|&e| (e - top).exp()).collect();
        let mut m = self.prior.clone();
        for j in 0..n {
            for k in 0..n {
                m[(j, k)] = m[(j, k)].scale(s[j] * s[k]);
            }
        }
        let z = (0..n).fold(T::zero(), |acc, i| acc + m[(i, i)].re);
        let m = m.map(|x| x.unscale(z));
        let rotated = self.eig.from_eigenbasis(&m);
        DensityOperator::from_hermitian(HermitianOperator::from_matrix_unchecked(rotated))
    }
}

/// Prior tilted by a given multiplier,
/// `e^{-lambda A/2} rho0 e^{-lambda A/2} / tr(e^{-lambda A} rho0)`.
pub fn tilt_state<T: Real>(
    prior: &DensityOperator<T>,
    a: &HermitianOperator<T>,
    lambda: T,
) -> Result<DensityOperator<T>> {
    if lambda == T::zero() {
        check_dims(prior.dim(), a.dim())?;
        return Ok(prior.clone());
    }
    tilt_spectrum(prior, a)?.tilted_state(lambda)
}

/// Tilts `prior` along one observable until `<A> = target`.
///
/// The tilted family `e^{-lambda A/2} rho0 e^{-lambda A/2} / Z` is Hermitian
/// and positive for every prior, and its mean is strictly decreasing in
/// `lambda`, so the multiplier is found by a one-dimensional root search.
pub fn solve_prior_tilt<T: Real>(
    prior: &DensityOperator<T>,
    a: &HermitianOperator<T>,
    target: T,
    opts: SolverOptions<T>,
) -> Result<TiltSolution<T>> {
    let spectrum = tilt_spectrum(prior, a)?;
    let (lambda, iterations) = if spectrum.check_target(target, opts.tol)? {
        let root = decreasing_root(
            |l| {
                let (mean, slope) = spectrum.mean_and_slope(l);
                Ok((mean - target, slope))
            },
            RootOptions {
                tol: opts.tol,
                max_iter: opts.max_iter,
                max_abs_x: T::lit(MULTIPLIER_CAP),
            },
        )?;
        (root.x, root.iterations)
    } else {
        (T::zero(), 0)
    };
    let estimate = if lambda == T::zero() {
        prior.clone()
    } else {
        spectrum.tilted_state(lambda)?
    };
    let achieved = crate::operator::expectation(&estimate, a)?;
    let residual = (achieved - target).abs();
    if residual > opts.tol {
        return Err(Error::MaxIterExceeded {
            iterations,
            residual: residual.as_f64(),
        });
    }
    Ok(TiltSolution {
        lambda,
        estimate,
        achieved,
        iterations,
        residual,
    })
}

/// Classical MaxEnt distribution `p_i ~ w_i exp(-sum_k lambda_k v_{k,i})`
/// matching `sum_i p_i v_{k,i} = t_k`.
///
/// Solved by damped Newton iteration on the classical dual with the exact
/// covariance Hessian. Used as an oracle for the quantum solver on commuting
/// observables, where the two problems coincide.
pub fn classical_gibbs_oracle<T: Real>(
    weights: &[T],
    values: &[Vec<T>],
    targets: &[T],
) -> Result<Vec<T>> {
    check_dims(values.len(), targets.len())?;
    let n = weights.len();
    for v in values {
        check_dims(n, v.len())?;
    }
    let total = weights.iter().fold(T::zero(), |a, &w| a + w);
    if n == 0
        || weights.iter().any(|&w| !(w >= T::zero()))
        || (total - T::one()).abs() > T::tol(1e-10)
    {
        return Err(Error::InvalidArgument(
            "weights must be a probability vector".into(),
        ));
    }
    let support: Vec<usize> = (0..n).filter(|&i| weights[i] > T::zero()).collect();
    let tol = T::tol(1e-12);
    for (k, (v, &t)) in values.iter().zip(targets).enumerate() {
        let lo = support
            .iter()
            .map(|&i| v[i])
            .fold(v[support[0]], |a, x| a.min(x));
        let hi = support
            .iter()
            .map(|&i| v[i])
            .fold(v[support[0]], |a, x| a.max(x));
        if t <= lo + tol || t >= hi - tol {
            return Err(Error::infeasible(format!(
                "classical target {k} outside the open range ({}, {})",
                lo.as_f64(),
                hi.as_f64()
            )));
        }
    }

    let m = targets.len();
    let t = DVector::from_column_slice(targets);
    // Dual value, gradient and Hessian on the support.
    let eval = |lambda: &DVector<T>| {
        let exps: Vec<T> = support
            .iter()
            .map(|&i| weights[i].ln() - (0..m).fold(T::zero(), |a, k| a + lambda[k] * values[k][i]))
            .collect();
        let top = exps.iter().fold(exps[0], |a, &e| a.max(e));
        let w: Vec<T> = exps.iter().map(|&e| (e - top).exp()).collect();
        let z = w.iter().fold(T::zero(), |a, &x| a + x);
        let p: Vec<T> = w.iter().map(|&x| x / z).collect();
        let mean = DVector::from_fn(m, |k, _| {
            support
                .iter()
                .zip(&p)
                .fold(T::zero(), |a, (&i, &pi)| a + pi * values[k][i])
        });
        let cov = DMatrix::from_fn(m, m, |j, k| {
            support.iter().zip(&p).fold(T::zero(), |a, (&i, &pi)| {
                a + pi * (values[j][i] - mean[j]) * (values[k][i] - mean[k])
            })
        });
        let value = top + z.ln() + lambda.dot(&t);
        (value, &t - &mean, cov, p)
    };

    let mut lambda = DVector::<T>::zeros(m);
    let (mut value, mut grad, mut cov, mut p) = eval(&lambda);
    let eps = T::default_epsilon();
    for _ in 0..200 {
        if max_abs(&grad) <= T::lit(1e-14) {
            break;
        }
        if max_abs(&lambda) > T::lit(MULTIPLIER_CAP) {
            return Err(Error::infeasible("classical multipliers diverged"));
        }
        let chol = cov.clone().cholesky().ok_or(Error::DependentConstraints {
            condition: f64::INFINITY,
        })?;
        let step = -chol.solve(&grad);
        let slope = grad.dot(&step);
        let allowance = T::lit(16.0) * eps * (T::one() + value.abs());
        let mut s = T::one();
        let mut moved = false;
        for _ in 0..MAX_BACKTRACKS {
            let trial = &lambda + &step * s;
            let next = eval(&trial);
            if next.0 <= value + T::lit(ARMIJO_SLOPE) * s * slope + allowance {
                lambda = trial;
                (value, grad, cov, p) = next;
                moved = true;
                break;
            }
            s *= T::lit(ARMIJO_SHRINK);
        }
        if !moved {
            break;
        }
    }
    let mut out = vec![T::zero(); n];
    for (&i, &pi) in support.iter().zip(&p) {
        out[i] = pi;
    }
    Ok(out)
}
