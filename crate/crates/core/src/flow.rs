//! Entropic flow along the raised zero-mean observable.
//!
//! The flow `d rho / d lambda = -R_rho(A - <A> 1)` moves a state orthogonally
//! to the level surfaces of `<A>`. Its solution from `rho0` is the symmetric
//! exponential family `e^{-lambda A/2} rho0 e^{-lambda A/2} / tr(e^{-lambda A} rho0)`,
//! which is also the prior tilt of [`crate::maxent::solve_prior_tilt`].

use nalgebra::Complex;

use crate::error::{Error, Result};
use crate::maxent::{tilt_spectrum, SolverOptions, EXPONENT_GUARD, MULTIPLIER_CAP};
use crate::operator::{check_dims, expectation, CMatrix, DensityOperator, HermitianOperator};
use crate::roots::{decreasing_root, RootOptions};
use crate::scalar::Real;

/// Most negative eigenvalue tolerated in an integrated state.
pub const POSITIVITY_LOSS_TOL: f64 = 1e-8;
/// Approximate number of stored samples per trajectory.
pub const MAX_SAMPLES: usize = 1000;
const MAX_STEPS: f64 = 1e8;

/// One recorded point of a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowSample<T: Real> {
    pub lambda: T,
    pub state: DensityOperator<T>,
    /// `<A>` at `state`.
    pub mean: T,
}

/// Samples from a numerical integration of the flow, in integration order.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowTrajectory<T: Real> {
    pub observable: HermitianOperator<T>,
    pub samples: Vec<FlowSample<T>>,
    /// Integrator step actually used (signed, `lambda_end / steps`).
    pub step: T,
}

impl<T: Real> FlowTrajectory<T> {
    pub fn last(&self) -> &FlowSample<T> {
        self.samples
            .last()
            .expect("trajectory has at least one sample")
    }
}

/// Field at an arbitrary Hermitian matrix; the mean is normalized by the
/// trace so the field is traceless even off the unit-trace slice.
fn field_matrix<T: Real>(rho: &CMatrix<T>, a: &CMatrix<T>) -> CMatrix<T> {
    let ra = rho * a;
    let ar = a * rho;
    let mean = ra.trace().re / rho.trace().re;
    let half = T::lit(0.5);
    (ra + ar).map(|z| -z * half) + rho.map(|z| z * mean)
}

/// `-R_rho(A - <A> 1)`, the tangent direction of the flow at `rho`.
pub fn flow_field<T: Real>(
    rho: &DensityOperator<T>,
    a: &HermitianOperator<T>,
) -> Result<HermitianOperator<T>> {
    check_dims(rho.dim(), a.dim())?;
    Ok(HermitianOperator::from_matrix_unchecked(field_matrix(
        rho.matrix(),
        a.matrix(),
    )))
}

/// Closed-form flow `e^{-lambda A/2} rho0 e^{-lambda A/2} / tr(e^{-lambda A} rho0)`.
pub fn closed_form_flow<T: Real>(
    rho0: &DensityOperator<T>,
    a: &HermitianOperator<T>,
    lambda: T,
) -> Result<DensityOperator<T>> {
    check_dims(rho0.dim(), a.dim())?;
    if lambda == T::zero() {
        return Ok(rho0.clone());
    }
    let eig = a.eig()?;
    let radius = eig
        .eigenvalues
        .iter()
        .fold(T::zero(), |m, &x| m.max(x.abs()));
    if lambda.abs() * radius > T::lit(EXPONENT_GUARD) {
        return Err(Error::Overflow {
            exponent: (lambda.abs() * radius).as_f64(),
        });
    }
    // The common factor e^{-lambda c / 2} cancels against the normalization.
    let half = -lambda * T::lit(0.5);
    let top = eig
        .eigenvalues
        .iter()
        .fold(T::lit(f64::MIN), |m, &x| m.max(half * x));
    let half_exp = eig.map(|x| (half * x - top).exp());
    let n = half_exp.matrix() * rho0.matrix() * half_exp.matrix();
    let z = n.trace().re;
    DensityOperator::from_hermitian(HermitianOperator::from_matrix_unchecked(
        n.map(|v| v.unscale(z)),
    ))
}

fn min_eigenvalue<T: Real>(m: &CMatrix<T>) -> Result<T> {
    let ev = HermitianOperator::from_matrix_unchecked(m.clone()).eigenvalues()?;
    Ok(ev[ev.len() - 1])
}

/// Integrates the flow from `rho0` to `lambda_end` with the classical
/// fourth-order Runge-Kutta scheme at a fixed step.
///
/// The step is shrunk so that an integer number of steps lands exactly on
/// `lambda_end`; a negative `lambda_end` integrates backwards. The trace is
/// never renormalized. Roughly [`MAX_SAMPLES`] evenly strided samples are
/// recorded, always including both endpoints.
pub fn integrate_flow<T: Real>(
    rho0: &DensityOperator<T>,
    a: &HermitianOperator<T>,
    lambda_end: T,
    step: T,
) -> Result<FlowTrajectory<T>> {
    check_dims(rho0.dim(), a.dim())?;
    if !(step > T::zero()) || !step.is_finite() {
        return Err(Error::StepInvalid {
            step: step.as_f64(),
        });
    }
    if !lambda_end.is_finite() {
        return Err(Error::InvalidArgument("lambda_end is not finite".into()));
    }
    let first = FlowSample {
        lambda: T::zero(),
        state: rho0.clone(),
        mean: expectation(rho0, a)?,
    };
    let span = lambda_end.abs() / step;
    if span > T::lit(MAX_STEPS) {
        return Err(Error::StepInvalid {
            step: step.as_f64(),
        });
    }
    let steps = span.ceil().to_usize().unwrap_or(0);
    if steps == 0 {
        return Ok(FlowTrajectory {
            observable: a.clone(),
            samples: vec![first],
            step: T::zero(),
        });
    }

    let h = lambda_end / T::lit(steps as f64);
    let stride = steps.div_ceil(MAX_SAMPLES).max(1);
    let am = a.matrix();
    let half = T::lit(0.5);
    let sixth = T::one() / T::lit(6.0);
    let two = T::lit(2.0);
    let mut samples = Vec::with_capacity(steps / stride + 2);
    samples.push(first);
    let mut rho = rho0.matrix().clone();

    for i in 1..=steps {
        let k1 = field_matrix(&rho, am);
        let k2 = field_matrix(&(&rho + &k1 * Complex::from(h * half)), am);
        let k3 = field_matrix(&(&rho + &k2 * Complex::from(h * half)), am);
        let k4 = field_matrix(&(&rho + &k3 * Complex::from(h)), am);
        let incr = (k1 + k2 * Complex::from(two) + k3 * Complex::from(two) + k4)
            * Complex::from(h * sixth);
        rho += incr;

        let lambda = h * T::lit(i as f64);
        let min = min_eigenvalue(&rho)?;
        if min < -T::tol(POSITIVITY_LOSS_TOL) {
            return Err(Error::PositivityLoss {
                lambda: lambda.as_f64(),
                min_eigenvalue: min.as_f64(),
            });
        }
        if i % stride == 0 || i == steps {
            let state = DensityOperator::from_hermitian(HermitianOperator::from_matrix_unchecked(
                rho.clone(),
            ))
            .map_err(|e| match e {
                Error::NotPositive { min_eigenvalue } => Error::PositivityLoss {
                    lambda: lambda.as_f64(),
                    min_eigenvalue,
                },
                other => other,
            })?;
            let mean = expectation(&state, a)?;
            samples.push(FlowSample {
                lambda,
                state,
                mean,
            });
        }
    }
    Ok(FlowTrajectory {
        observable: a.clone(),
        samples,
        step: h,
    })
}

/// Moves along the closed-form flow until `<A> = target`.
///
/// The mean along the flow decreases with slope `-g(dA, dA)`, minus the
/// variance of `A` at the current state, which drives a safeguarded Newton
/// search over `lambda`. Returns the flow parameter and the state reached.
pub fn flow_to_constraint<T: Real>(
    rho0: &DensityOperator<T>,
    a: &HermitianOperator<T>,
    target: T,
    opts: SolverOptions<T>,
) -> Result<(T, DensityOperator<T>)> {
    let spectrum = tilt_spectrum(rho0, a)?;
    if !spectrum.check_target(target, opts.tol)? {
        return Ok((T::zero(), rho0.clone()));
    }
    let a2 = HermitianOperator::from_matrix_unchecked(a.matrix() * a.matrix());
    let root = decreasing_root(
        |lambda| {
            let rho = closed_form_flow(rho0, a, lambda)?;
            let mean = expectation(&rho, a)?;
            let var = expectation(&rho, &a2)? - mean * mean;
            Ok((mean - target, -var.max(T::zero())))
        },
        RootOptions {
            tol: opts.tol,
            max_iter: opts.max_iter,
            max_abs_x: T::lit(MULTIPLIER_CAP),
        },
    )?;
    let state = closed_form_flow(rho0, a, root.x)?;
    let residual = (expectation(&state, a)? - target).abs();
    if residual > opts.tol {
        return Err(Error::MaxIterExceeded {
            iterations: root.iterations,
            residual: residual.as_f64(),
        });
    }
    Ok((root.x, state))
}
