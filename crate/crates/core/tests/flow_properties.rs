mod common;

use common::{rng, zero_pairing_tangent};
use qmaxent::random::{random_density, random_density_with_rank, random_hermitian_with_radius};
use qmaxent::{
    closed_form_flow, flow_field, flow_to_constraint, integrate_flow, metric_vectors,
    solve_prior_tilt, trace_distance, zero_mean_form, DensityOperator64, HermitianOperator64,
    SolverOptions64,
};
use rand::rngs::StdRng;
use rand::Rng;

fn instance(rng: &mut StdRng, max_radius: f64) -> (DensityOperator64, HermitianOperator64) {
    let n = rng.random_range(2..=6);
    let radius = rng.random_range(0.5..max_radius);
    (
        random_density(rng, n),
        random_hermitian_with_radius(rng, n, radius),
    )
}

fn integration_error(rho0: &DensityOperator64, a: &HermitianOperator64, step: f64) -> f64 {
    let traj = integrate_flow(rho0, a, 1.0, step).unwrap();
    let exact = closed_form_flow(rho0, a, 1.0).unwrap();
    trace_distance(&traj.last().state, &exact).unwrap()
}

#[test]
fn closed_form_solves_the_flow_equation() {
    let mut rng = rng(801);
    let h = 1e-5;
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let (rho0, a) = instance(&mut rng, 5.0);
        let lambda = rng.random_range(-2.0..2.0);
        let plus = closed_form_flow(&rho0, &a, lambda + h).unwrap();
        let minus = closed_form_flow(&rho0, &a, lambda - h).unwrap();
        let fd = (plus.as_operator() - minus.as_operator()).scaled(0.5 / h);
        let at = closed_form_flow(&rho0, &a, lambda).unwrap();
        let field = flow_field(&at, &a).unwrap();
        worst = worst.max((&fd - &field).frobenius_norm());
    }
    assert!(worst <= 1e-6, "finite-difference residual {worst}");
}

#[test]
fn rk4_tracks_closed_form_at_default_step() {
    let mut rng = rng(802);
    for _ in 0..20 {
        let (rho0, a) = instance(&mut rng, 5.0);
        let err = integration_error(&rho0, &a, 1e-3);
        assert!(err <= 1e-6, "error {err}");
    }
}

#[test]
fn halving_step_shows_fourth_order_convergence() {
    // At the default step the error already sits at the rounding floor, so
    // the order is read off at coarser steps.
    let mut rng = rng(803);
    for _ in 0..20 {
        let (rho0, a) = instance(&mut rng, 5.0);
        let a = a.scaled(5.0 / a.spectral_radius().unwrap());
        let coarse = integration_error(&rho0, &a, 0.02);
        let fine = integration_error(&rho0, &a, 0.01);
        let ratio = coarse / fine;
        assert!(
            (12.0..=20.0).contains(&ratio),
            "ratio {ratio} ({coarse} -> {fine})"
        );
    }
}

#[test]
fn trace_is_conserved() {
    let mut rng = rng(804);
    for _ in 0..50 {
        let (rho0, a) = instance(&mut rng, 5.0);
        assert!(flow_field(&rho0, &a).unwrap().trace().abs() <= 1e-15);
        let lambda_end: f64 = rng.random_range(-2.0..2.0);
        let traj = integrate_flow(&rho0, &a, lambda_end, 1e-3).unwrap();
        for s in &traj.samples {
            let drift = (s.state.as_operator().trace() - 1.0).abs();
            assert!(
                drift <= 1e-12 * s.lambda.abs().max(1.0),
                "drift {drift} at {}",
                s.lambda
            );
        }
    }
}

#[test]
fn flow_crosses_level_surfaces_orthogonally() {
    let mut rng = rng(805);
    for _ in 0..20 {
        let (rho0, a) = instance(&mut rng, 3.0);
        let traj = integrate_flow(&rho0, &a, 1.5, 1e-2).unwrap();
        for s in traj.samples.iter().step_by(10) {
            let field = flow_field(&s.state, &a).unwrap();
            let form = zero_mean_form(&s.state, &a).unwrap();
            let t = zero_pairing_tangent(&mut rng, &form.value);
            let g = metric_vectors(&s.state, &field, &t).unwrap();
            assert!(g.abs() <= 1e-10, "g = {g} at lambda {}", s.lambda);
        }
    }
}

#[test]
fn mean_decreases_along_the_flow() {
    let mut rng = rng(806);
    for _ in 0..50 {
        let (rho0, a) = instance(&mut rng, 5.0);
        let lambda_end: f64 = rng.random_range(-2.0..2.0);
        let traj = integrate_flow(&rho0, &a, lambda_end, 1e-3).unwrap();
        for w in traj.samples.windows(2) {
            let (a0, a1) = (&w[0], &w[1]);
            let slope = (a1.mean - a0.mean) / (a1.lambda - a0.lambda);
            assert!(
                slope < 0.0,
                "slope {slope} between {} and {}",
                a0.lambda,
                a1.lambda
            );
        }
    }
}

#[test]
fn mean_is_constant_when_observable_is_constant_on_support() {
    let mut rng = rng(807);
    let rho0 = random_density_with_rank::<f64, _>(&mut rng, 4, 2);
    // A acts as 3 on the range of rho0 and arbitrarily on its kernel.
    let eig = rho0.eig().unwrap();
    let a = eig.compose(&[3.0, 3.0, -1.0, 5.0]);
    let traj = integrate_flow(&rho0, &a, 1.0, 1e-2).unwrap();
    for s in &traj.samples {
        assert!((s.mean - 3.0).abs() <= 1e-10);
    }
}

#[test]
fn flow_to_constraint_matches_prior_tilt() {
    let mut rng = rng(808);
    let opts = SolverOptions64::default();
    for _ in 0..50 {
        let (rho0, a) = instance(&mut rng, 3.0);
        let truth: DensityOperator64 = random_density(&mut rng, rho0.dim());
        let target = qmaxent::expectation(&truth, &a).unwrap();
        let (lambda, state) = flow_to_constraint(&rho0, &a, target, opts).unwrap();
        let tilt = solve_prior_tilt(&rho0, &a, target, opts).unwrap();
        assert!((lambda - tilt.lambda).abs() <= 1e-8 * lambda.abs().max(1.0));
        assert!(trace_distance(&state, &tilt.estimate).unwrap() <= 1e-10);
    }
}
