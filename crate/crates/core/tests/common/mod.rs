#![allow(dead_code)]

use qmaxent::random::{random_density, random_hermitian};
use qmaxent::{ConstraintSet64, DensityOperator64, HermitianOperator64};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn frob(a: &HermitianOperator64, b: &HermitianOperator64) -> f64 {
    (a - b).frobenius_norm()
}

/// Random feasible MaxEnt problem: targets are expectations of a random
/// full-rank state, so they lie strictly inside the achievable set.
pub fn feasible_instance(
    rng: &mut StdRng,
    max_dim: usize,
    max_m: usize,
) -> (ConstraintSet64, DensityOperator64) {
    let n = rng.random_range(2..=max_dim);
    let m = rng.random_range(1..=max_m.min(n * n - 1));
    let truth: DensityOperator64 = random_density(rng, n);
    let obs: Vec<HermitianOperator64> = (0..m).map(|_| random_hermitian(rng, n, 2.0)).collect();
    let targets = obs
        .iter()
        .map(|a| qmaxent::expectation(&truth, a).unwrap())
        .collect();
    (ConstraintSet64::new(obs, targets, n).unwrap(), truth)
}

/// Random traceless `t` with `tr(form t) = 0`.
pub fn zero_pairing_tangent(rng: &mut StdRng, form: &HermitianOperator64) -> HermitianOperator64 {
    let n = form.dim();
    let t = random_hermitian(rng, n, 1.0).traceless_part();
    let b = form.traceless_part();
    let bb = b.inner(&b);
    if bb == 0.0 {
        return t;
    }
    &t - &b.scaled(b.inner(&t) / bb)
}
