//! Random operators and states for property tests and benchmarks.

use nalgebra::{Complex, ComplexField};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::operator::{CMatrix, DensityOperator, HermitianOperator};
use crate::scalar::Real;

fn ginibre<T: Real, R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix<T> {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex::new(T::lit(re), T::lit(im))
    })
}

/// Hermitian matrix from the Gaussian unitary ensemble, rescaled so its
/// Frobenius norm equals `norm`.
pub fn random_hermitian<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    norm: T,
) -> HermitianOperator<T> {
    let g = ginibre::<T, R>(rng, dim, dim);
    let h = HermitianOperator::from_matrix_unchecked(g);
    let f = h.frobenius_norm();
    h.scaled(norm / f)
}

/// Hermitian matrix with spectral radius exactly `radius`.
pub fn random_hermitian_with_radius<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    radius: T,
) -> HermitianOperator<T> {
    let h = random_hermitian(rng, dim, T::one());
    let r = h.spectral_radius().expect("GUE sample diagonalizes");
    h.scaled(radius / r)
}

/// Haar-distributed unitary from the QR decomposition of a Ginibre matrix.
pub fn haar_unitary<T: Real, R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CMatrix<T> {
    let qr = ginibre::<T, R>(rng, dim, dim).qr();
    let (mut q, r) = qr.unpack();
    for k in 0..dim {
        let d = r[(k, k)];
        let m = d.modulus();
        if m > T::zero() {
            let phase = d.unscale(m);
            for i in 0..dim {
                q[(i, k)] *= phase;
            }
        }
    }
    q
}

/// Random state `G G^dagger / tr(G G^dagger)` with `G` a `dim x rank`
/// Ginibre matrix (Hilbert-Schmidt measure when `rank == dim`).
pub fn random_density_with_rank<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    rank: usize,
) -> DensityOperator<T> {
    let g = ginibre::<T, R>(rng, dim, rank.max(1));
    let w = &g * g.adjoint();
    let tr = w.trace().re;
    let op = HermitianOperator::from_matrix_unchecked(w.map(|z| z.unscale(tr)));
    DensityOperator::from_hermitian_unchecked(op)
}

/// Full-rank random state, mixed with `I/n` so its smallest eigenvalue is at
/// least `floor / n`.
pub fn random_density<T: Real, R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityOperator<T> {
    random_density_mixed(rng, dim, T::lit(0.05))
}

/// `(1 - floor) rho + floor I/n` for a Hilbert-Schmidt random `rho`.
pub fn random_density_mixed<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    floor: T,
) -> DensityOperator<T> {
    let rho = random_density_with_rank::<T, R>(rng, dim, dim);
    let mixed = DensityOperator::<T>::maximally_mixed(dim);
    let op = rho.as_operator().scaled(T::one() - floor) + mixed.as_operator().scaled(floor);
    DensityOperator::from_hermitian_unchecked(op)
}
