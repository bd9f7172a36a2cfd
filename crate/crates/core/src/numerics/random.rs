use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{hermitian_eigendecomposition, operator_norm, ComplexMatrix};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Hermitian matrix from the Gaussian unitary ensemble, rescaled to unit
/// operator norm.
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let a = ComplexMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
    let h = a.add(&a.adjoint()).scale(0.5);
    let n = operator_norm(&h);
    if n == 0.0 {
        return h;
    }
    h.scale(1.0 / n)
}

/// Haar-ish random unitary: `exp(i·π·H)` for a GUE draw `H`.
///
/// Not exactly Haar, but spreads eigenphases over the whole circle, which
/// is all the tests need.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let h = random_hermitian(dim, rng);
    let spec = hermitian_eigendecomposition(&h).expect("GUE draw is Hermitian");
    let shift: f64 = rng.random_range(-1.0..1.0);
    spec.apply_function(|l| Complex64::from_polar(1.0, std::f64::consts::PI * (0.95 * l + shift * 0.05)))
}

/// Normalised complex Gaussian vector.
pub fn random_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..dim).map(|_| gaussian(rng)).collect();
    let n = super::vector_norm(&v);
    v.into_iter().map(|z| z / n).collect()
}
