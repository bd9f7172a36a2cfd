//! Dense complex linear algebra and the brute-force oracles the rest of the
//! crate is validated against.
//!
//! Index convention: qubit 0 is the most significant bit of a basis index, so
//! `kron(A, B)` places `A` on the high-order qubits.

mod bessel;
mod matrix;
mod random;

pub use bessel::{bessel_j, bessel_j_sequence};
pub use matrix::ComplexMatrix;
pub use random::{random_hermitian, random_state, random_unitary};

use crate::error::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Entrywise tolerance for the Hermiticity precondition.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Real eigenvalues (ascending) and unitary eigenvector columns.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl Spectrum {
    /// `V · diag(f(λ)) · V†`.
    pub fn apply_function<F>(&self, f: F) -> ComplexMatrix
    where
        F: Fn(f64) -> Complex64,
    {
        let v = self.eigenvectors.as_dmatrix();
        let n = v.nrows();
        let mut scaled = v.clone();
        for (j, &lam) in self.eigenvalues.iter().enumerate() {
            let fj = f(lam);
            for i in 0..n {
                scaled[(i, j)] *= fj;
            }
        }
        ComplexMatrix::from_dmatrix(&scaled * v.adjoint())
    }

    /// `V · diag(λ) · V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply_function(|l| Complex64::new(l, 0.0))
    }

    /// Eigenvector `k` as an owned column.
    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        self.eigenvectors.column(k)
    }
}

/// Diagonalise a Hermitian matrix.
pub fn hermitian_eigendecomposition(m: &ComplexMatrix) -> Result<Spectrum> {
    m.require_hermitian()?;
    let n = m.rows();
    // Symmetrise so round-off asymmetry does not leak into the solver.
    let a = m.as_dmatrix();
    let sym = (a + a.adjoint()).scale(0.5);
    let eig = nalgebra::SymmetricEigen::new(sym);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));

    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(Spectrum {
        eigenvalues,
        eigenvectors: ComplexMatrix::from_dmatrix(vectors),
    })
}

/// Exact `exp(i · scale · M)` for Hermitian `M`.
pub fn matrix_exponential(m: &ComplexMatrix, scale: f64) -> Result<ComplexMatrix> {
    let spec = hermitian_eigendecomposition(m)?;
    Ok(spec.apply_function(|l| Complex64::from_polar(1.0, scale * l)))
}

/// Largest singular value.
pub fn operator_norm(m: &ComplexMatrix) -> f64 {
    if m.rows() == 0 || m.cols() == 0 {
        return 0.0;
    }
    let a = m.as_dmatrix();
    if a.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
        return 0.0;
    }
    a.singular_values().max()
}

/// Kronecker product, `A` on the high-order index bits.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_dmatrix(a.as_dmatrix().kronecker(b.as_dmatrix()))
}

/// Euclidean norm of a state vector.
pub fn vector_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `⟨a|b⟩`.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Kronecker product of two vectors.
pub fn kron_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

/// Number of qubits spanned by a power-of-two dimension.
pub fn qubits_for_dim(dim: usize) -> Result<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::BadRange(format!("dimension {dim} is not a power of two")));
    }
    Ok(dim.trailing_zeros() as usize)
}

/// A linear map on `C^dim` that can be applied to vectors without
/// materialising its matrix.
pub trait LinearOp {
    fn dim(&self) -> usize;
    fn apply(&self, v: &[Complex64]) -> Vec<Complex64>;
    fn apply_adjoint(&self, v: &[Complex64]) -> Vec<Complex64>;

    /// Dense matrix, column by column. Callers are responsible for size.
    fn to_matrix(&self) -> ComplexMatrix {
        let n = self.dim();
        let mut out = DMatrix::zeros(n, n);
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..n {
            e[j] = Complex64::new(1.0, 0.0);
            let col = self.apply(&e);
            for (i, z) in col.into_iter().enumerate() {
                out[(i, j)] = z;
            }
            e[j] = Complex64::new(0.0, 0.0);
        }
        ComplexMatrix::from_dmatrix(out)
    }
}

impl LinearOp for ComplexMatrix {
    fn dim(&self) -> usize {
        self.rows()
    }

    fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.mul_vec(v)
    }

    fn apply_adjoint(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.adjoint_mul_vec(v)
    }

    fn to_matrix(&self) -> ComplexMatrix {
        self.clone()
    }
}
