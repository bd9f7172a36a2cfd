use crate::error::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;

use super::HERMITIAN_TOL;

/// Dense complex matrix. Entries are finite by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

impl ComplexMatrix {
    /// Build from row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        if let Some(k) = entries.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite(k / cols.max(1), k % cols.max(1)));
        }
        Ok(Self(DMatrix::from_row_slice(rows, cols, &entries)))
    }

    /// Row-major real entries.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::new(
            rows,
            cols,
            entries.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub(crate) fn from_dmatrix(m: DMatrix<Complex64>) -> Self {
        Self(m)
    }

    pub fn from_fn<F>(rows: usize, cols: usize, f: F) -> Self
    where
        F: FnMut(usize, usize) -> Complex64,
    {
        Self(DMatrix::from_fn(rows, cols, f))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn from_diagonal(d: &[Complex64]) -> Self {
        let n = d.len();
        Self(DMatrix::from_fn(n, n, |i, j| if i == j { d[i] } else { ZERO }))
    }

    pub fn from_real_diagonal(d: &[f64]) -> Self {
        let n = d.len();
        Self(DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(d[i], 0.0)
            } else {
                ZERO
            }
        }))
    }

    pub fn pauli_x() -> Self {
        Self(DMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]))
    }

    pub fn pauli_y() -> Self {
        Self(DMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]))
    }

    pub fn pauli_z() -> Self {
        Self(DMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]))
    }

    pub fn hadamard() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self(DMatrix::from_row_slice(2, 2, &[h, h, h, -h]))
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, z: Complex64) {
        self.0[(i, j)] = z;
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<Complex64> {
        self.0
    }

    /// Row-major copy of the entries.
    pub fn to_row_major(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        self.0.column(j).iter().copied().collect()
    }

    pub fn diagonal_re(&self) -> Vec<f64> {
        (0..self.rows().min(self.cols()))
            .map(|i| self.0[(i, i)].re)
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.map(|z| z * s))
    }

    pub fn scale_complex(&self, s: Complex64) -> Self {
        Self(self.0.map(|z| z * s))
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.cols(), "vector length must match columns");
        let mut out = vec![ZERO; self.rows()];
        for j in 0..self.cols() {
            let vj = v[j];
            if vj == ZERO {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                *o += self.0[(i, j)] * vj;
            }
        }
        out
    }

    pub fn adjoint_mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.rows(), "vector length must match rows");
        (0..self.cols())
            .map(|j| (0..self.rows()).map(|i| self.0[(i, j)].conj() * v[i]).sum())
            .collect()
    }

    /// Copy of the `nr × nc` sub-block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        Self(self.0.view((r0, c0), (nr, nc)).into_owned())
    }

    /// Largest entrywise `|M_ij − conj(M_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol
    }

    pub(crate) fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows(),
                cols: self.cols(),
            })
        }
    }

    pub(crate) fn require_hermitian(&self) -> Result<()> {
        self.require_square()?;
        let defect = self.hermitian_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::NonHermitian(defect));
        }
        Ok(())
    }

    /// `‖M†M − I‖` in operator norm.
    pub fn unitarity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let g = self.adjoint().mul(self).sub(&Self::identity(self.rows()));
        super::operator_norm(&g)
    }

    pub(crate) fn require_unitary(&self, tol: f64) -> Result<()> {
        self.require_square()?;
        let defect = self.unitarity_defect();
        if defect > tol {
            return Err(Error::NotUnitary(defect));
        }
        Ok(())
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_major_layout() {
        let m = ComplexMatrix::from_real(2, 3, &[1., 2., 3., 4., 5., 6.]).unwrap();
        assert_eq!(m.get(0, 2).re, 3.0);
        assert_eq!(m.get(1, 0).re, 4.0);
        assert_eq!(m.to_row_major()[4].re, 5.0);
    }

    #[test]
    fn rejects_bad_construction() {
        assert!(matches!(
            ComplexMatrix::from_real(2, 2, &[1.0; 3]),
            Err(Error::DimMismatch { .. })
        ));
        assert!(matches!(
            ComplexMatrix::from_real(1, 2, &[1.0, f64::NAN]),
            Err(Error::NonFinite(0, 1))
        ));
    }

    #[test]
    fn paulis_are_hermitian_and_unitary() {
        for p in [
            ComplexMatrix::pauli_x(),
            ComplexMatrix::pauli_y(),
            ComplexMatrix::pauli_z(),
            ComplexMatrix::hadamard(),
        ] {
            assert!(p.is_hermitian(0.0));
            assert!(p.unitarity_defect() < 1e-15);
        }
    }

    #[test]
    fn y_is_i_x_z() {
        let ixz = ComplexMatrix::pauli_x()
            .mul(&ComplexMatrix::pauli_z())
            .scale_complex(I);
        assert_eq!(ixz, ComplexMatrix::pauli_y());
    }

    #[test]
    fn adjoint_vector_product() {
        let y = ComplexMatrix::pauli_y();
        let v = [Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.7)];
        let a = y.adjoint_mul_vec(&v);
        let b = y.adjoint().mul_vec(&v);
        for (x, z) in a.iter().zip(&b) {
            assert!((x - z).norm() < 1e-16);
        }
    }
}
