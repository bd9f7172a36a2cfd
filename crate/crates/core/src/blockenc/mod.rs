//! Block-encodings: construction, combination, verification, qubitization.
//!
//! Register layout is `[ancillas | system]`, ancillas on the high-order
//! bits, so with `|G⟩ = |0…0⟩` the encoded block is literally the top-left
//! `N × N` corner of the unitary.

mod constructions;
mod lcu;
mod qubitize;

pub use constructions::{block_encoding_from_unitary, idealized_log_encoding, tensor_block_encodings};
pub use lcu::{lcu_block_encoding, LcuOperator};
pub use qubitize::{qubitization_eigenphases, qubitize, EigenphaseReport, QubitizedEncoding};

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::numerics::{
    matrix_exponential, operator_norm, random_hermitian, vector_norm, ComplexMatrix, LinearOp,
};

/// Largest total register that may be materialised as a dense unitary.
pub const MAX_DENSE_QUBITS: usize = 12;
/// Largest total register handled by structured (matrix-free) operators.
pub const MAX_STRUCTURED_QUBITS: usize = 22;

const UNITARY_TOL: f64 = 1e-10;
const NORM_TOL: f64 = 1e-12;

/// How the encoding unitary is stored.
#[derive(Debug, Clone)]
pub enum EncodingOp {
    Dense(ComplexMatrix),
    Lcu(LcuOperator),
}

impl LinearOp for EncodingOp {
    fn dim(&self) -> usize {
        match self {
            EncodingOp::Dense(m) => m.rows(),
            EncodingOp::Lcu(l) => l.dim(),
        }
    }

    fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        match self {
            EncodingOp::Dense(m) => m.mul_vec(v),
            EncodingOp::Lcu(l) => l.apply(v),
        }
    }

    fn apply_adjoint(&self, v: &[Complex64]) -> Vec<Complex64> {
        match self {
            EncodingOp::Dense(m) => m.adjoint_mul_vec(v),
            EncodingOp::Lcu(l) => l.apply_adjoint(v),
        }
    }
}

/// A `(β, n_anc, ε)` block-encoding: `‖β·⟨G|U|G⟩ − H‖ ≤ ε`.
#[derive(Debug, Clone)]
pub struct BlockEncoding {
    op: EncodingOp,
    beta: f64,
    n_anc: usize,
    n_sys: usize,
    eps: f64,
    g_state: Vec<Complex64>,
}

fn zero_state(n: usize) -> Vec<Complex64> {
    let mut g = vec![Complex64::new(0.0, 0.0); 1 << n];
    g[0] = Complex64::new(1.0, 0.0);
    g
}

impl BlockEncoding {
    /// Wrap a dense unitary. `g_state` defaults to `|0…0⟩`.
    pub fn from_unitary(
        unitary: ComplexMatrix,
        beta: f64,
        n_anc: usize,
        eps: f64,
        g_state: Option<Vec<Complex64>>,
    ) -> Result<Self> {
        unitary.require_unitary(UNITARY_TOL)?;
        let dim = unitary.rows();
        let total = crate::numerics::qubits_for_dim(dim)?;
        if n_anc > total {
            return Err(Error::DimMismatch {
                expected: 1 << n_anc,
                found: dim,
            });
        }
        Self::assemble(EncodingOp::Dense(unitary), beta, n_anc, total - n_anc, eps, g_state)
    }

    pub(crate) fn assemble(
        op: EncodingOp,
        beta: f64,
        n_anc: usize,
        n_sys: usize,
        eps: f64,
        g_state: Option<Vec<Complex64>>,
    ) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::BadRange(format!("beta = {beta} must be positive")));
        }
        if !(eps >= 0.0 && eps.is_finite()) {
            return Err(Error::BadRange(format!("eps = {eps} must be nonnegative")));
        }
        let g_state = g_state.unwrap_or_else(|| zero_state(n_anc));
        if g_state.len() != 1 << n_anc {
            return Err(Error::DimMismatch {
                expected: 1 << n_anc,
                found: g_state.len(),
            });
        }
        if (vector_norm(&g_state) - 1.0).abs() > NORM_TOL {
            return Err(Error::BadRange("g_state must be normalised".into()));
        }
        Ok(Self {
            op,
            beta,
            n_anc,
            n_sys,
            eps,
            g_state,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn n_anc(&self) -> usize {
        self.n_anc
    }

    pub fn system_qubits(&self) -> usize {
        self.n_sys
    }

    pub fn system_dim(&self) -> usize {
        1 << self.n_sys
    }

    pub fn total_qubits(&self) -> usize {
        self.n_anc + self.n_sys
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn g_state(&self) -> &[Complex64] {
        &self.g_state
    }

    pub fn op(&self) -> &EncodingOp {
        &self.op
    }

    /// Same encoding with a different declared error.
    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    /// Dense unitary. Structured encodings are materialised on demand.
    pub fn unitary(&self) -> Result<ComplexMatrix> {
        match &self.op {
            EncodingOp::Dense(m) => Ok(m.clone()),
            EncodingOp::Lcu(l) => {
                let q = self.total_qubits();
                if q > MAX_DENSE_QUBITS {
                    return Err(Error::TooLarge {
                        what: "encoding qubits",
                        value: q,
                        limit: MAX_DENSE_QUBITS,
                    });
                }
                Ok(l.to_matrix())
            }
        }
    }

    /// `⟨G|U|G⟩` as a system-sized matrix.
    pub fn projected_block(&self) -> ComplexMatrix {
        let n = self.system_dim();
        let mut out = ComplexMatrix::zeros(n, n);
        let mut col = vec![Complex64::new(0.0, 0.0); self.op.dim()];
        for j in 0..n {
            for (a, g) in self.g_state.iter().enumerate() {
                col[a * n + j] = *g;
            }
            let image = self.op.apply(&col);
            for i in 0..n {
                let z: Complex64 = self
                    .g_state
                    .iter()
                    .enumerate()
                    .map(|(a, g)| g.conj() * image[a * n + i])
                    .sum();
                out.set(i, j, z);
            }
            for a in 0..self.g_state.len() {
                col[a * n + j] = Complex64::new(0.0, 0.0);
            }
        }
        out
    }

    /// `β·⟨G|U|G⟩`.
    pub fn encoded_operator(&self) -> ComplexMatrix {
        self.projected_block().scale(self.beta)
    }

    /// Multiply the unitary on the right by `exp(i·strength·G)` with a
    /// random unit-norm Hermitian `G`. The declared error grows by
    /// `β·strength`, which bounds the change of the encoded block.
    pub fn perturbed<R: Rng + ?Sized>(&self, strength: f64, rng: &mut R) -> Result<Self> {
        let u = self.unitary()?;
        let g = random_hermitian(u.rows(), rng);
        let kick = matrix_exponential(&g, strength)?;
        Self::from_unitary(
            u.mul(&kick),
            self.beta,
            self.n_anc,
            self.eps + self.beta * strength,
            Some(self.g_state.clone()),
        )
    }
}

impl LinearOp for BlockEncoding {
    fn dim(&self) -> usize {
        self.op.dim()
    }

    fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.op.apply(v)
    }

    fn apply_adjoint(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.op.apply_adjoint(v)
    }
}

/// `‖β·⟨G|U|G⟩ − target‖`.
pub fn verify_block_encoding(be: &BlockEncoding, target: &ComplexMatrix) -> Result<f64> {
    if target.rows() != be.system_dim() || target.cols() != be.system_dim() {
        return Err(Error::DimMismatch {
            expected: be.system_dim(),
            found: target.rows(),
        });
    }
    Ok(operator_norm(&be.encoded_operator().sub(target)))
}
