//! PREP/SELECT encoding of a Pauli sum, kept in factored form so it can be
//! applied to registers far larger than could be stored densely.

use num_complex::Complex64;

use super::{BlockEncoding, EncodingOp, MAX_STRUCTURED_QUBITS};
use crate::error::{Error, Result};
use crate::numerics::LinearOp;
use crate::pauli::{LcpHamiltonian, PauliAction};

/// `U = PREP · SELECT · PREP` with
///
/// * `PREP = I − 2|w⟩⟨w|/⟨w|w⟩`, `w = |0⟩ − Σ_l √(|α_l|/α)|l⟩` — a real
///   Householder reflection sending `|0⟩` to the amplitude state;
/// * `SELECT = Σ_l |l⟩⟨l| ⊗ sign(α_l) P_l`, identity on padding indices.
///
/// Both factors are Hermitian involutions, so `U` is Hermitian too.
#[derive(Debug, Clone)]
pub struct LcuOperator {
    n_anc: usize,
    n_sys: usize,
    /// Householder vector, `None` when PREP is the identity.
    w: Option<Vec<f64>>,
    terms: Vec<(f64, PauliAction)>,
}

impl LcuOperator {
    pub fn n_anc(&self) -> usize {
        self.n_anc
    }

    pub fn n_sys(&self) -> usize {
        self.n_sys
    }

    fn block(&self) -> usize {
        1 << self.n_sys
    }

    fn prep(&self, v: &mut [Complex64]) {
        let Some(w) = &self.w else { return };
        let n = self.block();
        let ww: f64 = w.iter().map(|x| x * x).sum();
        let mut proj = vec![Complex64::new(0.0, 0.0); n];
        for (a, &wa) in w.iter().enumerate() {
            if wa == 0.0 {
                continue;
            }
            for (p, x) in proj.iter_mut().zip(&v[a * n..(a + 1) * n]) {
                *p += x * wa;
            }
        }
        let f = 2.0 / ww;
        for (a, &wa) in w.iter().enumerate() {
            if wa == 0.0 {
                continue;
            }
            let c = f * wa;
            for (x, p) in v[a * n..(a + 1) * n].iter_mut().zip(&proj) {
                *x -= p * c;
            }
        }
    }

    fn select(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.block();
        let mut out = v.to_vec();
        for (l, (sign, action)) in self.terms.iter().enumerate() {
            let range = l * n..(l + 1) * n;
            let dst = &mut out[range.clone()];
            dst.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
            action.accumulate(Complex64::new(*sign, 0.0), &v[range], dst);
        }
        out
    }
}

impl LinearOp for LcuOperator {
    fn dim(&self) -> usize {
        1 << (self.n_anc + self.n_sys)
    }

    fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim(), "state length must match encoding");
        let mut x = v.to_vec();
        self.prep(&mut x);
        let mut y = self.select(&x);
        self.prep(&mut y);
        y
    }

    fn apply_adjoint(&self, v: &[Complex64]) -> Vec<Complex64> {
        // Hermitian: U† = U
        self.apply(v)
    }
}

/// `(α, ⌈log2 |P|⌉, 0)` encoding of `H = Σ_l α_l P_l`.
pub fn lcu_block_encoding(h: &LcpHamiltonian) -> Result<BlockEncoding> {
    let num = h.num_terms();
    if num == 0 {
        return Err(Error::EmptyHamiltonian);
    }
    let n_anc = num.next_power_of_two().trailing_zeros() as usize;
    let n_sys = h.num_qubits();
    if n_anc + n_sys > MAX_STRUCTURED_QUBITS {
        return Err(Error::TooLarge {
            what: "encoding qubits",
            value: n_anc + n_sys,
            limit: MAX_STRUCTURED_QUBITS,
        });
    }
    let alpha = h.one_norm();
    let mut amp = vec![0.0; 1 << n_anc];
    for (l, (c, _)) in h.terms().iter().enumerate() {
        amp[l] = (c.abs() / alpha).sqrt();
    }
    let mut w: Vec<f64> = amp.iter().map(|a| -a).collect();
    w[0] += 1.0;
    let ww: f64 = w.iter().map(|x| x * x).sum();
    let w = if ww < 1e-30 { None } else { Some(w) };

    let terms = h
        .terms()
        .iter()
        .map(|(c, p)| (c.signum(), p.action()))
        .collect();
    let op = LcuOperator {
        n_anc,
        n_sys,
        w,
        terms,
    };
    BlockEncoding::assemble(EncodingOp::Lcu(op), alpha, n_anc, n_sys, 0.0, None)
}
