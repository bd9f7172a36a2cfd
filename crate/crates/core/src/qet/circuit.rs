//! QET circuits on a full register `[rotation qubit | walk register]`.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::phases::PhaseSequence;
use crate::blockenc::QubitizedEncoding;
use crate::error::{Error, Result};
use crate::numerics::{matrix_exponential, random_hermitian, ComplexMatrix, LinearOp};

/// Largest register `evaluate_circuit` will materialise.
pub const MAX_EVAL_QUBITS: usize = 12;

type C = Complex64;

/// Seeded perturbation of every gate: each signal call `CW^{±1}` becomes
/// `CW^{±1}·e^{iε_W G_j}` and each rotation `R_j` becomes `R_j·e^{iε_R g_j}`,
/// with `G_j`, `g_j` unit-norm Hermitian draws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorInjection {
    pub eps_w: f64,
    pub eps_r: f64,
    pub seed: u64,
}

#[derive(Debug, Clone)]
struct InjectedGates {
    signal: Vec<ComplexMatrix>,
    rotation: Vec<[[C; 2]; 2]>,
}

/// `R_0 · Π_{j=1}^{d} [CW · R_{2j−1} · CW† · R_{2j}]`, with `CW` applying
/// the walk when the rotation qubit is `|0⟩`.
#[derive(Debug, Clone)]
pub struct QetCircuit {
    phases: PhaseSequence,
    signal: QubitizedEncoding,
    d: usize,
    error_injection: Option<ErrorInjection>,
    injected: Option<InjectedGates>,
}

/// Check the rotation count and bind the signal operator.
pub fn assemble_qet_circuit(w: &QubitizedEncoding, phases: PhaseSequence) -> Result<QetCircuit> {
    if phases.len() % 2 == 0 {
        return Err(Error::BadPhaseCount(phases.len()));
    }
    Ok(QetCircuit {
        d: phases.len() / 2,
        phases,
        signal: w.clone(),
        error_injection: None,
        injected: None,
    })
}

impl QetCircuit {
    pub fn phases(&self) -> &PhaseSequence {
        &self.phases
    }

    pub fn signal(&self) -> &QubitizedEncoding {
        &self.signal
    }

    /// Number of `CW`/`CW†` pairs.
    pub fn d(&self) -> usize {
        self.d
    }

    /// Total signal calls, `2d`.
    pub fn signal_calls(&self) -> usize {
        2 * self.d
    }

    pub fn error_injection(&self) -> Option<ErrorInjection> {
        self.error_injection
    }

    /// Dimension of the full register.
    pub fn dim(&self) -> usize {
        2 * self.signal.dim()
    }

    /// Attach a seeded perturbation; needs a densely representable register.
    pub fn with_injection(mut self, inj: ErrorInjection) -> Result<Self> {
        let q = self.signal.total_qubits() + 1;
        if q > MAX_EVAL_QUBITS {
            return Err(Error::TooLarge {
                what: "circuit qubits",
                value: q,
                limit: MAX_EVAL_QUBITS,
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(inj.seed);
        let dim = self.dim();
        let mut signal = Vec::with_capacity(self.signal_calls());
        for _ in 0..self.signal_calls() {
            let g = random_hermitian(dim, &mut rng);
            signal.push(matrix_exponential(&g, inj.eps_w)?);
        }
        let mut rotation = Vec::with_capacity(self.phases.len());
        for _ in 0..self.phases.len() {
            let g = random_hermitian(2, &mut rng);
            let e = matrix_exponential(&g, inj.eps_r)?;
            rotation.push([[e.get(0, 0), e.get(0, 1)], [e.get(1, 0), e.get(1, 1)]]);
        }
        self.error_injection = Some(inj);
        self.injected = Some(InjectedGates { signal, rotation });
        Ok(self)
    }

    fn rotate(&self, idx: usize, v: &mut [C]) {
        let r = self.phases.rotations[idx].matrix();
        let m = match &self.injected {
            Some(inj) => {
                let e = &inj.rotation[idx];
                let mut out = [[C::new(0.0, 0.0); 2]; 2];
                for i in 0..2 {
                    for j in 0..2 {
                        out[i][j] = r[i][0] * e[0][j] + r[i][1] * e[1][j];
                    }
                }
                out
            }
            None => r,
        };
        let half = v.len() / 2;
        let (lo, hi) = v.split_at_mut(half);
        for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
            let (x, y) = (*a, *b);
            *a = m[0][0] * x + m[0][1] * y;
            *b = m[1][0] * x + m[1][1] * y;
        }
    }

    fn signal_call(&self, call: usize, adjoint: bool, v: &mut Vec<C>) {
        if let Some(inj) = &self.injected {
            *v = inj.signal[call].mul_vec(v);
        }
        let half = v.len() / 2;
        let upper = if adjoint {
            self.signal.apply_adjoint(&v[..half])
        } else {
            self.signal.apply(&v[..half])
        };
        v[..half].copy_from_slice(&upper);
    }

    /// `U·v` for a full-register state.
    pub fn apply(&self, v: &[C]) -> Vec<C> {
        assert_eq!(v.len(), self.dim(), "state length must match circuit");
        let mut x = v.to_vec();
        let n = self.phases.len();
        // rightmost factor first: R_{2d}, CW†, R_{2d−1}, CW, …, R_0
        let mut call = self.signal_calls();
        for idx in (0..n).rev() {
            self.rotate(idx, &mut x);
            if idx == 0 {
                break;
            }
            call -= 1;
            self.signal_call(call, idx % 2 == 0, &mut x);
        }
        x
    }

    /// `|+⟩ ⊗ |G'⟩ ⊗ |ψ⟩`.
    pub fn embed(&self, psi: &[C]) -> Vec<C> {
        let inner = self.signal.embed(psi);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut out = Vec::with_capacity(2 * inner.len());
        out.extend(inner.iter().map(|z| z * h));
        out.extend(inner.iter().map(|z| z * h));
        out
    }

    /// `(⟨+| ⊗ ⟨G'| ⊗ I)·v`.
    pub fn project(&self, v: &[C]) -> Vec<C> {
        let half = v.len() / 2;
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let folded: Vec<C> = v[..half].iter().zip(&v[half..]).map(|(a, b)| (a + b) * h).collect();
        self.signal.project(&folded)
    }

    /// `⟨+, G'|U|+, G'⟩ |ψ⟩`.
    pub fn postselected_apply(&self, psi: &[C]) -> Vec<C> {
        self.project(&self.apply(&self.embed(psi)))
    }

    /// Dense `⟨+, G'|U|+, G'⟩` on the system.
    pub fn postselected_map(&self) -> ComplexMatrix {
        let n = self.signal.system_dim();
        let mut out = ComplexMatrix::zeros(n, n);
        for j in 0..n {
            let mut e = vec![C::new(0.0, 0.0); n];
            e[j] = C::new(1.0, 0.0);
            for (i, z) in self.postselected_apply(&e).into_iter().enumerate() {
                out.set(i, j, z);
            }
        }
        out
    }
}

impl LinearOp for QetCircuit {
    fn dim(&self) -> usize {
        QetCircuit::dim(self)
    }

    fn apply(&self, v: &[C]) -> Vec<C> {
        QetCircuit::apply(self, v)
    }

    fn apply_adjoint(&self, v: &[C]) -> Vec<C> {
        // only needed for dense checks; go through the matrix
        self.to_matrix().adjoint_mul_vec(v)
    }
}

/// Dense unitary of the whole circuit.
pub fn evaluate_circuit(c: &QetCircuit) -> Result<ComplexMatrix> {
    let q = c.signal.total_qubits() + 1;
    if q > MAX_EVAL_QUBITS {
        return Err(Error::TooLarge {
            what: "circuit qubits",
            value: q,
            limit: MAX_EVAL_QUBITS,
        });
    }
    Ok(LinearOp::to_matrix(c))
}
