//! Qubitization with one extra qubit.
//!
//! From an encoding `U` of `H/β` build the Hermitian involution
//!
//! ```text
//! U' = (σ_X ⊗ I) · C₁U† · C₀U = [[0, U†], [U, 0]]
//! ```
//!
//! which satisfies `U'² = I` and `⟨G'|U'|G'⟩ = H/β` for `|G'⟩ = |+⟩|G⟩`. Being an
//! involution its own spectrum is just `±1`; the iterate carrying the
//! `e^{±i·arccos(λ/β)}` eigenphases is the walk `W = (2|G'⟩⟨G'| − I)·U'`,
//! which is what QET uses as its signal operator.

use num_complex::Complex64;

use super::{BlockEncoding, MAX_DENSE_QUBITS};
use crate::error::{Error, Result};
use crate::numerics::{hermitian_eigendecomposition, inner, operator_norm, vector_norm, ComplexMatrix, LinearOp};

/// A block-encoding promoted to a qubitized walk.
#[derive(Debug, Clone)]
pub struct QubitizedEncoding {
    base: BlockEncoding,
    g_prime: Vec<Complex64>,
    /// `‖⟨G'|U'²|G'⟩ − I‖` measured at construction.
    qubit_defect: f64,
}

fn zero(n: usize) -> Vec<Complex64> {
    vec![Complex64::new(0.0, 0.0); n]
}

impl QubitizedEncoding {
    pub fn base(&self) -> &BlockEncoding {
        &self.base
    }

    pub fn beta(&self) -> f64 {
        self.base.beta()
    }

    pub fn n_anc(&self) -> usize {
        self.base.n_anc() + 1
    }

    pub fn eps(&self) -> f64 {
        self.base.eps()
    }

    pub fn g_state(&self) -> &[Complex64] {
        &self.g_prime
    }

    pub fn system_dim(&self) -> usize {
        self.base.system_dim()
    }

    pub fn total_qubits(&self) -> usize {
        self.base.total_qubits() + 1
    }

    /// Defect of the Def.-2 identity `⟨G'|U'²|G'⟩ = I`.
    pub fn qubit_defect(&self) -> f64 {
        self.qubit_defect
    }

    /// `U'·v`.
    pub fn apply_involution(&self, v: &[Complex64]) -> Vec<Complex64> {
        let d = self.base.dim();
        let mut out = Vec::with_capacity(2 * d);
        out.extend(self.base.apply_adjoint(&v[d..]));
        out.extend(self.base.apply(&v[..d]));
        out
    }

    /// `(2|G'⟩⟨G'| ⊗ I − I)·v`, in place.
    pub fn reflect(&self, v: &mut [Complex64]) {
        let n = self.system_dim();
        let mut c = zero(n);
        for (a, g) in self.g_prime.iter().enumerate() {
            if *g == Complex64::new(0.0, 0.0) {
                continue;
            }
            let gc = g.conj();
            for (cs, x) in c.iter_mut().zip(&v[a * n..(a + 1) * n]) {
                *cs += gc * x;
            }
        }
        for z in v.iter_mut() {
            *z = -*z;
        }
        for (a, g) in self.g_prime.iter().enumerate() {
            if *g == Complex64::new(0.0, 0.0) {
                continue;
            }
            let g2 = g * 2.0;
            for (x, cs) in v[a * n..(a + 1) * n].iter_mut().zip(&c) {
                *x += g2 * cs;
            }
        }
    }

    /// `|G'⟩ ⊗ |ψ⟩`.
    pub fn embed(&self, psi: &[Complex64]) -> Vec<Complex64> {
        crate::numerics::kron_vec(&self.g_prime, psi)
    }

    /// `(⟨G'| ⊗ I)·v`.
    pub fn project(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.system_dim();
        let mut c = zero(n);
        for (a, g) in self.g_prime.iter().enumerate() {
            let gc = g.conj();
            for (cs, x) in c.iter_mut().zip(&v[a * n..(a + 1) * n]) {
                *cs += gc * x;
            }
        }
        c
    }

    fn require_dense(&self) -> Result<()> {
        let q = self.total_qubits();
        if q > MAX_DENSE_QUBITS {
            return Err(Error::TooLarge {
                what: "walk qubits",
                value: q,
                limit: MAX_DENSE_QUBITS,
            });
        }
        Ok(())
    }

    /// Dense `U'`.
    pub fn involution_matrix(&self) -> Result<ComplexMatrix> {
        self.require_dense()?;
        struct Inv<'a>(&'a QubitizedEncoding);
        impl LinearOp for Inv<'_> {
            fn dim(&self) -> usize {
                self.0.dim()
            }
            fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
                self.0.apply_involution(v)
            }
            fn apply_adjoint(&self, v: &[Complex64]) -> Vec<Complex64> {
                self.0.apply_involution(v)
            }
        }
        Ok(Inv(self).to_matrix())
    }

    /// Dense walk operator `W`.
    pub fn walk_matrix(&self) -> Result<ComplexMatrix> {
        self.require_dense()?;
        Ok(self.to_matrix())
    }

    fn measure_qubit_defect(&self) -> f64 {
        let n = self.system_dim();
        let mut m = ComplexMatrix::zeros(n, n);
        for j in 0..n {
            let mut e = zero(n);
            e[j] = Complex64::new(1.0, 0.0);
            let v = self.embed(&e);
            let w = self.apply_involution(&self.apply_involution(&v));
            for (i, z) in self.project(&w).into_iter().enumerate() {
                m.set(i, j, z);
            }
        }
        operator_norm(&m.sub(&ComplexMatrix::identity(n)))
    }
}

impl LinearOp for QubitizedEncoding {
    fn dim(&self) -> usize {
        2 * self.base.dim()
    }

    /// `W·v`.
    fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = self.apply_involution(v);
        self.reflect(&mut out);
        out
    }

    /// `W†·v = U'·R·v`.
    fn apply_adjoint(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut x = v.to_vec();
        self.reflect(&mut x);
        self.apply_involution(&x)
    }
}

/// Add the qubitization qubit; metadata `(β, n_anc + 1, ε)`.
pub fn qubitize(be: &BlockEncoding) -> QubitizedEncoding {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus = [Complex64::new(h, 0.0), Complex64::new(h, 0.0)];
    let g_prime = crate::numerics::kron_vec(&plus, be.g_state());
    let mut w = QubitizedEncoding {
        base: be.clone(),
        g_prime,
        qubit_defect: 0.0,
    };
    w.qubit_defect = w.measure_qubit_defect();
    w
}

/// Wrap an angle difference into `(−π, π]`.
fn angle_distance(a: f64, b: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let d = (a - b).rem_euclid(two_pi);
    d.min(two_pi - d)
}

/// Eigenphases found for one eigenvalue of `H/β`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseMatch {
    pub lambda: f64,
    /// `arccos(λ/β)`; both `±` are expected.
    pub expected: f64,
    /// Eigenphases of `W` on the invariant subspace through `|G'⟩|λ⟩`.
    pub found: Vec<f64>,
    pub mismatch: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenphaseReport {
    pub matches: Vec<PhaseMatch>,
    /// Worst phase or invariance error on the two-dimensional subspaces.
    pub subspace_mismatch: f64,
    /// Worst distance from an expected phase to the full spectrum of `W`.
    pub spectrum_mismatch: f64,
    pub max_mismatch: f64,
}

/// Compare the spectrum of `W` with `±arccos` of the spectrum of `h/β`.
pub fn qubitization_eigenphases(w: &QubitizedEncoding, h: &ComplexMatrix) -> Result<EigenphaseReport> {
    if h.rows() != w.system_dim() {
        return Err(Error::DimMismatch {
            expected: w.system_dim(),
            found: h.rows(),
        });
    }
    let spec = hermitian_eigendecomposition(h)?;
    let beta = w.beta();

    let mut matches = Vec::new();
    let mut subspace_mismatch = 0.0f64;
    for (k, &lam) in spec.eigenvalues.iter().enumerate() {
        let x = (lam / beta).clamp(-1.0, 1.0);
        let theta = x.acos();
        let v1 = w.embed(&spec.eigenvector(k));
        let y = w.apply(&v1);
        let c11 = inner(&v1, &y);
        let r: Vec<Complex64> = y.iter().zip(&v1).map(|(a, b)| a - c11 * b).collect();
        let rn = vector_norm(&r);

        let (found, invariance) = if rn < 1e-10 {
            (vec![c11.arg()], rn)
        } else {
            let v2: Vec<Complex64> = r.iter().map(|z| z / rn).collect();
            let wv2 = w.apply(&v2);
            let m = [
                [c11, inner(&v1, &wv2)],
                [inner(&v2, &y), inner(&v2, &wv2)],
            ];
            let resid: Vec<Complex64> = wv2
                .iter()
                .zip(v1.iter().zip(&v2))
                .map(|(z, (a, b))| z - m[0][1] * a - m[1][1] * b)
                .collect();
            let half_tr = (m[0][0] + m[1][1]) * 0.5;
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            let disc = (half_tr * half_tr - det).sqrt();
            (vec![(half_tr + disc).arg(), (half_tr - disc).arg()], vector_norm(&resid))
        };

        let mut mismatch = invariance;
        for target in [theta, -theta] {
            let best = found
                .iter()
                .map(|&f| angle_distance(f, target))
                .fold(f64::INFINITY, f64::min);
            mismatch = mismatch.max(best);
        }
        subspace_mismatch = subspace_mismatch.max(mismatch);
        matches.push(PhaseMatch {
            lambda: lam,
            expected: theta,
            found,
            mismatch,
        });
    }

    let dense = w.walk_matrix()?;
    let schur = nalgebra::Schur::new(dense.into_dmatrix());
    let phases: Vec<f64> = schur
        .eigenvalues()
        .map(|ev| ev.iter().map(|z| z.arg()).collect())
        .unwrap_or_default();
    let mut spectrum_mismatch = 0.0f64;
    for m in &matches {
        for target in [m.expected, -m.expected] {
            let best = phases
                .iter()
                .map(|&f| angle_distance(f, target))
                .fold(f64::INFINITY, f64::min);
            spectrum_mismatch = spectrum_mismatch.max(best);
        }
    }
    Ok(EigenphaseReport {
        matches,
        subspace_mismatch,
        spectrum_mismatch,
        max_mismatch: subspace_mismatch.max(spectrum_mismatch),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blockenc::lcu_block_encoding;
    use crate::pauli::{lcp_to_matrix, parse_lcp};
    use std::f64::consts::PI;

    #[test]
    fn metadata_and_def2_identity() {
        let be = lcu_block_encoding(&parse_lcp("0.5 Z\n0.25 X").unwrap()).unwrap();
        let w = qubitize(&be);
        assert_eq!(w.n_anc(), be.n_anc() + 1);
        assert_eq!(w.beta(), be.beta());
        assert_eq!(w.eps(), be.eps());
        assert!((vector_norm(w.g_state()) - 1.0).abs() < 1e-15);
        assert!(w.qubit_defect() < 1e-12);
        let inv = w.involution_matrix().unwrap();
        assert!(inv.is_hermitian(1e-14));
        assert!(operator_norm(&inv.mul(&inv).sub(&ComplexMatrix::identity(inv.rows()))) < 1e-13);
    }

    #[test]
    fn walk_block_is_h_over_beta() {
        let h = parse_lcp("0.5 Z\n0.25 X").unwrap();
        let w = qubitize(&lcu_block_encoding(&h).unwrap());
        let hm = lcp_to_matrix(&h).unwrap();
        for j in 0..2 {
            let mut e = zero(2);
            e[j] = Complex64::new(1.0, 0.0);
            let col = w.project(&w.apply(&w.embed(&e)));
            for i in 0..2 {
                assert!((col[i] - hm.get(i, j) / 0.75).norm() < 1e-14);
            }
        }
        assert!(w.walk_matrix().unwrap().unitarity_defect() < 1e-13);
    }

    #[test]
    fn trivial_z_phases() {
        let h = parse_lcp("1 Z").unwrap();
        let w = qubitize(&lcu_block_encoding(&h).unwrap());
        let rep = qubitization_eigenphases(&w, &ComplexMatrix::pauli_z()).unwrap();
        assert!(rep.max_mismatch < 1e-12);
        let expected: Vec<f64> = rep.matches.iter().map(|m| m.expected).collect();
        assert!((expected[0] - PI).abs() < 1e-12);
        assert!(expected[1].abs() < 1e-12);
    }

    #[test]
    fn zero_eigenvalue_gives_quarter_turn() {
        // XZ and ZX commute with spectra ±1, so the average has eigenvalues {−1, 0, 0, 1}
        let h = parse_lcp("0.5 XZ\n0.5 ZX").unwrap();
        let hm = lcp_to_matrix(&h).unwrap();
        let spec = hermitian_eigendecomposition(&hm).unwrap();
        let w = qubitize(&lcu_block_encoding(&h).unwrap());
        let rep = qubitization_eigenphases(&w, &hm).unwrap();
        assert!(rep.max_mismatch < 1e-10);
        for (m, lam) in rep.matches.iter().zip(&spec.eigenvalues) {
            if lam.abs() < 1e-12 {
                assert!((m.expected - PI / 2.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn two_level_phases() {
        let h = parse_lcp("0.5 Z\n0.25 X").unwrap();
        let w = qubitize(&lcu_block_encoding(&h).unwrap());
        let rep = qubitization_eigenphases(&w, &lcp_to_matrix(&h).unwrap()).unwrap();
        assert!(rep.max_mismatch < 1e-10, "{rep:?}");
        let l = 0.3125f64.sqrt() / 0.75;
        assert!((rep.matches[1].expected - l.acos()).abs() < 1e-14);
    }
}
