use num_complex::Complex64;

use super::BlockEncoding;
use crate::error::{Error, Result};
use crate::numerics::{kron, operator_norm, ComplexMatrix};

const CONTROL_TOL: f64 = 1e-10;
const BRANCH_TOL: f64 = 1e-9;

/// Bottom-right block of `|0⟩⟨0| ⊗ I + |1⟩⟨1| ⊗ U`, checked for that shape.
fn controlled_target(cu: &ComplexMatrix) -> Result<ComplexMatrix> {
    cu.require_square()?;
    let dim = cu.rows();
    if dim < 2 || dim % 2 != 0 {
        return Err(Error::NotControlledForm(f64::INFINITY));
    }
    let n = dim / 2;
    let top = cu.block(0, 0, n, n).sub(&ComplexMatrix::identity(n));
    let off = operator_norm(&cu.block(0, n, n, n)).max(operator_norm(&cu.block(n, 0, n, n)));
    let dev = operator_norm(&top).max(off);
    if dev > CONTROL_TOL {
        return Err(Error::NotControlledForm(dev));
    }
    let u = cu.block(n, n, n, n);
    u.require_unitary(CONTROL_TOL)?;
    Ok(u)
}

/// From controlled-`U`, `U = e^{iH}`, build a `(1, 1, 0)` encoding of
/// `sin H = (U − U†)/2i`.
///
/// `M = −i·CU†·(ZX ⊗ I)·CU = [[0, −iU], [iU†, 0]]` carries `sin H` in its
/// `⟨+|·|+⟩` block; a Hadamard on each side of the control moves it to the
/// `⟨0|·|0⟩` corner so the default `|G⟩ = |0⟩` applies.
pub fn block_encoding_from_unitary(cu: &ComplexMatrix) -> Result<BlockEncoding> {
    let u = controlled_target(cu)?;
    let n = u.rows();
    let zx = ComplexMatrix::pauli_z().mul(&ComplexMatrix::pauli_x());
    let mid = kron(&zx, &ComplexMatrix::identity(n));
    let m = cu
        .adjoint()
        .mul(&mid)
        .mul(cu)
        .scale_complex(Complex64::new(0.0, -1.0));
    let had = kron(&ComplexMatrix::hadamard(), &ComplexMatrix::identity(n));
    let be = had.mul(&m).mul(&had);
    BlockEncoding::from_unitary(be, 1.0, 1, 0.0, None)
}

/// Exact-logarithm stand-in for the arcsin-polynomial construction:
/// `H = −i log U` on the principal branch, encoded with `β = 4·norm_H/π`
/// and two ancillas (the second idles).
///
/// With this `β` the block `H/β` has norm at most `π/4`, so the unitary
/// dilation `[[A, √(I−A²)], [√(I−A²), −A]]` exists.
pub fn idealized_log_encoding(u: &ComplexMatrix, norm_h: f64) -> Result<BlockEncoding> {
    u.require_unitary(1e-10)?;
    if !(norm_h > 0.0 && norm_h.is_finite()) {
        return Err(Error::BadRange(format!("norm_H = {norm_h} must be positive")));
    }
    let n = u.rows();
    let (q, t) = nalgebra::Schur::new(u.as_dmatrix().clone()).unpack();
    let mut phases = Vec::with_capacity(n);
    for i in 0..n {
        let phi = t[(i, i)].arg();
        if std::f64::consts::PI - phi.abs() <= BRANCH_TOL {
            return Err(Error::BranchCut(phi));
        }
        phases.push(phi);
    }
    let beta = 4.0 * norm_h / std::f64::consts::PI;

    // A = Q diag(φ/β) Q†, √(I−A²) = Q diag(√(1−(φ/β)²)) Q†
    let mut a_diag = Vec::with_capacity(n);
    let mut s_diag = Vec::with_capacity(n);
    for &phi in &phases {
        let x = phi / beta;
        if x.abs() > 1.0 {
            return Err(Error::NormBound(x.abs()));
        }
        a_diag.push(Complex64::new(x, 0.0));
        s_diag.push(Complex64::new((1.0 - x * x).sqrt(), 0.0));
    }
    let q = ComplexMatrix::from_dmatrix(q);
    let conj = |d: &[Complex64]| {
        let m = q.mul(&ComplexMatrix::from_diagonal(d)).mul(&q.adjoint());
        // exact Hermitian part; Schur round-off is the only asymmetry
        m.add(&m.adjoint()).scale(0.5)
    };
    let a = conj(&a_diag);
    let s = conj(&s_diag);

    // layout [anc1 | anc2 | system]; anc2 idles
    let dim = 4 * n;
    let mut full = ComplexMatrix::zeros(dim, dim);
    for a1 in 0..2 {
        for b1 in 0..2 {
            let blk = match (a1, b1) {
                (0, 0) => &a,
                (1, 1) => &a,
                _ => &s,
            };
            let sign = if a1 == 1 && b1 == 1 { -1.0 } else { 1.0 };
            for a2 in 0..2 {
                let r0 = (a1 * 2 + a2) * n;
                let c0 = (b1 * 2 + a2) * n;
                for i in 0..n {
                    for j in 0..n {
                        full.set(r0 + i, c0 + j, blk.get(i, j) * sign);
                    }
                }
            }
        }
    }
    BlockEncoding::from_unitary(full, beta, 2, 0.0, None)
}

/// Permutation taking `[ancA sysA ancB sysB]` index order to
/// `[ancA ancB sysA sysB]`: returns `perm[old] = new`.
pub(crate) fn gather_ancillas_perm(na: usize, sa: usize, nb: usize, sb: usize) -> Vec<usize> {
    let total = na + sa + nb + sb;
    let mut perm = vec![0; 1 << total];
    for (old, slot) in perm.iter_mut().enumerate() {
        let sys_b = old & ((1 << sb) - 1);
        let anc_b = (old >> sb) & ((1 << nb) - 1);
        let sys_a = (old >> (sb + nb)) & ((1 << sa) - 1);
        let anc_a = old >> (sb + nb + sa);
        *slot = (((anc_a << nb | anc_b) << sa | sys_a) << sb) | sys_b;
    }
    perm
}

/// Tensor product: a `(β_Aβ_B, n_A + n_B, β_B ε_A + β_A ε_B)` encoding of
/// `H_A ⊗ H_B`, ancillas gathered in front.
pub fn tensor_block_encodings(a: &BlockEncoding, b: &BlockEncoding) -> Result<BlockEncoding> {
    let ua = a.unitary()?;
    let ub = b.unitary()?;
    let total = a.total_qubits() + b.total_qubits();
    if total > super::MAX_DENSE_QUBITS {
        return Err(Error::TooLarge {
            what: "encoding qubits",
            value: total,
            limit: super::MAX_DENSE_QUBITS,
        });
    }
    let raw = kron(&ua, &ub);
    let perm = gather_ancillas_perm(a.n_anc(), a.system_qubits(), b.n_anc(), b.system_qubits());
    let dim = raw.rows();
    let mut out = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            out.set(perm[i], perm[j], raw.get(i, j));
        }
    }
    let g: Vec<Complex64> = crate::numerics::kron_vec(a.g_state(), b.g_state());
    BlockEncoding::from_unitary(
        out,
        a.beta() * b.beta(),
        a.n_anc() + b.n_anc(),
        b.beta() * a.eps() + a.beta() * b.eps(),
        Some(g),
    )
}
