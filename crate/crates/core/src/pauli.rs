//! Pauli strings, real-weighted Pauli sums (LCP Hamiltonians) and the
//! pointer-coupling expansion `H ⊗ p`.
//!
//! A string is stored as a pair of bit masks in the symplectic form
//! `P = i^{#Y} · X^x · Z^z`, with qubit 0 on the most significant bit.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::ComplexMatrix;

/// Largest system size that may be materialised densely.
pub const MAX_DENSE_QUBITS: usize = 12;
/// Largest pointer register accepted by [`momentum_operator`].
pub const MAX_POINTER_QUBITS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Tensor product of single-qubit Paulis, leftmost letter on qubit 0.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliString {
    letters: Vec<Pauli>,
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::BadRange("Pauli string must have length >= 1".into()));
        }
        if letters.len() > 63 {
            return Err(Error::TooLarge {
                what: "Pauli string length",
                value: letters.len(),
                limit: 63,
            });
        }
        Ok(Self { letters })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(vec![Pauli::I; n])
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    /// Concatenation `self ⊗ other`.
    pub fn tensor(&self, other: &PauliString) -> Result<PauliString> {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Self::new(letters)
    }

    /// `(x_mask, z_mask, #Y)`.
    pub fn masks(&self) -> (u64, u64, u32) {
        let n = self.letters.len();
        let (mut x, mut z, mut ny) = (0u64, 0u64, 0u32);
        for (q, p) in self.letters.iter().enumerate() {
            let bit = 1u64 << (n - 1 - q);
            match p {
                Pauli::I => {}
                Pauli::X => x |= bit,
                Pauli::Z => z |= bit,
                Pauli::Y => {
                    x |= bit;
                    z |= bit;
                    ny += 1;
                }
            }
        }
        (x, z, ny)
    }

    /// Compiled form for repeated application.
    pub fn action(&self) -> PauliAction {
        let (x, z, ny) = self.masks();
        let phase = match ny % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        PauliAction {
            x_mask: x as usize,
            z_mask: z as usize,
            phase,
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let n = self.len();
        if n > MAX_DENSE_QUBITS {
            return Err(Error::TooLarge {
                what: "qubits",
                value: n,
                limit: MAX_DENSE_QUBITS,
            });
        }
        let dim = 1usize << n;
        let a = self.action();
        let mut m = ComplexMatrix::zeros(dim, dim);
        for s in 0..dim {
            let (t, ph) = a.map_basis(s);
            m.set(t, s, ph);
        }
        Ok(m)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.letters {
            write!(f, "{}", p.as_char())?;
        }
        Ok(())
    }
}

/// `P|s⟩ = phase · (−1)^{|s ∧ z|} |s ⊕ x⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliAction {
    pub x_mask: usize,
    pub z_mask: usize,
    pub phase: Complex64,
}

impl PauliAction {
    #[inline]
    pub fn map_basis(&self, s: usize) -> (usize, Complex64) {
        let sign = if (s & self.z_mask).count_ones() % 2 == 1 {
            -1.0
        } else {
            1.0
        };
        (s ^ self.x_mask, self.phase * sign)
    }

    /// `out += coef · P · v`, where `v` and `out` span the string's register.
    #[inline]
    pub fn accumulate(&self, coef: Complex64, v: &[Complex64], out: &mut [Complex64]) {
        let c = coef * self.phase;
        for (s, &vs) in v.iter().enumerate() {
            let sign = (s & self.z_mask).count_ones() & 1;
            let t = s ^ self.x_mask;
            if sign == 1 {
                out[t] -= c * vs;
            } else {
                out[t] += c * vs;
            }
        }
    }
}

/// `H = Σ_l α_l P_l` with real coefficients, merged and sorted by string.
#[derive(Debug, Clone, PartialEq)]
pub struct LcpHamiltonian {
    n: usize,
    terms: Vec<(f64, PauliString)>,
}

impl LcpHamiltonian {
    /// Merge duplicate strings; exact cancellations are dropped.
    pub fn new(terms: Vec<(f64, PauliString)>) -> Result<Self> {
        let n = match terms.first() {
            Some((_, p)) => p.len(),
            None => return Err(Error::EmptyHamiltonian),
        };
        let mut merged: BTreeMap<PauliString, f64> = BTreeMap::new();
        for (c, p) in terms {
            if !c.is_finite() {
                return Err(Error::BadRange(format!("non-finite coefficient on {p}")));
            }
            if p.len() != n {
                return Err(Error::DimMismatch {
                    expected: n,
                    found: p.len(),
                });
            }
            *merged.entry(p).or_insert(0.0) += c;
        }
        let terms: Vec<_> = merged
            .into_iter()
            .filter(|(_, c)| *c != 0.0)
            .map(|(p, c)| (c, p))
            .collect();
        if terms.is_empty() {
            return Err(Error::EmptyHamiltonian);
        }
        Ok(Self { n, terms })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// `α = Σ_l |α_l|`.
    pub fn one_norm(&self) -> f64 {
        self.terms.iter().map(|(c, _)| c.abs()).sum()
    }

    /// Canonical text form; [`parse_lcp`] inverts it exactly.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (c, p) in &self.terms {
            s.push_str(&format!("{c:?} {p}\n"));
        }
        s
    }

    /// `H|v⟩` without building the matrix.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
        for (c, p) in &self.terms {
            p.action()
                .accumulate(Complex64::new(*c, 0.0), v, &mut out);
        }
        out
    }
}

/// Parse `"<coefficient> <letters>"` lines; `#` starts a comment line.
pub fn parse_lcp(text: &str) -> Result<LcpHamiltonian> {
    let mut terms = Vec::new();
    let mut n: Option<usize> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |reason: String| Error::Parse {
            line: line_no,
            reason,
        };
        let mut fields = line.split_whitespace();
        let coef_txt = fields.next().ok_or_else(|| err("missing coefficient".into()))?;
        let letters_txt = fields.next().ok_or_else(|| err("missing Pauli letters".into()))?;
        if fields.next().is_some() {
            return Err(err("trailing fields".into()));
        }
        let coef: f64 = coef_txt
            .parse()
            .map_err(|_| err(format!("bad coefficient {coef_txt:?}")))?;
        if !coef.is_finite() {
            return Err(err(format!("non-finite coefficient {coef_txt:?}")));
        }
        let letters = letters_txt
            .chars()
            .map(|ch| Pauli::from_char(ch).ok_or_else(|| err(format!("bad Pauli letter {ch:?}"))))
            .collect::<Result<Vec<_>>>()?;
        match n {
            None => n = Some(letters.len()),
            Some(k) if k != letters.len() => {
                return Err(err(format!(
                    "string length {} differs from {k}",
                    letters.len()
                )))
            }
            _ => {}
        }
        let p = PauliString::new(letters).map_err(|e| err(e.to_string()))?;
        terms.push((coef, p));
    }
    LcpHamiltonian::new(terms)
}

/// Dense `Σ_l α_l P_l`.
pub fn lcp_to_matrix(h: &LcpHamiltonian) -> Result<ComplexMatrix> {
    let n = h.num_qubits();
    if n > MAX_DENSE_QUBITS {
        return Err(Error::TooLarge {
            what: "qubits",
            value: n,
            limit: MAX_DENSE_QUBITS,
        });
    }
    let dim = 1usize << n;
    let mut m = ComplexMatrix::zeros(dim, dim);
    for (c, p) in h.terms() {
        let a = p.action();
        for s in 0..dim {
            let (t, ph) = a.map_basis(s);
            let cur = m.get(t, s);
            m.set(t, s, cur + ph * *c);
        }
    }
    Ok(m)
}

/// Diagonal of the discretised momentum `p|z⟩ = (z/2^r)|z⟩`.
pub fn momentum_operator(r: usize) -> Result<Vec<f64>> {
    if r == 0 || r > MAX_POINTER_QUBITS {
        return Err(Error::BadRange(format!(
            "pointer qubits r = {r} outside [1, {MAX_POINTER_QUBITS}]"
        )));
    }
    let dim = 1usize << r;
    Ok((0..dim).map(|z| z as f64 / dim as f64).collect())
}

/// Expand `H ⊗ p` as a Pauli sum on `n + r` qubits, pointer qubits last.
///
/// Uses `p = Σ_{j=1}^{r} 2^{−j} (I − Z_j)/2`, where pointer qubit `j = 1`
/// carries the most significant bit of `z`.
pub fn couple_pointer(h: &LcpHamiltonian, r: usize) -> Result<LcpHamiltonian> {
    if r == 0 {
        return Err(Error::BadRange("pointer needs r >= 1".into()));
    }
    let n = h.num_qubits();
    if n + r > MAX_DENSE_QUBITS {
        return Err(Error::TooLarge {
            what: "system + pointer qubits",
            value: n + r,
            limit: MAX_DENSE_QUBITS,
        });
    }
    let id_weight = 0.5 * (1.0 - 0.5f64.powi(r as i32));
    let mut terms = Vec::with_capacity((1 + r) * h.num_terms());
    for (c, p) in h.terms() {
        terms.push((c * id_weight, p.tensor(&PauliString::identity(r)?)?));
        for j in 1..=r {
            let mut ptr = vec![Pauli::I; r];
            ptr[j - 1] = Pauli::Z;
            let weight = -0.5f64.powi(j as i32 + 1);
            terms.push((c * weight, p.tensor(&PauliString::new(ptr)?)?));
        }
    }
    LcpHamiltonian::new(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{kron, operator_norm};

    fn string(s: &str) -> PauliString {
        PauliString::new(s.chars().map(|c| Pauli::from_char(c).unwrap()).collect()).unwrap()
    }

    #[test]
    fn parse_examples() {
        let h = parse_lcp("0.5 Z\n0.25 X").unwrap();
        assert_eq!(h.num_terms(), 2);
        assert_eq!(h.num_qubits(), 1);

        let h = parse_lcp("1.0 ZZ\n1.0 ZZ").unwrap();
        assert_eq!(h.num_terms(), 1);
        assert_eq!(h.terms()[0].0, 2.0);

        assert!(matches!(parse_lcp("0.3 XQ"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = "# header\n1.0 XX\n\n2.0 XYZ\n";
        assert!(matches!(parse_lcp(text), Err(Error::Parse { line: 4, .. })));
        assert!(matches!(parse_lcp("1+2i X"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_lcp("# nothing\n"), Err(Error::EmptyHamiltonian)));
    }

    #[test]
    fn canonical_order_is_lexicographic() {
        let h = parse_lcp("1 ZI\n1 IX\n1 XY").unwrap();
        let names: Vec<String> = h.terms().iter().map(|(_, p)| p.to_string()).collect();
        assert_eq!(names, ["IX", "XY", "ZI"]);
    }

    #[test]
    fn matrix_examples() {
        let z = lcp_to_matrix(&parse_lcp("1.0 Z").unwrap()).unwrap();
        assert_eq!(z, ComplexMatrix::pauli_z());

        let h = lcp_to_matrix(&parse_lcp("0.5 Z\n0.25 X").unwrap()).unwrap();
        let want = ComplexMatrix::from_real(2, 2, &[0.5, 0.25, 0.25, -0.5]).unwrap();
        assert_eq!(h, want);

        let zz = lcp_to_matrix(&parse_lcp("1.0 ZZ").unwrap()).unwrap();
        assert_eq!(zz.diagonal_re(), vec![1.0, -1.0, -1.0, 1.0]);
    }

    #[test]
    fn string_matrices_match_kron_of_letters() {
        let p = string("XYZ");
        let want = kron(
            &kron(&ComplexMatrix::pauli_x(), &ComplexMatrix::pauli_y()),
            &ComplexMatrix::pauli_z(),
        );
        assert!(operator_norm(&p.to_matrix().unwrap().sub(&want)) < 1e-15);
    }

    #[test]
    fn too_large_rejected() {
        let h = LcpHamiltonian::new(vec![(1.0, PauliString::identity(13).unwrap())]).unwrap();
        assert!(matches!(lcp_to_matrix(&h), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn momentum_examples() {
        assert_eq!(momentum_operator(1).unwrap(), vec![0.0, 0.5]);
        assert_eq!(momentum_operator(2).unwrap(), vec![0.0, 0.25, 0.5, 0.75]);
        assert_eq!(momentum_operator(3).unwrap()[5], 0.625);
        assert!(momentum_operator(0).is_err());
        assert!(momentum_operator(11).is_err());
    }

    #[test]
    fn momentum_from_z_sum() {
        // Σ_j 2^{-j} (1 - σ_z^{(j)}) / 2 evaluated on basis states
        for r in 1..=4 {
            let p = momentum_operator(r).unwrap();
            for (z, &pz) in p.iter().enumerate() {
                let mut v = 0.0;
                for j in 1..=r {
                    let bit = (z >> (r - j)) & 1;
                    let sz = if bit == 0 { 1.0 } else { -1.0 };
                    v += 0.5f64.powi(j as i32) * (1.0 - sz) / 2.0;
                }
                assert!((v - pz).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn couple_single_z() {
        let c = couple_pointer(&parse_lcp("1.0 Z").unwrap(), 1).unwrap();
        assert_eq!(c.num_terms(), 2);
        let t: Vec<(f64, String)> = c.terms().iter().map(|(a, p)| (*a, p.to_string())).collect();
        assert_eq!(t, vec![(0.25, "ZI".to_string()), (-0.25, "ZZ".to_string())]);
    }

    #[test]
    fn couple_term_count_and_identity_system() {
        let c = couple_pointer(&parse_lcp("0.5 Z\n0.25 X").unwrap(), 3).unwrap();
        assert_eq!(c.num_terms(), 8);

        let c = couple_pointer(&parse_lcp("1.0 I").unwrap(), 2).unwrap();
        let p = ComplexMatrix::from_real_diagonal(&momentum_operator(2).unwrap());
        let want = kron(&ComplexMatrix::identity(2), &p);
        assert!(operator_norm(&lcp_to_matrix(&c).unwrap().sub(&want)) < 1e-12);
    }

    #[test]
    fn apply_matches_dense() {
        let h = parse_lcp("0.3 XY\n-0.7 ZZ\n0.2 YI").unwrap();
        let m = lcp_to_matrix(&h).unwrap();
        let v: Vec<Complex64> = (0..4).map(|k| Complex64::new(k as f64, 1.0 - k as f64)).collect();
        let a = h.apply(&v);
        let b = m.mul_vec(&v);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-14);
        }
    }
}
