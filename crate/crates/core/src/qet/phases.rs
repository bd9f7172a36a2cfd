//! Phase factors for the two-signal QET template.
//!
//! Scalar model: the signal `CW` (controlled on the rotation qubit being
//! `|0⟩`) acts as `S = diag(z, 1)` on an eigenvector of `W` with eigenvalue
//! `z`, and `CW†` as `S⁻¹`. The template
//!
//! ```text
//! U(z) = R_0 · Π_{j=1}^{m} [ S · R_{2j−1} · S⁻¹ · R_{2j} ]
//! ```
//!
//! read out as `⟨+|U(z)|+⟩` reaches any Laurent polynomial `P` of degree
//! `m` with `|P| ≤ 1` on the circle once every `R_j` is a general `U(2)`
//! element. Because `S⁻¹ = z⁻¹·X·S·X`, conjugating by Hadamards turns the
//! problem into a one-sided sequence `B_0 S B_1 S … S B_{2m}` whose top-left
//! entry is `F(z) = z^m P(z)`. That sequence is found by completing `F` with
//! `G`, `|F|² + |G|² = 1`, and stripping one layer per degree.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::LaurentPolynomial;
use crate::error::{Error, Result};

type C = Complex64;
type Mat2 = [[C; 2]; 2];

const ZERO: C = C { re: 0.0, im: 0.0 };
const ONE: C = C { re: 1.0, im: 0.0 };

/// Rotation parametrisation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    /// `e^{iγ} [[e^{i(λ+φ)} cos θ, e^{iφ} sin θ], [e^{iλ} sin θ, −cos θ]]`
    GeneralU2,
}

/// One signal-processing rotation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation {
    pub gamma: f64,
    pub theta: f64,
    pub phi: f64,
    pub lambda: f64,
}

impl Rotation {
    pub const IDENTITY: Rotation = Rotation {
        gamma: PI,
        theta: 0.0,
        phi: 0.0,
        lambda: PI,
    };

    pub fn matrix(&self) -> Mat2 {
        let (s, c) = self.theta.sin_cos();
        let g = C::from_polar(1.0, self.gamma);
        [
            [
                g * C::from_polar(c, self.lambda + self.phi),
                g * C::from_polar(s, self.phi),
            ],
            [g * C::from_polar(s, self.lambda), -g * c],
        ]
    }

    /// Angles reproducing a unitary `m`.
    pub fn from_matrix(m: &Mat2) -> Rotation {
        let c = m[1][1].norm().min(1.0);
        let s = m[1][0].norm().max(m[0][1].norm()).min(1.0);
        let theta = s.atan2(c);
        let gamma = if c > 0.0 { (-m[1][1]).arg() } else { 0.0 };
        let (phi, lambda) = if s > 1e-300 {
            (m[0][1].arg() - gamma, m[1][0].arg() - gamma)
        } else {
            (0.0, m[0][0].arg() - gamma)
        };
        Rotation {
            gamma,
            theta,
            phi,
            lambda,
        }
    }

    pub fn angles(&self) -> [f64; 4] {
        [self.gamma, self.theta, self.phi, self.lambda]
    }
}

/// The `2m + 1` rotations of a degree-`m` QET sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSequence {
    pub rotations: Vec<Rotation>,
    pub convention: Convention,
    /// Max `|⟨+|U|+⟩ − P|` on the verification grid.
    pub residual: f64,
}

impl PhaseSequence {
    pub fn new(rotations: Vec<Rotation>) -> Result<Self> {
        if rotations.len() % 2 == 0 {
            return Err(Error::BadPhaseCount(rotations.len()));
        }
        Ok(Self {
            rotations,
            convention: Convention::GeneralU2,
            residual: f64::NAN,
        })
    }

    pub fn len(&self) -> usize {
        self.rotations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rotations.is_empty()
    }

    /// Laurent degree `m`.
    pub fn degree(&self) -> usize {
        self.rotations.len() / 2
    }

    /// All angles flattened, four per rotation.
    pub fn phases(&self) -> Vec<f64> {
        self.rotations.iter().flat_map(|r| r.angles()).collect()
    }
}

fn mul(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

fn adjoint(a: &Mat2) -> Mat2 {
    [
        [a[0][0].conj(), a[1][0].conj()],
        [a[0][1].conj(), a[1][1].conj()],
    ]
}

fn hadamard() -> Mat2 {
    let h = C::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

fn pauli_x() -> Mat2 {
    [[ZERO, ONE], [ONE, ZERO]]
}

/// `⟨+|U(e^{iθ})|+⟩` for the scalar model.
pub fn qsp_response(seq: &PhaseSequence, theta: f64) -> C {
    response_with(&seq.rotations.iter().map(|r| r.matrix()).collect::<Vec<_>>(), theta)
}

fn response_with(mats: &[Mat2], theta: f64) -> C {
    let z = C::from_polar(1.0, theta);
    let zi = z.conj();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut v = [C::new(h, 0.0), C::new(h, 0.0)];
    let n = mats.len();
    for idx in (0..n).rev() {
        let r = &mats[idx];
        v = [r[0][0] * v[0] + r[0][1] * v[1], r[1][0] * v[0] + r[1][1] * v[1]];
        if idx == 0 {
            break;
        }
        // R_idx is preceded (to its left) by S for odd idx, S⁻¹ for even idx
        if idx % 2 == 1 {
            v[0] *= z;
        } else {
            v[0] *= zi;
        }
    }
    (v[0] + v[1]) * h
}

fn grid_size(degree: usize) -> usize {
    256usize.max(2 * (2 * degree + 1))
}

fn residual_on_grid(mats: &[Mat2], p: &LaurentPolynomial) -> f64 {
    let n = grid_size(p.degree());
    let target = p.eval_grid(n);
    target
        .iter()
        .enumerate()
        .map(|(j, t)| (response_with(mats, 2.0 * PI * j as f64 / n as f64) - t).norm())
        .fold(0.0, f64::max)
}

fn fft(buf: &mut [C], inverse: bool) {
    let mut planner = FftPlanner::new();
    let plan = if inverse {
        planner.plan_fft_inverse(buf.len())
    } else {
        planner.plan_fft_forward(buf.len())
    };
    plan.process(buf);
}

/// Complement `G` of degree `≤ n` with `|F|² + |G|² = 1` on the circle.
fn complement(f: &[C]) -> Result<Vec<C>> {
    let n = f.len() - 1;
    let grid = (16 * (n + 1)).max(1024).next_power_of_two();
    let mut vals = vec![ZERO; grid];
    vals[..f.len()].copy_from_slice(f);
    fft(&mut vals, true);
    let gap: Vec<f64> = vals.iter().map(|z| 1.0 - z.norm_sqr()).collect();
    let max_gap = gap.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min_gap = gap.iter().cloned().fold(f64::INFINITY, f64::min);

    if max_gap < 1e-13 {
        // |F| = 1 identically
        return Ok(vec![ZERO; n + 1]);
    }
    if min_gap < -1e-9 {
        return Err(Error::ConditionViolated(format!(
            "|P| reaches {} on the circle",
            (1.0 - min_gap).sqrt()
        )));
    }
    if min_gap < 1e-10 {
        // touches the unit circle; the log-based method cannot resolve the zeros
        if n <= 48 {
            return complement_by_roots(f);
        }
        return Err(Error::ConditionViolated(
            "|P| = 1 at isolated points; scale the polynomial below 1".into(),
        ));
    }

    // outer function: log|G| = ½ log(1 − |F|²) extended analytically
    let mut u: Vec<C> = gap.iter().map(|g| C::new(0.5 * g.ln(), 0.0)).collect();
    fft(&mut u, false);
    let scale = 1.0 / grid as f64;
    let half = grid / 2;
    for (k, z) in u.iter_mut().enumerate() {
        *z *= scale;
        if k == 0 || k == half {
            continue;
        }
        if k < half {
            *z *= 2.0;
        } else {
            *z = ZERO;
        }
    }
    u[half] = ZERO;
    fft(&mut u, true);
    let mut g: Vec<C> = u.iter().map(|z| z.exp()).collect();
    fft(&mut g, false);
    let g: Vec<C> = g[..=n].iter().map(|z| z * scale).collect();
    Ok(g)
}

/// Root-based completion for low degree when `|F|` touches 1.
fn complement_by_roots(f: &[C]) -> Result<Vec<C>> {
    let n = f.len() - 1;
    // z^n (1 − F(z) \bar F(1/z)) as an ordinary polynomial of degree 2n
    let fr: Vec<C> = (0..=n).map(|k| f[n - k].conj()).collect();
    let mut s = vec![ZERO; 2 * n + 1];
    s[n] = ONE;
    for (i, a) in f.iter().enumerate() {
        for (j, b) in fr.iter().enumerate() {
            s[i + j] -= a * b;
        }
    }
    let tiny = 1e-13;
    let lo = s.iter().position(|z| z.norm() > tiny);
    let hi = s.iter().rposition(|z| z.norm() > tiny);
    let (Some(lo), Some(hi)) = (lo, hi) else {
        return Ok(vec![ZERO; n + 1]);
    };
    let core = &s[lo..=hi];
    let deg = core.len() - 1;
    let mut roots = if deg == 0 { Vec::new() } else { poly_roots(core) };
    roots.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
    roots.truncate(deg / 2);

    let mut g = vec![ONE];
    for r in &roots {
        let mut next = vec![ZERO; g.len() + 1];
        for (k, c) in g.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= c * r;
        }
        g = next;
    }
    g.resize(n + 1, ZERO);
    // fix the modulus at the point where the gap is largest
    let probe = 512;
    let mut best = (0.0, 0.0);
    for j in 0..probe {
        let th = 2.0 * PI * j as f64 / probe as f64;
        let gap = 1.0 - horner(f, th).norm_sqr();
        if gap > best.0 {
            best = (gap, th);
        }
    }
    let (gap, th) = best;
    let k = gap.max(0.0).sqrt() / horner(&g, th).norm();
    Ok(g.into_iter().map(|c| c * k).collect())
}

fn horner(p: &[C], theta: f64) -> C {
    let z = C::from_polar(1.0, theta);
    p.iter().rev().fold(ZERO, |acc, c| acc * z + c)
}

/// Roots of `Σ c_k z^k` via the companion matrix.
fn poly_roots(c: &[C]) -> Vec<C> {
    let deg = c.len() - 1;
    let lead = c[deg];
    let mut m = nalgebra::DMatrix::<C>::zeros(deg, deg);
    for i in 1..deg {
        m[(i, i - 1)] = ONE;
    }
    for i in 0..deg {
        m[(i, deg - 1)] = -c[i] / lead;
    }
    nalgebra::Schur::new(m)
        .eigenvalues()
        .map(|v| v.iter().copied().collect())
        .unwrap_or_default()
}

/// Peel `(F, G) = B_0 S B_1 S … S B_n |0⟩`.
fn strip_layers(mut f: Vec<C>, mut g: Vec<C>) -> Vec<Mat2> {
    let n = f.len() - 1;
    let mut out = Vec::with_capacity(n + 1);
    for k in (1..=n).rev() {
        let low = f[0].norm_sqr() + g[0].norm_sqr();
        let high = f[k].norm_sqr() + g[k].norm_sqr();
        // rows of B†: row 0 kills the constant term of the first component,
        // row 1 kills the top term of the second
        let bd: Mat2 = if low.max(high) < 1e-28 {
            [[ONE, ZERO], [ZERO, ONE]]
        } else if low >= high {
            let nrm = low.sqrt();
            [
                [g[0] / nrm, -f[0] / nrm],
                [f[0].conj() / nrm, g[0].conj() / nrm],
            ]
        } else {
            let nrm = high.sqrt();
            [
                [f[k].conj() / nrm, g[k].conj() / nrm],
                [g[k] / nrm, -f[k] / nrm],
            ]
        };
        let mut nf = vec![ZERO; k];
        let mut ng = vec![ZERO; k];
        for j in 0..k {
            nf[j] = bd[0][0] * f[j + 1] + bd[0][1] * g[j + 1];
            ng[j] = bd[1][0] * f[j] + bd[1][1] * g[j];
        }
        out.push(adjoint(&bd));
        f = nf;
        g = ng;
    }
    let a = f[0];
    let b = g[0];
    let nrm = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let (a, b) = if nrm > 0.0 { (a / nrm, b / nrm) } else { (ONE, ZERO) };
    out.push([[a, -b.conj()], [b, a.conj()]]);
    out
}

/// Map the one-sided sequence `B_0 … B_{2m}` back to the two-signal template.
fn to_template(b: &[Mat2]) -> Vec<Mat2> {
    let n = b.len() - 1;
    let h = hadamard();
    let x = pauli_x();
    if n == 0 {
        return vec![mul(&mul(&h, &b[0]), &h)];
    }
    b.iter()
        .enumerate()
        .map(|(j, bj)| {
            if j == 0 {
                mul(&h, bj)
            } else if j == n {
                mul(&mul(&x, bj), &h)
            } else if j % 2 == 1 {
                mul(bj, &x)
            } else {
                mul(&x, bj)
            }
        })
        .collect()
}

fn unpack(rots: &[Rotation]) -> Vec<Mat2> {
    rots.iter().map(|r| r.matrix()).collect()
}

/// Damped Gauss–Newton on the grid residual; only worthwhile for short
/// sequences.
fn polish(rots: &mut [Rotation], p: &LaurentPolynomial, tol: f64) -> f64 {
    let n = grid_size(p.degree()).min(256);
    let target = p.eval_grid(n);
    let thetas: Vec<f64> = (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect();
    let resid = |rots: &[Rotation]| -> Vec<f64> {
        let mats = unpack(rots);
        let mut out = Vec::with_capacity(2 * n);
        for (t, want) in thetas.iter().zip(&target) {
            let d = response_with(&mats, *t) - want;
            out.push(d.re);
            out.push(d.im);
        }
        out
    };
    let np = 4 * rots.len();
    let mut r = resid(rots);
    let mut cost: f64 = r.iter().map(|x| x * x).sum();
    let mut mu = 1e-6;
    for _ in 0..30 {
        if r.iter().fold(0.0f64, |m, x| m.max(x.abs())) < tol * 0.1 {
            break;
        }
        let h = 1e-7;
        let mut jac = nalgebra::DMatrix::<f64>::zeros(r.len(), np);
        for p_idx in 0..np {
            let mut trial = rots.to_vec();
            let rot = &mut trial[p_idx / 4];
            match p_idx % 4 {
                0 => rot.gamma += h,
                1 => rot.theta += h,
                2 => rot.phi += h,
                _ => rot.lambda += h,
            }
            let rp = resid(&trial);
            for (i, (a, b)) in rp.iter().zip(&r).enumerate() {
                jac[(i, p_idx)] = (a - b) / h;
            }
        }
        let rv = nalgebra::DVector::from_vec(r.clone());
        let jt = jac.transpose();
        let mut improved = false;
        for _ in 0..8 {
            let mut a = &jt * &jac;
            for i in 0..np {
                a[(i, i)] += mu * (1.0 + a[(i, i)]);
            }
            let rhs = -(&jt * &rv);
            let Some(step) = a.lu().solve(&rhs) else {
                mu *= 10.0;
                continue;
            };
            let mut trial = rots.to_vec();
            for (p_idx, dx) in step.iter().enumerate() {
                let rot = &mut trial[p_idx / 4];
                match p_idx % 4 {
                    0 => rot.gamma += dx,
                    1 => rot.theta += dx,
                    2 => rot.phi += dx,
                    _ => rot.lambda += dx,
                }
            }
            let rt = resid(&trial);
            let ct: f64 = rt.iter().map(|x| x * x).sum();
            if ct < cost {
                rots.copy_from_slice(&trial);
                r = rt;
                cost = ct;
                mu = (mu * 0.3).max(1e-12);
                improved = true;
                break;
            }
            mu *= 10.0;
        }
        if !improved {
            break;
        }
    }
    residual_on_grid(&unpack(rots), p)
}

/// Rotations with `max_θ |⟨+|U(e^{iθ})|+⟩ − P(e^{iθ})| ≤ tol`.
pub fn compute_phase_factors(p: &LaurentPolynomial, tol: f64) -> Result<PhaseSequence> {
    if !(tol >= 1e-12) {
        return Err(Error::BadRange(format!("tol = {tol} must be >= 1e-12")));
    }
    p.check_conditions()?;
    let m = p.degree();
    // F(z) = z^m P(z), coefficients for powers 0..=2m
    let f: Vec<C> = p.coefficients().to_vec();
    let g = complement(&f)?;
    let b = strip_layers(f, g);
    let mats = to_template(&b);
    let mut rots: Vec<Rotation> = mats.iter().map(Rotation::from_matrix).collect();
    debug_assert_eq!(rots.len(), 2 * m + 1);

    let mut residual = residual_on_grid(&unpack(&rots), p);
    if residual > tol && rots.len() <= 33 {
        residual = polish(&mut rots, p, tol);
    }
    if !(residual <= tol) {
        return Err(Error::NotConverged(residual));
    }
    let mut seq = PhaseSequence::new(rots)?;
    seq.residual = residual;
    Ok(seq)
}
