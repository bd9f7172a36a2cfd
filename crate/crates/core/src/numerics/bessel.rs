//! Bessel functions of the first kind for integer order.
//!
//! Miller's algorithm: run the three-term recurrence downward from an order
//! well above both `n` and `t`, then fix the scale with
//! `J_0 + 2·Σ J_{2k} = 1`. Downward recurrence is the stable direction for
//! the minimal solution, so this works uniformly for `t` below and above the
//! order.

const RESCALE_AT: f64 = 1e200;

fn start_order(nmax: usize, t: f64) -> usize {
    let base = (nmax as f64).max(t.ceil());
    let m = base + 20.0 + (50.0 * base).sqrt();
    let m = m.ceil() as usize;
    m + (m & 1)
}

/// `J_0(t), …, J_nmax(t)`.
pub fn bessel_j_sequence(nmax: usize, t: f64) -> Vec<f64> {
    if t == 0.0 {
        let mut out = vec![0.0; nmax + 1];
        out[0] = 1.0;
        return out;
    }
    if t < 0.0 {
        // J_k(−t) = (−1)^k J_k(t)
        let mut out = bessel_j_sequence(nmax, -t);
        for (k, v) in out.iter_mut().enumerate() {
            if k % 2 == 1 {
                *v = -*v;
            }
        }
        return out;
    }

    let m = start_order(nmax, t);
    let mut out = vec![0.0; nmax + 1];
    let mut next = 0.0; // J_{k+1}
    let mut cur = 1e-30; // J_k, k = m
    let mut norm = 0.0;
    if m % 2 == 0 {
        norm += 2.0 * cur;
    }
    if m <= nmax {
        out[m] = cur;
    }
    for k in (1..=m).rev() {
        let prev = (2.0 * k as f64 / t) * cur - next;
        next = cur;
        cur = prev;
        let order = k - 1;
        if order <= nmax {
            out[order] = cur;
        }
        if order == 0 {
            norm += cur;
        } else if order % 2 == 0 {
            norm += 2.0 * cur;
        }
        if cur.abs() > RESCALE_AT {
            let s = 1.0 / RESCALE_AT;
            cur *= s;
            next *= s;
            norm *= s;
            for v in out.iter_mut().skip(order) {
                *v *= s;
            }
        }
    }
    for v in out.iter_mut() {
        *v /= norm;
    }
    out
}

/// `J_order(t)`.
pub fn bessel_j(order: usize, t: f64) -> f64 {
    bessel_j_sequence(order, t)[order]
}
