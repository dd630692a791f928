//! Bessel functions of the first kind and integer order.
//!
//! All orders `J_0(x) .. J_n(x)` come out of one downward (Miller)
//! recurrence started well above both n and x, normalized with
//! `J_0 + 2 sum_k J_2k = 1`. Downward recurrence is stable for J in both the
//! oscillatory (n < x) and the evanescent (n > x) regime.

const RESCALE_ABOVE: f64 = 1e250;
const RESCALE_BY: f64 = 1e-250;

/// `J_order(x)` for any integer order and real argument.
pub fn bessel_j(order: i32, x: f64) -> f64 {
    let n = order.unsigned_abs() as usize;
    let mut buf = vec![0.0; n + 1];
    bessel_j_fill(x.abs(), &mut buf);
    let mut v = buf[n];
    // J_{-n}(x) = (-1)^n J_n(x) and J_n(-x) = (-1)^n J_n(x)
    if n % 2 == 1 && ((order < 0) != (x < 0.0)) {
        v = -v;
    }
    v
}

/// `[J_0(x), .., J_max_order(x)]`.
pub fn bessel_j_sequence(max_order: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; max_order + 1];
    bessel_j_fill(x.abs(), &mut out);
    if x < 0.0 {
        out.iter_mut().skip(1).step_by(2).for_each(|v| *v = -*v);
    }
    out
}

/// Fills `out[k] = J_k(x)` for `x >= 0`.
pub fn bessel_j_fill(x: f64, out: &mut [f64]) {
    debug_assert!(x >= 0.0);
    out.fill(0.0);
    if out.is_empty() {
        return;
    }
    if x == 0.0 {
        out[0] = 1.0;
        return;
    }
    let top = out.len() - 1;
    let base = (top as f64).max(x.ceil());
    let mut start = (base + 20.0 + (160.0 * base).sqrt()) as usize;
    start += start % 2;

    let two_over_x = 2.0 / x;
    let mut above = 0.0; // J_{k+1}
    let mut here = 1e-300; // J_k, arbitrary scale
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        let below = k as f64 * two_over_x * here - above;
        above = here;
        here = below; // now holds J_{k-1}
        let idx = k - 1;
        if idx <= top {
            out[idx] = here;
        }
        if idx % 2 == 0 && idx > 0 {
            norm += 2.0 * here;
        }
        if here.abs() > RESCALE_ABOVE {
            here *= RESCALE_BY;
            above *= RESCALE_BY;
            norm *= RESCALE_BY;
            for v in out.iter_mut().skip(idx) {
                *v *= RESCALE_BY;
            }
        }
    }
    norm += here; // J_0
    let inv = 1.0 / norm;
    out.iter_mut().for_each(|v| *v *= inv);
}
