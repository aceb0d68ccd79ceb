//! Generalized Laguerre polynomials.

/// Value of the generalized Laguerre polynomial of degree `k` with parameter
/// `alpha` at `x`, by the stable three-term recurrence.
pub fn laguerre(k: usize, alpha: f64, x: f64) -> f64 {
    match k {
        0 => 1.0,
        1 => 1.0 + alpha - x,
        _ => {
            let mut prev = 1.0;
            let mut cur = 1.0 + alpha - x;
            for j in 1..k {
                let jf = j as f64;
                let next = ((2.0 * jf + 1.0 + alpha - x) * cur - (jf + alpha) * prev) / (jf + 1.0);
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// Values of all Laguerre polynomials of degree `0..=k_max` at `x`.
pub fn laguerre_all(k_max: usize, alpha: f64, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(k_max + 1);
    out.push(1.0);
    if k_max == 0 {
        return out;
    }
    out.push(1.0 + alpha - x);
    for j in 1..k_max {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + alpha - x) * out[j] - (jf + alpha) * out[j - 1]) / (jf + 1.0);
        out.push(next);
    }
    out
}
