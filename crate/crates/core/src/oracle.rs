//! Independent maximum-entropy solver for three binary variables under
//! pairwise marginal constraints, used to cross-check the IPF path.
//!
//! The pairwise marginal map on `{0,1}³` has a one-dimensional kernel spanned
//! by the parity pattern `v(x) = (−1)^{x₀+x₁+x₂}`, so every table with the
//! same pairwise marginals as `p` is `p + t·v` for `t` in an interval fixed
//! by nonnegativity. Entropy is strictly concave along that segment and its
//! derivative `−Σ v ln q` is monotone, so the maximiser is found by bisection.

use crate::distribution::JointDistribution;
use crate::error::{Error, Result};

fn parity(x: usize) -> f64 {
    if x.count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Maximum-entropy distribution over `{0,1}³` with the pairwise marginals of
/// `p`.
pub fn pairwise_max_entropy_3bit(p: &JointDistribution<f64>) -> Result<JointDistribution<f64>> {
    if p.sizes() != [2, 2, 2] {
        return Err(Error::invalid("the parity-line oracle needs three binary variables"));
    }
    let base = p.probs();
    let lo = (0..8).filter(|&x| parity(x) > 0.0).map(|x| -base[x]).fold(f64::MIN, f64::max);
    let hi = (0..8).filter(|&x| parity(x) < 0.0).map(|x| base[x]).fold(f64::MAX, f64::min);
    let at = |t: f64| -> Vec<f64> { (0..8).map(|x| (base[x] + t * parity(x)).max(0.0)).collect() };
    // d/dt of the natural-log entropy, +∞ at lo and −∞ at hi
    let slope = |t: f64| -> f64 { -at(t).iter().enumerate().map(|(x, q)| parity(x) * q.ln()).sum::<f64>() };

    let (mut a, mut b) = (lo, hi);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if slope(mid) > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    JointDistribution::from_weights(vec![2, 2, 2], at(0.5 * (a + b)))
}
