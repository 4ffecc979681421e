//! Information projection onto the order-k interaction family by iterative
//! proportional fitting.

use itertools::Itertools;

use super::facial::projection_support;
use super::info::marginal_index_map;
use crate::distribution::JointDistribution;
use crate::error::{Error, Result};
use crate::num::Real;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 10_000;

/// Once the tolerance is met, cycling continues towards `tol * REFINE_FACTOR`
/// so that quantities derived from the projection (divergences, sum rule)
/// carry errors well below `tol`.
const REFINE_FACTOR: f64 = 1e-3;
/// Refinement stops when the residual has not improved for this many cycles.
const STALL_CYCLES: usize = 20;

/// Maximum-entropy distribution sharing the order-k marginals of the input.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionResult<T> {
    pub distribution: JointDistribution<T>,
    pub order: usize,
    /// Full cycles over all subsets.
    pub iterations: usize,
    /// Largest L1 mismatch between any size-k marginal of the result and of
    /// the input.
    pub residual: T,
}

/// One size-k subset with its cell map and target marginal.
struct Constraint<T> {
    map: Vec<usize>,
    target: Vec<T>,
}

impl<T: Real> Constraint<T> {
    fn new(p: &JointDistribution<T>, subset: &[usize]) -> Self {
        let map = marginal_index_map(p.sizes(), subset);
        let width = subset.iter().map(|&v| p.sizes()[v]).product();
        let mut target = vec![T::zero(); width];
        map.iter().zip(p.probs()).for_each(|(&m, &x)| target[m] += x);
        Self { map, target }
    }

    fn marginal(&self, q: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.target.len()];
        self.map.iter().zip(q).for_each(|(&m, &x)| out[m] += x);
        out
    }

    fn mismatch(&self, q: &[T]) -> T {
        self.marginal(q).iter().zip(&self.target).map(|(a, b)| (*a - *b).abs()).sum()
    }

    fn rescale(&self, q: &mut [T]) {
        let current = self.marginal(q);
        let ratio: Vec<T> = current
            .iter()
            .zip(&self.target)
            .map(|(&c, &t)| if c > T::zero() { t / c } else { T::zero() })
            .collect();
        q.iter_mut().zip(&self.map).for_each(|(x, &m)| *x *= ratio[m]);
    }
}

/// Projects `p` onto the closure of the family of distributions whose
/// log-probabilities are sums of terms on at most `k` variables.
///
/// Subsets are visited in lexicographic order and the iterate is renormalised
/// after every full cycle. The start point is the uniform distribution on the
/// support the projection must have (the plain uniform distribution whenever
/// `p` has no zeros). Convergence means the marginal mismatch drops to
/// `tol` within `max_iter` cycles; the returned residual is usually far
/// smaller because of the refinement phase.
pub fn ipf_project<T: Real>(
    p: &JointDistribution<T>,
    k: usize,
    tol: T,
    max_iter: usize,
) -> Result<ProjectionResult<T>> {
    let n = p.n_vars();
    if k == 0 || k > n {
        return Err(Error::invalid(format!("interaction order {k} outside 1..={n}")));
    }
    if !(tol > T::zero()) {
        return Err(Error::invalid(format!("tolerance {tol} must be positive")));
    }
    if k == n {
        return Ok(ProjectionResult { distribution: p.clone(), order: k, iterations: 0, residual: T::zero() });
    }

    let constraints: Vec<Constraint<T>> =
        (0..n).combinations(k).map(|subset| Constraint::new(p, &subset)).collect();
    let support: Vec<bool> = p.probs().iter().map(|&x| x > T::zero()).collect();
    let start = projection_support(p.sizes(), k, &support);
    let mass = T::one() / T::lit(start.iter().filter(|&&s| s).count() as f64);
    let mut q: Vec<T> = start.iter().map(|&s| if s { mass } else { T::zero() }).collect();

    let polish_target = tol * T::lit(REFINE_FACTOR);
    let mut residual = T::infinity();
    let mut converged_at = None;
    let mut best = T::infinity();
    let mut since_best = 0;
    for cycle in 1..=max_iter {
        for c in &constraints {
            c.rescale(&mut q);
        }
        let total: T = q.iter().copied().sum();
        q.iter_mut().for_each(|x| *x /= total);
        residual = constraints.iter().map(|c| c.mismatch(&q)).fold(T::zero(), T::max);
        if residual < best {
            best = residual;
            since_best = 0;
        } else {
            since_best += 1;
        }
        if converged_at.is_none() && residual <= tol {
            converged_at = Some(cycle);
        }
        if converged_at.is_some() && (residual <= polish_target || since_best >= STALL_CYCLES || cycle == max_iter) {
            return Ok(ProjectionResult {
                distribution: JointDistribution::from_parts_normalized(p.sizes().to_vec(), q),
                order: k,
                iterations: cycle,
                residual,
            });
        }
    }
    Err(Error::ConvergenceFailure { order: k, iterations: max_iter, residual: residual.to_f64_lossy() })
}

/// Product of the single-variable marginals, the closed form of the order-1
/// projection.
pub fn product_of_marginals<T: Real>(p: &JointDistribution<T>) -> JointDistribution<T> {
    let singles: Vec<Vec<T>> = (0..p.n_vars())
        .map(|v| Constraint::new(p, &[v]).target)
        .collect();
    let probs = (0..p.len())
        .map(|i| p.decode(i).iter().zip(&singles).map(|(&x, m)| m[x]).fold(T::one(), |a, b| a * b))
        .collect();
    JointDistribution::from_parts_normalized(p.sizes().to_vec(), probs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hierarchy::info::{kl_divergence, marginalize};

    fn tv(a: &JointDistribution<f64>, b: &JointDistribution<f64>) -> f64 {
        a.total_variation(b).unwrap()
    }

    #[test]
    fn product_distribution_is_fixed_by_order_one() {
        let m = [[0.3, 0.7], [0.6, 0.4], [0.1, 0.9]];
        let probs = (0..8)
            .map(|i: usize| (0..3).map(|v| m[v][(i >> (2 - v)) & 1]).product())
            .collect();
        let p = JointDistribution::binary(3, probs).unwrap();
        let r = ipf_project(&p, 1, 1e-12, 100).unwrap();
        assert!(r.residual < 1e-15);
        assert!(tv(&r.distribution, &p) < 1e-15);
    }

    #[test]
    fn top_order_returns_input() {
        let p = JointDistribution::binary(2, vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let r = ipf_project(&p, 2, 1e-10, 10).unwrap();
        assert_eq!(r.distribution, p);
        assert_eq!(r.iterations, 0);
    }

    #[test]
    fn invalid_arguments() {
        let p = JointDistribution::<f64>::uniform(vec![2, 2, 2]).unwrap();
        assert!(matches!(ipf_project(&p, 0, 1e-10, 10), Err(Error::InvalidArgument(_))));
        assert!(matches!(ipf_project(&p, 4, 1e-10, 10), Err(Error::InvalidArgument(_))));
        assert!(matches!(ipf_project(&p, 2, 0.0, 10), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn convergence_failure_carries_residual() {
        let p = JointDistribution::binary(3, vec![0.3, 0.05, 0.1, 0.05, 0.02, 0.08, 0.1, 0.3]).unwrap();
        match ipf_project(&p, 2, 1e-15, 1) {
            Err(Error::ConvergenceFailure { order: 2, iterations: 1, residual }) => assert!(residual > 0.0),
            other => panic!("expected convergence failure, got {other:?}"),
        }
    }

    #[test]
    fn order_one_matches_product_of_marginals() {
        let p = JointDistribution::binary(3, vec![0.3, 0.05, 0.1, 0.05, 0.02, 0.08, 0.1, 0.3]).unwrap();
        let r = ipf_project(&p, 1, 1e-12, 100).unwrap();
        assert!(tv(&r.distribution, &product_of_marginals(&p)) < 1e-12);
    }

    #[test]
    fn pure_w_is_its_own_pairwise_projection() {
        let t = 1.0 / 3.0;
        let p = JointDistribution::binary(3, vec![0.0, t, t, 0.0, t, 0.0, 0.0, 0.0]).unwrap();
        let r = ipf_project(&p, 2, 1e-10, DEFAULT_MAX_ITER).unwrap();
        assert!(r.iterations <= 2, "{} cycles", r.iterations);
        let d: f64 = kl_divergence(&p, &r.distribution).unwrap().value();
        assert!(d.abs() < 1e-12);
        for pair in [[0, 1], [0, 2], [1, 2]] {
            let a = marginalize(&p, &pair).unwrap();
            let b = marginalize(&r.distribution, &pair).unwrap();
            assert!(tv(&a, &b) < 1e-12);
        }
    }

    #[test]
    fn general_alphabets() {
        let w: Vec<f64> = (1..=12).map(|i| (i * i % 7 + 1) as f64).collect();
        let p = JointDistribution::from_weights(vec![2, 3, 2], w).unwrap();
        let r = ipf_project(&p, 2, 1e-11, DEFAULT_MAX_ITER).unwrap();
        for pair in [[0, 1], [0, 2], [1, 2]] {
            let a = marginalize(&p, &pair).unwrap();
            let b = marginalize(&r.distribution, &pair).unwrap();
            assert!(2.0 * tv(&a, &b) <= 1e-11);
        }
    }
}
