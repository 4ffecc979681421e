//! Hierarchical decomposition of multi-information into interaction orders.
//!
//! For a distribution `p` of `N` variables, `p^(k)` is its projection onto
//! the order-k family (`p^(0)` uniform, `p^(N) = p`) and the spectrum entry
//! `I^(k) = D(p^(k) ‖ p^(k−1))` measures, in bits, the correlation that
//! order-(k−1) interactions cannot explain.

mod facial;
mod info;
mod ipf;

pub use facial::projection_support;
pub use info::{
    binary_entropy, kl_divergence, marginalize, multi_information, shannon_entropy, Divergence,
};
pub use ipf::{ipf_project, product_of_marginals, ProjectionResult, DEFAULT_MAX_ITER, DEFAULT_TOL};

use crate::distribution::JointDistribution;
use crate::error::Result;
use crate::num::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct LevelDiagnostics<T> {
    pub order: usize,
    pub iterations: usize,
    /// Marginal mismatch of the order-`order` projection.
    pub residual: T,
    /// `D(p^(k) ‖ p^(k−1))` was infinite.
    pub divergent: bool,
}

/// `(I^(1), …, I^(N))` in bits, with the projections that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct HierarchySpectrum<T> {
    pub n: usize,
    /// Entry `k−1` holds `I^(k)`; infinite levels hold `+∞`.
    pub values: Vec<T>,
    pub levels: Vec<LevelDiagnostics<T>>,
    /// `p^(0), …, p^(N)`.
    pub projections: Vec<JointDistribution<T>>,
}

impl<T: Real> HierarchySpectrum<T> {
    /// `I^(k)` for `1 ≤ k ≤ N`.
    pub fn level(&self, k: usize) -> T {
        self.values[k - 1]
    }

    pub fn total(&self) -> T {
        self.values.iter().copied().sum()
    }

    pub fn max_projection_residual(&self) -> T {
        self.levels.iter().map(|l| l.residual).fold(T::zero(), T::max)
    }

    /// `|Σ_k I^(k) − (Σ_i log₂|X_i| − H(p))|`, where `p = p^(N)`.
    pub fn sum_rule_residual(&self) -> T {
        let p = &self.projections[self.n];
        (self.total() - max_entropy(p) + shannon_entropy(p)).abs()
    }
}

/// `Σ_i log₂|X_i|`, the entropy of the uniform distribution.
pub fn max_entropy<T: Real>(p: &JointDistribution<T>) -> T {
    p.sizes().iter().map(|&s| T::lit(s as f64).log2()).sum()
}

/// Computes the full spectrum of `p`.
pub fn hierarchy_spectrum<T: Real>(
    p: &JointDistribution<T>,
    tol: T,
    max_iter: usize,
) -> Result<HierarchySpectrum<T>> {
    let n = p.n_vars();
    let mut projections = Vec::with_capacity(n + 1);
    projections.push(JointDistribution::uniform(p.sizes().to_vec())?);
    let mut fits = Vec::with_capacity(n);
    for k in 1..=n {
        let fit = ipf_project(p, k, tol, max_iter)?;
        projections.push(fit.distribution.clone());
        fits.push(fit);
    }

    let mut values = Vec::with_capacity(n);
    let mut levels = Vec::with_capacity(n);
    for (k, fit) in (1..=n).zip(&fits) {
        let d = kl_divergence(&projections[k], &projections[k - 1])?;
        values.push(d.value());
        levels.push(LevelDiagnostics {
            order: k,
            iterations: fit.iterations,
            residual: fit.residual,
            divergent: d.is_infinite(),
        });
    }
    Ok(HierarchySpectrum { n, values, levels, projections })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_has_empty_spectrum() {
        let u = JointDistribution::<f64>::uniform(vec![2, 2, 2]).unwrap();
        let s = hierarchy_spectrum(&u, 1e-10, 100).unwrap();
        assert_eq!(s.values, vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn pure_ghz_spectrum() {
        let mut p = vec![0.0; 8];
        p[0] = 0.5;
        p[7] = 0.5;
        let p = JointDistribution::binary(3, p).unwrap();
        let s = hierarchy_spectrum(&p, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert!(s.level(1).abs() < 1e-12);
        assert!((s.level(2) - 2.0).abs() < 1e-10);
        assert!(s.level(3).abs() < 1e-10);
        assert!(s.sum_rule_residual() < 1e-12);
    }

    #[test]
    fn pure_w_spectrum() {
        let t = 1.0 / 3.0;
        let p = JointDistribution::binary(3, vec![0.0, t, t, 0.0, t, 0.0, 0.0, 0.0]).unwrap();
        let s = hierarchy_spectrum(&p, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        let i1 = 3.0 - 3.0 * binary_entropy(t);
        assert!((s.level(1) - i1).abs() < 1e-12);
        assert!((s.level(1) - 0.24511).abs() < 1e-5);
        assert!((s.level(2) + s.level(3) - 1.16993).abs() < 1e-5);
        assert!(s.level(3).abs() < 1e-12);
    }

    #[test]
    fn binary_entropy_values() {
        assert_eq!(binary_entropy(0.5f64), 1.0);
        assert_eq!(binary_entropy(0.0f64), 0.0);
    }
}
