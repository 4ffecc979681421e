//! Marginals, entropies and divergences, all in bits.

use std::fmt;

use crate::distribution::JointDistribution;
use crate::error::{Error, Result};
use crate::num::Real;

/// Flat index of the marginal cell for every joint cell.
pub(crate) fn marginal_index_map(sizes: &[usize], subset: &[usize]) -> Vec<usize> {
    let cells: usize = sizes.iter().product();
    let full = crate::distribution::strides(sizes);
    let sub_sizes: Vec<usize> = subset.iter().map(|&v| sizes[v]).collect();
    let sub = crate::distribution::strides(&sub_sizes);
    (0..cells)
        .map(|i| {
            subset
                .iter()
                .zip(&sub)
                .map(|(&v, &stride)| (i / full[v]) % sizes[v] * stride)
                .sum()
        })
        .collect()
}

fn check_subset(n: usize, subset: &[usize]) -> Result<()> {
    if subset.is_empty() {
        return Err(Error::invalid("marginal over an empty variable set"));
    }
    let mut seen = vec![false; n];
    for &v in subset {
        if v >= n {
            return Err(Error::invalid(format!("variable index {v} out of range for {n} variables")));
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::invalid(format!("variable index {v} repeated in {subset:?}")));
        }
    }
    Ok(())
}

/// Marginal on `subset`, with variables in the order given.
pub fn marginalize<T: Real>(p: &JointDistribution<T>, subset: &[usize]) -> Result<JointDistribution<T>> {
    check_subset(p.n_vars(), subset)?;
    let sizes: Vec<usize> = subset.iter().map(|&v| p.sizes()[v]).collect();
    let mut out = vec![T::zero(); sizes.iter().product()];
    for (&m, &x) in marginal_index_map(p.sizes(), subset).iter().zip(p.probs()) {
        out[m] += x;
    }
    Ok(JointDistribution::from_parts_normalized(sizes, out))
}

/// `−Σ p log₂ p` with `0 log 0 = 0`.
pub fn shannon_entropy<T: Real>(p: &JointDistribution<T>) -> T {
    entropy_of(p.probs())
}

pub(crate) fn entropy_of<T: Real>(probs: &[T]) -> T {
    -probs.iter().filter(|&&x| x > T::zero()).map(|&x| x * x.log2()).sum::<T>()
}

/// Result of a KL divergence: finite, or infinite because `q` vanishes
/// somewhere `p` does not.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Divergence<T> {
    Finite(T),
    Infinite,
}

impl<T: Real> Divergence<T> {
    pub fn finite(self) -> Option<T> {
        match self {
            Divergence::Finite(v) => Some(v),
            Divergence::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Divergence::Infinite)
    }

    /// Value with `+∞` standing in for the infinite case.
    pub fn value(self) -> T {
        self.finite().unwrap_or_else(T::infinity)
    }
}

impl<T: Real> fmt::Display for Divergence<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Divergence::Finite(v) => write!(f, "{v}"),
            Divergence::Infinite => f.write_str("inf"),
        }
    }
}

/// `D(p‖q) = Σ_{p(x)>0} p(x) log₂(p(x)/q(x))`.
pub fn kl_divergence<T: Real>(p: &JointDistribution<T>, q: &JointDistribution<T>) -> Result<Divergence<T>> {
    if !p.same_shape(q) {
        return Err(Error::invalid(format!(
            "shape mismatch: {:?} vs {:?}",
            p.sizes(),
            q.sizes()
        )));
    }
    let mut d = T::zero();
    for (&a, &b) in p.probs().iter().zip(q.probs()) {
        if a > T::zero() {
            if !(b > T::zero()) {
                return Ok(Divergence::Infinite);
            }
            d += a * (a / b).log2();
        }
    }
    Ok(Divergence::Finite(d))
}

/// Total correlation `Σ_i H(X_i) − H(X)`.
pub fn multi_information<T: Real>(p: &JointDistribution<T>) -> T {
    let singles: T = (0..p.n_vars())
        .map(|v| shannon_entropy(&marginalize(p, &[v]).expect("single variable index in range")))
        .sum();
    singles - shannon_entropy(p)
}

/// `H_b(x) = −x log₂ x − (1−x) log₂(1−x)`.
pub fn binary_entropy<T: Real>(x: T) -> T {
    entropy_of(&[x, T::one() - x])
}
