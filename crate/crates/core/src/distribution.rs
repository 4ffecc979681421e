//! Probability tables over finite product alphabets.

use crate::error::{Error, Result};
use crate::num::Real;

/// Tolerance on `|Σ p - 1|` accepted at construction.
pub const SUM_TOL: f64 = 1e-12;

/// Joint distribution of `n` discrete variables, flattened with variable 0
/// as the most significant digit.
#[derive(Clone, Debug, PartialEq)]
pub struct JointDistribution<T> {
    sizes: Vec<usize>,
    probs: Vec<T>,
}

impl<T: Real> JointDistribution<T> {
    pub fn new(sizes: Vec<usize>, probs: Vec<T>) -> Result<Self> {
        check_shape(&sizes, probs.len())?;
        if let Some((i, p)) = probs.iter().enumerate().find(|(_, p)| !(**p >= T::zero()) || !p.is_finite()) {
            return Err(Error::invalid(format!("probability {p} at cell {i} is not a finite nonnegative number")));
        }
        let total: T = probs.iter().copied().sum();
        if (total - T::one()).abs() > T::tol(SUM_TOL) {
            return Err(Error::invalid(format!("probabilities sum to {total}, not 1")));
        }
        Ok(Self { sizes, probs })
    }

    /// Rescales nonnegative weights to a distribution.
    pub fn from_weights(sizes: Vec<usize>, weights: Vec<T>) -> Result<Self> {
        check_shape(&sizes, weights.len())?;
        let total: T = weights.iter().copied().sum();
        if !(total > T::zero()) || !total.is_finite() || weights.iter().any(|w| !(*w >= T::zero())) {
            return Err(Error::invalid("weights must be nonnegative with a positive finite sum"));
        }
        Ok(Self { sizes, probs: weights.into_iter().map(|w| w / total).collect() })
    }

    /// Distribution over `n` binary variables.
    pub fn binary(n: usize, probs: Vec<T>) -> Result<Self> {
        Self::new(vec![2; n], probs)
    }

    pub fn uniform(sizes: Vec<usize>) -> Result<Self> {
        let cells = check_shape(&sizes, None)?;
        let p = T::one() / T::lit(cells as f64);
        Ok(Self { sizes, probs: vec![p; cells] })
    }

    /// Internal constructor for tables whose shape is already known to be
    /// consistent; renormalises to absorb rounding.
    pub(crate) fn from_parts_normalized(sizes: Vec<usize>, mut probs: Vec<T>) -> Self {
        debug_assert_eq!(sizes.iter().product::<usize>(), probs.len());
        let total: T = probs.iter().copied().sum();
        if total > T::zero() {
            probs.iter_mut().for_each(|p| *p /= total);
        }
        Self { sizes, probs }
    }

    pub fn n_vars(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.sizes == other.sizes
    }

    /// Per-variable strides of the flat index.
    pub fn strides(&self) -> Vec<usize> {
        strides(&self.sizes)
    }

    /// Outcome tuple of a flat index.
    pub fn decode(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.sizes.len()];
        for (slot, &size) in out.iter_mut().zip(&self.sizes).rev() {
            *slot = index % size;
            index /= size;
        }
        out
    }

    /// Flat index of an outcome tuple.
    pub fn encode(&self, outcome: &[usize]) -> usize {
        outcome.iter().zip(&self.sizes).fold(0, |acc, (&x, &s)| acc * s + x)
    }

    /// Relabels variables so that new variable `j` is old variable `perm[j]`.
    pub fn permute_variables(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n_vars();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&v| v >= n || std::mem::replace(&mut seen[v], true)) {
            return Err(Error::invalid(format!("{perm:?} is not a permutation of {n} variables")));
        }
        let sizes: Vec<usize> = perm.iter().map(|&v| self.sizes[v]).collect();
        let mut probs = vec![T::zero(); self.len()];
        for (i, &p) in self.probs.iter().enumerate() {
            let old = self.decode(i);
            let new_index = perm.iter().zip(&sizes).fold(0, |acc, (&v, &s)| acc * s + old[v]);
            probs[new_index] = p;
        }
        Ok(Self { sizes, probs })
    }

    /// Total variation distance `½ Σ |p - q|`.
    pub fn total_variation(&self, other: &Self) -> Result<T> {
        if !self.same_shape(other) {
            return Err(Error::invalid("shape mismatch"));
        }
        let l1: T = self.probs.iter().zip(&other.probs).map(|(a, b)| (*a - *b).abs()).sum();
        Ok(l1 * T::lit(0.5))
    }
}

pub(crate) fn strides(sizes: &[usize]) -> Vec<usize> {
    let mut s = vec![1; sizes.len()];
    for i in (0..sizes.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * sizes[i + 1];
    }
    s
}

fn check_shape(sizes: &[usize], len: impl Into<Option<usize>>) -> Result<usize> {
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(Error::invalid(format!("invalid alphabet sizes {sizes:?}")));
    }
    let cells = sizes
        .iter()
        .try_fold(1usize, |acc, &s| acc.checked_mul(s))
        .filter(|&c| c <= 1 << 26)
        .ok_or_else(|| Error::invalid("outcome table too large"))?;
    if let Some(len) = len.into() {
        if len != cells {
            return Err(Error::invalid(format!("expected {cells} probabilities for sizes {sizes:?}, got {len}")));
        }
    }
    Ok(cells)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trip_is_most_significant_first() {
        let d = JointDistribution::<f64>::uniform(vec![2, 3, 2]).unwrap();
        assert_eq!(d.decode(1), vec![0, 0, 1]);
        assert_eq!(d.decode(2), vec![0, 1, 0]);
        assert_eq!(d.strides(), vec![6, 2, 1]);
        for i in 0..d.len() {
            assert_eq!(d.encode(&d.decode(i)), i);
        }
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(JointDistribution::binary(2, vec![0.5, 0.5, 0.1, -0.1]).is_err());
        assert!(JointDistribution::binary(2, vec![0.5, 0.5, 0.1, 0.1]).is_err());
        assert!(JointDistribution::binary(2, vec![0.5, 0.5]).is_err());
        assert!(JointDistribution::<f64>::new(vec![], vec![]).is_err());
    }

    #[test]
    fn permutation_moves_outcomes() {
        // p concentrated on (x0, x1, x2) = (1, 0, 0)
        let mut probs = vec![0.0; 8];
        probs[4] = 1.0;
        let d = JointDistribution::binary(3, probs).unwrap();
        let moved = d.permute_variables(&[1, 2, 0]).unwrap();
        assert_eq!(moved.probs()[1], 1.0);
        assert!(d.permute_variables(&[0, 0, 1]).is_err());
    }
}
