//! Support of the information projection onto an interaction-order family.
//!
//! A cell can carry mass in the projection of `p` iff some nonnegative table
//! with the same order-k marginal *counts* as the indicator of `supp(p)` puts
//! mass on it. That set depends only on `supp(p)`, so it is decided exactly
//! with a small linear program over rationals. Starting IPF from the uniform
//! distribution on this set keeps every iterate in the closure of the family
//! and avoids the sublinear crawl towards zero that plain IPF shows when the
//! projection lies on the boundary of the simplex.

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::info::marginal_index_map;

type Q = BigRational;

/// Cells that may be positive in the order-`k` projection of any
/// distribution with support `support`.
pub fn projection_support(sizes: &[usize], k: usize, support: &[bool]) -> Vec<bool> {
    let cells = support.len();
    if support.iter().all(|&s| s) || k >= sizes.len() {
        return support.to_vec();
    }

    // one equality row per marginal cell of every size-k subset
    let mut rows: Vec<(Vec<usize>, usize)> = Vec::new();
    let mut forced_zero = vec![false; cells];
    for subset in (0..sizes.len()).combinations(k) {
        let map = marginal_index_map(sizes, &subset);
        let width: usize = subset.iter().map(|&v| sizes[v]).product();
        for m in 0..width {
            let members: Vec<usize> = (0..cells).filter(|&x| map[x] == m).collect();
            let count = members.iter().filter(|&&x| support[x]).count();
            if count == 0 {
                members.iter().for_each(|&x| forced_zero[x] = true);
            } else {
                rows.push((members, count));
            }
        }
    }

    // cells still undecided after the zero-marginal eliminations
    let free: Vec<usize> = (0..cells).filter(|&x| !forced_zero[x]).collect();
    let mut result = support.to_vec();
    if free.iter().all(|&x| support[x]) {
        return result;
    }
    let column: Vec<Option<usize>> = {
        let mut c = vec![None; cells];
        free.iter().enumerate().for_each(|(j, &x)| c[x] = Some(j));
        c
    };
    let a: Vec<(Vec<usize>, usize)> = rows
        .into_iter()
        .map(|(members, count)| (members.iter().filter_map(|&x| column[x]).collect(), count))
        .collect();

    let mut lp = Tableau::phase_one(free.len(), &a);
    loop {
        let candidates: Vec<usize> = (0..free.len()).filter(|&j| !result[free[j]]).collect();
        if candidates.is_empty() {
            break;
        }
        let x = lp.maximize_mass_on(&candidates);
        let gained: Vec<usize> = candidates.into_iter().filter(|&j| x[j].is_positive()).collect();
        if gained.is_empty() {
            break;
        }
        gained.into_iter().for_each(|j| result[free[j]] = true);
    }
    result
}

/// Dense simplex tableau for `min c·x  s.t.  A x = b, x ≥ 0` with `b ≥ 0`,
/// pivoting by Bland's rule.
struct Tableau {
    n_vars: usize,
    rows: Vec<Vec<Q>>,
    /// Reduced costs, last entry is minus the objective value.
    obj: Vec<Q>,
    basis: Vec<usize>,
}

impl Tableau {
    /// Builds the tableau and drives it to a basic feasible solution that
    /// only uses the original columns.
    fn phase_one(n_vars: usize, a: &[(Vec<usize>, usize)]) -> Self {
        let m = a.len();
        let width = n_vars + m + 1;
        let mut rows = vec![vec![Q::zero(); width]; m];
        for (r, (members, count)) in a.iter().enumerate() {
            for &j in members {
                rows[r][j] = Q::one();
            }
            rows[r][n_vars + r] = Q::one();
            rows[r][width - 1] = Q::from_integer(BigInt::from(*count));
        }
        let mut obj = vec![Q::zero(); width];
        for row in &rows {
            for j in 0..n_vars {
                obj[j] -= &row[j];
            }
            obj[width - 1] -= &row[width - 1];
        }
        let mut t = Tableau { n_vars, rows, obj, basis: (n_vars..n_vars + m).collect() };
        t.optimize(width - 1);
        assert!(t.obj[width - 1].is_zero(), "support indicator is always feasible");

        // pivot remaining artificials out, dropping rows that turn out redundant
        let mut r = 0;
        while r < t.rows.len() {
            if t.basis[r] >= n_vars {
                match (0..n_vars).find(|&j| !t.rows[r][j].is_zero()) {
                    Some(j) => t.pivot(r, j),
                    None => {
                        t.rows.remove(r);
                        t.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
        t
    }

    fn rhs(&self) -> usize {
        self.obj.len() - 1
    }

    /// Maximises the total mass on `columns` from the current feasible basis
    /// and returns the optimal primal point.
    fn maximize_mass_on(&mut self, columns: &[usize]) -> Vec<Q> {
        let mut cost = vec![Q::zero(); self.n_vars];
        columns.iter().for_each(|&j| cost[j] = -Q::one());
        let rhs = self.rhs();
        let mut obj = vec![Q::zero(); self.obj.len()];
        obj[..self.n_vars].clone_from_slice(&cost);
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if b < self.n_vars && !cost[b].is_zero() {
                for j in 0..=rhs {
                    let delta = &cost[b] * &row[j];
                    obj[j] -= delta;
                }
            }
        }
        self.obj = obj;
        self.optimize(self.n_vars);
        let mut x = vec![Q::zero(); self.n_vars];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if b < self.n_vars {
                x[b] = row[rhs].clone();
            }
        }
        x
    }

    /// Runs simplex iterations over entering columns `< allowed`.
    fn optimize(&mut self, allowed: usize) {
        let rhs = self.rhs();
        while let Some(enter) = (0..allowed).find(|&j| self.obj[j].is_negative()) {
            let mut leave: Option<(usize, Q)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                if row[enter].is_positive() {
                    let ratio = &row[rhs] / &row[enter];
                    let better = match &leave {
                        None => true,
                        Some((best, q)) => ratio < *q || (ratio == *q && self.basis[r] < self.basis[*best]),
                    };
                    if better {
                        leave = Some((r, ratio));
                    }
                }
            }
            let (r, _) = leave.expect("mass on a bounded table cannot be unbounded");
            self.pivot(r, enter);
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        self.rows[r].iter_mut().for_each(|v| *v *= &inv);
        let pivot_row = self.rows[r].clone();
        let eliminate = |row: &mut Vec<Q>| {
            let f = row[c].clone();
            if !f.is_zero() {
                row.iter_mut().zip(&pivot_row).for_each(|(v, p)| *v -= &f * p);
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.obj);
        self.basis[r] = c;
    }
}
