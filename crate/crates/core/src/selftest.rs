//! Runtime cross-checks behind the `selftest` subcommand: the IPF path
//! against the independent maximum-entropy oracle, the identities every
//! spectrum must satisfy, and the symmetries of the measurement layer.

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::distribution::JointDistribution;
use crate::error::Result;
use crate::hierarchy::{
    hierarchy_spectrum, ipf_project, kl_divergence, marginalize, max_entropy, product_of_marginals,
    shannon_entropy, DEFAULT_MAX_ITER, DEFAULT_TOL,
};
use crate::measurement::{born_statistics, computational_basis_projectors, rotated_basis_projectors};
use crate::oracle::pairwise_max_entropy_3bit;
use crate::quantum_state::{ghz_family, pure_to_density, w_family};
use crate::random::{random_distribution, random_state, random_unitary};

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    /// Worst residual observed, compared against `tolerance`.
    pub worst: f64,
    pub tolerance: f64,
}

impl CheckOutcome {
    fn new(name: &'static str, worst: f64, tolerance: f64) -> Self {
        Self { name, passed: worst <= tolerance, worst, tolerance }
    }
}

/// Worst-case residuals of the structural identities for one distribution.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct IdentityResiduals {
    pub pythagorean: f64,
    pub sum_rule: f64,
    /// Most negative spectrum entry, as a positive number (0 if none).
    pub negativity: f64,
    pub marginal_mismatch: f64,
    /// Largest increase along `D(p‖p^(1)) ≥ D(p‖p^(2)) ≥ …`.
    pub refinement: f64,
    pub order_one: f64,
}

impl IdentityResiduals {
    fn worst(self, other: Self) -> Self {
        Self {
            pythagorean: self.pythagorean.max(other.pythagorean),
            sum_rule: self.sum_rule.max(other.sum_rule),
            negativity: self.negativity.max(other.negativity),
            marginal_mismatch: self.marginal_mismatch.max(other.marginal_mismatch),
            refinement: self.refinement.max(other.refinement),
            order_one: self.order_one.max(other.order_one),
        }
    }
}

/// Recomputes every identity from the projections of `p`'s spectrum.
pub fn identity_residuals(p: &JointDistribution<f64>) -> Result<IdentityResiduals> {
    let s = hierarchy_spectrum(p, DEFAULT_TOL, DEFAULT_MAX_ITER)?;
    let n = p.n_vars();
    let d = |a: &JointDistribution<f64>, b: &JointDistribution<f64>| -> Result<f64> {
        Ok(kl_divergence(a, b)?.value())
    };
    let mut r = IdentityResiduals::default();
    let to_p: Vec<f64> = s.projections.iter().map(|q| d(p, q)).collect::<Result<_>>()?;
    for k in 1..=n {
        let chain = to_p[k - 1] - to_p[k] - s.level(k);
        r.pythagorean = r.pythagorean.max(chain.abs());
        r.refinement = r.refinement.max(to_p[k] - to_p[k - 1]);
        r.negativity = r.negativity.max(-s.level(k));
        for subset in (0..n).combinations(k) {
            let a = marginalize(p, &subset)?;
            let b = marginalize(&s.projections[k], &subset)?;
            r.marginal_mismatch = r.marginal_mismatch.max(2.0 * a.total_variation(&b)?);
        }
    }
    r.sum_rule = (s.total() - (max_entropy(p) - shannon_entropy(p))).abs();
    let product = product_of_marginals(p);
    let closed_i1: f64 = (0..n)
        .map(|v| Ok(max_entropy(&marginalize(p, &[v])?) - shannon_entropy(&marginalize(p, &[v])?)))
        .sum::<Result<f64>>()?;
    let order_one_tv = s.projections[1].total_variation(&product)?;
    r.order_one = order_one_tv.max((s.level(1) - closed_i1).abs());
    Ok(r)
}

/// Twenty seeded distributions over three bits; the first two have zero
/// cells.
pub fn random_suite(seed: u64) -> Vec<JointDistribution<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..20).map(|i| random_distribution(&mut rng, 3, [1, 2].get(i).copied().unwrap_or(0))).collect()
}

/// Runs every check and returns one outcome per named property.
pub fn run_selftest(seed: u64) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    let suite = random_suite(seed);

    let mut oracle_tv: f64 = 0.0;
    for p in &suite {
        let ipf = ipf_project(p, 2, DEFAULT_TOL, DEFAULT_MAX_ITER)?;
        let oracle = pairwise_max_entropy_3bit(p)?;
        oracle_tv = oracle_tv.max(ipf.distribution.total_variation(&oracle)?);
    }
    out.push(CheckOutcome::new("oracle_equivalence", oracle_tv, 1e-6));

    let mut family = Vec::new();
    for i in 0..=20 {
        let alpha = i as f64 / 20.0;
        let comp = vec![computational_basis_projectors(); 3];
        family.push(born_statistics(&ghz_family(3, alpha)?, &comp)?);
        family.push(born_statistics(&w_family(3, alpha)?, &comp)?);
    }
    let mut worst = IdentityResiduals::default();
    for p in suite.iter().chain(&family) {
        worst = worst.worst(identity_residuals(p)?);
    }
    out.push(CheckOutcome::new("pythagorean_chain", worst.pythagorean, 1e-7));
    out.push(CheckOutcome::new("sum_rule", worst.sum_rule, 1e-9));
    out.push(CheckOutcome::new("nonnegativity", worst.negativity, 1e-9));
    out.push(CheckOutcome::new("marginal_matching", worst.marginal_mismatch, 1e-10));
    out.push(CheckOutcome::new("monotone_refinement", worst.refinement, 1e-9));
    out.push(CheckOutcome::new("order_one_closed_form", worst.order_one, 1e-9));

    let mut perm_diff: f64 = 0.0;
    for p in &suite {
        let base = hierarchy_spectrum(p, DEFAULT_TOL, DEFAULT_MAX_ITER)?;
        for perm in (0..3).permutations(3) {
            let moved = hierarchy_spectrum(&p.permute_variables(&perm)?, DEFAULT_TOL, DEFAULT_MAX_ITER)?;
            for (a, b) in base.values.iter().zip(&moved.values) {
                perm_diff = perm_diff.max((a - b).abs());
            }
        }
    }
    out.push(CheckOutcome::new("permutation_equivariance", perm_diff, 1e-10));

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let (mut covariance, mut phase): (f64, f64) = (0.0, 0.0);
    for _ in 0..10 {
        let psi = random_state(&mut rng, 3);
        let rho = pure_to_density(&psi)?;
        let u = random_unitary(&mut rng);
        let rotated = vec![rotated_basis_projectors(&u)?; 3];
        let direct = born_statistics(&rho, &rotated)?;
        let global = u.kron(&u).kron(&u).adjoint();
        let comp = vec![computational_basis_projectors(); 3];
        let moved = born_statistics(&rho.conjugate_by(&global)?, &comp)?;
        covariance = covariance.max(max_abs_diff(&direct, &moved));
        let shifted = pure_to_density(&psi.with_global_phase(rng.gen_range(0.0..std::f64::consts::TAU)))?;
        phase = phase.max(max_abs_diff(&direct, &born_statistics(&shifted, &rotated)?));
    }
    out.push(CheckOutcome::new("rotation_covariance", covariance, 1e-10));
    out.push(CheckOutcome::new("global_phase_invariance", phase, 1e-10));
    Ok(out)
}

fn max_abs_diff(a: &JointDistribution<f64>, b: &JointDistribution<f64>) -> f64 {
    a.probs().iter().zip(b.probs()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
