//! Local projective measurements and their Born-rule outcome statistics.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::distribution::JointDistribution;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::num::Real;
use crate::quantum_state::DensityOperator;
use crate::validation::ValidationReport;

pub const PROJECTOR_TOL: f64 = 1e-12;
pub const UNITARY_TOL: f64 = 1e-10;
/// Probabilities in `[-NEGATIVE_CLAMP_TOL, 0)` are rounding and get clamped.
pub const NEGATIVE_CLAMP_TOL: f64 = 1e-12;

/// Ordered projectors on one qubit, one per outcome label.
///
/// Arbitrary 2×2 matrices can be wrapped for diagnosis, but
/// [`born_statistics`] only accepts sets that pass
/// [`validate_projector_set`], which includes the rank-one condition. General
/// POVM elements are therefore never used as measurement operators.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalProjectorBasis<T> {
    projectors: Vec<CMatrix<T>>,
}

impl<T: Real> LocalProjectorBasis<T> {
    pub fn from_matrices(projectors: Vec<CMatrix<T>>) -> Result<Self> {
        if projectors.is_empty() || projectors.iter().any(|p| p.dim() != 2) {
            return Err(Error::invalid("local projectors must be a nonempty list of 2x2 matrices"));
        }
        Ok(Self { projectors })
    }

    pub fn projectors(&self) -> &[CMatrix<T>] {
        &self.projectors
    }

    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }

    /// Exactly `{|0⟩⟨0|, |1⟩⟨1|}`.
    pub fn is_computational(&self) -> bool {
        *self == computational_basis_projectors()
    }
}

/// `{|0⟩⟨0|, |1⟩⟨1|}` in that order.
pub fn computational_basis_projectors<T: Real>() -> LocalProjectorBasis<T> {
    LocalProjectorBasis {
        projectors: vec![
            CMatrix::from_diagonal(&[T::one(), T::zero()]),
            CMatrix::from_diagonal(&[T::zero(), T::one()]),
        ],
    }
}

/// `{u|0⟩⟨0|u†, u|1⟩⟨1|u†}` for a 2×2 unitary `u`.
pub fn rotated_basis_projectors<T: Real>(u: &CMatrix<T>) -> Result<LocalProjectorBasis<T>> {
    if u.dim() != 2 {
        return Err(Error::invalid("local rotation must be 2x2"));
    }
    let residual = (u * &u.adjoint()).max_abs_diff(&CMatrix::identity(2));
    if !(residual <= T::tol(UNITARY_TOL)) {
        return Err(Error::invalid(format!("matrix is not unitary (residual {:e})", residual.to_f64_lossy())));
    }
    let projectors = (0..2)
        .map(|col| {
            let v = [u[(0, col)], u[(1, col)]];
            CMatrix::outer(&v, &v)
        })
        .collect();
    Ok(LocalProjectorBasis { projectors })
}

/// Single-qubit unitary from Euler angles,
/// `[[cos θ/2, -e^{iλ} sin θ/2], [e^{iφ} sin θ/2, e^{i(φ+λ)} cos θ/2]]`.
pub fn euler_unitary<T: Real>(theta: T, phi: T, lambda: T) -> CMatrix<T> {
    let half = theta * T::lit(0.5);
    let (s, c) = half.sin_cos();
    let e = |angle: T| Complex::from_polar(T::one(), angle);
    CMatrix::from_rows([
        [Complex::new(c, T::zero()), -e(lambda).scale(s)],
        [e(phi).scale(s), e(phi + lambda).scale(c)],
    ])
}

/// Residuals of idempotence, Hermiticity, rank one, completeness and mutual
/// orthogonality. Failures are report entries, never errors.
pub fn validate_projector_set<T: Real>(basis: &LocalProjectorBasis<T>) -> ValidationReport {
    let ps = basis.projectors();
    let tol = T::tol(PROJECTOR_TOL);
    let max = |it: &mut dyn Iterator<Item = T>| it.fold(T::zero(), T::max).to_f64_lossy();

    let idempotence = max(&mut ps.iter().map(|p| (p * p).max_abs_diff(p)));
    let hermitian = max(&mut ps.iter().map(|p| p.hermiticity_residual()));
    let rank_one = max(&mut ps.iter().map(|p| (p.trace() - Complex::one()).norm()));
    let sum = ps.iter().skip(1).fold(ps[0].clone(), |acc, p| &acc + p);
    let completeness = sum.max_abs_diff(&CMatrix::identity(2)).to_f64_lossy();
    let zero = CMatrix::zeros(2);
    let orthogonality = max(&mut ps.iter().enumerate().flat_map(|(i, a)| {
        let zero = &zero;
        ps.iter().enumerate().filter(move |(j, _)| *j != i).map(move |(_, b)| (a * b).max_abs_diff(zero))
    }));

    let tol = tol.to_f64_lossy();
    let mut report = ValidationReport::default();
    report.record("idempotence", idempotence, tol);
    report.record("hermitian", hermitian, tol);
    report.record("rank_one", rank_one, tol);
    report.record("completeness", completeness, tol);
    report.record("orthogonality", orthogonality, tol);
    report
}

fn check_inputs<T: Real>(rho: &DensityOperator<T>, bases: &[LocalProjectorBasis<T>]) -> Result<()> {
    if bases.len() != rho.n_qubits() {
        return Err(Error::invalid(format!(
            "{} local bases supplied for {} qubits",
            bases.len(),
            rho.n_qubits()
        )));
    }
    for (site, basis) in bases.iter().enumerate() {
        let report = validate_projector_set(basis);
        let first_failure = report.failures().next().cloned();
        if let Some(failed) = first_failure {
            let msg = format!("projector set on site {site} fails {} (residual {:e})", failed.name, failed.residual);
            return Err(Error::invalid(msg));
        }
    }
    Ok(())
}

/// Born-rule statistics `p(i₁…iₙ) = Tr(ρ · P_{i₁} ⊗ ⋯ ⊗ P_{iₙ})`.
///
/// Uses the diagonal of `ρ` when every site is measured in the computational
/// basis, and [`born_statistics_trace`] otherwise.
pub fn born_statistics<T: Real>(
    rho: &DensityOperator<T>,
    bases: &[LocalProjectorBasis<T>],
) -> Result<JointDistribution<T>> {
    check_inputs(rho, bases)?;
    if bases.iter().all(LocalProjectorBasis::is_computational) {
        finish(rho.n_qubits(), rho.matrix().diagonal_re())
    } else {
        born_statistics_trace(rho, bases)
    }
}

/// Reference evaluation through the full trace formula.
pub fn born_statistics_trace<T: Real>(
    rho: &DensityOperator<T>,
    bases: &[LocalProjectorBasis<T>],
) -> Result<JointDistribution<T>> {
    check_inputs(rho, bases)?;
    let sizes: Vec<usize> = bases.iter().map(LocalProjectorBasis::len).collect();
    let cells: usize = sizes.iter().product();
    let shape = JointDistribution::<T>::uniform(sizes.clone())?;
    let m = rho.matrix();
    let raw = (0..cells)
        .map(|cell| {
            let outcome = shape.decode(cell);
            let projector = outcome
                .iter()
                .zip(bases)
                .map(|(&i, b)| &b.projectors()[i])
                .skip(1)
                .fold(bases[0].projectors()[outcome[0]].clone(), |acc, p| acc.kron(p));
            let mut tr = Complex::<T>::zero();
            for a in 0..m.dim() {
                for b in 0..m.dim() {
                    tr += m[(a, b)] * projector[(b, a)];
                }
            }
            tr.re
        })
        .collect();
    finish_with_sizes(sizes, raw)
}

fn finish<T: Real>(n: usize, raw: Vec<T>) -> Result<JointDistribution<T>> {
    finish_with_sizes(vec![2; n], raw)
}

fn finish_with_sizes<T: Real>(sizes: Vec<usize>, mut raw: Vec<T>) -> Result<JointDistribution<T>> {
    let clamp = T::tol(NEGATIVE_CLAMP_TOL);
    for (i, p) in raw.iter_mut().enumerate() {
        if !p.is_finite() || *p < -clamp {
            return Err(Error::NumericalFailure(format!(
                "outcome {i} has probability {p}; the density operator is not valid"
            )));
        }
        if *p < T::zero() {
            *p = T::zero();
        }
    }
    let total: T = raw.iter().copied().sum();
    if (total - T::one()).abs() > T::tol(1e-9) {
        return Err(Error::NumericalFailure(format!("outcome probabilities sum to {total}")));
    }
    Ok(JointDistribution::from_parts_normalized(sizes, raw))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum_state::{ghz_family, pure_to_density, w_family};

    fn comp3() -> Vec<LocalProjectorBasis<f64>> {
        vec![computational_basis_projectors(); 3]
    }

    #[test]
    fn computational_basis_shape() {
        let b = computational_basis_projectors::<f64>();
        assert_eq!(b.projectors()[0], CMatrix::from_diagonal(&[1.0, 0.0]));
        assert!(validate_projector_set(&b).all_passed());
        let prod = &b.projectors()[0] * &b.projectors()[1];
        assert_eq!(prod, CMatrix::zeros(2));
    }

    #[test]
    fn rotated_bases() {
        let id = rotated_basis_projectors(&CMatrix::<f64>::identity(2)).unwrap();
        assert_eq!(id, computational_basis_projectors());
        let h = euler_unitary(std::f64::consts::FRAC_PI_2, 0.0, std::f64::consts::PI);
        let hb = rotated_basis_projectors(&h).unwrap();
        for (p, sign) in hb.projectors().iter().zip([1.0, -1.0]) {
            assert!((p[(0, 0)].re - 0.5).abs() < 1e-15);
            assert!((p[(0, 1)].re - 0.5 * sign).abs() < 1e-15);
        }
        assert!(validate_projector_set(&hb).get("completeness").unwrap().residual <= 1e-12);
        let not_unitary = CMatrix::from_diagonal(&[1.0, 2.0]);
        assert!(rotated_basis_projectors(&not_unitary).is_err());
    }

    #[test]
    fn defective_projector_sets() {
        let lone = LocalProjectorBasis::from_matrices(vec![CMatrix::from_diagonal(&[1.0, 0.0])]).unwrap();
        let r = validate_projector_set(&lone);
        assert!(!r.passed("completeness") && r.passed("idempotence"));
        let halves = LocalProjectorBasis::from_matrices(vec![CMatrix::from_diagonal(&[0.5, 0.5]); 2]).unwrap();
        assert!(!validate_projector_set(&halves).passed("idempotence"));
        let rho = ghz_family::<f64>(2, 0.5).unwrap();
        assert!(born_statistics(&rho, &[halves.clone(), halves]).is_err());
    }

    #[test]
    fn maximally_mixed_gives_uniform() {
        let p = born_statistics(&ghz_family::<f64>(3, 0.0).unwrap(), &comp3()).unwrap();
        assert!(p.probs().iter().all(|&x| (x - 0.125).abs() < 1e-15));
    }

    #[test]
    fn pure_ghz_statistics() {
        let p = born_statistics(&ghz_family::<f64>(3, 1.0).unwrap(), &comp3()).unwrap();
        assert_eq!(p.probs(), &[0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5]);
    }

    #[test]
    fn half_mixed_ghz_statistics_both_routes() {
        let rho = ghz_family::<f64>(3, 0.5).unwrap();
        for p in [born_statistics(&rho, &comp3()).unwrap(), born_statistics_trace(&rho, &comp3()).unwrap()] {
            for (i, x) in p.probs().iter().enumerate() {
                let want = if i == 0 || i == 7 { 0.3125 } else { 0.0625 };
                assert!((x - want).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn basis_count_must_match() {
        let rho = w_family::<f64>(3, 0.3).unwrap();
        assert!(matches!(born_statistics(&rho, &comp3()[..2]), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn clearly_negative_probability_is_numerical_failure() {
        let rho = DensityOperator::from_matrix(CMatrix::from_diagonal(&[1.5, -0.5])).unwrap();
        let err = born_statistics(&rho, &[computational_basis_projectors()]).unwrap_err();
        assert!(matches!(err, Error::NumericalFailure(_)));
    }

    #[test]
    fn tiny_negative_is_clamped() {
        let rho = DensityOperator::from_matrix(CMatrix::from_diagonal(&[1.0 + 5e-13, -5e-13])).unwrap();
        let p = born_statistics(&rho, &[computational_basis_projectors()]).unwrap();
        assert_eq!(p.probs()[1], 0.0);
        assert_eq!(p.probs()[0], 1.0);
    }

    #[test]
    fn pure_state_density_statistics() {
        let psi = crate::quantum_state::w_state::<f64>(3).unwrap();
        let p = born_statistics(&pure_to_density(&psi).unwrap(), &comp3()).unwrap();
        for (x, y) in p.probs().iter().zip(psi.probabilities()) {
            assert!((x - y).abs() < 1e-15);
        }
    }
}
