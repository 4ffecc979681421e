//! α-sweeps over the mixed GHZ and W families and shape checks on the
//! resulting spectra.

use std::fmt;

use rayon::prelude::*;

use crate::distribution::JointDistribution;
use crate::error::{Error, Result};
use crate::hierarchy::{hierarchy_spectrum, shannon_entropy, HierarchySpectrum};
use crate::measurement::{
    born_statistics, computational_basis_projectors, euler_unitary, rotated_basis_projectors,
    LocalProjectorBasis,
};
use crate::num::Real;
use crate::quantum_state::{ghz_state, mix_with_maximally_mixed, pure_to_density, w_state, DensityOperator, StateVector};

/// Which pure state is mixed with the identity.
#[derive(Clone, Debug, PartialEq)]
pub enum Family<T> {
    Ghz,
    W,
    Custom(StateVector<T>),
}

/// Local measurement applied to every qubit.
#[derive(Clone, Debug, PartialEq)]
pub enum MeasurementSpec<T> {
    Computational,
    /// Euler angles `(θ, φ, λ)` per site, see [`euler_unitary`].
    Rotated(Vec<[T; 3]>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilySpec<T> {
    pub family: Family<T>,
    pub n: usize,
    pub measurement: MeasurementSpec<T>,
}

impl<T: Real> FamilySpec<T> {
    pub fn ghz(n: usize) -> Self {
        Self { family: Family::Ghz, n, measurement: MeasurementSpec::Computational }
    }

    pub fn w(n: usize) -> Self {
        Self { family: Family::W, n, measurement: MeasurementSpec::Computational }
    }

    pub fn custom(psi: StateVector<T>) -> Self {
        Self { n: psi.n_qubits(), family: Family::Custom(psi), measurement: MeasurementSpec::Computational }
    }

    pub fn with_measurement(mut self, measurement: MeasurementSpec<T>) -> Self {
        self.measurement = measurement;
        self
    }

    pub fn label(&self) -> &'static str {
        match self.family {
            Family::Ghz => "GHZ",
            Family::W => "W",
            Family::Custom(_) => "custom",
        }
    }

    fn pure_state(&self) -> Result<StateVector<T>> {
        match &self.family {
            Family::Ghz => ghz_state(self.n),
            Family::W => w_state(self.n),
            Family::Custom(psi) if psi.n_qubits() == self.n => {
                if !psi.is_normalized() {
                    return Err(Error::invalid("custom state is not normalised"));
                }
                Ok(psi.clone())
            }
            Family::Custom(psi) => Err(Error::invalid(format!(
                "custom state has {} qubits, spec says {}",
                psi.n_qubits(),
                self.n
            ))),
        }
    }

    /// `α |ψ⟩⟨ψ| + (1 − α) I / 2^n`.
    pub fn state(&self, alpha: T) -> Result<DensityOperator<T>> {
        mix_with_maximally_mixed(&pure_to_density(&self.pure_state()?)?, alpha)
    }

    pub fn bases(&self) -> Result<Vec<LocalProjectorBasis<T>>> {
        match &self.measurement {
            MeasurementSpec::Computational => Ok(vec![computational_basis_projectors(); self.n]),
            MeasurementSpec::Rotated(angles) => {
                let angles: Vec<[T; 3]> = match angles.len() {
                    1 => vec![angles[0]; self.n],
                    len if len == self.n => angles.clone(),
                    len => {
                        return Err(Error::invalid(format!(
                            "{len} site rotations given for {} qubits",
                            self.n
                        )))
                    }
                };
                angles
                    .iter()
                    .map(|&[theta, phi, lambda]| rotated_basis_projectors(&euler_unitary(theta, phi, lambda)))
                    .collect()
            }
        }
    }

    /// Outcome distribution of the family member at `alpha`.
    pub fn distribution(&self, alpha: T) -> Result<JointDistribution<T>> {
        born_statistics(&self.state(alpha)?, &self.bases()?)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow<T> {
    pub alpha: T,
    pub spectrum: HierarchySpectrum<T>,
    /// `H(p)` in bits.
    pub entropy: T,
    pub sum_residual: T,
    pub projection_residual: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepTable<T> {
    pub label: String,
    pub n: usize,
    pub rows: Vec<SweepRow<T>>,
}

impl<T: Real> SweepTable<T> {
    pub fn alphas(&self) -> Vec<T> {
        self.rows.iter().map(|r| r.alpha).collect()
    }

    /// `I^(k)` along the grid.
    pub fn series(&self, k: usize) -> Vec<T> {
        self.rows.iter().map(|r| r.spectrum.level(k)).collect()
    }
}

/// `start, start + h, …, stop` with `steps` intervals, computed from integer
/// indices so that the grid points are reproducible.
pub fn uniform_grid(start: f64, stop: f64, steps: usize) -> Vec<f64> {
    if steps == 0 {
        return vec![start];
    }
    (0..=steps).map(|i| start + (stop - start) * i as f64 / steps as f64).collect()
}

/// `0.00, 0.01, …, 1.00`.
pub fn default_grid() -> Vec<f64> {
    (0..=100).map(|i| i as f64 / 100.0).collect()
}

/// Evaluates one grid point: state, measurement, spectrum and diagnostics.
pub fn evaluate_alpha<T: Real>(spec: &FamilySpec<T>, alpha: T, tol: T, max_iter: usize) -> Result<SweepRow<T>> {
    let at = |e: Error| Error::AtAlpha { alpha: alpha.to_f64_lossy(), source: Box::new(e) };
    let p = spec.distribution(alpha).map_err(at)?;
    let spectrum = hierarchy_spectrum(&p, tol, max_iter).map_err(at)?;
    Ok(SweepRow {
        alpha,
        entropy: shannon_entropy(&p),
        sum_residual: spectrum.sum_rule_residual(),
        projection_residual: spectrum.max_projection_residual(),
        spectrum,
    })
}

/// Runs the pipeline at every grid point. With `parallel`, points are
/// evaluated on the rayon pool; rows are always in grid order.
pub fn run_sweep<T: Real>(
    spec: &FamilySpec<T>,
    grid: &[T],
    tol: T,
    max_iter: usize,
    parallel: bool,
) -> Result<SweepTable<T>> {
    for a in grid {
        if !(*a >= T::zero() && *a <= T::one()) {
            return Err(Error::invalid(format!("grid value {a} outside [0, 1]")));
        }
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::invalid("grid must be strictly increasing"));
    }
    // fail fast on spec errors before spawning work
    spec.bases()?;
    spec.pure_state()?;

    let rows: Result<Vec<SweepRow<T>>> = if parallel {
        grid.par_iter().map(|&a| evaluate_alpha(spec, a, tol, max_iter)).collect()
    } else {
        grid.iter().map(|&a| evaluate_alpha(spec, a, tol, max_iter)).collect()
    };
    Ok(SweepTable { label: spec.label().to_string(), n: spec.n, rows: rows? })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridMaximum<T> {
    pub alpha: T,
    pub value: T,
    /// The argmax is at neither end of the grid.
    pub is_interior: bool,
}

/// Grid argmax of `I^(k)`, ties resolved towards the smaller α.
pub fn find_interior_maximum<T: Real>(table: &SweepTable<T>, k: usize) -> Result<GridMaximum<T>> {
    if table.rows.is_empty() {
        return Err(Error::invalid("empty sweep table"));
    }
    if k == 0 || k > table.n {
        return Err(Error::invalid(format!("level {k} outside 1..={}", table.n)));
    }
    let series = table.series(k);
    let mut best = 0;
    for (i, v) in series.iter().enumerate().skip(1) {
        if *v > series[best] {
            best = i;
        }
    }
    Ok(GridMaximum {
        alpha: table.rows[best].alpha,
        value: series[best],
        is_interior: best != 0 && best != series.len() - 1,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonotoneViolation<T> {
    /// Index of the row whose value dropped.
    pub index: usize,
    pub alpha: T,
    pub drop: T,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonotoneCheck<T> {
    pub monotone: bool,
    pub first_violation: Option<MonotoneViolation<T>>,
}

impl<T: Real> fmt::Display for MonotoneCheck<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.first_violation {
            None => f.write_str("nondecreasing"),
            Some(v) => write!(f, "drops by {:e} at alpha = {} (row {})", v.drop.to_f64_lossy(), v.alpha, v.index),
        }
    }
}

/// Whether `I^(k)` is nondecreasing along α up to `slack`.
pub fn check_monotone<T: Real>(table: &SweepTable<T>, k: usize, slack: T) -> Result<MonotoneCheck<T>> {
    if table.rows.is_empty() {
        return Err(Error::invalid("empty sweep table"));
    }
    if k == 0 || k > table.n {
        return Err(Error::invalid(format!("level {k} outside 1..={}", table.n)));
    }
    let series = table.series(k);
    let first_violation = series.windows(2).enumerate().find_map(|(i, w)| {
        (w[1] < w[0] - slack).then(|| MonotoneViolation { index: i + 1, alpha: table.rows[i + 1].alpha, drop: w[0] - w[1] })
    });
    Ok(MonotoneCheck { monotone: first_violation.is_none(), first_violation })
}
