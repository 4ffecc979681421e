//! Pure states and density operators of a few qubits.
//!
//! Basis indices are most-significant-first: qubit 0 is the leftmost symbol
//! of a ket, so `|001⟩` has index 1.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::num::Real;
use crate::validation::ValidationReport;

pub const NORM_TOL: f64 = 1e-12;
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
/// Smallest admissible eigenvalue is `-PSD_TOL`.
pub const PSD_TOL: f64 = 1e-10;

fn qubits_for_dim(dim: usize) -> Option<usize> {
    (dim >= 2 && dim.is_power_of_two()).then(|| dim.trailing_zeros() as usize)
}

/// Amplitudes of an `n`-qubit pure state.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T> {
    n: usize,
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    /// Wraps amplitudes whose length is a power of two (at least 2).
    /// Normalisation is checked where it matters, see [`Self::norm_residual`].
    pub fn new(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let n = qubits_for_dim(amplitudes.len()).ok_or_else(|| {
            Error::invalid(format!("state length {} is not a power of two >= 2", amplitudes.len()))
        })?;
        Ok(Self { n, amplitudes })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<T>().sqrt();
        if !(norm > T::zero()) || !norm.is_finite() {
            return Err(Error::invalid("cannot normalise a zero or non-finite state"));
        }
        Self::new(amplitudes.into_iter().map(|a| a.unscale(norm)).collect())
    }

    /// Computational basis state `|index⟩` of `n` qubits.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        if n == 0 || index >= 1 << n {
            return Err(Error::invalid(format!("basis index {index} out of range for {n} qubits")));
        }
        let mut amps = vec![Complex::zero(); 1 << n];
        amps[index] = Complex::new(T::one(), T::zero());
        Self::new(amps)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    /// `|Σ|a_i|² - 1|`.
    pub fn norm_residual(&self) -> T {
        (self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<T>() - T::one()).abs()
    }

    pub fn is_normalized(&self) -> bool {
        self.norm_residual() <= T::tol(NORM_TOL)
    }

    /// Squared amplitudes, i.e. computational-basis outcome probabilities.
    pub fn probabilities(&self) -> Vec<T> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Multiplies every amplitude by `e^{iφ}`.
    pub fn with_global_phase(&self, phi: T) -> Self {
        let phase = Complex::from_polar(T::one(), phi);
        Self { n: self.n, amplitudes: self.amplitudes.iter().map(|a| a * phase).collect() }
    }
}

fn require_at_least_two(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::invalid(format!("need at least 2 qubits, got {n}")));
    }
    if n > 24 {
        return Err(Error::invalid(format!("{n} qubits exceeds the dense representation")));
    }
    Ok(())
}

/// `(|0…0⟩ + |1…1⟩)/√2`.
pub fn ghz_state<T: Real>(n: usize) -> Result<StateVector<T>> {
    require_at_least_two(n)?;
    let dim = 1usize << n;
    let a = Complex::new(T::FRAC_1_SQRT_2(), T::zero());
    let mut amps = vec![Complex::zero(); dim];
    amps[0] = a;
    amps[dim - 1] = a;
    StateVector::new(amps)
}

/// Equal superposition of the `n` single-excitation basis states.
pub fn w_state<T: Real>(n: usize) -> Result<StateVector<T>> {
    require_at_least_two(n)?;
    let a = Complex::new(T::one() / T::lit(n as f64).sqrt(), T::zero());
    let mut amps = vec![Complex::zero(); 1 << n];
    for q in 0..n {
        amps[1 << q] = a;
    }
    StateVector::new(amps)
}

/// Density operator on `n` qubits. Construction only checks the shape; use
/// [`validate_density`] for the physical conditions.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator<T> {
    n: usize,
    matrix: CMatrix<T>,
}

impl<T: Real> DensityOperator<T> {
    pub fn from_matrix(matrix: CMatrix<T>) -> Result<Self> {
        let n = qubits_for_dim(matrix.dim()).ok_or_else(|| {
            Error::invalid(format!("dimension {} is not a power of two >= 2", matrix.dim()))
        })?;
        Ok(Self { n, matrix })
    }

    /// `I / 2^n`.
    pub fn maximally_mixed(n: usize) -> Result<Self> {
        if n == 0 || n > 24 {
            return Err(Error::invalid(format!("unsupported qubit count {n}")));
        }
        let dim = 1usize << n;
        Self::from_matrix(CMatrix::identity(dim).scale(T::one() / T::lit(dim as f64)))
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    /// `U ρ U†` for a unitary acting on the full space.
    pub fn conjugate_by(&self, u: &CMatrix<T>) -> Result<Self> {
        if u.dim() != self.dim() {
            return Err(Error::invalid("unitary dimension does not match state"));
        }
        Self::from_matrix(&(u * &self.matrix) * &u.adjoint())
    }
}

/// `|ψ⟩⟨ψ|`.
pub fn pure_to_density<T: Real>(psi: &StateVector<T>) -> Result<DensityOperator<T>> {
    if !psi.is_normalized() {
        return Err(Error::invalid(format!(
            "state is not normalised (residual {:e})",
            psi.norm_residual().to_f64_lossy()
        )));
    }
    DensityOperator::from_matrix(CMatrix::outer(psi.amplitudes(), psi.amplitudes()))
}

/// `α ρ + (1 − α) I / 2^n`.
pub fn mix_with_maximally_mixed<T: Real>(
    rho: &DensityOperator<T>,
    alpha: T,
) -> Result<DensityOperator<T>> {
    if !(alpha >= T::zero() && alpha <= T::one()) {
        return Err(Error::invalid(format!("alpha {alpha} outside [0, 1]")));
    }
    let dim = rho.dim();
    let noise = CMatrix::identity(dim).scale((T::one() - alpha) / T::lit(dim as f64));
    DensityOperator::from_matrix(&rho.matrix.scale(alpha) + &noise)
}

/// Mixed GHZ family on `n` qubits.
pub fn ghz_family<T: Real>(n: usize, alpha: T) -> Result<DensityOperator<T>> {
    mix_with_maximally_mixed(&pure_to_density(&ghz_state(n)?)?, alpha)
}

/// Mixed W family on `n` qubits.
pub fn w_family<T: Real>(n: usize, alpha: T) -> Result<DensityOperator<T>> {
    mix_with_maximally_mixed(&pure_to_density(&w_state(n)?)?, alpha)
}

/// Checks Hermiticity, unit trace and positive semidefiniteness.
pub fn validate_density<T: Real>(rho: &DensityOperator<T>) -> ValidationReport {
    let m = rho.matrix();
    let mut report = ValidationReport::default();
    report.record("hermitian", m.hermiticity_residual().to_f64_lossy(), T::tol(HERMITIAN_TOL).to_f64_lossy());
    let tr = m.trace();
    report.record(
        "unit_trace",
        (tr - Complex::new(T::one(), T::zero())).norm().to_f64_lossy(),
        T::tol(TRACE_TOL).to_f64_lossy(),
    );
    let min_eig = m.hermitian_eigenvalues().first().copied().unwrap_or_else(T::zero);
    // residual is how far the spectrum dips below zero
    report.record("psd", (-min_eig).max(T::zero()).to_f64_lossy(), T::tol(PSD_TOL).to_f64_lossy());
    report
}

/// Shape-checks a raw matrix before validating it.
pub fn validate_matrix<T: Real>(matrix: CMatrix<T>) -> Result<ValidationReport> {
    Ok(validate_density(&DensityOperator::from_matrix(matrix)?))
}
