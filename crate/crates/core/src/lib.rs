//! Hierarchical information of measured multi-qubit states.
//!
//! The pipeline builds mixed GHZ and W states, turns them into classical
//! outcome distributions through local projective measurements, and splits
//! the multi-information of each distribution into contributions of
//! interaction order `k = 1 … N` by information projections onto
//! interaction-order exponential families.
//!
//! Numerical code is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the scalar to `f64`, which is what the command-line tool and the
//! default tolerances are calibrated for.

// `!(x >= 0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod distribution;
pub mod error;
pub mod hierarchy;
pub mod io;
pub mod linalg;
pub mod measurement;
pub mod num;
pub mod oracle;
pub mod quantum_state;
pub mod random;
pub mod selftest;
pub mod sweep;
pub mod validation;

pub use distribution::JointDistribution;
pub use error::{Error, Result};
pub use hierarchy::{hierarchy_spectrum, ipf_project, Divergence, HierarchySpectrum, ProjectionResult};
pub use linalg::CMatrix;
pub use measurement::{born_statistics, LocalProjectorBasis};
pub use num::Real;
pub use quantum_state::{DensityOperator, StateVector};
pub use sweep::{run_sweep, FamilySpec, SweepTable};
pub use validation::ValidationReport;

pub type StateVector64 = StateVector<f64>;
pub type DensityOperator64 = DensityOperator<f64>;
pub type LocalProjectorBasis64 = LocalProjectorBasis<f64>;
pub type JointDistribution64 = JointDistribution<f64>;
pub type HierarchySpectrum64 = HierarchySpectrum<f64>;
pub type ProjectionResult64 = ProjectionResult<f64>;
pub type FamilySpec64 = FamilySpec<f64>;
pub type SweepTable64 = SweepTable<f64>;

pub type StateVector32 = StateVector<f32>;
pub type DensityOperator32 = DensityOperator<f32>;
pub type JointDistribution32 = JointDistribution<f32>;
pub type HierarchySpectrum32 = HierarchySpectrum<f32>;
