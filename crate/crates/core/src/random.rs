//! Seeded random inputs for property checks and the self-test.

use num_complex::Complex;
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::distribution::JointDistribution;
use crate::linalg::CMatrix;
use crate::quantum_state::StateVector;

/// Flat-Dirichlet sample over `2^n` cells with `zeros` cells forced to zero.
pub fn random_distribution<R: Rng>(rng: &mut R, n: usize, zeros: usize) -> JointDistribution<f64> {
    let cells = 1usize << n;
    let mut w: Vec<f64> = (0..cells).map(|_| Exp1.sample(rng)).collect();
    let mut zeroed = 0;
    while zeroed < zeros.min(cells - 1) {
        let i = rng.gen_range(0..cells);
        if w[i] > 0.0 {
            w[i] = 0.0;
            zeroed += 1;
        }
    }
    JointDistribution::from_weights(vec![2; n], w).expect("positive total weight")
}

fn gaussian<R: Rng>(rng: &mut R) -> Complex<f64> {
    Complex::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

/// Haar-random pure state of `n` qubits.
pub fn random_state<R: Rng>(rng: &mut R, n: usize) -> StateVector<f64> {
    StateVector::normalized((0..1usize << n).map(|_| gaussian(rng)).collect()).expect("nonzero Gaussian vector")
}

/// Haar-random 2×2 unitary by Gram–Schmidt on a complex Gaussian matrix.
pub fn random_unitary<R: Rng>(rng: &mut R) -> CMatrix<f64> {
    let a = [gaussian(rng), gaussian(rng)];
    let na = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let e0 = [a[0] / na, a[1] / na];
    let b = [gaussian(rng), gaussian(rng)];
    let overlap = e0[0].conj() * b[0] + e0[1].conj() * b[1];
    let r = [b[0] - overlap * e0[0], b[1] - overlap * e0[1]];
    let nr = r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let e1 = [r[0] / nr, r[1] / nr];
    CMatrix::from_rows([[e0[0], e1[0]], [e0[1], e1[1]]])
}
