//! Projections checked against closed forms and two solvers that share no
//! code with iterative proportional fitting.

use hierinfo::hierarchy::{
    binary_entropy, hierarchy_spectrum, ipf_project, kl_divergence, marginalize, DEFAULT_MAX_ITER, DEFAULT_TOL,
};
use hierinfo::measurement::{born_statistics, computational_basis_projectors};
use hierinfo::oracle::pairwise_max_entropy_3bit;
use hierinfo::quantum_state::ghz_family;
use hierinfo::random::random_distribution;
use hierinfo::JointDistribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn bits(x: usize) -> [f64; 3] {
    [((x >> 2) & 1) as f64, ((x >> 1) & 1) as f64, (x & 1) as f64]
}

/// Pairwise sufficient statistics `(x0, x1, x2, x0x1, x0x2, x1x2)`.
fn features(x: usize) -> [f64; 6] {
    let b = bits(x);
    [b[0], b[1], b[2], b[0] * b[1], b[0] * b[2], b[1] * b[2]]
}

fn gibbs(theta: &[f64; 6]) -> Vec<f64> {
    let w: Vec<f64> = (0..8).map(|x| features(x).iter().zip(theta).map(|(f, t)| f * t).sum::<f64>().exp()).collect();
    let z: f64 = w.iter().sum();
    w.into_iter().map(|v| v / z).collect()
}

fn solve6(mut a: [[f64; 6]; 6], mut b: [f64; 6]) -> [f64; 6] {
    for col in 0..6 {
        let piv = (col..6).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..6 {
            let f = a[row][col] / a[col][col];
            let pivot = a[col];
            for (v, p) in a[row][col..].iter_mut().zip(&pivot[col..]) {
                *v -= f * p;
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 6];
    for row in (0..6).rev() {
        let s: f64 = (row + 1..6).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x
}

/// Damped Newton on the convex dual `log Z(θ) − θ·μ`; valid when the
/// projection is strictly positive.
fn dual_newton(p: &JointDistribution<f64>) -> Vec<f64> {
    let mu: Vec<f64> = (0..6).map(|j| (0..8).map(|x| p.probs()[x] * features(x)[j]).sum()).collect();
    let objective = |t: &[f64; 6]| {
        let z: f64 = (0..8).map(|x| features(x).iter().zip(t).map(|(f, v)| f * v).sum::<f64>().exp()).sum();
        z.ln() - t.iter().zip(&mu).map(|(a, b)| a * b).sum::<f64>()
    };
    let mut theta = [0.0; 6];
    for _ in 0..200 {
        let q = gibbs(&theta);
        let mean: Vec<f64> = (0..6).map(|j| (0..8).map(|x| q[x] * features(x)[j]).sum()).collect();
        let grad: [f64; 6] = std::array::from_fn(|j| mean[j] - mu[j]);
        if grad.iter().map(|g| g.abs()).fold(0.0, f64::max) < 1e-14 {
            break;
        }
        let mut hess = [[0.0; 6]; 6];
        for (i, row) in hess.iter_mut().enumerate() {
            for (j, h) in row.iter_mut().enumerate() {
                *h = (0..8).map(|x| q[x] * features(x)[i] * features(x)[j]).sum::<f64>() - mean[i] * mean[j];
            }
        }
        let step = solve6(hess, grad);
        let f0 = objective(&theta);
        let mut t = 1.0;
        // inside the quadratic region full steps converge; objective
        // differences there are below rounding
        if grad.iter().map(|g| g.abs()).fold(0.0, f64::max) < 1e-6 {
            theta = std::array::from_fn(|j| theta[j] - step[j]);
            continue;
        }
        loop {
            let cand: [f64; 6] = std::array::from_fn(|j| theta[j] - t * step[j]);
            if objective(&cand) <= f0 || t < 1e-12 {
                theta = cand;
                break;
            }
            t *= 0.5;
        }
    }
    gibbs(&theta)
}

fn tv(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

#[test]
fn ghz_family_lies_in_the_pairwise_family() {
    let comp = vec![computational_basis_projectors(); 3];
    for alpha in [0.05f64, 0.2, 0.5, 0.8, 0.95] {
        let p = born_statistics(&ghz_family(3, alpha).unwrap(), &comp).unwrap();
        // symmetric model: field h on every bit, pair weight J = −h
        let h = ((1.0 - alpha) / (1.0 + 3.0 * alpha)).ln();
        let theta = [h, h, h, -h, -h, -h];
        assert!(tv(&gibbs(&theta), p.probs()) < 1e-15, "alpha {alpha}");
        let r = ipf_project(&p, 2, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert!(tv(r.distribution.probs(), p.probs()) < 1e-12, "alpha {alpha}");
    }
}

#[test]
fn pure_w_projection_matches_oracle() {
    let t = 1.0 / 3.0;
    let p = JointDistribution::binary(3, vec![0.0, t, t, 0.0, t, 0.0, 0.0, 0.0]).unwrap();
    let r = ipf_project(&p, 2, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
    let oracle = pairwise_max_entropy_3bit(&p).unwrap();
    assert!(tv(r.distribution.probs(), oracle.probs()) < 1e-12);
    for pair in [[0, 1], [0, 2], [1, 2]] {
        let a = marginalize(&p, &pair).unwrap();
        let b = marginalize(&r.distribution, &pair).unwrap();
        assert!(tv(a.probs(), b.probs()) < 1e-12);
    }
    // the pairwise marginals already pin the table down, so nothing is left for order 3
    assert_eq!(kl_divergence(&p, &r.distribution).unwrap().finite().map(|d| d.abs() < 1e-12), Some(true));
}

#[test]
fn three_routes_agree_on_random_distributions() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..30 {
        let zeros = if i < 4 { 1 + i % 2 } else { 0 };
        let p = random_distribution(&mut rng, 3, zeros);
        let ipf = ipf_project(&p, 2, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        let line = pairwise_max_entropy_3bit(&p).unwrap();
        let newton = dual_newton(&p);
        assert!(tv(ipf.distribution.probs(), line.probs()) < 1e-9, "case {i}");
        assert!(tv(ipf.distribution.probs(), &newton) < 1e-9, "case {i}");
    }
}

#[test]
fn closed_form_spectra() {
    let mut ghz = vec![0.0; 8];
    ghz[0] = 0.5;
    ghz[7] = 0.5;
    let s = hierarchy_spectrum(&JointDistribution::binary(3, ghz).unwrap(), DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
    assert!(s.level(1).abs() < 1e-12 && (s.level(2) - 2.0).abs() < 1e-12 && s.level(3).abs() < 1e-12);

    let t = 1.0 / 3.0;
    let w = JointDistribution::binary(3, vec![0.0, t, t, 0.0, t, 0.0, 0.0, 0.0]).unwrap();
    let s = hierarchy_spectrum(&w, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
    let hb = binary_entropy(t);
    assert!((s.level(1) - (3.0 - 3.0 * hb)).abs() < 1e-12);
    assert!((s.level(2) + s.level(3) - (3.0 * hb - 3f64.log2())).abs() < 1e-12);
    assert!((s.level(1) - 0.245112497837).abs() < 1e-11);
    assert!((s.level(2) + s.level(3) - 1.169925001442).abs() < 1e-11);
}
