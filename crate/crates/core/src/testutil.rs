//! Shared fixtures and generators for the unit tests.

use num_complex::Complex64;
use rand::Rng;

use crate::channel::GaussianChannel;
use crate::mat::{CMatrix, HermitianMatrix, RealMatrix};
use crate::symplectic::{CoordOrder, CovarianceMatrix, PassiveUnitary};

/// Covariance of the squeezed two-mode environment from the bundled
/// example: `(3 + sqrt13)/2` times the pattern `{5, 5, 2, 2, ±3}`.
pub fn squeezed_env_covariance() -> CovarianceMatrix {
    let k = (3.0 + 13.0f64.sqrt()) / 2.0;
    let gamma = RealMatrix::from_rows(&[
        vec![5.0 * k, 0.0, 3.0 * k, 0.0],
        vec![0.0, 5.0 * k, 0.0, -3.0 * k],
        vec![3.0 * k, 0.0, 2.0 * k, 0.0],
        vec![0.0, -3.0 * k, 0.0, 2.0 * k],
    ])
    .unwrap();
    CovarianceMatrix::new(gamma, CoordOrder::ModeMajor).unwrap()
}

/// The two-beamsplitter coupling matrix of the bundled example, acting on
/// (env1, env2, sys1, sys2) in mode-major order. Every mode block is a real
/// multiple of the 2x2 identity.
pub fn squeezed_env_example_s() -> RealMatrix {
    let c = (1.0f64 / 3.0).sqrt();
    let r = (2.0f64 / 3.0).sqrt();
    let pattern = [
        [-r, 0.0, c, 0.0],
        [0.0, -c, 0.0, r],
        [c, 0.0, r, 0.0],
        [0.0, r, 0.0, c],
    ];
    RealMatrix::from_fn(8, 8, |i, j| {
        if i % 2 == j % 2 {
            pattern[i / 2][j / 2]
        } else {
            0.0
        }
    })
}

/// `X = sqrt(1/3) diag(sqrt2, sqrt2, 1, 1)` in mode-major order.
pub fn squeezed_env_example_x() -> RealMatrix {
    let c = (1.0f64 / 3.0).sqrt();
    let s2 = 2.0f64.sqrt();
    RealMatrix::diagonal(&[c * s2, c * s2, c, c])
}

/// `Y = (3 + sqrt13)/6` times the pattern `{5, 5, 4, 4, ±3 sqrt2}`.
pub fn squeezed_env_example_y() -> RealMatrix {
    let k = (3.0 + 13.0f64.sqrt()) / 6.0;
    let s2 = 2.0f64.sqrt();
    RealMatrix::from_rows(&[
        vec![5.0 * k, 0.0, 3.0 * s2 * k, 0.0],
        vec![0.0, 5.0 * k, 0.0, -3.0 * s2 * k],
        vec![3.0 * s2 * k, 0.0, 4.0 * k, 0.0],
        vec![0.0, -3.0 * s2 * k, 0.0, 4.0 * k],
    ])
    .unwrap()
}

/// The channel of the bundled example, at mode-major coordinates.
pub fn squeezed_env_example_channel() -> GaussianChannel {
    GaussianChannel::new(
        2,
        squeezed_env_example_x(),
        squeezed_env_example_y(),
        CoordOrder::ModeMajor,
    )
    .unwrap()
}

/// Haar-ish random unitary via Gram-Schmidt of a complex Gaussian matrix.
pub fn random_unitary(m: usize, rng: &mut impl Rng) -> PassiveUnitary {
    loop {
        let z = CMatrix::from_fn(m, m, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        if let Ok(u) = orthonormalize(&z) {
            return PassiveUnitary::new(u).unwrap();
        }
    }
}

fn orthonormalize(z: &CMatrix) -> Result<CMatrix, ()> {
    let n = z.rows();
    let mut q = CMatrix::zeros(n, n);
    for k in 0..n {
        let mut col: Vec<Complex64> = (0..n).map(|i| z.get(i, k)).collect();
        for _ in 0..2 {
            for prev in 0..k {
                let mut proj = Complex64::new(0.0, 0.0);
                for i in 0..n {
                    proj += q.get(i, prev).conj() * col[i];
                }
                for i in 0..n {
                    col[i] -= proj * q.get(i, prev);
                }
            }
        }
        let norm: f64 = col.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-6 {
            return Err(());
        }
        for i in 0..n {
            q.set(i, k, col[i] / norm);
        }
    }
    Ok(q)
}

/// Random positive-definite single-particle Hamiltonian on `m` modes.
pub fn random_positive_hamiltonian(m: usize, rng: &mut impl Rng) -> HermitianMatrix {
    let w = CMatrix::from_fn(m, m, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    let base = HermitianMatrix::symmetrize(w.adjoint().matmul(&w));
    base.add(&HermitianMatrix::identity(m).scale(0.1))
}

/// Random Hermitian matrix with entries of order one.
pub fn random_hermitian(m: usize, rng: &mut impl Rng) -> HermitianMatrix {
    let w = CMatrix::from_fn(m, m, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    HermitianMatrix::symmetrize(w)
}

/// Random symmetric real matrix with entries of order `scale`.
pub fn random_symmetric(dim: usize, scale: f64, rng: &mut impl Rng) -> RealMatrix {
    RealMatrix::from_fn(dim, dim, |_, _| rng.gen_range(-scale..scale)).symmetrized()
}
