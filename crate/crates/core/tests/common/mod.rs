// Seeded generators shared by the integration and acceptance suites.
#![allow(dead_code)]

use qkrein::matrix::orthonormalize;
use qkrein::{InnerProductSpace, QMatrix, Quaternion, Subspace};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rand_quat(rng: &mut ChaCha8Rng) -> Quaternion {
    Quaternion::new(
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
    )
}

pub fn rand_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<Quaternion> {
    (0..n).map(|_| rand_quat(rng)).collect()
}

pub fn rand_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> QMatrix {
    let mut m = QMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = rand_quat(rng);
        }
    }
    m
}

pub fn rand_hermitian(rng: &mut ChaCha8Rng, n: usize) -> QMatrix {
    rand_matrix(rng, n, n).hermitize()
}

/// Random matrix with orthonormal columns spanning all of `H^n`.
pub fn rand_unitary(rng: &mut ChaCha8Rng, n: usize) -> QMatrix {
    loop {
        let candidate = rand_matrix(rng, n, n);
        let cols = orthonormalize(&candidate.columns(), 1e-6);
        if cols.len() == n {
            return QMatrix::from_columns(&cols);
        }
    }
}

/// Gram matrix with prescribed eigenvalues in a random orthonormal frame.
pub fn gram_with_spectrum(rng: &mut ChaCha8Rng, spectrum: &[f64]) -> QMatrix {
    let v = rand_unitary(rng, spectrum.len());
    v.mul(&QMatrix::diag(spectrum)).mul(&v.adjoint()).hermitize()
}

/// Nondegenerate space: eigenvalue magnitudes in `[0.3, 2]`, random signs,
/// with at least one positive and one negative direction when `n >= 2`.
pub fn rand_nondegenerate_space(rng: &mut ChaCha8Rng, n: usize) -> InnerProductSpace {
    let mut spectrum: Vec<f64> = (0..n)
        .map(|_| {
            let mag = rng.gen_range(0.3..2.0);
            if rng.gen_bool(0.5) {
                mag
            } else {
                -mag
            }
        })
        .collect();
    if n >= 2 {
        if spectrum.iter().all(|l| *l > 0.0) {
            spectrum[n - 1] = -spectrum[n - 1];
        }
        if spectrum.iter().all(|l| *l < 0.0) {
            spectrum[0] = -spectrum[0];
        }
    }
    InnerProductSpace::new(gram_with_spectrum(rng, &spectrum)).unwrap()
}

/// Space with `zeros` isotropic directions; the rest as in the
/// nondegenerate generator.
pub fn rand_degenerate_space(rng: &mut ChaCha8Rng, n: usize, zeros: usize) -> InnerProductSpace {
    assert!(zeros <= n);
    let mut spectrum: Vec<f64> = (0..n - zeros)
        .map(|_| {
            let mag = rng.gen_range(0.3..2.0);
            if rng.gen_bool(0.5) {
                mag
            } else {
                -mag
            }
        })
        .collect();
    spectrum.extend(std::iter::repeat(0.0).take(zeros));
    InnerProductSpace::new(gram_with_spectrum(rng, &spectrum)).unwrap()
}

pub fn rand_subspace(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Subspace {
    Subspace::span(&rand_matrix(rng, n, k))
}
