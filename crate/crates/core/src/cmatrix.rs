//! Dense complex matrices: the internal carrier of the complex embedding.
//!
//! Only what the quaternionic layer needs lives here, most importantly a
//! cyclic Jacobi eigensolver for complex Hermitian matrices.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a += *b;
        }
        out
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a -= *b;
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j {
                    acc += self[(i, j)].norm_sqr();
                }
            }
        }
        acc.sqrt()
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Eigenvalues (ascending) and an accumulated unitary of eigenvectors,
/// computed by cyclic Jacobi sweeps.
pub struct ComplexEig {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

/// Off-diagonal Frobenius threshold, relative to the Frobenius norm of the input.
pub const JACOBI_OFF_REL: f64 = 1e-13;
/// Sweep budget before the solver reports non-convergence.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi diagonalization of a complex Hermitian matrix.
///
/// The caller guarantees Hermitian input; the strict lower triangle is
/// ignored and the diagonal is taken real. Stops once the off-diagonal
/// Frobenius norm drops below `JACOBI_OFF_REL` times the input norm.
pub fn hermitian_eig_complex(a: &CMatrix) -> Result<ComplexEig> {
    if a.rows != a.cols {
        return Err(Error::NotSquare { rows: a.rows, cols: a.cols });
    }
    let n = a.rows;
    if n == 0 {
        return Ok(ComplexEig { values: vec![], vectors: CMatrix::zeros(0, 0) });
    }
    let mut m = a.clone();
    // Enforce exact Hermitian structure so rounding in the input cannot bias sweeps.
    for i in 0..n {
        m[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            m[(i, j)] = avg;
            m[(j, i)] = avg.conj();
        }
    }

    let threshold = JACOBI_OFF_REL * a.frobenius_norm();
    let mut v = CMatrix::identity(n);

    for _sweep in 0..JACOBI_MAX_SWEEPS {
        if m.off_diagonal_norm() <= threshold {
            let values: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
            return Ok(sort_eig(values, v));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                let phase = apq / mag;
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                // Rotation angle for the real 2x2 [[app, mag], [mag, aqq]].
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let sigma = t * c;
                let s = phase * sigma; // complex sine carries the pivot phase

                // A <- G* A G with G = I except G[p][p]=c, G[p][q]=s, G[q][p]=-conj(s), G[q][q]=c.
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = m[(k, p)];
                    let akq = m[(k, q)];
                    let new_kp = akp * c - akq * s.conj();
                    let new_kq = akp * s + akq * c;
                    m[(k, p)] = new_kp;
                    m[(p, k)] = new_kp.conj();
                    m[(k, q)] = new_kq;
                    m[(q, k)] = new_kq.conj();
                }
                let cross = 2.0 * c * sigma * mag;
                m[(p, p)] = Complex64::new(c * c * app - cross + sigma * sigma * aqq, 0.0);
                m[(q, q)] = Complex64::new(sigma * sigma * app + cross + c * c * aqq, 0.0);
                m[(p, q)] = Complex64::new(0.0, 0.0);
                m[(q, p)] = Complex64::new(0.0, 0.0);

                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c - vkq * s.conj();
                    v[(k, q)] = vkp * s + vkq * c;
                }
            }
        }
    }
    Err(Error::NoConvergence { iterations: JACOBI_MAX_SWEEPS })
}

fn sort_eig(values: Vec<f64>, vectors: CMatrix) -> ComplexEig {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).unwrap());
    let mut sorted_vals = Vec::with_capacity(n);
    let mut sorted_vecs = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        sorted_vals.push(values[src]);
        for r in 0..n {
            sorted_vecs[(r, dst)] = vectors[(r, src)];
        }
    }
    ComplexEig { values: sorted_vals, vectors: sorted_vecs }
}
