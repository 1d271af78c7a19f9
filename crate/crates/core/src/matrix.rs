//! Dense quaternionic matrices and the complex-embedding toolbox.
//!
//! Columns of a matrix span right submodules, so the induced map is right
//! linear: `A(vq) = (Av)q`. The embedding [`QMatrix::embed`] doubles sizes and
//! is a *-algebra homomorphism into complex matrices; the Hermitian
//! eigensolver runs Jacobi on that image and pulls the eigenvectors back.

use num_complex::Complex64;

use crate::cmatrix::{hermitian_eig_complex, CMatrix};
use crate::error::{Error, Result};
use crate::quat::{self, Quaternion};

/// Relative factor for the default rank/kernel tolerance:
/// a singular value counts as zero below `1e-9 * max(rows, cols)` times the
/// largest singular value.
pub const RANK_REL: f64 = 1e-9;

/// Relative Hermitian-validation tolerance (against the largest entry magnitude).
pub const HERMITIAN_REL: f64 = 1e-12;

/// Paired eigenvalues of the embedding closer than this (relative to the
/// spectral radius) are treated as one quaternionic eigenvalue group.
const PAIR_MERGE_REL: f64 = 1e-10;

/// Dense row-major quaternionic matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Quaternion>,
}

/// Result of the Hermitian quaternionic eigenproblem: real eigenvalues sorted
/// descending and a matrix of right eigenvectors with `V* V = I` and
/// `A V = V diag(lambdas)`.
#[derive(Debug, Clone)]
pub struct HermEig {
    pub lambdas: Vec<f64>,
    pub vectors: QMatrix,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![quat::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = quat::ONE;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Quaternion>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        QMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Real diagonal matrix.
    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = QMatrix::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Quaternion::real(v);
        }
        m
    }

    pub fn from_columns(cols: &[Vec<Quaternion>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, |col| col.len());
        assert!(cols.iter().all(|col| col.len() == r), "ragged columns");
        let mut m = QMatrix::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            for (i, &q) in col.iter().enumerate() {
                m[(i, j)] = q;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn column(&self, j: usize) -> Vec<Quaternion> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Quaternion>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn adjoint(&self) -> QMatrix {
        let mut out = QMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Quaternion]) -> Vec<Quaternion> {
        assert_eq!(self.cols, v.len(), "vector length must match columns");
        let mut out = vec![quat::ZERO; self.rows];
        for i in 0..self.rows {
            let mut acc = quat::ZERO;
            for k in 0..self.cols {
                acc += self[(i, k)] * v[k];
            }
            out[i] = acc;
        }
        out
    }

    pub fn add(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a += *b;
        }
        out
    }

    pub fn sub(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a -= *b;
        }
        out
    }

    pub fn scale(&self, s: f64) -> QMatrix {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = *a * s;
        }
        out
    }

    pub fn neg(&self) -> QMatrix {
        self.scale(-1.0)
    }

    /// Columns of `self` followed by columns of `other`.
    pub fn hstack(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.rows, other.rows, "row counts must agree");
        let mut cols = self.columns();
        cols.extend(other.columns());
        if cols.is_empty() {
            return QMatrix::zeros(self.rows, 0);
        }
        QMatrix::from_columns(&cols)
    }

    /// Rows of `self` stacked above rows of `other`.
    pub fn vstack(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.cols, "column counts must agree");
        let mut out = QMatrix::zeros(self.rows + other.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)];
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out[(self.rows + i, j)] = other[(i, j)];
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|q| q.abs()).fold(0.0, f64::max)
    }

    /// Largest singular value, via the Gram spectrum.
    pub fn spectral_norm(&self) -> Result<f64> {
        if self.rows == 0 || self.cols == 0 {
            return Ok(0.0);
        }
        let gram = self.adjoint().mul(self);
        let eig = gram.hermitian_eig()?;
        Ok(eig.lambdas.first().copied().unwrap_or(0.0).max(0.0).sqrt())
    }

    pub fn hermitian_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.sub(&self.adjoint()).max_abs()
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square() && self.hermitian_residual() <= HERMITIAN_REL * self.max_abs().max(f64::MIN_POSITIVE)
    }

    /// Averages with the adjoint; cleans rounding noise off Hermitian results.
    pub fn hermitize(&self) -> QMatrix {
        assert!(self.is_square());
        self.add(&self.adjoint()).scale(0.5)
    }

    /// Complex adjoint (symplectic) image: for `A = A1 + A2 j`, the `2m x 2n`
    /// block matrix `[[A1, A2], [-conj(A2), conj(A1)]]`. A *-algebra
    /// homomorphism: it preserves products, sums and adjoints.
    pub fn embed(&self) -> CMatrix {
        let (m, n) = (self.rows, self.cols);
        let mut out = CMatrix::zeros(2 * m, 2 * n);
        for i in 0..m {
            for j in 0..n {
                let (a, b) = self[(i, j)].complex_pair();
                out[(i, j)] = a;
                out[(i, n + j)] = b;
                out[(m + i, j)] = -b.conj();
                out[(m + i, n + j)] = a.conj();
            }
        }
        out
    }

    /// Default relative rank tolerance for this shape.
    pub fn default_tol(&self) -> f64 {
        RANK_REL * self.rows.max(self.cols) as f64
    }

    /// Eigendecomposition of a Hermitian quaternionic matrix.
    ///
    /// Runs Jacobi on the embedded `2n x 2n` complex Hermitian image, where
    /// every eigenvalue appears twice, then reassembles one quaternionic
    /// eigenvector per pair. Eigenvalues come back real and descending.
    pub fn hermitian_eig(&self) -> Result<HermEig> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(HermEig { lambdas: vec![], vectors: QMatrix::zeros(0, 0) });
        }
        let residual = self.hermitian_residual();
        let scale = self.max_abs();
        if residual > HERMITIAN_REL * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::NotHermitian { residual });
        }

        let eig = hermitian_eig_complex(&self.embed())?;
        // Descending order; the complex solver sorts ascending.
        let mut values: Vec<f64> = eig.values.iter().rev().copied().collect();
        let mut vectors: Vec<Vec<Complex64>> =
            (0..2 * n).rev().map(|j| eig.vectors.column(j)).collect();

        // Adjacent entries form the double copies of one quaternionic eigenvalue.
        let spectral = values.first().map_or(0.0, |v| v.abs()).max(values.last().map_or(0.0, |v| v.abs()));
        let merge_tol = PAIR_MERGE_REL * spectral;
        let pair_means: Vec<f64> = (0..n).map(|i| 0.5 * (values[2 * i] + values[2 * i + 1])).collect();

        let mut lambdas = Vec::with_capacity(n);
        let mut columns: Vec<Vec<Quaternion>> = Vec::with_capacity(n);
        let mut start = 0;
        while start < n {
            let mut end = start + 1;
            while end < n && (pair_means[end - 1] - pair_means[end]).abs() <= merge_tol {
                end += 1;
            }
            let group = start..end;
            let mean = pair_means[group.clone()].iter().sum::<f64>() / (end - start) as f64;
            let candidates: Vec<Vec<Quaternion>> = (2 * start..2 * end)
                .map(|idx| extract_quaternionic(&vectors[idx], n))
                .collect();
            let picked = pick_orthonormal(&candidates, end - start, &columns);
            for col in picked {
                lambdas.push(mean);
                columns.push(col);
            }
            start = end;
        }
        values.clear();
        vectors.clear();

        // Deterministic order inside an eigenvalue group: the column whose
        // first differing component has the larger magnitude goes first.
        let mut start = 0;
        while start < n {
            let mut end = start + 1;
            while end < n && lambdas[end] == lambdas[start] {
                end += 1;
            }
            columns[start..end].sort_by(|a, b| {
                for (qa, qb) in a.iter().zip(b.iter()) {
                    let (ma, mb) = (qa.abs(), qb.abs());
                    if ma != mb {
                        return mb.partial_cmp(&ma).unwrap();
                    }
                }
                std::cmp::Ordering::Equal
            });
            start = end;
        }

        Ok(HermEig { lambdas, vectors: QMatrix::from_columns(&columns) })
    }

    /// Solves `A X = B` by Gaussian elimination with partial pivoting on the
    /// entry magnitudes; scalar inverses go through quaternion division.
    pub fn solve(&self, b: &QMatrix) -> Result<QMatrix> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        if b.rows != self.rows {
            return Err(Error::DimensionMismatch {
                expected: (self.rows, b.cols),
                got: (b.rows, b.cols),
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut x = b.clone();
        let pivot_tol = 1e-13 * a.max_abs().max(f64::MIN_POSITIVE) * n as f64;

        for col in 0..n {
            let mut piv = col;
            let mut best = a[(col, col)].abs();
            for r in (col + 1)..n {
                let mag = a[(r, col)].abs();
                if mag > best {
                    best = mag;
                    piv = r;
                }
            }
            if best <= pivot_tol {
                return Err(Error::Singular);
            }
            if piv != col {
                a.swap_rows(col, piv);
                x.swap_rows(col, piv);
            }
            let inv = a[(col, col)].inv().map_err(|_| Error::Singular)?;
            for r in (col + 1)..n {
                let factor = a[(r, col)] * inv;
                if factor.is_zero() {
                    continue;
                }
                for c in col..n {
                    let sub = factor * a[(col, c)];
                    a[(r, c)] -= sub;
                }
                for c in 0..x.cols {
                    let sub = factor * x[(col, c)];
                    x[(r, c)] -= sub;
                }
            }
        }
        for col in (0..n).rev() {
            let inv = a[(col, col)].inv().map_err(|_| Error::Singular)?;
            for c in 0..x.cols {
                x[(col, c)] = inv * x[(col, c)];
            }
            for r in 0..col {
                let factor = a[(r, col)];
                if factor.is_zero() {
                    continue;
                }
                for c in 0..x.cols {
                    let sub = factor * x[(col, c)];
                    x[(r, c)] -= sub;
                }
            }
        }
        Ok(x)
    }

    /// Inverse via [`QMatrix::solve`] against the identity.
    pub fn inverse(&self) -> Result<QMatrix> {
        self.solve(&QMatrix::identity(self.rows))
    }

    /// Orthonormal basis of the (right) null space. A direction counts as null
    /// when its singular value is at most `rel_tol` times the largest one.
    ///
    /// Singular values come from the Gram spectrum, where forming `A* A`
    /// squares the noise floor to about `sqrt(eps)` of the scale. A first pass
    /// with a loosened cutoff collects candidate directions; restricting `A`
    /// to them and re-diagonalizing drops the floor far below any reasonable
    /// tolerance, and the final decision is made there.
    pub fn kernel(&self, rel_tol: f64) -> Result<QMatrix> {
        self.kernel_scaled(rel_tol, 0.0)
    }

    /// [`QMatrix::kernel`] with an explicit reference scale. A direction is
    /// null when its singular value is at most `rel_tol * max(scale, sigma_max)`.
    /// Passing the ambient scale matters when the matrix is a product that is
    /// zero in exact arithmetic: its own largest singular value is then pure
    /// rounding noise and must not serve as the reference.
    pub fn kernel_scaled(&self, rel_tol: f64, scale: f64) -> Result<QMatrix> {
        assert!(rel_tol > 0.0, "tolerance must be positive");
        let n = self.cols;
        if n == 0 {
            return Ok(QMatrix::zeros(0, 0));
        }
        if self.rows == 0 {
            return Ok(QMatrix::identity(n));
        }
        let gram = self.adjoint().mul(self).hermitize();
        let eig = gram.hermitian_eig()?;
        let sigma_max = eig.lambdas.first().copied().unwrap_or(0.0).max(0.0).sqrt();
        let reference = sigma_max.max(scale);
        let cutoff = rel_tol * reference;
        // sqrt of the Gram spectrum carries a sqrt(eps) noise floor; collect
        // candidates under a loosened cutoff first
        let loose = cutoff.max(1e-7 * sigma_max);
        let mut candidates = Vec::new();
        for (idx, &lambda) in eig.lambdas.iter().enumerate() {
            if lambda.max(0.0).sqrt() <= loose {
                candidates.push(eig.vectors.column(idx));
            }
        }
        if candidates.is_empty() {
            return Ok(QMatrix::zeros(n, 0));
        }
        // restricting to the candidates drops the noise floor of the second
        // Gram pass far below any sensible cutoff, so decide there
        let basis = QMatrix::from_columns(&candidates);
        let restricted = self.mul(&basis);
        let refined = restricted.adjoint().mul(&restricted).hermitize();
        let reig = refined.hermitian_eig()?;
        let mut coords = Vec::new();
        for (idx, &lambda) in reig.lambdas.iter().enumerate() {
            if lambda.max(0.0).sqrt() <= cutoff {
                coords.push(reig.vectors.column(idx));
            }
        }
        if coords.is_empty() {
            return Ok(QMatrix::zeros(n, 0));
        }
        Ok(basis.mul(&QMatrix::from_columns(&coords)))
    }

    /// Numerical rank under the same cutoff policy as [`QMatrix::kernel`].
    pub fn rank(&self, rel_tol: f64) -> Result<usize> {
        let null = self.kernel(rel_tol)?;
        Ok(self.cols - null.cols())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            let t = self[(a, j)];
            self[(a, j)] = self[(b, j)];
            self[(b, j)] = t;
        }
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Quaternion;
    fn index(&self, (i, j): (usize, usize)) -> &Quaternion {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Quaternion {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Euclidean quaternionic dot `u* v = sum conj(u_k) v_k`; right linear in `v`.
pub fn qdot(u: &[Quaternion], v: &[Quaternion]) -> Quaternion {
    assert_eq!(u.len(), v.len());
    let mut acc = quat::ZERO;
    for (a, b) in u.iter().zip(v.iter()) {
        acc += a.conj() * *b;
    }
    acc
}

pub fn vec_norm(v: &[Quaternion]) -> f64 {
    v.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
}

/// Modified Gram-Schmidt with a second projection pass. Columns whose residual
/// drops below `drop_tol` (relative to the largest input column) are dependent
/// on earlier ones and are dropped.
pub fn orthonormalize(columns: &[Vec<Quaternion>], drop_tol: f64) -> Vec<Vec<Quaternion>> {
    let scale = columns.iter().map(|c| vec_norm(c)).fold(0.0, f64::max);
    if scale == 0.0 {
        return Vec::new();
    }
    let mut basis: Vec<Vec<Quaternion>> = Vec::new();
    for col in columns {
        let mut v = col.clone();
        for _pass in 0..2 {
            for u in &basis {
                let coeff = qdot(u, &v);
                for (vk, uk) in v.iter_mut().zip(u.iter()) {
                    *vk -= *uk * coeff;
                }
            }
        }
        let norm = vec_norm(&v);
        if norm > drop_tol * scale {
            let inv = 1.0 / norm;
            for q in v.iter_mut() {
                *q = *q * inv;
            }
            basis.push(v);
        }
    }
    basis
}

/// Pulls a quaternionic vector back out of a complex eigenvector of the
/// embedding: the column `[v1; -conj(v2)]` corresponds to `v = v1 + v2 j`.
fn extract_quaternionic(z: &[Complex64], n: usize) -> Vec<Quaternion> {
    (0..n)
        .map(|k| Quaternion::from_complex_pair(z[k], -z[n + k].conj()))
        .collect()
}

/// Picks `want` orthonormal vectors out of `candidates`, greedily taking the
/// candidate with the largest residual after projecting away `fixed` and the
/// vectors already taken. The candidates jointly span the target eigenspace,
/// so the largest residual stays well away from zero.
fn pick_orthonormal(
    candidates: &[Vec<Quaternion>],
    want: usize,
    fixed: &[Vec<Quaternion>],
) -> Vec<Vec<Quaternion>> {
    let mut picked: Vec<Vec<Quaternion>> = Vec::with_capacity(want);
    let mut residuals: Vec<Vec<Quaternion>> = candidates.to_vec();
    for r in residuals.iter_mut() {
        for u in fixed {
            project_out(u, r);
        }
    }
    for _ in 0..want {
        let (best_idx, best_norm) = residuals
            .iter()
            .enumerate()
            .map(|(i, r)| (i, vec_norm(r)))
            .fold((usize::MAX, -1.0), |acc, (i, nrm)| if nrm > acc.1 { (i, nrm) } else { acc });
        assert!(best_norm > 0.0, "candidate set failed to span its eigenspace");
        let mut v = residuals[best_idx].clone();
        // second pass against everything accepted so far
        for u in fixed.iter().chain(picked.iter()) {
            project_out(u, &mut v);
        }
        let inv = 1.0 / vec_norm(&v);
        for q in v.iter_mut() {
            *q = *q * inv;
        }
        for r in residuals.iter_mut() {
            project_out(&v, r);
        }
        picked.push(v);
    }
    picked
}

fn project_out(u: &[Quaternion], v: &mut [Quaternion]) {
    let coeff = qdot(u, v);
    for (vk, uk) in v.iter_mut().zip(u.iter()) {
        *vk -= *uk * coeff;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quat::{ONE, ZERO};

    fn q(w: f64, x: f64, y: f64, z: f64) -> Quaternion {
        Quaternion::new(w, x, y, z)
    }

    fn single(value: Quaternion) -> QMatrix {
        QMatrix::from_rows(vec![vec![value]])
    }

    #[test]
    fn embed_of_j_is_symplectic_unit() {
        let m = single(Quaternion::j()).embed();
        assert_eq!(m[(0, 0)], Complex64::new(0.0, 0.0));
        assert_eq!(m[(0, 1)], Complex64::new(1.0, 0.0));
        assert_eq!(m[(1, 0)], Complex64::new(-1.0, 0.0));
        assert_eq!(m[(1, 1)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn embed_of_identity() {
        let m = QMatrix::identity(3).embed();
        let id = CMatrix::identity(6);
        assert!(m.sub(&id).frobenius_norm() == 0.0);
    }

    #[test]
    fn embed_is_multiplicative() {
        let a = single(Quaternion::i());
        let b = single(Quaternion::j());
        let lhs = a.mul(&b).embed();
        let rhs = a.embed().mul(&b.embed());
        assert!(lhs.sub(&rhs).frobenius_norm() < 1e-15);
    }

    #[test]
    fn hermitian_eig_diag() {
        let m = QMatrix::diag(&[1.0, -1.0]);
        let eig = m.hermitian_eig().unwrap();
        assert_eq!(eig.lambdas, vec![1.0, -1.0]);
        let resid = eig.vectors.adjoint().mul(&eig.vectors).sub(&QMatrix::identity(2));
        assert!(resid.frobenius_norm() < 1e-12);
    }

    #[test]
    fn hermitian_eig_scalar() {
        let eig = single(q(2.5, 0.0, 0.0, 0.0)).hermitian_eig().unwrap();
        assert_eq!(eig.lambdas, vec![2.5]);
        assert!((eig.vectors[(0, 0)].abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hermitian_eig_imaginary_offdiag() {
        // [[0, i], [-i, 0]] squares to the identity, trace zero: spectrum {1, -1}.
        let m = QMatrix::from_rows(vec![
            vec![ZERO, Quaternion::i()],
            vec![-Quaternion::i(), ZERO],
        ]);
        let eig = m.hermitian_eig().unwrap();
        assert!((eig.lambdas[0] - 1.0).abs() < 1e-12);
        assert!((eig.lambdas[1] + 1.0).abs() < 1e-12);
        reconstruction_check(&m, &eig, 1e-12);
    }

    #[test]
    fn hermitian_eig_j_offdiag() {
        let m = QMatrix::from_rows(vec![
            vec![ZERO, Quaternion::j()],
            vec![-Quaternion::j(), ZERO],
        ]);
        let eig = m.hermitian_eig().unwrap();
        assert!((eig.lambdas[0] - 1.0).abs() < 1e-12);
        assert!((eig.lambdas[1] + 1.0).abs() < 1e-12);
        reconstruction_check(&m, &eig, 1e-12);
    }

    #[test]
    fn hermitian_eig_rejects_non_hermitian() {
        let m = single(Quaternion::j());
        assert!(matches!(m.hermitian_eig(), Err(Error::NotHermitian { .. })));
    }

    fn reconstruction_check(m: &QMatrix, eig: &HermEig, tol: f64) {
        let n = m.rows();
        let lam = QMatrix::diag(&eig.lambdas);
        let rebuilt = eig.vectors.mul(&lam).mul(&eig.vectors.adjoint());
        assert!(m.sub(&rebuilt).frobenius_norm() < tol, "reconstruction failed");
        let gram = eig.vectors.adjoint().mul(&eig.vectors);
        assert!(gram.sub(&QMatrix::identity(n)).frobenius_norm() < tol);
    }

    #[test]
    fn solve_identity() {
        let b = QMatrix::from_rows(vec![
            vec![q(1.0, 2.0, 3.0, 4.0)],
            vec![q(-1.0, 0.5, 0.0, 2.0)],
        ]);
        let x = QMatrix::identity(2).solve(&b).unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn solve_scalar_j_equation() {
        // j x = k has the solution x = -i: j(-i) = -(ji) = k.
        let a = single(Quaternion::j());
        let b = single(Quaternion::k());
        let x = a.solve(&b).unwrap();
        assert!((x[(0, 0)] - -Quaternion::i()).abs() < 1e-15);
    }

    #[test]
    fn solve_diagonal() {
        let a = QMatrix::diag(&[2.0, 4.0]);
        let x = a.solve(&QMatrix::identity(2)).unwrap();
        assert!((x[(0, 0)] - q(0.5, 0.0, 0.0, 0.0)).abs() < 1e-15);
        assert!((x[(1, 1)] - q(0.25, 0.0, 0.0, 0.0)).abs() < 1e-15);
    }

    #[test]
    fn solve_singular_fails() {
        let a = QMatrix::from_rows(vec![vec![ONE, ONE], vec![ONE, ONE]]);
        assert_eq!(a.solve(&QMatrix::identity(2)), Err(Error::Singular));
    }

    #[test]
    fn kernel_of_row() {
        let a = QMatrix::from_rows(vec![vec![ONE, ZERO]]);
        let k = a.kernel(a.default_tol()).unwrap();
        assert_eq!(k.cols(), 1);
        assert!(k[(0, 0)].abs() < 1e-12);
        assert!((k[(1, 0)].abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kernel_of_zero_matrix() {
        let a = QMatrix::zeros(2, 2);
        let k = a.kernel(a.default_tol()).unwrap();
        assert_eq!(k.cols(), 2);
    }

    #[test]
    fn kernel_with_j_entry() {
        // [1, j] annihilates (-j, 1)/sqrt(2): 1*(-j) + j*1 = 0.
        let a = QMatrix::from_rows(vec![vec![ONE, Quaternion::j()]]);
        let k = a.kernel(a.default_tol()).unwrap();
        assert_eq!(k.cols(), 1);
        let residual = a.mul(&k);
        assert!(residual.max_abs() < 1e-12);
        let gram = k.adjoint().mul(&k);
        assert!((gram[(0, 0)] - ONE).abs() < 1e-12);
    }

    #[test]
    fn rank_cases() {
        let id = QMatrix::identity(4);
        assert_eq!(id.rank(id.default_tol()).unwrap(), 4);
        let z = QMatrix::zeros(3, 3);
        assert_eq!(z.rank(z.default_tol()).unwrap(), 0);
        let col = QMatrix::from_rows(vec![vec![ONE], vec![Quaternion::j()]]);
        assert_eq!(col.rank(col.default_tol()).unwrap(), 1);
    }

    #[test]
    fn orthonormalize_drops_dependents() {
        let c1 = vec![ONE, ZERO];
        let c2 = vec![ONE * 2.0, ZERO];
        let c3 = vec![ONE, Quaternion::i()];
        let basis = orthonormalize(&[c1, c2, c3], 1e-10);
        assert_eq!(basis.len(), 2);
        for u in &basis {
            assert!((vec_norm(u) - 1.0).abs() < 1e-12);
        }
        assert!(qdot(&basis[0], &basis[1]).abs() < 1e-12);
    }
}
