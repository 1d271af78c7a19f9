//! Krein-space checks, the quaternionic Stein equation, and the scaffold that
//! verifies ortho-complementation of a uniformly positive subspace.
//!
//! A Stein problem `(A, C, N)` induces the metric space
//! `K = X (+) Y (+) U` with Gram `diag(P, I, -I)`, where `P` solves
//! `P - A* P A = C* C - N* N`. The range of the stacked matrix `[A; C; N]`
//! is then a uniformly positive subspace whose restricted Gram is `P` itself,
//! and the whole chain of subspace criteria can be run against it.

use serde::Serialize;

use crate::cmatrix::CMatrix;
use crate::error::{Error, Result};
use crate::matrix::QMatrix;
use crate::norms::NormQ;
use crate::quat::Quaternion;
use crate::space::{FundamentalDecomposition, InnerProductSpace, Signature, DEGENERACY_REL};
use crate::subspace::{
    classify_subspace, is_ortho_complemented, orthogonal_companion, restricted_gram,
    OrthoCertificate, Subspace, SubspaceClass, SubspaceReport,
};

/// Default truncation tolerance of the Stein series.
pub const STEIN_TOL: f64 = 1e-12;
/// Default term budget of the Stein series.
pub const STEIN_MAX_TERMS: usize = 1_000_000;
/// The series requires every eigenvalue of the embedded `A` strictly inside
/// the unit disk, with this margin.
pub const STABILITY_MARGIN: f64 = 1e-10;
/// Relative tolerance on the Stein identity `S* J~ S = P`.
pub const STEIN_IDENTITY_REL: f64 = 1e-8;

/// Krein verdict for an inner product space.
#[derive(Debug, Clone)]
pub struct KreinReport {
    pub is_krein: bool,
    pub signature: Signature,
    /// Dimension of the negative component.
    pub pontryagin_index: usize,
    /// Smallest Gram eigenvalue magnitude: the invertibility margin.
    pub gram_min_eigen_magnitude: f64,
    /// The `|M|` norm; present exactly when the space is Krein.
    pub natural_norm: Option<NormQ>,
}

/// Data of the Stein equation `P - A* P A = C* C - N* N`.
#[derive(Debug, Clone)]
pub struct SteinProblem {
    a: QMatrix,
    c: QMatrix,
    n: QMatrix,
}

/// The assembled metric space for a solved Stein problem.
#[derive(Debug, Clone)]
pub struct Scaffold {
    pub k_dim: usize,
    pub jtilde: QMatrix,
    pub k0: Subspace,
    /// Raw stacked `[A; C; N]`, kept for the Stein identity check.
    pub stacked: QMatrix,
    /// The Stein solution used as the positive block of the metric.
    pub p: QMatrix,
    pub state_dim: usize,
}

/// Outcome of the four-stage scaffold verification.
#[derive(Debug, Clone, Serialize)]
pub struct SofsofReport {
    pub stein_identity_residual: f64,
    pub stein_identity_ok: bool,
    pub classification: SubspaceReport,
    pub uniformly_positive: bool,
    pub ortho: OrthoCertificate,
    pub companion_dim: usize,
    pub companion_spectrum: Vec<f64>,
    pub companion_is_krein: bool,
    pub companion_pontryagin_index: usize,
    pub all_passed: bool,
}

/// Checks whether the space is a Krein space: the Gram matrix must have no
/// eigenvalue inside the degeneracy band. Reports the signature, the
/// Pontryagin index and the natural `|M|` norm.
pub fn verify_krein(space: &InnerProductSpace) -> Result<KreinReport> {
    let decomposition = space.fundamental_decomposition();
    let is_krein = decomposition.signature.zero == 0;
    let natural_norm = if is_krein && space.dim() > 0 {
        Some(NormQ::new(space.abs_gram())?)
    } else {
        None
    };
    Ok(KreinReport {
        is_krein,
        signature: decomposition.signature,
        pontryagin_index: decomposition.signature.minus,
        gram_min_eigen_magnitude: space.invertibility_margin(),
        natural_norm,
    })
}

/// Equivalence constants between the J-norms of two fundamental
/// decompositions of a Krein space:
/// `c_low |v|_J1 <= |v|_J2 <= c_high |v|_J1`, read off the extreme
/// generalized eigenvalues of the two J-Gram matrices.
pub fn natural_norm_equivalence(
    space: &InnerProductSpace,
    d1: &FundamentalDecomposition,
    d2: &FundamentalDecomposition,
) -> Result<(f64, f64)> {
    if space.is_degenerate() {
        return Err(Error::NotKrein);
    }
    let h1 = d1.j_gram(space);
    let h2 = d2.j_gram(space);
    let eig1 = h1.hermitian_eig()?;
    let inv_sqrt: Vec<f64> =
        eig1.lambdas.iter().map(|l| 1.0 / l.max(f64::MIN_POSITIVE).sqrt()).collect();
    let v = &eig1.vectors;
    let scaler = v.mul(&QMatrix::diag(&inv_sqrt)).mul(&v.adjoint());
    let reduced = scaler.mul(&h2).mul(&scaler).hermitize();
    let eig = reduced.hermitian_eig()?;
    let hi = eig.lambdas.first().copied().unwrap_or(1.0).max(0.0);
    let lo = eig.lambdas.last().copied().unwrap_or(1.0).max(0.0);
    Ok((lo.sqrt(), hi.sqrt()))
}

/// Produces a non-spectral fundamental decomposition by a hyperbolic boost of
/// parameter `t` mixing one positive and one negative direction. The blocks
/// of `d` are first orthonormalized under the form, so any valid
/// decomposition of a Krein space can be rotated.
pub fn hyperbolic_rotation(
    space: &InnerProductSpace,
    d: &FundamentalDecomposition,
    t: f64,
) -> Result<FundamentalDecomposition> {
    if space.is_degenerate() {
        return Err(Error::NotKrein);
    }
    if d.signature.plus == 0 || d.signature.minus == 0 {
        return Err(Error::RotationUnavailable);
    }
    let mut plus = form_orthonormal_columns(space, &d.plus, 1.0)?;
    let mut minus = form_orthonormal_columns(space, &d.minus, -1.0)?;

    let (ch, sh) = (t.cosh(), t.sinh());
    let e: Vec<Quaternion> = plus[0].clone();
    let f: Vec<Quaternion> = minus[0].clone();
    for k in 0..space.dim() {
        plus[0][k] = e[k] * ch + f[k] * sh;
        minus[0][k] = e[k] * sh + f[k] * ch;
    }
    let plus_sub = Subspace::span(&QMatrix::from_columns(&plus));
    let minus_sub = Subspace::span(&QMatrix::from_columns(&minus));
    FundamentalDecomposition::from_bases(space, &plus_sub, &minus_sub)
}

/// Basis of the same span whose restricted Gram is `sign * I`.
fn form_orthonormal_columns(
    space: &InnerProductSpace,
    sub: &Subspace,
    sign: f64,
) -> Result<Vec<Vec<Quaternion>>> {
    let gram = restricted_gram(space, sub).scale(sign);
    let eig = gram.hermitian_eig()?;
    let mut columns = Vec::with_capacity(sub.dim());
    for (idx, &l) in eig.lambdas.iter().enumerate() {
        if l <= 0.0 {
            return Err(Error::InvalidDecomposition(
                "component is not strictly definite".into(),
            ));
        }
        let coords = eig.vectors.column(idx);
        let scaled: Vec<Quaternion> = coords.iter().map(|q| *q * (1.0 / l.sqrt())).collect();
        columns.push(sub.basis().mul_vec(&scaled));
    }
    Ok(columns)
}

impl SteinProblem {
    /// `a` is `x by x`, `c` maps states to the output space (`y by x`) and
    /// `n` to the defect space (`u by x`).
    pub fn new(a: QMatrix, c: QMatrix, n: QMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
        }
        let x = a.rows();
        if c.cols() != x {
            return Err(Error::DimensionMismatch { expected: (c.rows(), x), got: (c.rows(), c.cols()) });
        }
        if n.cols() != x {
            return Err(Error::DimensionMismatch { expected: (n.rows(), x), got: (n.rows(), n.cols()) });
        }
        Ok(SteinProblem { a, c, n })
    }

    pub fn state_dim(&self) -> usize {
        self.a.rows()
    }

    pub fn output_dim(&self) -> usize {
        self.c.rows()
    }

    pub fn defect_dim(&self) -> usize {
        self.n.rows()
    }

    pub fn a(&self) -> &QMatrix {
        &self.a
    }

    /// Right-hand side `Q = C* C - N* N`.
    pub fn q(&self) -> QMatrix {
        let cc = self.c.adjoint().mul(&self.c);
        let nn = self.n.adjoint().mul(&self.n);
        cc.sub(&nn).hermitize()
    }

    /// The stacked matrix `[A; C; N]` whose range is the scaffold subspace.
    pub fn stacked(&self) -> QMatrix {
        self.a.vstack(&self.c).vstack(&self.n)
    }

    /// Upper estimate of the spectral radius of the embedded `A`.
    pub fn spectral_radius_bound(&self) -> f64 {
        spectral_radius_estimate(&self.a.embed())
    }
}

/// `|B^(2^k)|_F^(1/2^k)` by normalized repeated squaring; an upper estimate
/// of the spectral radius that converges from above.
fn spectral_radius_estimate(b: &CMatrix) -> f64 {
    let norm0 = b.frobenius_norm();
    if norm0 == 0.0 {
        return 0.0;
    }
    let mut cur = scale_cmatrix(b, 1.0 / norm0);
    let mut log_norm = norm0.ln();
    let squarings = 32;
    for _ in 0..squarings {
        let sq = cur.mul(&cur);
        let s = sq.frobenius_norm();
        if s == 0.0 {
            return 0.0;
        }
        cur = scale_cmatrix(&sq, 1.0 / s);
        log_norm = 2.0 * log_norm + s.ln();
    }
    (log_norm / 2f64.powi(squarings)).exp()
}

fn scale_cmatrix(m: &CMatrix, s: f64) -> CMatrix {
    let mut out = CMatrix::zeros(m.rows, m.cols);
    for i in 0..m.rows {
        for j in 0..m.cols {
            out[(i, j)] = m[(i, j)] * s;
        }
    }
    out
}

/// Sums the series `P = sum_k A*^k Q A^k`, truncating when the increment
/// drops below `tol * (1 + |partial sum|)`. Requires the spectral radius of
/// `A` strictly below one.
pub fn stein_solve_series(
    problem: &SteinProblem,
    tol: f64,
    max_terms: usize,
) -> Result<QMatrix> {
    assert!(tol > 0.0);
    let rho = problem.spectral_radius_bound();
    if rho >= 1.0 - STABILITY_MARGIN {
        return Err(Error::Unstable { spectral_radius: rho });
    }
    let a = problem.a();
    let a_adj = a.adjoint();
    let q = problem.q();
    let mut sum = q.clone();
    let mut term = q;
    for _ in 0..max_terms {
        term = a_adj.mul(&term).mul(a);
        sum = sum.add(&term);
        if term.frobenius_norm() <= tol * (1.0 + sum.frobenius_norm()) {
            return Ok(sum.hermitize());
        }
    }
    Err(Error::NoConvergence { iterations: max_terms })
}

/// Solves the Stein equation directly: the map `P -> P - A* P A` is real
/// linear in the components of `P`, so it is inverted as a dense real system
/// of size `4 x^2`. Fails when one is an eigenvalue of the induced map.
pub fn stein_solve_direct(problem: &SteinProblem) -> Result<QMatrix> {
    let x = problem.state_dim();
    if x == 0 {
        return Ok(QMatrix::zeros(0, 0));
    }
    let a = problem.a();
    let a_adj = a.adjoint();
    let units = [
        Quaternion::new(1.0, 0.0, 0.0, 0.0),
        Quaternion::new(0.0, 1.0, 0.0, 0.0),
        Quaternion::new(0.0, 0.0, 1.0, 0.0),
        Quaternion::new(0.0, 0.0, 0.0, 1.0),
    ];
    let dim = 4 * x * x;
    let mut system = QMatrix::zeros(dim, dim);
    for s in 0..x {
        for t in 0..x {
            for (comp, &unit) in units.iter().enumerate() {
                let col = 4 * (s * x + t) + comp;
                let mut basis = QMatrix::zeros(x, x);
                basis[(s, t)] = unit;
                let image = basis.sub(&a_adj.mul(&basis).mul(a));
                for i in 0..x {
                    for j in 0..x {
                        let value = image[(i, j)];
                        let row = 4 * (i * x + j);
                        system[(row, col)] = Quaternion::real(value.w);
                        system[(row + 1, col)] = Quaternion::real(value.x);
                        system[(row + 2, col)] = Quaternion::real(value.y);
                        system[(row + 3, col)] = Quaternion::real(value.z);
                    }
                }
            }
        }
    }
    let q = problem.q();
    let mut rhs = QMatrix::zeros(dim, 1);
    for i in 0..x {
        for j in 0..x {
            let value = q[(i, j)];
            let row = 4 * (i * x + j);
            rhs[(row, 0)] = Quaternion::real(value.w);
            rhs[(row + 1, 0)] = Quaternion::real(value.x);
            rhs[(row + 2, 0)] = Quaternion::real(value.y);
            rhs[(row + 3, 0)] = Quaternion::real(value.z);
        }
    }
    let solution = system.solve(&rhs).map_err(|e| match e {
        Error::Singular => Error::SingularSteinSystem,
        other => other,
    })?;
    let mut p = QMatrix::zeros(x, x);
    for i in 0..x {
        for j in 0..x {
            let row = 4 * (i * x + j);
            p[(i, j)] = Quaternion::new(
                solution[(row, 0)].re(),
                solution[(row + 1, 0)].re(),
                solution[(row + 2, 0)].re(),
                solution[(row + 3, 0)].re(),
            );
        }
    }
    Ok(p.hermitize())
}

/// Solves the Stein equation by the series and assembles the metric space
/// `diag(P, I, -I)` together with the stacked subspace. Refuses to build the
/// scaffold when `P` is not positive definite, returning its spectrum as the
/// certificate.
pub fn build_scaffold(problem: &SteinProblem) -> Result<Scaffold> {
    let p = stein_solve_series(problem, STEIN_TOL, STEIN_MAX_TERMS)?;
    let eig = p.hermitian_eig()?;
    let scale = eig.lambdas.iter().map(|l| l.abs()).fold(0.0, f64::max);
    let min = eig.lambdas.last().copied().unwrap_or(0.0);
    if min <= DEGENERACY_REL * scale || min <= 0.0 {
        return Err(Error::IndefiniteMetric { eigenvalues: eig.lambdas });
    }

    let (x, y, u) = (problem.state_dim(), problem.output_dim(), problem.defect_dim());
    let k_dim = x + y + u;
    let mut jtilde = QMatrix::zeros(k_dim, k_dim);
    for i in 0..x {
        for j in 0..x {
            jtilde[(i, j)] = p[(i, j)];
        }
    }
    for i in 0..y {
        jtilde[(x + i, x + i)] = Quaternion::real(1.0);
    }
    for i in 0..u {
        jtilde[(x + y + i, x + y + i)] = Quaternion::real(-1.0);
    }
    let stacked = problem.stacked();
    let k0 = Subspace::span(&stacked);
    Ok(Scaffold { k_dim, jtilde, k0, stacked, p, state_dim: x })
}

/// Runs the four-stage verification on a scaffold:
/// the Stein identity `S* J~ S = P`, uniform positivity of the stacked
/// subspace, its ortho-complementation, and the Krein property of the
/// companion.
pub fn verify_sofsof(scaffold: &Scaffold) -> Result<SofsofReport> {
    let ambient = InnerProductSpace::new(scaffold.jtilde.clone())?;

    let restricted = scaffold.stacked.adjoint().mul(&scaffold.jtilde).mul(&scaffold.stacked);
    let residual = restricted.sub(&scaffold.p).frobenius_norm();
    let stein_identity_ok =
        residual <= STEIN_IDENTITY_REL * scaffold.p.frobenius_norm().max(f64::MIN_POSITIVE);

    let classification = classify_subspace(&ambient, &scaffold.k0)?;
    let uniformly_positive = classification.tag == SubspaceClass::StrictlyPositive
        && classification.uniform_constant.map_or(false, |c| c > 0.0);

    let ortho = is_ortho_complemented(&ambient, &scaffold.k0)?;

    let companion = orthogonal_companion(&ambient, &scaffold.k0)?;
    let companion_gram = restricted_gram(&ambient, &companion);
    let companion_space = InnerProductSpace::new(companion_gram)?;
    let companion_report = verify_krein(&companion_space)?;

    let all_passed = stein_identity_ok
        && uniformly_positive
        && ortho.complemented
        && companion_report.is_krein;

    Ok(SofsofReport {
        stein_identity_residual: residual,
        stein_identity_ok,
        classification,
        uniformly_positive,
        ortho,
        companion_dim: companion.dim(),
        companion_spectrum: companion_space.lambdas().to_vec(),
        companion_is_krein: companion_report.is_krein,
        companion_pontryagin_index: companion_report.pontryagin_index,
        all_passed,
    })
}
