//! Quadratic semi-norms and norms on `H^n`, their polars, the Gram operator,
//! the Mackey seminorm and the self-polar iteration.
//!
//! Every (semi-)norm here is carried by a Hermitian matrix `H` through
//! `p(v)^2 = v* H v`. The polar of such a norm has the closed form
//! `H' = M H^(-1) M`, so all of the constructions stay inside this class.

use crate::error::{Error, Result};
use crate::matrix::QMatrix;
use crate::quat::Quaternion;
use crate::space::InnerProductSpace;

/// Default stopping tolerance of the self-polar iteration.
pub const SELF_POLAR_TOL: f64 = 1e-12;
/// Default iteration budget of the self-polar iteration.
pub const SELF_POLAR_MAX_ITER: usize = 200;

/// A finite family of quadratic semi-norms `p_g(v) = sqrt(v* H_g v)` with
/// positive semi-definite Hermitian carriers.
#[derive(Debug, Clone)]
pub struct SemiNormFamily {
    mats: Vec<QMatrix>,
    dim: usize,
}

impl SemiNormFamily {
    pub fn new(mats: Vec<QMatrix>) -> Result<Self> {
        assert!(!mats.is_empty(), "family must contain at least one semi-norm");
        let dim = mats[0].rows();
        for h in &mats {
            if !h.is_square() || h.rows() != dim {
                return Err(Error::DimensionMismatch {
                    expected: (dim, dim),
                    got: (h.rows(), h.cols()),
                });
            }
            let eig = h.hermitian_eig()?;
            let scale = eig.lambdas.first().map_or(0.0, |l| l.abs());
            if eig.lambdas.last().copied().unwrap_or(0.0) < -1e-12 * scale {
                return Err(Error::NotPositiveDefinite {
                    min_eigenvalue: *eig.lambdas.last().unwrap(),
                });
            }
        }
        Ok(SemiNormFamily { mats, dim })
    }

    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Evaluates the `idx`-th semi-norm.
    pub fn eval(&self, idx: usize, v: &[Quaternion]) -> f64 {
        quadratic_value(&self.mats[idx], v)
    }
}

fn quadratic_value(h: &QMatrix, v: &[Quaternion]) -> f64 {
    let hv = h.mul_vec(v);
    let mut acc = 0.0;
    for (vk, hvk) in v.iter().zip(hv.iter()) {
        acc += (vk.conj() * *hvk).re();
    }
    acc.max(0.0).sqrt()
}

/// A norm `|v|^2 = v* H v` with Hermitian positive definite `H`.
#[derive(Debug, Clone)]
pub struct NormQ {
    h: QMatrix,
}

impl NormQ {
    pub fn new(h: QMatrix) -> Result<Self> {
        let eig = h.hermitian_eig()?;
        let min = eig.lambdas.last().copied().unwrap_or(0.0);
        if min <= 0.0 {
            return Err(Error::NotPositiveDefinite { min_eigenvalue: min });
        }
        Ok(NormQ { h })
    }

    pub fn scaled_identity(n: usize, s: f64) -> NormQ {
        assert!(s > 0.0);
        NormQ { h: QMatrix::identity(n).scale(s) }
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.h
    }

    pub fn eval(&self, v: &[Quaternion]) -> f64 {
        quadratic_value(&self.h, v)
    }
}

/// Polar of a norm. `definite` is false exactly when the Gram matrix of the
/// space is singular, in which case the carrier is only positive
/// semi-definite and the polar is a semi-norm.
#[derive(Debug, Clone)]
pub struct PolarNorm {
    pub matrix: QMatrix,
    pub definite: bool,
}

impl PolarNorm {
    pub fn eval(&self, v: &[Quaternion]) -> f64 {
        quadratic_value(&self.matrix, v)
    }

    pub fn into_norm(self) -> Result<NormQ> {
        NormQ::new(self.matrix)
    }
}

/// Result of the self-polar iteration: the fixed point, the number of steps
/// taken and the decrement norms along the way.
#[derive(Debug, Clone)]
pub struct SelfPolarResult {
    pub hinf: NormQ,
    pub iterations: usize,
    pub history: Vec<f64>,
}

/// Closed-form Minkowski functional of `U = { v : max_g p_g(v) < 1 }`:
/// the largest semi-norm value.
pub fn minkowski(family: &SemiNormFamily, v: &[Quaternion]) -> f64 {
    (0..family.len()).map(|idx| family.eval(idx, v)).fold(0.0, f64::max)
}

/// Independent route to the Minkowski functional: bisection on the membership
/// predicate `v/a in U`. Agrees with [`minkowski`] to high accuracy; the two
/// together realize the functional being a semi-norm.
pub fn minkowski_bisect(family: &SemiNormFamily, v: &[Quaternion]) -> f64 {
    let member = |a: f64| -> bool {
        let inv = 1.0 / a;
        let scaled: Vec<Quaternion> = v.iter().map(|q| *q * inv).collect();
        (0..family.len()).all(|idx| family.eval(idx, &scaled) < 1.0)
    };

    let mut hi = 1.0;
    let mut tries = 0;
    while !member(hi) {
        hi *= 2.0;
        tries += 1;
        assert!(tries < 1100, "semi-norm value is not finite");
    }
    // bracket: lo is a non-member, hi a member
    let mut lo = hi * 0.5;
    while member(lo) {
        lo *= 0.5;
        if lo < 1e-300 {
            return 0.0;
        }
    }
    for _ in 0..200 {
        if hi - lo <= 1e-15 * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if member(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The weak semi-norm `p_w(v) = |[v, w]|`; a semi-norm because the absolute
/// value is multiplicative on the quaternions.
pub fn weak_seminorm(
    space: &InnerProductSpace,
    w: &[Quaternion],
    v: &[Quaternion],
) -> Result<f64> {
    Ok(space.inner(v, w)?.abs())
}

/// Polar norm `|v|' = sup over the unit ball of |[v, .]|`, in closed form
/// `H' = M H^(-1) M`.
pub fn polar(space: &InnerProductSpace, norm: &NormQ) -> Result<PolarNorm> {
    let m = space.gram();
    let h_inv_m = norm.matrix().solve(m)?;
    let matrix = m.mul(&h_inv_m).hermitize();
    Ok(PolarNorm { matrix, definite: !space.is_degenerate() })
}

/// Gram operator of the form relative to the Hilbert norm `H`:
/// `G = H^(-1) M`, so that `[v, w] = <v, G w>_H`.
pub fn gram_operator(space: &InnerProductSpace, norm: &NormQ) -> Result<QMatrix> {
    norm.matrix().solve(space.gram())
}

/// Mackey seminorm `v -> |G v|_H`.
pub fn mackey_seminorm(
    space: &InnerProductSpace,
    norm: &NormQ,
    v: &[Quaternion],
) -> Result<f64> {
    let g = gram_operator(space, norm)?;
    Ok(norm.eval(&g.mul_vec(v)))
}

/// Averaging iteration towards the self-polar norm:
/// `H_0 = |M|_2 I`, `H_{n+1} = (H_n + M H_n^(-1) M) / 2`, stopping when the
/// decrement drops below `tol` relative to the current iterate. The fixed
/// point satisfies `H = M H^(-1) M` and equals the spectral absolute value
/// `|M|`.
pub fn self_polar(
    space: &InnerProductSpace,
    tol: f64,
    max_iter: usize,
) -> Result<SelfPolarResult> {
    assert!(tol > 0.0);
    if space.is_degenerate() {
        return Err(Error::DegenerateSpace);
    }
    let n = space.dim();
    let m = space.gram();
    let mut h = QMatrix::identity(n).scale(space.scale());
    let mut history = Vec::new();
    for it in 1..=max_iter {
        let h_inv_m = h.solve(m)?;
        let next = h.add(&m.mul(&h_inv_m)).scale(0.5).hermitize();
        let delta = next.sub(&h).frobenius_norm();
        history.push(delta);
        let reference = h.frobenius_norm();
        h = next;
        if delta <= tol * reference {
            return Ok(SelfPolarResult { hinf: NormQ::new(h)?, iterations: it, history });
        }
    }
    Err(Error::SelfPolarStalled { iterations: max_iter, history })
}
