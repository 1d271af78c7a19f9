//! Right-linear subspaces of an inner product space and the
//! ortho-complementation machinery built on them.
//!
//! A subspace is carried by a Euclidean-orthonormal basis matrix, which keeps
//! every rank decision well conditioned. All operations take the ambient
//! space explicitly; nothing here mutates.

use serde::Serialize;

use crate::error::Result;
use crate::matrix::{orthonormalize, qdot, vec_norm, QMatrix};
use crate::quat::Quaternion;
use crate::space::{InnerProductSpace, DEGENERACY_REL};

/// Residual tolerance for subspace containment tests on unit vectors.
const CONTAINMENT_TOL: f64 = 1e-8;

/// Relative residual tolerance for the projection consistency test.
const PROJECT_RESIDUAL_REL: f64 = 1e-9;

/// A right-linear subspace, held as an `n x k` matrix with Euclidean
/// orthonormal columns.
#[derive(Debug, Clone)]
pub struct Subspace {
    basis: QMatrix,
}

/// Sign classification of a subspace under the restricted form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubspaceClass {
    StrictlyPositive,
    Positive,
    Neutral,
    Negative,
    StrictlyNegative,
    Indefinite,
}

/// Classification report: tag, degeneracy of the restricted Gram, and the
/// uniform definiteness constant `c` with `[v,v] >= c |v|_J^2` when the
/// subspace is strictly definite in a nondegenerate ambient space.
#[derive(Debug, Clone, Serialize)]
pub struct SubspaceReport {
    pub tag: SubspaceClass,
    pub degenerate: bool,
    pub uniform_constant: Option<f64>,
}

/// Certificate for the ortho-complementation test.
#[derive(Debug, Clone, Serialize)]
pub struct OrthoCertificate {
    pub complemented: bool,
    /// Rank of `[B | companion basis]`.
    pub span_rank: usize,
    pub ambient_dim: usize,
    /// Nonsingularity of the restricted Gram; reported in nondegenerate
    /// ambient spaces, where it is equivalent to complementation.
    pub gram_nonsingular: Option<bool>,
}

/// The two conditions of the quotient criterion: the isotropic part of `L`
/// sits inside the isotropic part of the space, and the image of `L` in the
/// quotient by that part is ortho-complemented there. The second condition is
/// only evaluated when the first holds.
#[derive(Debug, Clone, Serialize)]
pub struct KansasCheck {
    pub isotropic_contained: bool,
    pub quotient_complemented: Option<bool>,
}

impl KansasCheck {
    pub fn conjunction(&self) -> bool {
        self.isotropic_contained && self.quotient_complemented.unwrap_or(false)
    }
}

impl Subspace {
    /// Column span of an arbitrary matrix; columns are orthonormalized by
    /// modified Gram-Schmidt with re-orthogonalization, dropping dependents.
    pub fn span(mat: &QMatrix) -> Subspace {
        let cols = orthonormalize(&mat.columns(), 1e-10);
        Subspace::from_orthonormal_columns(mat.rows(), &cols)
    }

    pub fn zero(ambient: usize) -> Subspace {
        Subspace { basis: QMatrix::zeros(ambient, 0) }
    }

    pub fn full(ambient: usize) -> Subspace {
        Subspace { basis: QMatrix::identity(ambient) }
    }

    pub(crate) fn from_orthonormal_columns(ambient: usize, cols: &[Vec<Quaternion>]) -> Subspace {
        if cols.is_empty() {
            return Subspace::zero(ambient);
        }
        debug_assert!(cols.iter().all(|c| c.len() == ambient));
        Subspace { basis: QMatrix::from_columns(cols) }
    }

    pub(crate) fn from_orthonormal_matrix(basis: QMatrix) -> Subspace {
        Subspace { basis }
    }

    pub fn basis(&self) -> &QMatrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    /// Euclidean-orthogonal projection residual test: does `self` contain
    /// every column of `other`?
    pub fn contains(&self, other: &Subspace) -> bool {
        assert_eq!(self.ambient_dim(), other.ambient_dim());
        for j in 0..other.dim() {
            let mut col = other.basis.column(j);
            let norm = vec_norm(&col);
            if norm == 0.0 {
                continue;
            }
            for b in 0..self.dim() {
                let u = self.basis.column(b);
                let coeff = qdot(&u, &col);
                for (ck, uk) in col.iter_mut().zip(u.iter()) {
                    *ck -= *uk * coeff;
                }
            }
            if vec_norm(&col) > CONTAINMENT_TOL * norm {
                return false;
            }
        }
        true
    }

    /// Membership test for a single vector.
    pub fn contains_vector(&self, v: &[Quaternion]) -> bool {
        assert_eq!(self.ambient_dim(), v.len());
        let norm = vec_norm(v);
        if norm == 0.0 {
            return true;
        }
        let mut col = v.to_vec();
        for b in 0..self.dim() {
            let u = self.basis.column(b);
            let coeff = qdot(&u, &col);
            for (ck, uk) in col.iter_mut().zip(u.iter()) {
                *ck -= *uk * coeff;
            }
        }
        vec_norm(&col) <= CONTAINMENT_TOL * norm
    }
}

/// The form restricted to `L` in basis coordinates: `G_L = B* M B`.
pub fn restricted_gram(space: &InnerProductSpace, sub: &Subspace) -> QMatrix {
    assert_eq!(space.dim(), sub.ambient_dim());
    sub.basis().adjoint().mul(space.gram()).mul(sub.basis()).hermitize()
}

/// Orthogonal companion `L^[perp] = { v : [v, w] = 0 for all w in L }`,
/// computed as the kernel of `B* M`. The null cutoff is taken relative to the
/// ambient Gram scale: the constraint rows are products with `M` and carry
/// its rounding noise even where they vanish exactly.
pub fn orthogonal_companion(space: &InnerProductSpace, sub: &Subspace) -> Result<Subspace> {
    assert_eq!(space.dim(), sub.ambient_dim());
    let constraints = sub.basis().adjoint().mul(space.gram());
    let kernel = constraints.kernel_scaled(constraints.default_tol(), space.scale())?;
    Ok(Subspace::from_orthonormal_matrix(kernel))
}

/// Is the ambient space spanned by `L` and its orthogonal companion?
pub fn is_ortho_complemented(
    space: &InnerProductSpace,
    sub: &Subspace,
) -> Result<OrthoCertificate> {
    let companion = orthogonal_companion(space, sub)?;
    let stacked = sub.basis().hstack(companion.basis());
    let span_rank = if stacked.cols() == 0 { 0 } else { stacked.rank(stacked.default_tol())? };
    let gram_nonsingular = if space.is_degenerate() {
        None
    } else {
        let cutoff = DEGENERACY_REL * space.scale();
        let gram = restricted_gram(space, sub);
        let nonsingular = if sub.dim() == 0 {
            true
        } else {
            gram.hermitian_eig()?.lambdas.iter().all(|l| l.abs() > cutoff)
        };
        Some(nonsingular)
    };
    Ok(OrthoCertificate {
        complemented: span_rank == space.dim(),
        span_rank,
        ambient_dim: space.dim(),
        gram_nonsingular,
    })
}

/// Basis of the isotropic part `L^0 = L /\ L^[perp]` of a subspace, as a
/// subspace of the ambient space.
pub fn subspace_isotropic_part(space: &InnerProductSpace, sub: &Subspace) -> Result<Subspace> {
    let gram = restricted_gram(space, sub);
    if sub.dim() == 0 {
        return Ok(Subspace::zero(space.dim()));
    }
    let cutoff = DEGENERACY_REL * space.scale();
    let eig = gram.hermitian_eig()?;
    let null_coords: Vec<Vec<Quaternion>> = eig
        .lambdas
        .iter()
        .enumerate()
        .filter(|(_, l)| l.abs() <= cutoff)
        .map(|(idx, _)| eig.vectors.column(idx))
        .collect();
    if null_coords.is_empty() {
        return Ok(Subspace::zero(space.dim()));
    }
    // B maps orthonormal coordinate vectors to orthonormal ambient vectors.
    let coords = QMatrix::from_columns(&null_coords);
    Ok(Subspace::from_orthonormal_matrix(sub.basis().mul(&coords)))
}

/// The two-part quotient criterion for ortho-complementation. Part (a) tests
/// that the isotropic part of `L` is contained in the isotropic part of the
/// space; part (b) compresses the form onto the Euclidean complement of the
/// ambient isotropic part and re-runs the span test on the image of `L`.
/// The conjunction agrees with [`is_ortho_complemented`].
pub fn kansas_check(space: &InnerProductSpace, sub: &Subspace) -> Result<KansasCheck> {
    let l_iso = subspace_isotropic_part(space, sub)?;
    let v_iso = space.isotropic_part();
    let isotropic_contained = v_iso.contains(&l_iso);
    if !isotropic_contained {
        return Ok(KansasCheck { isotropic_contained, quotient_complemented: None });
    }

    // Quotient carrier: Euclidean complement of the ambient isotropic part.
    let carrier = if v_iso.dim() == 0 {
        Subspace::full(space.dim())
    } else {
        let constraints = v_iso.basis().adjoint();
        Subspace::from_orthonormal_matrix(constraints.kernel(constraints.default_tol())?)
    };
    let q = carrier.basis();
    let compressed = q.adjoint().mul(space.gram()).mul(q).hermitize();
    let quotient = InnerProductSpace::new(compressed)?;
    let image = Subspace::span(&q.adjoint().mul(sub.basis()));
    let cert = is_ortho_complemented(&quotient, &image)?;
    Ok(KansasCheck { isotropic_contained, quotient_complemented: Some(cert.complemented) })
}

/// Classifies `L` by the spectrum of its restricted Gram and, for strictly
/// definite subspaces of a nondegenerate space, computes the uniform
/// definiteness constant as the smallest generalized eigenvalue of the
/// restricted form against the restricted J-Gram.
pub fn classify_subspace(space: &InnerProductSpace, sub: &Subspace) -> Result<SubspaceReport> {
    let gram = restricted_gram(space, sub);
    let cutoff = DEGENERACY_REL * space.scale();
    let lambdas = if sub.dim() == 0 { vec![] } else { gram.hermitian_eig()?.lambdas };
    let pos = lambdas.iter().filter(|l| **l > cutoff).count();
    let neg = lambdas.iter().filter(|l| **l < -cutoff).count();
    let zero = lambdas.len() - pos - neg;
    let tag = match (pos, neg, zero) {
        (_, 0, 0) if pos > 0 => SubspaceClass::StrictlyPositive,
        (0, _, 0) if neg > 0 => SubspaceClass::StrictlyNegative,
        (0, 0, _) => SubspaceClass::Neutral,
        (_, 0, _) => SubspaceClass::Positive,
        (0, _, _) => SubspaceClass::Negative,
        _ => SubspaceClass::Indefinite,
    };
    let degenerate = zero > 0;

    let uniform_constant = match tag {
        SubspaceClass::StrictlyPositive | SubspaceClass::StrictlyNegative
            if !space.is_degenerate() && sub.dim() > 0 =>
        {
            let signed = if tag == SubspaceClass::StrictlyPositive { gram } else { gram.neg() };
            let jgram = sub
                .basis()
                .adjoint()
                .mul(&space.abs_gram())
                .mul(sub.basis())
                .hermitize();
            Some(smallest_generalized_eigenvalue(&signed, &jgram)?)
        }
        _ => None,
    };

    Ok(SubspaceReport { tag, degenerate, uniform_constant })
}

/// Smallest eigenvalue of the pencil `(A, W)` with `W` positive definite,
/// via the symmetric reduction `W^(-1/2) A W^(-1/2)`.
fn smallest_generalized_eigenvalue(a: &QMatrix, w: &QMatrix) -> Result<f64> {
    let weig = w.hermitian_eig()?;
    let inv_sqrt: Vec<f64> = weig.lambdas.iter().map(|l| 1.0 / l.max(f64::MIN_POSITIVE).sqrt()).collect();
    let v = &weig.vectors;
    let whalf_inv = v.mul(&QMatrix::diag(&inv_sqrt)).mul(&v.adjoint());
    let reduced = whalf_inv.mul(a).mul(&whalf_inv).hermitize();
    let eig = reduced.hermitian_eig()?;
    Ok(eig.lambdas.last().copied().unwrap_or(0.0))
}

/// Projection of `v` onto `L` along the form, when one exists: solves
/// `G_L x = B* M v` in the least-squares sense and accepts the answer only
/// when the residual certifies consistency. Returns `None` when `v` has no
/// projection (the right-hand side leaves the range of `G_L`).
pub fn project(
    space: &InnerProductSpace,
    sub: &Subspace,
    v: &[Quaternion],
) -> Result<Option<Vec<Quaternion>>> {
    assert_eq!(space.dim(), v.len());
    if sub.dim() == 0 {
        return Ok(Some(vec![crate::quat::ZERO; space.dim()]));
    }
    let gram = restricted_gram(space, sub);
    let rhs: Vec<Quaternion> = {
        let mv = space.gram().mul_vec(v);
        (0..sub.dim()).map(|j| qdot(&sub.basis().column(j), &mv)).collect()
    };
    let cutoff = DEGENERACY_REL * space.scale();
    let eig = gram.hermitian_eig()?;

    // Pseudo-solve through the eigenbasis of the Hermitian restricted Gram.
    let mut x = vec![crate::quat::ZERO; sub.dim()];
    for (idx, &l) in eig.lambdas.iter().enumerate() {
        if l.abs() <= cutoff {
            continue;
        }
        let u = eig.vectors.column(idx);
        let coeff = qdot(&u, &rhs) / l;
        for (xk, uk) in x.iter_mut().zip(u.iter()) {
            *xk += *uk * coeff;
        }
    }

    let mut residual = gram.mul_vec(&x);
    for (rk, bk) in residual.iter_mut().zip(rhs.iter()) {
        *rk -= *bk;
    }
    let gram_norm = eig.lambdas.iter().map(|l| l.abs()).fold(0.0, f64::max);
    let bound = PROJECT_RESIDUAL_REL * (gram_norm * vec_norm(&x) + vec_norm(&rhs));
    if vec_norm(&residual) > bound.max(PROJECT_RESIDUAL_REL * space.scale() * vec_norm(v)) {
        return Ok(None);
    }
    Ok(Some(sub.basis().mul_vec(&x)))
}
