//! Indefinite inner product spaces over `H^n`.
//!
//! A space is a dimension together with a Hermitian Gram matrix `M`; the form
//! is `[v, w] = w* M v`, right linear in `v` and conjugate right linear in
//! `w`. The Gram spectrum drives everything else: vector classification,
//! the isotropic part, fundamental decompositions and the associated
//! fundamental symmetry.

use crate::error::{Error, Result};
use crate::matrix::{vec_norm, HermEig, QMatrix};
use crate::quat::Quaternion;
use crate::subspace::Subspace;

/// `|[v, v]|` below `NEUTRAL_REL * |M| * |v|^2` counts as neutral.
pub const NEUTRAL_REL: f64 = 1e-9;

/// Gram eigenvalues below `DEGENERACY_REL * |M|` in magnitude count as zero;
/// a space with such an eigenvalue is degenerate.
pub const DEGENERACY_REL: f64 = 1e-9;

/// A right quaternionic vector space with an indefinite Hermitian form.
#[derive(Debug, Clone)]
pub struct InnerProductSpace {
    gram: QMatrix,
    eig: HermEig,
}

/// Sign pattern of a vector under the form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Definiteness {
    Positive,
    Negative,
    Neutral,
}

/// Classification of a single vector: the sign tag and the value `[v, v]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VectorClass {
    pub tag: Definiteness,
    pub value: f64,
}

/// Counts of strictly positive, strictly negative and neutral directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Signature {
    pub plus: usize,
    pub minus: usize,
    pub zero: usize,
}

/// A fundamental decomposition `V = V+ [+] V- [+] N` with its fundamental
/// symmetry `J` and the Gram spectrum it was read off from.
#[derive(Debug, Clone)]
pub struct FundamentalDecomposition {
    pub plus: Subspace,
    pub minus: Subspace,
    pub neutral: Subspace,
    pub signature: Signature,
    pub symmetry: QMatrix,
    pub lambdas: Vec<f64>,
}

impl InnerProductSpace {
    /// Builds a space from its Gram matrix. The matrix must be square and
    /// Hermitian; its eigendecomposition is computed once and reused.
    pub fn new(gram: QMatrix) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::NotSquare { rows: gram.rows(), cols: gram.cols() });
        }
        let eig = gram.hermitian_eig()?;
        Ok(InnerProductSpace { gram, eig })
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &QMatrix {
        &self.gram
    }

    /// Gram spectrum, descending.
    pub fn lambdas(&self) -> &[f64] {
        &self.eig.lambdas
    }

    /// Spectral norm of the Gram matrix; the reference scale for tolerances.
    pub fn scale(&self) -> f64 {
        self.eig
            .lambdas
            .iter()
            .map(|l| l.abs())
            .fold(0.0, f64::max)
    }

    fn degeneracy_cutoff(&self) -> f64 {
        DEGENERACY_REL * self.scale()
    }

    /// Smallest eigenvalue magnitude of the Gram matrix.
    pub fn invertibility_margin(&self) -> f64 {
        self.eig
            .lambdas
            .iter()
            .map(|l| l.abs())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_degenerate(&self) -> bool {
        self.invertibility_margin() <= self.degeneracy_cutoff()
    }

    /// Spectral absolute value `|M| = V |Lambda| V*`, the Gram matrix of the
    /// J-inner product of the spectral decomposition.
    pub fn abs_gram(&self) -> QMatrix {
        let abs: Vec<f64> = self.eig.lambdas.iter().map(|l| l.abs()).collect();
        let v = &self.eig.vectors;
        v.mul(&QMatrix::diag(&abs)).mul(&v.adjoint()).hermitize()
    }

    /// The inner product `[v, w] = w* M v`.
    pub fn inner(&self, v: &[Quaternion], w: &[Quaternion]) -> Result<Quaternion> {
        let n = self.dim();
        if v.len() != n || w.len() != n {
            return Err(Error::DimensionMismatch {
                expected: (n, n),
                got: (v.len(), w.len()),
            });
        }
        let mv = self.gram.mul_vec(v);
        let mut acc = crate::quat::ZERO;
        for (wk, mvk) in w.iter().zip(mv.iter()) {
            acc += wk.conj() * *mvk;
        }
        Ok(acc)
    }

    /// Signs `[v, v]`, with a scale-invariant band around zero mapped to
    /// neutral.
    pub fn classify_vector(&self, v: &[Quaternion]) -> Result<VectorClass> {
        let value = self.inner(v, v)?.re();
        let band = NEUTRAL_REL * self.scale() * vec_norm(v).powi(2);
        let tag = if value.abs() <= band {
            Definiteness::Neutral
        } else if value > 0.0 {
            Definiteness::Positive
        } else {
            Definiteness::Negative
        };
        Ok(VectorClass { tag, value })
    }

    /// Basis of the isotropic part `V^0 = V /\ V^[perp]`, the kernel of `M`.
    pub fn isotropic_part(&self) -> Subspace {
        let cutoff = self.degeneracy_cutoff();
        let cols: Vec<Vec<Quaternion>> = self
            .eig
            .lambdas
            .iter()
            .enumerate()
            .filter(|(_, l)| l.abs() <= cutoff)
            .map(|(idx, _)| self.eig.vectors.column(idx))
            .collect();
        Subspace::from_orthonormal_columns(self.dim(), &cols)
    }

    /// Splits the Gram eigenbasis into strictly positive, strictly negative
    /// and neutral groups and assembles the fundamental symmetry
    /// `J = V sign(Lambda) V*` (acting as the identity on the neutral part).
    pub fn fundamental_decomposition(&self) -> FundamentalDecomposition {
        let cutoff = self.degeneracy_cutoff();
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        let mut neutral = Vec::new();
        let mut signs = Vec::with_capacity(self.dim());
        for (idx, &l) in self.eig.lambdas.iter().enumerate() {
            let col = self.eig.vectors.column(idx);
            if l.abs() <= cutoff {
                signs.push(1.0);
                neutral.push(col);
            } else if l > 0.0 {
                signs.push(1.0);
                plus.push(col);
            } else {
                signs.push(-1.0);
                minus.push(col);
            }
        }
        let v = &self.eig.vectors;
        let symmetry = v.mul(&QMatrix::diag(&signs)).mul(&v.adjoint());
        FundamentalDecomposition {
            signature: Signature { plus: plus.len(), minus: minus.len(), zero: neutral.len() },
            plus: Subspace::from_orthonormal_columns(self.dim(), &plus),
            minus: Subspace::from_orthonormal_columns(self.dim(), &minus),
            neutral: Subspace::from_orthonormal_columns(self.dim(), &neutral),
            symmetry,
            lambdas: self.eig.lambdas.clone(),
        }
    }

    /// `<v, w>_J = [Jv, w]`, positive definite on a nondegenerate space.
    pub fn j_inner(
        &self,
        decomposition: &FundamentalDecomposition,
        v: &[Quaternion],
        w: &[Quaternion],
    ) -> Result<Quaternion> {
        if self.is_degenerate() {
            return Err(Error::DegenerateSpace);
        }
        let jv = decomposition.symmetry.mul_vec(v);
        self.inner(&jv, w)
    }

    /// `|v|_J = sqrt(<v, v>_J)`.
    pub fn j_norm(
        &self,
        decomposition: &FundamentalDecomposition,
        v: &[Quaternion],
    ) -> Result<f64> {
        let sq = self.j_inner(decomposition, v, v)?.re();
        Ok(sq.max(0.0).sqrt())
    }
}

impl FundamentalDecomposition {
    /// Gram matrix of the J-inner product, `M J`. For the spectral
    /// decomposition this equals `V |Lambda| V*`.
    pub fn j_gram(&self, space: &InnerProductSpace) -> QMatrix {
        space.gram().mul(&self.symmetry).hermitize()
    }

    /// Assembles a fundamental decomposition from explicit strictly positive
    /// and strictly negative bases. The neutral component is always the
    /// isotropic part of the space, so only the definite blocks vary. The
    /// blocks must be mutually orthogonal under the form, definite of the
    /// advertised sign, and together with the isotropic part span the space.
    pub fn from_bases(
        space: &InnerProductSpace,
        plus: &Subspace,
        minus: &Subspace,
    ) -> Result<FundamentalDecomposition> {
        let n = space.dim();
        if plus.ambient_dim() != n || minus.ambient_dim() != n {
            return Err(Error::InvalidDecomposition("basis ambient dimension mismatch".into()));
        }
        let neutral = space.isotropic_part();
        if plus.dim() + minus.dim() + neutral.dim() != n {
            return Err(Error::InvalidDecomposition(
                "component dimensions do not sum to the space dimension".into(),
            ));
        }
        let tol = space.scale().max(f64::MIN_POSITIVE) * 1e-8;

        let gp = plus.basis().adjoint().mul(space.gram()).mul(plus.basis()).hermitize();
        let gm = minus.basis().adjoint().mul(space.gram()).mul(minus.basis()).hermitize();
        let cross = plus.basis().adjoint().mul(space.gram()).mul(minus.basis());
        if cross.max_abs() > tol {
            return Err(Error::InvalidDecomposition("components are not orthogonal".into()));
        }
        if plus.dim() > 0 {
            let eig = gp.hermitian_eig()?;
            if eig.lambdas.last().copied().unwrap_or(0.0) <= space.degeneracy_cutoff() {
                return Err(Error::InvalidDecomposition(
                    "positive component is not strictly positive".into(),
                ));
            }
        }
        if minus.dim() > 0 {
            let eig = gm.hermitian_eig()?;
            if eig.lambdas.first().copied().unwrap_or(0.0) >= -space.degeneracy_cutoff() {
                return Err(Error::InvalidDecomposition(
                    "negative component is not strictly negative".into(),
                ));
            }
        }

        let w = plus.basis().hstack(minus.basis()).hstack(neutral.basis());
        let mut signs = vec![1.0; plus.dim()];
        signs.extend(vec![-1.0; minus.dim()]);
        signs.extend(vec![1.0; neutral.dim()]);
        let w_inv = w.inverse().map_err(|_| {
            Error::InvalidDecomposition("components do not span the space".into())
        })?;
        let symmetry = w.mul(&QMatrix::diag(&signs)).mul(&w_inv);

        Ok(FundamentalDecomposition {
            signature: Signature { plus: plus.dim(), minus: minus.dim(), zero: neutral.dim() },
            plus: plus.clone(),
            minus: minus.clone(),
            neutral,
            symmetry,
            lambdas: space.lambdas().to_vec(),
        })
    }
}
