//! Invariant suites for the inner product space, subspace and norm layers.

use qkrein::norms::{self, NormQ};
use qkrein::subspace::{
    classify_subspace, is_ortho_complemented, orthogonal_companion, project, restricted_gram,
    SubspaceClass,
};
use qkrein::{InnerProductSpace, QMatrix, Quaternion, Subspace};

mod common;

#[test]
fn decomposition_is_an_orthogonal_direct_sum() {
    let mut rng = common::rng(23);
    for trial in 0..30 {
        let n = 2 + trial % 5;
        let space = if trial % 3 == 0 {
            common::rand_degenerate_space(&mut rng, n, 1.min(n - 1))
        } else {
            common::rand_nondegenerate_space(&mut rng, n)
        };
        let d = space.fundamental_decomposition();
        assert_eq!(d.signature.plus + d.signature.minus + d.signature.zero, n);

        // assembled basis spans H^n
        let assembled = d.plus.basis().hstack(d.minus.basis()).hstack(d.neutral.basis());
        assert_eq!(assembled.rank(assembled.default_tol()).unwrap(), n);

        // cross Gram blocks vanish
        let m = space.gram();
        let cross_pm = d.plus.basis().adjoint().mul(m).mul(d.minus.basis());
        let cross_pn = d.plus.basis().adjoint().mul(m).mul(d.neutral.basis());
        let cross_mn = d.minus.basis().adjoint().mul(m).mul(d.neutral.basis());
        for block in [cross_pm, cross_pn, cross_mn] {
            assert!(block.max_abs() <= 1e-9 * space.scale().max(1.0));
        }
    }
}

#[test]
fn neutral_component_spans_the_isotropic_part() {
    let mut rng = common::rng(29);
    for trial in 0..20 {
        let n = 2 + trial % 4;
        let zeros = 1 + trial % 2.min(n - 1);
        let space = common::rand_degenerate_space(&mut rng, n, zeros.min(n - 1));
        let d = space.fundamental_decomposition();
        let iso = space.isotropic_part();
        assert_eq!(d.neutral.dim(), iso.dim());
        assert!(d.neutral.contains(&iso) && iso.contains(&d.neutral));
    }
}

#[test]
fn j_symmetry_is_an_involutive_isometry() {
    let mut rng = common::rng(31);
    for trial in 0..25 {
        let n = 2 + trial % 5;
        let space = common::rand_nondegenerate_space(&mut rng, n);
        let d = space.fundamental_decomposition();
        let j = &d.symmetry;
        let j2 = j.mul(j);
        assert!(j2.sub(&QMatrix::identity(n)).frobenius_norm() < 1e-10);
        for _ in 0..20 {
            let v = common::rand_vector(&mut rng, n);
            let w = common::rand_vector(&mut rng, n);
            let jv = j.mul_vec(&v);
            let jw = j.mul_vec(&w);
            let lhs = space.inner(&jv, &jw).unwrap();
            let rhs = space.inner(&v, &w).unwrap();
            assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1.0));
        }
    }
}

#[test]
fn positive_component_stays_positive_under_combinations() {
    let mut rng = common::rng(37);
    for trial in 0..20 {
        let n = 2 + trial % 4;
        let space = common::rand_nondegenerate_space(&mut rng, n);
        let d = space.fundamental_decomposition();
        for _ in 0..30 {
            if d.plus.dim() > 0 {
                let coeffs = common::rand_vector(&mut rng, d.plus.dim());
                let v = d.plus.basis().mul_vec(&coeffs);
                let val = space.inner(&v, &v).unwrap().re();
                assert!(val >= -1e-10 * space.scale());
            }
            if d.minus.dim() > 0 {
                let coeffs = common::rand_vector(&mut rng, d.minus.dim());
                let v = d.minus.basis().mul_vec(&coeffs);
                let val = space.inner(&v, &v).unwrap().re();
                assert!(val <= 1e-10 * space.scale());
            }
        }
    }
}

#[test]
fn eigenvectors_outside_plus_cannot_extend_it_positively() {
    // any eigenvector with nonpositive eigenvalue is itself a nonpositive
    // vector in the span of (plus basis, u)
    let mut rng = common::rng(41);
    for trial in 0..15 {
        let n = 2 + trial % 4;
        let space = common::rand_nondegenerate_space(&mut rng, n);
        let d = space.fundamental_decomposition();
        for j in 0..d.minus.dim() {
            let u = d.minus.basis().column(j);
            let val = space.inner(&u, &u).unwrap().re();
            assert!(val <= 0.0);
        }
    }
}

#[test]
fn double_companion_and_its_equality_case() {
    let mut rng = common::rng(43);
    for trial in 0..60 {
        let n = 2 + trial % 5;
        let space = if trial % 4 == 0 {
            common::rand_degenerate_space(&mut rng, n, 1)
        } else {
            common::rand_nondegenerate_space(&mut rng, n)
        };
        let k = 1 + trial % n;
        let sub = common::rand_subspace(&mut rng, n, k);
        let companion = orthogonal_companion(&space, &sub).unwrap();
        let double = orthogonal_companion(&space, &companion).unwrap();
        assert!(double.contains(&sub), "L must sit inside its double companion");
        let cert = is_ortho_complemented(&space, &sub).unwrap();
        if cert.complemented && !space.is_degenerate() {
            assert_eq!(double.dim(), sub.dim());
            assert!(sub.contains(&double));
        }
    }
}

#[test]
fn companion_of_complemented_subspace_is_complemented() {
    let mut rng = common::rng(47);
    for trial in 0..40 {
        let n = 2 + trial % 5;
        let space = common::rand_nondegenerate_space(&mut rng, n);
        let sub = common::rand_subspace(&mut rng, n, 1 + trial % n);
        let cert = is_ortho_complemented(&space, &sub).unwrap();
        if cert.complemented {
            let companion = orthogonal_companion(&space, &sub).unwrap();
            let cert2 = is_ortho_complemented(&space, &companion).unwrap();
            assert!(cert2.complemented);
        }
    }
}

#[test]
fn neutral_subspaces_are_complemented_iff_isotropic() {
    let mut rng = common::rng(53);
    for trial in 0..40 {
        let n = 3 + trial % 3;
        let zeros = trial % 2;
        let space = common::rand_degenerate_space(&mut rng, n, zeros);
        let d = space.fundamental_decomposition();

        // build a random neutral subspace: hyperbolic null directions plus
        // isotropic ones
        let mut columns: Vec<Vec<Quaternion>> = Vec::new();
        let pairs = d.signature.plus.min(d.signature.minus);
        if pairs > 0 && trial % 3 != 0 {
            let ip = trial % pairs;
            let im = (trial / 2) % pairs;
            let vp = d.plus.basis().column(ip);
            let vm = d.minus.basis().column(im);
            let lp = space.inner(&vp, &vp).unwrap().re();
            let lm = -space.inner(&vm, &vm).unwrap().re();
            let col: Vec<Quaternion> = vp
                .iter()
                .zip(vm.iter())
                .map(|(p, m)| *p * (1.0 / lp.sqrt()) + *m * (1.0 / lm.sqrt()))
                .collect();
            columns.push(col);
        }
        for j in 0..d.neutral.dim() {
            if trial % 2 == 0 {
                columns.push(d.neutral.basis().column(j));
            }
        }
        if columns.is_empty() {
            continue;
        }
        let sub = Subspace::span(&QMatrix::from_columns(&columns));
        // confirm neutrality on random members
        for _ in 0..10 {
            let coeffs = common::rand_vector(&mut rng, sub.dim());
            let v = sub.basis().mul_vec(&coeffs);
            let val = space.inner(&v, &v).unwrap().re();
            assert!(val.abs() <= 1e-8 * space.scale());
        }
        let complemented = is_ortho_complemented(&space, &sub).unwrap().complemented;
        let inside_isotropic = space.isotropic_part().contains(&sub);
        assert_eq!(complemented, inside_isotropic, "trial {trial}");
    }
}

#[test]
fn projection_residuals_are_orthogonal_to_the_subspace() {
    let mut rng = common::rng(59);
    let mut returned = 0;
    for trial in 0..60 {
        let n = 2 + trial % 5;
        let space = if trial % 5 == 0 {
            common::rand_degenerate_space(&mut rng, n, 1)
        } else {
            common::rand_nondegenerate_space(&mut rng, n)
        };
        let sub = common::rand_subspace(&mut rng, n, 1 + trial % n);
        let v = common::rand_vector(&mut rng, n);
        if let Some(w) = project(&space, &sub, &v).unwrap() {
            returned += 1;
            let mut diff = v.clone();
            for (d, wk) in diff.iter_mut().zip(w.iter()) {
                *d -= *wk;
            }
            let vnorm = qkrein::matrix::vec_norm(&v);
            for j in 0..sub.dim() {
                let u = sub.basis().column(j);
                let r = space.inner(&diff, &u).unwrap().abs();
                assert!(r <= 1e-9 * vnorm * space.scale().max(1.0), "residual {r}");
            }
            assert!(sub.contains_vector(&w));
        }
    }
    assert!(returned > 30, "projections should exist generically");
}

#[test]
fn uniform_constant_bounds_random_members() {
    let mut rng = common::rng(61);
    let mut tested = 0;
    for trial in 0..40 {
        let n = 2 + trial % 5;
        let space = common::rand_nondegenerate_space(&mut rng, n);
        let d = space.fundamental_decomposition();
        if d.plus.dim() == 0 {
            continue;
        }
        let k = 1 + trial % d.plus.dim();
        let sub = Subspace::span(
            &d.plus.basis().mul(&common::rand_matrix(&mut rng, d.plus.dim(), k)),
        );
        if sub.dim() == 0 {
            continue;
        }
        let report = classify_subspace(&space, &sub).unwrap();
        assert_eq!(report.tag, SubspaceClass::StrictlyPositive);
        let c = report.uniform_constant.expect("strictly definite subspace has a constant");
        tested += 1;
        for _ in 0..1000 {
            let coeffs = common::rand_vector(&mut rng, sub.dim());
            let v = sub.basis().mul_vec(&coeffs);
            let jn = space.j_norm(&d, &v).unwrap();
            if jn == 0.0 {
                continue;
            }
            let unit: Vec<Quaternion> = v.iter().map(|q| *q * (1.0 / jn)).collect();
            let val = space.inner(&unit, &unit).unwrap().re();
            assert!(val >= c * (1.0 - 1e-8), "uniform bound violated: {val} < {c}");
        }
    }
    assert!(tested >= 20);
}

#[test]
fn polar_reverses_the_loewner_order() {
    let mut rng = common::rng(67);
    for trial in 0..25 {
        let n = 2 + trial % 4;
        let space = common::rand_nondegenerate_space(&mut rng, n);
        // h2 = h1 + PSD so that |v|_1 <= |v|_2 pointwise
        let base = common::rand_hermitian(&mut rng, n);
        let shift = QMatrix::identity(n).scale(base.frobenius_norm() + 1.0);
        let h1_mat = base.add(&shift); // comfortably positive definite
        let bump = common::rand_matrix(&mut rng, n, n);
        let h2_mat = h1_mat.add(&bump.adjoint().mul(&bump)).hermitize();
        let h1 = NormQ::new(h1_mat).unwrap();
        let h2 = NormQ::new(h2_mat).unwrap();
        let p1 = norms::polar(&space, &h1).unwrap();
        let p2 = norms::polar(&space, &h2).unwrap();
        for _ in 0..50 {
            let v = common::rand_vector(&mut rng, n);
            assert!(h1.eval(&v) <= h2.eval(&v) * (1.0 + 1e-12));
            let a = p2.eval(&v);
            let b = p1.eval(&v);
            assert!(a <= b * (1.0 + 1e-10), "order reversal failed: {a} > {b}");
        }
    }
}

#[test]
fn cauchy_schwarz_holds_under_self_polar_iterates() {
    let mut rng = common::rng(71);
    for trial in 0..15 {
        let n = 2 + trial % 4;
        let space = common::rand_nondegenerate_space(&mut rng, n);
        let result = norms::self_polar(&space, 1e-12, 200).unwrap();

        let h0 = NormQ::new(QMatrix::identity(n).scale(space.scale())).unwrap();
        let h1_mat = h0
            .matrix()
            .add(&norms::polar(&space, &h0).unwrap().matrix)
            .scale(0.5)
            .hermitize();
        let h1 = NormQ::new(h1_mat).unwrap();
        for norm in [&h0, &h1, &result.hinf] {
            for _ in 0..40 {
                let u = common::rand_vector(&mut rng, n);
                let v = common::rand_vector(&mut rng, n);
                let form = space.inner(&u, &v).unwrap().abs();
                let bound = norm.eval(&u) * norm.eval(&v);
                assert!(form <= bound * (1.0 + 1e-10), "{form} > {bound}");
            }
        }
    }
}

#[test]
fn self_polar_limit_matches_j_gram() {
    let mut rng = common::rng(73);
    for trial in 0..10 {
        let n = 2 + trial % 4;
        let space = common::rand_nondegenerate_space(&mut rng, n);
        let result = norms::self_polar(&space, 1e-12, 200).unwrap();
        let d = space.fundamental_decomposition();
        let jgram = d.j_gram(&space);
        let diff = result.hinf.matrix().sub(&jgram).frobenius_norm();
        assert!(diff <= 1e-8 * space.scale(), "distance to J-Gram: {diff}");
    }
}

#[test]
fn weak_seminorm_is_absolutely_homogeneous() {
    let mut rng = common::rng(79);
    for _ in 0..40 {
        let n = 3;
        let space = common::rand_nondegenerate_space(&mut rng, n);
        let v = common::rand_vector(&mut rng, n);
        let w = common::rand_vector(&mut rng, n);
        let c = common::rand_quat(&mut rng);
        let scaled: Vec<Quaternion> = v.iter().map(|q| *q * c).collect();
        let lhs = norms::weak_seminorm(&space, &w, &scaled).unwrap();
        let rhs = c.abs() * norms::weak_seminorm(&space, &w, &v).unwrap();
        assert!((lhs - rhs).abs() <= 1e-10 * rhs.max(1.0));
    }
}

#[test]
fn restricted_gram_of_full_space_is_gram() {
    let mut rng = common::rng(83);
    let space = common::rand_nondegenerate_space(&mut rng, 4);
    let full = Subspace::full(4);
    let g = restricted_gram(&space, &full);
    assert!(g.sub(space.gram()).frobenius_norm() < 1e-12);
}

#[test]
fn companion_contains_the_isotropic_part() {
    let mut rng = common::rng(89);
    for trial in 0..20 {
        let n = 3 + trial % 3;
        let space = common::rand_degenerate_space(&mut rng, n, 1);
        let sub = common::rand_subspace(&mut rng, n, 1 + trial % (n - 1));
        let companion = orthogonal_companion(&space, &sub).unwrap();
        assert!(companion.contains(&space.isotropic_part()));
    }
}
