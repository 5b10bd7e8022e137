use tncg::gammarep::{dirac_flat, euclidean_gammas};
use tncg::models::{self, ed_dirac, MASS};
use tncg::oracle::{compare_ops, OpTerm, ORACLE_TOL, ORACLE_TRIALS};
use tncg::triple::{check_order_one, check_order_zero, check_real_signs, finite_from_json, AlgebraElt, KoSigns};
use tncg::twist::{compat_sign, minimal_twist_with, rho_product, TwistError};
use tncg::{Cq, MatDiffOp, SymExpr, SymMatrix};

fn signs(e: i8, ep: i8, epp: i8) -> KoSigns {
    KoSigns { epsilon: e, epsilon_prime: ep, epsilon_second: epp }
}

#[test]
fn ko_signs_of_all_models() {
    let want = [
        ("manifold", signs(-1, 1, 1)),
        ("F2", signs(1, 1, -1)),
        ("F_ED", signs(1, 1, -1)),
        ("manifoldxF2", signs(-1, 1, -1)),
        ("manifoldxF_ED", signs(-1, 1, -1)),
    ];
    for (t, (name, s)) in models::untwisted_models().iter().zip(want) {
        assert_eq!(t.name, name);
        assert_eq!(check_real_signs(t).unwrap(), s, "{name}");
        t.check_grading().unwrap();
        t.rep.check().unwrap();
    }
}

#[test]
fn wrong_declared_dimension_is_reported() {
    let mut t = models::manifold();
    t.ko_dim = 6;
    let err = check_real_signs(&t).unwrap_err().to_string();
    assert!(err.contains("J² = εI"), "{err}");
}

#[test]
fn all_untwisted_axioms_hold() {
    for t in models::untwisted_models() {
        let r = t.check_axioms();
        assert!(r.passed(), "{r}");
    }
}

#[test]
fn twisted_models_pass_their_checks() {
    for tw in models::twisted_models() {
        let r = tw.check();
        assert!(r.passed(), "{r}");
        assert_eq!(tw.eps3, -1, "{}", tw.triple.name);
        assert!(tw.warnings.is_empty());
    }
}

#[test]
fn corrupted_representation_fails_order_zero() {
    let mut t = models::manifold_x_ed();
    // the electron slot leaks into the e_L <- ebar_L block
    let mut f = t.rep.mats[0].clone();
    for k in 0..4 {
        f.set(k, 8 + k, SymExpr::one());
    }
    t.rep.mats[0] = f;
    assert!(t.rep.check().is_err());
    let r = check_order_zero(&t);
    assert!(!r.passed());
    assert!(r.checks[0].witness.as_deref().unwrap().contains("entry"));
}

#[test]
fn product_dirac_matches_direct_formula() {
    let g = euclidean_gammas();
    let direct = MatDiffOp::kron_outer(&SymMatrix::identity(4), &dirac_flat())
        .add(&MatDiffOp::mult(SymMatrix::kron(&ed_dirac(&SymExpr::sym(MASS)), &g.gamma5)))
        .unwrap();
    assert_eq!(models::manifold_x_ed().dirac, direct);
    let u1 = models::manifold_x_two_point();
    assert_eq!(u1.dirac, MatDiffOp::kron_outer(&SymMatrix::identity(2), &dirac_flat()));
    assert_eq!(u1.ko_dim, 2);
    assert_eq!(models::manifold_x_ed().ko_dim, 2);
}

#[test]
fn json_description_loads_the_ed_triple() {
    let loaded = finite_from_json(models::ED_FINITE_JSON).unwrap();
    let built = models::ed_finite();
    assert_eq!(loaded.rep, built.rep);
    assert_eq!(loaded.dirac, built.dirac);
    assert_eq!(loaded.grading, built.grading);
    assert_eq!(loaded.real, built.real);
    assert_eq!(loaded.basis, built.basis);
    assert!(finite_from_json("{}").is_err());
}

#[test]
fn manifold_twist_shape() {
    let tw = models::manifold_twisted();
    let a = AlgebraElt::from_names(&["f", "f'"]);
    let f = SymExpr::sym("f");
    let fp = SymExpr::sym("f'");
    assert_eq!(tw.triple.rep.matrix(&a), SymMatrix::diag(vec![f.clone(), f.clone(), fp.clone(), fp]));
    assert_eq!(tw.r, euclidean_gammas().gamma[0]);
    // [ð, π(a)]_ρ = −iγ^μ ∂_μ π(a)
    let tc = tw.twisted_commutator(&a).unwrap();
    let g = euclidean_gammas();
    let pa = tw.triple.rep.matrix(&a);
    let mut want = MatDiffOp::zero(4);
    for mu in 0..4 {
        want = want.add(&MatDiffOp::mult(g.gamma[mu].mul(&pa.derive(mu).unwrap()).scale(-Cq::i()))).unwrap();
    }
    assert_eq!(tc, want);
    // constant (c, c) gives zero
    let c = AlgebraElt(vec![SymExpr::int(3), SymExpr::int(3)]);
    assert!(tw.twisted_commutator(&c).unwrap().is_zero());
}

#[test]
fn twisted_commutator_agrees_with_oracle() {
    for tw in models::twisted_models() {
        let a = tw.slot_element();
        let (p, rp) = tw.pi_pair(&a);
        let d = &tw.triple.dirac;
        let lhs = OpTerm::from(tncg::GenOp::Linear(tw.twisted_commutator(&a).unwrap()));
        let rhs = OpTerm::diff(
            OpTerm::compose(vec![OpTerm::op(d), OpTerm::op(&p)]),
            OpTerm::compose(vec![OpTerm::op(&rp), OpTerm::op(d)]),
        );
        let v = compare_ops(&lhs, &rhs, ORACLE_TRIALS, 7).unwrap();
        assert!(v.passes(ORACLE_TOL), "{}: {v:?}", tw.triple.name);
    }
}

#[test]
fn untwisted_product_order_one() {
    assert!(check_order_one(&models::manifold_x_ed(), None).passed());
}

#[test]
fn gamma_twist_commutation() {
    // γ^μ π(a) = π(ρ(a)) γ^μ
    for tw in models::twisted_models() {
        let a = tw.slot_element();
        let nf = tw.triple.dim() / 4;
        for gm in euclidean_gammas().gamma {
            let big = SymMatrix::kron(&SymMatrix::identity(nf), &gm);
            assert_eq!(big.mul(&tw.triple.rep.matrix(&a)), tw.triple.rep.matrix(&tw.rho(&a)).mul(&big));
        }
    }
}

#[test]
fn rho_adjoint_law() {
    // ⟨ψ, π(a)φ⟩_ρ = ⟨π(ρ(a))†ψ, φ⟩_ρ
    let tw = models::manifold_twisted();
    let a = tw.slot_element();
    let psi: Vec<SymExpr> = (0..4).map(|k| SymExpr::sym(&format!("psi{k}"))).collect();
    let phi: Vec<SymExpr> = (0..4).map(|k| SymExpr::sym(&format!("phi{k}"))).collect();
    let lhs = rho_product(&psi, &tw.triple.rep.matrix(&a).apply(&phi), &tw.r);
    let moved = tw.triple.rep.matrix(&tw.rho(&a)).adjoint().apply(&psi);
    assert_eq!(lhs, rho_product(&moved, &phi, &tw.r));
    // R = γ⁰ pairs the chiral halves
    let krein = rho_product(&psi, &phi, &tw.r);
    let want = (0..4).fold(SymExpr::zero(), |acc, k| &acc + &(&psi[k].conj() * &phi[(k + 2) % 4]));
    assert_eq!(krein, want);
}

#[test]
fn compat_sign_rejects_non_unitary_twist_data() {
    let t = models::manifold();
    assert!(matches!(minimal_twist_with(&t, SymMatrix::identity(4), false), Err(TwistError::NotImplementing)));
    let g = euclidean_gammas();
    assert_eq!(compat_sign(&g.gamma[0], &tncg::gammarep::charge_conjugation()).unwrap(), -1);
    assert_eq!(compat_sign(&g.gamma5, &tncg::gammarep::charge_conjugation()).unwrap(), 1);
}

#[test]
fn non_faithful_restriction_detected() {
    // F₂ alone: each slot lives on a single grading eigenspace.
    let t = models::two_point().as_triple();
    let r = SymMatrix::from_rows(2, vec![SymExpr::zero(), SymExpr::one(), SymExpr::one(), SymExpr::zero()]);
    assert!(matches!(minimal_twist_with(&t, r.clone(), false), Err(TwistError::NotFaithful(..))));
}
