use tncg::fluct::{
    build_one_form, build_untwisted_one_form, decompose, ed_fluct_template, finite_part_fluctuation, fluctuate, impose_blocks,
    manifold_fluct_template, manifold_one_form_template, real_parts_of_z, selfadjoint_constraints, two_point_fluct_template,
    ChiralBlock, ChiralBlocks, Constraint,
};
use tncg::models::{self, ed_dirac, MASS};
use tncg::oracle::{compare_ops, OpTerm, ORACLE_TOL, ORACLE_TRIALS};
use tncg::triple::AlgebraElt;
use tncg::{Cq, GenOp, SymExpr, SymMatrix};

fn s(n: &str) -> SymExpr {
    SymExpr::sym(n)
}

fn d(n: &str, mu: usize) -> SymExpr {
    s(n).derive(mu).unwrap()
}

fn dbar(n: &str, mu: usize) -> SymExpr {
    s(n).conj().derive(mu).unwrap()
}

fn elt(names: &[&str]) -> AlgebraElt {
    AlgebraElt::from_names(names)
}

fn solved(cs: &[Constraint], name: &str) -> SymExpr {
    cs.iter().find(|c| c.unknown == name).unwrap_or_else(|| panic!("{name} unsolved in {cs:?}")).rhs.clone()
}

/// Applies `z = f + ig`, `z′ = f′ + ig′` to a template.
fn in_real_parts(t: &ChiralBlocks) -> ChiralBlocks {
    let subs = real_parts_of_z();
    let subs: Vec<(&str, SymExpr)> = subs.iter().map(|(n, e)| (n.as_str(), e.clone())).collect();
    ChiralBlocks(t.0.iter().map(|b| b.try_map(|e| e.substitute(&subs)).unwrap()).collect())
}

fn real_block(plus: impl Fn(usize) -> SymExpr, minus: impl Fn(usize) -> SymExpr) -> SymMatrix {
    ChiralBlock::from_fn(plus, minus).matrix()
}

fn re(n: &str, mu: usize) -> SymExpr {
    SymExpr::real(&format!("{n}{mu}"))
}

#[test]
fn manifold_one_form_fields() {
    let tw = models::manifold_twisted();
    let omega = build_one_form(&tw, &[(elt(&["g", "g'"]), elt(&["f", "f'"]))]).unwrap();
    let b = &omega.blocks.as_ref().expect("structured").0[0];
    for mu in 0..4 {
        assert_eq!(b.plus[mu], &s("g'") * &d("f", mu), "h");
        assert_eq!(b.minus[mu], &s("g") * &d("f'", mu), "h'");
    }
    let fl = fluctuate(&tw, &omega).unwrap();
    let (z, zp) = fl.z().unwrap();
    for mu in 0..4 {
        assert_eq!(z[mu], &b.plus[mu] + &b.plus[mu].conj());
        assert_eq!(zp[mu], &b.minus[mu] + &b.minus[mu].conj());
    }
    assert!(fl.y().unwrap().plus.iter().all(SymExpr::is_zero));
    assert_eq!(fl.d_omega, tw.triple.dirac.add(&fl.fluct).unwrap());
}

#[test]
fn manifold_selfadjointness() {
    let cs = selfadjoint_constraints(&manifold_one_form_template(), |n| n.starts_with("h'")).unwrap();
    assert_eq!(cs.len(), 4);
    for mu in 0..4 {
        assert_eq!(solved(&cs, &format!("h'{mu}")), -s(&format!("h{mu}")).conj());
    }
    let cs = selfadjoint_constraints(&manifold_fluct_template(), |n| n.starts_with("f'")).unwrap();
    for mu in 0..4 {
        assert_eq!(solved(&cs, &format!("f'{mu}")), -re("f", mu));
    }
    // X_μ = f_μ γ⁵
    let x = impose_blocks(&manifold_fluct_template(), &cs).unwrap();
    let g = tncg::gammarep::euclidean_gammas();
    let want =
        (0..4).fold(SymMatrix::zero(4), |acc, mu| acc.add(&g.gamma[mu].mul(&g.gamma5).scale_expr(&re("f", mu)).scale(-Cq::i())));
    assert_eq!(x.assemble(), want);
}

#[test]
fn selfadjoint_one_form_keeps_only_real_part() {
    let tw = models::manifold_twisted();
    let cs = selfadjoint_constraints(&manifold_one_form_template(), |n| n.starts_with("h'")).unwrap();
    let omega = tncg::fluct::OneFormData::from_blocks(impose_blocks(&manifold_one_form_template(), &cs).unwrap());
    let fl = fluctuate(&tw, &omega).unwrap();
    assert!(!fl.fluct.is_zero());
    let x = fl.x().unwrap();
    for mu in 0..4 {
        assert_eq!(x.plus[mu], s(&format!("h{mu}")).re().scale(Cq::from(2)));
    }
    // purely imaginary h gives X = 0
    let subs: Vec<(String, SymExpr)> = (0..4).map(|mu| (format!("h{mu}"), &SymExpr::i() * &re("k", mu))).collect();
    let subs: Vec<(&str, SymExpr)> = subs.iter().map(|(n, e)| (n.as_str(), e.clone())).collect();
    let blocks = fl.blocks.unwrap();
    for b in &blocks.0 {
        for e in b.plus.iter().chain(&b.minus) {
            assert!(e.substitute(&subs).unwrap().is_zero());
        }
    }
}

#[test]
fn two_point_fluctuation_fields() {
    let tw = models::two_point_twisted();
    let a = elt(&["f", "g", "f'", "g'"]);
    let b = elt(&["v", "w", "v'", "w'"]);
    let omega = build_one_form(&tw, &[(a, b)]).unwrap();
    let fl = fluctuate(&tw, &omega).unwrap();
    let (z, zp) = fl.z().unwrap();
    for mu in 0..4 {
        assert_eq!(z[mu], &(&s("f'") * &d("v", mu)) + &(&s("g").conj() * &dbar("w'", mu)), "z");
        assert_eq!(zp[mu], &(&s("f") * &d("v'", mu)) + &(&s("g'").conj() * &dbar("w", mu)), "z'");
    }
    let blocks = fl.blocks.as_ref().unwrap();
    assert_eq!(blocks.0[1], blocks.0[0].map(SymExpr::conj));
    // X ⊗ I₂ + iY ⊗ γ_F
    let (x, y) = (fl.x().unwrap().matrix(), fl.y().unwrap().matrix());
    let gf = SymMatrix::diag(vec![SymExpr::one(), SymExpr::int(-1)]);
    let want = SymMatrix::kron(&SymMatrix::identity(2), &x).add(&SymMatrix::kron(&gf, &y).scale(Cq::i()));
    assert_eq!(fl.fluct.as_matrix().unwrap(), want);
}

fn check_real_constraints(template: &ChiralBlocks) -> Vec<Constraint> {
    let cs = selfadjoint_constraints(&in_real_parts(template), |n| n.contains('\'')).unwrap();
    assert_eq!(cs.len(), 8, "{cs:?}");
    for mu in 0..4 {
        assert_eq!(solved(&cs, &format!("f'{mu}")), -re("f", mu));
        assert_eq!(solved(&cs, &format!("g'{mu}")), re("g", mu));
    }
    cs
}

#[test]
fn two_point_selfadjointness() {
    let cs = selfadjoint_constraints(&two_point_fluct_template(), |n| n.starts_with("z'")).unwrap();
    for mu in 0..4 {
        assert_eq!(solved(&cs, &format!("z'{mu}")), -s(&format!("z{mu}")).conj());
    }
    let cs = check_real_constraints(&two_point_fluct_template());
    let z = impose_blocks(&in_real_parts(&two_point_fluct_template()), &cs).unwrap();
    let x = real_block(|mu| re("f", mu), |mu| -re("f", mu));
    let y = real_block(|mu| re("g", mu), |mu| re("g", mu));
    let gf = SymMatrix::diag(vec![SymExpr::one(), SymExpr::int(-1)]);
    let want = SymMatrix::kron(&SymMatrix::identity(2), &x).add(&SymMatrix::kron(&gf, &y).scale(Cq::i()));
    assert_eq!(z.assemble(), want);
}

#[test]
fn ed_fluctuation_shape_and_selfadjoint_form() {
    let tw = models::ed_twisted();
    let omega = build_one_form(&tw, &[(elt(&["f", "g", "f'", "g'"]), elt(&["v", "w", "v'", "w'"]))]).unwrap();
    let fl = fluctuate(&tw, &omega).unwrap();
    let blocks = fl.blocks.as_ref().expect("structured");
    let (z, zp) = fl.z().unwrap();
    for mu in 0..4 {
        assert_eq!(z[mu], &(&s("f'") * &d("v", mu)) + &(&s("g").conj() * &dbar("w'", mu)));
        assert_eq!(zp[mu], &(&s("f") * &d("v'", mu)) + &(&s("g'").conj() * &dbar("w", mu)));
    }
    // same pattern as the template diag(Z, Z', Z̄, Z̄')
    let t = ed_fluct_template();
    let subs: Vec<(String, SymExpr)> =
        (0..4).flat_map(|mu| [(format!("z{mu}"), z[mu].clone()), (format!("z'{mu}"), zp[mu].clone())]).collect();
    let subs: Vec<(&str, SymExpr)> = subs.iter().map(|(n, e)| (n.as_str(), e.clone())).collect();
    let filled = ChiralBlocks(t.0.iter().map(|b| b.try_map(|e| e.substitute(&subs)).unwrap()).collect());
    assert_eq!(&filled, blocks);

    let cs = check_real_constraints(&t);
    let zz = impose_blocks(&in_real_parts(&t), &cs).unwrap();
    let x = real_block(|mu| re("f", mu), |mu| -re("f", mu));
    let y = real_block(|mu| re("g", mu), |mu| re("g", mu));
    let ip = SymMatrix::diag([1, -1, 1, -1].map(SymExpr::int).to_vec());
    let ipp = SymMatrix::diag([1, 1, -1, -1].map(SymExpr::int).to_vec());
    let want = SymMatrix::kron(&ip, &x).add(&SymMatrix::kron(&ipp, &y).scale(Cq::i()));
    assert_eq!(zz.assemble(), want);
}

#[test]
fn untwisted_case_forces_vanishing_real_part() {
    let t = models::manifold_x_ed();
    let omega = build_untwisted_one_form(&t, &[(elt(&["f", "g"]), elt(&["v", "w"]))]).unwrap();
    let fl_blocks = omega.blocks.expect("structured");
    for b in &fl_blocks.0 {
        assert_eq!(b.plus, b.minus);
    }
    // z′ = z in the self-adjointness template
    let tmpl = ed_fluct_template();
    let tied: Vec<(String, SymExpr)> = (0..4).map(|mu| (format!("z'{mu}"), s(&format!("z{mu}")))).collect();
    let tied: Vec<(&str, SymExpr)> = tied.iter().map(|(n, e)| (n.as_str(), e.clone())).collect();
    let tmpl = ChiralBlocks(tmpl.0.iter().map(|b| b.try_map(|e| e.substitute(&tied)).unwrap()).collect());
    let cs = selfadjoint_constraints(&in_real_parts(&tmpl), |n| n.starts_with('f')).unwrap();
    for mu in 0..4 {
        assert!(solved(&cs, &format!("f{mu}")).is_zero());
    }
}

#[test]
fn finite_part_of_twisted_commutator_vanishes() {
    let tw = models::ed_twisted();
    assert!(finite_part_fluctuation(&tw, &ed_dirac(&s(MASS))).unwrap().is_zero());
    let mut bad = ed_dirac(&s(MASS));
    bad.set(0, 2, SymExpr::one());
    bad.set(2, 0, SymExpr::one());
    assert!(!finite_part_fluctuation(&tw, &bad).unwrap().is_zero());
}

#[test]
fn one_form_agrees_with_oracle() {
    for tw in models::twisted_models() {
        let x = tw.rho(&tw.slot_element());
        let y = AlgebraElt::generic(&tw.triple.rep, "y_");
        let omega = build_one_form(&tw, &[(x.clone(), y.clone())]).unwrap();
        let (p, rp) = tw.pi_pair(&y);
        let px = tw.triple.rep.op(&x);
        let dd = &tw.triple.dirac;
        let rhs = OpTerm::compose(vec![
            OpTerm::op(&px),
            OpTerm::diff(
                OpTerm::compose(vec![OpTerm::op(dd), OpTerm::op(&p)]),
                OpTerm::compose(vec![OpTerm::op(&rp), OpTerm::op(dd)]),
            ),
        ]);
        let v = compare_ops(&OpTerm::from(GenOp::Linear(omega.op.clone())), &rhs, ORACLE_TRIALS, 11).unwrap();
        assert!(v.passes(ORACLE_TOL), "{}: {v:?}", tw.triple.name);
    }
}

#[test]
fn unstructured_operator_is_refused() {
    let m = SymMatrix::diag(vec![SymExpr::one(), SymExpr::zero(), SymExpr::zero(), SymExpr::zero()]);
    assert!(decompose(&tncg::MatDiffOp::mult(m)).is_err());
    assert!(decompose(&tncg::gammarep::dirac_flat()).is_err());
}
