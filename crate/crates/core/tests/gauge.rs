use tncg::fluct::{build_one_form, build_untwisted_one_form, fluctuate, manifold_one_form_template, ChiralBlocks, OneFormData};
use tncg::gauge::{ad, field_shift_report, transform_covariant_dirac, transform_one_form, GaugeAngles, UnitaryElt};
use tncg::models;
use tncg::oracle::{compare_ops, OpTerm, ORACLE_TOL, ORACLE_TRIALS};
use tncg::triple::AlgebraElt;
use tncg::twist::TwistedTripleData;
use tncg::{Cq, GenOp, MatDiffOp, SymExpr, SymMatrix};

fn th(n: &str) -> SymExpr {
    SymExpr::real(n)
}

fn generic_pair(tw: &TwistedTripleData) -> (AlgebraElt, AlgebraElt) {
    (tw.slot_element(), AlgebraElt::generic(&tw.triple.rep, "b_"))
}

fn ed_angles() -> GaugeAngles {
    GaugeAngles { theta: &th("alpha") - &th("beta'"), theta_prime: &th("alpha'") - &th("beta") }
}

#[test]
fn identity_leaves_one_form_unchanged() {
    for tw in models::twisted_models() {
        let omega = build_one_form(&tw, &[generic_pair(&tw)]).unwrap();
        let u = UnitaryElt::identity(tw.triple.rep.slots.len());
        let out = transform_one_form(&tw.triple, Some(&tw.flip), &omega, &u).unwrap();
        assert_eq!(out.omega.op, omega.op);
        let d = fluctuate(&tw, &omega).unwrap().d_omega;
        assert_eq!(transform_covariant_dirac(&tw.triple, Some(&tw.flip), &d, &u).unwrap(), d);
    }
}

#[test]
fn manifold_one_form_law() {
    let tw = models::manifold_twisted();
    let omega = OneFormData::from_blocks(manifold_one_form_template());
    let u = UnitaryElt::twisted(&["theta"], false);
    let out = transform_one_form(&tw.triple, Some(&tw.flip), &omega, &u).unwrap();
    let shift = out.shift.unwrap();
    for mu in 0..4 {
        // h ↦ h − i∂θ and h′ ↦ h′ − i∂θ′
        assert_eq!(shift.0[0].plus[mu], &SymExpr::constant(-Cq::i()) * &th("theta").derive(mu).unwrap());
        assert_eq!(shift.0[0].minus[mu], &SymExpr::constant(-Cq::i()) * &th("theta'").derive(mu).unwrap());
    }
    let angles = GaugeAngles { theta: th("theta"), theta_prime: th("theta'") };
    let r = field_shift_report("manifold", omega.blocks.as_ref().unwrap(), out.omega.blocks.as_ref().unwrap(), &angles).unwrap();
    assert!(r.passed(), "{r}");
}

#[test]
fn manifold_fluctuation_is_invariant() {
    let tw = models::manifold_twisted();
    let omega = build_one_form(&tw, &[generic_pair(&tw)]).unwrap();
    let u = UnitaryElt::twisted(&["theta"], false);
    let after = transform_one_form(&tw.triple, Some(&tw.flip), &omega, &u).unwrap().omega;
    let (x0, x1) = (fluctuate(&tw, &omega).unwrap(), fluctuate(&tw, &after).unwrap());
    assert_eq!(x0.x().unwrap(), x1.x().unwrap());
    assert_eq!(x0.fluct, x1.fluct);
}

#[test]
fn ed_and_two_point_laws() {
    for tw in [models::two_point_twisted(), models::ed_twisted()] {
        let omega = build_one_form(&tw, &[generic_pair(&tw)]).unwrap();
        let u = UnitaryElt::twisted(&["alpha", "beta"], false);
        let after = transform_one_form(&tw.triple, Some(&tw.flip), &omega, &u).unwrap().omega;
        let (f0, f1) = (fluctuate(&tw, &omega).unwrap(), fluctuate(&tw, &after).unwrap());
        let r =
            field_shift_report(&tw.triple.name, f0.blocks.as_ref().unwrap(), f1.blocks.as_ref().unwrap(), &ed_angles()).unwrap();
        assert!(r.passed(), "{r}");
        // a wrong angle is caught
        let wrong = GaugeAngles { theta: th("alpha"), theta_prime: th("alpha'") };
        let bad = field_shift_report("x", f0.blocks.as_ref().unwrap(), f1.blocks.as_ref().unwrap(), &wrong).unwrap();
        assert!(!bad.passed());
    }
}

#[test]
fn identified_phases_shift_both_blocks_alike() {
    let tw = models::ed_twisted();
    let omega = build_one_form(&tw, &[generic_pair(&tw)]).unwrap();
    let u = UnitaryElt::twisted(&["alpha", "beta"], true);
    let after = transform_one_form(&tw.triple, Some(&tw.flip), &omega, &u).unwrap().omega;
    let (f0, f1) = (fluctuate(&tw, &omega).unwrap(), fluctuate(&tw, &after).unwrap());
    let vt = &th("alpha") - &th("beta");
    let angles = GaugeAngles { theta: vt.clone(), theta_prime: vt };
    let r = field_shift_report("ED", f0.blocks.as_ref().unwrap(), f1.blocks.as_ref().unwrap(), &angles).unwrap();
    assert!(r.passed(), "{r}");
}

#[test]
fn untwisted_u1_gauge_field() {
    let t = models::manifold_x_two_point();
    let a = AlgebraElt::generic(&t.rep, "a_");
    let b = AlgebraElt::generic(&t.rep, "b_");
    let omega = build_untwisted_one_form(&t, &[(a, b)]).unwrap();
    let u = UnitaryElt::new(&["alpha", "beta"]);
    let after = transform_one_form(&t, None, &omega, &u).unwrap().omega;
    let fl = |w: &OneFormData| {
        let jw = tncg::sandwich_antilinear(&t.real, &w.op).unwrap();
        tncg::fluct::decompose(&w.op.add(&jw).unwrap()).unwrap()
    };
    let vt = &th("alpha") - &th("beta");
    let angles = GaugeAngles { theta: vt.clone(), theta_prime: vt };
    let r = field_shift_report("MxF2", &fl(&omega), &fl(&after), &angles).unwrap();
    assert!(r.passed(), "{r}");
}

fn commuting_square(t: &tncg::triple::SpectralTripleData, flip: Option<&[usize]>, omega: &OneFormData, u: &UnitaryElt) {
    let eps_p = tncg::triple::check_real_signs(t).unwrap().epsilon_prime;
    let fl = |w: &MatDiffOp| {
        let jw = tncg::sandwich_antilinear(&t.real, w).unwrap();
        t.dirac.add(&w.add(&jw.scale(Cq::from(i128::from(eps_p)))).unwrap()).unwrap()
    };
    let lhs = transform_covariant_dirac(t, flip, &fl(&omega.op), u).unwrap();
    let after = transform_one_form(t, flip, omega, u).unwrap().omega;
    assert_eq!(lhs, fl(&after.op), "{}", t.name);
}

#[test]
fn transform_and_fluctuate_commute() {
    for tw in models::twisted_models() {
        let omega = build_one_form(&tw, &[generic_pair(&tw)]).unwrap();
        let names: Vec<String> = (0..tw.base.rep.slots.len()).map(|k| format!("t{k}")).collect();
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        commuting_square(&tw.triple, Some(&tw.flip), &omega, &UnitaryElt::twisted(&names, false));
    }
    let t = models::manifold_x_ed();
    let omega = build_untwisted_one_form(&t, &[(AlgebraElt::generic(&t.rep, "a_"), AlgebraElt::generic(&t.rep, "b_"))]).unwrap();
    commuting_square(&t, None, &omega, &UnitaryElt::new(&["alpha", "beta"]));
}

#[test]
fn adjoint_action_is_unitary() {
    for tw in models::twisted_models() {
        let names: Vec<String> = (0..tw.triple.rep.slots.len()).map(|k| format!("t{k}")).collect();
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        let u = UnitaryElt::new(&names);
        let (d1, d2) = u.unitarity_defect(&tw.triple.rep);
        assert!(d1.is_zero() && d2.is_zero());
        let a = ad(&tw.triple, &u.elt).unwrap().as_matrix().unwrap();
        let b = ad(&tw.triple, &u.star()).unwrap().as_matrix().unwrap();
        assert_eq!(a.adjoint(), b);
        assert_eq!(a.mul(&b), SymMatrix::identity(tw.triple.dim()));
    }
}

#[test]
fn covariant_dirac_agrees_with_oracle() {
    for tw in models::twisted_models() {
        let omega = build_one_form(&tw, &[generic_pair(&tw)]).unwrap();
        let d = fluctuate(&tw, &omega).unwrap().d_omega;
        let names: Vec<String> = (0..tw.triple.rep.slots.len()).map(|k| format!("t{k}")).collect();
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        let u = UnitaryElt::new(&names);
        let got = transform_covariant_dirac(&tw.triple, Some(&tw.flip), &d, &u).unwrap();
        let j = &tw.triple.real;
        let pu = |a: &AlgebraElt| OpTerm::op(&tw.triple.rep.op(a));
        let ru = tw.rho(&u.elt);
        let rhs = OpTerm::compose(vec![
            pu(&ru),
            OpTerm::Anti(j.clone()),
            pu(&ru),
            OpTerm::Anti(j.inverse().unwrap()),
            OpTerm::op(&d),
            pu(&u.star()),
            OpTerm::Anti(j.clone()),
            pu(&u.star()),
            OpTerm::Anti(j.inverse().unwrap()),
        ]);
        let v = compare_ops(&OpTerm::from(GenOp::Linear(got)), &rhs, ORACLE_TRIALS, 5).unwrap();
        assert!(v.passes(ORACLE_TOL), "{}: {v:?}", tw.triple.name);
    }
}

#[test]
fn shape_mismatch_is_an_error() {
    let a = ChiralBlocks(vec![]);
    let b = manifold_one_form_template();
    let angles = GaugeAngles { theta: th("t"), theta_prime: th("t") };
    assert!(field_shift_report("x", &a, &b, &angles).is_err());
}
