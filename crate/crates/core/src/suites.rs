//! Named verification suites, each assembled from the module checkers into
//! one [`Report`]. Every randomized check draws from the configured seed.

use crate::boost::boost_report;
use crate::clifford::{
    center_dimension, classify, classify_by_recursion, monomial_product, CliffordTag, Field, Sign, CLASSIFICATION_TABLE,
};
use crate::coeff::Cq;
use crate::fluct::{
    build_one_form, build_untwisted_one_form, decompose, ed_fluct_template, finite_part_fluctuation, fluctuate, impose_blocks,
    manifold_fluct_template, manifold_one_form_template, real_parts_of_z, selfadjoint_constraints, two_point_fluct_template,
    ChiralBlocks, Constraint, OneFormData,
};
use crate::gammarep::euclidean_gammas;
use crate::gauge::{field_shift_report, transform_covariant_dirac, transform_one_form, GaugeAngles, UnitaryElt};
use crate::grassmann::{bilinear_density, generic_spinor, symmetry_check};
use crate::lichnerowicz::lichnerowicz_report;
use crate::models::{self, ed_dirac, MASS};
use crate::operator::{AntilinearOp, GenOp, MatDiffOp, SymMatrix};
use crate::oracle::{
    compare_density, compare_ops, compare_transpose_symmetry, BilinearKernel, OpTerm, OracleError, OracleVerdict, ORACLE_TOL,
    ORACLE_TRIALS,
};
use crate::report::{Check, Report};
use crate::scenario::{scenario, SCENARIOS};
use crate::symfield::SymExpr;
use crate::triple::{check_real_signs, AlgebraElt, SpectralTripleData};
use crate::twist::TwistedTripleData;
use std::collections::BTreeSet;
use std::fmt::Display;
use thiserror::Error;

/// Suite names accepted by [`run_suite`]; `all` runs the others.
pub const SUITES: [&str; 9] = ["axioms", "twist", "fluct", "gauge", "action", "boost", "lichnerowicz", "clifford", "all"];

/// Largest rapidity drawn by the boost suite.
pub const MAX_RAPIDITY: f64 = 5.0;

#[derive(Debug, Error, PartialEq)]
pub enum SuiteError {
    #[error("unknown suite `{0}` (expected one of: {list})", list = SUITES.join(", "))]
    Unknown(String),
}

/// Randomness and sample sizes shared by every suite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub boost_trials: usize,
    pub oracle_trials: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 42, boost_trials: 100, oracle_trials: ORACLE_TRIALS }
    }
}

impl SuiteConfig {
    /// Seed of one randomized check, fixed by the run seed and the check's tag.
    fn seed_for(&self, tag: u64) -> u64 {
        self.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(tag)
    }
}

pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<Report, SuiteError> {
    Ok(match name {
        "axioms" => axioms(cfg),
        "twist" => twist(cfg),
        "fluct" => fluct(cfg),
        "gauge" => gauge(cfg),
        "action" => action(cfg),
        "boost" => boost_report(cfg.seed, cfg.boost_trials, MAX_RAPIDITY),
        "lichnerowicz" => lichnerowicz(),
        "clifford" => clifford(),
        "all" => all(cfg),
        other => return Err(SuiteError::Unknown(other.to_string())),
    })
}

/// Every suite on its own thread; checks keep the order of [`SUITES`].
fn all(cfg: &SuiteConfig) -> Report {
    let parts: Vec<Report> = std::thread::scope(|s| {
        let handles: Vec<_> =
            SUITES[..SUITES.len() - 1].iter().map(|name| s.spawn(move || run_suite(name, cfg).expect("listed suite"))).collect();
        handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
    });
    let mut r = Report::new("all");
    for p in parts {
        r.extend(p);
    }
    r
}

/// Runs a fallible block of checks; an error becomes one failed check.
fn guarded<E: Display>(r: &mut Report, anchor: &str, f: impl FnOnce(&mut Report) -> Result<(), E>) {
    if let Err(e) = f(r) {
        r.push(Check::fail(anchor, "could not be evaluated", e.to_string()));
    }
}

fn oracle_check(anchor: String, v: Result<OracleVerdict, OracleError>) -> Check {
    match v {
        Ok(v) if v.passes(ORACLE_TOL) => {
            Check::pass(anchor, format!("max |Δ| = {:.1e} over {} assignments", v.max_delta, v.trials))
        }
        Ok(v) => Check::fail(anchor, format!("tolerance {ORACLE_TOL:.0e} exceeded"), format!("max |Δ| = {:.3e}", v.max_delta)),
        Err(e) => Check::fail(anchor, "oracle error", e.to_string()),
    }
}

fn zero_op(n: usize) -> OpTerm {
    OpTerm::op(&MatDiffOp::zero(n))
}

fn anti(j: &AntilinearOp) -> Result<(OpTerm, OpTerm), String> {
    Ok((OpTerm::Anti(j.clone()), OpTerm::Anti(j.inverse().map_err(|e| e.to_string())?)))
}

/// `[a, J b* J⁻¹]`, applied factor by factor.
fn numeric_order_zero(t: &SpectralTripleData) -> Result<OpTerm, String> {
    let a = OpTerm::op(&t.rep.op(&AlgebraElt::generic(&t.rep, "a_")));
    let bs = OpTerm::op(&t.rep.op(&AlgebraElt::generic(&t.rep, "b_").star()));
    let (j, ji) = anti(&t.real)?;
    let bo = OpTerm::compose(vec![j, bs, ji]);
    Ok(OpTerm::diff(OpTerm::compose(vec![a.clone(), bo.clone()]), OpTerm::compose(vec![bo, a])))
}

/// `[D, a]_ρ b° − ρ(b)° [D, a]_ρ` (plain commutators when `flip` is `None`).
fn numeric_order_one(t: &SpectralTripleData, flip: Option<&[usize]>) -> Result<OpTerm, String> {
    let a = AlgebraElt::generic(&t.rep, "a_");
    let b = AlgebraElt::generic(&t.rep, "b_");
    let (ra, rb) = match flip {
        Some(p) => (a.permute(p), b.permute(p)),
        None => (a.clone(), b.clone()),
    };
    let d = OpTerm::op(&t.dirac);
    let tc = OpTerm::diff(
        OpTerm::compose(vec![d.clone(), OpTerm::op(&t.rep.op(&a))]),
        OpTerm::compose(vec![OpTerm::op(&t.rep.op(&ra)), d]),
    );
    let (j, ji) = anti(&t.real)?;
    let bo = OpTerm::compose(vec![j.clone(), OpTerm::op(&t.rep.op(&b.star())), ji.clone()]);
    let rbo = OpTerm::compose(vec![j, OpTerm::op(&t.rep.op(&rb.star())), ji]);
    Ok(OpTerm::diff(OpTerm::compose(vec![tc.clone(), bo]), OpTerm::compose(vec![rbo, tc])))
}

fn oracle_zero(r: &mut Report, anchor: String, term: Result<OpTerm, String>, cfg: &SuiteConfig, tag: u64) {
    match term {
        Ok(t) => {
            let n = t.dim();
            r.push(oracle_check(anchor, compare_ops(&t, &zero_op(n), cfg.oracle_trials, cfg.seed_for(tag))));
        }
        Err(e) => r.push(Check::fail(anchor, "could not be built", e)),
    }
}

fn axioms(cfg: &SuiteConfig) -> Report {
    let mut r = Report::new("axioms");
    for (k, t) in models::untwisted_models().iter().enumerate() {
        r.extend(t.check_axioms());
        let k = k as u64;
        oracle_zero(&mut r, format!("{}: order-zero condition, numeric oracle", t.name), numeric_order_zero(t), cfg, 100 + k);
        oracle_zero(&mut r, format!("{}: order-one condition, numeric oracle", t.name), numeric_order_one(t, None), cfg, 110 + k);
    }
    r
}

fn twist(cfg: &SuiteConfig) -> Report {
    let mut r = Report::new("twist");
    for (k, tw) in models::twisted_models().iter().enumerate() {
        let k = k as u64;
        let name = &tw.triple.name;
        r.extend(tw.check());
        oracle_zero(
            &mut r,
            format!("{name}: order-zero condition, numeric oracle"),
            numeric_order_zero(&tw.triple),
            cfg,
            200 + k,
        );
        oracle_zero(
            &mut r,
            format!("{name}: twisted order-one condition, numeric oracle"),
            numeric_order_one(&tw.triple, Some(&tw.flip)),
            cfg,
            210 + k,
        );
        let anchor = format!("{name}: twisted commutator, numeric oracle");
        guarded(&mut r, &anchor, |r| {
            let a = tw.slot_element();
            let (p, rp) = tw.pi_pair(&a);
            let d = &tw.triple.dirac;
            let lhs = OpTerm::from(GenOp::Linear(tw.twisted_commutator(&a)?));
            let rhs = OpTerm::diff(
                OpTerm::compose(vec![OpTerm::op(d), OpTerm::op(&p)]),
                OpTerm::compose(vec![OpTerm::op(&rp), OpTerm::op(d)]),
            );
            r.push(oracle_check(anchor.clone(), compare_ops(&lhs, &rhs, cfg.oracle_trials, cfg.seed_for(220 + k))));
            Ok::<_, crate::operator::OpError>(())
        });
    }
    r
}

fn s(n: &str) -> SymExpr {
    SymExpr::sym(n)
}

fn re(n: &str, mu: usize) -> SymExpr {
    SymExpr::real(&format!("{n}{mu}"))
}

fn solved(cs: &[Constraint], name: &str) -> Option<SymExpr> {
    cs.iter().find(|c| c.unknown == name).map(|c| c.rhs.clone())
}

fn in_real_parts(t: &ChiralBlocks) -> Result<ChiralBlocks, crate::symfield::SymError> {
    let subs = real_parts_of_z();
    let subs: Vec<(&str, SymExpr)> = subs.iter().map(|(n, e)| (n.as_str(), e.clone())).collect();
    Ok(ChiralBlocks(t.0.iter().map(|b| b.try_map(|e| e.substitute(&subs))).collect::<Result<_, _>>()?))
}

/// `z_μ = f′∂v + ḡ∂w̄′`, `z′_μ = f∂v′ + ḡ′∂w̄` for `a = (f, g, f′, g′)`, `b = (v, w, v′, w′)`.
fn two_field_pattern(r: &mut Report, tw: &TwistedTripleData) {
    let anchor = format!("{}: fluctuation fields z, z′", tw.triple.name);
    guarded(r, &anchor, |r| {
        let a = AlgebraElt::from_names(&["f", "g", "f'", "g'"]);
        let b = AlgebraElt::from_names(&["v", "w", "v'", "w'"]);
        let fl = fluctuate(tw, &build_one_form(tw, &[(a, b)])?)?;
        let (z, zp) = fl.z()?;
        let mut ok = true;
        for mu in 0..4 {
            let d = |n: &str| s(n).derive(mu);
            let dbar = |n: &str| s(n).conj().derive(mu);
            ok &= z[mu] == &(&s("f'") * &d("v")?) + &(&s("g").conj() * &dbar("w'")?);
            ok &= zp[mu] == &(&s("f") * &d("v'")?) + &(&s("g'").conj() * &dbar("w")?);
        }
        r.push(Check::from_bool(anchor.clone(), ok, "z = f′∂v + ḡ∂w̄′, z′ = f∂v′ + ḡ′∂w̄"));
        Ok::<_, Box<dyn std::error::Error>>(())
    });
}

/// Self-adjointness in real parts: `f′ = −f`, `g′ = g` and the assembled
/// `X ⊗ I′ + iY ⊗ I″` form.
fn real_form(r: &mut Report, label: &str, template: &ChiralBlocks, ip: SymMatrix, ipp: SymMatrix) {
    let anchor = format!("{label}: self-adjoint fluctuation in real parts");
    guarded(r, &anchor, |r| {
        let t = in_real_parts(template)?;
        let cs = selfadjoint_constraints(&t, |n| n.contains('\''))?;
        let solved_ok = (0..4).all(|mu| {
            solved(&cs, &format!("f'{mu}")) == Some(-re("f", mu)) && solved(&cs, &format!("g'{mu}")) == Some(re("g", mu))
        });
        r.push(Check::from_bool(
            format!("{label}: self-adjointness forces f′ = −f, g′ = g"),
            solved_ok,
            format!("{} constraints", cs.len()),
        ));
        let z = impose_blocks(&t, &cs)?;
        let block = |plus: &dyn Fn(usize) -> SymExpr, minus: &dyn Fn(usize) -> SymExpr| {
            crate::fluct::ChiralBlock::from_fn(plus, minus).matrix()
        };
        let x = block(&|mu| re("f", mu), &|mu| -re("f", mu));
        let y = block(&|mu| re("g", mu), &|mu| re("g", mu));
        let want = SymMatrix::kron(&ip, &x).add(&SymMatrix::kron(&ipp, &y).scale(Cq::i()));
        r.push(Check::from_bool(anchor.clone(), z.assemble() == want, "X_μ ⊗ I′ + iY_μ ⊗ I″"));
        Ok::<_, Box<dyn std::error::Error>>(())
    });
}

fn fluct(cfg: &SuiteConfig) -> Report {
    let mut r = Report::new("fluct");
    guarded(&mut r, "manifold: one-form and fluctuation", |r| {
        let tw = models::manifold_twisted();
        let omega = build_one_form(&tw, &[(AlgebraElt::from_names(&["g", "g'"]), AlgebraElt::from_names(&["f", "f'"]))])?;
        let b = &omega.blocks.as_ref().ok_or("one-form does not decompose")?.0[0];
        let mut ok = true;
        for mu in 0..4 {
            ok &= b.plus[mu] == &s("g'") * &s("f").derive(mu)? && b.minus[mu] == &s("g") * &s("f'").derive(mu)?;
        }
        r.push(Check::from_bool("manifold: twisted one-form fields h, h′", ok, "h = g′∂f, h′ = g∂f′"));
        let fl = fluctuate(&tw, &omega)?;
        let (z, zp) = fl.z()?;
        let real = (0..4).all(|mu| z[mu] == &b.plus[mu] + &b.plus[mu].conj() && zp[mu] == &b.minus[mu] + &b.minus[mu].conj());
        r.push(Check::from_bool("manifold: fluctuation keeps h + h̄", real, "z = h + h̄, z′ = h′ + h̄′"));
        r.push(Check::from_bool("manifold: no iY part", fl.y()?.plus.iter().all(SymExpr::is_zero), "Y_μ = 0"));
        let cs = selfadjoint_constraints(&manifold_fluct_template(), |n| n.starts_with("f'"))?;
        let x = impose_blocks(&manifold_fluct_template(), &cs)?;
        let g = euclidean_gammas();
        let want = (0..4)
            .fold(SymMatrix::zero(4), |acc, mu| acc.add(&g.gamma[mu].mul(&g.gamma5).scale_expr(&re("f", mu)).scale(-Cq::i())));
        r.push(Check::from_bool("manifold: self-adjoint fluctuation is X_μ = f_μγ⁵", x.assemble() == want, "−iγ^μ f_μ γ⁵"));
        Ok::<_, Box<dyn std::error::Error>>(())
    });
    two_field_pattern(&mut r, &models::two_point_twisted());
    two_field_pattern(&mut r, &models::ed_twisted());
    let gf = SymMatrix::diag(vec![SymExpr::one(), SymExpr::int(-1)]);
    real_form(&mut r, "MxF2-twisted", &two_point_fluct_template(), SymMatrix::identity(2), gf);
    real_form(
        &mut r,
        "MxF_ED-twisted",
        &ed_fluct_template(),
        SymMatrix::diag([1, -1, 1, -1].map(SymExpr::int).to_vec()),
        SymMatrix::diag([1, 1, -1, -1].map(SymExpr::int).to_vec()),
    );
    guarded(&mut r, "MxF_ED: untwisted fluctuation has no real part", |r| {
        let t = models::manifold_x_ed();
        let omega = build_untwisted_one_form(&t, &[(AlgebraElt::from_names(&["f", "g"]), AlgebraElt::from_names(&["v", "w"]))])?;
        let tied: Vec<(String, SymExpr)> = (0..4).map(|mu| (format!("z'{mu}"), s(&format!("z{mu}")))).collect();
        let tied: Vec<(&str, SymExpr)> = tied.iter().map(|(n, e)| (n.as_str(), e.clone())).collect();
        let tmpl =
            ChiralBlocks(ed_fluct_template().0.iter().map(|b| b.try_map(|e| e.substitute(&tied))).collect::<Result<_, _>>()?);
        let cs = selfadjoint_constraints(&in_real_parts(&tmpl)?, |n| n.starts_with('f'))?;
        let equal_blocks = omega.blocks.as_ref().is_some_and(|b| b.0.iter().all(|c| c.plus == c.minus));
        let vanishes = (0..4).all(|mu| solved(&cs, &format!("f{mu}")).is_some_and(|e| e.is_zero()));
        r.push(Check::from_bool(
            "MxF_ED: untwisted fluctuation has no real part",
            equal_blocks && vanishes,
            "z′ = z forces f_μ = 0",
        ));
        Ok::<_, Box<dyn std::error::Error>>(())
    });
    prop_finite_part(&mut r, cfg);
    for (k, tw) in models::twisted_models().iter().enumerate() {
        let anchor = format!("{}: one-form ρ(x)[D, y]_ρ, numeric oracle", tw.triple.name);
        guarded(&mut r, &anchor, |r| {
            let x = tw.rho(&tw.slot_element());
            let y = AlgebraElt::generic(&tw.triple.rep, "y_");
            let omega = build_one_form(tw, &[(x.clone(), y.clone())])?;
            let (p, rp) = tw.pi_pair(&y);
            let dd = &tw.triple.dirac;
            let rhs = OpTerm::compose(vec![
                OpTerm::op(&tw.triple.rep.op(&x)),
                OpTerm::diff(
                    OpTerm::compose(vec![OpTerm::op(dd), OpTerm::op(&p)]),
                    OpTerm::compose(vec![OpTerm::op(&rp), OpTerm::op(dd)]),
                ),
            ]);
            let v = compare_ops(&OpTerm::from(GenOp::Linear(omega.op)), &rhs, cfg.oracle_trials, cfg.seed_for(300 + k as u64));
            r.push(oracle_check(anchor.clone(), v));
            Ok::<_, Box<dyn std::error::Error>>(())
        });
    }
    r
}

/// `[γ⁵ ⊗ D_F, π(a, a′)]_ρ = 0`, symbolically, numerically, and a control
/// `D_F` that couples `e_L` to `ē_L`.
fn prop_finite_part(r: &mut Report, cfg: &SuiteConfig) {
    let anchor = "MxF_ED: finite part of the twisted commutator vanishes";
    guarded(r, anchor, |r| {
        let tw = models::ed_twisted();
        let d_f = ed_dirac(&s(MASS));
        let op = finite_part_fluctuation(&tw, &d_f)?;
        r.push(match crate::triple::first_nonzero(&op) {
            None => Check::pass(anchor, "exact zero operator"),
            Some(w) => Check::fail(anchor, "nonzero", w),
        });
        let finite = MatDiffOp::mult(SymMatrix::kron(&d_f, &euclidean_gammas().gamma5));
        let (p, rp) = tw.pi_pair(&tw.slot_element());
        let term = OpTerm::diff(
            OpTerm::compose(vec![OpTerm::op(&finite), OpTerm::op(&p)]),
            OpTerm::compose(vec![OpTerm::op(&rp), OpTerm::op(&finite)]),
        );
        oracle_zero(r, format!("{anchor}, numeric oracle"), Ok(term), cfg, 310);
        let mut bad = d_f.clone();
        bad.set(0, 2, SymExpr::one());
        bad.set(2, 0, SymExpr::one());
        r.push(Check::from_bool(
            "MxF_ED: finite part detects a Majorana-type coupling",
            !finite_part_fluctuation(&tw, &bad)?.is_zero(),
            "control D_F with an e_L–ē_L entry gives a nonzero commutator",
        ));
        Ok::<_, Box<dyn std::error::Error>>(())
    });
}

fn th(n: &str) -> SymExpr {
    SymExpr::real(n)
}

fn slot_names(k: usize) -> Vec<String> {
    (0..k).map(|i| format!("t{i}")).collect()
}

fn unitary(k: usize) -> UnitaryElt {
    let names = slot_names(k);
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    UnitaryElt::new(&names)
}

fn gauge(cfg: &SuiteConfig) -> Report {
    let mut r = Report::new("gauge");
    guarded(&mut r, "manifold: one-form gauge law", |r| {
        let tw = models::manifold_twisted();
        let omega = OneFormData::from_blocks(manifold_one_form_template());
        let u = UnitaryElt::twisted(&["theta"], false);
        let out = transform_one_form(&tw.triple, Some(&tw.flip), &omega, &u)?;
        let shift = out.shift.ok_or("transformed one-form does not decompose")?;
        let mi = SymExpr::constant(-Cq::i());
        let mut ok = true;
        for mu in 0..4 {
            ok &= shift.0[0].plus[mu] == &mi * &th("theta").derive(mu)?
                && shift.0[0].minus[mu] == &mi * &th("theta'").derive(mu)?;
        }
        r.push(Check::from_bool("manifold: h ↦ h − i∂θ, h′ ↦ h′ − i∂θ′", ok, "one-form shift"));
        let angles = GaugeAngles { theta: th("theta"), theta_prime: th("theta'") };
        let after = out.omega.blocks.as_ref().ok_or("no blocks")?;
        r.extend(field_shift_report("manifold", omega.blocks.as_ref().ok_or("no blocks")?, after, &angles)?);
        let tw_omega = build_one_form(&tw, &[(tw.slot_element(), AlgebraElt::generic(&tw.triple.rep, "b_"))])?;
        let moved = transform_one_form(&tw.triple, Some(&tw.flip), &tw_omega, &u)?.omega;
        let (x0, x1) = (fluctuate(&tw, &tw_omega)?, fluctuate(&tw, &moved)?);
        r.push(Check::from_bool("manifold: fluctuation X_μ is gauge invariant", x0.fluct == x1.fluct, "ω + JωJ⁻¹ unchanged"));
        Ok::<_, Box<dyn std::error::Error>>(())
    });
    // ϑ = α − β′, ϑ′ = α′ − β
    let angles = GaugeAngles { theta: &th("alpha") - &th("beta'"), theta_prime: &th("alpha'") - &th("beta") };
    for tw in [models::two_point_twisted(), models::ed_twisted()] {
        let name = tw.triple.name.clone();
        guarded(&mut r, &format!("{name}: fluctuation gauge law"), |r| {
            let omega = build_one_form(&tw, &[(tw.slot_element(), AlgebraElt::generic(&tw.triple.rep, "b_"))])?;
            let u = UnitaryElt::twisted(&["alpha", "beta"], false);
            let after = transform_one_form(&tw.triple, Some(&tw.flip), &omega, &u)?.omega;
            let (f0, f1) = (fluctuate(&tw, &omega)?, fluctuate(&tw, &after)?);
            let (b0, b1) = (f0.blocks.as_ref().ok_or("no blocks")?, f1.blocks.as_ref().ok_or("no blocks")?);
            r.extend(field_shift_report(&name, b0, b1, &angles)?);
            let wrong = GaugeAngles { theta: th("alpha"), theta_prime: th("alpha'") };
            r.push(Check::from_bool(
                format!("{name}: a wrong gauge angle is rejected"),
                !field_shift_report(&name, b0, b1, &wrong)?.passed(),
                "ϑ = α fails",
            ));
            Ok::<_, Box<dyn std::error::Error>>(())
        });
    }
    guarded(&mut r, "MxF2: untwisted U(1) gauge field", |r| {
        let t = models::manifold_x_two_point();
        let omega = build_untwisted_one_form(&t, &[(AlgebraElt::generic(&t.rep, "a_"), AlgebraElt::generic(&t.rep, "b_"))])?;
        let after = transform_one_form(&t, None, &omega, &UnitaryElt::new(&["alpha", "beta"]))?.omega;
        let fl = |w: &OneFormData| -> Result<ChiralBlocks, Box<dyn std::error::Error>> {
            let jw = crate::operator::sandwich_antilinear(&t.real, &w.op)?;
            Ok(decompose(&w.op.add(&jw)?)?)
        };
        let vt = &th("alpha") - &th("beta");
        let angles = GaugeAngles { theta: vt.clone(), theta_prime: vt };
        r.extend(field_shift_report("MxF2", &fl(&omega)?, &fl(&after)?, &angles)?);
        Ok::<_, Box<dyn std::error::Error>>(())
    });
    for (k, tw) in models::twisted_models().iter().enumerate() {
        let anchor = format!("{}: covariant Dirac transform, numeric oracle", tw.triple.name);
        guarded(&mut r, &anchor, |r| {
            let omega = build_one_form(tw, &[(tw.slot_element(), AlgebraElt::generic(&tw.triple.rep, "b_"))])?;
            let d = fluctuate(tw, &omega)?.d_omega;
            let u = unitary(tw.triple.rep.slots.len());
            let got = transform_covariant_dirac(&tw.triple, Some(&tw.flip), &d, &u)?;
            let pu = |a: &AlgebraElt| OpTerm::op(&tw.triple.rep.op(a));
            let ru = tw.rho(&u.elt);
            let (j, ji) = anti(&tw.triple.real)?;
            let rhs = OpTerm::compose(vec![
                pu(&ru),
                j.clone(),
                pu(&ru),
                ji.clone(),
                OpTerm::op(&d),
                pu(&u.star()),
                j,
                pu(&u.star()),
                ji,
            ]);
            let v = compare_ops(&OpTerm::from(GenOp::Linear(got)), &rhs, cfg.oracle_trials, cfg.seed_for(400 + k as u64));
            r.push(oracle_check(anchor.clone(), v));
            Ok::<_, Box<dyn std::error::Error>>(())
        });
        let anchor = format!("{}: one-form gauge transform, numeric oracle", tw.triple.name);
        guarded(&mut r, &anchor, |r| {
            let omega = build_one_form(tw, &[(tw.slot_element(), AlgebraElt::generic(&tw.triple.rep, "b_"))])?;
            let u = unitary(tw.triple.rep.slots.len());
            let got = transform_one_form(&tw.triple, Some(&tw.flip), &omega, &u)?.omega.op;
            let pu = |a: &AlgebraElt| OpTerm::op(&tw.triple.rep.op(a));
            let d = OpTerm::op(&tw.triple.dirac);
            let us = u.star();
            let rhs = OpTerm::compose(vec![
                pu(&tw.rho(&u.elt)),
                OpTerm::Sum(vec![
                    (Cq::one(), OpTerm::compose(vec![d.clone(), pu(&us)])),
                    (-Cq::one(), OpTerm::compose(vec![pu(&tw.rho(&us)), d])),
                    (Cq::one(), OpTerm::compose(vec![OpTerm::op(&omega.op), pu(&us)])),
                ]),
            ]);
            let v = compare_ops(&OpTerm::from(GenOp::Linear(got)), &rhs, cfg.oracle_trials, cfg.seed_for(410 + k as u64));
            r.push(oracle_check(anchor.clone(), v));
            Ok::<_, Box<dyn std::error::Error>>(())
        });
    }
    r
}

/// Sample triples of KO-dimension 0, 2, 4 and 6 for the symmetry lemma.
fn symmetry_samples() -> Vec<SpectralTripleData> {
    // KO 0: H = ℂ², J = complex conjugation, real off-diagonal D
    let b = SymExpr::real("b");
    let z = SymExpr::zero();
    let toy = SpectralTripleData {
        name: "KO0 sample".into(),
        rep: crate::triple::Representation::new(vec!["c".into()], vec![SymMatrix::identity(2)]).expect("scalar representation"),
        dirac: MatDiffOp::mult(SymMatrix::from_rows(2, vec![z.clone(), b.clone(), b, z])),
        grading: SymMatrix::diag(vec![SymExpr::one(), SymExpr::int(-1)]),
        real: AntilinearOp::new(SymMatrix::identity(2)).expect("constant"),
        ko_dim: 0,
    };
    vec![toy, models::manifold_x_ed(), models::manifold(), models::ed_finite().as_triple()]
}

fn action(cfg: &SuiteConfig) -> Report {
    let mut r = Report::new("action");
    for (k, t) in symmetry_samples().iter().enumerate() {
        let label = format!("{} (KO {})", t.name, t.ko_dim);
        guarded(&mut r, &format!("{label}: symmetry lemma"), |r| {
            let signs = check_real_signs(t)?;
            let v = symmetry_check(&t.dirac, &t.real, signs.epsilon, signs.epsilon_prime)?;
            r.extend(v.report(&label));
            let kern = BilinearKernel { dirac: t.dirac.clone(), real: t.real.clone(), r: None };
            let seed = cfg.seed_for(500 + k as u64);
            r.push(oracle_check(
                format!("{label}: ⟨Jφ, Dψ⟩ = εε′⟨Jψ, Dφ⟩, numeric oracle"),
                compare_transpose_symmetry(&kern, v.sign, cfg.oracle_trials, seed),
            ));
            for odd in [false, true] {
                let psi = generic_spinor("psi", t.dim(), odd);
                let pairing = bilinear_density(&t.dirac, &t.real, &psi, &psi, None)?;
                let mode = if odd { "Grassmann" } else { "vector" };
                r.push(oracle_check(
                    format!("{label}: {mode} self-pairing, numeric oracle"),
                    compare_density(&pairing, &kern, &psi, cfg.oracle_trials, seed + 1),
                ));
            }
            Ok::<_, Box<dyn std::error::Error>>(())
        });
    }
    for (k, name) in SCENARIOS.iter().enumerate() {
        match scenario(name) {
            Ok(sr) => {
                r.extend(sr.report.clone());
                let seed = cfg.seed_for(600 + k as u64);
                for (what, e) in [("density", &sr.density), ("stated form", &sr.stated)] {
                    r.push(oracle_check(
                        format!("{name}: {what} against ⟨Jψ, RD_ωψ⟩, numeric oracle"),
                        compare_density(e, &sr.kernel, &sr.spinor, cfg.oracle_trials, seed),
                    ));
                }
            }
            Err(e) => r.push(Check::fail(format!("{name}: scenario"), "could not be derived", e.to_string())),
        }
    }
    r
}

fn lichnerowicz() -> Report {
    lichnerowicz_report().unwrap_or_else(|e| {
        let mut r = Report::new("lichnerowicz");
        r.push(Check::fail("lichnerowicz: derivations", "engine error", e.to_string()));
        r
    })
}

/// Monomials reached from `1` by right multiplication with generators.
fn reachable_monomials(n: u32, sign: Sign) -> usize {
    let mut seen = BTreeSet::from([0u32]);
    let mut frontier = vec![0u32];
    while let Some(m) = frontier.pop() {
        for i in 0..n {
            let (c, p) = monomial_product(m, 1 << i, sign);
            if c != 0 && seen.insert(p) {
                frontier.push(p);
            }
        }
    }
    seen.len()
}

fn clifford() -> Report {
    let mut r = Report::new("clifford");
    let signs = [(Sign::Plus, "Cl+"), (Sign::Minus, "Cl-")];
    let enumerated = (1..=8u32).all(|n| signs.iter().all(|(s, _)| reachable_monomials(n, *s) == 1 << n));
    r.push(Check::from_bool("Cl±_n: dimension 2^n by basis enumeration, n ≤ 8", enumerated, "monomials generated from 1"));
    for n in 1..=8u32 {
        for (col, (sign, label)) in signs.iter().enumerate() {
            let anchor = format!("{label}_{n}: classification");
            let entry = CLASSIFICATION_TABLE[n as usize - 1][col];
            let tag = CliffordTag::new(n, *sign, false).expect("n ≤ 16");
            let ok = classify(n, *sign, false).ok() == Some(entry)
                && classify_by_recursion(n, *sign) == entry
                && entry.dimension(false) == 1 << n
                && entry.center_dimension(false) as usize == center_dimension(tag);
            r.push(Check::from_bool(anchor, ok, format!("{entry}: recursion, dimension and centre agree")));
        }
        let entry = CLASSIFICATION_TABLE[n as usize - 1][2];
        let tag = CliffordTag::new(n, Sign::Plus, true).expect("n ≤ 16");
        let ok = classify(n, Sign::Plus, true).ok() == Some(entry)
            && entry.field == Field::C
            && entry.dimension(true) == 1 << n
            && entry.center_dimension(true) as usize == center_dimension(tag);
        r.push(Check::from_bool(format!("Cl_{n}(C): classification"), ok, format!("{entry}: dimension and centre agree")));
    }
    let mut periodic = Vec::new();
    for n in 1..=16u32 {
        for (sign, label) in signs {
            let Ok(d) = classify(n, sign, false) else {
                periodic.push(format!("{label}_{n} unclassified"));
                continue;
            };
            let tag = CliffordTag::new(n, sign, false).expect("n ≤ 16");
            if d.dimension(false) != 1 << n
                || d != classify_by_recursion(n, sign)
                || d.center_dimension(false) as usize != center_dimension(tag)
            {
                periodic.push(format!("{label}_{n} = {d}"));
            }
            if n <= 8 {
                let (lo, hi) = (classify(n, sign, false), classify(n + 8, sign, false));
                if !matches!((lo, hi), (Ok(a), Ok(b)) if b.field == a.field && b.summands == a.summands && b.size == 16 * a.size)
                {
                    periodic.push(format!("{label}_{n} vs {label}_{}", n + 8));
                }
            }
        }
        let c = classify(n, Sign::Plus, true);
        let ok = matches!(c, Ok(c) if c.dimension(true) == 1 << n && c.center_dimension(true) == if n % 2 == 1 { 2 } else { 1 });
        let step = n > 2
            && !matches!((classify(n - 2, Sign::Plus, true), c), (Ok(a), Ok(b)) if b.size == 2 * a.size && b.summands == a.summands);
        if !ok || step {
            periodic.push(format!("Cl_{n}(C)"));
        }
    }
    r.push(if periodic.is_empty() {
        Check::pass("Clifford periodicity, n ≤ 16", "mod 8 (real) and mod 2 (complex) dimensions and centres consistent")
    } else {
        Check::fail("Clifford periodicity, n ≤ 16", "inconsistent entries", periodic.join(", "))
    });
    r
}
