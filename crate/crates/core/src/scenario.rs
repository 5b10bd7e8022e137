//! End-to-end derivations of the fermionic actions: twist, one-form,
//! fluctuation, self-adjointness, density and physical identification.

use crate::coeff::Cq;
use crate::fluct::{
    build_one_form, ed_fluct_template, fluctuate, impose_blocks, manifold_fluct_template, real_parts_of_z,
    selfadjoint_constraints, two_point_fluct_template, ChiralBlocks, FluctError,
};
use crate::gammarep::euclidean_gammas;
use crate::grassmann::{
    bilinear_density, dagger_replacement, dirac_lagrangian, fermionic_action_density, ibp_canonical, physical_identification,
    row_mat_col, sigma2_pair, weyl, weyl_kinetic, weyl_lagrangian, Gen, GrassmannError, GrassmannExpr, Identification,
    IdentificationReport, Spinor,
};
use crate::models::{self, MASS};
use crate::operator::{MatDiffOp, OpError};
use crate::oracle::BilinearKernel;
use crate::report::{Check, Report};
use crate::symfield::{SymError, SymExpr};
use crate::triple::AlgebraElt;
use crate::twist::TwistedTripleData;
use thiserror::Error;

/// Names accepted by [`scenario`].
pub const SCENARIOS: [&str; 3] = ["manifold-action", "weyl", "dirac"];

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("unknown scenario `{0}`")]
    Unknown(String),
    #[error("stage `{stage}` failed: {detail}")]
    Stage { stage: &'static str, detail: String },
}

fn stage<E: std::fmt::Display>(stage: &'static str) -> impl Fn(E) -> ScenarioError {
    move |e| ScenarioError::Stage { stage, detail: e.to_string() }
}

/// Golden canonical densities, as checked in.
pub mod goldens {
    pub const MANIFOLD_ACTION: &str = include_str!("../goldens/manifold-action.txt");
    pub const WEYL: &str = include_str!("../goldens/weyl.txt");
    pub const DIRAC: &str = include_str!("../goldens/dirac.txt");

    pub fn stored(name: &str) -> Option<&'static str> {
        match name {
            "manifold-action" => Some(MANIFOLD_ACTION),
            "weyl" => Some(WEYL),
            "dirac" => Some(DIRAC),
            _ => None,
        }
    }

    /// Source location of a golden file, for regeneration.
    pub fn path(name: &str) -> std::path::PathBuf {
        std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("goldens").join(format!("{name}.txt"))
    }

    /// Overwrites the golden file with `text`; takes effect on the next build.
    pub fn write(name: &str, text: &str) -> std::io::Result<std::path::PathBuf> {
        let p = path(name);
        std::fs::write(&p, format!("{}\n", text.trim_end()))?;
        Ok(p)
    }
}

/// Result of one scenario.
#[derive(Clone, Debug)]
pub struct ScenarioReport {
    pub name: String,
    pub density: GrassmannExpr,
    pub report: Report,
    pub identifications: Vec<IdentificationReport>,
    /// Fluctuated operator and structure maps the density was built from.
    pub kernel: BilinearKernel,
    pub spinor: Spinor,
    /// The closed form the density is compared against.
    pub stated: GrassmannExpr,
}

impl ScenarioReport {
    pub fn passed(&self) -> bool {
        self.report.passed()
    }
}

pub fn scenario(name: &str) -> Result<ScenarioReport, ScenarioError> {
    match name {
        "manifold-action" => manifold_action(),
        "weyl" => weyl_scenario(),
        "dirac" => dirac_scenario(),
        other => Err(ScenarioError::Unknown(other.to_string())),
    }
}

fn re(n: &str, mu: usize) -> SymExpr {
    SymExpr::real(&format!("{n}{mu}"))
}

/// Fluctuation of a generic one-form, checked against a field template by
/// substituting the computed `(z, z′)` for the template symbols.
fn fluctuation_shape(
    r: &mut Report,
    tw: &TwistedTripleData,
    template: &ChiralBlocks,
    plus: &str,
    minus: &str,
) -> Result<(), ScenarioError> {
    let x = tw.slot_element();
    let y = AlgebraElt::generic(&tw.triple.rep, "b_");
    let omega = build_one_form(tw, &[(x, y)]).map_err(stage("one-form"))?;
    let fl = fluctuate(tw, &omega).map_err(stage("fluctuate"))?;
    let (z, zp) = fl.z().map_err(stage("fluctuate"))?;
    let subs: Vec<(String, SymExpr)> =
        (0..4).flat_map(|mu| [(format!("{plus}{mu}"), z[mu].clone()), (format!("{minus}{mu}"), zp[mu].clone())]).collect();
    let subs: Vec<(&str, SymExpr)> = subs.iter().map(|(n, e)| (n.as_str(), e.clone())).collect();
    let filled = template.0.iter().map(|b| b.try_map(|e| e.substitute(&subs))).collect::<Result<Vec<_>, SymError>>();
    let ok = matches!((filled, &fl.blocks), (Ok(f), Some(b)) if f == b.0);
    r.push(Check::from_bool(
        format!("{}: fluctuation has the expected field pattern", tw.triple.name),
        ok,
        "ω + ε′JωJ⁻¹ decomposes on the template",
    ));
    Ok(())
}

fn constrained(template: &ChiralBlocks, is_unknown: impl Fn(&str) -> bool) -> Result<ChiralBlocks, FluctError> {
    let cs = selfadjoint_constraints(template, is_unknown)?;
    impose_blocks(template, &cs)
}

fn in_real_parts(t: &ChiralBlocks) -> Result<ChiralBlocks, SymError> {
    let subs = real_parts_of_z();
    let subs: Vec<(&str, SymExpr)> = subs.iter().map(|(n, e)| (n.as_str(), e.clone())).collect();
    Ok(ChiralBlocks(t.0.iter().map(|b| b.try_map(|e| e.substitute(&subs))).collect::<Result<_, _>>()?))
}

fn with_dirac(tw: &TwistedTripleData, blocks: &ChiralBlocks) -> Result<MatDiffOp, OpError> {
    tw.triple.dirac.add(&blocks.op())
}

fn kernel(tw: &TwistedTripleData, d: MatDiffOp) -> BilinearKernel {
    BilinearKernel { dirac: d, real: tw.triple.real.clone(), r: Some(tw.r.clone()) }
}

fn golden_checks(r: &mut Report, name: &str, label: &str, got: &GrassmannExpr, want: &GrassmannExpr) {
    let residual = got.sub(want);
    r.push(Check::from_bool(
        format!("{label}: density equals the stated form"),
        residual.is_zero(),
        if residual.is_zero() { "exact".to_string() } else { format!("residual {residual}") },
    ));
    let stored = goldens::stored(name).unwrap_or("").trim_end();
    r.push(Check::from_bool(
        format!("{label}: canonical text matches the golden file"),
        got.canonical() == stored,
        goldens::path(name).display().to_string(),
    ));
}

fn time_rule(psi: &[GrassmannExpr], sign: i128) -> Vec<(Gen, GrassmannExpr)> {
    let c = SymExpr::constant(Cq::new(0, sign));
    psi.iter()
        .map(|p| {
            let atom = p.atoms()[0].d(0).expect("order one");
            (atom, p.scale(&(&c * &re("f", 0))))
        })
        .collect()
}

fn manifold_action() -> Result<ScenarioReport, ScenarioError> {
    let tw = models::manifold_twisted();
    let mut r = Report::new("scenario/manifold-action");
    fluctuation_shape(&mut r, &tw, &manifold_fluct_template(), "f", "f'")?;
    let x = constrained(&manifold_fluct_template(), |n| n.starts_with("f'")).map_err(stage("self-adjointness"))?;
    let d = with_dirac(&tw, &x).map_err(stage("fluctuate"))?;
    let psi = crate::grassmann::hr_spinor(&["zeta"], true);
    let density = fermionic_action_density(&tw, &d, &psi).map_err(stage("density"))?;
    let z = weyl("zeta", true);
    let want = weyl_kinetic(&z, &z, &re("f", 0), None, 1)
        .and_then(|k| ibp_canonical(&k.scale_c(Cq::from(2))))
        .map_err(stage("density"))?;
    golden_checks(&mut r, "manifold-action", "manifold", &density, &want);
    r.push(Check::from_bool("manifold: no ∂₀ in the density", !density.has_derivative(0), "time derivative absent"));
    r.push(Check::from_bool(
        "manifold: f₀ enters exactly once",
        density.terms_mentioning("f0") == 1 && (1..4).all(|k| density.terms_mentioning(&format!("f{k}")) == 0),
        format!("{} f₀ term(s)", density.terms_mentioning("f0")),
    ));
    Ok(ScenarioReport {
        name: "manifold-action".into(),
        density,
        report: r,
        identifications: Vec::new(),
        kernel: kernel(&tw, d),
        spinor: psi,
        stated: want,
    })
}

fn weyl_identification(left: bool) -> Result<Identification, GrassmannError> {
    let psi = weyl("Psi", true);
    let psi_dag = weyl("Psidag", true);
    let c = if left { -Cq::i() } else { Cq::i() };
    Ok(Identification {
        label: format!(
            "U(1): {} Weyl lagrangian under the {} identification",
            if left { "left" } else { "right" },
            if left { "first" } else { "second" }
        ),
        factor: Cq::from(4),
        gens: vec![
            ("zeta_1".into(), psi[0].clone()),
            ("zeta_2".into(), psi[1].clone()),
            ("phi_1".into(), dagger_replacement(&psi_dag, c)[0].clone()),
            ("phi_2".into(), dagger_replacement(&psi_dag, c)[1].clone()),
        ],
        coeffs: Vec::new(),
        target_rules: time_rule(&psi, if left { 1 } else { -1 }),
        target: weyl_lagrangian(&psi_dag, &psi, left, None)?,
    })
}

fn weyl_scenario() -> Result<ScenarioReport, ScenarioError> {
    let tw = models::two_point_twisted();
    let mut r = Report::new("scenario/weyl");
    fluctuation_shape(&mut r, &tw, &two_point_fluct_template(), "z", "z'")?;
    let t = in_real_parts(&two_point_fluct_template()).map_err(stage("self-adjointness"))?;
    let z = constrained(&t, |n| n.contains('\'')).map_err(stage("self-adjointness"))?;
    let no_gauge: Vec<(String, SymExpr)> = (0..4).map(|mu| (format!("g{mu}"), SymExpr::zero())).collect();
    let no_gauge: Vec<(&str, SymExpr)> = no_gauge.iter().map(|(n, e)| (n.as_str(), e.clone())).collect();
    let z = ChiralBlocks(
        z.0.iter().map(|b| b.try_map(|e| e.substitute(&no_gauge))).collect::<Result<_, _>>().map_err(stage("fluctuate"))?,
    );
    let d = with_dirac(&tw, &z).map_err(stage("fluctuate"))?;
    let psi = crate::grassmann::hr_spinor(&["zeta", "phi"], true);
    let density = fermionic_action_density(&tw, &d, &psi).map_err(stage("density"))?;
    let (zeta, phi) = (weyl("zeta", true), weyl("phi", true));
    let want = weyl_kinetic(&phi, &zeta, &re("f", 0), None, 1)
        .and_then(|k| ibp_canonical(&k.scale_c(Cq::from(4))))
        .map_err(stage("density"))?;
    golden_checks(&mut r, "weyl", "U(1)", &density, &want);
    let mut ids = Vec::new();
    for left in [true, false] {
        let id = weyl_identification(left).map_err(stage("identification"))?;
        let rep = physical_identification(&density, &id).map_err(stage("identification"))?;
        r.push(rep.check());
        ids.push(rep);
    }
    untwisted_comparison(&mut r).map_err(stage("untwisted comparison"))?;
    Ok(ScenarioReport {
        name: "weyl".into(),
        density,
        report: r,
        identifications: ids,
        kernel: kernel(&tw, d),
        spinor: psi,
        stated: want,
    })
}

/// On `H₊` of the untwisted `M × F₂`, the density is `−2i iΨ†σ̃^μ∂_μΨ`
/// under the first identification: the euclidean left-handed lagrangian.
fn untwisted_comparison(r: &mut Report) -> Result<(), GrassmannError> {
    let t = models::manifold_x_two_point();
    let (zeta, phi) = (weyl("zeta", true), weyl("phi", true));
    let zero = GrassmannExpr::zero();
    let eta: Spinor = vec![
        zeta[0].clone(),
        zeta[1].clone(),
        zero.clone(),
        zero.clone(),
        zero.clone(),
        zero.clone(),
        phi[0].clone(),
        phi[1].clone(),
    ];
    let density = ibp_canonical(&bilinear_density(&t.dirac, &t.real, &eta, &eta, None)?)?;
    let psi = weyl("Psi", true);
    let psi_dag = weyl("Psidag", true);
    let g = euclidean_gammas();
    let mut target = GrassmannExpr::zero();
    for mu in 0..4 {
        let d: Spinor = psi.iter().map(|p| p.derive(mu)).collect::<Result<_, _>>()?;
        target = target.add(&row_mat_col(&psi_dag, &g.sigma_tilde[mu], &d)?);
    }
    let id = Identification {
        label: "U(1) untwisted on H₊: euclidean left-handed lagrangian".into(),
        factor: Cq::new(0, -2),
        gens: vec![
            ("zeta_1".into(), psi[0].clone()),
            ("zeta_2".into(), psi[1].clone()),
            ("phi_1".into(), dagger_replacement(&psi_dag, -Cq::i())[0].clone()),
            ("phi_2".into(), dagger_replacement(&psi_dag, -Cq::i())[1].clone()),
        ],
        coeffs: Vec::new(),
        target_rules: Vec::new(),
        target: ibp_canonical(&target.scale_c(Cq::i()))?,
    };
    let rep = physical_identification(&density, &id)?;
    r.push(rep.check());
    Ok(())
}

/// `ℒ^f_ρ` with covariant derivative built on `gauge` (or plain `∂`).
pub fn dirac_form(gauge: Option<&str>) -> Result<GrassmannExpr, GrassmannError> {
    let p: Vec<Spinor> = (1..=4).map(|k| weyl(&format!("phi{k}"), true)).collect();
    let d = SymExpr::sym(MASS);
    let f0 = re("f", 0);
    let kin = weyl_kinetic(&p[0], &p[2], &f0, gauge, 1)?.sub(&weyl_kinetic(&p[1], &p[3], &f0, gauge, -1)?);
    let mass = sigma2_pair(&p[0], &p[3])?.scale(&d.conj()).add(&sigma2_pair(&p[1], &p[2])?.scale(&d));
    Ok(kin.add(&mass))
}

fn dirac_identification() -> Result<Identification, GrassmannError> {
    let (l, r) = (weyl("Psil", true), weyl("Psir", true));
    let (ld, rd) = (weyl("Psildag", true), weyl("Psirdag", true));
    let p1 = dagger_replacement(&ld, -Cq::i());
    let p2 = dagger_replacement(&rd, Cq::i());
    let mut gens = Vec::new();
    for k in 0..2 {
        gens.push((format!("phi1_{}", k + 1), p1[k].clone()));
        gens.push((format!("phi2_{}", k + 1), p2[k].clone()));
        gens.push((format!("phi3_{}", k + 1), l[k].clone()));
        gens.push((format!("phi4_{}", k + 1), r[k].clone()));
    }
    let m = SymExpr::real("m");
    let mut rules = time_rule(&l, 1);
    rules.extend(time_rule(&r, 1));
    Ok(Identification {
        label: "ED: lorentzian Dirac lagrangian in temporal gauge with d = −im".into(),
        factor: Cq::from(4),
        gens,
        coeffs: vec![(MASS.into(), (&SymExpr::constant(-Cq::i())) * &m), ("g0".into(), SymExpr::zero())],
        target_rules: rules,
        target: dirac_lagrangian(&ld, &l, &rd, &r, &m, "g")?,
    })
}

fn dirac_scenario() -> Result<ScenarioReport, ScenarioError> {
    let tw = models::ed_twisted();
    let mut r = Report::new("scenario/dirac");
    fluctuation_shape(&mut r, &tw, &ed_fluct_template(), "z", "z'")?;
    let t = in_real_parts(&ed_fluct_template()).map_err(stage("self-adjointness"))?;
    let z = constrained(&t, |n| n.contains('\'')).map_err(stage("self-adjointness"))?;
    let d = with_dirac(&tw, &z).map_err(stage("fluctuate"))?;
    let psi = crate::grassmann::hr_spinor(&["phi1", "phi2", "phi3", "phi4"], true);
    let density = fermionic_action_density(&tw, &d, &psi).map_err(stage("density"))?;
    let want = dirac_form(Some("g")).and_then(|l| ibp_canonical(&l.scale_c(Cq::from(4)))).map_err(stage("density"))?;
    golden_checks(&mut r, "dirac", "ED", &density, &want);
    // g = 0 reduces the covariant derivative to ∂
    let no_gauge: Vec<(String, SymExpr)> = (0..4).map(|mu| (format!("g{mu}"), SymExpr::zero())).collect();
    let no_gauge: Vec<(&str, SymExpr)> = no_gauge.iter().map(|(n, e)| (n.as_str(), e.clone())).collect();
    let flat = density.substitute_coeffs(&no_gauge).map_err(stage("density"))?;
    let flat_want = dirac_form(None).and_then(|l| ibp_canonical(&l.scale_c(Cq::from(4)))).map_err(stage("density"))?;
    r.push(Check::from_bool("ED: g = 0 turns 𝔇 into ∂", flat == flat_want, "structural specialization"));
    let id = dirac_identification().map_err(stage("identification"))?;
    let rep = physical_identification(&density, &id).map_err(stage("identification"))?;
    r.push(rep.check());
    Ok(ScenarioReport {
        name: "dirac".into(),
        density,
        report: r,
        identifications: vec![rep],
        kernel: kernel(&tw, d),
        spinor: psi,
        stated: want,
    })
}
