use tncg::grassmann::{dagger_replacement, physical_identification, weyl, weyl_lagrangian, Identification};
use tncg::models::{scenario, SCENARIOS};
use tncg::scenario::{dirac_form, goldens, ScenarioError};
use tncg::{Cq, SymExpr};

#[test]
fn every_scenario_passes() {
    for name in SCENARIOS {
        let s = scenario(name).unwrap();
        assert!(s.passed(), "{}", s.report);
        assert_eq!(s.density.canonical(), goldens::stored(name).unwrap().trim_end(), "{name}");
    }
}

#[test]
fn unknown_scenario_is_an_error() {
    assert!(matches!(scenario("maxwell"), Err(ScenarioError::Unknown(_))));
}

#[test]
fn identifications_are_literal_on_the_twisted_side() {
    for name in ["weyl", "dirac"] {
        let s = scenario(name).unwrap();
        assert!(!s.identifications.is_empty());
        for id in &s.identifications {
            assert!(id.matched && !id.up_to_total_derivative, "{}", id.label);
        }
    }
}

#[test]
fn weyl_density_has_no_time_derivative_and_one_f0_pair() {
    let s = scenario("weyl").unwrap();
    assert!(!s.density.has_derivative(0));
    assert_eq!(s.density.terms_mentioning("f0"), 2);
    assert_eq!(s.density.num_terms(), 8);
}

#[test]
fn mismatched_identification_is_caught() {
    // the right-handed dagger with the left-handed time rule
    let s = scenario("weyl").unwrap();
    let psi = weyl("Psi", true);
    let dag = weyl("Psidag", true);
    let phi = dagger_replacement(&dag, Cq::i());
    let rules = psi.iter().map(|p| (p.atoms()[0].d(0).unwrap(), p.scale(&(&SymExpr::i() * &SymExpr::real("f0"))))).collect();
    let id = Identification {
        label: "crossed".into(),
        factor: Cq::from(4),
        gens: vec![
            ("zeta_1".into(), psi[0].clone()),
            ("zeta_2".into(), psi[1].clone()),
            ("phi_1".into(), phi[0].clone()),
            ("phi_2".into(), phi[1].clone()),
        ],
        coeffs: Vec::new(),
        target_rules: rules,
        target: weyl_lagrangian(&dag, &psi, true, None).unwrap(),
    };
    assert!(!physical_identification(&s.density, &id).unwrap().matched);
}

#[test]
fn dirac_mass_terms_pair_opposite_chiralities() {
    let l = dirac_form(Some("g")).unwrap();
    let d_terms = l.terms_mentioning("d");
    assert_eq!(d_terms, 4);
    let s = scenario("dirac").unwrap();
    assert_eq!(s.density.terms_mentioning("d"), 4);
    assert!(!s.density.has_derivative(0));
}
