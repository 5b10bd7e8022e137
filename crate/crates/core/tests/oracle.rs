use tncg::grassmann::{bilinear_density, generic_spinor, GrassmannExpr};
use tncg::models;
use tncg::oracle::{compare_density, compare_transpose_symmetry, BilinearKernel, ORACLE_TOL, ORACLE_TRIALS};
use tncg::scenario::{scenario, SCENARIOS};
use tncg::triple::check_real_signs;
use tncg::SymExpr;

#[test]
fn scenario_densities_agree_with_their_operators() {
    for name in SCENARIOS {
        let s = scenario(name).unwrap();
        for (what, e) in [("density", &s.density), ("stated form", &s.stated)] {
            let v = compare_density(e, &s.kernel, &s.spinor, ORACLE_TRIALS, 3).unwrap();
            assert!(v.passes(ORACLE_TOL), "{name} {what}: {v:?}");
        }
    }
}

#[test]
fn perturbed_density_is_rejected() {
    let s = scenario("manifold-action").unwrap();
    let z = GrassmannExpr::gen("zeta_1", true);
    let w = GrassmannExpr::gen("zeta_2", true);
    let extra = z.mul(&w.derive(1).unwrap()).scale(&SymExpr::real("f0"));
    let v = compare_density(&s.density.add(&extra), &s.kernel, &s.spinor, 5, 3).unwrap();
    assert!(!v.passes(1e-3), "{v:?}");
}

#[test]
fn unintegrated_density_matches_too() {
    // the raw integrand differs from the canonical one by total derivatives only
    let t = models::manifold();
    let psi = generic_spinor("psi", 4, true);
    let raw = bilinear_density(&t.dirac, &t.real, &psi, &psi, None).unwrap();
    let k = BilinearKernel { dirac: t.dirac.clone(), real: t.real.clone(), r: None };
    assert!(compare_density(&raw, &k, &psi, ORACLE_TRIALS, 1).unwrap().passes(ORACLE_TOL));
    let even = generic_spinor("psi", 4, false);
    let raw = bilinear_density(&t.dirac, &t.real, &even, &even, None).unwrap();
    assert!(compare_density(&raw, &k, &even, ORACLE_TRIALS, 1).unwrap().passes(ORACLE_TOL));
}

#[test]
fn transpose_symmetry_follows_the_ko_signs() {
    for t in [models::manifold(), models::ed_finite().as_triple(), models::manifold_x_ed(), models::manifold_x_two_point()] {
        let k = check_real_signs(&t).unwrap();
        let s = k.epsilon * k.epsilon_prime;
        let kern = BilinearKernel { dirac: t.dirac.clone(), real: t.real.clone(), r: None };
        assert!(compare_transpose_symmetry(&kern, s, ORACLE_TRIALS, 2).unwrap().passes(ORACLE_TOL), "{}", t.name);
        if !t.dirac.is_zero() {
            assert!(!compare_transpose_symmetry(&kern, -s, 5, 2).unwrap().passes(1e-3), "{}", t.name);
        }
    }
}
