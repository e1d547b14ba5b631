use bln_core::catalog::{build, burgers, random_problem, CatalogParams, NAMES};
use bln_core::model::*;

#[test]
fn every_catalog_entry_builds_and_validates() {
    for name in NAMES {
        let p = build(name, &CatalogParams::default()).unwrap();
        let d = validate_problem(&p);
        let derivs = d.checks.iter().filter(|c| c.name.contains("derivatives"));
        assert!(derivs.clone().count() == 2 && derivs.into_iter().all(|c| c.passed), "{name}: {d:?}");
    }
    assert!(build("nope", &CatalogParams::default()).is_err());
}

#[test]
fn incompatible_start_is_located() {
    let init = GridFunction1D::from_fn(0.0, 1.0, 11, |x| 1.0 - x).unwrap();
    let p = Problem::new("bad", Domain1D::unit(), 1.0, burgers(), SourceModel::zero(), init, BoundaryData::zero()).unwrap();
    let d = validate_problem(&p);
    assert!(!d.all_passed());
    let c = d.checks.iter().find(|c| c.name == "compatibility").unwrap();
    assert!(!c.passed && c.message.contains("x = 0"), "{c:?}");
}

#[test]
fn wrong_derivative_is_reported() {
    let f = FluxModel::new("sq", |_, _, u| 0.5 * u * u).with_partial(Partial::DU, |_, _, u| 2.0 * u);
    let init = GridFunction1D::from_fn(0.0, 1.0, 11, |_| 0.0).unwrap();
    let p = Problem::new("bad", Domain1D::unit(), 1.0, f, SourceModel::zero(), init, BoundaryData::zero()).unwrap();
    let d = validate_problem(&p);
    assert!(d.checks.iter().any(|c| c.name == "flux_derivatives" && !c.passed));
}

#[test]
fn total_variation_examples() {
    assert_eq!(tv(&[0.3; 17]), 0.0);
    assert_eq!(tv(&[0.0, 1.0, 0.0]), 2.0);
    let s = GridFunction1D::from_fn(0.0, 1.0, 101, |x| (std::f64::consts::PI * x).sin()).unwrap();
    assert!((s.tv() - 2.0).abs() < 1e-3);
}

#[test]
fn sup_norm_examples() {
    let d = Domain1D::unit();
    let spec = SamplingSpec::default();
    let n = SupNormReport::compute(&burgers(), &SourceModel::zero(), &d, 1.0, 1.0, &spec).unwrap();
    let v = n.get("du_f").unwrap();
    assert!((1.0..=1.0 + spec.u_step).contains(&v), "{v}");
    let sine = FluxModel::new("sin", |_, _, u: f64| u.sin());
    let n = SupNormReport::compute(&sine, &SourceModel::zero(), &d, 1.0, 2.0, &spec).unwrap();
    let v = n.get("du_f").unwrap();
    assert!((1.0..1.0 + spec.u_step).contains(&v), "{v}");
}

#[test]
fn mollifier_examples() {
    let zero = GridFunction1D::from_fn(0.0, 1.0, 401, |_| 0.0).unwrap();
    assert_eq!(mollify_initial_datum(&zero, 8).unwrap().sup_norm(), 0.0);
    let one = GridFunction1D::from_fn(0.0, 1.0, 2001, |_| 1.0).unwrap();
    let m = mollify_initial_datum(&one, 4).unwrap();
    assert_eq!(m.first(), 0.0);
    assert_eq!(m.last(), 0.0);
    assert!(m.tv() <= 2.0 + 1e-12);
    for (x, v) in m.nodes().iter().zip(m.values()) {
        if (0.25..=0.75).contains(x) {
            assert!((v - 1.0).abs() < 1e-12, "x={x}: {v}");
        }
    }
    let step = GridFunction1D::from_fn(0.0, 1.0, 4001, |x| if x < 0.4 { 1.0 } else { -0.5 }).unwrap();
    let errs: Vec<f64> = [4, 8, 16, 32].iter().map(|&k| mollify_initial_datum(&step, k).unwrap().l1_distance(&step)).collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
}

#[test]
fn random_problems_are_reproducible() {
    let a = random_problem(17, 3.0).unwrap();
    let b = random_problem(17, 3.0).unwrap();
    assert_eq!(a.hash_hex(), b.hash_hex());
    assert_eq!(a.initial, b.initial);
    assert_ne!(a.hash_hex(), random_problem(18, 3.0).unwrap().hash_hex());
    assert!(a.boundary.is_homogeneous(a.horizon));
    assert_eq!(a.initial.first(), 0.0);
    assert_eq!(a.initial.last(), 0.0);
}
