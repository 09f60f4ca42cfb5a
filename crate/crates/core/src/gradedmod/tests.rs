use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::field::{PrimeField, Rationals};

fn ring(weights: &[i64]) -> GradedRing<PrimeField> {
    let data = WeightedLineData::standard(weights.to_vec(), FieldSpec::Prime(101)).unwrap();
    GradedRing::new(PrimeField::f101(), &data).unwrap()
}

fn window(r: &GradedRing<PrimeField>, n: i64) -> DegreeWindow {
    DegreeWindow::bounded(r.weights(), n)
}

fn el(r: &GradedRing<PrimeField>, l: &[i64], c: i64) -> LElement {
    r.group().normalize(l, c).unwrap()
}

#[test]
fn structure_module_dimensions() {
    let r = ring(&[2, 3]);
    let w = DegreeWindow::from_degrees(
        r.weights(),
        [el(&r, &[0, 0], 2), el(&r, &[1, 0], 0), el(&r, &[1, 0], -1)].into_iter().collect(),
    )
    .unwrap();
    let o = structure_module(&r, &r.group().zero(), &w);
    assert_eq!(o.dim(&el(&r, &[0, 0], 2)), 3);
    assert_eq!(o.dim(&el(&r, &[1, 0], 0)), 1);
    assert_eq!(o.dim(&el(&r, &[1, 0], -1)), 0);
}

#[test]
fn points_must_be_distinct() {
    let dup = WeightedLineData::new(vec![2, 3], vec![[1, 0], [1, 0]], FieldSpec::Prime(101));
    assert_eq!(dup, Err(GradedError::PointsNotDistinct(1, 2)));
    let proportional = WeightedLineData::new(vec![2, 3], vec![[1, 2], [2, 4]], FieldSpec::Rationals);
    assert!(matches!(proportional, Err(GradedError::PointsNotDistinct(1, 2))));
    // [1:0] and [1:101] agree over F_101 but not over Q
    assert!(WeightedLineData::new(vec![2, 2], vec![[1, 0], [1, 101]], FieldSpec::Prime(101)).is_err());
    assert!(WeightedLineData::new(vec![2, 2], vec![[1, 0], [1, 101]], FieldSpec::Rationals).is_ok());
    assert!(matches!(
        WeightedLineData::new(vec![2], vec![[0, 0]], FieldSpec::Rationals),
        Err(GradedError::ZeroPoint(1))
    ));
}

#[test]
fn validation_reports() {
    let r = ring(&[2, 3]);
    let w = window(&r, 4);
    let o = structure_module(&r, &r.group().zero(), &w);
    assert!(o.validate().is_valid());

    let bad_degree = el(&r, &[0, 2], 1);
    let mut actions = o.actions().clone();
    let m = actions.get_mut(&Generator::X(2)).unwrap().get_mut(&bad_degree).unwrap();
    m[(0, 0)] = 5;
    let broken = WindowedModule::from_parts(r.clone(), w, o.dims().clone(), actions).unwrap();
    let report = broken.validate();
    assert!(!report.is_valid());
    assert!(report.violations.iter().any(|v| v.degree == bad_degree));
}

#[test]
fn simple_lambda_is_valid_and_concentrated() {
    let r = ring(&[2, 3]);
    let w = window(&r, 5);
    let pres = simple_lambda_module(&r, 2, &w).unwrap();
    let s = &pres.quotient;
    assert!(s.validate().is_valid());
    for d in w.degrees() {
        assert_eq!(s.dim(d), usize::from(d.coeff(2) == 0), "at {d}");
    }
    assert!(short_exact_failures(&pres.inclusion, &pres.projection, &pres.sub, &pres.middle, s).is_empty());
    assert!(is_homomorphism(&pres.inclusion, &pres.sub, &pres.middle));
    assert!(is_homomorphism(&pres.projection, &pres.middle, s));
}

#[test]
fn f_sends_free_modules_to_free_modules() {
    let small = ring(&[2, 2]);
    let big = small.raised_at(2).unwrap();
    let n = 6;
    for twist in small.group().elements_between(-1, 1) {
        let o_small = structure_module(&small, &twist, &window(&small, n));
        let fo = apply_f(&o_small, 2).unwrap();
        let o_big = structure_module(&big, &twist, &window(&big, n));
        let cmp = fo.compare(&o_big).unwrap();
        assert!(cmp.is_equal(), "twist {twist}: {:?}", cmp.mismatches);
        assert_eq!(cmp.degrees, window(&big, n).len());
    }
}

#[test]
fn zero_goes_to_zero() {
    let r = ring(&[2, 3]);
    let z = WindowedModule::zero(r.clone(), window(&r, 3));
    assert!(apply_f_lambda(&z, 2).unwrap().is_zero());
    assert!(apply_f_rho(&z, 2).unwrap().is_zero());
    let small = r.reduced_at(2).unwrap();
    assert!(apply_f(&WindowedModule::zero(small.clone(), window(&small, 3)), 2).unwrap().is_zero());
}

#[test]
fn image_predicate() {
    let r = ring(&[2, 3]);
    let w = window(&r, 5);
    // multiplication by x_2 out of l_2 = 0 is the identity on monomials
    assert!(in_image_f(&structure_module(&r, &r.group().zero(), &w), 2).unwrap());
    assert!(!in_image_f(&simple_lambda_module(&r, 2, &w).unwrap().quotient, 2).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let small = r.reduced_at(2).unwrap();
    for _ in 0..10 {
        let m = random_module(&small, &window(&small, 5), &RandomModuleConfig::default(), &mut rng);
        assert!(in_image_f(&apply_f(&m, 2).unwrap(), 2).unwrap());
    }
}

#[test]
fn adjoints_invert_f_on_random_modules() {
    let small = ring(&[2, 2]);
    let w = window(&small, 6);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let m = random_module(&small, &w, &RandomModuleConfig::default(), &mut rng);
        assert!(m.validate().is_valid());
        let fm = apply_f(&m, 2).unwrap();
        assert!(fm.validate().is_valid());
        for back in [apply_f_lambda(&fm, 2).unwrap(), apply_f_rho(&fm, 2).unwrap()] {
            let cmp = back.compare(&m).unwrap();
            assert!(cmp.is_equal(), "{:?}", cmp.mismatches);
            assert_eq!(cmp.degrees, w.len());
        }
    }
}

#[test]
fn f_rho_is_a_twisted_f_lambda() {
    let r = ring(&[2, 3]);
    let j = 2;
    let w = window(&r, 6);
    let small = r.reduced_at(j).unwrap();
    let xj_small = small.group().x(j);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let n = random_module(&r, &w, &RandomModuleConfig::default(), &mut rng);
        let direct = apply_f_rho(&n, j).unwrap();
        let via = apply_f_lambda(&n.twist(&r.group().x(j)), j).unwrap().twist(&small.group().negate(&xj_small).unwrap());
        let cmp = direct.compare(&via).unwrap();
        assert!(cmp.is_equal(), "{:?}", cmp.mismatches);
        assert!(cmp.degrees > 0 && cmp.actions > 0);
    }
}

#[test]
fn f_lambda_kills_s_lambda() {
    let r = ring(&[2, 3]);
    let s = simple_lambda_module(&r, 2, &window(&r, 6)).unwrap().quotient;
    assert!(!s.is_zero());
    assert!(apply_f_lambda(&s, 2).unwrap().is_zero());
    // F_ρ keeps S_λ; its shift S_λ(-x_j) is the one it kills
    assert!(!apply_f_rho(&s, 2).unwrap().is_zero());
    let shifted = s.twist(&r.group().negate(&r.group().x(2)).unwrap());
    assert!(apply_f_rho(&shifted, 2).unwrap().is_zero());
}

#[test]
fn functors_are_exact() {
    let r = ring(&[2, 3]);
    let w = window(&r, 5);
    for j in [1, 2] {
        let pres = simple_lambda_module(&r, j, &w).unwrap();
        for kind in [FunctorKind::FLambda, FunctorKind::FRho] {
            let func = ExpansionFunctor::new(kind, r.weights(), j).unwrap();
            let (a, b, c) = (func.apply(&pres.sub).unwrap(), func.apply(&pres.middle).unwrap(), func.apply(&pres.quotient).unwrap());
            let f = func.apply_map(&pres.inclusion, &w);
            let g = func.apply_map(&pres.projection, &w);
            assert!(short_exact_failures(&f, &g, &a, &b, &c).is_empty(), "{kind:?} at {j}");
            assert!(is_homomorphism(&f, &a, &b) && is_homomorphism(&g, &b, &c));
        }
    }
    let small = r.reduced_at(2).unwrap();
    let ws = window(&small, 5);
    let pres = simple_lambda_module(&small, 1, &ws).unwrap();
    let func = ExpansionFunctor::new(FunctorKind::F, r.weights(), 2).unwrap();
    let (a, b, c) = (func.apply(&pres.sub).unwrap(), func.apply(&pres.middle).unwrap(), func.apply(&pres.quotient).unwrap());
    let f = func.apply_map(&pres.inclusion, &ws);
    let g = func.apply_map(&pres.projection, &ws);
    assert!(short_exact_failures(&f, &g, &a, &b, &c).is_empty());
}

#[test]
fn hom_dimensions_of_free_modules() {
    let r = ring(&[2, 3]);
    let w = window(&r, 4);
    let g = r.group();
    let o = structure_module(&r, &g.zero(), &w);
    let oc = structure_module(&r, &g.c(1), &w);
    assert_eq!(hom_dim_mod(&o, &o).unwrap(), 1);
    assert_eq!(hom_dim_mod(&o, &oc).unwrap(), 2);
    assert_eq!(hom_dim_mod(&o, &WindowedModule::zero(r.clone(), w.clone())).unwrap(), 0);
    assert_eq!(hom_dim_mod(&o, &structure_module(&r, &g.x(1), &w)).unwrap(), 1);
    assert!(matches!(hom_dim_mod(&o, &structure_module(&r, &g.zero(), &window(&r, 3))), Err(GradedError::WindowMismatch(_))));
}

#[test]
fn f_is_fully_faithful_on_free_modules() {
    let small = ring(&[2, 2]);
    let ws = window(&small, 6);
    let twists = small.group().elements_between(0, 1);
    for a in &twists {
        for b in &twists {
            let (oa, ob) = (structure_module(&small, a, &ws), structure_module(&small, b, &ws));
            let before = hom_dim_mod(&oa, &ob).unwrap();
            let after = hom_dim_mod(&apply_f(&oa, 2).unwrap(), &apply_f(&ob, 2).unwrap()).unwrap();
            assert_eq!(before, after, "O({a}) -> O({b})");
        }
    }
}

#[test]
fn truncation_is_stable() {
    let small = ring(&[2, 2]);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let m6 = random_module(&small, &window(&small, 6), &RandomModuleConfig::default(), &mut rng);
    let inner: BTreeSet<_> = window(&small, 4).degrees().cloned().collect();
    let m4 = m6.restrict(&inner);
    let big6 = apply_f(&m6, 2).unwrap();
    let big4 = apply_f(&m4, 2).unwrap();
    let cmp = big6.compare(&big4).unwrap();
    assert!(cmp.is_equal());
    assert_eq!(cmp.actions, big4.action_count());
}

#[test]
fn json_round_trip() {
    let r = ring(&[2, 3]);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let m = random_module(&r, &window(&r, 3), &RandomModuleConfig::default(), &mut rng);
    let v = m.to_json();
    assert_eq!(v["N"], 3);
    assert!(v["dims"].get("0,0|0").is_some());
    let back = WindowedModule::from_json(PrimeField::f101(), &v).unwrap();
    assert_eq!(back, m);
    let text = serde_json::to_string(&v).unwrap();
    let reparsed: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(reparsed, v);
}

#[test]
fn json_rejects_bad_shapes() {
    let r = ring(&[2]);
    let o = structure_module(&r, &r.group().zero(), &window(&r, 1));
    let mut v = o.to_json();
    v["actions"]["u"]["0|0"] = json!([[1, 0]]);
    assert!(WindowedModule::from_json(PrimeField::f101(), &v).is_err());
}

#[test]
fn works_over_the_rationals() {
    let data = WeightedLineData::standard(vec![2, 3], FieldSpec::Rationals).unwrap();
    let r = GradedRing::new(Rationals, &data).unwrap();
    let w = DegreeWindow::bounded(r.weights(), 4);
    let o = structure_module(&r, &r.group().zero(), &w);
    assert!(o.validate().is_valid());
    assert_eq!(hom_dim_mod(&o, &structure_module(&r, &r.group().c(1), &w)).unwrap(), 2);
    let s = simple_lambda_module(&r, 1, &w).unwrap().quotient;
    assert!(apply_f_lambda(&s, 1).unwrap().is_zero());
}
