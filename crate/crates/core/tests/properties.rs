mod support;

use lch_core::algebra::{
    differential_extend, monomial_height, validate_dga, Poly, ValidationOptions,
};
use lch_core::augment::{twist, Augmentation};
use lch_core::bound::LengthBound;
use lch_core::cobordism::{
    best_capacity_bound, capacity_lower_bound, chain_action_bound, check_a_infinity_map,
    linearize_map, product_bound, split_cylinder_bound, validate_chain_map, BestBoundOptions,
};
use lch_core::cohomology::{capacity, cohomology, linearized_complex};
use lch_core::construction::{
    hopf_profile, packing_feasible, packing_via_profiles, profile_min_length, FeasibilityResult,
    PackingVerdict, ProfileConstraint, ProfileProblem,
};
use lch_core::fixtures;
use lch_core::numeric::{int, rat};
use proptest::prelude::*;
use rand::Rng;
use support::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn fuzzed_dgas(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = random_dga(&mut r);
        let rep = validate_dga(&d, ValidationOptions::default());
        prop_assert_eq!(rep.has_rule("d-squared"), !naive_d_squared_vanishes(&d));
        prop_assert!(naive_strict_energy(&d));
        prop_assert!(!rep.has_rule("strict-energy") && !rep.has_rule("degree"));
        if rep.ok() {
            for a in d.ids() {
                prop_assert!(differential_extend(&d, d.differential(a)).unwrap().is_zero());
            }
        }
        let t = rat(r.gen_range(1..=9), r.gen_range(1..=9));
        prop_assert_eq!(validate_dga(&d.rescaled(&t), ValidationOptions::default()).ok(), rep.ok());

        let (x, y) = (random_poly(&mut r, d.len()), random_poly(&mut r, d.len()));
        let dx = differential_extend(&d, &x).unwrap();
        let dy = differential_extend(&d, &y).unwrap();
        prop_assert_eq!(differential_extend(&d, &x.mul(&y)).unwrap(), dx.mul(&y).add(&x.mul(&dy)));
        prop_assert_eq!(words_of(&dx), naive_d(&d, &words_of(&x)));
        for m in x.terms() {
            let hm = monomial_height(&d, m).unwrap();
            for t in differential_extend(&d, &Poly::from_monomial(m.clone())).unwrap().terms() {
                prop_assert!(monomial_height(&d, t).unwrap() < hm);
            }
        }
    }

    #[test]
    fn fuzzed_valid_dgas_twist_and_cohomology(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = random_dga(&mut r);
        prop_assume!(validate_dga(&d, ValidationOptions::default()).ok());
        check_twists(&d);
        let t = rat(r.gen_range(1..=9), r.gen_range(1..=9));
        let scaled = d.rescaled(&t);
        for eps in augmentations(&d) {
            let c = linearized_complex(&twist(&d, &eps).unwrap());
            let cs = linearized_complex(&twist(&scaled, &eps).unwrap());
            for k in cohomology(&c) {
                let a = capacity(&c, &k.representative).unwrap().finite().unwrap().clone();
                let b = capacity(&cs, &k.representative).unwrap().finite().unwrap().clone();
                prop_assert_eq!(b, a * &t);
            }
        }
    }

    #[test]
    fn fixtures_are_valid_with_every_augmentation(seed in any::<u64>()) {
        let mut r = rng(seed);
        for d in fixture_dgas(&mut r) {
            let rep = validate_dga(&d, ValidationOptions::default());
            prop_assert!(rep.ok(), "{}: {:?}", d.name, rep.violations);
            prop_assert!(naive_d_squared_vanishes(&d) && naive_strict_energy(&d));
            check_twists(&d);
        }
    }

    #[test]
    fn kalman_map_properties(h1n in 1i64..=12, h1d in 1i64..=4, h2n in 1i64..=12, h2d in 1i64..=4, t in 1i64..=7) {
        let (h1, h2) = (rat(h1n, h1d), rat(h2n, h2d));
        let m = fixtures::kalman_map(&h1, &h2);
        prop_assert!(validate_chain_map(&m).ok());

        // Σ h(bᵢ) ≤ e^ℓ·h(a) on every term, with equality somewhere
        let ell = chain_action_bound(&m);
        let mut attained = false;
        for (&a, p) in &m.assignments {
            for w in p.terms() {
                let r = monomial_height(&m.target, w).unwrap() / m.source.height(a);
                prop_assert!(r <= ell.ratio || ell.is_zero());
                attained |= r == ell.raw_ratio;
            }
        }
        prop_assert!(attained);

        let scaled = fixtures::kalman_map(&(&h1 * int(t)), &(&h2 * int(t)));
        for eps in augmentations(&m.target) {
            let Ok(lin) = linearize_map(&m, &eps) else { continue };
            prop_assert!(check_a_infinity_map(&lin, 2).ok());
            let cm = linearized_complex(&lin.minus);
            let cp = linearized_complex(&lin.plus);
            for &g in &cm.basis {
                let dg = cm.d_of(g).clone();
                if let Ok(img) = lin.psi1(&dg) {
                    prop_assert!(cp.is_exact(&img));
                }
            }
            for k in cohomology(&cm) {
                if let Ok(img) = lin.psi1(&k.representative) {
                    prop_assert!(cp.apply(&img).is_empty());
                    if cp.is_exact(&img) { continue; }
                    let cap_m = capacity(&cm, &k.representative).unwrap();
                    let cap_p = capacity(&cp, &img).unwrap();
                    let single = capacity_lower_bound(&cap_m, &cap_p).unwrap();
                    let prod = product_bound(&lin, &[k.representative.clone()]).unwrap();
                    prop_assert_eq!((&single.coefficient, &single.ratio), (&prod.coefficient, &prod.ratio));
                }
            }
            let a = best_capacity_bound(&m, &eps, &BestBoundOptions::default()).unwrap().bound;
            let b = best_capacity_bound(&scaled, &eps, &BestBoundOptions::default()).unwrap().bound;
            prop_assert!(a.same_value(&b));
            prop_assert_eq!(a.ratio, b.ratio);
        }
    }

    #[test]
    fn hopf_tightness(un in 1i64..=15, vn in 1i64..=15) {
        prop_assume!(un != vn);
        let (u, v) = (rat(un, 16), rat(vn, 16));
        let lower = split_cylinder_bound(
            &fixtures::hopf_dga(&u),
            &fixtures::hopf_dga(&v),
            &Augmentation::trivial(),
            &Augmentation::trivial(),
            &[0, 1],
        )
        .unwrap()
        .bound;
        let upper = profile_min_length(&hopf_profile(&u, &v)).unwrap();
        let upper = upper.inf_length().unwrap();
        prop_assert!(lower.same_value(upper));
        prop_assert_eq!(&lower.ratio, &upper.ratio);
    }

    #[test]
    fn profile_monotone_and_symmetric(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = random_profile(&mut r);
        let base = profile_min_length(&p).unwrap();
        let mut bigger = p.clone();
        bigger.constraints.extend(random_profile(&mut r).constraints.into_iter().filter(|k| match (k, &p.constraints[0]) {
            (ProfileConstraint::Derivative { lambda, .. }, ProfileConstraint::Derivative { lambda: l0, .. }) => lambda == l0,
            _ => true,
        }));
        match (base.inf_length(), profile_min_length(&bigger).unwrap()) {
            (None, FeasibilityResult::Feasible { .. }) => prop_assert!(false, "constraints only restrict"),
            (Some(a), FeasibilityResult::Feasible { inf_length: b }) => prop_assert!(b.cmp_value(a).is_ge()),
            _ => {}
        }
        for k in &p.constraints {
            let ProfileConstraint::Derivative { c, .. } = k else { continue };
            let one = ProfileProblem { u: p.u.clone(), v: p.v.clone(), constraints: vec![k.clone()] };
            let swapped = ProfileProblem { u: p.v.clone(), v: p.u.clone(), constraints: vec![k.clone()] };
            let (a, b) = (profile_min_length(&one).unwrap(), profile_min_length(&swapped).unwrap());
            prop_assert_eq!(a.inf_length().is_some(), b.inf_length().is_some());
            if let (Some(a), Some(b)) = (a.inf_length(), b.inf_length()) {
                // thresholds negate, so exactly one direction is positive
                prop_assert!(a.is_zero() != b.is_zero());
                let r = (&p.u + c) / (&p.v + c);
                let r = if r > int(1) { r } else { r.recip() };
                prop_assert_eq!(if a.is_zero() { &b.ratio } else { &a.ratio }, &r);
            }
        }
    }
}

/// The closed-form infimum against a brute-force piecewise-linear search,
/// 5% above and below.
#[test]
fn profile_oracle_agreement() {
    let mut r = rng(20_261_016);
    let (mut feasible, mut positive) = (0, 0);
    for _ in 0..200 {
        let p = random_profile(&mut r);
        match profile_min_length(&p).unwrap() {
            FeasibilityResult::Infeasible { .. } => {
                assert!(!profile_oracle(&p, 3.0, 200), "{p:?}");
            }
            FeasibilityResult::Feasible { inf_length } => {
                feasible += 1;
                let a = inf_length.to_f64();
                let n = (200.0 * (1.0 + 4.0 * a * a)).min(20_000.0) as usize;
                if inf_length.is_zero() {
                    assert!(profile_oracle(&p, 0.05, n), "{p:?}");
                } else {
                    positive += 1;
                    assert!(profile_oracle(&p, 1.05 * a, n), "{p:?} above {a}");
                    assert!(!profile_oracle(&p, 0.95 * a, n), "{p:?} below {a}");
                }
            }
        }
    }
    assert!(
        feasible >= 50 && positive >= 30,
        "{feasible} feasible, {positive} positive"
    );
}

#[test]
fn packing_routes_agree() {
    let mut r = rng(7);
    let mut decided = 0;
    for _ in 0..100 {
        let k = r.gen_range(1..=4);
        let v = random_shifts(&mut r, k);
        let direct = packing_feasible(k, &v, 30).unwrap().verdict;
        assert_ne!(direct, PackingVerdict::Boundary);
        assert_eq!(direct, packing_via_profiles(k, &v).unwrap(), "{v:?}");
        if let Some(ok) = packing_f64(k, &v) {
            decided += 1;
            assert_eq!(direct == PackingVerdict::Feasible, ok, "{v:?}");
        }
    }
    assert!(decided >= 95);
}

#[test]
fn length_bounds_are_scale_free() {
    let u = fixtures::unknot_dga(&int(1));
    for t in [rat(1, 3), int(5)] {
        let a = lch_core::cobordism::chord_diff_bound_for(&u, &fixtures::unknot_dga(&rat(1, 4)))
            .unwrap();
        let b = lch_core::cobordism::chord_diff_bound_for(
            &u.rescaled(&t),
            &fixtures::unknot_dga(&(rat(1, 4) * &t)),
        )
        .unwrap();
        assert_eq!(a.ratio, b.ratio);
        assert!(LengthBound::same_value(&a, &b));
    }
}
