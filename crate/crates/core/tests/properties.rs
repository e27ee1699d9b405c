mod common;

use common::*;
use keller_core::normalize::normalize_keller;
use keller_core::perturb::{
    a_matrix_formula, det2, expected_dets, recenter_frame, witness_step, Coord, FrameStyle, StepConstraint,
    StepOptions, WitnessPair,
};
use keller_core::polyring::{BiPoly, PolyMap, Scalar};
use keller_core::transform::{build_transform, CaseTag, TransformOptions};
use keller_core::witness::{find_witnesses, SearchOptions};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

fn random_map(r: &mut rand_chacha::ChaCha8Rng) -> PolyMap {
    let mut poly = || {
        let mut p = BiPoly::constant(Scalar::from_int(0));
        for _ in 0..4 {
            let (i, j) = (r.gen_range(0..=2u32), r.gen_range(0..=2u32));
            p = p.add(&BiPoly::monomial(Scalar::from_int(r.gen_range(-3..=3)), i, j));
        }
        p
    };
    let (f, g) = (poly().add(&BiPoly::x()), poly().add(&BiPoly::y()));
    PolyMap::new(f, g)
}

fn style() -> impl Strategy<Value = FrameStyle> {
    prop_oneof![
        Just(FrameStyle::Additive),
        Just(FrameStyle::MultX),
        Just(FrameStyle::MultXy),
        Just(FrameStyle::ScaledA0a1),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn a_matrix_formula_matches_product(seed in any::<u64>(), st in style()) {
        let mut r = rng(seed);
        let m = random_map(&mut r);
        let (p0, p1) = (random_point(&mut r), random_point(&mut r));
        let xi = random_point(&mut r);
        let fr = recenter_frame(&m, &p0, &p1, st, Some(&xi));
        prop_assume!(fr.is_ok());
        let fr = fr.unwrap();
        let formula = a_matrix_formula(&fr);
        prop_assert_eq!(formula, Some(fr.a.clone()));
        let (d0, d1) = expected_dets(&m, &fr);
        prop_assert_eq!(det2(&fr.a0), d0);
        prop_assert_eq!(det2(&fr.a1_raw), d1);
    }

    #[test]
    fn transform_identities_hold_on_triangular_pairs(seed in any::<u64>()) {
        let mut r = rng(seed);
        let np = normalize_keller(&random_triangular(&mut r)).unwrap();
        let (p0, p1) = (random_point(&mut r), random_point(&mut r));
        let t = build_transform(&np.pair, &p0, &p1, CaseTag::Case1, &TransformOptions::default());
        prop_assume!(t.is_ok());
        let t = t.unwrap();
        let ids = t.identities.clone();
        prop_assert!(ids.jacobian && ids.f_at_p0 && ids.f_at_p1);
        prop_assert!(t.eps > 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn step_results_respect_pins(a in 0.5f64..3.0, b in 0.0f64..2.0) {
        let m = fold().to_float();
        let c = |x: f64| Complex64::new(x, 0.0);
        let pair = WitnessPair { p0: (c(a), c(b)), p1: (c(-a), c(b + 2.0 * a)) };
        let cons = [StepConstraint::KeepAbs { coord: Coord::X0, value: a }, StepConstraint::IncreaseAbs { coord: Coord::Y1 }];
        let opts = StepOptions::default();
        let res = witness_step(&m, &pair, &cons, &opts).unwrap();
        prop_assert!(res.residual <= opts.tol);
        prop_assert!(res.pair.residual(&m) <= 1e-9);
        prop_assert!((res.pair.p0.0.norm() - a).abs() <= 1e-8);
        prop_assert!(res.pair.p1.1.norm() > b + 2.0 * a);
    }

    #[test]
    fn witnesses_lie_on_the_fold_family(n in 1i64..=9, d in 1i64..=4) {
        let m = fold();
        let xi0 = Scalar::from_ratio(n, d);
        let xi1 = Scalar::from_ratio(-n, d);
        let opts = SearchOptions::default();
        let ws = find_witnesses(&m, &xi0, &xi1, &opts);
        let fm = m.to_float();
        let gap = 2.0 * n as f64 / d as f64;
        prop_assert!(!ws.is_empty());
        for w in &ws {
            prop_assert!(w.residual(&fm) <= 1e-10);
            prop_assert!(w.separation() >= 1e-8);
            prop_assert!((w.p1.1 - w.p0.1 - gap).norm() <= 1e-9);
        }
        let again = find_witnesses(&m, &xi0, &xi1, &opts);
        prop_assert_eq!(ws, again);
    }
}
