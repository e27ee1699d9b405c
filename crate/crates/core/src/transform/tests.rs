use super::*;
use crate::polyring::rat;

fn q(n: i64, d: i64) -> Scalar {
    Scalar::real(rat(n, d))
}

fn pt(a: Scalar, b: Scalar) -> Point {
    (a, b)
}

/// E2 point pair with `β₀ = s`, every coordinate of size `s`.
fn scaled_pair(s: i64) -> (Point, Point) {
    (pt(q(11 * s, 10), q(-s, 10)), pt(q(6 * s, 5), q(-3 * s, 20)))
}

fn e2_case1(s: i64) -> TransformData {
    let (p0, p1) = scaled_pair(s);
    build_transform(&PolyMap::e2(), &p0, &p1, CaseTag::Case1, &TransformOptions::default()).unwrap()
}

#[test]
fn e2_exact_identities() {
    let p0 = pt(q(10, 1), q(-99, 10));
    let p1 = pt(q(99, 10), q(-97, 10));
    let t = build_transform(&PolyMap::e2(), &p0, &p1, CaseTag::Case1, &TransformOptions::default()).unwrap();
    assert!(t.identities.all(), "{:?}", t.identities);
    assert_eq!(t.mbar, 2);
    assert!(t.delta > 0.0);
}

#[test]
fn beta2_selection() {
    let one = Complex64::new(1.0, 0.0);
    let (b, _) = choose_beta2(&q(1, 20), one, 0).unwrap();
    assert_eq!(b, Scalar::zero());
    let (b, d) = choose_beta2(&q(-2, 1), -one, 0).unwrap();
    assert_eq!(b, Scalar::i());
    assert!(d > 0.0);
    for z in beta2_candidates(7).iter().skip(2) {
        assert_eq!(z.norm_sqr(), rat(1, 1));
    }
}

#[test]
fn omega_recovers_root_of_unity() {
    let p0 = pt(q(1100, 1), q(-100, 1));
    let p1 = pt(q(-1005, 1), q(-2, 1));
    let t = build_transform(&PolyMap::e2(), &p0, &p1, CaseTag::Case1, &TransformOptions::default()).unwrap();
    assert!((t.omega + 1.0).norm() < 1e-12);
    assert_eq!(t.beta2, Scalar::i());
    assert!(t.identities.all());
    let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    assert!((nearest_root_of_unity(w * 1.001, 3) - w).norm() < 1e-12);
}

#[test]
fn case2_mbar_and_identities() {
    let p0 = pt(q(1100, 1), q(-100, 1));
    let p1 = pt(q(1150, 1), q(-100, 1));
    let t = build_transform(&PolyMap::e2(), &p0, &p1, CaseTag::Case2, &TransformOptions::default()).unwrap();
    assert_eq!((t.m, t.mbar), (2, 4));
    assert!(t.identities.all(), "{:?}", t.identities);
    let bad = build_transform(&PolyMap::e2(), &p0, &p1, CaseTag::Case1, &TransformOptions::default());
    assert!(matches!(bad, Err(TransformError::DegeneratePair(_))));
    let r = integral_check(&t, DEFAULT_NODES).unwrap();
    assert!(r.abs_error <= 10.0 * t.eps, "{:?}", r);
}

#[test]
fn degenerate_inputs_rejected() {
    let p0 = pt(q(1, 1), q(-1, 1));
    let p1 = pt(q(2, 1), q(3, 1));
    let r = build_transform(&PolyMap::e2(), &p0, &p1, CaseTag::Case1, &TransformOptions::default());
    assert!(matches!(r, Err(TransformError::DegeneratePair(_))));
}

#[test]
fn s1_shrinks_with_beta0() {
    let (a, b) = (e2_case1(1000), e2_case1(10000));
    assert!(b.normal_form.s1 < a.normal_form.s1);
    assert!(a.normal_form.s1 >= a.normal_form.s1_grid);
    // f_j = O(1/β₀) for uniformly scaled pairs.
    let ratio = a.normal_form.s1_grid / b.normal_form.s1_grid;
    assert!((5.0..20.0).contains(&ratio), "{ratio}");
}

#[test]
fn series_in_p_e2() {
    let t = e2_case1(1000);
    let s = series_in_p(&t, 6).unwrap();
    assert_eq!(s.y_of_p.b(1), &RatFunc::from_poly(t.u1.clone()));
    assert!(s.round_trip);
    assert_eq!(s.m_g, 1);
    assert_eq!(s.p.alpha(), 1);
    let compared = liebdbd1_check(&t, &s, 6).unwrap();
    assert!(compared.is_some_and(|c| c >= 4), "{compared:?}");
}

#[test]
fn majorant_chain_case1() {
    let t = e2_case1(1000);
    let s = series_in_p(&t, 6).unwrap();
    for c in majorant_chain(&t, &s, 5).unwrap() {
        assert!(c.fhat_ok && c.p_ok && c.p_ok_inv_m, "{c:?}");
    }
}

#[test]
fn y0_near_u1() {
    let t = e2_case1(1000);
    let s0 = solve_y0(&t, 0.0).unwrap();
    assert!(s0.deviation < 10.0 * t.eps);
    assert!(s0.residual <= NEWTON_TOL);
    for k in 0..=10 {
        let s = solve_y0(&t, k as f64 / 10.0).unwrap();
        assert!(s.deviation <= 10.0 * t.eps, "{s:?}");
        assert!(s.fprime_gap <= 10.0 * t.eps, "{s:?}");
    }
}

#[test]
fn integral_e2() {
    let t = e2_case1(1000);
    let r = integral_check(&t, DEFAULT_NODES).unwrap();
    assert!(r.abs_error <= 10.0 * t.eps, "{r:?}");
    assert!(r.identity_gap < 1e-9, "{r:?}");
}

#[test]
fn leading_term_only() {
    for case in [CaseTag::Case1, CaseTag::Case2] {
        let (p0, p1) = match case {
            CaseTag::Case1 => scaled_pair(1000),
            CaseTag::Case2 => (pt(q(1100, 1), q(-100, 1)), pt(q(1150, 1), q(-100, 1))),
        };
        let mut t = build_transform(&PolyMap::e2(), &p0, &p1, case, &TransformOptions::default()).unwrap();
        let lead = YSeries::monomial(RatFunc::from_poly(t.u1.pow(t.m)), -(t.m as i64));
        t.fhat_f = lead.to_float_laurent();
        t.p0_value = t.p_value(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)).0;
        assert!((t.p0_value - 1.0).norm() < 1e-15);
        for k in 0..=4 {
            let a = k as f64 / 4.0;
            let s = solve_y0(&t, a).unwrap();
            assert!(s.deviation < 1e-12, "{s:?}");
        }
        let r = integral_check(&t, DEFAULT_NODES).unwrap();
        assert!(r.abs_error < 1e-12, "{case:?} {r:?}");
    }
}

#[test]
fn quadrature_rule_is_exact_on_polynomials() {
    let rule = gauss_legendre_unit(DEFAULT_NODES);
    let v: f64 = rule.iter().map(|&(x, w)| w * x.powi(100)).sum();
    assert!((v - 1.0 / 101.0).abs() < 1e-14);
}

#[test]
fn majorant_chain_case2() {
    let p0 = pt(q(1100, 1), q(-100, 1));
    let p1 = pt(q(1150, 1), q(-100, 1));
    let t = build_transform(&PolyMap::e2(), &p0, &p1, CaseTag::Case2, &TransformOptions::default()).unwrap();
    let s = series_in_p(&t, 6).unwrap();
    for c in majorant_chain(&t, &s, 5).unwrap() {
        assert!(c.fhat_ok && c.p_ok_inv_m, "{c:?}");
    }
    assert_eq!(liebdbd1_check(&t, &s, 6).unwrap(), Some(6));
}
