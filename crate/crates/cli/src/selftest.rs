//! A fast battery of invariants across all modules.

use keller_core::majorant::{majorant_inverse, neg_binomial_inequality};
use keller_core::normalize::{is_keller, normalize_keller};
use keller_core::perturb::{
    beta_coefficient, witness_step, Coord, Kappa, StepConstraint, StepOptions, TangentFrame, WitnessPair,
};
use keller_core::polyring::{rat, BiPoly, PolyMap, Scalar};
use keller_core::reversion::formal_inverse;
use keller_core::transform::{build_transform, CaseTag, TransformOptions};
use keller_core::witness::{find_witnesses, SearchOptions};
use num_complex::Complex64;
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
}

fn fold() -> PolyMap {
    PolyMap::new(BiPoly::x().pow(2), BiPoly::y().add(&BiPoly::x()))
}

fn catalan() -> bool {
    let r = formal_inverse(&[rat(1, 1), rat(1, 1)], 6).unwrap();
    let want = [1, -1, 2, -5, 14, -42];
    r.verify() && (1..=6).all(|i| *r.b(i) == rat(want[i - 1], 1))
}

fn keller_examples() -> bool {
    let xy = BiPoly::x().add(&BiPoly::y());
    let m = PolyMap::new(BiPoly::x().add(&xy.pow(2)), xy);
    let ok = is_keller(&m).is_keller() && normalize_keller(&m).is_ok_and(|n| n.certificate.all());
    ok && !is_keller(&fold()).is_keller()
}

fn majorant_nonneg() -> bool {
    let phi = [rat(1, 2), rat(3, 2), rat(0, 1), rat(11, 4)];
    majorant_inverse(&phi, 20).is_ok()
}

fn binomials() -> bool {
    let ab = [rat(-1, 3), rat(-1, 1), rat(-5, 2)];
    ab.iter().all(|a| ab.iter().all(|b| (0..=12).all(|i| neg_binomial_inequality(a, b, i))))
}

fn e2_identities() -> bool {
    let q = |n, d| Scalar::from_ratio(n, d);
    build_transform(
        &PolyMap::e2(),
        &(q(10, 1), q(-99, 10)),
        &(q(99, 10), q(-97, 10)),
        CaseTag::Case1,
        &TransformOptions::default(),
    )
    .is_ok_and(|t| t.identities.jacobian && t.identities.f_at_p0 && t.identities.f_at_p1)
}

fn beta() -> bool {
    let c = |r: f64| Complex64::new(r, 0.0);
    let tf =
        TangentFrame { alpha1: c(1.5), alpha2: Complex64::new(0.3, -0.7), alpha3: c(0.2), w: Complex64::new(0.0, 1.0) };
    beta_coefficient(&tf, &Kappa([1.0, 0.5, 0.5, 1.0, 2.0, 1.0]), 1.0, 1.5)
        .is_ok_and(|b| (b.beta_tilde - 0.375).abs() <= 0.375e-6)
}

fn witnesses() -> bool {
    let m = fold();
    let ws = find_witnesses(&m, &Scalar::from_int(1), &Scalar::from_int(-1), &SearchOptions::default());
    let fm = m.to_float();
    !ws.is_empty() && ws.iter().all(|w| w.residual(&fm) <= 1e-10 && (w.p1.1 - w.p0.1 - 2.0).norm() <= 1e-8)
}

fn step() -> bool {
    let c = |r: f64| Complex64::new(r, 0.0);
    let pair = WitnessPair { p0: (c(1.0), c(0.0)), p1: (c(-1.0), c(2.0)) };
    let cons =
        [StepConstraint::KeepAbs { coord: Coord::X0, value: 1.0 }, StepConstraint::IncreaseAbs { coord: Coord::Y1 }];
    witness_step(&fold().to_float(), &pair, &cons, &StepOptions::default())
        .is_ok_and(|r| (r.pair.p0.0.norm() - 1.0).abs() <= 1e-8 && r.pair.p1.1.norm() > 2.0 && r.residual <= 1e-10)
}

pub fn run() -> Vec<Check> {
    type Case = (&'static str, fn() -> bool);
    let suite: [Case; 8] = [
        ("reversion_catalan", catalan),
        ("keller_examples", keller_examples),
        ("majorant_inverse_nonnegative", majorant_nonneg),
        ("binomial_inequalities", binomials),
        ("e2_transform_identities", e2_identities),
        ("beta_closed_form", beta),
        ("fold_witnesses", witnesses),
        ("step_pins", step),
    ];
    suite.iter().map(|(name, f)| Check { name, pass: f() }).collect()
}
