//! Acceptance run: one PASS/FAIL line per criterion, then a single verdict.
//!
//! `cargo test -p keller-core --test acceptance -- --nocapture`

mod common;

use std::time::{Duration, Instant};

use common::*;
use keller_core::majorant::{majorant_inverse, neg_binomial_inequality};
use keller_core::normalize::normalize_keller;
use keller_core::perturb::{
    beta_coefficient, closed_form_beta, continue_steps, witness_step, Coord, Kappa, StepConstraint, StepOptions,
    TangentFrame, WitnessPair,
};
use keller_core::polyring::{binom, rat, BiPoly, PolyMap, Scalar};
use keller_core::reversion::formal_inverse;
use keller_core::transform::{
    build_transform, integral_check, solve_y0, CaseTag, IntegralReport, TransformData, TransformOptions, DEFAULT_NODES,
};
use keller_core::witness::{find_witnesses, SearchOptions};
use keller_core::yseries::{rebase_coeff, reexpand, YSeries};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;

type C = Complex64;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn run(n: usize, name: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let o = f();
    let el = t.elapsed();
    let in_time = el <= limit;
    let pass = o.pass && in_time;
    let late = if in_time { String::new() } else { format!(", over the {limit:?} limit") };
    println!("{} criterion {n:>2} ({name}): {} [{el:.2?}{late}]", if pass { "PASS" } else { "FAIL" }, o.detail);
    pass
}

fn c1_reversion() -> Outcome {
    let f = vec![rat(1, 1), rat(1, 1)];
    let r = formal_inverse(&f, 6).unwrap();
    let want: Vec<BigRational> = [1, -1, 2, -5, 14, -42].iter().map(|&k| rat(k, 1)).collect();
    let got: Vec<BigRational> = (1..=6).map(|i| r.b(i).clone()).collect();
    let oracle = fixed_point_inverse(&f, 6);
    let txt: Vec<String> = got.iter().map(|c| c.to_string()).collect();
    outcome(
        got == want && oracle == want,
        format!("coefficients [{}], oracle agrees: {}", txt.join(", "), oracle == want),
    )
}

fn c2_majorant_nonneg() -> Outcome {
    let mut r = rng(2);
    let mut bad = 0;
    let mut oracle_mismatch = 0;
    for k in 0..200 {
        let phi = random_majorant(&mut r);
        match majorant_inverse(&phi, 30) {
            Ok(inv) if inv.coeffs.iter().all(|c| !c.is_negative()) => {
                if k < 10 {
                    let neg: Vec<BigRational> =
                        phi.iter().enumerate().map(|(i, c)| if i == 0 { c.clone() } else { -c.clone() }).collect();
                    if fixed_point_inverse(&neg, 12) != inv.coeffs[..12] {
                        oracle_mismatch += 1;
                    }
                }
            }
            _ => bad += 1,
        }
    }
    outcome(
        bad == 0 && oracle_mismatch == 0,
        format!("200 majorants to order 30, {bad} with a negative coefficient, {oracle_mismatch} oracle mismatches"),
    )
}

/// Gaussian rational of modulus `num/den`: `(num/den)·((1−t²) + 2ti)/(1+t²)`.
fn with_modulus(num: i64, den: i64, t: BigRational) -> Scalar {
    let one = rat(1, 1);
    let d = &one + &t * &t;
    let z = Scalar::new((&one - &t * &t) / &d, (rat(2, 1) * &t) / &d);
    z.scale(&rat(num, den))
}

fn c3_dominance_transfer() -> Outcome {
    let mut r = rng(3);
    let mut violations = 0;
    for _ in 0..100 {
        let deg = r.gen_range(2..=6);
        let (num, den) = (r.gen_range(1..=8), 4);
        let t = rat(r.gen_range(-8..=8), 8);
        let mut f = vec![with_modulus(num, den, t)];
        let mut phi = vec![rat(num, den)];
        for _ in 1..deg {
            let (a, b) = (r.gen_range(-6i64..=6), r.gen_range(-6i64..=6));
            f.push(Scalar::new(rat(a, 4), rat(b, 4)));
            // |a + bi| ≤ |a| + |b|, plus some slack.
            phi.push(rat(a.abs() + b.abs() + r.gen_range(0..=3), 4));
        }
        let fi = formal_inverse(&f, 20).unwrap();
        let pi = majorant_inverse(&phi, 20).unwrap();
        for i in 1..=20 {
            let bh = pi.b(i);
            if fi.b(i).norm_sqr() > bh * bh {
                violations += 1;
            }
        }
    }
    outcome(violations == 0, format!("100 pairs to order 20, {violations} coefficient violations"))
}

fn identities_ok(t: &TransformData) -> bool {
    let i = &t.identities;
    i.jacobian && i.f_at_p0 && i.f_at_p1
}

fn c4_transform_identities() -> Outcome {
    let e2 = build_transform(
        &PolyMap::e2(),
        &(q(10, 1), q(-99, 10)),
        &(q(99, 10), q(-97, 10)),
        CaseTag::Case1,
        &TransformOptions::default(),
    );
    let e2_ok = e2.as_ref().is_ok_and(identities_ok);
    let mut r = rng(4);
    let (mut ok, mut ms) = (0, Vec::new());
    for _ in 0..20 {
        let np = normalize_keller(&random_triangular(&mut r)).unwrap();
        for _ in 0..50 {
            let (p0, p1) = (random_point(&mut r), random_point(&mut r));
            if let Ok(t) = build_transform(&np.pair, &p0, &p1, CaseTag::Case1, &TransformOptions::default()) {
                if identities_ok(&t) {
                    ok += 1;
                }
                ms.push(t.m);
                break;
            }
        }
    }
    let m3 = ms.iter().filter(|&&m| m == 3).count();
    outcome(
        e2_ok && ok == 20,
        format!("E2 identities {e2_ok}, random pairs {ok}/20 exact (built {}, {m3} with m = 3)", ms.len()),
    )
}

fn integral_at(s: i64, case: CaseTag) -> IntegralReport {
    let (p0, p1) = match case {
        CaseTag::Case1 => scaled_pair(s),
        CaseTag::Case2 => scaled_pair_case2(s),
    };
    let t = build_transform(&PolyMap::e2(), &p0, &p1, case, &TransformOptions::default()).unwrap();
    integral_check(&t, DEFAULT_NODES).unwrap()
}

fn c5_integral() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (case, name) in [(CaseTag::Case1, "case 1"), (CaseTag::Case2, "case 2")] {
        let (a, b) = (integral_at(1000, case), integral_at(10000, case));
        let ratio = a.abs_error / b.abs_error;
        let ok = a.abs_error <= 10.0 * a.eps && b.abs_error <= 10.0 * b.eps && (5.0..=20.0).contains(&ratio);
        pass &= ok;
        parts.push(format!(
            "{name}: |err| {:.3e} (10eps {:.3e}), {:.3e} (10eps {:.3e}), ratio {ratio:.2}",
            a.abs_error,
            10.0 * a.eps,
            b.abs_error,
            10.0 * b.eps
        ));
    }
    outcome(pass, parts.join("; "))
}

fn c6_y0_near_u1() -> Outcome {
    let mut cs = Vec::new();
    let mut cps = Vec::new();
    for s in [1000, 10000] {
        let (p0, p1) = scaled_pair(s);
        let t = build_transform(&PolyMap::e2(), &p0, &p1, CaseTag::Case1, &TransformOptions::default()).unwrap();
        let sols: Vec<_> = (0..=10).map(|k| solve_y0(&t, k as f64 / 10.0).unwrap()).collect();
        cs.push(sols.iter().map(|s| s.deviation).fold(0.0, f64::max) / t.eps);
        cps.push(sols.iter().map(|s| s.fprime_gap).fold(0.0, f64::max) / t.eps);
    }
    let ratio = cs[0] / cs[1];
    let stable = (1.0 / 3.0..=3.0).contains(&ratio);
    let fprime = cps.iter().all(|&c| c <= 10.0);
    outcome(
        stable && fprime,
        format!(
            "C = {:.3e}, {:.3e} (ratio {ratio:.3}, need [1/3, 3]); C' = {:.3e}, {:.3e} (need <= 10)",
            cs[0], cs[1], cps[0], cps[1]
        ),
    )
}

fn c7_witness_recovery() -> Outcome {
    let m = fold();
    let ws = find_witnesses(&m, &Scalar::from_int(1), &Scalar::from_int(-1), &SearchOptions::default());
    let fm = m.to_float();
    let on_family = ws.iter().all(|w| (w.p1.1 - w.p0.1 - 2.0).norm() <= 1e-10);
    let resid = ws.iter().all(|w| w.residual(&fm) <= 1e-10);
    outcome(
        ws.len() >= 5 && on_family && resid,
        format!("{} pairs, on family {on_family}, residuals ok {resid}", ws.len()),
    )
}

fn c8_step() -> Outcome {
    let m = fold().to_float();
    let c = |r: f64| C::new(r, 0.0);
    let pair = WitnessPair { p0: (c(1.0), c(0.0)), p1: (c(-1.0), c(2.0)) };
    let cons =
        [StepConstraint::KeepAbs { coord: Coord::X0, value: 1.0 }, StepConstraint::IncreaseAbs { coord: Coord::Y1 }];
    let opts = StepOptions::default();
    let Ok(r) = witness_step(&m, &pair, &cons, &opts) else {
        return outcome(false, "step failed".into());
    };
    let x0 = r.pair.p0.0.norm();
    let y1 = r.pair.p1.1.norm();
    let one = (x0 - 1.0).abs() <= 1e-8 && y1 > 2.0 && r.residual <= 1e-10;
    let (steps, err) = continue_steps(&m, &pair, &cons, &opts, 20);
    let mut ys = vec![2.0];
    ys.extend(steps.iter().map(|s| s.pair.p1.1.norm()));
    let mono = steps.len() == 20 && ys.windows(2).all(|w| w[1] > w[0]);
    let pinned = steps.iter().all(|s| (s.pair.p0.0.norm() - 1.0).abs() <= 1e-8 && s.residual <= 1e-10);
    outcome(
        one && mono && pinned && err.is_none(),
        format!(
            "|x0| = {x0:.12}, |y1| = {y1:.6}, residual {:.1e}; 20 steps monotone {mono}, |y1| -> {:.6}",
            r.residual,
            ys.last().unwrap()
        ),
    )
}

fn c9_beta() -> Outcome {
    let mut r = rng(9);
    let mut worst_rel: f64 = 0.0;
    let mut worst_inv: f64 = 0.0;
    let mut failures = 0;
    let mut instance = f64::NAN;
    let rc = |r: &mut rand_chacha::ChaCha8Rng| C::new(r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0));
    for k in 0..10 {
        let (k1, k2, x0) = if k == 0 {
            (1.0, 0.5, 1.0)
        } else {
            (r.gen_range(0.5..2.0), r.gen_range(0.1..0.9), r.gen_range(1.0..3.0))
        };
        let x1 = k1 * x0 + k2;
        let kappa = Kappa([k1, k2, 0.5, 1.0, 2.0, 1.0]);
        let tf =
            TangentFrame { alpha1: C::new(x1 / (k1 * x0), 0.0), alpha2: rc(&mut r), alpha3: rc(&mut r), w: rc(&mut r) };
        let moved = TangentFrame { alpha2: tf.alpha2 + rc(&mut r), ..tf };
        match (beta_coefficient(&tf, &kappa, x0, x1), beta_coefficient(&moved, &kappa, x0, x1)) {
            (Ok(a), Ok(b)) => {
                let cf = closed_form_beta(&kappa, x0);
                if k == 0 {
                    instance = a.beta_tilde;
                }
                worst_rel = worst_rel.max((a.beta_tilde - cf).abs() / cf);
                worst_inv = worst_inv.max((a.beta_tilde - b.beta_tilde).abs());
            }
            _ => failures += 1,
        }
    }
    let pass = failures == 0 && worst_rel <= 1e-6 && worst_inv <= 1e-8 && (instance - 0.375).abs() <= 0.375e-6;
    outcome(
        pass,
        format!(
            "(1, 1/2, 1) -> {instance:.9}; 10 frames, max rel err {worst_rel:.2e}, max alpha2 shift {worst_inv:.2e}"
        ),
    )
}

fn c10_binomials() -> Outcome {
    let ab = [rat(-1, 3), rat(-1, 2), rat(-1, 1), rat(-5, 2)];
    let mut checks = 0;
    let mut bad = 0;
    for a in &ab {
        for b in &ab {
            for i in 0..=12 {
                checks += 1;
                bad += usize::from(!neg_binomial_inequality(a, b, i));
            }
        }
    }
    for k in [1i64, 2, 3] {
        for i in 0..=12u32 {
            checks += 1;
            let kk = rat(k, 1);
            bad += usize::from(binom(&kk, i as usize) > num_traits::pow(kk, i as usize));
        }
    }
    for k in [rat(1, 2), rat(1, 3)] {
        for i in 1..=12 {
            checks += 1;
            bad += usize::from(binom(&k, i).abs() > k);
        }
    }
    outcome(bad == 0, format!("{checks} exact checks, {bad} failures"))
}

fn random_unit_series(r: &mut rand_chacha::ChaCha8Rng) -> YSeries {
    let alpha = r.gen_range(1..=3);
    let len = r.gen_range(1..6);
    let mut c = vec![1];
    c.extend((0..len).map(|_| r.gen_range(-4..=4)));
    YSeries::from_ints(alpha, &c, None)
}

fn c11_series_laws() -> Outcome {
    let mut r = rng(11);
    let n = 16;
    let (mut power, mut inverse, mut rebase) = (0, 0, 0);
    for _ in 0..100 {
        let p = random_unit_series(&mut r);
        let beta = rat(r.gen_range(-3..=3), p.alpha());
        let beta2 = rat(r.gen_range(-2..=2), 1);
        let lhs = p.pow_rational(&beta, n).and_then(|s| s.pow_rational(&beta2, n));
        let rhs = p.pow_rational(&(&beta * &beta2), n);
        power += usize::from(matches!((lhs, rhs), (Ok(a), Ok(b)) if a == b));
        let inv = p.inverse(n).map(|i| i.mul(&p));
        inverse += usize::from(inv.is_ok_and(|s| s == YSeries::one().truncate(n)));
        let qs = random_unit_series(&mut r).shift(r.gen_range(-3..=3));
        let back = rebase_coeff(&qs, &p, n + 1).and_then(|b| reexpand(&b, &p, qs.alpha()));
        rebase += usize::from(back.is_ok_and(|b| b == qs.truncate(n)));
    }
    outcome(
        power == 100 && inverse == 100 && rebase == 100,
        format!("order {n}: power law {power}/100, inverse law {inverse}/100, rebase round trip {rebase}/100"),
    )
}

fn c12_normalize() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for k in [2u32, 3] {
        let m = PolyMap::new(BiPoly::x(), BiPoly::y().add(&BiPoly::x().pow(k)));
        let Ok(np) = normalize_keller(&m) else {
            return outcome(false, format!("(x, y+x^{k}) failed to normalize"));
        };
        let j_one = np.pair.jac == BiPoly::one();
        let idem = normalize_keller(&np.pair).is_ok_and(|again| again.pair == np.pair && again.ell == 0);
        let ok = np.certificate.all() && j_one && idem;
        pass &= ok;
        parts.push(format!(
            "(x, y+x^{k}): m = {}, ell = {}, certificate {}, J = 1 {j_one}, idempotent {idem}",
            np.m,
            np.ell,
            np.certificate.all()
        ));
    }
    outcome(pass, parts.join("; "))
}

#[test]
fn acceptance() {
    let s = Duration::from_secs;
    let results = [
        run(1, "reversion", s(1), c1_reversion),
        run(2, "majorant reversion nonnegativity", s(30), c2_majorant_nonneg),
        run(3, "dominance transfer", s(60), c3_dominance_transfer),
        run(4, "transform identities", s(120), c4_transform_identities),
        run(5, "integral identity", s(120), c5_integral),
        run(6, "Y0 near u1", s(120), c6_y0_near_u1),
        run(7, "witness recovery", s(10), c7_witness_recovery),
        run(8, "constrained step", s(60), c8_step),
        run(9, "beta coefficient", s(60), c9_beta),
        run(10, "binomial battery", s(5), c10_binomials),
        run(11, "series laws", s(60), c11_series_laws),
        run(12, "normalization", s(60), c12_normalize),
    ];
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, &p)| !p).map(|(i, _)| i + 1).collect();
    println!("{}/12 criteria pass", 12 - failed.len());
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}

#[test]
fn fixed_point_oracle_is_sound() {
    // z = w − w² + 2w³ − ⋯ inverts z + z².
    let inv = fixed_point_inverse(&[rat(1, 1), rat(1, 1)], 4);
    assert_eq!(inv, vec![rat(1, 1), rat(-1, 1), rat(2, 1), rat(-5, 1)]);
    assert!(inv.iter().all(|c| !c.is_zero()));
}
