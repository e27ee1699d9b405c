//! Coordinate transforms `(F̂, Ĝ)` attached to a point pair, the normal form of `F̂`, the series
//! `P = F̂^{-1/m}` and the integral of `Q = −J(F̂,Ĝ)/F̂_y` along `P = P₀`.
//!
//! Both cases use `u = β₀u₁/y − v`, so that `u + v = β₀u₁/y`:
//! case 1 has `v = y₀ + β₃x`, case 2 has `v = β̃₃y + β₃`.

mod quad;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::polyring::{pow_unit, principal_pow, BiPoly, FloatScalar, Point, PolyMap, Scalar, UPoly};
use crate::reversion::{formal_inverse, ReversionError, ReversionResult};
use crate::yseries::{compose_series, rebase_coeff, Composed, FloatLaurent, RatFunc, SeriesError, Subst, YSeries};

pub use quad::gauss_legendre_unit;

pub const DEFAULT_NODES: usize = 64;
pub const NEWTON_TOL: f64 = 1e-12;
pub const NEWTON_MAX_ITER: usize = 50;
/// Sampling grid for root-freeness and `S1`.
pub const GRID: usize = 512;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TransformError {
    #[error("degenerate point pair: {0}")]
    DegeneratePair(String),
    #[error("no beta2 candidate makes u0 and u1 root-free on [0,1]")]
    NoBeta2,
    #[error("Newton iteration for Y0 did not converge at a = {a}")]
    NewtonDivergence { a: f64 },
    #[error("quadrature integrand out of range at x = {x}")]
    QuadratureUnstable { x: f64 },
    #[error("a coefficient of the normal form has a pole on [0,1]")]
    PoleOnInterval,
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Reversion(#[from] ReversionError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseTag {
    Case1,
    Case2,
}

#[derive(Clone, Debug, Default)]
pub struct TransformOptions {
    /// Case 2 only; `None` picks `0` if `y₁ ≠ 0` and `1` otherwise.
    pub beta3: Option<Scalar>,
    pub seed: u64,
}

/// Exact identities checked when the transform is built.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Identities {
    pub jacobian: bool,
    pub f_at_p0: bool,
    pub f_at_p1: bool,
    pub g_at_p0: bool,
    pub g_at_p1: bool,
    pub leading_term: bool,
}

impl Identities {
    pub fn all(&self) -> bool {
        self.jacobian && self.f_at_p0 && self.f_at_p1 && self.g_at_p0 && self.g_at_p1 && self.leading_term
    }
}

/// `F̂ = u₁^m y^{−m}(1 + Σ_{j=1}^{m̄} f_j y^j)` and the bound `S1 ≥ max |f_j|` on `[0,1]`.
#[derive(Clone, Debug)]
pub struct NormalForm {
    pub fj: Vec<RatFunc>,
    /// Largest sampled value.
    pub s1_grid: f64,
    /// `s1_grid` plus the Lipschitz inflation; an upper bound on `[0,1]`.
    pub s1: f64,
    pub inflation: f64,
    pub grid: usize,
}

#[derive(Clone, Debug)]
pub struct TransformData {
    pub case_tag: CaseTag,
    pub map: PolyMap,
    pub p0: Point,
    pub p1: Point,
    pub m: u32,
    pub mbar: u32,
    pub beta0: Scalar,
    pub beta1: Scalar,
    pub beta2: Scalar,
    pub beta3: Scalar,
    /// Case 2: `β̄₂ = β₂/β₁` and `β̃₃ = y₁ − β₃`.
    pub beta2bar: Option<Scalar>,
    pub beta3tilde: Option<Scalar>,
    pub u1: UPoly,
    pub u2: Option<UPoly>,
    pub omega: Complex64,
    pub fhat: YSeries,
    pub ghat: YSeries,
    /// `J(F̂, Ĝ)`: `u₁y⁻²` or `u₂'y⁻¹`.
    pub jac_hat: YSeries,
    pub normal_form: NormalForm,
    pub p0_value: Complex64,
    /// Largest coordinate modulus of the pair.
    pub h: f64,
    pub eps: f64,
    pub delta: f64,
    pub identities: Identities,
    fhat_f: FloatLaurent,
    ghat_f: FloatLaurent,
    jac_f: FloatLaurent,
    u1_c: Vec<Complex64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TransformReport {
    pub case_tag: CaseTag,
    pub m: u32,
    pub mbar: u32,
    pub beta0: Scalar,
    pub beta1: Scalar,
    pub beta2: Scalar,
    pub beta3: Scalar,
    pub u1: String,
    pub omega: FloatScalar,
    pub identities: Identities,
    pub delta: f64,
    pub s1: f64,
    pub s1_grid: f64,
    pub eps: f64,
    pub p0_value: FloatScalar,
    pub m_g: i64,
}

fn sc(s: &Scalar) -> RatFunc {
    RatFunc::constant(s.clone())
}

fn horner(c: &[Complex64], x: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * x + a)
}

/// Certified lower bound for `|p|` on `[0,1]` from `n+1` samples and `|p'| ≤ Σ k|c_k|`.
pub fn certified_min_abs(c: &[Complex64], n: usize) -> f64 {
    let lip: f64 = c.iter().enumerate().map(|(k, a)| k as f64 * a.norm()).sum();
    let min = (0..=n).map(|k| horner(c, Complex64::new(k as f64 / n as f64, 0.0)).norm()).fold(f64::INFINITY, f64::min);
    min - lip / (2.0 * n as f64)
}

/// Exact `P(u, v)` for Laurent series `u`, `v`.
pub fn bipoly_at_series(p: &BiPoly, u: &YSeries, v: &YSeries) -> YSeries {
    let powers = |s: &YSeries, k: u32| {
        let mut out = vec![YSeries::one()];
        for _ in 0..k {
            let next = out.last().unwrap().mul(s);
            out.push(next);
        }
        out
    };
    let du = p.terms().map(|(m, _)| m.i).max().unwrap_or(0);
    let dv = p.terms().map(|(m, _)| m.j).max().unwrap_or(0);
    let (up, vp) = (powers(u, du), powers(v, dv));
    p.terms()
        .fold(YSeries::zero(), |acc, (mono, c)| acc.add(&up[mono.i as usize].mul(&vp[mono.j as usize]).scale_scalar(c)))
}

/// Nearest `m`-th root of unity to `z`.
pub fn nearest_root_of_unity(z: Complex64, m: u32) -> Complex64 {
    (0..m)
        .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / m as f64))
        .min_by(|a, b| (a - z).norm().total_cmp(&(b - z).norm()))
        .unwrap()
}

/// `β₂` candidates: `0`, `i`, then 16 seeded unit-modulus Gaussian rationals.
pub fn beta2_candidates(seed: u64) -> Vec<Scalar> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![Scalar::zero(), Scalar::i()];
    for _ in 0..16 {
        let t = crate::polyring::rat(rng.gen_range(1..=256), 64);
        let one = <BigRational as One>::one();
        let d = &one + &t * &t;
        let mut z = Scalar::new((&one - &t * &t) / &d, (&t + &t) / &d);
        if rng.gen_bool(0.5) {
            z = -z;
        }
        out.push(z);
    }
    out
}

fn u_poly(beta1: &Scalar, beta2: &Scalar) -> UPoly {
    UPoly::new(vec![Scalar::one(), beta1 + beta2, -beta2])
}

/// First candidate with `u₀ = 1 + (ω−1)x + β₂x(1−x)` and `u₁` certified root-free; returns
/// `(β₂, δ)` where `δ` bounds `|u₁|` from below.
pub fn choose_beta2(beta1: &Scalar, omega: Complex64, seed: u64) -> Option<(Scalar, f64)> {
    let one = Complex64::new(1.0, 0.0);
    beta2_candidates(seed).into_iter().find_map(|b2| {
        let b = b2.to_c64();
        let u0 = [one, omega - one + b, -b];
        let u1 = u_poly(beta1, &b2).to_c64();
        let (d0, d1) = (certified_min_abs(&u0, GRID), certified_min_abs(&u1, GRID));
        (d0 > 0.0 && d1 > 0.0).then_some((b2, d1))
    })
}

pub fn build_transform(
    map: &PolyMap,
    p0: &Point,
    p1: &Point,
    case_tag: CaseTag,
    opts: &TransformOptions,
) -> Result<TransformData, TransformError> {
    let m = map.f.degree().filter(|&d| d > 0).ok_or_else(|| TransformError::DegeneratePair("F is constant".into()))?;
    let (x0, y0) = p0;
    let (x1, y1) = p1;
    let beta0 = x0 + y0;
    let b0inv = beta0.inv().ok_or_else(|| TransformError::DegeneratePair("x0 + y0 = 0".into()))?;
    let beta1 = &(&(x1 + y1) * &b0inv) - &Scalar::one();
    let omega = nearest_root_of_unity(Complex64::new(1.0, 0.0) + beta1.to_c64(), m);

    let (beta3, beta3tilde) = match case_tag {
        CaseTag::Case1 => {
            if y0 == y1 {
                return Err(TransformError::DegeneratePair("case 1 needs y0 != y1".into()));
            }
            (y1 - y0, None)
        }
        CaseTag::Case2 => {
            if y0 != y1 {
                return Err(TransformError::DegeneratePair("case 2 needs y0 = y1".into()));
            }
            if beta1.is_zero() {
                return Err(TransformError::DegeneratePair("case 2 needs beta1 != 0".into()));
            }
            let b3 = opts.beta3.clone().unwrap_or_else(|| if y1.is_zero() { Scalar::one() } else { Scalar::zero() });
            let bt = y1 - &b3;
            if bt.is_zero() {
                return Err(TransformError::DegeneratePair("beta3 tilde vanishes".into()));
            }
            (b3, Some(bt))
        }
    };

    let (beta2, delta) = choose_beta2(&beta1, omega, opts.seed).ok_or(TransformError::NoBeta2)?;
    let u1 = u_poly(&beta1, &beta2);
    let u1r = RatFunc::from_poly(u1.clone());

    let (v, u2, beta2bar) = match case_tag {
        CaseTag::Case1 => {
            (YSeries::monomial(RatFunc::from_poly(UPoly::new(vec![y0.clone(), beta3.clone()])), 0), None, None)
        }
        CaseTag::Case2 => {
            let bt = beta3tilde.as_ref().unwrap();
            let v = YSeries::exact(0, vec![sc(&beta3), sc(bt)]);
            let b2bar = &beta2 / &beta1;
            let u2 = UPoly::new(vec![Scalar::zero(), &Scalar::one() + &b2bar, -&b2bar]);
            (v, Some(u2), Some(b2bar))
        }
    };
    let u = YSeries::monomial(RatFunc::from_poly(u1.scale(&beta0)), -1).sub(&v);

    let mi = m as i64;
    let fscale = beta0.pow_i(-mi).unwrap();
    let gscale = match case_tag {
        CaseTag::Case1 => &beta0.pow_i(mi - 1).unwrap() / &beta3,
        CaseTag::Case2 => &beta0.pow_i(mi - 1).unwrap() / &(&beta1 * beta3tilde.as_ref().unwrap()),
    };
    let fhat = bipoly_at_series(&map.f, &u, &v).scale_scalar(&fscale);
    let ghat = bipoly_at_series(&map.g, &u, &v).scale_scalar(&gscale);
    let jac_hat = match &u2 {
        None => YSeries::monomial(u1r.clone(), -2),
        Some(u2) => YSeries::monomial(RatFunc::from_poly(u2.derivative()), -1),
    };

    let jac = fhat.d_dx().mul(&ghat.d_dy()).sub(&fhat.d_dy().mul(&ghat.d_dx()));
    let zero = Scalar::zero();
    let one = Scalar::one();
    let fv = |x: &Scalar| fhat.eval(x, &one).ok();
    let gv = |x: &Scalar| ghat.eval(x, &one).ok();
    let u1m = RatFunc::from_poly(u1.pow(m));
    let identities = Identities {
        jacobian: jac == jac_hat,
        f_at_p0: fv(&zero) == Some(&fscale * &map.f.eval(x0, y0)),
        f_at_p1: fv(&one) == Some(&fscale * &map.f.eval(x1, y1)),
        g_at_p0: gv(&zero) == Some(&gscale * &map.g.eval(x0, y0)),
        g_at_p1: gv(&one) == Some(&gscale * &map.g.eval(x1, y1)),
        leading_term: fhat.alpha() == -mi && fhat.lead() == Some(&u1m),
    };

    let mbar = match case_tag {
        CaseTag::Case1 => m,
        CaseTag::Case2 => 2 * m,
    };
    let h = [x0, y0, x1, y1].iter().map(|s| s.abs_f64()).fold(0.0, f64::max);
    let eps = h.powf((m - 1) as f64 / m as f64) / beta0.abs_f64();

    let mut t = TransformData {
        case_tag,
        map: map.clone(),
        p0: p0.clone(),
        p1: p1.clone(),
        m,
        mbar,
        beta0,
        beta1,
        beta2,
        beta3,
        beta2bar,
        beta3tilde,
        u2,
        omega,
        fhat_f: fhat.to_float_laurent(),
        ghat_f: ghat.to_float_laurent(),
        jac_f: jac_hat.to_float_laurent(),
        fhat,
        ghat,
        jac_hat,
        normal_form: NormalForm { fj: vec![], s1_grid: 0.0, s1: 0.0, inflation: 0.0, grid: 0 },
        p0_value: Complex64::new(1.0, 0.0),
        h,
        eps,
        delta,
        identities,
        u1_c: u1.to_c64(),
        u1,
    };
    t.normal_form = hat_normal_form(&t)?;
    t.p0_value = t.p_value(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)).0;
    Ok(t)
}

impl TransformData {
    pub fn u1_at(&self, a: Complex64) -> Complex64 {
        horner(&self.u1_c, a)
    }

    /// `P = y u₁⁻¹ (F̂ y^m u₁^{−m})^{−1/m}` on the principal branch, and `∂P/∂y`.
    pub fn p_value(&self, a: Complex64, y: Complex64) -> (Complex64, Complex64) {
        let m = self.m as f64;
        let (f, _, fy) = self.fhat_f.eval_grad(a, y);
        let u = self.u1_at(a);
        let hval = f * y.powi(self.m as i32) / u.powi(self.m as i32);
        let p = y / u * principal_pow(hval, -1.0 / m);
        (p, -(p / m) * fy / f)
    }

    /// `∂F̂/∂y` at `(a, y)`.
    pub fn fhat_y(&self, a: Complex64, y: Complex64) -> Complex64 {
        self.fhat_f.eval_grad(a, y).2
    }

    pub fn ghat_value(&self, a: Complex64, y: Complex64) -> Complex64 {
        self.ghat_f.eval(a, y)
    }

    /// `Q = −J(F̂,Ĝ)/F̂_y` at `(a, y)`.
    pub fn q_value(&self, a: Complex64, y: Complex64) -> Complex64 {
        -self.jac_f.eval(a, y) / self.fhat_y(a, y)
    }

    pub fn m_g(&self) -> i64 {
        -self.ghat.alpha()
    }

    pub fn report(&self) -> TransformReport {
        TransformReport {
            case_tag: self.case_tag,
            m: self.m,
            mbar: self.mbar,
            beta0: self.beta0.clone(),
            beta1: self.beta1.clone(),
            beta2: self.beta2.clone(),
            beta3: self.beta3.clone(),
            u1: self.u1.to_string(),
            omega: self.omega.into(),
            identities: self.identities.clone(),
            delta: self.delta,
            s1: self.normal_form.s1,
            s1_grid: self.normal_form.s1_grid,
            eps: self.eps,
            p0_value: self.p0_value.into(),
            m_g: self.m_g(),
        }
    }
}

/// `f_j` with `F̂ = u₁^m y^{−m}(1 + Σ f_j y^j)` and a certified `S1`.
pub fn hat_normal_form(t: &TransformData) -> Result<NormalForm, TransformError> {
    let mi = t.m as i64;
    let u1m = RatFunc::from_poly(t.u1.pow(t.m));
    let fj: Vec<RatFunc> =
        (1..=t.mbar as i64).map(|j| t.fhat.coeff_at(-mi + j).div(&u1m).expect("u1 is nonzero")).collect();
    let n = GRID;
    let l1 = |c: &[Complex64]| c.iter().map(|a| a.norm()).sum::<f64>();
    let dl1 = |c: &[Complex64]| c.iter().enumerate().map(|(k, a)| k as f64 * a.norm()).sum::<f64>();
    let (mut s1_grid, mut s1) = (0.0f64, 0.0f64);
    for f in &fj {
        let (num, den) = (f.num().to_c64(), f.den().to_c64());
        let dmin = certified_min_abs(&den, n);
        if dmin <= 0.0 {
            return Err(TransformError::PoleOnInterval);
        }
        // |(N/D)'| ≤ |N'|/|D| + |N||D'|/|D|².
        let lip = dl1(&num) / dmin + l1(&num) * dl1(&den) / (dmin * dmin);
        let max = (0..=n).map(|k| f.eval_c64(Complex64::new(k as f64 / n as f64, 0.0)).norm()).fold(0.0, f64::max);
        s1_grid = s1_grid.max(max);
        s1 = s1.max(max + lip / (2.0 * n as f64));
    }
    Ok(NormalForm { fj, s1_grid, s1, inflation: s1 - s1_grid, grid: n })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Y0Solution {
    pub a: f64,
    pub y: FloatScalar,
    pub residual: f64,
    pub iterations: usize,
    /// `|Y₀(a) − u₁(a)|` and its ratio to `ε`.
    pub deviation: f64,
    pub c_ratio: f64,
    /// `|(∂F̂/∂y)^{−1} + u₁(a)/m|` at `(a, Y₀(a))`.
    pub fprime_gap: f64,
}

/// Root of `P(a, y) = P₀` by Newton iteration seeded at `u₁(a)`.
pub fn solve_y0(t: &TransformData, a: f64) -> Result<Y0Solution, TransformError> {
    let ac = Complex64::new(a, 0.0);
    let u = t.u1_at(ac);
    let mut y = u;
    for it in 0..=NEWTON_MAX_ITER {
        let (p, dp) = t.p_value(ac, y);
        let r = p - t.p0_value;
        if !r.norm().is_finite() {
            break;
        }
        if r.norm() <= NEWTON_TOL {
            let deviation = (y - u).norm();
            let fprime_gap = (1.0 / t.fhat_y(ac, y) + u / t.m as f64).norm();
            return Ok(Y0Solution {
                a,
                y: y.into(),
                residual: r.norm(),
                iterations: it,
                deviation,
                c_ratio: deviation / t.eps,
                fprime_gap,
            });
        }
        y -= r / dp;
    }
    Err(TransformError::NewtonDivergence { a })
}

#[derive(Clone, Debug, Serialize)]
pub struct IntegralReport {
    pub value: FloatScalar,
    pub target: f64,
    pub abs_error: f64,
    pub eps: f64,
    /// `abs_error / ε`.
    pub c_ratio: f64,
    pub nodes: usize,
    /// `|∫Q − (Ĝ(1, Y₀(1)) − Ĝ(0, 1))|`, relative to `max(1, |Ĝ(0,1)|)`.
    pub identity_gap: f64,
}

/// `∫₀¹ Q(x, Y₀(x)) dx` by Gauss–Legendre quadrature, compared with `1/m`.
pub fn integral_check(t: &TransformData, nodes: usize) -> Result<IntegralReport, TransformError> {
    let target = 1.0 / t.m as f64;
    let mut value = Complex64::new(0.0, 0.0);
    for (x, w) in gauss_legendre_unit(nodes) {
        let y: Complex64 = solve_y0(t, x)?.y.into();
        let q = t.q_value(Complex64::new(x, 0.0), y);
        if !q.norm().is_finite() || q.norm() > 1e6 * target {
            return Err(TransformError::QuadratureUnstable { x });
        }
        value += q * w;
    }
    let y1: Complex64 = solve_y0(t, 1.0)?.y.into();
    let one = Complex64::new(1.0, 0.0);
    let g0 = t.ghat_value(Complex64::new(0.0, 0.0), one);
    let g1 = t.ghat_value(one, y1);
    let identity_gap = (value - (g1 - g0)).norm() / g0.norm().max(1.0);
    let abs_error = (value - target).norm();
    Ok(IntegralReport {
        value: value.into(),
        target,
        abs_error,
        eps: t.eps,
        c_ratio: abs_error / t.eps,
        nodes,
        identity_gap,
    })
}

#[derive(Clone, Debug)]
pub struct SeriesInP {
    /// `P = F̂^{−1/m}`, truncated at relative order `N`.
    pub p: YSeries,
    pub y_of_p: ReversionResult<RatFunc>,
    /// `c_i` for `i = −m^G, −m^G+1, …`.
    pub g_of_p: Vec<RatFunc>,
    pub m_g: i64,
    /// `P(x, y(P))` reproduces `P` to order `N`.
    pub round_trip: bool,
}

pub fn series_in_p(t: &TransformData, n: usize) -> Result<SeriesInP, TransformError> {
    let mut h = vec![RatFunc::one()];
    h.extend(t.normal_form.fj.iter().cloned());
    let beta = BigRational::new((-1).into(), (t.m as i64).into());
    let hp = YSeries::exact(0, h).pow_rational(&beta, n)?;
    let u1inv = RatFunc::from_poly(t.u1.clone()).inv().expect("u1 is nonzero");
    let p = hp.mul(&YSeries::monomial(u1inv, 1));
    let mut pc: Vec<RatFunc> = (0..n).map(|k| p.coeff_at(1 + k as i64)).collect();
    pc.truncate(n);
    let y_of_p = formal_inverse(&pc, n)?;
    let g_of_p = rebase_coeff(&t.ghat, &p, n)?;
    let round_trip = if n >= 1 {
        let ys = YSeries::truncated(1, y_of_p.coeffs.clone(), n - 1);
        match compose_series(&p, &Subst::Series(YSeries::x()), &Subst::Series(ys), n - 1)? {
            Composed::Series(s) => s == YSeries::y().truncate(n - 1),
            Composed::Scalar(_) => false,
        }
    } else {
        true
    };
    Ok(SeriesInP { p, y_of_p, g_of_p, m_g: t.m_g(), round_trip })
}

/// Exact check that `Q = Σ_i (dc_i/dx) P^i` to order `N`; returns the number of compared
/// exponents, or `None` on a mismatch.
pub fn liebdbd1_check(t: &TransformData, s: &SeriesInP, n: usize) -> Result<Option<usize>, TransformError> {
    let fy_inv = t.fhat.d_dy().inverse(n)?;
    let q = t.jac_hat.mul(&fy_inv).neg();
    let bq = q.alpha();
    let d = rebase_coeff(&q, &s.p, n)?;
    let dc: Vec<RatFunc> = s.g_of_p.iter().map(|c| c.derivative()).collect();
    let mut compared = 0;
    for (k, c) in dc.iter().enumerate() {
        let i = k as i64 - s.m_g;
        let expected = if i < bq {
            RatFunc::zero()
        } else {
            match d.get((i - bq) as usize) {
                Some(v) => v.clone(),
                None => break,
            }
        };
        if *c != expected {
            return Ok(None);
        }
        compared += 1;
    }
    Ok(Some(compared))
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainCheck {
    pub a: String,
    /// `|f_j(a)| ≤ S1` for all `j`, i.e. `F̂ ⊴ u₁^m y^{−m}(1 + S1 Σ y^j)` at `a`.
    pub fhat_ok: bool,
    /// `P ⊴ |u₁(a)|^{−1} y (1 − S1 Σ_{j≤m̄} y^j)^{−1/m̄}` at `a`.
    pub p_ok: bool,
    /// The same bound with exponent `−1/m`, which follows from `F̂ ⊴ Φ` termwise.
    pub p_ok_inv_m: bool,
}

/// Term-wise majorant checks at `samples` equally spaced rational points of `[0,1]`.
pub fn majorant_chain(t: &TransformData, s: &SeriesInP, samples: usize) -> Result<Vec<ChainCheck>, TransformError> {
    let s1 = BigRational::from_float(t.normal_form.s1).unwrap_or_else(BigRational::zero);
    let s1sq = &s1 * &s1;
    let n = s.p.trunc().unwrap_or(0) + 1;
    let mut phi = vec![<BigRational as One>::one()];
    phi.extend((0..t.mbar).map(|_| -s1.clone()));
    let r = pow_unit(&phi, &BigRational::new((-1).into(), (t.mbar as i64).into()), n);
    let rm = pow_unit(&phi, &BigRational::new((-1).into(), (t.m as i64).into()), n);
    let mut out = Vec::with_capacity(samples);
    for k in 0..samples {
        let a = Scalar::real(crate::polyring::rat(k as i64, (samples.max(2) - 1) as i64));
        let fhat_ok = t.normal_form.fj.iter().all(|f| f.eval(&a).is_some_and(|v| v.norm_sqr() <= s1sq));
        let u1sq = t.u1.eval(&a).norm_sqr();
        let pk: Vec<Option<BigRational>> =
            (0..n).map(|k| s.p.coeff_at(1 + k as i64).eval(&a).map(|v| v.norm_sqr() * &u1sq)).collect();
        let below = |r: &[BigRational]| pk.iter().zip(r).all(|(v, rk)| v.as_ref().is_some_and(|v| *v <= rk * rk));
        out.push(ChainCheck { a: a.to_string(), fhat_ok, p_ok: below(&r), p_ok_inv_m: below(&rm) });
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
