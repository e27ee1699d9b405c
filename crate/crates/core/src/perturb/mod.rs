//! Local expansions of a map at a point pair: recentered frames, the matching system for
//! `(s, t)` in powers of `ε`, constrained witness steps and the `β̃` coefficient.
//!
//! Points near the pair are `q₀ = φ₀(sε, tε)`, `q₁ = φ₁(uε, vε)` with
//! `φ_k(x, y) = (x_k + σ_{k,x}·x, y_k + σ_{k,y}·y)`; the scale factors depend on the style.

mod beta;
mod step;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::polyring::{mul_trunc, BiPoly, Point, PolyMap, Scalar};

pub use beta::{beta_coefficient, closed_form_beta, BetaCoefficient, Kappa, TangentFrame};
pub use step::{
    continue_steps, witness_step, Ansatz, Coord, Margin, StepConstraint, StepOptions, StepResult, WitnessPair,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PerturbError {
    #[error("style precondition violated: {0}")]
    StylePrecondition(String),
    #[error("tangency condition fails: alpha1 = {alpha1}, expected {expected}")]
    TangencyNotMet { alpha1: String, expected: f64 },
    #[error("kappa parameters invalid: {0}")]
    InvalidKappa(String),
    #[error("no ansatz produced a feasible step")]
    NoStepFound,
    #[error("Newton correction diverged")]
    NewtonDivergence,
    #[error("input pair residual {0} exceeds tolerance")]
    InvalidPair(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameStyle {
    /// `F(x̃₀+x, ỹ₀+y)`, `F(x̃₁+x, ỹ₁+y)`.
    Additive,
    /// `F(x₀(1+x), y₀+y)`, `F(x₁(1+x), y₁+y)`.
    MultX,
    /// `F(x₀(1+x), y₀+y)`, `F(x₁(1+x), y₁(1+y))`.
    MultXy,
    /// `F(x₀+α₀x, y₀+y)`, `F(x₁+α₁x, y₁+y)` with `α_k = x_k − ξ_k`, or `1` if that vanishes.
    ScaledA0a1,
}

/// 2×2 matrix in the layout `[[a, c], [b, d]]`: columns are the linear parts of `F` and `G`.
pub type Mat2 = [[Scalar; 2]; 2];

/// Quadratic data of the normalized frame:
/// `F₀ ≡ α_F + x + a₁x² + a₂xy + a₃y²`, `F₁ ≡ α_F' + ax + by + a₄x² + a₅xy + a₆y²`, and
/// likewise `G₀` with `a₇..a₉`, `G₁` with `a₁₀..a₁₂`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Quad {
    pub alpha_f: Scalar,
    pub alpha_g: Scalar,
    /// `a₁..a₁₂`, stored at indices `0..12`.
    pub a: Vec<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalFrame {
    pub style: FrameStyle,
    pub p0: Point,
    pub p1: Point,
    /// `[σ₀ₓ, σ₀ᵧ, σ₁ₓ, σ₁ᵧ]`.
    pub scales: [Scalar; 4],
    /// Recentered polynomials before normalization.
    pub raw0: (BiPoly, BiPoly),
    pub raw1: (BiPoly, BiPoly),
    /// Normalized by `A₀⁻¹`.
    pub f0: BiPoly,
    pub g0: BiPoly,
    pub f1: BiPoly,
    pub g1: BiPoly,
    pub a0: Mat2,
    /// Linear part at `p₁` before normalization.
    pub a1_raw: Mat2,
    /// `A = A₁A₀⁻¹`.
    pub a: Mat2,
    pub quad: Quad,
}

impl LocalFrame {
    /// `(a, b, c, d)` of the normalized frame.
    pub fn abcd(&self) -> (Scalar, Scalar, Scalar, Scalar) {
        (self.a[0][0].clone(), self.a[1][0].clone(), self.a[0][1].clone(), self.a[1][1].clone())
    }

    pub fn scales_c64(&self) -> [Complex64; 4] {
        [0, 1, 2, 3].map(|k| self.scales[k].to_c64())
    }
}

pub fn det2(m: &Mat2) -> Scalar {
    &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0])
}

pub fn mat_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    let e = |i: usize, j: usize| &(&x[i][0] * &y[0][j]) + &(&x[i][1] * &y[1][j]);
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

pub fn mat_inv(m: &Mat2) -> Option<Mat2> {
    let di = det2(m).inv()?;
    Some([[&m[1][1] * &di, -&(&m[0][1] * &di)], [-&(&m[1][0] * &di), &m[0][0] * &di]])
}

/// Columns `(F_x, F_y)` and `(G_x, G_y)` of the linear part at the origin.
fn linear_part(f: &BiPoly, g: &BiPoly) -> Mat2 {
    [[f.coeff(1, 0), g.coeff(1, 0)], [f.coeff(0, 1), g.coeff(0, 1)]]
}

/// `(F, G)·M`.
fn apply_right(f: &BiPoly, g: &BiPoly, m: &Mat2) -> (BiPoly, BiPoly) {
    (f.scale(&m[0][0]).add(&g.scale(&m[1][0])), f.scale(&m[0][1]).add(&g.scale(&m[1][1])))
}

pub fn style_scales(
    style: FrameStyle,
    p0: &Point,
    p1: &Point,
    xi: Option<&Point>,
) -> Result<[Scalar; 4], PerturbError> {
    let one = Scalar::one();
    let need = |s: &Scalar, what: &str| {
        if s.is_zero() {
            Err(PerturbError::StylePrecondition(format!("{what} must be nonzero")))
        } else {
            Ok(s.clone())
        }
    };
    Ok(match style {
        FrameStyle::Additive => [one.clone(), one.clone(), one.clone(), one],
        FrameStyle::MultX => [need(&p0.0, "x0")?, one.clone(), need(&p1.0, "x1")?, one],
        FrameStyle::MultXy => [need(&p0.0, "x0")?, one.clone(), need(&p1.0, "x1")?, need(&p1.1, "y1")?],
        FrameStyle::ScaledA0a1 => {
            let xi = xi.ok_or_else(|| PerturbError::StylePrecondition("scaled style needs xi".into()))?;
            let alpha = |x: &Scalar, c: &Scalar| {
                let d = x - c;
                if d.is_zero() {
                    Scalar::one()
                } else {
                    d
                }
            };
            [alpha(&p0.0, &xi.0), one.clone(), alpha(&p1.0, &xi.1), one]
        }
    })
}

/// Recenter `M` at `(p₀, p₁)` and normalize by `A₀⁻¹`. `xi` is used by the scaled style only.
pub fn recenter_frame(
    m: &PolyMap,
    p0: &Point,
    p1: &Point,
    style: FrameStyle,
    xi: Option<&Point>,
) -> Result<LocalFrame, PerturbError> {
    let scales = style_scales(style, p0, p1, xi)?;
    let aff = |c: &Scalar, s: &Scalar, var: BiPoly| BiPoly::constant(c.clone()).add(&var.scale(s));
    let x0 = aff(&p0.0, &scales[0], BiPoly::x());
    let y0 = aff(&p0.1, &scales[1], BiPoly::y());
    let x1 = aff(&p1.0, &scales[2], BiPoly::x());
    let y1 = aff(&p1.1, &scales[3], BiPoly::y());
    let raw0 = (m.f.substitute(&x0, &y0), m.g.substitute(&x0, &y0));
    let raw1 = (m.f.substitute(&x1, &y1), m.g.substitute(&x1, &y1));
    let a0 = linear_part(&raw0.0, &raw0.1);
    let a0inv = mat_inv(&a0).ok_or_else(|| PerturbError::StylePrecondition("A0 is singular".into()))?;
    let a1_raw = linear_part(&raw1.0, &raw1.1);
    let (f0, g0) = apply_right(&raw0.0, &raw0.1, &a0inv);
    let (f1, g1) = apply_right(&raw1.0, &raw1.1, &a0inv);
    let a = mat_mul(&a1_raw, &a0inv);
    let q = |p: &BiPoly| [p.coeff(2, 0), p.coeff(1, 1), p.coeff(0, 2)];
    let mut coeffs = Vec::with_capacity(12);
    for p in [&f0, &f1, &g0, &g1] {
        coeffs.extend(q(p));
    }
    let quad = Quad { alpha_f: f0.constant_term(), alpha_g: g0.constant_term(), a: coeffs };
    Ok(LocalFrame { style, p0: p0.clone(), p1: p1.clone(), scales, raw0, raw1, f0, g0, f1, g1, a0, a1_raw, a, quad })
}

/// `A` from partial derivatives at both points: the closed 2×2 formula divided by `det A₀`.
pub fn a_matrix_formula(fr: &LocalFrame) -> Option<Mat2> {
    let p = |f: &BiPoly| (f.coeff(1, 0), f.coeff(0, 1));
    let ((fx0, fy0), (gx0, gy0)) = (p(&fr.raw0.0), p(&fr.raw0.1));
    let ((fx1, fy1), (gx1, gy1)) = (p(&fr.raw1.0), p(&fr.raw1.1));
    let di = det2(&fr.a0).inv()?;
    let t = |a: &Scalar, b: &Scalar, c: &Scalar, d: &Scalar| &(&(a * b) - &(c * d)) * &di;
    Some([
        [t(&fx1, &gy0, &gx1, &fy0), t(&gx1, &fx0, &fx1, &gx0)],
        [t(&fy1, &gy0, &gy1, &fy0), t(&gy1, &fx0, &fy1, &gx0)],
    ])
}

/// Expected determinants `(det A₀, det A₁)`: `J(p_k)` times the style scales.
pub fn expected_dets(m: &PolyMap, fr: &LocalFrame) -> (Scalar, Scalar) {
    let j0 = m.jac.eval(&fr.p0.0, &fr.p0.1);
    let j1 = m.jac.eval(&fr.p1.0, &fr.p1.1);
    (&j0 * &(&fr.scales[0] * &fr.scales[1]), &j1 * &(&fr.scales[2] * &fr.scales[3]))
}

/// `s = Σ_k s_k ε^k`, `t = Σ_k t_k ε^k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StSeries {
    pub s: Vec<Scalar>,
    pub t: Vec<Scalar>,
}

impl StSeries {
    pub fn eval(&self, eps: f64) -> (Complex64, Complex64) {
        let h = |c: &[Scalar]| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * eps + a.to_c64());
        (h(&self.s), h(&self.t))
    }
}

/// `P(X, Y)` for `ε`-polynomials `X`, `Y` without constant terms, truncated at degree `n`.
fn eval_trunc(p: &BiPoly, x: &[Scalar], y: &[Scalar], n: usize) -> Vec<Scalar> {
    let pw = |s: &[Scalar], k: u32| {
        let mut out = vec![{
            let mut one = vec![Scalar::zero(); n + 1];
            one[0] = Scalar::one();
            one
        }];
        for _ in 0..k {
            let next = mul_trunc(out.last().unwrap(), s, n);
            out.push(next);
        }
        out
    };
    let di = p.terms().map(|(m, _)| m.i).max().unwrap_or(0);
    let dj = p.terms().map(|(m, _)| m.j).max().unwrap_or(0);
    let (xp, yp) = (pw(x, di), pw(y, dj));
    let mut acc = vec![Scalar::zero(); n + 1];
    for (mono, c) in p.terms() {
        let prod = mul_trunc(&xp[mono.i as usize], &yp[mono.j as usize], n);
        for (slot, v) in acc.iter_mut().zip(prod) {
            if !v.is_zero() {
                *slot += &(&v * c);
            }
        }
    }
    acc
}

/// Solve `F₀(sε, tε) = F₁(uε, vε)`, `G₀(sε, tε) = G₁(uε, vε)` (constants removed) order by
/// order on the normalized frame; `s`, `t` are returned to `ε^order`.
pub fn solve_st_series(fr: &LocalFrame, u: &Scalar, v: &Scalar, order: usize) -> StSeries {
    let n = order + 1;
    let lin = |c: &Scalar| {
        let mut e = vec![Scalar::zero(); n + 1];
        e[1] = c.clone();
        e
    };
    let (ue, ve) = (lin(u), lin(v));
    let strip = |mut s: Vec<Scalar>| {
        s[0] = Scalar::zero();
        s
    };
    let rf = strip(eval_trunc(&fr.f1, &ue, &ve, n));
    let rg = strip(eval_trunc(&fr.g1, &ue, &ve, n));
    let nf = fr.f0.sub(&BiPoly::x());
    let ng = fr.g0.sub(&BiPoly::y());
    let mut x = vec![Scalar::zero(); n + 1];
    let mut y = vec![Scalar::zero(); n + 1];
    for _ in 0..n {
        let nx = strip(eval_trunc(&nf, &x, &y, n));
        let ny = strip(eval_trunc(&ng, &x, &y, n));
        x = rf.iter().zip(&nx).map(|(a, b)| a - b).collect();
        y = rg.iter().zip(&ny).map(|(a, b)| a - b).collect();
    }
    StSeries { s: x[1..].to_vec(), t: y[1..].to_vec() }
}

/// Residual of the exact matching system with the truncated `(s, t)` at a given `ε`.
pub fn st_residual(fr: &LocalFrame, u: Complex64, v: Complex64, st: &StSeries, eps: f64) -> f64 {
    let (s, t) = st.eval(eps);
    let (f0, g0, f1, g1) = (fr.f0.to_float(), fr.g0.to_float(), fr.f1.to_float(), fr.g1.to_float());
    let (xe, ye) = (s * eps, t * eps);
    let (ue, ve) = (u * eps, v * eps);
    let z = Complex64::new(0.0, 0.0);
    let df = (f0.eval(xe, ye) - f0.eval(z, z)) - (f1.eval(ue, ve) - f1.eval(z, z));
    let dg = (g0.eval(xe, ye) - g0.eval(z, z)) - (g1.eval(ue, ve) - g1.eval(z, z));
    (df.norm_sqr() + dg.norm_sqr()).sqrt()
}

/// `α₁, α₂, α₃` with `s₁ = α₁u² + α₂uv + α₃v²`.
pub fn quadratic_alphas(fr: &LocalFrame) -> [Scalar; 3] {
    let s1 = |u: i64, v: i64| solve_st_series(fr, &Scalar::from_int(u), &Scalar::from_int(v), 1).s[1].clone();
    let (a1, a3) = (s1(1, 0), s1(0, 1));
    let a2 = &(&s1(1, 1) - &a1) - &a3;
    [a1, a2, a3]
}

/// `α̃₁, α̃₂, α̃₃` after substituting `v = −Lu + (L²u²/2 + w)ε`, `L = |x₁| ln κ₅`.
pub fn tilde_alphas(fr: &LocalFrame, kappa5: f64, x1_abs: f64, w: Complex64) -> TangentFrame {
    let (a, b, _, _) = fr.abcd();
    let [al1, al2, al3] = quadratic_alphas(fr).map(|s| s.to_c64());
    let (a, b) = (a.to_c64(), b.to_c64());
    let l = x1_abs * kappa5.ln();
    TangentFrame { alpha1: a - b * l, alpha2: b * (l * l / 2.0) + al1 - al2 * l + al3 * (l * l), alpha3: b, w }
}

/// The signs `a' = −a` and `b` that a frame at an extremal pair is expected to have.
#[derive(Clone, Debug, Serialize)]
pub struct LemmaDiagnostic {
    pub a_prime: Scalar,
    pub b: Scalar,
    pub a_prime_positive: bool,
    pub b_positive: bool,
}

pub fn lemma_diagnostic(fr: &LocalFrame) -> LemmaDiagnostic {
    let (a, b, _, _) = fr.abcd();
    let pos = |s: &Scalar| s.is_real() && s.re > num_rational::BigRational::from_integer(0.into());
    let a_prime = -a;
    LemmaDiagnostic { a_prime_positive: pos(&a_prime), b_positive: pos(&b), a_prime, b }
}
