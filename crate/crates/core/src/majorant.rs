//! Controlling functions: nonnegative series that dominate a series coefficient-wise at a
//! fixed `x0`, with closure rules and certified absolute values.
//!
//! Verdicts only cover the coefficients actually compared; a geometric tail certificate
//! is the only source of information beyond the truncation order.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::polyring::{binom, inverse_trunc, rat_to_f64, rational_root_pow, Scalar};
use crate::reversion::{formal_inverse, ReversionResult};
use crate::yseries::{SeriesError, YSeries};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MajorantError {
    #[error("a coefficient denominator vanishes at x0")]
    PoleAtX0,
    #[error("leading coefficient is zero")]
    ZeroLeading,
    #[error("series are neither both power series nor both polynomials in 1/y")]
    MixedShape,
    #[error("exponent outside the admissible range: {0}")]
    ExponentRange(String),
    #[error("dominance fails at relative index {0}")]
    DominanceFailed(usize),
    #[error("negative coefficient at index {0}")]
    NegativeCoefficient(usize),
    #[error("the linear coefficient vanishes")]
    ZeroLinearTerm,
    #[error("negative discriminant: outside the convergence disk")]
    NegativeDiscriminant,
    #[error("no tail certificate converges at |y0|")]
    Uncertified,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// `q_i ≤ c·r^i` for every index past the stored coefficients.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeometricTail {
    pub c: BigRational,
    pub r: BigRational,
}

/// `Σ q_i y^{α+i}` with `q_i ≥ 0`, known through relative index `trunc`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Majorant {
    pub alpha: i64,
    pub coeffs: Vec<BigRational>,
    pub trunc: usize,
    pub tail: Option<GeometricTail>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    /// Every exponent through `alpha + order` was compared.
    HoldsToOrder {
        order: usize,
    },
    Fails {
        index: usize,
    },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::HoldsToOrder { .. })
    }
}

fn zero() -> BigRational {
    BigRational::zero()
}

fn int(k: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(k))
}

impl Majorant {
    /// Validates nonnegativity of every coefficient.
    pub fn new(
        alpha: i64,
        coeffs: Vec<BigRational>,
        trunc: usize,
        tail: Option<GeometricTail>,
    ) -> Result<Self, MajorantError> {
        if let Some(i) = coeffs.iter().position(|c| c.is_negative()) {
            return Err(MajorantError::NegativeCoefficient(i));
        }
        let mut coeffs = coeffs;
        coeffs.truncate(trunc + 1);
        Ok(Majorant { alpha, coeffs, trunc, tail })
    }

    /// A finite sum; its tail certificate is `(0, 0)`.
    pub fn polynomial(alpha: i64, coeffs: Vec<BigRational>) -> Result<Self, MajorantError> {
        let trunc = coeffs.len().saturating_sub(1);
        Majorant::new(alpha, coeffs, trunc, Some(GeometricTail { c: zero(), r: zero() }))
    }

    /// `c Σ rⁱ y^{α+i}` through index `n`, with its exact tail.
    pub fn geometric(alpha: i64, c: BigRational, r: BigRational, n: usize) -> Result<Self, MajorantError> {
        let mut coeffs = Vec::with_capacity(n + 1);
        let mut p = c.clone();
        for _ in 0..=n {
            coeffs.push(p.clone());
            p *= &r;
        }
        Majorant::new(alpha, coeffs, n, Some(GeometricTail { c, r }))
    }

    /// `|u|⁻¹ y / (1 − e y)` with `e = ε^{δ₁}`.
    pub fn lead2(u_abs: &BigRational, eps_pow: &BigRational, n: usize) -> Result<Self, MajorantError> {
        Majorant::geometric(1, u_abs.recip(), eps_pow.clone(), n)
    }

    pub fn coeff_at(&self, e: i64) -> BigRational {
        if e < self.alpha {
            return zero();
        }
        self.coeffs.get((e - self.alpha) as usize).cloned().unwrap_or_else(zero)
    }

    pub fn valid_to(&self) -> i64 {
        self.alpha + self.trunc as i64
    }

    pub fn q0(&self) -> BigRational {
        self.coeffs.first().cloned().unwrap_or_else(zero)
    }

    pub fn is_polynomial(&self) -> bool {
        self.tail.as_ref().is_some_and(|t| t.c.is_zero())
    }

    /// Signed view as an exact [`YSeries`].
    pub fn to_series(&self) -> YSeries {
        let s: Vec<Scalar> = self.coeffs.iter().cloned().map(Scalar::real).collect();
        YSeries::from_scalars(self.alpha, &s, if self.is_polynomial() { None } else { Some(self.trunc) })
    }

    /// `Q(t)` at a real `t > 0`: stored partial sum plus the tail bound.
    pub fn value_at(&self, t: f64) -> Option<f64> {
        let mut acc = 0.0;
        for (i, q) in self.coeffs.iter().enumerate() {
            acc += rat_to_f64(q) * t.powi((self.alpha + i as i64) as i32);
        }
        Some(acc + self.tail_bound(t)?)
    }

    /// Bound on `Σ_{i>trunc} q_i t^{α+i}`.
    pub fn tail_bound(&self, t: f64) -> Option<f64> {
        let tail = self.tail.as_ref()?;
        let c = rat_to_f64(&tail.c);
        if c == 0.0 {
            return Some(0.0);
        }
        let q = rat_to_f64(&tail.r) * t;
        (q < 1.0).then(|| c * t.powi(self.alpha as i32) * q.powi(self.trunc as i32 + 1) / (1.0 - q))
    }

    /// Exact product; the tail is dropped unless both sides are polynomial.
    pub fn mul(&self, o: &Majorant) -> Majorant {
        let n = self.trunc.min(o.trunc);
        let mut out = vec![zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            for (j, b) in o.coeffs.iter().enumerate().take(n + 1 - i) {
                out[i + j] += a * b;
            }
        }
        if self.is_polynomial() && o.is_polynomial() {
            let mut full = vec![zero(); self.coeffs.len() + o.coeffs.len() - 1];
            for (i, a) in self.coeffs.iter().enumerate() {
                for (j, b) in o.coeffs.iter().enumerate() {
                    full[i + j] += a * b;
                }
            }
            return Majorant::polynomial(self.alpha + o.alpha, full).unwrap();
        }
        Majorant { alpha: self.alpha + o.alpha, coeffs: out, trunc: n, tail: None }
    }
}

/// Coefficients of `P` at `x0`, by absolute exponent.
fn eval_coeffs(p: &YSeries, x0: &Scalar) -> Result<Vec<Scalar>, MajorantError> {
    p.coeff_values(x0).map_err(|_| MajorantError::PoleAtX0)
}

/// `P ⊴ Q` at `x0`, compared through the common order of validity.
pub fn dominates(p: &YSeries, q: &Majorant, x0: &Scalar) -> Result<Verdict, MajorantError> {
    let vals = eval_coeffs(p, x0)?;
    let lo = if p.is_zero() { q.alpha } else { p.alpha().min(q.alpha) };
    let mut hi = q.valid_to();
    if let Some(v) = p.valid_to() {
        hi = hi.min(v);
    }
    if q.is_polynomial() && p.is_exact() && !p.is_zero() {
        hi = hi.max(p.max_exp());
    }
    for e in lo..=hi {
        let pv = if p.is_zero() || e < p.alpha() {
            Scalar::zero()
        } else {
            vals.get((e - p.alpha()) as usize).cloned().unwrap_or_else(Scalar::zero)
        };
        let qe = q.coeff_at(e);
        if pv.norm_sqr() > &qe * &qe {
            return Ok(Verdict::Fails { index: (e - lo) as usize });
        }
    }
    Ok(Verdict::HoldsToOrder { order: (hi - lo).max(0) as usize })
}

/// Magnitude series `|p_i(x0)|²` compared against `q_i²` for a series already at `x0`.
fn dominates_scalar(p: &[Scalar], p_alpha: i64, q: &Majorant, upto: i64) -> Option<usize> {
    for e in p_alpha.min(q.alpha)..=upto {
        let pv = if e < p_alpha {
            Scalar::zero()
        } else {
            p.get((e - p_alpha) as usize).cloned().unwrap_or_else(Scalar::zero)
        };
        let qe = q.coeff_at(e);
        if pv.norm_sqr() > &qe * &qe {
            return Some((e - p_alpha.min(q.alpha)) as usize);
        }
    }
    None
}

/// `Q_igo = q₀⁻¹ Σ_{j>0} q_j y^j` and `Q_inv = q₀y^α(1 − Q_igo)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SplitParts {
    pub igo: Majorant,
    pub inv_alpha: i64,
    pub inv: Vec<BigRational>,
}

pub fn split_parts(q: &Majorant) -> Result<SplitParts, MajorantError> {
    let q0 = q.q0();
    if q0.is_zero() {
        return Err(MajorantError::ZeroLeading);
    }
    let mut igo: Vec<BigRational> = q.coeffs.iter().map(|c| c / &q0).collect();
    igo[0] = zero();
    let tail = q.tail.as_ref().map(|t| GeometricTail { c: &t.c / &q0, r: t.r.clone() });
    let igo = Majorant::new(0, igo, q.trunc, tail)?;
    let inv: Vec<BigRational> =
        q.coeffs.iter().enumerate().map(|(i, c)| if i == 0 { c.clone() } else { -c.clone() }).collect();
    Ok(SplitParts { igo, inv_alpha: q.alpha, inv })
}

/// `±dQ/dy` (sign `+` for power series, `−` for polynomials in `1/y`), verified to dominate
/// `∂P/∂y` at `x0`.
pub fn derivative_majorant(p: &YSeries, q: &Majorant, x0: &Scalar) -> Result<Majorant, MajorantError> {
    if let Verdict::Fails { index } = dominates(p, q, x0)? {
        return Err(MajorantError::DominanceFailed(index));
    }
    let power = (p.is_zero() || p.alpha() >= 0) && q.alpha >= 0;
    let laurent = p.is_exact()
        && (p.is_zero() || p.max_exp() <= 0)
        && q.is_polynomial()
        && q.alpha + q.coeffs.len() as i64 - 1 <= 0;
    let sign = if power {
        1
    } else if laurent {
        -1
    } else {
        return Err(MajorantError::MixedShape);
    };
    let coeffs: Vec<BigRational> =
        q.coeffs.iter().enumerate().map(|(i, c)| c * int(sign * (q.alpha + i as i64))).collect();
    let trunc = q.trunc.saturating_sub(usize::from(power && q.alpha == 0));
    let mut d = if q.is_polynomial() {
        Majorant::polynomial(q.alpha - 1, coeffs)?
    } else {
        Majorant::new(q.alpha - 1, coeffs, q.trunc, None)?
    };
    if power && q.alpha == 0 {
        // The constant term differentiates away.
        d.coeffs.remove(0);
        d.alpha += 1;
        d.trunc = trunc;
        if d.coeffs.is_empty() {
            d.coeffs.push(zero());
        }
    }
    let dp = p.d_dy();
    if let Verdict::Fails { index } = dominates(&dp, &d, x0)? {
        return Err(MajorantError::DominanceFailed(index));
    }
    Ok(d)
}

/// Exponent pattern for [`power_majorant`].
#[derive(Clone, Debug, PartialEq)]
pub enum PowerRule {
    /// `P^a ⊴ (q₀y^α)^{−b} Q_inv^{a+b}` for `a, b < 0`.
    NegPair { a: BigRational, b: BigRational },
    /// `Q^k` for `k ∈ ℤ≥1` or `0 ≤ k < 1`.
    Pos { k: BigRational },
}

/// `(1 − sI)^c` for a series `I` with zero constant term, to order `n`.
fn one_minus_pow(igo: &[BigRational], s: &BigRational, c: &BigRational, n: usize) -> Vec<BigRational> {
    let mut h = vec![BigRational::one()];
    h.extend(igo.iter().skip(1).take(n).map(|v| -(v * s)));
    crate::polyring::pow_unit(&h, c, n)
}

/// The right-hand side of the power rules, truncated to `n` and verified against both
/// `P^e` and `Q^e` at `x0`.
pub fn power_majorant(
    p: &YSeries,
    q: &Majorant,
    x0: &Scalar,
    rule: &PowerRule,
    n: usize,
) -> Result<Majorant, MajorantError> {
    if let Verdict::Fails { index } = dominates(p, q, x0)? {
        return Err(MajorantError::DominanceFailed(index));
    }
    let q0 = q.q0();
    if q0.is_zero() {
        return Err(MajorantError::ZeroLeading);
    }
    let pvals = eval_coeffs(p, x0)?;
    if p.is_zero() || p.alpha() != q.alpha || pvals[0].norm_sqr() != &q0 * &q0 {
        return Err(MajorantError::ExponentRange("requires |p₀(x0)| = q₀ at the same valuation".into()));
    }
    let qn = if q.is_polynomial() { usize::MAX } else { q.trunc };
    let n = n.min(qn).min(p.trunc().unwrap_or(usize::MAX));
    let split = split_parts(q)?;
    let e = match rule {
        PowerRule::NegPair { a, b } => {
            if !a.is_negative() || !b.is_negative() {
                return Err(MajorantError::ExponentRange("a and b must be negative".into()));
            }
            a.clone()
        }
        PowerRule::Pos { k } => {
            let ok = (k.is_integer() && *k >= BigRational::one()) || (!k.is_negative() && *k < BigRational::one());
            if !ok {
                return Err(MajorantError::ExponentRange(format!(
                    "k = {} is neither a positive integer nor in [0, 1)",
                    k
                )));
            }
            k.clone()
        }
    };
    let ae = &e * int(q.alpha);
    if !ae.is_integer() {
        return Err(MajorantError::ExponentRange("α·exponent is not an integer".into()));
    }
    let scale =
        rational_root_pow(&q0, &e).ok_or_else(|| MajorantError::ExponentRange(format!("q₀^{} is not rational", e)))?;
    let body: Vec<BigRational> = match rule {
        PowerRule::NegPair { a, b } => one_minus_pow(&split.igo.coeffs, &BigRational::one(), &(a + b), n),
        PowerRule::Pos { k } if k.is_integer() => one_minus_pow(&split.igo.coeffs, k, &-BigRational::one(), n),
        PowerRule::Pos { k } => {
            // 1 + k I (1 − I)^{-1}
            let inv = one_minus_pow(&split.igo.coeffs, &BigRational::one(), &-BigRational::one(), n);
            let mut prod = crate::polyring::mul_trunc(&split.igo.coeffs, &inv, n);
            prod.resize(n + 1, zero());
            for c in prod.iter_mut() {
                *c *= k;
            }
            prod[0] += BigRational::one();
            prod
        }
    };
    let coeffs: Vec<BigRational> = body.iter().map(|c| c * &scale).collect();
    let alpha = ae.to_integer().to_i64().unwrap();
    let out = Majorant::new(alpha, coeffs, n, None)?;

    // |P^e| coefficients: normalize by p₀(x0) so no branch of p₀^e is needed.
    let p0inv = pvals[0].inv().unwrap();
    let h: Vec<Scalar> = pvals.iter().take(n + 1).map(|v| v * &p0inv).collect();
    let mut h = h;
    h.resize(n + 1, Scalar::zero());
    let pe: Vec<Scalar> = crate::polyring::pow_unit(&h, &e, n).into_iter().map(|c| c.scale(&scale)).collect();
    if let Some(i) = dominates_scalar(&pe, alpha, &out, alpha + n as i64) {
        return Err(MajorantError::DominanceFailed(i));
    }
    let mut qh: Vec<BigRational> = q.coeffs.iter().take(n + 1).map(|c| c / &q0).collect();
    qh.resize(n + 1, zero());
    let qe: Vec<Scalar> = crate::polyring::pow_unit(&qh, &e, n).into_iter().map(|c| Scalar::real(c * &scale)).collect();
    if let Some(i) = dominates_scalar(&qe, alpha, &out, alpha + n as i64) {
        return Err(MajorantError::DominanceFailed(i));
    }
    Ok(out)
}

/// Reversion of `Φ_inv = â₁z − Σ_{i≥2} âᵢzⁱ`, with every coefficient checked `≥ 0`.
pub fn majorant_inverse(phi: &[BigRational], n: usize) -> Result<ReversionResult<BigRational>, MajorantError> {
    if let Some(i) = phi.iter().position(|c| c.is_negative()) {
        return Err(MajorantError::NegativeCoefficient(i));
    }
    let inv: Vec<BigRational> =
        phi.iter().enumerate().map(|(i, c)| if i == 0 { c.clone() } else { -c.clone() }).collect();
    let r = formal_inverse(&inv, n).map_err(|_| MajorantError::ZeroLinearTerm)?;
    if let Some(i) = r.coeffs.iter().position(|c| c.is_negative()) {
        return Err(MajorantError::NegativeCoefficient(i + 1));
    }
    Ok(r)
}

/// Closed-form inverse of `|u|⁻¹y(1 − 2ey)/(1 − ey)` at `P_inv = t`, via the stable root
/// `2|u|t / ((1 + e|u|t) + √D)`.
pub fn quadratic_majorant_inverse(u_abs: f64, eps_pow: f64, pinv: f64) -> Result<f64, MajorantError> {
    let s = eps_pow * u_abs * pinv;
    let disc = 1.0 - 6.0 * s + s * s;
    if disc < 0.0 || (s > 1.0 && pinv > 0.0) {
        return Err(MajorantError::NegativeDiscriminant);
    }
    Ok(2.0 * u_abs * pinv / ((1.0 + s) + disc.sqrt()))
}

/// Taylor coefficients of the closed-form inverse, from the reversion of the lead2 series.
pub fn lead2_inverse_series(
    u_abs: &BigRational,
    eps_pow: &BigRational,
    n: usize,
) -> Result<Vec<BigRational>, MajorantError> {
    // |u|⁻¹ z (1 − 2ez)(1 − ez)^{-1} as a dense series starting at z.
    let geo = inverse_trunc(&[BigRational::one(), -eps_pow.clone()], n).unwrap();
    let num = [BigRational::one(), -(eps_pow * int(2))];
    let body = crate::polyring::mul_trunc(&num, &geo, n);
    let f: Vec<BigRational> = body.iter().take(n).map(|c| c / u_abs).collect();
    Ok(formal_inverse(&f, n).map_err(|_| MajorantError::ZeroLinearTerm)?.coeffs)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AbsValue {
    pub value: f64,
    pub tail_bound: Option<f64>,
    pub certified: bool,
}

/// `Σ|p_i(x0) y0^{α+i}|` plus `Q`'s tail bound at `|y0|`.
pub fn abs_conv_value(p: &YSeries, x0: &Scalar, y0: &Scalar, q: &Majorant) -> Result<AbsValue, MajorantError> {
    if let Verdict::Fails { index } = dominates(p, q, x0)? {
        return Err(MajorantError::DominanceFailed(index));
    }
    let vals = eval_coeffs(p, x0)?;
    let t = y0.abs_f64();
    let mut value = 0.0;
    for (i, v) in vals.iter().enumerate() {
        value += v.abs_f64() * t.powi((p.alpha() + i as i64) as i32);
    }
    if p.is_exact() {
        return Ok(AbsValue { value, tail_bound: Some(0.0), certified: true });
    }
    // Terms of P past its own truncation but within Q's stored range are bounded by q_i.
    let p_top = p.valid_to().unwrap();
    for e in (p_top + 1)..=q.valid_to() {
        value += rat_to_f64(&q.coeff_at(e)) * t.powi(e as i32);
    }
    let tail = q.tail_bound(t);
    match tail {
        Some(b) => Ok(AbsValue { value: value + b, tail_bound: Some(b), certified: true }),
        None => Err(MajorantError::Uncertified),
    }
}

/// `(−1)^i C(a,i) = |C(a,i)| ≤ |C(a+b,i)|` for `a, b < 0`.
pub fn neg_binomial_inequality(a: &BigRational, b: &BigRational, i: usize) -> bool {
    let ca = binom(a, i);
    let cab = binom(&(a + b), i);
    let sign = if i.is_multiple_of(2) { BigRational::one() } else { -BigRational::one() };
    &ca * &sign == ca.abs() && ca.abs() <= cab.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{rat, UPoly};
    use crate::yseries::RatFunc;
    use proptest::prelude::*;

    fn ys(alpha: i64, c: &[i64]) -> YSeries {
        YSeries::from_ints(alpha, c, None)
    }

    fn qs(c: &[i64]) -> Vec<BigRational> {
        c.iter().map(|&k| int(k)).collect()
    }

    #[test]
    fn dominance_examples() {
        let x0 = Scalar::from_int(5);
        let q = Majorant::polynomial(1, qs(&[1, 1])).unwrap();
        assert!(dominates(&ys(1, &[1, -1]), &q, &x0).unwrap().holds());
        let q = Majorant::polynomial(1, qs(&[1])).unwrap();
        assert_eq!(dominates(&ys(1, &[2]), &q, &x0).unwrap(), Verdict::Fails { index: 0 });

        // y/(1 − xy) with |x0| = 1: coefficients x0^i.
        let n = 10;
        let coeffs: Vec<RatFunc> = (0..=n).map(|i| RatFunc::from_poly(UPoly::x()).pow_i(i as i64).unwrap()).collect();
        let p = YSeries::truncated(1, coeffs, n);
        let q = Majorant::geometric(1, int(1), int(1), n).unwrap();
        let x0 = Scalar::complex((3, 5), (4, 5));
        assert_eq!(dominates(&p, &q, &x0).unwrap(), Verdict::HoldsToOrder { order: n });
    }

    #[test]
    fn split_examples() {
        let s = split_parts(&Majorant::polynomial(1, qs(&[1])).unwrap()).unwrap();
        assert!(s.igo.coeffs.iter().all(Zero::is_zero));
        assert_eq!(s.inv, qs(&[1]));
        let s = split_parts(&Majorant::polynomial(1, qs(&[2, 4])).unwrap()).unwrap();
        assert_eq!(s.igo.coeffs, qs(&[0, 2]));
        assert_eq!((s.inv_alpha, s.inv.clone()), (1, qs(&[2, -4])));
        let s = split_parts(&Majorant::polynomial(-1, qs(&[1, 1])).unwrap()).unwrap();
        assert_eq!(s.igo.coeffs, qs(&[0, 1]));
        assert_eq!((s.inv_alpha, s.inv), (-1, qs(&[1, -1])));
        assert_eq!(split_parts(&Majorant::polynomial(1, qs(&[0, 1])).unwrap()), Err(MajorantError::ZeroLeading));
    }

    #[test]
    fn derivative_examples() {
        let x0 = Scalar::zero();
        let q = Majorant::polynomial(1, qs(&[1, 1])).unwrap();
        let d = derivative_majorant(&ys(1, &[1, 1]), &q, &x0).unwrap();
        assert_eq!((d.alpha, d.coeffs.clone()), (0, qs(&[1, 2])));
        let q = Majorant::polynomial(1, qs(&[1, 0, 1])).unwrap();
        let d = derivative_majorant(&ys(1, &[1, 0, -1]), &q, &x0).unwrap();
        assert_eq!((d.alpha, d.coeffs.clone()), (0, qs(&[1, 0, 3])));
        let q = Majorant::polynomial(-2, qs(&[1, 1])).unwrap();
        let d = derivative_majorant(&ys(-2, &[-1, 1]), &q, &x0).unwrap();
        assert_eq!((d.alpha, d.coeffs), (-3, qs(&[2, 1])));
        let mixed = Majorant::polynomial(-1, qs(&[1, 1, 1])).unwrap();
        assert_eq!(derivative_majorant(&ys(-1, &[1, 1, 1]), &mixed, &x0), Err(MajorantError::MixedShape));
    }

    #[test]
    fn power_examples() {
        let x0 = Scalar::zero();
        let q = Majorant::polynomial(1, qs(&[1])).unwrap();
        let m = power_majorant(&ys(1, &[1]), &q, &x0, &PowerRule::NegPair { a: int(-1), b: rat(-1, 2) }, 4).unwrap();
        assert_eq!((m.alpha, m.coeffs[0].clone()), (-1, int(1)));

        let q = Majorant::polynomial(1, qs(&[1, 1])).unwrap();
        let m = power_majorant(&ys(1, &[1, 1]), &q, &x0, &PowerRule::Pos { k: int(2) }, 1).unwrap();
        assert_eq!((m.alpha, m.coeffs.clone()), (2, qs(&[1, 2])));
        // Expansion oracle: y²(1 − 2y)^{-1} = y²Σ(2y)^i against Q² = y² + 2y³ + y⁴.
        let m = power_majorant(&ys(1, &[1, 1]), &q, &x0, &PowerRule::Pos { k: int(2) }, 6).unwrap();
        let expect: Vec<BigRational> = (0..=6).map(|i| int(2).pow(i)).collect();
        assert_eq!(m.coeffs, expect);
        let q2 = [int(1), int(2), int(1)];
        assert!(q2.iter().zip(&m.coeffs).all(|(a, b)| a <= b));

        let bad = power_majorant(&ys(1, &[1, 1]), &q, &x0, &PowerRule::Pos { k: rat(3, 2) }, 4);
        assert!(matches!(bad, Err(MajorantError::ExponentRange(_))));
        assert!(neg_binomial_inequality(&rat(-1, 2), &rat(-1, 2), 3));
        assert_eq!(binom(&rat(-1, 2), 3).abs(), rat(5, 16));
    }

    #[test]
    fn majorant_inverse_examples() {
        let r = majorant_inverse(&qs(&[1]), 3).unwrap();
        assert_eq!(r.coeffs, qs(&[1, 0, 0]));
        let r = majorant_inverse(&qs(&[1, 1]), 5).unwrap();
        assert_eq!(r.coeffs, qs(&[1, 1, 2, 5, 14]));
        // Transfer: F̃ = z − z² ⊴ Φ = z + z².
        let ft = formal_inverse(&qs(&[1, -1]), 10).unwrap();
        let hat = majorant_inverse(&qs(&[1, 1]), 10).unwrap();
        for (b, bh) in ft.coeffs.iter().zip(&hat.coeffs) {
            assert!(b.abs() <= *bh);
        }
    }

    #[test]
    fn quadratic_examples() {
        assert_eq!(quadratic_majorant_inverse(1.0, 0.01, 0.0).unwrap(), 0.0);
        let v = quadratic_majorant_inverse(1.0, 0.01, 0.5).unwrap();
        let lit = (1.005 - 0.970025f64.sqrt()) / 0.04;
        assert!((v - lit).abs() < 1e-12);
        assert!((v - 0.502538).abs() < 1e-6);
        let small = quadratic_majorant_inverse(1.0, 1e-12, 0.5).unwrap();
        assert!((small - 0.5).abs() < 1e-10);
        // Series reversion of the lead2 form, evaluated at 0.5.
        let b = lead2_inverse_series(&int(1), &rat(1, 100), 30).unwrap();
        let s: f64 = b.iter().enumerate().map(|(i, c)| rat_to_f64(c) * 0.5f64.powi(i as i32 + 1)).sum();
        assert!((s - v).abs() < 1e-10);
        assert!(b.iter().all(|c| !c.is_negative()));
        assert_eq!(quadratic_majorant_inverse(1.0, 1.0, 1.0), Err(MajorantError::NegativeDiscriminant));
    }

    #[test]
    fn abs_value_examples() {
        let q = Majorant::polynomial(1, qs(&[1])).unwrap();
        let v = abs_conv_value(&YSeries::y(), &Scalar::zero(), &Scalar::i(), &q).unwrap();
        assert!(v.certified && (v.value - 1.0).abs() < 1e-15);
        let n = 16;
        let p = YSeries::from_ints(0, &[1; 17], Some(n));
        let q = Majorant::geometric(0, int(1), int(1), n).unwrap();
        let v = abs_conv_value(&p, &Scalar::zero(), &Scalar::from_ratio(1, 2), &q).unwrap();
        assert!(v.certified);
        assert!((v.value - 2.0).abs() <= 2f64.powi(-(n as i32)) + 1e-12);
    }

    fn small_majorant() -> impl Strategy<Value = (Vec<i64>, Vec<i64>)> {
        (proptest::collection::vec(0i64..=3, 1..4), proptest::collection::vec(-3i64..=3, 1..4))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn product_bound((q1, q2) in small_majorant(), t in 1u32..9) {
            let mut q1 = q1; q1[0] = q1[0].max(1);
            let mut q2c = q2.iter().map(|c| c.abs()).collect::<Vec<_>>(); q2c[0] = q2c[0].max(1);
            let p1 = YSeries::from_ints(1, &q1.iter().map(|c| -c).collect::<Vec<_>>(), None);
            let p2 = YSeries::from_ints(0, &q2, None);
            let m1 = Majorant::polynomial(1, qs(&q1)).unwrap();
            let m2 = Majorant::polynomial(0, qs(&q2c)).unwrap();
            let y0 = Scalar::complex((t as i64, 10), (1, 3));
            let prod = p1.mul(&p2);
            let mp = m1.mul(&m2);
            let lhs = abs_conv_value(&prod, &Scalar::zero(), &y0, &mp).unwrap().value;
            let r = y0.abs_f64();
            prop_assert!(lhs <= m1.value_at(r).unwrap() * m2.value_at(r).unwrap() + 1e-12);
        }

        #[test]
        fn lemma_nonnegativity(c in proptest::collection::vec(0i64..=3, 0..6), a1 in 1i64..=4) {
            let mut phi = vec![rat(a1, 2)];
            phi.extend(c.into_iter().map(int));
            prop_assert!(majorant_inverse(&phi, 30).is_ok());
        }

        #[test]
        fn binomial_battery(an in 1i64..8, ad in 1i64..5, bn in 1i64..8, bd in 1i64..5, i in 1usize..=12, k in 1i64..6) {
            prop_assert!(neg_binomial_inequality(&rat(-an, ad), &rat(-bn, bd), i));
            let kk = int(k);
            prop_assert!(binom(&kk, i) <= kk.pow(i as i32));
            let frac = rat(an.min(ad * 2 - 1).max(1), ad * 2);
            if frac < BigRational::one() {
                prop_assert!(binom(&frac, i).abs() <= frac);
            }
        }

        #[test]
        fn closure_rules_hold(c in proptest::collection::vec(-3i64..=3, 1..5), k in 1i64..4) {
            let mut pc = vec![1];
            pc.extend(c.iter().copied());
            let qc: Vec<i64> = pc.iter().map(|v| v.abs()).collect();
            let p = ys(1, &pc);
            let q = Majorant::polynomial(1, qs(&qc)).unwrap();
            let x0 = Scalar::zero();
            prop_assert!(derivative_majorant(&p, &q, &x0).is_ok());
            let pos = PowerRule::Pos { k: int(k) };
            prop_assert!(power_majorant(&p, &q, &x0, &pos, 8).is_ok());
            let neg = PowerRule::NegPair { a: int(-k), b: rat(-1, 2) };
            prop_assert!(power_majorant(&p, &q, &x0, &neg, 8).is_ok());
        }
    }
}
