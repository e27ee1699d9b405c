//! Truncated Laurent series in `y` with rational-function-in-`x` coefficients.
//!
//! A series `Σ_i c_i y^{α+i}` is either exact (a finite Laurent polynomial) or known
//! through the relative index `trunc`. Arithmetic tracks validity so results never
//! claim more terms than their operands determine.

mod ratfunc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::polyring::{pow_unit, BiPoly, Field, Scalar, UPoly};

pub use ratfunc::{RatFunc, RatFuncJson};

/// Default tolerance for certifying a tail remainder.
pub const DEFAULT_EVAL_TOL: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SeriesError {
    #[error("branch error: leading coefficient is not 1 and exponent {0} is not an integer")]
    BranchError(BigRational),
    #[error("exponent error: alpha*beta = {alpha}*{beta} is not an integer")]
    ExponentError { alpha: i64, beta: BigRational },
    #[error("ill-defined substitution: {0}")]
    IllDefined(String),
    #[error("a coefficient denominator vanishes at x0")]
    PoleAtX0,
    #[error("operation needs a nonzero series")]
    ZeroSeries,
}

#[derive(Clone, Debug, PartialEq)]
pub struct YSeries {
    alpha: i64,
    coeffs: Vec<RatFunc>,
    trunc: Option<usize>,
}

/// Substitution argument of [`compose_series`].
#[derive(Clone, Debug)]
pub enum Subst {
    Scalar(Scalar),
    Series(YSeries),
}

/// Result of [`compose_series`].
#[derive(Clone, Debug, PartialEq)]
pub enum Composed {
    Scalar(Scalar),
    Series(YSeries),
}

impl YSeries {
    /// Canonicalizing constructor. `trunc = None` marks an exact Laurent polynomial.
    pub fn new(alpha: i64, coeffs: Vec<RatFunc>, trunc: Option<usize>) -> Self {
        YSeries { alpha, coeffs, trunc }.normalized()
    }

    pub fn exact(alpha: i64, coeffs: Vec<RatFunc>) -> Self {
        YSeries::new(alpha, coeffs, None)
    }

    pub fn truncated(alpha: i64, coeffs: Vec<RatFunc>, n: usize) -> Self {
        YSeries::new(alpha, coeffs, Some(n))
    }

    pub fn from_scalars(alpha: i64, coeffs: &[Scalar], trunc: Option<usize>) -> Self {
        YSeries::new(alpha, coeffs.iter().cloned().map(RatFunc::constant).collect(), trunc)
    }

    pub fn from_ints(alpha: i64, coeffs: &[i64], trunc: Option<usize>) -> Self {
        YSeries::new(alpha, coeffs.iter().map(|&k| RatFunc::from_int(k)).collect(), trunc)
    }

    pub fn zero() -> Self {
        YSeries { alpha: 0, coeffs: Vec::new(), trunc: None }
    }

    pub fn one() -> Self {
        YSeries::monomial(RatFunc::one(), 0)
    }

    /// `c · y^e`, exact.
    pub fn monomial(c: RatFunc, e: i64) -> Self {
        YSeries::exact(e, vec![c])
    }

    /// The series `y`.
    pub fn y() -> Self {
        YSeries::monomial(RatFunc::one(), 1)
    }

    /// The series `x` (constant in `y`).
    pub fn x() -> Self {
        YSeries::monomial(RatFunc::x(), 0)
    }

    /// Read a bivariate polynomial as an exact series in `y`.
    pub fn from_bipoly(p: &BiPoly) -> Self {
        if p.is_zero() {
            return YSeries::zero();
        }
        let lo = p.terms().map(|(m, _)| m.j).min().unwrap();
        let hi = p.degree_y().unwrap();
        let mut cols: Vec<Vec<Scalar>> = vec![Vec::new(); (hi - lo + 1) as usize];
        for (m, c) in p.terms() {
            let col = &mut cols[(m.j - lo) as usize];
            if col.len() <= m.i as usize {
                col.resize(m.i as usize + 1, Scalar::zero());
            }
            col[m.i as usize] = c.clone();
        }
        YSeries::exact(lo as i64, cols.into_iter().map(|c| RatFunc::from_poly(UPoly::new(c))).collect())
    }

    fn normalized(mut self) -> Self {
        if let Some(n) = self.trunc {
            self.coeffs.truncate(n + 1);
        }
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            None => {
                self.coeffs.clear();
                match self.trunc {
                    Some(n) => {
                        self.alpha += n as i64;
                        self.trunc = Some(0);
                    }
                    None => self.alpha = 0,
                }
            }
            Some(k) => {
                self.coeffs.drain(..k);
                self.alpha += k as i64;
                self.trunc = self.trunc.map(|n| n - k);
                while self.coeffs.last().is_some_and(RatFunc::is_zero) {
                    self.coeffs.pop();
                }
            }
        }
        self
    }

    /// Lowest exponent with a nonzero coefficient; for a truncated zero series this is
    /// the last exponent known to vanish.
    pub fn alpha(&self) -> i64 {
        self.alpha
    }

    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    pub fn trunc(&self) -> Option<usize> {
        self.trunc
    }

    pub fn is_exact(&self) -> bool {
        self.trunc.is_none()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Last exponent whose coefficient is known; `None` when exact.
    pub fn valid_to(&self) -> Option<i64> {
        self.trunc.map(|n| self.alpha + n as i64)
    }

    /// Lower bound on the valuation.
    fn lower(&self) -> i64 {
        if self.is_zero() {
            self.alpha + 1
        } else {
            self.alpha
        }
    }

    /// Largest stored exponent.
    pub fn max_exp(&self) -> i64 {
        self.alpha + self.coeffs.len() as i64 - 1
    }

    pub fn lead(&self) -> Option<&RatFunc> {
        self.coeffs.first()
    }

    /// Coefficient of `y^e` (zero outside the stored range).
    pub fn coeff_at(&self, e: i64) -> RatFunc {
        if self.is_zero() || e < self.alpha {
            return RatFunc::zero();
        }
        self.coeffs.get((e - self.alpha) as usize).cloned().unwrap_or_else(RatFunc::zero)
    }

    /// Keep exponents up to `alpha + n` and mark the series as valid exactly that far.
    pub fn truncate(&self, n: usize) -> YSeries {
        let n = self.trunc.map_or(n, |t| t.min(n));
        YSeries::new(self.alpha, self.coeffs.clone(), Some(n))
    }

    /// Truncate at an absolute exponent.
    pub fn truncate_abs(&self, e: i64) -> YSeries {
        if self.is_zero() {
            let v = self.valid_to().map_or(e, |v| v.min(e));
            return YSeries { alpha: v, coeffs: Vec::new(), trunc: Some(0) };
        }
        if e < self.alpha {
            return YSeries { alpha: e, coeffs: Vec::new(), trunc: Some(0) };
        }
        self.truncate((e - self.alpha) as usize)
    }

    pub fn add(&self, o: &YSeries) -> YSeries {
        let valid = match (self.valid_to(), o.valid_to()) {
            (None, v) | (v, None) => v,
            (Some(a), Some(b)) => Some(a.min(b)),
        };
        let los: Vec<i64> = [self, o].iter().filter(|s| !s.is_zero()).map(|s| s.alpha).collect();
        let Some(&lo) = los.iter().min() else {
            return match valid {
                Some(v) => YSeries { alpha: v, coeffs: Vec::new(), trunc: Some(0) },
                None => YSeries::zero(),
            };
        };
        let hi_stored = [self, o].iter().filter(|s| !s.is_zero()).map(|s| s.max_exp()).max().unwrap();
        let hi = valid.map_or(hi_stored, |v| v.min(hi_stored));
        if let Some(v) = valid {
            if v < lo {
                return YSeries { alpha: v, coeffs: Vec::new(), trunc: Some(0) };
            }
        }
        let coeffs = (lo..=hi).map(|e| self.coeff_at(e).add(&o.coeff_at(e))).collect();
        YSeries::new(lo, coeffs, valid.map(|v| (v - lo) as usize))
    }

    pub fn neg(&self) -> YSeries {
        YSeries { alpha: self.alpha, coeffs: self.coeffs.iter().map(RatFunc::neg).collect(), trunc: self.trunc }
    }

    pub fn sub(&self, o: &YSeries) -> YSeries {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &YSeries) -> YSeries {
        if (self.is_zero() && self.is_exact()) || (o.is_zero() && o.is_exact()) {
            return YSeries::zero();
        }
        if self.is_zero() || o.is_zero() {
            // A truncated zero factor is O(y^{valid+1}); the product vanishes that far.
            let v = match (self.is_zero(), o.is_zero()) {
                (true, true) => self.alpha + o.alpha + 1,
                (true, false) => self.alpha + o.lower(),
                _ => o.alpha + self.lower(),
            };
            return YSeries { alpha: v, coeffs: Vec::new(), trunc: Some(0) };
        }
        let alpha = self.alpha + o.alpha;
        let n = match (self.trunc, o.trunc) {
            (None, None) => None,
            (Some(a), None) | (None, Some(a)) => Some(a),
            (Some(a), Some(b)) => Some(a.min(b)),
        };
        let full = self.coeffs.len() + o.coeffs.len() - 1;
        let len = n.map_or(full, |n| (n + 1).min(full));
        let mut out = vec![RatFunc::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        YSeries::new(alpha, out, n)
    }

    pub fn scale(&self, c: &RatFunc) -> YSeries {
        if c.is_zero() {
            return match self.valid_to() {
                Some(_) => YSeries { alpha: self.valid_to().unwrap(), coeffs: Vec::new(), trunc: Some(0) },
                None => YSeries::zero(),
            };
        }
        YSeries::new(self.alpha, self.coeffs.iter().map(|a| a.mul(c)).collect(), self.trunc)
    }

    pub fn scale_scalar(&self, c: &Scalar) -> YSeries {
        self.scale(&RatFunc::constant(c.clone()))
    }

    /// Multiply by `y^k`.
    pub fn shift(&self, k: i64) -> YSeries {
        YSeries { alpha: self.alpha + k, coeffs: self.coeffs.clone(), trunc: self.trunc }
    }

    /// `P^β` to relative order `n` (see module docs for the branch rule).
    pub fn pow_rational(&self, beta: &BigRational, n: usize) -> Result<YSeries, SeriesError> {
        if self.is_zero() {
            return Err(SeriesError::ZeroSeries);
        }
        let ab = beta * BigRational::from_integer(BigInt::from(self.alpha));
        if !ab.is_integer() {
            return Err(SeriesError::ExponentError { alpha: self.alpha, beta: beta.clone() });
        }
        let p0 = &self.coeffs[0];
        let unit = Field::is_one(p0);
        if !unit && !beta.is_integer() {
            return Err(SeriesError::BranchError(beta.clone()));
        }
        let n = self.trunc.map_or(n, |t| t.min(n));
        let h: Vec<RatFunc> = if unit {
            self.coeffs.iter().take(n + 1).cloned().collect()
        } else {
            let inv = p0.inv().unwrap();
            self.coeffs.iter().take(n + 1).map(|c| c.mul(&inv)).collect()
        };
        let mut g = pow_unit(&h, beta, n);
        if !unit {
            let k = beta
                .to_integer()
                .to_i64()
                .ok_or(SeriesError::ExponentError { alpha: self.alpha, beta: beta.clone() })?;
            let scale = p0.pow_i(k).unwrap();
            g = g.iter().map(|c| c.mul(&scale)).collect();
        }
        let alpha = ab.to_integer().to_i64().unwrap();
        Ok(YSeries::new(alpha, g, Some(n)))
    }

    pub fn pow_int(&self, k: i64, n: usize) -> Result<YSeries, SeriesError> {
        if k >= 0 && self.is_exact() {
            let mut acc = YSeries::one();
            for _ in 0..k {
                acc = acc.mul(self);
            }
            return Ok(acc.truncate(n));
        }
        self.pow_rational(&BigRational::from_integer(BigInt::from(k)), n)
    }

    /// Multiplicative inverse to relative order `n`.
    pub fn inverse(&self, n: usize) -> Result<YSeries, SeriesError> {
        self.pow_rational(&-<BigRational as One>::one(), n)
    }

    /// `∂/∂y`.
    pub fn d_dy(&self) -> YSeries {
        if self.is_zero() {
            return match self.valid_to() {
                Some(v) => YSeries { alpha: v - 1, coeffs: Vec::new(), trunc: Some(0) },
                None => YSeries::zero(),
            };
        }
        let coeffs =
            self.coeffs.iter().enumerate().map(|(i, c)| c.scale(&Scalar::from_int(self.alpha + i as i64))).collect();
        YSeries::new(self.alpha - 1, coeffs, self.trunc)
    }

    /// `∂/∂x`, coefficient-wise.
    pub fn d_dx(&self) -> YSeries {
        if self.is_zero() {
            return self.clone();
        }
        let coeffs: Vec<RatFunc> = self.coeffs.iter().map(RatFunc::derivative).collect();
        YSeries::new(self.alpha, coeffs, self.trunc)
    }

    /// Evaluate every coefficient at `x0`.
    pub fn eval_x(&self, x0: &Scalar) -> Result<YSeries, SeriesError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.eval(x0).map(RatFunc::constant).ok_or(SeriesError::PoleAtX0))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(YSeries::new(self.alpha, coeffs, self.trunc))
    }

    /// Coefficients evaluated at `x0`, exact.
    pub fn coeff_values(&self, x0: &Scalar) -> Result<Vec<Scalar>, SeriesError> {
        self.coeffs.iter().map(|c| c.eval(x0).ok_or(SeriesError::PoleAtX0)).collect()
    }

    /// Partial sum of stored terms at an exact point.
    pub fn eval(&self, x0: &Scalar, y0: &Scalar) -> Result<Scalar, SeriesError> {
        let vals = self.coeff_values(x0)?;
        if y0.is_zero() {
            if self.alpha < 0 && vals.iter().take((-self.alpha) as usize).any(|v| !v.is_zero()) {
                return Err(SeriesError::IllDefined("negative power of y at y0 = 0".into()));
            }
            return Ok(self.coeff_at(0).eval(x0).unwrap_or_else(Scalar::zero));
        }
        let mut yp = y0.pow_i(self.alpha).unwrap();
        let mut acc = Scalar::zero();
        for v in &vals {
            acc += &(v * &yp);
            yp = &yp * y0;
        }
        Ok(acc)
    }

    /// Partial sum in floating point.
    pub fn eval_c64(&self, x0: Complex64, y0: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, c) in self.coeffs.iter().enumerate() {
            acc += c.eval_c64(x0) * y0.powi((self.alpha + i as i64) as i32);
        }
        acc
    }

    /// Floating evaluator for an exact series whose coefficients are polynomials in `x`.
    pub fn to_float_laurent(&self) -> FloatLaurent {
        FloatLaurent {
            terms: self
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (self.alpha + i as i64, c.num().to_c64(), c.den().to_c64()))
                .collect(),
        }
    }

    pub fn to_json(&self) -> YSeriesJson {
        YSeriesJson { alpha: self.alpha, trunc: self.trunc, coeffs: self.coeffs.iter().map(RatFunc::to_json).collect() }
    }

    pub fn from_json(j: &YSeriesJson) -> Result<YSeries, String> {
        let coeffs = j.coeffs.iter().map(RatFunc::from_json).collect::<Result<Vec<_>, _>>()?;
        Ok(YSeries::new(j.alpha, coeffs, j.trunc))
    }
}

/// `{"alpha":int,"trunc":int|null,"coeffs":[{"num":poly,"den":poly},...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct YSeriesJson {
    pub alpha: i64,
    pub trunc: Option<usize>,
    pub coeffs: Vec<RatFuncJson>,
}

/// Float evaluator of a finite Laurent series with rational-function coefficients.
#[derive(Clone, Debug)]
pub struct FloatLaurent {
    terms: Vec<(i64, Vec<Complex64>, Vec<Complex64>)>,
}

fn horner(c: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    let (mut v, mut d) = (zero, zero);
    for &a in c.iter().rev() {
        d = d * x + v;
        v = v * x + a;
    }
    (v, d)
}

impl FloatLaurent {
    /// Value, `∂/∂x` and `∂/∂y` at `(x, y)`.
    pub fn eval_grad(&self, x: Complex64, y: Complex64) -> (Complex64, Complex64, Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        let (mut v, mut dx, mut dy) = (zero, zero, zero);
        for (e, num, den) in &self.terms {
            let (n, dn) = horner(num, x);
            let (d, dd) = horner(den, x);
            let c = n / d;
            let dc = (dn * d - n * dd) / (d * d);
            let ye = y.powi(*e as i32);
            v += c * ye;
            dx += dc * ye;
            dy += c * (*e as f64) * y.powi(*e as i32 - 1);
        }
        (v, dx, dy)
    }

    pub fn eval(&self, x: Complex64, y: Complex64) -> Complex64 {
        self.eval_grad(x, y).0
    }
}

/// Evaluate the rational function `r` at the series `q` to relative order `n`.
fn ratfunc_at_series(r: &RatFunc, q: &YSeries, n: usize) -> Result<YSeries, SeriesError> {
    let poly_at = |p: &UPoly| -> YSeries {
        let mut acc = YSeries::zero();
        for c in p.coeffs().iter().rev() {
            acc = acc.mul(q).add(&YSeries::monomial(RatFunc::constant(c.clone()), 0));
        }
        acc
    };
    let num = poly_at(r.num());
    if r.den().is_one() {
        return Ok(num);
    }
    let den = poly_at(r.den());
    let inv = den.inverse(n)?;
    Ok(num.mul(&inv))
}

fn is_identity_x(q: &YSeries) -> bool {
    q.is_exact() && q.alpha == 0 && q.coeffs.len() == 1 && q.coeffs[0] == RatFunc::x()
}

/// `P(x → Q1, y → Q2)` to relative order `n`.
pub fn compose_series(p: &YSeries, q1: &Subst, q2: &Subst, n: usize) -> Result<Composed, SeriesError> {
    if p.is_zero() {
        return Ok(Composed::Series(p.clone()));
    }
    match q2 {
        Subst::Scalar(y0) => match q1 {
            Subst::Scalar(x0) => Ok(Composed::Scalar(p.eval(x0, y0)?)),
            Subst::Series(q1s) => {
                if !p.is_exact() {
                    return Err(SeriesError::IllDefined("scalar y with a non-terminating series".into()));
                }
                let mut acc = YSeries::zero();
                for (i, c) in p.coeffs.iter().enumerate() {
                    let e = p.alpha + i as i64;
                    let yp = y0.pow_i(e).ok_or_else(|| SeriesError::IllDefined("negative power of y0 = 0".into()))?;
                    let ci = if is_identity_x(q1s) {
                        YSeries::monomial(c.clone(), 0)
                    } else {
                        ratfunc_at_series(c, q1s, n)?
                    };
                    acc = acc.add(&ci.scale_scalar(&yp));
                }
                Ok(Composed::Series(acc.truncate_abs(acc.lower() + n as i64)))
            }
        },
        Subst::Series(q2s) => {
            if q2s.is_zero() {
                return Err(SeriesError::IllDefined("substituting a zero series for y".into()));
            }
            if !p.is_exact() && q2s.alpha <= 0 {
                return Err(SeriesError::IllDefined("y-substitute must have positive valuation".into()));
            }
            let coeffs: Vec<YSeries> = p
                .coeffs
                .iter()
                .map(|c| match q1 {
                    Subst::Scalar(x0) => {
                        c.eval(x0).map(|v| YSeries::monomial(RatFunc::constant(v), 0)).ok_or(SeriesError::PoleAtX0)
                    }
                    Subst::Series(q1s) if is_identity_x(q1s) => Ok(YSeries::monomial(c.clone(), 0)),
                    Subst::Series(q1s) => ratfunc_at_series(c, q1s, n + 8),
                })
                .collect::<Result<_, _>>()?;
            let cval = coeffs.iter().filter(|c| !c.is_zero()).map(|c| c.alpha).min().unwrap_or(0);
            // Work order: enough relative terms in each power for the requested output.
            let lowest = q2s.alpha * p.alpha + cval;
            let mut acc = YSeries::zero();
            for (i, c) in coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let e = p.alpha + i as i64;
                let term_alpha = q2s.alpha * e + c.alpha;
                let need = (lowest + n as i64 - term_alpha).max(0) as usize;
                let pw = q2s.pow_int(e, need)?;
                acc = acc.add(&c.mul(&pw));
            }
            if let Some(np) = p.trunc {
                // Omitted terms of P contribute at exponents ≥ v2·(α+N+1) + cval.
                let bound = q2s.alpha * (p.alpha + np as i64 + 1) + cval - 1;
                acc = acc.truncate_abs(bound);
            }
            let target = acc.lower().min(lowest) + n as i64;
            let out = acc.truncate_abs(target.max(acc.lower()));
            if let Some(v) = out.valid_to() {
                if v < lowest.min(out.lower()) + n as i64 && !out.is_zero() && v < out.alpha + n as i64 {
                    return Err(SeriesError::IllDefined(format!(
                        "result determined only through y^{} but order {} was requested",
                        v, n
                    )));
                }
            }
            Ok(Composed::Series(out))
        }
    }
}

/// Expansion coefficients `b_i` with `Q = Σ_{i<count} b_i P^{(β+i)/α}`, where `β` is the
/// valuation of `Q` and `α` that of `P`.
pub fn rebase_coeff(q: &YSeries, p: &YSeries, count: usize) -> Result<Vec<RatFunc>, SeriesError> {
    if p.is_zero() {
        return Err(SeriesError::ZeroSeries);
    }
    if p.alpha == 0 {
        return Err(SeriesError::IllDefined("P must have nonzero valuation".into()));
    }
    if q.is_zero() || count == 0 {
        return Ok(vec![RatFunc::zero(); count]);
    }
    let need = count - 1;
    if p.trunc.is_some_and(|t| t < need) || q.valid_to().is_some_and(|v| v < q.alpha + need as i64) {
        return Err(SeriesError::IllDefined(format!("inputs are not known to {} terms", count)));
    }
    let root = p_root(p, need)?;
    let lead = root.coeffs[0].clone();
    let mut power = root.pow_int(q.alpha, need)?;
    let mut rest = q.truncate(need);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let e = q.alpha + i as i64;
        let lc = lead.pow_i(e).unwrap();
        let b = rest.coeff_at(e).div(&lc).unwrap();
        if !b.is_zero() {
            rest = rest.sub(&power.scale(&b));
        }
        out.push(b);
        if i + 1 < count {
            power = power.mul(&root).truncate_abs(q.alpha + need as i64);
        }
    }
    Ok(out)
}

/// `P^{1/α}`, a series with valuation 1.
fn p_root(p: &YSeries, n: usize) -> Result<YSeries, SeriesError> {
    let inv_alpha = BigRational::new(BigInt::one(), BigInt::from(p.alpha));
    if inv_alpha.is_integer() || Field::is_one(&p.coeffs[0]) {
        p.pow_rational(&inv_alpha, n)
    } else {
        Err(SeriesError::BranchError(inv_alpha))
    }
}

/// Re-expand `Σ_i b_i P^{(β+i)/α}` as a series in `y`, to `count` terms.
pub fn reexpand(b: &[RatFunc], p: &YSeries, beta: i64) -> Result<YSeries, SeriesError> {
    if b.is_empty() {
        return Ok(YSeries::zero());
    }
    let need = b.len() - 1;
    let root = p_root(p, need)?;
    let mut power = root.pow_int(beta, need)?;
    let mut acc = YSeries::zero().truncate_abs(beta + need as i64);
    for (i, c) in b.iter().enumerate() {
        acc = acc.add(&power.scale(c));
        if i + 1 < b.len() {
            power = power.mul(&root).truncate_abs(beta + need as i64);
        }
    }
    Ok(acc.truncate_abs(beta + need as i64))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertifiedValue {
    pub value: Scalar,
    /// Bound on the omitted tail; zero for exact series, `None` when no bound applies.
    pub remainder_bound: Option<f64>,
    pub certified: bool,
}

/// Partial sum at `(x0, y0)` with an optional geometric tail `|p_i(x0)| ≤ C r^i`.
pub fn eval_certified(
    p: &YSeries,
    x0: &Scalar,
    y0: &Scalar,
    tail: Option<(f64, f64)>,
    tol: f64,
) -> Result<CertifiedValue, SeriesError> {
    let value = p.eval(x0, y0)?;
    let Some(n) = p.trunc else {
        return Ok(CertifiedValue { value, remainder_bound: Some(0.0), certified: true });
    };
    let n = if p.is_zero() { 0 } else { n };
    let bound = tail.and_then(|(c, r)| {
        let ay = y0.abs_f64();
        let q = r * ay;
        (q < 1.0).then(|| c * ay.powi(p.alpha as i32) * q.powi(n as i32 + 1) / (1.0 - q))
    });
    Ok(CertifiedValue { value, remainder_bound: bound, certified: bound.is_some_and(|b| b <= tol) })
}

/// Rational view of an integer used by callers that build exponents.
pub fn int_rat(k: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(k))
}

/// True when `r` is a nonnegative rational.
pub fn nonneg(r: &BigRational) -> bool {
    !r.is_negative()
}
