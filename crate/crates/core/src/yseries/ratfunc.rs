//! Rational functions in `x` over ℚ(i).

use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::polyring::{BiPoly, Field, PolyJson, Scalar, UPoly};

/// Denominators at or below this degree are gcd-reduced on construction.
const GCD_DEGREE_LIMIT: usize = 12;

/// `num / den` with `den` monic. Equality compares by cross-multiplication.
#[derive(Clone)]
pub struct RatFunc {
    num: UPoly,
    den: UPoly,
}

impl RatFunc {
    /// Panics if `den` is zero.
    pub fn new(num: UPoly, den: UPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFunc::zero();
        }
        if den.is_constant() {
            let c = den.coeff(0).inv().unwrap();
            return RatFunc { num: num.scale(&c), den: UPoly::one() };
        }
        let lead = den.lead().unwrap().inv().unwrap();
        let (mut num, mut den) = (num.scale(&lead), den.scale(&lead));
        if let Some(q) = num.div_exact(&den) {
            return RatFunc { num: q, den: UPoly::one() };
        }
        if den.degree().unwrap() <= GCD_DEGREE_LIMIT && num.degree().unwrap() > 0 {
            let g = num.gcd(&den);
            if !g.is_constant() {
                num = num.divrem(&g).0;
                den = den.divrem(&g).0;
            }
        }
        RatFunc { num, den }
    }

    pub fn zero() -> Self {
        RatFunc { num: UPoly::zero(), den: UPoly::one() }
    }

    pub fn one() -> Self {
        RatFunc::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        RatFunc { num: UPoly::constant(c), den: UPoly::one() }
    }

    pub fn from_int(k: i64) -> Self {
        RatFunc::constant(Scalar::from_int(k))
    }

    pub fn from_poly(p: UPoly) -> Self {
        RatFunc { num: p, den: UPoly::one() }
    }

    /// The rational function `x`.
    pub fn x() -> Self {
        RatFunc::from_poly(UPoly::x())
    }

    pub fn num(&self) -> &UPoly {
        &self.num
    }

    pub fn den(&self) -> &UPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The constant value when the function does not depend on `x`.
    pub fn as_constant(&self) -> Option<Scalar> {
        (self.num.is_constant() && self.den.is_one()).then(|| self.num.coeff(0))
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            let num = self.num.add(&o.num);
            if self.den.is_one() {
                return RatFunc::from_poly(num);
            }
            return RatFunc::new(num, self.den.clone());
        }
        if let Some(k) = o.den.div_exact(&self.den) {
            return RatFunc::new(self.num.mul(&k).add(&o.num), o.den.clone());
        }
        if let Some(k) = self.den.div_exact(&o.den) {
            return RatFunc::new(self.num.add(&o.num.mul(&k)), self.den.clone());
        }
        let g = self.den.gcd(&o.den);
        let a = self.den.divrem(&g).0;
        let b = o.den.divrem(&g).0;
        RatFunc::new(self.num.mul(&b).add(&o.num.mul(&a)), a.mul(&o.den))
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return RatFunc::from_poly(self.num.mul(&o.num));
        }
        // Cancel cross factors that divide exactly before multiplying out.
        let (mut n1, mut d2) = (self.num.clone(), o.den.clone());
        if !d2.is_one() {
            if let Some(q) = n1.div_exact(&d2) {
                n1 = q;
                d2 = UPoly::one();
            }
        }
        let (mut n2, mut d1) = (o.num.clone(), self.den.clone());
        if !d1.is_one() {
            if let Some(q) = n2.div_exact(&d1) {
                n2 = q;
                d1 = UPoly::one();
            }
        }
        RatFunc::new(n1.mul(&n2), d1.mul(&d2))
    }

    pub fn scale(&self, c: &Scalar) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn scale_rat(&self, r: &BigRational) -> RatFunc {
        RatFunc { num: self.num.scale_rat(r), den: self.den.clone() }.normalized_zero()
    }

    fn normalized_zero(self) -> RatFunc {
        if self.num.is_zero() {
            RatFunc::zero()
        } else {
            self
        }
    }

    pub fn inv(&self) -> Option<RatFunc> {
        if self.is_zero() {
            return None;
        }
        Some(RatFunc::new(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &RatFunc) -> Option<RatFunc> {
        Some(self.mul(&o.inv()?))
    }

    pub fn pow_i(&self, e: i64) -> Option<RatFunc> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs() as u32;
        Some(RatFunc::new(base.num.pow(k), base.den.pow(k)))
    }

    pub fn derivative(&self) -> RatFunc {
        if self.den.is_one() {
            return RatFunc::from_poly(self.num.derivative());
        }
        let n = self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative()));
        RatFunc::new(n, self.den.mul(&self.den))
    }

    /// Exact evaluation; `None` at a pole.
    pub fn eval(&self, x: &Scalar) -> Option<Scalar> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(&self.num.eval(x) / &d)
    }

    pub fn eval_c64(&self, x: Complex64) -> Complex64 {
        self.num.eval_c64(x) / self.den.eval_c64(x)
    }

    /// Substitute `x ↦ q(x)` for a polynomial `q`.
    pub fn compose_poly(&self, q: &UPoly) -> RatFunc {
        RatFunc::new(self.num.compose(q), self.den.compose(q))
    }

    pub fn to_json(&self) -> RatFuncJson {
        RatFuncJson { num: upoly_to_json(&self.num), den: upoly_to_json(&self.den) }
    }

    pub fn from_json(j: &RatFuncJson) -> Result<RatFunc, String> {
        let num = upoly_from_json(&j.num)?;
        let den = upoly_from_json(&j.den)?;
        if den.is_zero() {
            return Err("zero denominator".into());
        }
        Ok(RatFunc::new(num, den))
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, o: &RatFunc) -> bool {
        if self.den == o.den {
            return self.num == o.num;
        }
        self.num.mul(&o.den) == o.num.mul(&self.den)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "[{}]/[{}]", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl Field for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn one() -> Self {
        RatFunc::one()
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn minus(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn times(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn negate(&self) -> Self {
        self.neg()
    }
    fn recip(&self) -> Option<Self> {
        self.inv()
    }
    fn from_rational(r: &BigRational) -> Self {
        RatFunc::constant(Scalar::real(r.clone()))
    }
    fn scale_rational(&self, r: &BigRational) -> Self {
        self.scale_rat(r)
    }
}

/// JSON `{"num": poly, "den": poly}`; polynomials in `x` use the bivariate format with `j = 0`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RatFuncJson {
    pub num: PolyJson,
    pub den: PolyJson,
}

fn upoly_to_json(p: &UPoly) -> PolyJson {
    BiPoly::from_terms(p.coeffs().iter().enumerate().map(|(k, c)| (c.clone(), k as u32, 0))).to_json()
}

fn upoly_from_json(p: &PolyJson) -> Result<UPoly, String> {
    let b = BiPoly::from_json(p);
    if b.degree_y().unwrap_or(0) > 0 {
        return Err("coefficient polynomial may only involve x".into());
    }
    let deg = b.degree().unwrap_or(0) as usize;
    Ok(UPoly::new((0..=deg).map(|k| b.coeff(k as u32, 0)).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_cancellation() {
        let u = UPoly::from_ints(&[1, 2]);
        let a = RatFunc::new(UPoly::one(), u.clone());
        let b = RatFunc::from_poly(u.clone());
        assert_eq!(a.mul(&b), RatFunc::one());
        assert!(Field::is_one(&a.mul(&b)));
        let c = RatFunc::new(UPoly::x(), u.pow(2));
        let sum = a.add(&c);
        assert_eq!(sum, RatFunc::new(UPoly::from_ints(&[1, 3]), u.pow(2)));
        assert_eq!(sum.sub(&c), a);
        assert_eq!(a.derivative(), RatFunc::new(UPoly::from_ints(&[-2]), u.pow(2)));
        assert_eq!(a.eval(&Scalar::from_ratio(-1, 2)), None);
    }

    #[test]
    fn json_round_trip() {
        let r = RatFunc::new(UPoly::from_ints(&[3, 0, 1]), UPoly::from_ints(&[1, 1]));
        let j = serde_json::to_string(&r.to_json()).unwrap();
        let back = RatFunc::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(back, r);
    }
}
