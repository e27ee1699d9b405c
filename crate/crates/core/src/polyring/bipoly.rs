//! Sparse bivariate polynomials over [`Scalar`].

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::Scalar;

/// Exponent pair `x^i y^j`, ordered graded-lexicographically.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Mono {
    pub i: u32,
    pub j: u32,
}

impl Mono {
    pub fn new(i: u32, j: u32) -> Self {
        Mono { i, j }
    }

    pub fn degree(&self) -> u32 {
        self.i + self.j
    }
}

impl Ord for Mono {
    fn cmp(&self, o: &Self) -> Ordering {
        (self.degree(), self.i, self.j).cmp(&(o.degree(), o.i, o.j))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

#[derive(Clone, PartialEq, Eq, Default)]
pub struct BiPoly {
    terms: BTreeMap<Mono, Scalar>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn one() -> Self {
        BiPoly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        BiPoly::monomial(c, 0, 0)
    }

    pub fn monomial(c: Scalar, i: u32, j: u32) -> Self {
        let mut p = BiPoly::zero();
        p.add_term(Mono::new(i, j), c);
        p
    }

    pub fn x() -> Self {
        BiPoly::monomial(Scalar::one(), 1, 0)
    }

    pub fn y() -> Self {
        BiPoly::monomial(Scalar::one(), 0, 1)
    }

    /// Build from `(coefficient, i, j)` triples, combining repeats.
    pub fn from_terms<I: IntoIterator<Item = (Scalar, u32, u32)>>(it: I) -> Self {
        let mut p = BiPoly::zero();
        for (c, i, j) in it {
            p.add_term(Mono::new(i, j), c);
        }
        p
    }

    pub fn from_int_terms(t: &[(i64, u32, u32)]) -> Self {
        BiPoly::from_terms(t.iter().map(|&(c, i, j)| (Scalar::from_int(c), i, j)))
    }

    fn add_term(&mut self, m: Mono, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_default();
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Scalar {
        self.terms.get(&Mono::new(i, j)).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(0, 0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Mono::degree).max()
    }

    /// Largest exponent of `y`, `None` for zero.
    pub fn degree_y(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.j).max()
    }

    pub fn support(&self) -> BTreeSet<(u32, u32)> {
        self.terms.keys().map(|m| (m.i, m.j)).collect()
    }

    /// The homogeneous component of total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> BiPoly {
        BiPoly { terms: self.terms.iter().filter(|(m, _)| m.degree() == d).map(|(m, c)| (*m, c.clone())).collect() }
    }

    /// Terms of total degree at most `d`.
    pub fn truncate_degree(&self, d: u32) -> BiPoly {
        BiPoly { terms: self.terms.iter().filter(|(m, _)| m.degree() <= d).map(|(m, c)| (*m, c.clone())).collect() }
    }

    pub fn add(&self, o: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, -c);
        }
        out
    }

    pub fn neg(&self) -> BiPoly {
        BiPoly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }

    pub fn scale(&self, s: &Scalar) -> BiPoly {
        if s.is_zero() {
            return BiPoly::zero();
        }
        BiPoly { terms: self.terms.iter().map(|(m, c)| (*m, c * s)).collect() }
    }

    pub fn mul(&self, o: &BiPoly) -> BiPoly {
        let mut acc: BTreeMap<Mono, Scalar> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let m = Mono::new(ma.i + mb.i, ma.j + mb.j);
                *acc.entry(m).or_default() += &(ca * cb);
            }
        }
        acc.retain(|_, c| !c.is_zero());
        BiPoly { terms: acc }
    }

    pub fn pow(&self, e: u32) -> BiPoly {
        let mut acc = BiPoly::one();
        let mut base = self.clone();
        let mut k = e;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn partial_x(&self) -> BiPoly {
        BiPoly::from_terms(
            self.terms.iter().filter(|(m, _)| m.i > 0).map(|(m, c)| (c.mul_int(m.i as i64), m.i - 1, m.j)),
        )
    }

    pub fn partial_y(&self) -> BiPoly {
        BiPoly::from_terms(
            self.terms.iter().filter(|(m, _)| m.j > 0).map(|(m, c)| (c.mul_int(m.j as i64), m.i, m.j - 1)),
        )
    }

    /// Exact evaluation.
    pub fn eval(&self, x: &Scalar, y: &Scalar) -> Scalar {
        let dx = self.terms.keys().map(|m| m.i).max().unwrap_or(0);
        let dy = self.degree_y().unwrap_or(0);
        let xp = powers(x, dx);
        let yp = powers(y, dy);
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            acc += &(&(c * &xp[m.i as usize]) * &yp[m.j as usize]);
        }
        acc
    }

    pub fn eval_c64(&self, x: Complex64, y: Complex64) -> Complex64 {
        self.terms.iter().map(|(m, c)| c.to_c64() * x.powu(m.i) * y.powu(m.j)).sum()
    }

    /// Generic substitution `P(X, Y)` via precomputed powers.
    pub fn substitute(&self, x: &BiPoly, y: &BiPoly) -> BiPoly {
        let dx = self.terms.keys().map(|m| m.i).max().unwrap_or(0);
        let dy = self.degree_y().unwrap_or(0);
        let mut xp = vec![BiPoly::one()];
        for k in 0..dx as usize {
            xp.push(xp[k].mul(x));
        }
        let mut yp = vec![BiPoly::one()];
        for k in 0..dy as usize {
            yp.push(yp[k].mul(y));
        }
        let mut acc = BiPoly::zero();
        for (m, c) in &self.terms {
            acc = acc.add(&xp[m.i as usize].mul(&yp[m.j as usize]).scale(c));
        }
        acc
    }

    /// Linear coefficient pair `(Coeff(x), Coeff(y))`.
    pub fn linear_coeffs(&self) -> (Scalar, Scalar) {
        (self.coeff(1, 0), self.coeff(0, 1))
    }

    pub fn to_float(&self) -> FloatPoly {
        FloatPoly::new(self)
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson { terms: self.terms.iter().map(|(m, c)| TermJson { c: c.clone(), i: m.i, j: m.j }).collect() }
    }

    pub fn from_json(p: &PolyJson) -> BiPoly {
        BiPoly::from_terms(p.terms.iter().map(|t| (t.c.clone(), t.i, t.j)))
    }
}

fn powers(b: &Scalar, n: u32) -> Vec<Scalar> {
    let mut out = vec![Scalar::one()];
    for k in 0..n as usize {
        out.push(&out[k] * b);
    }
    out
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono = match (m.i, m.j) {
                (0, 0) => String::new(),
                (i, 0) => xpow("x", i),
                (0, j) => xpow("y", j),
                (i, j) => format!("{}*{}", xpow("x", i), xpow("y", j)),
            };
            if mono.is_empty() {
                write!(f, "{}", c)?;
            } else if c.is_one() {
                write!(f, "{}", mono)?;
            } else if c.is_real() {
                write!(f, "{}*{}", c, mono)?;
            } else {
                write!(f, "({})*{}", c, mono)?;
            }
        }
        Ok(())
    }
}

fn xpow(v: &str, e: u32) -> String {
    if e == 1 {
        v.to_string()
    } else {
        format!("{}^{}", v, e)
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// One term of the JSON polynomial format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub c: Scalar,
    pub i: u32,
    pub j: u32,
}

/// `{"terms":[{"c":"p/q+r/s*i","i":..,"j":..},...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    pub terms: Vec<TermJson>,
}

impl Serialize for BiPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for BiPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(BiPoly::from_json(&PolyJson::deserialize(d)?))
    }
}

/// Floating view of a polynomial for Newton-type solvers.
#[derive(Clone, Debug)]
pub struct FloatPoly {
    terms: Vec<(u32, u32, Complex64)>,
    max_i: u32,
    max_j: u32,
}

impl FloatPoly {
    pub fn new(p: &BiPoly) -> Self {
        let terms: Vec<_> = p.terms().map(|(m, c)| (m.i, m.j, c.to_c64())).collect();
        let max_i = terms.iter().map(|t| t.0).max().unwrap_or(0);
        let max_j = terms.iter().map(|t| t.1).max().unwrap_or(0);
        FloatPoly { terms, max_i, max_j }
    }

    pub fn eval(&self, x: Complex64, y: Complex64) -> Complex64 {
        self.eval_grad(x, y).0
    }

    /// Value and both partial derivatives.
    pub fn eval_grad(&self, x: Complex64, y: Complex64) -> (Complex64, Complex64, Complex64) {
        let xp = float_powers(x, self.max_i);
        let yp = float_powers(y, self.max_j);
        let zero = Complex64::new(0.0, 0.0);
        let (mut v, mut dx, mut dy) = (zero, zero, zero);
        for &(i, j, c) in &self.terms {
            let (i, j) = (i as usize, j as usize);
            v += c * xp[i] * yp[j];
            if i > 0 {
                dx += c * (i as f64) * xp[i - 1] * yp[j];
            }
            if j > 0 {
                dy += c * (j as f64) * xp[i] * yp[j - 1];
            }
        }
        (v, dx, dy)
    }
}

fn float_powers(b: Complex64, n: u32) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(1.0, 0.0)];
    for k in 0..n as usize {
        out.push(out[k] * b);
    }
    out
}
