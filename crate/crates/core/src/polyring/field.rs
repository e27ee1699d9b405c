//! Minimal field abstraction and dense truncated power-series kernels shared by the
//! series, reversion and majorant modules.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::Scalar;

pub trait Field: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negate(&self) -> Self;
    fn recip(&self) -> Option<Self>;
    fn from_rational(r: &BigRational) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn from_int(k: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(k)))
    }

    fn scale_rational(&self, r: &BigRational) -> Self {
        self.times(&Self::from_rational(r))
    }

    /// Integer power; `None` for a negative power of zero.
    fn powi(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.times(&base);
        }
        Some(acc)
    }
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negate(&self) -> Self {
        -self.clone()
    }
    fn recip(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| BigRational::recip(self))
    }
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }
}

impl Field for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negate(&self) -> Self {
        -self
    }
    fn recip(&self) -> Option<Self> {
        self.inv()
    }
    fn from_rational(r: &BigRational) -> Self {
        Scalar::real(r.clone())
    }
    fn scale_rational(&self, r: &BigRational) -> Self {
        self.scale(r)
    }
}

/// Generalized binomial coefficient `C(a, i)` for rational `a`.
pub fn binom(a: &BigRational, i: usize) -> BigRational {
    let mut acc = <BigRational as One>::one();
    for t in 0..i {
        acc = acc * (a - BigRational::from_integer(BigInt::from(t))) / BigRational::from_integer(BigInt::from(t + 1));
    }
    acc
}

/// Coefficients `0..=n` of the product of two dense series.
pub fn mul_trunc<F: Field>(a: &[F], b: &[F], n: usize) -> Vec<F> {
    let mut out = vec![F::zero(); n + 1];
    for (i, ai) in a.iter().enumerate().take(n + 1) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(n + 1 - i) {
            if !bj.is_zero() {
                out[i + j] = out[i + j].plus(&ai.times(bj));
            }
        }
    }
    out
}

/// `h^β` to order `n` for a dense series with `h[0] = 1`, by the recurrence
/// `k g_k = Σ_{j=1..k} ((β+1) j − k) h_j g_{k−j}`.
pub fn pow_unit<F: Field>(h: &[F], beta: &BigRational, n: usize) -> Vec<F> {
    debug_assert!(h.first().is_some_and(F::is_one));
    let mut g = vec![F::one()];
    let bp1 = beta + <BigRational as One>::one();
    for k in 1..=n {
        let mut acc = F::zero();
        for j in 1..=k.min(h.len().saturating_sub(1)) {
            if h[j].is_zero() || g[k - j].is_zero() {
                continue;
            }
            let w = &bp1 * BigRational::from_integer(BigInt::from(j)) - BigRational::from_integer(BigInt::from(k));
            if Zero::is_zero(&w) {
                continue;
            }
            acc = acc.plus(&h[j].times(&g[k - j]).scale_rational(&w));
        }
        g.push(acc.scale_rational(&BigRational::new(BigInt::one(), BigInt::from(k))));
    }
    g
}

/// Multiplicative inverse to order `n`; `None` if the constant term vanishes.
pub fn inverse_trunc<F: Field>(a: &[F], n: usize) -> Option<Vec<F>> {
    let a0inv = a.first()?.recip()?;
    let mut out: Vec<F> = Vec::with_capacity(n + 1);
    out.push(a0inv.clone());
    for k in 1..=n {
        let mut acc = F::zero();
        for j in 1..=k.min(a.len().saturating_sub(1)) {
            acc = acc.plus(&a[j].times(&out[k - j]));
        }
        out.push(acc.times(&a0inv).negate());
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::rat;

    #[test]
    fn pow_unit_matches_binomial_series() {
        let h = vec![rat(1, 1), rat(1, 1)];
        let g = pow_unit(&h, &rat(1, 2), 4);
        let expect: Vec<BigRational> = (0..=4).map(|i| binom(&rat(1, 2), i)).collect();
        assert_eq!(g, expect);
    }

    #[test]
    fn inverse_of_one_minus_y() {
        let a = vec![rat(1, 1), rat(-1, 1)];
        assert_eq!(inverse_trunc(&a, 5).unwrap(), vec![rat(1, 1); 6]);
    }
}
