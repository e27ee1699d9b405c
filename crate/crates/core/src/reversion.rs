//! Formal reversion of `F̃ = f̃₁z + Σ_{i≥2} f̃ᵢzⁱ` by comparing coefficients of `zⁱ`.
//!
//! With `g_k = f̃_{k+1}/f̃₁` the coefficient of `zⁱ` in `F̃ʲ` is
//! `f̃₁ʲ Σ_ℓ C(j,ℓ) Σ_{λ} C(ℓ;λ) Π g_k^{λ_k}` over `λ` with `Σ kλ_k = i−j` and `Σ λ_k = ℓ`,
//! which gives `𝒷ᵢ = −Σ_{j<i} 𝒷ⱼ f̃₁^{j−i} (…)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::polyring::{mul_trunc, Field};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReversionError {
    #[error("the linear coefficient vanishes")]
    ZeroLinearTerm,
}

/// `z = Σ_{i=1..N} 𝒷ᵢ F̃ⁱ`. Both vectors are indexed from the linear term.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReversionResult<F> {
    pub coeffs: Vec<F>,
    pub source: Vec<F>,
}

impl<F: Field> ReversionResult<F> {
    /// `𝒷ᵢ` for `i ≥ 1`.
    pub fn b(&self, i: usize) -> &F {
        &self.coeffs[i - 1]
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// `F̃(z(w))` and `z(F̃(u))`, both truncated at the reversion order.
    pub fn compositions(&self) -> (Vec<F>, Vec<F>) {
        let n = self.order();
        (compose_from_one(&self.source, &self.coeffs, n), compose_from_one(&self.coeffs, &self.source, n))
    }

    /// Exact two-sided inverse check.
    pub fn verify(&self) -> bool {
        let n = self.order();
        let mut ident = vec![F::zero(); n];
        if n > 0 {
            ident[0] = F::one();
        }
        let (a, b) = self.compositions();
        a == ident && b == ident
    }
}

/// Falling-factorial multinomial `k(k−1)⋯(k−|λ|+1)/(λ₁!⋯λₙ!)`.
pub fn multinomial(k: &BigRational, lambdas: &[usize]) -> BigRational {
    let total: usize = lambdas.iter().sum();
    let mut acc = <BigRational as One>::one();
    for t in 0..total {
        acc *= k - BigRational::from_integer(BigInt::from(t));
    }
    for &l in lambdas {
        for t in 2..=l {
            acc /= BigRational::from_integer(BigInt::from(t));
        }
    }
    acc
}

/// Partitions of `m` into parts from `allowed` (a part `k` stands for `g_k`), as
/// multiplicity vectors indexed by part.
fn partitions(m: usize, allowed: &[usize]) -> Vec<Vec<usize>> {
    fn rec(rest: usize, idx: usize, allowed: &[usize], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        if idx == allowed.len() {
            return;
        }
        let k = allowed[idx];
        let mut take = 0;
        while take * k <= rest {
            cur[k] = take;
            rec(rest - take * k, idx + 1, allowed, cur, out);
            take += 1;
        }
        cur[k] = 0;
    }
    let mut out = Vec::new();
    let mut cur = vec![0; allowed.iter().copied().max().unwrap_or(0).max(m) + 1];
    rec(m, 0, allowed, &mut cur, &mut out);
    out
}

/// Reversion to order `n` of the series with coefficients `f[0] = f̃₁, f[1] = f̃₂, …`.
pub fn formal_inverse<F: Field>(f: &[F], n: usize) -> Result<ReversionResult<F>, ReversionError> {
    let f1 = f.first().filter(|c| !c.is_zero()).ok_or(ReversionError::ZeroLinearTerm)?;
    let f1inv = f1.recip().ok_or(ReversionError::ZeroLinearTerm)?;
    let g: Vec<F> = (0..n).map(|k| if k < f.len() && k >= 1 { f[k].times(&f1inv) } else { F::zero() }).collect();
    // g[k] = f̃_{k+1}/f̃₁ for k ≥ 1.
    let allowed: Vec<usize> = (1..n).filter(|&k| !g[k].is_zero()).collect();

    // t[m][ℓ] = Σ_{λ ⊢ m, |λ| = ℓ} C(ℓ;λ) Π g_k^{λ_k}.
    let mut gpow: Vec<Vec<F>> = g.iter().map(|gk| vec![F::one(), gk.clone()]).collect();
    let mut t: Vec<Vec<F>> = Vec::with_capacity(n);
    for m in 0..n {
        let mut row = vec![F::zero(); m + 1];
        for lam in partitions(m, &allowed) {
            let ell: usize = lam.iter().sum();
            let coef = multinomial(&BigRational::from_integer(BigInt::from(ell)), &lam);
            let mut prod = F::from_rational(&coef);
            for (k, &l) in lam.iter().enumerate() {
                if l == 0 {
                    continue;
                }
                while gpow[k].len() <= l {
                    let next = gpow[k].last().unwrap().times(&g[k]);
                    gpow[k].push(next);
                }
                prod = prod.times(&gpow[k][l]);
            }
            row[ell] = row[ell].plus(&prod);
        }
        t.push(row);
    }

    let f1inv_pows: Vec<F> = {
        let mut v = vec![F::one()];
        for _ in 0..n {
            let next = v.last().unwrap().times(&f1inv);
            v.push(next);
        }
        v
    };
    let mut b: Vec<F> = vec![F::zero(); n + 1];
    if n >= 1 {
        b[1] = f1inv.clone();
    }
    for i in 2..=n {
        let mut acc = F::zero();
        for j in 1..i {
            if b[j].is_zero() {
                continue;
            }
            let m = i - j;
            let mut inner = F::zero();
            for ell in 0..=j.min(m) {
                if t[m][ell].is_zero() {
                    continue;
                }
                let c = crate::polyring::binom(&BigRational::from_integer(BigInt::from(j)), ell);
                if !Zero::is_zero(&c) {
                    inner = inner.plus(&t[m][ell].scale_rational(&c));
                }
            }
            if !inner.is_zero() {
                acc = acc.plus(&b[j].times(&f1inv_pows[i - j]).times(&inner));
            }
        }
        b[i] = acc.negate();
    }
    b.remove(0);
    let mut source: Vec<F> = f.iter().take(n).cloned().collect();
    source.resize(n, F::zero());
    Ok(ReversionResult { coeffs: b, source })
}

/// `outer(inner(w))` where both series start at the linear term; result to order `n`.
pub fn compose_from_one<F: Field>(outer: &[F], inner: &[F], n: usize) -> Vec<F> {
    // Dense with a zero constant slot.
    let mut inn = vec![F::zero()];
    inn.extend(inner.iter().take(n).cloned());
    let mut acc = vec![F::zero(); n + 1];
    let mut pw = inn.clone();
    for (k, c) in outer.iter().enumerate().take(n) {
        if k > 0 {
            pw = mul_trunc(&pw, &inn, n);
        }
        if c.is_zero() {
            continue;
        }
        for (slot, p) in acc.iter_mut().zip(&pw) {
            if !p.is_zero() {
                *slot = slot.plus(&p.times(c));
            }
        }
    }
    acc.remove(0);
    acc
}
