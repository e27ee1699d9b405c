//! Shared generators and oracles for the integration tests.
#![allow(dead_code)]

use keller_core::polyring::{rat, BiPoly, Point, PolyMap, Scalar};
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64, d: i64) -> Scalar {
    Scalar::real(rat(n, d))
}

/// Reversion of `Σ_{i≥1} f_{i−1} zⁱ` by the fixed point `z ← (w − Σ_{i≥2} f_{i−1} zⁱ)/f₀`,
/// with its own schoolbook series product. Returns coefficients of `w¹..wⁿ`.
pub fn fixed_point_inverse(f: &[BigRational], n: usize) -> Vec<BigRational> {
    let mul = |a: &[BigRational], b: &[BigRational]| {
        let mut out = vec![BigRational::zero(); n + 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                if i + j <= n {
                    out[i + j] += x * y;
                }
            }
        }
        out
    };
    let mut z = vec![BigRational::zero(); n + 1];
    for _ in 0..=n {
        let mut rhs = vec![BigRational::zero(); n + 1];
        rhs[1] = rat(1, 1);
        let mut zp = z.clone();
        for c in f.iter().skip(1) {
            zp = mul(&zp, &z);
            for k in 0..=n {
                rhs[k] -= c * &zp[k];
            }
        }
        z = rhs.iter().map(|r| r / &f[0]).collect();
    }
    z[1..].to_vec()
}

/// `[â₁, â₂, …]` with `â₁ ∈ (0, 2]`, degree ≤ 6, coefficients in `[0, 3]` on a quarter grid.
pub fn random_majorant(r: &mut ChaCha8Rng) -> Vec<BigRational> {
    let deg = r.gen_range(1..=6);
    let mut c = vec![rat(r.gen_range(1..=8), 4)];
    for _ in 1..deg {
        c.push(rat(r.gen_range(0..=12), 4));
    }
    c
}

/// A triangular Jacobian pair `(c·x + p(y), y/c + b)` with `deg p ∈ {1, 2}`, never already
/// normalized.
pub fn random_triangular(r: &mut ChaCha8Rng) -> PolyMap {
    let c = loop {
        let c = r.gen_range(-3i64..=3);
        if c != 0 {
            break c;
        }
    };
    let k = r.gen_range(1..=2u32);
    let mut f = BiPoly::monomial(Scalar::from_int(c), 1, 0);
    for j in 0..k {
        f = f.add(&BiPoly::monomial(Scalar::from_int(r.gen_range(-3..=3)), 0, j));
    }
    let lead = loop {
        let a = r.gen_range(-3i64..=3);
        if a != 0 && !(k == 1 && a == c) {
            break a;
        }
    };
    f = f.add(&BiPoly::monomial(Scalar::from_int(lead), 0, k));
    let g =
        BiPoly::monomial(Scalar::from_ratio(1, c), 0, 1).add(&BiPoly::constant(Scalar::from_int(r.gen_range(-3..=3))));
    PolyMap::new(f, g)
}

pub fn random_point(r: &mut ChaCha8Rng) -> Point {
    (q(r.gen_range(-40..=40), r.gen_range(1..=7)), q(r.gen_range(-40..=40), r.gen_range(1..=7)))
}

/// E2 pair family with `β₀ = s`: `p₀ = (11s/10, −s/10)`, `p₁ = (6s/5, −3s/20)`.
pub fn scaled_pair(s: i64) -> (Point, Point) {
    ((q(11 * s, 10), q(-s, 10)), (q(6 * s, 5), q(-3 * s, 20)))
}

/// Same `β₀ = s` with `y₁ = y₀` for the second case: `p₁ = (23s/20, −s/10)`.
pub fn scaled_pair_case2(s: i64) -> (Point, Point) {
    ((q(11 * s, 10), q(-s, 10)), (q(23 * s, 20), q(-s, 10)))
}

/// `(x², y + x)`, which identifies `(a, b)` and `(−a, b + 2a)`.
pub fn fold() -> PolyMap {
    PolyMap::new(BiPoly::x().pow(2), BiPoly::y().add(&BiPoly::x()))
}
