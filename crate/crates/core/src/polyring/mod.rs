//! Exact bivariate polynomial arithmetic, Jacobians, substitution and evaluation.

mod bipoly;
mod field;
mod scalar;
mod upoly;

use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use bipoly::{BiPoly, FloatPoly, Mono, PolyJson, TermJson};
pub use field::{binom, inverse_trunc, mul_trunc, pow_unit, Field};
pub use scalar::{parse_rational, principal_pow, rat, rat_to_f64, rational_root_pow, ParseScalarError, Scalar};
pub use upoly::UPoly;

/// A point of ℂ² with exact coordinates.
pub type Point = (Scalar, Scalar);
/// A point of ℂ² in floating point.
pub type CPoint = (Complex64, Complex64);

/// `F_x G_y − F_y G_x`.
pub fn jacobian_det(f: &BiPoly, g: &BiPoly) -> BiPoly {
    f.partial_x().mul(&g.partial_y()).sub(&f.partial_y().mul(&g.partial_x()))
}

/// `P(X(x,y), Y(x,y))`, expanded.
pub fn substitute_map(p: &BiPoly, x: &BiPoly, y: &BiPoly) -> BiPoly {
    p.substitute(x, y)
}

pub fn support(f: &BiPoly) -> BTreeSet<(u32, u32)> {
    f.support()
}

/// A polynomial map `(F, G)` with its Jacobian determinant cached.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMap {
    pub f: BiPoly,
    pub g: BiPoly,
    pub jac: BiPoly,
}

impl PolyMap {
    pub fn new(f: BiPoly, g: BiPoly) -> Self {
        let jac = jacobian_det(&f, &g);
        PolyMap { f, g, jac }
    }

    /// Recompute the Jacobian and compare with the cached one.
    pub fn jac_consistent(&self) -> bool {
        jacobian_det(&self.f, &self.g) == self.jac
    }

    /// Compose with a polynomial change of variables `(x, y) ↦ (X, Y)`.
    pub fn compose(&self, x: &BiPoly, y: &BiPoly) -> PolyMap {
        PolyMap::new(self.f.substitute(x, y), self.g.substitute(x, y))
    }

    pub fn to_float(&self) -> FloatMap {
        FloatMap { f: self.f.to_float(), g: self.g.to_float() }
    }

    /// The running normalized Keller example `(x + (x+y)², x + y)`.
    pub fn e2() -> PolyMap {
        let s = BiPoly::x().add(&BiPoly::y());
        PolyMap::new(BiPoly::x().add(&s.pow(2)), s)
    }
}

/// Evaluate `(F(p), G(p))` exactly.
pub fn eval_map(m: &PolyMap, p: &Point) -> Point {
    (m.f.eval(&p.0, &p.1), m.g.eval(&p.0, &p.1))
}

/// Evaluate `(F(p), G(p))` in floating point.
pub fn eval_map_c64(m: &PolyMap, p: CPoint) -> CPoint {
    (m.f.eval_c64(p.0, p.1), m.g.eval_c64(p.0, p.1))
}

/// Floating view of a map with gradients, used by the Newton solvers.
#[derive(Clone, Debug)]
pub struct FloatMap {
    pub f: FloatPoly,
    pub g: FloatPoly,
}

impl FloatMap {
    pub fn eval(&self, p: CPoint) -> CPoint {
        (self.f.eval(p.0, p.1), self.g.eval(p.0, p.1))
    }

    /// Values and Jacobian matrix `[[F_x, F_y], [G_x, G_y]]`.
    pub fn eval_jac(&self, p: CPoint) -> (CPoint, [[Complex64; 2]; 2]) {
        let (fv, fx, fy) = self.f.eval_grad(p.0, p.1);
        let (gv, gx, gy) = self.g.eval_grad(p.0, p.1);
        ((fv, gv), [[fx, fy], [gx, gy]])
    }
}

/// JSON form of a map: `{"F": poly, "G": poly}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapJson {
    #[serde(rename = "F")]
    pub f: BiPoly,
    #[serde(rename = "G")]
    pub g: BiPoly,
}

impl From<&PolyMap> for MapJson {
    fn from(m: &PolyMap) -> Self {
        MapJson { f: m.f.clone(), g: m.g.clone() }
    }
}

impl From<MapJson> for PolyMap {
    fn from(m: MapJson) -> Self {
        PolyMap::new(m.f, m.g)
    }
}

/// Float scalar in the `{"re":..,"im":..}` JSON format.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FloatScalar {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for FloatScalar {
    fn from(z: Complex64) -> Self {
        FloatScalar { re: z.re, im: z.im }
    }
}

impl From<FloatScalar> for Complex64 {
    fn from(z: FloatScalar) -> Self {
        Complex64::new(z.re, z.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn jacobian_examples() {
        assert_eq!(jacobian_det(&BiPoly::x(), &BiPoly::y()), BiPoly::one());
        let f = BiPoly::x().pow(2);
        let g = BiPoly::y().add(&BiPoly::x());
        assert_eq!(jacobian_det(&f, &g), BiPoly::monomial(s(2), 1, 0));
        let e2 = PolyMap::e2();
        assert_eq!(e2.jac, BiPoly::one());
    }

    #[test]
    fn substitution_examples() {
        let e2 = PolyMap::e2();
        assert_eq!(substitute_map(&BiPoly::x(), &e2.f, &e2.g), e2.f);
        let xy = BiPoly::x().mul(&BiPoly::y());
        assert_eq!(substitute_map(&xy, &BiPoly::x(), &BiPoly::x()), BiPoly::x().pow(2));
    }

    #[test]
    fn chain_rule_cubic_change() {
        let f = BiPoly::from_int_terms(&[(1, 2, 1), (-3, 0, 1), (2, 1, 0)]);
        let g = BiPoly::from_int_terms(&[(1, 0, 3), (5, 1, 1), (1, 0, 0)]);
        let sum = BiPoly::x().add(&BiPoly::y());
        let phi_x = BiPoly::x().add(&sum.pow(3));
        let phi_y = sum;
        let lhs = jacobian_det(&f.substitute(&phi_x, &phi_y), &g.substitute(&phi_x, &phi_y));
        let rhs = jacobian_det(&f, &g).substitute(&phi_x, &phi_y).mul(&jacobian_det(&phi_x, &phi_y));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn eval_examples() {
        let id = PolyMap::new(BiPoly::x(), BiPoly::y());
        assert_eq!(eval_map(&id, &(s(3), s(4))), (s(3), s(4)));
        let m = PolyMap::new(BiPoly::x().pow(2), BiPoly::y().add(&BiPoly::x()));
        assert_eq!(eval_map(&m, &(s(1), s(0))), (s(1), s(1)));
        assert_eq!(eval_map(&m, &(s(-1), s(2))), (s(1), s(1)));
    }

    #[test]
    fn support_examples() {
        assert!(support(&BiPoly::zero()).is_empty());
        let f = PolyMap::e2().f;
        assert_eq!(support(&f), [(1, 0), (2, 0), (1, 1), (0, 2)].into_iter().collect());
        let c = BiPoly::x().add(&BiPoly::y()).pow(3);
        assert_eq!(support(&c), [(3, 0), (2, 1), (1, 2), (0, 3)].into_iter().collect());
    }

    #[test]
    fn json_round_trip() {
        let f = PolyMap::e2().f.add(&BiPoly::monomial(Scalar::complex((1, 2), (-3, 4)), 0, 0));
        let text = serde_json::to_string(&f).unwrap();
        assert!(text.contains("\"c\":\"1/2-3/4*i\""));
        let back: BiPoly = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
    }
}
