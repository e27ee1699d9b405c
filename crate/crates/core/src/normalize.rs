//! Canonical form of a Keller pair: support in the triangle with vertices `0, (m,0), (0,m)`,
//! leading part `(x+y)^m` and `J(F,G) = 1`.

use serde::Serialize;

use crate::polyring::{BiPoly, PolyMap, Scalar};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum KellerVerdict {
    Keller {
        j: Scalar,
    },
    /// `witness` is a nonconstant monomial of `J`, absent when `J = 0`.
    NotKeller {
        witness: Option<(Scalar, u32, u32)>,
    },
}

impl KellerVerdict {
    pub fn is_keller(&self) -> bool {
        matches!(self, KellerVerdict::Keller { .. })
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NormalizeError {
    #[error("the map is not Keller")]
    NotKeller,
    #[error("no ell in [{lo}, {hi}] gives a normalized pair")]
    NoValidEll { lo: u32, hi: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub support_in_triangle: bool,
    pub leading_part_ok: bool,
    pub jacobian_one: bool,
}

impl Certificate {
    pub fn all(&self) -> bool {
        self.support_in_triangle && self.leading_part_ok && self.jacobian_one
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormalizedPair {
    #[serde(flatten)]
    pub map: crate::polyring::MapJson,
    #[serde(skip)]
    pub pair: PolyMap,
    pub m: u32,
    /// `0` when no variable change was applied.
    pub ell: u32,
    /// Factor applied to `F`; `G` is multiplied by `1/(scale·J)`.
    pub scale: Scalar,
    pub certificate: Certificate,
}

pub fn is_keller(m: &PolyMap) -> KellerVerdict {
    let j = &m.jac;
    if !j.is_zero() && j.is_constant() {
        return KellerVerdict::Keller { j: j.constant_term() };
    }
    let witness = j.terms().filter(|(mono, _)| mono.i + mono.j > 0).last().map(|(mono, c)| (c.clone(), mono.i, mono.j));
    KellerVerdict::NotKeller { witness }
}

/// Top homogeneous form, i.e. the terms on the edge joining `(d,0)` and `(0,d)`.
pub fn leading_part(f: &BiPoly) -> BiPoly {
    match f.degree() {
        Some(d) => f.homogeneous_part(d),
        None => BiPoly::zero(),
    }
}

fn x_plus_y() -> BiPoly {
    BiPoly::x().add(&BiPoly::y())
}

pub fn certificate(m: &PolyMap) -> Certificate {
    let d = m.f.degree().unwrap_or(0);
    let support_in_triangle = m.f.support().iter().all(|&(i, j)| i + j <= d);
    let leading_part_ok = d > 0 && leading_part(&m.f) == x_plus_y().pow(d);
    let jacobian_one = m.jac == BiPoly::one();
    Certificate { support_in_triangle, leading_part_ok, jacobian_one }
}

/// Apply `(x,y) ↦ (x + (x+y)^ℓ, x+y)` and rescale; returns `None` if the top form of `F` is
/// not proportional to a power of `x+y` afterwards.
pub fn normalize_with_ell(m: &PolyMap, ell: u32) -> Result<Option<NormalizedPair>, NormalizeError> {
    let KellerVerdict::Keller { j } = is_keller(m) else {
        return Err(NormalizeError::NotKeller);
    };
    let s = x_plus_y();
    let changed = m.compose(&BiPoly::x().add(&s.pow(ell)), &s);
    Ok(rescale(&changed, &j, ell))
}

fn rescale(changed: &PolyMap, j: &Scalar, ell: u32) -> Option<NormalizedPair> {
    let d = changed.f.degree()?;
    if d == 0 {
        return None;
    }
    let top = leading_part(&changed.f);
    let c = top.coeff(d, 0);
    let scale = c.inv()?;
    if top.scale(&scale) != x_plus_y().pow(d) {
        return None;
    }
    let gscale = (&scale * j).inv()?;
    let pair = PolyMap::new(changed.f.scale(&scale), changed.g.scale(&gscale));
    let cert = certificate(&pair);
    cert.all().then(|| NormalizedPair { map: (&pair).into(), pair, m: d, ell, scale, certificate: cert })
}

/// Smallest admissible `ℓ ≥ 2` with `ℓ > deg F`, up to `deg F + deg G + 2`.
pub fn normalize_keller(m: &PolyMap) -> Result<NormalizedPair, NormalizeError> {
    let KellerVerdict::Keller { j } = is_keller(m) else {
        return Err(NormalizeError::NotKeller);
    };
    let cert = certificate(m);
    if cert.all() {
        let d = m.f.degree().unwrap();
        return Ok(NormalizedPair {
            map: m.into(),
            pair: m.clone(),
            m: d,
            ell: 0,
            scale: Scalar::one(),
            certificate: cert,
        });
    }
    // Rescaling alone may suffice.
    if let Some(p) = rescale(m, &j, 0) {
        return Ok(p);
    }
    let df = m.f.degree().unwrap_or(0);
    let dg = m.g.degree().unwrap_or(0);
    let lo = (df + 1).max(2);
    let hi = df + dg + 2;
    for ell in lo..=hi {
        if let Some(p) = normalize_with_ell(m, ell)? {
            return Ok(p);
        }
    }
    Err(NormalizeError::NoValidEll { lo, hi })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(k: i64) -> Scalar {
        Scalar::from_int(k)
    }

    #[test]
    fn keller_examples() {
        assert_eq!(is_keller(&PolyMap::new(BiPoly::x(), BiPoly::y())), KellerVerdict::Keller { j: s(1) });
        let m = PolyMap::new(BiPoly::x().pow(2), BiPoly::y().add(&BiPoly::x()));
        assert_eq!(is_keller(&m), KellerVerdict::NotKeller { witness: Some((s(2), 1, 0)) });
        assert_eq!(is_keller(&PolyMap::e2()), KellerVerdict::Keller { j: s(1) });
    }

    #[test]
    fn normalize_examples() {
        let m = PolyMap::new(BiPoly::x(), BiPoly::y().add(&BiPoly::x().pow(2)));
        let n = normalize_keller(&m).unwrap();
        let f = BiPoly::x().add(&x_plus_y().pow(2));
        let g = x_plus_y().add(&f.pow(2));
        assert_eq!((n.pair.f.clone(), n.pair.g.clone(), n.m, n.ell), (f, g, 2, 2));
        assert!(n.certificate.all());

        let e2 = PolyMap::e2();
        let n = normalize_keller(&e2).unwrap();
        assert_eq!((n.pair.clone(), n.ell), (e2, 0));

        let m = PolyMap::new(BiPoly::x(), BiPoly::y().add(&BiPoly::x().pow(3)));
        let n3 = normalize_with_ell(&m, 3).unwrap().unwrap();
        assert_eq!(n3.pair.jac, BiPoly::one());
        assert!(n3.certificate.all());
    }

    #[test]
    fn jacobian_rescaled_to_one() {
        let m = PolyMap::new(BiPoly::x().scale(&s(3)), BiPoly::y().scale(&s(2)));
        let n = normalize_keller(&m).unwrap();
        assert_eq!(n.pair.jac, BiPoly::one());
        assert!(n.certificate.all());
    }

    #[test]
    fn leading_part_examples() {
        assert_eq!(leading_part(&PolyMap::e2().f), x_plus_y().pow(2));
        assert_eq!(leading_part(&x_plus_y().pow(3)), x_plus_y().pow(3));
        assert_eq!(leading_part(&BiPoly::x().pow(2).add(&BiPoly::y())), BiPoly::x().pow(2));
    }

    #[test]
    fn not_keller_rejected() {
        let m = PolyMap::new(BiPoly::x().pow(2), BiPoly::y());
        assert_eq!(normalize_keller(&m), Err(NormalizeError::NotKeller));
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(16))]

        #[test]
        fn triangular_maps_normalize(a in -3i64..=3, b in -2i64..=2, k in 1u32..=3, c in 1i64..=3) {
            // (c·x + a·y^k, y/c + b) composed with a shear is Keller with J = 1.
            let f = BiPoly::x().scale(&s(c)).add(&BiPoly::y().pow(k).scale(&s(a)));
            let g = BiPoly::y().scale(&Scalar::from_ratio(1, c)).add(&BiPoly::constant(s(b)));
            let n = normalize_keller(&PolyMap::new(f, g)).unwrap();
            proptest::prop_assert!(n.certificate.all());
            proptest::prop_assert!(n.pair.jac_consistent());
            let again = normalize_keller(&n.pair).unwrap();
            proptest::prop_assert_eq!(again.pair, n.pair);
        }
    }
}
