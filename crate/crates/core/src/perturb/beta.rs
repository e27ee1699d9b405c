//! The second-order coefficient `β̃` of the band margin along the tangent direction.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::PerturbError;

type C = Complex64;

const TANGENCY_TOL: f64 = 1e-9;

/// `κ₁..κ₆` of the band `1 ≤ |x₁| ≤ κ₁|x₀| + κ₂ ≤ κ₃|x₁| + κ₄` and objective `κ₅^{|x₁|}|y₁|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Kappa(pub [f64; 6]);

impl Kappa {
    /// 1-based access.
    pub fn k(&self, i: usize) -> f64 {
        self.0[i - 1]
    }

    pub fn validate(&self) -> Result<(), PerturbError> {
        let bad = |m: &str| Err(PerturbError::InvalidKappa(m.into()));
        if self.0.iter().any(|k| !k.is_finite() || *k < 0.0) {
            return bad("kappa must be finite and nonnegative");
        }
        if self.k(1) == 0.0 || self.k(5) == 0.0 {
            return bad("kappa1 and kappa5 must be positive");
        }
        if self.k(3) >= 1.0 {
            return bad("kappa3 < 1 required");
        }
        if self.k(2) >= 1.0 {
            return bad("kappa2 < 1 required");
        }
        if self.k(2) >= self.k(4) {
            return bad("kappa2 < kappa4 required");
        }
        Ok(())
    }
}

/// `s = α̃₁u + (α̃₂u² + α̃₃w)ε` along the tangent direction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TangentFrame {
    pub alpha1: C,
    pub alpha2: C,
    pub alpha3: C,
    pub w: C,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BetaCoefficient {
    /// `β̃₁ + β̃₂`.
    pub beta_tilde: f64,
    /// Coefficient of `(Re u)²ε²`.
    pub beta1: f64,
    /// Coefficient of `(Im u)²ε²`.
    pub beta2: f64,
    /// `κ₂(κ₂ + κ₁|x₀|)/(2κ₁|x₀|)` when `|x₁| = κ₁|x₀| + κ₂`.
    pub closed_form: Option<f64>,
}

pub fn closed_form_beta(kappa: &Kappa, x0_abs: f64) -> f64 {
    let k = kappa.k(1) * x0_abs;
    kappa.k(2) * (kappa.k(2) + k) / (2.0 * k)
}

/// `|1 + z| − 1` without cancellation.
fn dabs(z: C) -> f64 {
    (2.0 * z.re + z.norm_sqr()) / ((C::new(1.0, 0.0) + z).norm() + 1.0)
}

/// Band margin `κ₁|x₀||1+sε| + κ₂ − |x₁||1+uε|` with its value at `ε = 0` removed.
fn margin(tf: &TangentFrame, k: f64, x1_abs: f64, u: C, eps: f64) -> f64 {
    let s = tf.alpha1 * u + (tf.alpha2 * u * u + tf.alpha3 * tf.w) * eps;
    k * dabs(s * eps) - x1_abs * dabs(u * eps)
}

fn second_coeff(tf: &TangentFrame, k: f64, x1_abs: f64, dir: C, eps: f64) -> f64 {
    let f = |u: C| margin(tf, k, x1_abs, u, eps);
    (f(dir) - 2.0 * f(C::new(0.0, 0.0)) + f(-dir)) / (2.0 * eps * eps)
}

/// `β̃₁`, `β̃₂` by central differences in `u`, Richardson-extrapolated in `ε`.
pub fn beta_coefficient(
    tf: &TangentFrame,
    kappa: &Kappa,
    x0_abs: f64,
    x1_abs: f64,
) -> Result<BetaCoefficient, PerturbError> {
    kappa.validate()?;
    let k = kappa.k(1) * x0_abs;
    let expected = x1_abs / k;
    if (tf.alpha1 - expected).norm() > TANGENCY_TOL * (1.0 + expected) {
        return Err(PerturbError::TangencyNotMet { alpha1: format!("{}", tf.alpha1), expected });
    }
    let coeff = |dir: C| {
        let (e, e2, e4) = (1e-3, 5e-4, 2.5e-4);
        let (a, b, c) = (
            second_coeff(tf, k, x1_abs, dir, e),
            second_coeff(tf, k, x1_abs, dir, e2),
            second_coeff(tf, k, x1_abs, dir, e4),
        );
        let (r1, r2) = (2.0 * b - a, 2.0 * c - b);
        (4.0 * r2 - r1) / 3.0
    };
    let beta1 = coeff(C::new(1.0, 0.0));
    let beta2 = coeff(C::new(0.0, 1.0));
    let tight = (x1_abs - (k + kappa.k(2))).abs() <= TANGENCY_TOL * (1.0 + x1_abs);
    Ok(BetaCoefficient {
        beta_tilde: beta1 + beta2,
        beta1,
        beta2,
        closed_form: tight.then(|| closed_form_beta(kappa, x0_abs)),
    })
}
