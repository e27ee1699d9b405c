//! One constrained step from a point pair to a nearby pair with the same image.
//!
//! The free parameters are `θ = (Re u, Im u, Re v, Im v)`; `q₁ = φ₁(uε, vε)` and `q₀` is the
//! local inverse of `σ(q₁)` near `p₀`, found by Newton from the linear prediction.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{FrameStyle, Kappa, PerturbError};
use crate::polyring::{CPoint, FloatMap, FloatScalar};

type C = Complex64;

const NEWTON_MAX: usize = 60;
const PIN_TOL: f64 = 1e-8;
const FD_STEP: f64 = 1e-6;
const TIGHT: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "PairJson", from = "PairJson")]
pub struct WitnessPair {
    pub p0: CPoint,
    pub p1: CPoint,
}

#[derive(Clone, Copy, Serialize, Deserialize)]
struct PairJson {
    p0: [FloatScalar; 2],
    p1: [FloatScalar; 2],
}

impl From<WitnessPair> for PairJson {
    fn from(w: WitnessPair) -> Self {
        PairJson { p0: [w.p0.0.into(), w.p0.1.into()], p1: [w.p1.0.into(), w.p1.1.into()] }
    }
}

impl From<PairJson> for WitnessPair {
    fn from(j: PairJson) -> Self {
        WitnessPair { p0: (j.p0[0].into(), j.p0[1].into()), p1: (j.p1[0].into(), j.p1[1].into()) }
    }
}

impl WitnessPair {
    pub fn residual(&self, m: &FloatMap) -> f64 {
        let (a, b) = (m.eval(self.p0), m.eval(self.p1));
        ((a.0 - b.0).norm_sqr() + (a.1 - b.1).norm_sqr()).sqrt()
    }

    pub fn separation(&self) -> f64 {
        ((self.p0.0 - self.p1.0).norm_sqr() + (self.p0.1 - self.p1.1).norm_sqr()).sqrt()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coord {
    X0,
    Y0,
    X1,
    Y1,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepConstraint {
    KeepAbs {
        coord: Coord,
        value: f64,
    },
    IncreaseAbs {
        coord: Coord,
    },
    /// Decrease `|x₀ − ξ₀|² + |x₁ − ξ₁|²`.
    DecreaseMetric {
        xi0: FloatScalar,
        xi1: FloatScalar,
    },
    /// Increase `κ₅^{|x₁|}|y₁|` without band constraints.
    IncreaseD {
        kappa5: f64,
    },
    /// Increase `κ₅^{|x₁|}|y₁|` inside `1 ≤ |x₁| ≤ κ₁|x₀| + κ₂ ≤ κ₃|x₁| + κ₄`.
    KappaBand {
        kappa: [f64; 6],
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StepOptions {
    pub eps: f64,
    pub max_halvings: usize,
    /// Bound on `|u|`, `|v|`.
    pub s_bound: f64,
    pub tol: f64,
    pub style: FrameStyle,
    /// Centre for the scaled style.
    pub xi: Option<[FloatScalar; 2]>,
}

impl Default for StepOptions {
    fn default() -> Self {
        StepOptions { eps: 1e-3, max_halvings: 10, s_bound: 10.0, tol: 1e-10, style: FrameStyle::Additive, xi: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Ansatz {
    Direct,
    Scaled { k: u32 },
    Imaginary { i0: u32 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Margin {
    pub name: String,
    pub value: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StepResult {
    pub pair: WitnessPair,
    pub s: FloatScalar,
    pub t: FloatScalar,
    pub u: FloatScalar,
    pub v: FloatScalar,
    pub w: Option<FloatScalar>,
    pub ansatz: Ansatz,
    pub eps: f64,
    pub residual: f64,
    pub margins: Vec<Margin>,
}

#[derive(Clone, Copy, Debug)]
struct State {
    q0: CPoint,
    q1: CPoint,
    residual: f64,
}

impl State {
    fn coord(&self, c: Coord) -> C {
        match c {
            Coord::X0 => self.q0.0,
            Coord::Y0 => self.q0.1,
            Coord::X1 => self.q1.0,
            Coord::Y1 => self.q1.1,
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum Ineq {
    X1AtLeastOne,
    Upper { k1: f64, k2: f64 },
    Band { k1: f64, k2: f64, k3: f64, k4: f64 },
}

impl Ineq {
    fn name(&self) -> &'static str {
        match self {
            Ineq::X1AtLeastOne => "|x1| - 1",
            Ineq::Upper { .. } => "k1|x0| + k2 - |x1|",
            Ineq::Band { .. } => "k3|x1| + k4 - k1|x0| - k2",
        }
    }

    fn value(&self, s: &State) -> f64 {
        let (ax0, ax1) = (s.q0.0.norm(), s.q1.0.norm());
        match *self {
            Ineq::X1AtLeastOne => ax1 - 1.0,
            Ineq::Upper { k1, k2 } => k1 * ax0 + k2 - ax1,
            Ineq::Band { k1, k2, k3, k4 } => k3 * ax1 + k4 - k1 * ax0 - k2,
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum Pin {
    Abs(Coord, f64),
    Ineq(Ineq, f64),
}

#[derive(Clone, Copy, Debug)]
enum Obj {
    Abs(Coord),
    Metric(C, C),
    Kappa(f64),
}

impl Obj {
    fn name(&self) -> String {
        match self {
            Obj::Abs(c) => format!("increase |{c:?}|").to_lowercase(),
            Obj::Metric(..) => "decrease metric".into(),
            Obj::Kappa(_) => "increase k5^|x1| |y1|".into(),
        }
    }

    /// Larger is better.
    fn value(&self, s: &State) -> f64 {
        match *self {
            Obj::Abs(c) => s.coord(c).norm(),
            Obj::Metric(a, b) => -((s.q0.0 - a).norm_sqr() + (s.q1.0 - b).norm_sqr()),
            Obj::Kappa(k5) => s.q1.0.norm() * k5.ln() + s.q1.1.norm().ln(),
        }
    }
}

fn solve2(m: [[C; 2]; 2], r: CPoint) -> Option<CPoint> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if det.norm() < 1e-300 {
        return None;
    }
    Some(((m[1][1] * r.0 - m[0][1] * r.1) / det, (m[0][0] * r.1 - m[1][0] * r.0) / det))
}

/// Gaussian elimination with partial pivoting on a small dense system.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

/// `Jᵀ(JJᵀ)⁻¹r` for a `k × n` matrix `J`.
fn min_norm(j: &[Vec<f64>], r: &[f64]) -> Option<Vec<f64>> {
    let k = j.len();
    let n = j.first().map_or(0, |row| row.len());
    let jjt: Vec<Vec<f64>> =
        (0..k).map(|a| (0..k).map(|b| (0..n).map(|c| j[a][c] * j[b][c]).sum()).collect()).collect();
    let y = solve_dense(jjt, r.to_vec())?;
    Some((0..n).map(|c| (0..k).map(|a| j[a][c] * y[a]).sum()).collect())
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn float_scales(style: FrameStyle, pair: &WitnessPair, xi: Option<[FloatScalar; 2]>) -> Result<[C; 4], PerturbError> {
    let one = C::new(1.0, 0.0);
    let nz = |z: C, what: &str| {
        if z.norm() == 0.0 {
            Err(PerturbError::StylePrecondition(format!("{what} must be nonzero")))
        } else {
            Ok(z)
        }
    };
    Ok(match style {
        FrameStyle::Additive => [one; 4],
        FrameStyle::MultX => [nz(pair.p0.0, "x0")?, one, nz(pair.p1.0, "x1")?, one],
        FrameStyle::MultXy => [nz(pair.p0.0, "x0")?, one, nz(pair.p1.0, "x1")?, nz(pair.p1.1, "y1")?],
        FrameStyle::ScaledA0a1 => {
            let xi = xi.ok_or_else(|| PerturbError::StylePrecondition("scaled style needs xi".into()))?;
            let a = |x: C, c: FloatScalar| {
                let d = x - C::from(c);
                if d.norm() == 0.0 {
                    one
                } else {
                    d
                }
            };
            [a(pair.p0.0, xi[0]), one, a(pair.p1.0, xi[1]), one]
        }
    })
}

struct Engine<'a> {
    map: &'a FloatMap,
    pair: WitnessPair,
    sc: [C; 4],
    eps: f64,
    pins: Vec<Pin>,
    objs: Vec<Obj>,
    ineqs: Vec<(Ineq, f64)>,
    sigma0: CPoint,
    jac0: [[C; 2]; 2],
}

impl Engine<'_> {
    fn uv(th: &[f64; 4]) -> (C, C) {
        (C::new(th[0], th[1]), C::new(th[2], th[3]))
    }

    fn state(&self, th: &[f64; 4]) -> Option<State> {
        let (u, v) = Self::uv(th);
        let p = &self.pair;
        let q1 = (p.p1.0 + self.sc[2] * u * self.eps, p.p1.1 + self.sc[3] * v * self.eps);
        let target = self.map.eval(q1);
        let d = solve2(self.jac0, (target.0 - self.sigma0.0, target.1 - self.sigma0.1))?;
        let mut q = (p.p0.0 + d.0, p.p0.1 + d.1);
        let mut done = false;
        for _ in 0..NEWTON_MAX {
            let (val, j) = self.map.eval_jac(q);
            let step = solve2(j, (val.0 - target.0, val.1 - target.1))?;
            q = (q.0 - step.0, q.1 - step.1);
            let scale = 1.0 + q.0.norm() + q.1.norm();
            if step.0.norm() + step.1.norm() <= 1e-15 * scale {
                done = true;
                break;
            }
        }
        if !done || !(q.0.is_finite() && q.1.is_finite()) {
            return None;
        }
        let w = WitnessPair { p0: q, p1: q1 };
        Some(State { q0: q, q1, residual: w.residual(self.map) })
    }

    fn pin_values(&self, s: &State) -> Vec<f64> {
        self.pins
            .iter()
            .map(|p| match *p {
                Pin::Abs(c, v) => s.coord(c).norm() - v,
                Pin::Ineq(q, v) => q.value(s) - v,
            })
            .collect()
    }

    fn objective(&self, s: &State) -> Vec<f64> {
        self.objs.iter().map(|o| o.value(s)).collect()
    }

    /// Central-difference Jacobian of `f` in the coordinates listed in `free`.
    fn jacobian<F: Fn(&State) -> Vec<f64>>(&self, th: &[f64; 4], free: &[usize], f: F) -> Option<Vec<Vec<f64>>> {
        let mut cols = Vec::with_capacity(free.len());
        for &k in free {
            let (mut a, mut b) = (*th, *th);
            a[k] += FD_STEP;
            b[k] -= FD_STEP;
            let (fa, fb) = (f(&self.state(&a)?), f(&self.state(&b)?));
            cols.push(fa.iter().zip(&fb).map(|(x, y)| (x - y) / (2.0 * FD_STEP)).collect::<Vec<_>>());
        }
        let rows = cols.first().map_or(0, |c| c.len());
        Some((0..rows).map(|r| cols.iter().map(|c| c[r]).collect()).collect())
    }

    /// Min-norm Gauss–Newton on the pins over the `free` coordinates.
    fn enforce_pins(&self, mut th: [f64; 4], free: &[usize]) -> Option<[f64; 4]> {
        if self.pins.is_empty() {
            return Some(th);
        }
        if self.pins.len() > free.len() {
            return None;
        }
        for _ in 0..40 {
            let s = self.state(&th)?;
            let g = self.pin_values(&s);
            if g.iter().all(|x| x.abs() <= 1e-13) {
                return Some(th);
            }
            let j = self.jacobian(&th, free, |s| self.pin_values(s))?;
            let d = min_norm(&j, &g)?;
            for (k, &i) in free.iter().enumerate() {
                th[i] -= d[k];
            }
        }
        let s = self.state(&th)?;
        self.pin_values(&s).iter().all(|x| x.abs() <= PIN_TOL).then_some(th)
    }

    fn accept(&self, th: &[f64; 4], base: &[f64], opts: &StepOptions) -> Option<State> {
        let (u, v) = Self::uv(th);
        if u.norm() > opts.s_bound || v.norm() > opts.s_bound {
            return None;
        }
        let s = self.state(th)?;
        if s.residual > opts.tol {
            return None;
        }
        if self.pin_values(&s).iter().any(|x| x.abs() > PIN_TOL) {
            return None;
        }
        let improved = self.objective(&s).iter().zip(base).all(|(new, old)| new - old > 1e-13 * (1.0 + old.abs()));
        if !improved {
            return None;
        }
        self.ineqs.iter().all(|(q, b)| q.value(&s) >= b.min(0.0) - PIN_TOL).then_some(s)
    }

    /// Steepest ascent of the summed, normalized objectives.
    fn ascent(&self, th: &[f64; 4]) -> Option<Vec<f64>> {
        let j = self.jacobian(th, &[0, 1, 2, 3], |s| self.objective(s))?;
        let mut d = vec![0.0; 4];
        for row in &j {
            let n = norm(row);
            if n > 0.0 {
                for k in 0..4 {
                    d[k] += row[k] / n;
                }
            }
        }
        Some(d)
    }

    fn try_ladder(&self, opts: &StepOptions) -> Option<([f64; 4], State, Ansatz)> {
        let zero = [0.0; 4];
        let base_state = self.state(&zero)?;
        let base = self.objective(&base_state);
        let all = [0usize, 1, 2, 3];
        if self.objs.is_empty() {
            let th = self.enforce_pins(zero, &all)?;
            let s = self.accept(&th, &base, opts)?;
            return Some((th, s, Ansatz::Direct));
        }
        let grad = self.ascent(&zero)?;
        let gn = norm(&grad);
        if gn == 0.0 {
            return None;
        }
        // Direct: projected gradient, unit length.
        let mut dir = grad.clone();
        if !self.pins.is_empty() {
            let j = self.jacobian(&zero, &all, |s| self.pin_values(s))?;
            let jg: Vec<f64> = j.iter().map(|row| row.iter().zip(&grad).map(|(a, b)| a * b).sum()).collect();
            if let Some(c) = min_norm(&j, &jg) {
                for k in 0..4 {
                    dir[k] -= c[k];
                }
            }
        }
        let dn = norm(&dir);
        if dn > 1e-8 * gn {
            let th0 = [dir[0] / dn, dir[1] / dn, dir[2] / dn, dir[3] / dn];
            if let Some(th) = self.enforce_pins(th0, &all) {
                if let Some(s) = self.accept(&th, &base, opts) {
                    return Some((th, s, Ansatz::Direct));
                }
            }
        }
        // The improving parameter is whichever of u, v carries more of the gradient.
        let improving_v = grad[2].hypot(grad[3]) >= grad[0].hypot(grad[1]);
        let (ip, fp) = if improving_v { (2, 0) } else { (0, 2) };
        let g = C::new(grad[ip], grad[ip + 1]);
        let g = g / g.norm();
        let starts = [C::new(0.0, 0.0), C::new(1.0, 0.0), C::new(-1.0, 0.0), C::new(0.0, 1.0), C::new(0.0, -1.0)];
        let mut ladder: Vec<(Ansatz, C)> =
            (2..=6).map(|k| (Ansatz::Scaled { k }, g * self.eps.powi(k as i32 - 1))).collect();
        ladder.extend((2..=6).map(|i0| (Ansatz::Imaginary { i0 }, g * C::i() * self.eps.powi(i0 as i32 - 1))));
        for (ansatz, z) in ladder {
            for w in starts {
                let mut th0 = [0.0; 4];
                th0[ip] = z.re;
                th0[ip + 1] = z.im;
                th0[fp] = w.re;
                th0[fp + 1] = w.im;
                if let Some(th) = self.enforce_pins(th0, &[fp, fp + 1]) {
                    if let Some(s) = self.accept(&th, &base, opts) {
                        return Some((th, s, ansatz));
                    }
                }
            }
        }
        None
    }
}

fn build_engine<'a>(
    map: &'a FloatMap,
    pair: WitnessPair,
    constraints: &[StepConstraint],
    opts: &StepOptions,
    eps: f64,
) -> Result<Engine<'a>, PerturbError> {
    let sc = float_scales(opts.style, &pair, opts.xi)?;
    let (sigma0, jac0) = map.eval_jac(pair.p0);
    let base = State { q0: pair.p0, q1: pair.p1, residual: 0.0 };
    let (mut pins, mut objs, mut ineqs) = (Vec::new(), Vec::new(), Vec::new());
    for c in constraints {
        match c {
            StepConstraint::KeepAbs { coord, value } => pins.push(Pin::Abs(*coord, *value)),
            StepConstraint::IncreaseAbs { coord } => objs.push(Obj::Abs(*coord)),
            StepConstraint::DecreaseMetric { xi0, xi1 } => objs.push(Obj::Metric((*xi0).into(), (*xi1).into())),
            StepConstraint::IncreaseD { kappa5 } => objs.push(Obj::Kappa(*kappa5)),
            StepConstraint::KappaBand { kappa } => {
                let k = Kappa(*kappa);
                k.validate()?;
                let [k1, k2, k3, k4, k5, _] = *kappa;
                objs.push(Obj::Kappa(k5));
                for q in [Ineq::X1AtLeastOne, Ineq::Upper { k1, k2 }, Ineq::Band { k1, k2, k3, k4 }] {
                    let b = q.value(&base);
                    if b.abs() <= TIGHT {
                        pins.push(Pin::Ineq(q, b));
                    } else {
                        ineqs.push((q, b));
                    }
                }
            }
        }
    }
    Ok(Engine { map, pair, sc, eps, pins, objs, ineqs, sigma0, jac0 })
}

fn margins(e: &Engine, s: &State, base: &State) -> Vec<Margin> {
    let mut out = Vec::new();
    for p in &e.pins {
        let (name, v) = match *p {
            Pin::Abs(c, t) => (format!("keep |{c:?}|").to_lowercase(), s.coord(c).norm() - t),
            Pin::Ineq(q, t) => (format!("pinned {}", q.name()), q.value(s) - t),
        };
        out.push(Margin { name, value: v });
    }
    for o in &e.objs {
        out.push(Margin { name: o.name(), value: o.value(s) - o.value(base) });
    }
    for (q, _) in &e.ineqs {
        out.push(Margin { name: q.name().into(), value: q.value(s) });
    }
    out
}

/// Move `(p₀, p₁)` to a nearby pair with the same image, keeping the pinned quantities and
/// strictly improving every objective. `ε` is halved until an ansatz succeeds.
pub fn witness_step(
    map: &FloatMap,
    pair: &WitnessPair,
    constraints: &[StepConstraint],
    opts: &StepOptions,
) -> Result<StepResult, PerturbError> {
    let r0 = pair.residual(map);
    let scale = 1.0 + map.eval(pair.p0).0.norm() + map.eval(pair.p0).1.norm();
    if r0 > opts.tol * scale {
        return Err(PerturbError::InvalidPair(r0));
    }
    let mut eps = opts.eps;
    for _ in 0..=opts.max_halvings {
        let e = build_engine(map, *pair, constraints, opts, eps)?;
        if let Some((th, s, ansatz)) = e.try_ladder(opts) {
            let (u, v) = Engine::uv(&th);
            let base = State { q0: pair.p0, q1: pair.p1, residual: r0 };
            let ss = (s.q0.0 - pair.p0.0) / (e.sc[0] * eps);
            let tt = (s.q0.1 - pair.p0.1) / (e.sc[1] * eps);
            return Ok(StepResult {
                pair: WitnessPair { p0: s.q0, p1: s.q1 },
                s: ss.into(),
                t: tt.into(),
                u: u.into(),
                v: v.into(),
                w: None,
                ansatz,
                eps,
                residual: s.residual,
                margins: margins(&e, &s, &base),
            });
        }
        eps /= 2.0;
    }
    Err(PerturbError::NoStepFound)
}

/// Repeated steps; stops at the first failure and returns the steps taken so far.
pub fn continue_steps(
    map: &FloatMap,
    pair: &WitnessPair,
    constraints: &[StepConstraint],
    opts: &StepOptions,
    steps: usize,
) -> (Vec<StepResult>, Option<PerturbError>) {
    let mut out: Vec<StepResult> = Vec::new();
    let mut cur = *pair;
    for _ in 0..steps {
        match witness_step(map, &cur, constraints, opts) {
            Ok(r) => {
                cur = r.pair;
                out.push(r);
            }
            Err(e) => return (out, Some(e)),
        }
    }
    (out, None)
}
