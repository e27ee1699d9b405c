//! Witness pairs `σ(p₀) = σ(p₁)`, `p₀ ≠ p₁`: slice search, metrics, continuation, atlas
//! sampling and the `τ`-gap predicate.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::perturb::{continue_steps, Ansatz, Kappa, PerturbError, StepConstraint, StepOptions};
use crate::polyring::{FloatMap, FloatScalar, PolyMap, Scalar};

pub use crate::perturb::WitnessPair;

type C = Complex64;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchOptions {
    /// Start grid is `grid × grid` points on the box; `y₁` starts run through a fixed permutation of it.
    pub grid: usize,
    pub half_width: f64,
    pub dedupe: f64,
    pub residual_tol: f64,
    pub max_iter: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { grid: 8, half_width: 3.0, dedupe: 1e-8, residual_tol: 1e-10, max_iter: 100 }
    }
}

/// Damped Gauss–Newton `Δ = (JᴴJ + λI)⁻¹JᴴH`; close to the min-norm step when `J` is singular.
fn lm_step(j: [[C; 2]; 2], h: (C, C)) -> Option<(C, C)> {
    let jh = |r: usize, c: usize| j[c][r].conj();
    let mut a = [[C::new(0.0, 0.0); 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            a[r][c] = jh(r, 0) * j[0][c] + jh(r, 1) * j[1][c];
        }
    }
    let scale = a[0][0].re + a[1][1].re;
    if scale == 0.0 {
        return None;
    }
    let lambda = 1e-14 * scale;
    a[0][0] += lambda;
    a[1][1] += lambda;
    let b = (jh(0, 0) * h.0 + jh(0, 1) * h.1, jh(1, 0) * h.0 + jh(1, 1) * h.1);
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    Some(((a[1][1] * b.0 - a[0][1] * b.1) / det, (a[0][0] * b.1 - a[1][0] * b.0) / det))
}

fn solve_slice(m: &FloatMap, xi0: C, xi1: C, start: (C, C), opts: &SearchOptions) -> Option<WitnessPair> {
    let (mut y0, mut y1) = start;
    for _ in 0..opts.max_iter {
        let (v0, j0) = m.eval_jac((xi0, y0));
        let (v1, j1) = m.eval_jac((xi1, y1));
        let h = (v0.0 - v1.0, v0.1 - v1.1);
        if h.0.norm() + h.1.norm() <= 0.1 * opts.residual_tol {
            break;
        }
        let j = [[j0[0][1], -j1[0][1]], [j0[1][1], -j1[1][1]]];
        let d = lm_step(j, h)?;
        y0 -= d.0;
        y1 -= d.1;
        if !(y0.is_finite() && y1.is_finite()) {
            return None;
        }
    }
    let w = WitnessPair { p0: (xi0, y0), p1: (xi1, y1) };
    (w.residual(m) <= opts.residual_tol && w.separation() >= opts.dedupe).then_some(w)
}

fn start_grid(opts: &SearchOptions) -> Vec<C> {
    let n = opts.grid.max(1);
    let at = |k: usize| {
        if n == 1 {
            0.0
        } else {
            -opts.half_width + 2.0 * opts.half_width * k as f64 / (n - 1) as f64
        }
    };
    (0..n).flat_map(|a| (0..n).map(move |b| C::new(at(a), at(b)))).collect()
}

fn pair_key(w: &WitnessPair) -> [f64; 8] {
    [w.p0.0.re, w.p0.0.im, w.p0.1.re, w.p0.1.im, w.p1.0.re, w.p1.0.im, w.p1.1.re, w.p1.1.im]
}

fn dist(a: &WitnessPair, b: &WitnessPair) -> f64 {
    pair_key(a).iter().zip(pair_key(b)).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Multistart solve on the slice `x₀ = ξ₀`, `x₁ = ξ₁`.
pub fn find_witnesses_c64(m: &FloatMap, xi0: C, xi1: C, opts: &SearchOptions) -> Vec<WitnessPair> {
    let grid = start_grid(opts);
    let mut found: Vec<WitnessPair> = Vec::new();
    for (k, &z) in grid.iter().enumerate() {
        let z1 = grid[(7 * k + 3) % grid.len()];
        if let Some(w) = solve_slice(m, xi0, xi1, (z, z1), opts) {
            if found.iter().all(|f| dist(f, &w) >= opts.dedupe) {
                found.push(w);
            }
        }
    }
    found.sort_by(|a, b| {
        pair_key(a)
            .iter()
            .zip(pair_key(b))
            .map(|(x, y)| x.total_cmp(&y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    found
}

pub fn find_witnesses(m: &PolyMap, xi0: &Scalar, xi1: &Scalar, opts: &SearchOptions) -> Vec<WitnessPair> {
    find_witnesses_c64(&m.to_float(), xi0.to_c64(), xi1.to_c64(), opts)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MetricSpec {
    /// `max{|x₀|, |y₀|, |x₁|, |y₁|}`.
    H,
    /// `κ₅^{|x₁|}|y₁|`.
    D { kappa5: f64 },
    /// `|x₀ − ξ₀|² + |x₁ − ξ₁|²`.
    ScriptD { xi0: FloatScalar, xi1: FloatScalar },
}

pub fn metric(pair: &WitnessPair, spec: &MetricSpec) -> f64 {
    match spec {
        MetricSpec::H => [pair.p0.0, pair.p0.1, pair.p1.0, pair.p1.1].iter().map(|z| z.norm()).fold(0.0, f64::max),
        MetricSpec::D { kappa5 } => kappa5.powf(pair.p1.0.norm()) * pair.p1.1.norm(),
        MetricSpec::ScriptD { xi0, xi1 } => {
            (pair.p0.0 - C::from(*xi0)).norm_sqr() + (pair.p1.0 - C::from(*xi1)).norm_sqr()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Objective {
    /// Maximize `d`; with `kappa` the band constraints are enforced as well.
    MaximizeD {
        kappa5: f64,
        kappa6: f64,
        kappa: Option<[f64; 6]>,
    },
    MinimizeScriptD {
        xi0: FloatScalar,
        xi1: FloatScalar,
    },
}

impl Objective {
    fn constraint(&self) -> StepConstraint {
        match self {
            Objective::MaximizeD { kappa: Some(k), .. } => StepConstraint::KappaBand { kappa: *k },
            Objective::MaximizeD { kappa5, .. } => StepConstraint::IncreaseD { kappa5: *kappa5 },
            Objective::MinimizeScriptD { xi0, xi1 } => StepConstraint::DecreaseMetric { xi0: *xi0, xi1: *xi1 },
        }
    }

    pub fn metric_spec(&self) -> MetricSpec {
        match self {
            Objective::MaximizeD { kappa5, .. } => MetricSpec::D { kappa5: *kappa5 },
            Objective::MinimizeScriptD { xi0, xi1 } => MetricSpec::ScriptD { xi0: *xi0, xi1: *xi1 },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Trajectory {
    pub pairs: Vec<WitnessPair>,
    pub metric: Vec<f64>,
    pub ansatz: Vec<Ansatz>,
    /// Set when a step failed before `max_steps`.
    pub stall: Option<String>,
}

impl Trajectory {
    /// Strict monotonicity in the objective's direction.
    pub fn monotone(&self, increasing: bool) -> bool {
        self.metric.windows(2).all(|w| if increasing { w[1] > w[0] } else { w[1] < w[0] })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,x0_re,x0_im,y0_re,y0_im,x1_re,x1_im,y1_re,y1_im,metric\n");
        for (k, (p, v)) in self.pairs.iter().zip(&self.metric).enumerate() {
            let c = pair_key(p).map(|x| format!("{x:.17e}")).join(",");
            out.push_str(&format!("{k},{c},{v:.17e}\n"));
        }
        out
    }
}

pub fn continue_witness(
    m: &PolyMap,
    pair: &WitnessPair,
    objective: &Objective,
    max_steps: usize,
    opts: &StepOptions,
) -> Result<Trajectory, PerturbError> {
    if let Objective::MaximizeD { kappa: Some(k), .. } = objective {
        Kappa(*k).validate()?;
    }
    let fm = m.to_float();
    let spec = objective.metric_spec();
    let (steps, err) = continue_steps(&fm, pair, &[objective.constraint()], opts, max_steps);
    if let (Some(e @ PerturbError::InvalidPair(_)), true) = (&err, steps.is_empty()) {
        return Err(e.clone());
    }
    let mut pairs = vec![*pair];
    pairs.extend(steps.iter().map(|s| s.pair));
    let metric = pairs.iter().map(|p| metric(p, &spec)).collect();
    Ok(Trajectory {
        pairs,
        metric,
        ansatz: steps.iter().map(|s| s.ansatz).collect(),
        stall: err.map(|e| e.to_string()),
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AtlasOptions {
    /// Phases per coordinate.
    pub phases: usize,
    pub search: SearchOptions,
}

impl Default for AtlasOptions {
    fn default() -> Self {
        AtlasOptions { phases: 8, search: SearchOptions { grid: 3, ..SearchOptions::default() } }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AtlasCell {
    pub k0: f64,
    pub k1: f64,
    pub samples: Vec<WitnessPair>,
    /// Largest `|y₁|` found; a lower bound for the supremum over the cell.
    pub gamma_est: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Comparison {
    pub k1: f64,
    pub k0_lo: f64,
    pub k0_hi: f64,
    pub gamma_lo: Option<f64>,
    pub gamma_hi: Option<f64>,
    pub increasing: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessAtlas {
    pub cells: Vec<AtlasCell>,
    /// `γ` along increasing `k₀` at fixed `k₁`; diagnostic only.
    pub comparisons: Vec<Comparison>,
}

impl WitnessAtlas {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k0,k1,samples,gamma_est\n");
        for c in &self.cells {
            let g = c.gamma_est.map_or(String::new(), |g| format!("{g:.17e}"));
            out.push_str(&format!("{},{},{},{}\n", c.k0, c.k1, c.samples.len(), g));
        }
        out
    }
}

pub fn atlas(m: &PolyMap, k0s: &[f64], k1s: &[f64], opts: &AtlasOptions) -> WitnessAtlas {
    let fm = m.to_float();
    let n = opts.phases.max(1);
    let phase = |k: usize| C::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64);
    let mut cells = Vec::new();
    for &k1 in k1s {
        for &k0 in k0s {
            let mut samples: Vec<WitnessPair> = Vec::new();
            for a in 0..n {
                for b in 0..n {
                    for w in find_witnesses_c64(&fm, phase(a) * k0, phase(b) * k1, &opts.search) {
                        if samples.iter().all(|s| dist(s, &w) >= opts.search.dedupe) {
                            samples.push(w);
                        }
                    }
                }
            }
            let gamma_est = samples.iter().map(|s| s.p1.1.norm()).reduce(f64::max);
            cells.push(AtlasCell { k0, k1, samples, gamma_est });
        }
    }
    let mut comparisons = Vec::new();
    for &k1 in k1s {
        let row: Vec<&AtlasCell> = cells.iter().filter(|c| c.k1 == k1).collect();
        for w in row.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let increasing = lo.gamma_est.zip(hi.gamma_est).map(|(a, b)| b > a);
            comparisons.push(Comparison {
                k1,
                k0_lo: lo.k0,
                k0_hi: hi.k0,
                gamma_lo: lo.gamma_est,
                gamma_hi: hi.gamma_est,
                increasing,
            });
        }
    }
    WitnessAtlas { cells, comparisons }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum TauVerdict {
    NotApplicable,
    Holds,
    Fails { sides: Vec<String> },
}

#[derive(Clone, Debug, Serialize)]
pub struct SideCheck {
    pub t: u8,
    /// `h = max{|x_t|, |y_t|}`, so the derived bound applies.
    pub applies: bool,
    pub max_gap: f64,
    pub bound: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TauReport {
    pub h: f64,
    pub threshold: f64,
    pub side0: f64,
    pub side1: f64,
    pub verdict: TauVerdict,
    pub derived: Vec<SideCheck>,
}

/// `|x_t + y_t| < τh^{m/(m+1)}` for `t = 0, 1` when `h ≥ 𝒮₀`, plus the consequence
/// `|a − b| < τℓ_t^{(m+1)/(m+2)}` on sides where `h` is attained.
pub fn tau_gap_check(pair: &WitnessPair, m: u32, tau: f64, s0: f64) -> TauReport {
    let h = metric(pair, &MetricSpec::H);
    let mf = m as f64;
    let threshold = tau * h.powf(mf / (mf + 1.0));
    let side0 = (pair.p0.0 + pair.p0.1).norm();
    let side1 = (pair.p1.0 + pair.p1.1).norm();
    let mut derived = Vec::new();
    for (t, p) in [(0u8, pair.p0), (1u8, pair.p1)] {
        let (ax, ay) = (p.0.norm(), p.1.norm());
        let applies = ax.max(ay) == h;
        let l = ax.min(ay);
        let bound = tau * l.powf((mf + 1.0) / (mf + 2.0));
        let vals = [ax, ay, h];
        let max_gap = vals.iter().flat_map(|a| vals.iter().map(move |b| (a - b).abs())).fold(0.0, f64::max);
        derived.push(SideCheck { t, applies, max_gap, bound, holds: max_gap < bound });
    }
    let verdict = if h < s0 {
        TauVerdict::NotApplicable
    } else {
        let mut sides = Vec::new();
        if side0 >= threshold {
            sides.push("|x0+y0|".to_string());
        }
        if side1 >= threshold {
            sides.push("|x1+y1|".to_string());
        }
        if sides.is_empty() {
            TauVerdict::Holds
        } else {
            TauVerdict::Fails { sides }
        }
    };
    TauReport { h, threshold, side0, side1, verdict, derived }
}
