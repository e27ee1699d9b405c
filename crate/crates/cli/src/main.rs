mod config;
mod selftest;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use keller_core::majorant::{dominates, GeometricTail, Majorant};
use keller_core::normalize::{certificate, is_keller, normalize_keller, KellerVerdict, NormalizeError};
use keller_core::perturb::{witness_step, PerturbError, StepConstraint, WitnessPair};
use keller_core::polyring::{parse_rational, BiPoly, MapJson, PolyMap, Scalar};
use keller_core::reversion::formal_inverse;
use keller_core::transform::{build_transform, integral_check, CaseTag, TransformData, TransformOptions};
use keller_core::witness::{atlas, continue_witness, find_witnesses, tau_gap_check, Objective};
use keller_core::yseries::{RatFunc, RatFuncJson, YSeries, YSeriesJson};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use config::RunConfig;

#[derive(Parser)]
#[command(name = "keller", version, about = "Jacobian pairs, series reversion, majorants and witness pairs")]
struct Cli {
    /// JSON file overriding the default run configuration.
    #[arg(long, global = true, env = "KELLER_CONFIG")]
    config: Option<PathBuf>,
    /// Output directory for reports and the run manifest.
    #[arg(long, global = true, env = "KELLER_OUT", default_value = "keller-out")]
    out: PathBuf,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Case {
    Case1,
    Case2,
}

impl From<Case> for CaseTag {
    fn from(c: Case) -> Self {
        match c {
            Case::Case1 => CaseTag::Case1,
            Case::Case2 => CaseTag::Case2,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Normalize a Keller map and emit the certificate.
    Normalize { map: PathBuf },
    /// Check that the Jacobian determinant is a nonzero constant.
    VerifyKeller { map: PathBuf },
    /// Formal inverse of `Σ f_i z^i` to the configured truncation order.
    InvertSeries {
        series: PathBuf,
        #[arg(long)]
        order: Option<usize>,
    },
    /// Term-wise dominance of a series by a majorant at `x0`.
    MajorantCheck {
        series: PathBuf,
        majorant: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        x0: String,
    },
    /// Build the transform for an exact point pair and report the identity checks.
    TransformCheck {
        map: PathBuf,
        pair: PathBuf,
        #[arg(long, value_enum, default_value = "case1")]
        case: Case,
    },
    /// Quadrature check of the transform integral against `1/m`.
    IntegralCheck {
        map: PathBuf,
        pair: PathBuf,
        #[arg(long, value_enum, default_value = "case1")]
        case: Case,
    },
    /// Multistart search for distinct points with equal images on the slice `x0 = xi0`, `x1 = xi1`.
    WitnessSearch {
        map: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        xi0: String,
        #[arg(long, allow_hyphen_values = true)]
        xi1: String,
    },
    /// Repeated perturbation steps driven by an objective.
    ContinueWitness { map: PathBuf, pair: PathBuf, objective: PathBuf },
    /// Sampled witness atlas over moduli `|x0| = k0`, `|x1| = k1`.
    Atlas {
        map: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        k0: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        k1: Vec<f64>,
    },
    /// The `τ`-gap condition on a float pair; needs `tau` and `s0` in the config.
    TauGap {
        pair: PathBuf,
        #[arg(long)]
        m: u32,
    },
    /// One perturbation step under a list of constraints.
    Step { map: PathBuf, pair: PathBuf, constraints: PathBuf },
    /// Run the bundled invariant suite.
    Selftest,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Normalize { .. } => "normalize",
            Command::VerifyKeller { .. } => "verify-keller",
            Command::InvertSeries { .. } => "invert-series",
            Command::MajorantCheck { .. } => "majorant-check",
            Command::TransformCheck { .. } => "transform-check",
            Command::IntegralCheck { .. } => "integral-check",
            Command::WitnessSearch { .. } => "witness-search",
            Command::ContinueWitness { .. } => "continue-witness",
            Command::Atlas { .. } => "atlas",
            Command::TauGap { .. } => "tau-gap",
            Command::Step { .. } => "step",
            Command::Selftest => "selftest",
        }
    }
}

/// Collects inputs and artifacts of one run.
struct Run {
    command: &'static str,
    out: PathBuf,
    cfg: RunConfig,
    inputs: Vec<(String, String)>,
    outputs: Vec<String>,
}

impl Run {
    fn read<T: DeserializeOwned>(&mut self, p: &Path) -> Result<T, String> {
        let bytes = fs::read(p).map_err(|e| format!("{}: {e}", p.display()))?;
        self.inputs.push((p.display().to_string(), hex::encode(Sha256::digest(&bytes))));
        serde_json::from_slice(&bytes).map_err(|e| format!("{}: {e}", p.display()))
    }

    fn map(&mut self, p: &Path) -> Result<PolyMap, String> {
        Ok(self.read::<MapJson>(p)?.into())
    }

    fn write(&mut self, name: &str, text: &str) -> Result<(), String> {
        let p = self.out.join(name);
        fs::write(&p, text).map_err(|e| format!("{}: {e}", p.display()))?;
        self.outputs.push(name.into());
        Ok(())
    }

    /// `<command>.json` with the config embedded, echoed to stdout.
    fn report(&mut self, pass: bool, result: impl Serialize) -> Result<bool, String> {
        let r = json!({ "command": self.command, "pass": pass, "config": self.cfg, "result": result });
        let text = pretty(&r)?;
        self.write(&format!("{}.json", self.command), &text)?;
        // A closed stdout (e.g. a pipe into `head`) must not fail the run.
        let _ = std::io::stdout().write_all(text.as_bytes());
        Ok(pass)
    }

    fn manifest(&mut self) -> Result<(), String> {
        let inputs: Vec<Value> = self.inputs.iter().map(|(p, h)| json!({ "path": p, "sha256": h })).collect();
        let m = json!({
            "command": self.command,
            "version": env!("CARGO_PKG_VERSION"),
            "core_version": keller_core::VERSION,
            "config": self.cfg,
            "inputs": inputs,
            "outputs": self.outputs,
        });
        let p = self.out.join("manifest.json");
        fs::write(&p, pretty(&m)?).map_err(|e| format!("{}: {e}", p.display()))
    }
}

fn pretty(v: &impl Serialize) -> Result<String, String> {
    serde_json::to_string_pretty(v).map(|s| s + "\n").map_err(|e| e.to_string())
}

fn scalar(s: &str) -> Result<Scalar, String> {
    s.parse::<Scalar>().map_err(|e| e.to_string())
}

fn rational(s: &str) -> Result<num_rational::BigRational, String> {
    parse_rational(s).ok_or_else(|| format!("bad rational {s:?}"))
}

#[derive(Deserialize)]
struct ExactPair {
    p0: [Scalar; 2],
    p1: [Scalar; 2],
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Coeffs {
    Scalars(Vec<Scalar>),
    RatFuncs(Vec<RatFuncJson>),
}

/// `{"coeffs": [f₁, f₂, …]}` for `Σ f_i z^i`.
#[derive(Deserialize)]
struct SeriesInput {
    coeffs: Coeffs,
}

#[derive(Deserialize)]
struct TailInput {
    c: String,
    r: String,
}

/// `{"alpha": int, "coeffs": ["p/q", …], "trunc": int, "tail": {"c": .., "r": ..}}`.
#[derive(Deserialize)]
struct MajorantInput {
    alpha: i64,
    coeffs: Vec<String>,
    trunc: Option<usize>,
    tail: Option<TailInput>,
}

fn transform(run: &mut Run, map: &Path, pair: &Path, case: Case) -> Result<TransformData, String> {
    let m = run.map(map)?;
    let p: ExactPair = run.read(pair)?;
    let [x0, y0] = p.p0;
    let [x1, y1] = p.p1;
    let opts = TransformOptions { seed: run.cfg.seed, ..TransformOptions::default() };
    build_transform(&m, &(x0, y0), &(x1, y1), case.into(), &opts).map_err(|e| e.to_string())
}

fn witness_csv(ws: &[WitnessPair]) -> String {
    let mut out = String::from("index,x0_re,x0_im,y0_re,y0_im,x1_re,x1_im,y1_re,y1_im\n");
    for (k, w) in ws.iter().enumerate() {
        let c = [w.p0.0, w.p0.1, w.p1.0, w.p1.1].map(|z| format!("{:.17e},{:.17e}", z.re, z.im));
        out.push_str(&format!("{k},{}\n", c.join(",")));
    }
    out
}

fn dispatch(run: &mut Run, cmd: &Command) -> Result<bool, String> {
    match cmd {
        Command::Normalize { map } => {
            let m = run.map(map)?;
            match normalize_keller(&m) {
                Ok(n) => {
                    let pass = n.certificate.all();
                    run.report(pass, &n)
                }
                Err(e @ (NormalizeError::NotKeller | NormalizeError::NoValidEll { .. })) => run.report(
                    false,
                    json!({ "error": e.to_string(), "input_certificate": certificate(&m), "keller": is_keller(&m) }),
                ),
            }
        }
        Command::VerifyKeller { map } => {
            let m = run.map(map)?;
            match is_keller(&m) {
                KellerVerdict::Keller { j } => run.report(true, json!({ "keller": true, "J": j })),
                KellerVerdict::NotKeller { witness } => {
                    let w = witness.map(|(c, i, j)| BiPoly::monomial(c, i, j).to_string());
                    run.report(false, json!({ "keller": false, "J": m.jac.to_string(), "witness": w }))
                }
            }
        }
        Command::InvertSeries { series, order } => {
            let s: SeriesInput = run.read(series)?;
            let n = order.unwrap_or(run.cfg.trunc_order);
            match s.coeffs {
                Coeffs::Scalars(f) => {
                    let r = formal_inverse(&f, n).map_err(|e| e.to_string())?;
                    let ok = r.verify();
                    run.report(ok, json!({ "order": n, "coeffs": r.coeffs, "two_sided_inverse": ok }))
                }
                Coeffs::RatFuncs(f) => {
                    let f: Vec<RatFunc> = f.iter().map(RatFunc::from_json).collect::<Result<_, _>>()?;
                    let r = formal_inverse(&f, n).map_err(|e| e.to_string())?;
                    let ok = r.verify();
                    let coeffs: Vec<RatFuncJson> = r.coeffs.iter().map(RatFunc::to_json).collect();
                    run.report(ok, json!({ "order": n, "coeffs": coeffs, "two_sided_inverse": ok }))
                }
            }
        }
        Command::MajorantCheck { series, majorant, x0 } => {
            let p: YSeriesJson = run.read(series)?;
            let p = YSeries::from_json(&p)?;
            let q: MajorantInput = run.read(majorant)?;
            let coeffs: Vec<_> = q.coeffs.iter().map(|c| rational(c)).collect::<Result<_, _>>()?;
            let tail = match q.tail {
                Some(t) => Some(GeometricTail { c: rational(&t.c)?, r: rational(&t.r)? }),
                None => None,
            };
            let trunc = q.trunc.unwrap_or(coeffs.len().saturating_sub(1));
            let q = Majorant::new(q.alpha, coeffs, trunc, tail).map_err(|e| e.to_string())?;
            let v = dominates(&p, &q, &scalar(x0)?).map_err(|e| e.to_string())?;
            run.report(v.holds(), json!({ "x0": x0, "dominance": v }))
        }
        Command::TransformCheck { map, pair, case } => {
            let t = transform(run, map, pair, *case)?;
            let pass = t.identities.all();
            run.report(pass, t.report())
        }
        Command::IntegralCheck { map, pair, case } => {
            let t = transform(run, map, pair, *case)?;
            let r = integral_check(&t, run.cfg.quad_nodes).map_err(|e| e.to_string())?;
            let within = r.abs_error <= 10.0 * r.eps;
            run.report(within, json!({ "transform": t.report(), "integral": r, "within_10_eps": within }))
        }
        Command::WitnessSearch { map, xi0, xi1 } => {
            let m = run.map(map)?;
            let ws = find_witnesses(&m, &scalar(xi0)?, &scalar(xi1)?, &run.cfg.search_options());
            let fm = m.to_float();
            let rows: Vec<Value> = ws
                .iter()
                .map(|w| json!({ "pair": w, "residual": w.residual(&fm), "separation": w.separation() }))
                .collect();
            run.write("witnesses.csv", &witness_csv(&ws))?;
            run.report(true, json!({ "xi0": xi0, "xi1": xi1, "count": ws.len(), "witnesses": rows }))
        }
        Command::ContinueWitness { map, pair, objective } => {
            let m = run.map(map)?;
            let p: WitnessPair = run.read(pair)?;
            let obj: Objective = run.read(objective)?;
            let tr = continue_witness(&m, &p, &obj, run.cfg.max_steps, &run.cfg.step_options())
                .map_err(|e| e.to_string())?;
            let increasing = matches!(obj, Objective::MaximizeD { .. });
            let mono = tr.monotone(increasing);
            run.write("trajectory.csv", &tr.to_csv())?;
            run.report(mono, json!({ "objective": obj, "monotone": mono, "trajectory": tr }))
        }
        Command::Atlas { map, k0, k1 } => {
            let m = run.map(map)?;
            let a = atlas(&m, k0, k1, &run.cfg.atlas_options());
            run.write("atlas.csv", &a.to_csv())?;
            run.report(true, &a)
        }
        Command::TauGap { pair, m } => {
            let p: WitnessPair = run.read(pair)?;
            let (Some(tau), Some(s0)) = (run.cfg.tau, run.cfg.s0) else {
                return Err("tau-gap needs tau and s0 in the config".into());
            };
            let r = tau_gap_check(&p, *m, tau, s0);
            let pass = !matches!(r.verdict, keller_core::witness::TauVerdict::Fails { .. });
            run.report(pass, &r)
        }
        Command::Step { map, pair, constraints } => {
            let m = run.map(map)?;
            let p: WitnessPair = run.read(pair)?;
            let cons: Vec<StepConstraint> = run.read(constraints)?;
            match witness_step(&m.to_float(), &p, &cons, &run.cfg.step_options()) {
                Ok(r) => run.report(true, &r),
                Err(e @ (PerturbError::NoStepFound | PerturbError::NewtonDivergence)) => {
                    run.report(false, json!({ "error": e.to_string() }))
                }
                Err(e) => Err(e.to_string()),
            }
        }
        Command::Selftest => {
            let checks = selftest::run();
            let pass = checks.iter().all(|c| c.pass);
            run.report(pass, &checks)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match RunConfig::load(cli.config.as_deref(), |k| std::env::var(k).ok()) {
        Ok(mut c) => {
            if let Some(s) = cli.seed {
                c.seed = s;
            }
            c
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    if let Err(e) = fs::create_dir_all(&cli.out) {
        eprintln!("error: {}: {e}", cli.out.display());
        return ExitCode::from(1);
    }
    let mut run =
        Run { command: cli.command.name(), out: cli.out.clone(), cfg, inputs: Vec::new(), outputs: Vec::new() };
    let result = dispatch(&mut run, &cli.command);
    if let Err(e) = run.manifest() {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
