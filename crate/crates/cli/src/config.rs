//! Run configuration: defaults, then the `--config` file, then `KELLER_<FIELD>` variables.

use std::path::Path;

use keller_core::perturb::{FrameStyle, Kappa, StepOptions};
use keller_core::polyring::{parse_rational, FloatScalar};
use keller_core::witness::{AtlasOptions, SearchOptions};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const ENV_PREFIX: &str = "KELLER_";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub trunc_order: usize,
    pub newton_tol: f64,
    pub residual_tol: f64,
    pub dedupe: f64,
    pub eps: f64,
    pub quad_nodes: usize,
    pub s_bound: f64,
    /// Exact rational, e.g. `"1/4"`.
    pub delta1: String,
    pub seed: u64,
    pub kappas: Option<[f64; 6]>,
    pub xi: Option<[FloatScalar; 2]>,
    pub tau: Option<f64>,
    pub s0: Option<f64>,
    pub max_halvings: usize,
    pub frame_style: FrameStyle,
    pub max_steps: usize,
    pub search_grid: usize,
    pub search_half_width: f64,
    pub search_max_iter: usize,
    pub atlas_phases: usize,
    pub atlas_grid: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        let step = StepOptions::default();
        let search = SearchOptions::default();
        let atlas = AtlasOptions::default();
        RunConfig {
            trunc_order: 16,
            newton_tol: 1e-12,
            residual_tol: search.residual_tol,
            dedupe: search.dedupe,
            eps: step.eps,
            quad_nodes: 64,
            s_bound: step.s_bound,
            delta1: "1/4".into(),
            seed: 0,
            kappas: None,
            xi: None,
            tau: None,
            s0: None,
            max_halvings: step.max_halvings,
            frame_style: step.style,
            max_steps: 20,
            search_grid: search.grid,
            search_half_width: search.half_width,
            search_max_iter: search.max_iter,
            atlas_phases: atlas.phases,
            atlas_grid: atlas.search.grid,
        }
    }
}

impl RunConfig {
    /// `file` overrides the defaults, environment variables override the file.
    pub fn load(file: Option<&Path>, env: impl Fn(&str) -> Option<String>) -> Result<RunConfig, String> {
        let mut v = serde_json::to_value(RunConfig::default()).map_err(|e| e.to_string())?;
        if let Some(p) = file {
            let text = std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
            let over: Value = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", p.display()))?;
            let Value::Object(over) = over else {
                return Err(format!("{}: config must be a JSON object", p.display()));
            };
            let obj = v.as_object_mut().expect("config serializes to an object");
            for (k, x) in over {
                obj.insert(k, x);
            }
        }
        let obj = v.as_object_mut().expect("config serializes to an object");
        for (k, x) in obj.iter_mut() {
            if let Some(raw) = env(&format!("{ENV_PREFIX}{}", k.to_uppercase())) {
                // Bare strings such as `additive` or `1/4` are taken literally.
                *x = serde_json::from_str(&raw).unwrap_or(Value::String(raw));
            }
        }
        let cfg: RunConfig = serde_json::from_value(v).map_err(|e| format!("config: {e}"))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), String> {
        let tols = [
            ("newton_tol", self.newton_tol),
            ("residual_tol", self.residual_tol),
            ("dedupe", self.dedupe),
            ("eps", self.eps),
            ("s_bound", self.s_bound),
            ("search_half_width", self.search_half_width),
        ];
        if let Some((name, _)) = tols.iter().find(|(_, t)| !(t.is_finite() && *t > 0.0)) {
            return Err(format!("config: {name} must be positive"));
        }
        if self.quad_nodes == 0 || self.trunc_order == 0 || self.search_grid == 0 {
            return Err("config: quad_nodes, trunc_order and search_grid must be positive".into());
        }
        match parse_rational(&self.delta1) {
            Some(d) if d > num_rational::BigRational::from_integer(0.into()) => {}
            _ => return Err("config: delta1 must be a positive rational".into()),
        }
        if let Some(k) = self.kappas {
            Kappa(k).validate().map_err(|e| format!("config: {e}"))?;
        }
        Ok(())
    }

    pub fn step_options(&self) -> StepOptions {
        StepOptions {
            eps: self.eps,
            max_halvings: self.max_halvings,
            s_bound: self.s_bound,
            tol: self.residual_tol,
            style: self.frame_style,
            xi: self.xi,
        }
    }

    pub fn search_options(&self) -> SearchOptions {
        SearchOptions {
            grid: self.search_grid,
            half_width: self.search_half_width,
            dedupe: self.dedupe,
            residual_tol: self.residual_tol,
            max_iter: self.search_max_iter,
        }
    }

    pub fn atlas_options(&self) -> AtlasOptions {
        AtlasOptions {
            phases: self.atlas_phases,
            search: SearchOptions { grid: self.atlas_grid, ..self.search_options() },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn env_of(pairs: &[(&str, &str)]) -> impl Fn(&str) -> Option<String> {
        let m: HashMap<String, String> = pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        move |k| m.get(k).cloned()
    }

    #[test]
    fn defaults_validate() {
        let c = RunConfig::load(None, env_of(&[])).unwrap();
        assert_eq!(c, RunConfig::default());
    }

    #[test]
    fn env_overrides() {
        let c = RunConfig::load(
            None,
            env_of(&[("KELLER_EPS", "0.01"), ("KELLER_FRAME_STYLE", "mult_x"), ("KELLER_DELTA1", "1/8")]),
        )
        .unwrap();
        assert_eq!(c.eps, 0.01);
        assert_eq!(c.frame_style, FrameStyle::MultX);
        assert_eq!(c.delta1, "1/8");
    }

    #[test]
    fn rejects_bad_values() {
        assert!(RunConfig::load(None, env_of(&[("KELLER_EPS", "-1")])).is_err());
        assert!(RunConfig::load(None, env_of(&[("KELLER_KAPPAS", "[1,2,0.5,1,2,1]")])).is_err());
        assert!(RunConfig::load(None, env_of(&[("KELLER_DELTA1", "zero")])).is_err());
    }
}
