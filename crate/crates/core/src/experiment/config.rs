//! JSON experiment configuration.
//!
//! ```json
//! {
//!   "model": "sbm3",
//!   "n_list": [100, 500],
//!   "reps": 100,
//!   "statistics": ["edge-density", "triangle-density"],
//!   "methods": ["jackknife", {"subsample": {"b_frac": 0.1, "B": 1000}}],
//!   "master_seed": 7,
//!   "rho": "model",
//!   "output_path": "ratios.csv"
//! }
//! ```
//!
//! `model` is `"sbm3"`, `"gr2"`, or an object with `kind` one of
//! `sbm` (`b`, `pi`), `absdiff` (`exponent`) or `constant` (`weight`, `rho`).
//! When `methods` is omitted the jackknife and subsampling at
//! `b_frac` 0.05, 0.1 and 0.2 (`B` = 1000) are run.

use std::fmt;
use std::path::PathBuf;

use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::functionals::StatKind;
use crate::sim::{self, GraphonModel};

pub const DEFAULT_REPS: usize = 100;
pub const DEFAULT_SUBSAMPLE_REPLICATES: usize = 1000;
pub const DEFAULT_B_FRACS: [f64; 3] = [0.05, 0.1, 0.2];

/// A named or explicit generative model, as written in a config.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    ThreeBlockSbm,
    CubeRootAbsDiff,
    Sbm { b: Vec<Vec<f64>>, pi: Vec<f64> },
    AbsDiff { exponent: f64 },
    Constant { weight: f64, rho: f64 },
}

impl ModelSpec {
    pub fn build(&self) -> Result<GraphonModel> {
        match self {
            ModelSpec::ThreeBlockSbm => Ok(sim::three_block_sbm()),
            ModelSpec::CubeRootAbsDiff => Ok(sim::cube_root_absdiff()),
            ModelSpec::Sbm { b, pi } => sim::sbm_model(b.clone(), pi.clone()),
            ModelSpec::AbsDiff { exponent } => sim::absdiff_model(*exponent),
            ModelSpec::Constant { weight, rho } => sim::constant_model(*weight, *rho),
        }
    }

    /// Parses `sbm3`, `gr2`, `absdiff:<exponent>`, `er:<p>`, or a JSON
    /// object as accepted in configs.
    pub fn parse(s: &str) -> Result<ModelSpec> {
        let s = s.trim();
        if s.starts_with('{') {
            let v: Value = serde_json::from_str(s).map_err(|e| Error::config("model", e.to_string()))?;
            return ModelSpec::from_value(&v);
        }
        if let Some(x) = s.strip_prefix("absdiff:") {
            let exponent = x.parse().map_err(|_| Error::config("model", format!("bad exponent `{x}`")))?;
            return ModelSpec::validated(ModelSpec::AbsDiff { exponent });
        }
        if let Some(x) = s.strip_prefix("er:") {
            let p = x.parse().map_err(|_| Error::config("model", format!("bad probability `{x}`")))?;
            return ModelSpec::validated(ModelSpec::Constant { weight: p, rho: 1.0 });
        }
        ModelSpec::from_value(&Value::String(s.to_string()))
    }

    fn from_value(v: &Value) -> Result<ModelSpec> {
        #[derive(Deserialize)]
        #[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
        enum Explicit {
            Sbm { b: Vec<Vec<f64>>, pi: Vec<f64> },
            Absdiff { exponent: f64 },
            Constant { weight: f64, rho: f64 },
        }
        let spec = match v {
            Value::String(s) => match s.as_str() {
                "sbm3" | "sbm-paper" => ModelSpec::ThreeBlockSbm,
                "gr2" => ModelSpec::CubeRootAbsDiff,
                other => return Err(Error::config("model", format!("unknown model `{other}`"))),
            },
            Value::Object(_) => match Explicit::deserialize(v).map_err(|e| Error::config("model", e.to_string()))? {
                Explicit::Sbm { b, pi } => ModelSpec::Sbm { b, pi },
                Explicit::Absdiff { exponent } => ModelSpec::AbsDiff { exponent },
                Explicit::Constant { weight, rho } => ModelSpec::Constant { weight, rho },
            },
            _ => return Err(Error::config("model", "expected a name or an object")),
        };
        ModelSpec::validated(spec)
    }

    fn validated(spec: ModelSpec) -> Result<ModelSpec> {
        spec.build().map_err(|e| Error::config("model", e.to_string()))?;
        Ok(spec)
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelSpec::ThreeBlockSbm => write!(f, "sbm3"),
            ModelSpec::CubeRootAbsDiff => write!(f, "gr2"),
            ModelSpec::Sbm { .. } => write!(f, "sbm"),
            ModelSpec::AbsDiff { exponent } => write!(f, "absdiff:{exponent}"),
            ModelSpec::Constant { weight, rho } => write!(f, "constant:{weight}x{rho}"),
        }
    }
}

/// A variance estimator compared in an experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    Jackknife,
    JackknifeAlt,
    Subsample { b_frac: f64, replicates: usize },
}

impl Method {
    pub fn label(&self) -> &'static str {
        match self {
            Method::Jackknife => "jackknife",
            Method::JackknifeAlt => "jackknife-alt",
            Method::Subsample { .. } => "subsample",
        }
    }

    pub fn b_frac(&self) -> Option<f64> {
        match self {
            Method::Subsample { b_frac, .. } => Some(*b_frac),
            _ => None,
        }
    }

    /// Defaults: jackknife plus subsampling at each default fraction.
    pub fn defaults() -> Vec<Method> {
        std::iter::once(Method::Jackknife)
            .chain(DEFAULT_B_FRACS.iter().map(|&b_frac| Method::Subsample {
                b_frac,
                replicates: DEFAULT_SUBSAMPLE_REPLICATES,
            }))
            .collect()
    }

    pub fn subsample(b_frac: f64, replicates: usize) -> Result<Method> {
        if !(b_frac > 0.0 && b_frac <= 1.0) {
            return Err(Error::config("b_frac", format!("{b_frac} not in (0, 1]")));
        }
        if replicates < 2 {
            return Err(Error::config("B", format!("{replicates} < 2")));
        }
        Ok(Method::Subsample { b_frac, replicates })
    }

    fn from_value(v: &Value) -> Result<Method> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Sub {
            b_frac: f64,
            #[serde(rename = "B", default = "default_replicates")]
            replicates: usize,
        }
        fn default_replicates() -> usize {
            DEFAULT_SUBSAMPLE_REPLICATES
        }
        match v {
            Value::String(s) => match s.as_str() {
                "jackknife" => Ok(Method::Jackknife),
                "jackknife-alt" => Ok(Method::JackknifeAlt),
                other => Err(Error::config("methods", format!("unknown method `{other}`"))),
            },
            Value::Object(map) if map.len() == 1 && map.contains_key("subsample") => {
                let sub = Sub::deserialize(&map["subsample"]).map_err(|e| Error::config("methods.subsample", e.to_string()))?;
                Method::subsample(sub.b_frac, sub.replicates)
            }
            _ => Err(Error::config("methods", "expected \"jackknife\", \"jackknife-alt\" or {\"subsample\": {...}}")),
        }
    }
}

/// Normalizer used for simulated graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RhoChoice {
    /// The generating model's `rho_n`.
    #[default]
    Model,
    PlugIn,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub model: ModelSpec,
    pub n_list: Vec<usize>,
    pub reps: usize,
    pub statistics: Vec<StatKind>,
    pub methods: Vec<Method>,
    pub master_seed: u64,
    pub rho: RhoChoice,
    pub output_path: Option<PathBuf>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    model: Value,
    n_list: Vec<usize>,
    #[serde(default = "default_reps")]
    reps: usize,
    statistics: Vec<String>,
    #[serde(default)]
    methods: Option<Vec<Value>>,
    #[serde(default)]
    master_seed: u64,
    #[serde(default)]
    rho: Option<String>,
    #[serde(default)]
    output_path: Option<PathBuf>,
}

fn default_reps() -> usize {
    DEFAULT_REPS
}

/// Field named in a serde error message, if any.
fn serde_field(msg: &str) -> String {
    for marker in ["unknown field `", "missing field `"] {
        if let Some(rest) = msg.split(marker).nth(1) {
            if let Some(name) = rest.split('`').next() {
                return name.to_string();
            }
        }
    }
    "<config>".to_string()
}

pub fn parse_config(source: &str) -> Result<ExperimentConfig> {
    let raw: RawConfig = serde_json::from_str(source).map_err(|e| {
        let msg = e.to_string();
        Error::config(serde_field(&msg), msg)
    })?;
    let model = ModelSpec::from_value(&raw.model)?;

    if raw.n_list.is_empty() {
        return Err(Error::config("n_list", "must not be empty"));
    }
    if raw.n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::config("n_list", "must be strictly increasing"));
    }
    if raw.reps < 2 {
        return Err(Error::config("reps", format!("{} < 2", raw.reps)));
    }
    if raw.statistics.is_empty() {
        return Err(Error::config("statistics", "must not be empty"));
    }
    let statistics = raw
        .statistics
        .iter()
        .map(|s| s.parse::<StatKind>().map_err(|e| Error::config("statistics", e.to_string())))
        .collect::<Result<Vec<_>>>()?;
    let needed = statistics.iter().map(|s| s.min_nodes() + 1).max().unwrap_or(2);
    if raw.n_list[0] < needed {
        return Err(Error::config("n_list", format!("graph sizes must be at least {needed}")));
    }
    let methods = match raw.methods {
        None => Method::defaults(),
        Some(v) if v.is_empty() => return Err(Error::config("methods", "must not be empty")),
        Some(v) => v.iter().map(Method::from_value).collect::<Result<Vec<_>>>()?,
    };
    let rho = match raw.rho.as_deref() {
        None | Some("model") => RhoChoice::Model,
        Some("plugin") => RhoChoice::PlugIn,
        Some(other) => return Err(Error::config("rho", format!("expected `model` or `plugin`, got `{other}`"))),
    };
    Ok(ExperimentConfig {
        model,
        n_list: raw.n_list,
        reps: raw.reps,
        statistics,
        methods,
        master_seed: raw.master_seed,
        rho,
        output_path: raw.output_path,
    })
}
