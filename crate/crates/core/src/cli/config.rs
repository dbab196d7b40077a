//! Run configuration: flat `key = value` text with `[section]` headers, or the
//! same structure as JSON.
//!
//! ```text
//! command = illpose
//! seed = 7
//!
//! [weights]
//! s = -0.25
//!
//! [experiment]
//! family = F1
//! n_list = 16 32 64 128 256 512 1024
//! ```

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::estimates::Region;
use crate::illposedness::{Family, GridPolicy};
use crate::spectral_core::GridSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Norms,
    Solve,
    Picard,
    Illpose,
    Estimates,
}

impl Command {
    pub const ALL: [Command; 5] = [Command::Norms, Command::Solve, Command::Picard, Command::Illpose, Command::Estimates];

    pub fn name(&self) -> &'static str {
        match self {
            Command::Norms => "norms",
            Command::Solve => "solve",
            Command::Picard => "picard",
            Command::Illpose => "illpose",
            Command::Estimates => "estimates",
        }
    }
}

impl FromStr for Command {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s.trim())
            .ok_or_else(|| Error::Config(format!("unknown command {s:?}")))
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// What the `estimates` command evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimateKind {
    Strichartz,
    Multiplier,
    Witness,
    Bilinear,
    BilinearGrowth,
    Embedding,
    Identity,
}

impl FromStr for EstimateKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "strichartz" => Self::Strichartz,
            "multiplier" => Self::Multiplier,
            "witness" => Self::Witness,
            "bilinear" => Self::Bilinear,
            "bilinear_growth" => Self::BilinearGrowth,
            "embedding" => Self::Embedding,
            "identity" => Self::Identity,
            other => return Err(Error::Config(format!("unknown estimate {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Spike,
    Gaussian,
}

const KEYS: &[&str] = &[
    "command",
    "seed",
    "grid.spatial_extent",
    "grid.spatial_points",
    "grid.time_extent",
    "grid.time_points",
    "weights.s",
    "weights.a",
    "weights.rho",
    "weights.eps_alpha",
    "weights.eps_beta",
    "experiment.family",
    "experiment.n_list",
    "experiment.eps0",
    "experiment.s_list",
    "experiment.a_list",
    "experiment.points_per_inverse_n",
    "experiment.mid_dxi",
    "experiment.drop_smallest",
    "experiment.field",
    "experiment.xi0",
    "experiment.tau0",
    "experiment.amplitude",
    "experiment.width",
    "experiment.b",
    "experiment.tol",
    "experiment.max_iter",
    "experiment.n_max",
    "experiment.lambda_list",
    "experiment.estimate",
    "experiment.ensemble_size",
    "experiment.levels",
    "experiment.q",
    "experiment.theta",
    "experiment.eps",
    "experiment.k",
    "experiment.multiplier",
    "experiment.mult_s",
    "experiment.s_prime",
    "experiment.b1",
    "experiment.b2",
    "experiment.region",
    "experiment.samples",
    "output.path",
    "output.format",
];

/// Flattened `section.key -> value` entries; list values are stored
/// space-separated.
pub type Entries = BTreeMap<String, String>;

pub fn parse_key_value(text: &str) -> Result<Entries> {
    let mut out = Entries::new();
    let mut section = String::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            section = name.trim().to_string();
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value, got {line:?}", no + 1)))?;
        let key = if section.is_empty() {
            k.trim().to_string()
        } else {
            format!("{section}.{}", k.trim())
        };
        insert(&mut out, key, v.trim())?;
    }
    Ok(out)
}

pub fn parse_json(text: &str) -> Result<Entries> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid JSON: {e}")))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Config("JSON config must be an object".into()))?;
    let mut out = Entries::new();
    for (k, v) in obj {
        match v {
            serde_json::Value::Object(inner) => {
                for (k2, v2) in inner {
                    insert(&mut out, format!("{k}.{k2}"), &json_scalar(v2)?)?;
                }
            }
            other => insert(&mut out, k.clone(), &json_scalar(other)?)?,
        }
    }
    Ok(out)
}

fn json_scalar(v: &serde_json::Value) -> Result<String> {
    use serde_json::Value;
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        Value::Bool(b) => Ok(b.to_string()),
        Value::Array(items) => Ok(items.iter().map(json_scalar).collect::<Result<Vec<_>>>()?.join(" ")),
        _ => Err(Error::Config(format!("unsupported JSON value {v}"))),
    }
}

fn insert(out: &mut Entries, key: String, value: &str) -> Result<()> {
    if !KEYS.contains(&key.as_str()) {
        return Err(Error::Config(format!("unknown key {key:?}")));
    }
    let canonical = value
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|p| !p.is_empty())
        .collect::<Vec<_>>()
        .join(" ");
    if out.insert(key.clone(), canonical).is_some() {
        return Err(Error::Config(format!("duplicate key {key:?}")));
    }
    Ok(())
}

/// Parses either format; text starting with `{` is JSON.
pub fn parse_entries(text: &str) -> Result<Entries> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_key_value(text)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weights {
    pub s: f64,
    pub a: f64,
    pub rho: f64,
    pub eps_alpha: f64,
    pub eps_beta: f64,
}

/// Validated configuration. `entries` keeps the canonical input so that a
/// row's provenance can rebuild the configuration exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub seed: Option<u64>,
    pub grid: Option<GridSpec>,
    pub weights: Weights,
    pub family: Family,
    pub n_list: Vec<f64>,
    pub eps0: f64,
    pub s_list: Vec<f64>,
    pub a_list: Vec<f64>,
    pub policy: GridPolicy,
    pub field: FieldKind,
    pub xi0: f64,
    pub tau0: f64,
    pub amplitude: f64,
    pub width: f64,
    pub b: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub n_max: usize,
    pub lambda_list: Vec<f64>,
    pub estimate: EstimateKind,
    pub ensemble_size: usize,
    pub levels: Vec<u32>,
    pub q: f64,
    pub theta: Option<f64>,
    pub eps: f64,
    pub k: u8,
    pub multiplier: String,
    pub mult_s: f64,
    pub s_prime: f64,
    pub b1: f64,
    pub b2: f64,
    pub region: Option<Region>,
    pub samples: usize,
    pub output_path: Option<String>,
    pub output_format: Option<String>,
    entries: Entries,
}

struct Reader<'a>(&'a Entries);

impl Reader<'_> {
    fn get<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        match self.0.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| Error::Config(format!("cannot parse {key} = {v:?}"))),
        }
    }
    fn opt<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| Error::Config(format!("cannot parse {key} = {v:?}"))),
        }
    }
    fn list<T: FromStr>(&self, key: &str, default: Vec<T>) -> Result<Vec<T>> {
        match self.0.get(key) {
            None => Ok(default),
            Some(v) => v
                .split(' ')
                .filter(|p| !p.is_empty())
                .map(|p| p.parse().map_err(|_| Error::Config(format!("cannot parse {key} entry {p:?}"))))
                .collect(),
        }
    }
}

impl RunConfig {
    pub fn from_text(text: &str) -> Result<Self> {
        Self::from_entries(parse_entries(text)?)
    }

    pub fn from_entries(entries: Entries) -> Result<Self> {
        let r = Reader(&entries);
        let command: Command = match entries.get("command") {
            Some(c) => c.parse()?,
            None => return Err(Error::Config("missing key \"command\"".into())),
        };
        let grid_keys = ["grid.spatial_extent", "grid.spatial_points", "grid.time_extent", "grid.time_points"];
        let present = grid_keys.iter().filter(|k| entries.contains_key(**k)).count();
        let grid = match present {
            0 => None,
            4 => Some(GridSpec::new(
                r.get(grid_keys[0], 0.0)?,
                r.get(grid_keys[1], 0usize)?,
                r.get(grid_keys[2], 0.0)?,
                r.get(grid_keys[3], 0usize)?,
            )?),
            _ => return Err(Error::Config("the [grid] section needs all four of spatial_extent, spatial_points, time_extent, time_points".into())),
        };
        let s = r.get("weights.s", -0.25)?;
        let weights = Weights {
            s,
            a: r.get("weights.a", 0.0)?,
            rho: r.get("weights.rho", (-s).max(0.0))?,
            eps_alpha: r.get("weights.eps_alpha", 0.01)?,
            eps_beta: r.get("weights.eps_beta", 0.01)?,
        };
        let defaults = GridPolicy::default();
        let policy = GridPolicy {
            points_per_inverse_n: r.get("experiment.points_per_inverse_n", defaults.points_per_inverse_n)?,
            mid_dxi: r.get("experiment.mid_dxi", defaults.mid_dxi)?,
            drop_smallest: r.get("experiment.drop_smallest", defaults.drop_smallest)?,
            ..defaults
        };
        let field = match entries.get("experiment.field").map(String::as_str) {
            None | Some("gaussian") => FieldKind::Gaussian,
            Some("spike") => FieldKind::Spike,
            Some(other) => return Err(Error::Config(format!("unknown field {other:?} (expected spike or gaussian)"))),
        };
        let region = match entries.get("experiment.region").map(String::as_str) {
            None | Some("none") => None,
            Some(other) => Some(Region::parse(other)?),
        };
        let cfg = Self {
            command,
            seed: r.opt("seed")?,
            grid,
            weights,
            family: Family::parse(entries.get("experiment.family").map_or("F1", String::as_str))?,
            n_list: r.list("experiment.n_list", (4..=10).map(|e| 2f64.powi(e)).collect())?,
            eps0: r.get("experiment.eps0", 0.1)?,
            s_list: r.list("experiment.s_list", vec![s])?,
            a_list: r.list("experiment.a_list", vec![weights.a])?,
            policy,
            field,
            xi0: r.get("experiment.xi0", 0.0)?,
            tau0: r.get("experiment.tau0", 0.0)?,
            amplitude: r.get("experiment.amplitude", 1e-3)?,
            width: r.get("experiment.width", 1.0)?,
            b: r.get("experiment.b", 0.5)?,
            tol: r.get("experiment.tol", crate::evolution::DEFAULT_TOL)?,
            max_iter: r.get("experiment.max_iter", 50)?,
            n_max: r.get("experiment.n_max", 5)?,
            lambda_list: r.list("experiment.lambda_list", Vec::new())?,
            estimate: r.get("experiment.estimate", EstimateKind::Strichartz)?,
            ensemble_size: r.get("experiment.ensemble_size", 100)?,
            levels: r.list("experiment.levels", vec![0, 1, 2])?,
            q: r.get("experiment.q", 6.0)?,
            theta: r.opt("experiment.theta")?,
            eps: r.get("experiment.eps", 0.01)?,
            k: r.get("experiment.k", 1)?,
            multiplier: r.get("experiment.multiplier", "sharp".to_string())?,
            mult_s: r.get("experiment.mult_s", 0.0)?,
            s_prime: r.get("experiment.s_prime", 0.5)?,
            b1: r.get("experiment.b1", 0.5)?,
            b2: r.get("experiment.b2", 0.5)?,
            region,
            samples: r.get("experiment.samples", 100_000)?,
            output_path: entries.get("output.path").cloned(),
            output_format: entries.get("output.format").cloned(),
            entries,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be positive, got {v}")))
            }
        };
        positive("eps0", self.eps0)?;
        positive("tol", self.tol)?;
        positive("width", self.width)?;
        positive("points_per_inverse_n", self.policy.points_per_inverse_n)?;
        positive("mid_dxi", self.policy.mid_dxi)?;
        if self.amplitude.is_nan() {
            return Err(Error::Config("amplitude is NaN".into()));
        }
        for &l in &self.lambda_list {
            positive("lambda", l)?;
        }
        if self.command == Command::Estimates
            && matches!(
                self.estimate,
                EstimateKind::Strichartz | EstimateKind::Multiplier | EstimateKind::Bilinear | EstimateKind::Embedding | EstimateKind::Identity
            )
            && self.seed.is_none()
        {
            return Err(Error::Config("a seed is required for ensemble experiments".into()));
        }
        if self.ensemble_size == 0 {
            return Err(Error::EmptyEnsemble);
        }
        Ok(())
    }

    /// Replaces the seed, as `--seed` does.
    pub fn with_seed(self, seed: u64) -> Result<Self> {
        let mut entries = self.entries;
        entries.insert("seed".into(), seed.to_string());
        Self::from_entries(entries)
    }

    /// Replaces the command, as the positional CLI argument does.
    pub fn with_command(self, command: Command) -> Result<Self> {
        let mut entries = self.entries;
        entries.insert("command".into(), command.name().into());
        Self::from_entries(entries)
    }

    /// `key=value;...` over the canonical entries (output keys excluded) plus
    /// the crate version.
    pub fn provenance(&self) -> String {
        let mut parts: Vec<String> = self
            .entries
            .iter()
            .filter(|(k, _)| !k.starts_with("output."))
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        parts.push(format!("version={}", env!("CARGO_PKG_VERSION")));
        parts.join(";")
    }

    pub fn from_provenance(p: &str) -> Result<Self> {
        let mut entries = Entries::new();
        for part in p.split(';').filter(|s| !s.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("bad provenance field {part:?}")))?;
            if k != "version" {
                insert(&mut entries, k.to_string(), v)?;
            }
        }
        Self::from_entries(entries)
    }

    /// Grid for the evolution commands: the configured one, else
    /// `(64 pi, 1024, 4, 256)`.
    pub fn evolution_grid(&self) -> Result<GridSpec> {
        match self.grid {
            Some(g) => Ok(g),
            None => GridSpec::new(64.0 * PI, 1024, 4.0, 256),
        }
    }
}
