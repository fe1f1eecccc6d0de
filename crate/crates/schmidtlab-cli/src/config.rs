//! Config-file handling and flag/default merging.
//!
//! The file format is deliberately minimal: one `key = value` per line, `#`
//! starts a comment, keys are the long flag names. A key that no flag answers
//! to is a usage error (silent typos in config files are how wrong numbers
//! get published); a recognized key that the current subcommand does not use
//! is ignored, so one file can serve several subcommands.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use crate::args::{DecomposeArgs, OutputFormat, Scale, TableArgs, VerifyArgs};
use crate::CliError;

/// Every key any subcommand understands.
const KNOWN_KEYS: &[&str] = &[
    "eta",
    "eta-min",
    "eta-max",
    "steps",
    "scale",
    "grid-n",
    "k-extent-factor",
    "q-extent-factor",
    "numerical",
    "modes",
    "orders",
    "tol",
    "output",
    "out",
];

pub struct ConfigFile {
    values: HashMap<String, String>,
}

impl ConfigFile {
    pub fn empty() -> Self {
        ConfigFile {
            values: HashMap::new(),
        }
    }

    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::empty());
        };
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Usage(format!("cannot read config file {}: {e}", path.display()))
        })?;
        Self::parse(&text)
            .map_err(|msg| CliError::Usage(format!("config file {}: {msg}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut values = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(format!(
                    "line {}: expected key = value, got `{raw}`",
                    lineno + 1
                ));
            };
            let key = key.trim();
            let value = value.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(format!("line {}: unknown key `{key}`", lineno + 1));
            }
            // Later assignments win, like repeated flags would.
            values.insert(key.to_string(), value.to_string());
        }
        Ok(ConfigFile { values })
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn parse_with<T>(
        &self,
        key: &str,
        parse: impl Fn(&str) -> Result<T, String>,
    ) -> Result<Option<T>, CliError> {
        match self.get(key) {
            None => Ok(None),
            Some(raw) => parse(raw)
                .map(Some)
                .map_err(|msg| CliError::Usage(format!("config key `{key}`: {msg}"))),
        }
    }
}

fn parse_f64(s: &str) -> Result<f64, String> {
    s.parse::<f64>()
        .map_err(|_| format!("`{s}` is not a number"))
}

fn parse_usize(s: &str) -> Result<usize, String> {
    s.parse::<usize>()
        .map_err(|_| format!("`{s}` is not a nonnegative integer"))
}

fn parse_bool(s: &str) -> Result<bool, String> {
    match s {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(format!("`{s}` is not true or false")),
    }
}

fn parse_scale(s: &str) -> Result<Scale, String> {
    match s {
        "linear" => Ok(Scale::Linear),
        "log" => Ok(Scale::Log),
        _ => Err(format!("`{s}` is not linear or log")),
    }
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    match s {
        "csv" => Ok(OutputFormat::Csv),
        "json" => Ok(OutputFormat::Json),
        _ => Err(format!("`{s}` is not csv or json")),
    }
}

pub fn parse_orders(s: &str) -> Result<Vec<f64>, String> {
    let orders: Vec<f64> = s
        .split(',')
        .map(|tok| parse_f64(tok.trim()))
        .collect::<Result<_, _>>()?;
    if orders.is_empty() {
        return Err("order list is empty".into());
    }
    Ok(orders)
}

fn parse_eta_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',').map(|tok| parse_f64(tok.trim())).collect()
}

/// Fully resolved `table` invocation.
#[derive(Debug, Clone)]
pub struct TableSettings {
    pub eta_min: f64,
    pub eta_max: f64,
    pub steps: usize,
    pub scale: Scale,
    pub grid_n: usize,
    pub k_extent_factor: f64,
    pub q_extent_factor: f64,
    pub numerical: bool,
    pub tol: f64,
    pub output: OutputFormat,
    pub out: Option<PathBuf>,
}

/// Fully resolved `decompose` invocation.
#[derive(Debug, Clone)]
pub struct DecomposeSettings {
    pub eta: f64,
    pub grid_n: usize,
    pub k_extent_factor: f64,
    pub q_extent_factor: f64,
    pub modes: usize,
    pub orders: Vec<f64>,
    pub tol: f64,
    pub output: OutputFormat,
    pub out: Option<PathBuf>,
}

/// Fully resolved `verify` invocation.
#[derive(Debug, Clone)]
pub struct VerifySettings {
    pub etas: Vec<f64>,
    pub grid_n: usize,
    pub k_extent_factor: f64,
    pub q_extent_factor: f64,
    pub tol: f64,
    pub json: bool,
    pub out: Option<PathBuf>,
}

fn check_grid_n(grid_n: usize) -> Result<usize, CliError> {
    if grid_n < 16 {
        return Err(CliError::Usage(format!(
            "--grid-n must be at least 16, got {grid_n}"
        )));
    }
    Ok(grid_n)
}

fn check_positive(name: &str, v: f64) -> Result<f64, CliError> {
    if v <= 0.0 || !v.is_finite() {
        return Err(CliError::Usage(format!(
            "{name} must be positive and finite, got {v}"
        )));
    }
    Ok(v)
}

impl TableSettings {
    pub fn resolve(args: &TableArgs) -> Result<Self, CliError> {
        let cfg = ConfigFile::load(args.config.as_deref())?;
        let eta_min = args
            .eta_min
            .or(cfg.parse_with("eta-min", parse_f64)?)
            .unwrap_or(0.1);
        let eta_max = args
            .eta_max
            .or(cfg.parse_with("eta-max", parse_f64)?)
            .unwrap_or(50.0);
        let steps = args
            .steps
            .or(cfg.parse_with("steps", parse_usize)?)
            .unwrap_or(100);
        let scale = args
            .scale
            .or(cfg.parse_with("scale", parse_scale)?)
            .unwrap_or(Scale::Linear);
        let grid_n = args
            .grid_n
            .or(cfg.parse_with("grid-n", parse_usize)?)
            .unwrap_or(512);
        let k_extent_factor = args
            .k_extent_factor
            .or(cfg.parse_with("k-extent-factor", parse_f64)?)
            .unwrap_or(1.0);
        let q_extent_factor = args
            .q_extent_factor
            .or(cfg.parse_with("q-extent-factor", parse_f64)?)
            .unwrap_or(1.0);
        let numerical = args.numerical || cfg.parse_with("numerical", parse_bool)?.unwrap_or(false);
        let tol = args
            .tol
            .or(cfg.parse_with("tol", parse_f64)?)
            .unwrap_or(1e-6);
        let output = args
            .output
            .or(cfg.parse_with("output", parse_format)?)
            .unwrap_or(OutputFormat::Csv);
        let out = args.out.clone().or(cfg.get("out").map(PathBuf::from));

        check_positive("--eta-min", eta_min)?;
        check_positive("--eta-max", eta_max)?;
        if eta_min >= eta_max {
            return Err(CliError::Usage(format!(
                "--eta-min must be below --eta-max, got {eta_min} and {eta_max}"
            )));
        }
        if steps < 2 {
            return Err(CliError::Usage(format!(
                "--steps must be at least 2, got {steps}"
            )));
        }
        check_grid_n(grid_n)?;
        check_positive("--k-extent-factor", k_extent_factor)?;
        check_positive("--q-extent-factor", q_extent_factor)?;
        check_positive("--tol", tol)?;

        Ok(TableSettings {
            eta_min,
            eta_max,
            steps,
            scale,
            grid_n,
            k_extent_factor,
            q_extent_factor,
            numerical,
            tol,
            output,
            out,
        })
    }

    /// The eta samples, endpoints exact, ascending.
    pub fn samples(&self) -> Vec<f64> {
        let n = self.steps;
        (0..n)
            .map(|j| {
                if j == 0 {
                    self.eta_min
                } else if j == n - 1 {
                    self.eta_max
                } else {
                    let t = j as f64 / (n - 1) as f64;
                    match self.scale {
                        Scale::Linear => self.eta_min + (self.eta_max - self.eta_min) * t,
                        Scale::Log => self.eta_min * (self.eta_max / self.eta_min).powf(t),
                    }
                }
            })
            .collect()
    }
}

impl DecomposeSettings {
    pub fn resolve(args: &DecomposeArgs) -> Result<Self, CliError> {
        let cfg = ConfigFile::load(args.config.as_deref())?;
        let eta = args
            .eta
            .or(cfg.parse_with("eta", parse_f64)?)
            .ok_or_else(|| CliError::Usage("decompose requires --eta".into()))?;
        let grid_n = args
            .grid_n
            .or(cfg.parse_with("grid-n", parse_usize)?)
            .unwrap_or(512);
        let k_extent_factor = args
            .k_extent_factor
            .or(cfg.parse_with("k-extent-factor", parse_f64)?)
            .unwrap_or(1.0);
        let q_extent_factor = args
            .q_extent_factor
            .or(cfg.parse_with("q-extent-factor", parse_f64)?)
            .unwrap_or(1.0);
        let modes = args
            .modes
            .or(cfg.parse_with("modes", parse_usize)?)
            .unwrap_or(0);
        let orders = match &args.orders {
            Some(raw) => {
                parse_orders(raw).map_err(|msg| CliError::Usage(format!("--orders: {msg}")))?
            }
            None => cfg
                .parse_with("orders", parse_orders)?
                .unwrap_or_else(|| vec![1.5, 2.0, 3.0]),
        };
        let tol = args
            .tol
            .or(cfg.parse_with("tol", parse_f64)?)
            .unwrap_or(1e-6);
        let output = args
            .output
            .or(cfg.parse_with("output", parse_format)?)
            .unwrap_or(OutputFormat::Json);
        let out = args.out.clone().or(cfg.get("out").map(PathBuf::from));

        check_positive("--eta", eta)?;
        check_grid_n(grid_n)?;
        check_positive("--k-extent-factor", k_extent_factor)?;
        check_positive("--q-extent-factor", q_extent_factor)?;
        check_positive("--tol", tol)?;
        if modes > grid_n {
            return Err(CliError::Usage(format!(
                "--modes {modes} exceeds --grid-n {grid_n}"
            )));
        }
        for &p in &orders {
            if p <= 1.0 || !p.is_finite() {
                return Err(CliError::Usage(format!(
                    "--orders entries must satisfy p > 1, got {p}"
                )));
            }
        }
        if output == OutputFormat::Csv && modes > 0 {
            return Err(CliError::Usage(
                "CSV output carries the spectrum only; --modes requires --output json".into(),
            ));
        }

        Ok(DecomposeSettings {
            eta,
            grid_n,
            k_extent_factor,
            q_extent_factor,
            modes,
            orders,
            tol,
            output,
            out,
        })
    }
}

impl VerifySettings {
    pub fn resolve(args: &VerifyArgs) -> Result<Self, CliError> {
        let cfg = ConfigFile::load(args.config.as_deref())?;
        let etas = if !args.eta.is_empty() {
            args.eta.clone()
        } else {
            cfg.parse_with("eta", parse_eta_list)?.unwrap_or_default()
        };
        let grid_n = args
            .grid_n
            .or(cfg.parse_with("grid-n", parse_usize)?)
            .unwrap_or(512);
        let k_extent_factor = args
            .k_extent_factor
            .or(cfg.parse_with("k-extent-factor", parse_f64)?)
            .unwrap_or(1.0);
        let q_extent_factor = args
            .q_extent_factor
            .or(cfg.parse_with("q-extent-factor", parse_f64)?)
            .unwrap_or(1.0);
        let tol = args
            .tol
            .or(cfg.parse_with("tol", parse_f64)?)
            .unwrap_or(1e-3);
        let output = match args.output.or(cfg.parse_with("output", parse_format)?) {
            None => None,
            Some(OutputFormat::Json) => Some(OutputFormat::Json),
            Some(OutputFormat::Csv) => {
                return Err(CliError::Usage(
                    "verify emits a report, not a table: use --output json or omit the flag".into(),
                ))
            }
        };
        let out = args.out.clone().or(cfg.get("out").map(PathBuf::from));

        if etas.is_empty() {
            return Err(CliError::Usage("verify requires at least one --eta".into()));
        }
        for &eta in &etas {
            check_positive("--eta", eta)?;
        }
        check_grid_n(grid_n)?;
        check_positive("--k-extent-factor", k_extent_factor)?;
        check_positive("--q-extent-factor", q_extent_factor)?;
        check_positive("--tol", tol)?;

        Ok(VerifySettings {
            etas,
            grid_n,
            k_extent_factor,
            q_extent_factor,
            tol,
            json: output.is_some(),
            out,
        })
    }
}
