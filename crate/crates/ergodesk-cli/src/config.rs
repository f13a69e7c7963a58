//! JSON experiment configs. The schema mirrors the flag names exactly, so a
//! command line translates to a config file by copying flag names into the
//! `parameters` object. Unknown fields and unknown parameters are rejected.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use serde_json::{Map, Value};

use crate::run::{self, Format, Sink};
use crate::{io, parse, CliError};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: String,
    #[serde(default)]
    pub parameters: Map<String, Value>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub output: Option<OutputConfig>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Option<String>,
}

/// Runs a config file. Flags given alongside `--config` win over the file's
/// own `seed` and `output` fields.
pub fn run_config_file(
    path: &Path,
    seed_flag: Option<u64>,
    out_flag: Option<PathBuf>,
    format_flag: Option<Format>,
) -> Result<bool, CliError> {
    let config: ExperimentConfig = io::read_json(path)?;
    let seed = seed_flag.or(config.seed);
    let out = out_flag.or_else(|| config.output.as_ref().and_then(|o| o.path.clone()));
    let format = match format_flag {
        Some(format) => Some(format),
        None => config
            .output
            .as_ref()
            .and_then(|o| o.format.as_deref())
            .map(run::parse_format)
            .transpose()?,
    };
    let mut params = Params { kind: config.kind.clone(), map: config.parameters };
    dispatch(&config.kind, &mut params, seed, out, format)
}

struct Params {
    kind: String,
    map: Map<String, Value>,
}

impl Params {
    fn missing(&self, key: &str) -> CliError {
        CliError::Parse(format!("kind '{}' needs parameter '{key}'", self.kind))
    }

    fn bad(&self, key: &str, expected: &str) -> CliError {
        CliError::Parse(format!(
            "kind '{}': parameter '{key}' must be {expected}",
            self.kind
        ))
    }

    fn take_string(&mut self, key: &str) -> Result<Option<String>, CliError> {
        match self.map.remove(key) {
            None => Ok(None),
            Some(Value::String(text)) => Ok(Some(text)),
            Some(_) => Err(self.bad(key, "a string")),
        }
    }

    fn require_string(&mut self, key: &str) -> Result<String, CliError> {
        self.take_string(key)?.ok_or_else(|| self.missing(key))
    }

    fn take_u64(&mut self, key: &str) -> Result<Option<u64>, CliError> {
        match self.map.remove(key) {
            None => Ok(None),
            Some(value) => value
                .as_u64()
                .map(Some)
                .ok_or_else(|| self.bad(key, "a nonnegative integer")),
        }
    }

    fn take_f64(&mut self, key: &str) -> Result<Option<f64>, CliError> {
        match self.map.remove(key) {
            None => Ok(None),
            Some(value) => value
                .as_f64()
                .map(Some)
                .ok_or_else(|| self.bad(key, "a number")),
        }
    }

    fn take_bool(&mut self, key: &str) -> Result<Option<bool>, CliError> {
        match self.map.remove(key) {
            None => Ok(None),
            Some(Value::Bool(flag)) => Ok(Some(flag)),
            Some(_) => Err(self.bad(key, "a boolean")),
        }
    }

    /// Index lists come as the flag text `"1,10,100"` or as a JSON array.
    fn require_indices(&mut self, key: &str) -> Result<Vec<usize>, CliError> {
        match self.map.remove(key) {
            None => Err(self.missing(key)),
            Some(Value::String(text)) => parse::parse_indices(&text),
            Some(Value::Array(items)) => {
                let joined = items
                    .iter()
                    .map(|item| {
                        item.as_u64()
                            .map(|n| n.to_string())
                            .ok_or_else(|| self.bad(key, "a list of integers"))
                    })
                    .collect::<Result<Vec<_>, _>>()?
                    .join(",");
                parse::parse_indices(&joined)
            }
            Some(_) => Err(self.bad(key, "an index list")),
        }
    }

    /// The `[eps, tol]` pair for certificates.
    fn take_pair(&mut self, key: &str) -> Result<Option<(f64, f64)>, CliError> {
        match self.map.remove(key) {
            None => Ok(None),
            Some(Value::Array(items)) if items.len() == 2 => {
                let a = items[0].as_f64().ok_or_else(|| self.bad(key, "two numbers"))?;
                let b = items[1].as_f64().ok_or_else(|| self.bad(key, "two numbers"))?;
                Ok(Some((a, b)))
            }
            Some(_) => Err(self.bad(key, "two numbers")),
        }
    }

    fn finish(self) -> Result<(), CliError> {
        match self.map.keys().next() {
            None => Ok(()),
            Some(key) => Err(CliError::Parse(format!(
                "unknown parameter '{key}' for kind '{}'",
                self.kind
            ))),
        }
    }
}

fn dispatch(
    kind: &str,
    params: &mut Params,
    seed: Option<u64>,
    out: Option<PathBuf>,
    format: Option<Format>,
) -> Result<bool, CliError> {
    let sink = |default: Format| Sink { path: out.clone(), format: format.unwrap_or(default) };
    match kind {
        "norms" => {
            let function = PathBuf::from(params.require_string("fn")?);
            let spec = params.require_string("spec")?;
            run_checked(params, || {
                run::run_norms(&function, &spec, &sink(Format::Json), seed)
            })
        }
        "op-verify" => {
            let op = PathBuf::from(params.require_string("op")?);
            let space = PathBuf::from(params.require_string("space")?);
            let tol = params.take_f64("tol")?.unwrap_or(1e-12);
            run_checked(params, || {
                run::run_op_verify(&op, &space, tol, &sink(Format::Json), seed)
            })
        }
        "avg-run" => {
            let op = PathBuf::from(params.require_string("op")?);
            let function = PathBuf::from(params.require_string("fn")?);
            let weights = params.take_string("weights")?;
            let indices = params.require_indices("n")?;
            let egorov = params.take_pair("egorov")?;
            run_checked(params, || {
                run::run_avg(
                    &op,
                    &function,
                    weights.as_deref(),
                    &indices,
                    egorov,
                    &sink(Format::Csv),
                    seed,
                )
            })
        }
        "weak11-suite" => {
            let instances = params.take_u64("instances")?.unwrap_or(500);
            let horizon = params.take_u64("horizon")?.unwrap_or(200) as usize;
            let max_atoms = params.take_u64("max-atoms")?.unwrap_or(32) as usize;
            let weighted = params.take_bool("weighted")?.unwrap_or(false);
            run_checked(params, || {
                run::run_weak11_suite(
                    instances,
                    horizon,
                    max_atoms,
                    weighted,
                    seed.unwrap_or(0),
                    &sink(Format::Json),
                )
            })
        }
        "ww-sweep" => {
            let system = params.require_string("system")?;
            let function = params.require_string("fn")?;
            let omega = params.take_u64("omega")?.unwrap_or(0) as usize;
            let lambda_grid = params.take_u64("lambda-grid")?.unwrap_or(64) as usize;
            let indices = params.require_indices("n")?;
            run_checked(params, || {
                run::run_ww_sweep(
                    &system,
                    &function,
                    omega,
                    lambda_grid,
                    &indices,
                    &sink(Format::Csv),
                    seed,
                )
            })
        }
        "return-times" => {
            let system_a = params.require_string("system-a")?;
            let fn_a = params.require_string("fn-a")?;
            let omega = params.take_u64("omega")?.unwrap_or(0) as usize;
            let system_b = params.require_string("system-b")?;
            let fn_b = params.require_string("fn-b")?;
            let x = params.take_u64("x")?.unwrap_or(0) as usize;
            let indices = params.require_indices("n")?;
            run_checked(params, || {
                run::run_return_times(
                    &system_a,
                    &fn_a,
                    omega,
                    &system_b,
                    &fn_b,
                    x,
                    &indices,
                    &sink(Format::Csv),
                    seed,
                )
            })
        }
        "slow-decay" => {
            let depth = params.take_u64("depth")?.unwrap_or(30) as u32;
            let omega_max = params.take_f64("omega-max")?.unwrap_or(1e6);
            let points = params.take_u64("points")?.unwrap_or(601) as usize;
            run_checked(params, || {
                run::run_slow_decay(depth, omega_max, points, &sink(Format::Csv), seed)
            })
        }
        other => Err(CliError::Parse(format!(
            "unknown kind '{other}'; expected norms, op-verify, avg-run, weak11-suite, \
             ww-sweep, return-times, or slow-decay"
        ))),
    }
}

fn run_checked(
    params: &mut Params,
    run: impl FnOnce() -> Result<bool, CliError>,
) -> Result<bool, CliError> {
    let leftover = Params {
        kind: params.kind.clone(),
        map: std::mem::take(&mut params.map),
    };
    leftover.finish()?;
    run()
}
