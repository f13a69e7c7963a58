//! JSON documents and CSV emission. Every output embeds the schema tag and a
//! config echo; file writes go through a sibling temp file and a rename, so
//! readers never observe a partial document.

use std::fs;
use std::io::Write as _;
use std::path::Path;

use ergodesk_core::measure::{TailedFunction, TailedMeasureSpace};
use ergodesk_core::operator::DsOperator;
use ergodesk_core::rearrangement::StepFunction;
use ergodesk_core::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::CliError;

pub const SCHEMA: &str = "ergodesk/1";

/// Complex values on disk: a bare number or an `[re, im]` pair.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexDto {
    Real(f64),
    Pair([f64; 2]),
}

impl ComplexDto {
    pub fn to_complex(self) -> Complex64 {
        match self {
            ComplexDto::Real(re) => Complex64::new(re, 0.0),
            ComplexDto::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

impl From<Complex64> for ComplexDto {
    fn from(z: Complex64) -> Self {
        ComplexDto::Pair([z.re, z.im])
    }
}

/// A sample function together with the space carrying it. `tail_value`
/// defaults to zero and is only legal on spaces with an infinite tail.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionDoc {
    pub weights: Vec<f64>,
    #[serde(default)]
    pub tail: bool,
    pub values: Vec<ComplexDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_value: Option<ComplexDto>,
}

impl FunctionDoc {
    pub fn from_model(space: &TailedMeasureSpace, f: &TailedFunction) -> Self {
        FunctionDoc {
            weights: space.weights().to_vec(),
            tail: space.has_infinite_tail(),
            values: f.values().iter().map(|&z| z.into()).collect(),
            tail_value: space.has_infinite_tail().then(|| f.tail_value().into()),
        }
    }

    pub fn to_model(&self) -> Result<(TailedMeasureSpace, TailedFunction), CliError> {
        let space = TailedMeasureSpace::new(self.weights.clone(), self.tail)
            .map_err(|e| CliError::Parse(format!("bad weights: {e}")))?;
        let values: Vec<Complex64> = self.values.iter().map(|v| v.to_complex()).collect();
        if values.len() != space.atom_count() {
            return Err(CliError::Parse(format!(
                "function has {} values but the space has {} atoms",
                values.len(),
                space.atom_count()
            )));
        }
        let tail_value = self.tail_value.map_or(Complex64::new(0.0, 0.0), ComplexDto::to_complex);
        if !self.tail && tail_value.norm() != 0.0 {
            return Err(CliError::Parse(
                "tail_value requires a space with an infinite tail".into(),
            ));
        }
        let f = TailedFunction::new(values, tail_value)
            .map_err(|e| CliError::Parse(format!("bad values: {e}")))?;
        Ok((space, f))
    }
}

/// The space fields alone, for commands that need no sample values.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDoc {
    pub weights: Vec<f64>,
    #[serde(default)]
    pub tail: bool,
}

impl SpaceDoc {
    pub fn to_model(&self) -> Result<TailedMeasureSpace, CliError> {
        TailedMeasureSpace::new(self.weights.clone(), self.tail)
            .map_err(|e| CliError::Parse(format!("bad weights: {e}")))
    }
}

/// Kernel rows, tail injection, and tail coefficient. `b` defaults to zero
/// and `eta` to one, the canonical extension of a bare kernel.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorDoc {
    #[serde(rename = "K")]
    pub kernel: Vec<Vec<ComplexDto>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<ComplexDto>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<ComplexDto>,
}

impl OperatorDoc {
    pub fn to_model(&self) -> Result<DsOperator, CliError> {
        let rows: Vec<Vec<Complex64>> = self
            .kernel
            .iter()
            .map(|row| row.iter().map(|v| v.to_complex()).collect())
            .collect();
        let dim = rows.len();
        let injection = match &self.b {
            Some(b) => b.iter().map(|v| v.to_complex()).collect(),
            None => vec![Complex64::new(0.0, 0.0); dim],
        };
        let coeff = self.eta.map_or(Complex64::new(1.0, 0.0), ComplexDto::to_complex);
        DsOperator::new(rows, injection, coeff)
            .map_err(|e| CliError::Parse(format!("bad operator: {e}")))
    }
}

/// A decreasing rearrangement as breakpoint and value arrays.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepDoc {
    pub t: Vec<f64>,
    pub v: Vec<f64>,
    pub tail: f64,
}

impl StepDoc {
    pub fn from_model(step: &StepFunction) -> Self {
        StepDoc {
            t: step.breakpoints().to_vec(),
            v: step.step_values().to_vec(),
            tail: step.tail_value(),
        }
    }
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("parsing {}: {e}", path.display())))
}

/// Writes through a temp file in the target directory plus a rename.
pub fn write_atomic(path: &Path, content: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(parent) if !parent.as_os_str().is_empty() => parent,
        _ => Path::new("."),
    };
    let mut file = tempfile::NamedTempFile::new_in(dir)
        .map_err(|e| CliError::Io(format!("creating temp file in {}: {e}", dir.display())))?;
    file.write_all(content.as_bytes())
        .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))?;
    file.persist(path)
        .map_err(|e| CliError::Io(format!("replacing {}: {e}", path.display())))?;
    Ok(())
}

pub fn emit(path: Option<&Path>, content: &str) -> Result<(), CliError> {
    match path {
        Some(path) => write_atomic(path, content),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// 17 significant digits, enough to reproduce any f64 bit pattern; fixed so
/// reruns with the same config and seed are byte-identical.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Finite values stay numbers; infinities become strings, which JSON numbers
/// cannot carry.
pub fn ext_real(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

pub fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

/// The envelope every JSON output shares.
pub fn json_doc(echo: &Value, result: Value) -> String {
    let doc = json!({
        "schema": SCHEMA,
        "config": echo,
        "result": result,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("output documents serialize");
    text.push('\n');
    text
}

/// CSV with `#` preamble lines (schema, config echo, extra notes), one header
/// row, LF line endings.
pub struct CsvDoc {
    lines: Vec<String>,
}

impl CsvDoc {
    pub fn new(echo: &Value) -> Self {
        CsvDoc {
            lines: vec![
                format!("# schema: {SCHEMA}"),
                format!("# config: {}", serde_json::to_string(echo).expect("echo serializes")),
            ],
        }
    }

    pub fn comment(&mut self, text: &str) {
        self.lines.push(format!("# {text}"));
    }

    pub fn header(&mut self, header: &str) {
        self.lines.push(header.to_string());
    }

    pub fn row<I>(&mut self, cells: I)
    where
        I: IntoIterator<Item = String>,
    {
        self.lines.push(cells.into_iter().collect::<Vec<_>>().join(","));
    }

    pub fn finish(mut self) -> String {
        self.lines.push(String::new());
        self.lines.join("\n")
    }
}
