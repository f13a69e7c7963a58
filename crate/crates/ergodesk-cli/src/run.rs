//! One function per subcommand. Each builds a config echo from its resolved
//! arguments, computes, emits through [`crate::io`], and returns the property
//! verdict: `Ok(false)` means the run completed but a checked property
//! failed, which the binary turns into exit code 1.

use std::path::{Path, PathBuf};

use ergodesk_core::averaging::{
    cesaro_trace, check_weak11, check_weighted_weak11, egorov_certify_auto, weighted_trace,
    EgorovCertificate, LimitRule,
};
use ergodesk_core::measure::{slow_decay_example, TailedFunction};
use ergodesk_core::norms::norm;
use ergodesk_core::operator::verify_ds;
use ergodesk_core::orbit::{return_times_average, unit_circle_grid, wiener_wintner_sweep};
use ergodesk_core::rearrangement::{rearrange, StepFunction};
use ergodesk_core::sampling::{
    sample_besicovitch, sample_function, sample_instance, seeded_rng, OperatorClass,
};
use rand::Rng;
use serde_json::{json, Value};

use crate::io::{self, CsvDoc, FunctionDoc, OperatorDoc, SpaceDoc, StepDoc};
use crate::parse;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

pub fn parse_format(text: &str) -> Result<Format, CliError> {
    match text {
        "csv" => Ok(Format::Csv),
        "json" => Ok(Format::Json),
        other => Err(CliError::Parse(format!("unknown format '{other}'; expected csv or json"))),
    }
}

/// Where and how a run reports.
pub struct Sink {
    pub path: Option<PathBuf>,
    pub format: Format,
}

impl Sink {
    fn emit(&self, content: &str) -> Result<(), CliError> {
        io::emit(self.path.as_deref(), content)
    }
}

fn echo(kind: &str, parameters: Value, seed: Option<u64>) -> Value {
    json!({ "kind": kind, "parameters": parameters, "seed": seed })
}

pub fn run_norms(
    function: &Path,
    spec_text: &str,
    sink: &Sink,
    seed: Option<u64>,
) -> Result<bool, CliError> {
    let doc: FunctionDoc = io::read_json(function)?;
    let (space, f) = doc.to_model()?;
    let specs = parse::parse_norm_specs(spec_text)?;
    let canonical: Vec<&str> = specs.iter().map(|(label, _)| label.as_str()).collect();
    let echo = echo(
        "norms",
        json!({ "fn": function.display().to_string(), "spec": canonical.join(",") }),
        seed,
    );
    let mut computed = Vec::with_capacity(specs.len());
    for (label, spec) in &specs {
        let value = norm(&space, &f, spec)
            .map_err(|e| CliError::Parse(format!("norm spec '{label}': {e}")))?;
        computed.push((label.clone(), value));
    }
    match sink.format {
        Format::Json => {
            let mut norms = serde_json::Map::new();
            for (label, value) in computed {
                norms.insert(label, io::ext_real(value));
            }
            sink.emit(&io::json_doc(&echo, json!({ "norms": norms })))?;
        }
        Format::Csv => {
            let mut csv = CsvDoc::new(&echo);
            csv.header("spec,value");
            for (label, value) in computed {
                let cell = if value.is_finite() { io::fmt_float(value) } else { "inf".into() };
                csv.row([label, cell]);
            }
            sink.emit(&csv.finish())?;
        }
    }
    Ok(true)
}

pub fn run_op_verify(
    op_path: &Path,
    space_path: &Path,
    tol: f64,
    sink: &Sink,
    seed: Option<u64>,
) -> Result<bool, CliError> {
    if sink.format == Format::Csv {
        return Err(CliError::Parse("op verify reports are json only".into()));
    }
    if !(tol >= 0.0) {
        return Err(CliError::Parse(format!("tol must be nonnegative, got {tol}")));
    }
    let op = io::read_json::<OperatorDoc>(op_path)?.to_model()?;
    let space = io::read_json::<SpaceDoc>(space_path)?.to_model()?;
    if op.dim() != space.atom_count() {
        return Err(CliError::Parse(format!(
            "operator is {}x{} but the space has {} atoms",
            op.dim(),
            op.dim(),
            space.atom_count()
        )));
    }
    let report = verify_ds(&space, &op, tol);
    let echo = echo(
        "op-verify",
        json!({
            "op": op_path.display().to_string(),
            "space": space_path.display().to_string(),
            "tol": tol,
        }),
        seed,
    );
    let result = json!({
        "column_margins": report.column_margins,
        "row_margins": report.row_margins,
        "tail_margin": report.tail_margin,
        "l1_contraction": report.l1_contraction,
        "linf_contraction": report.linf_contraction,
        "positive": report.positive,
        "tol": report.tol,
        "dunford_schwartz": report.is_dunford_schwartz(),
        "positive_dunford_schwartz": report.is_positive_dunford_schwartz(),
    });
    sink.emit(&io::json_doc(&echo, result))?;
    Ok(report.is_dunford_schwartz())
}

fn rule_name(rule: LimitRule) -> &'static str {
    match rule {
        LimitRule::MeanProjection => "mean-projection",
        LimitRule::LastEntry => "last-entry",
        LimitRule::Supplied => "supplied",
    }
}

fn certificate_json(certificate: &EgorovCertificate, limit: &TailedFunction) -> Value {
    json!({
        "tolerance": certificate.tolerance,
        "measure_budget": certificate.measure_budget,
        "exceptional_atoms": certificate.exceptional_atoms,
        "tail_exceptional": certificate.tail_exceptional,
        "exceptional_measure": io::ext_real(certificate.exceptional_measure),
        "sup_decay": certificate
            .sup_decay
            .iter()
            .map(|&(n, deviation)| json!([n, deviation]))
            .collect::<Vec<_>>(),
        "limit_rule": rule_name(certificate.limit_rule),
        "certified": certificate.is_certified(),
        "limit": {
            "values": limit.values().iter().map(|&z| io::complex_json(z)).collect::<Vec<_>>(),
            "tail_value": io::complex_json(limit.tail_value()),
        },
    })
}

pub fn run_avg(
    op_path: &Path,
    fn_path: &Path,
    weights: Option<&str>,
    indices: &[usize],
    egorov: Option<(f64, f64)>,
    sink: &Sink,
    seed: Option<u64>,
) -> Result<bool, CliError> {
    let op = io::read_json::<OperatorDoc>(op_path)?.to_model()?;
    let (space, f) = io::read_json::<FunctionDoc>(fn_path)?.to_model()?;
    if op.dim() != space.atom_count() {
        return Err(CliError::Parse(format!(
            "operator is {}x{} but the function lives on {} atoms",
            op.dim(),
            op.dim(),
            space.atom_count()
        )));
    }
    let sequence = weights.map(parse::parse_weights).transpose()?;
    let trace = match &sequence {
        Some(sequence) => weighted_trace(&op, &f, sequence, indices),
        None => cesaro_trace(&op, &f, indices),
    }
    .map_err(|e| CliError::Parse(format!("averaging: {e}")))?;
    let certificate = match egorov {
        Some((budget, tolerance)) => Some(
            egorov_certify_auto(&space, &trace, budget, tolerance)
                .map_err(|e| CliError::Parse(format!("certificate: {e}")))?,
        ),
        None => None,
    };
    let echo = echo(
        "avg-run",
        json!({
            "op": op_path.display().to_string(),
            "fn": fn_path.display().to_string(),
            "weights": weights,
            "n": indices,
            "egorov": egorov.map(|(budget, tolerance)| vec![budget, tolerance]),
        }),
        seed,
    );
    match sink.format {
        Format::Csv => {
            let mut csv = CsvDoc::new(&echo);
            let mut header = String::from("n");
            for i in 0..op.dim() {
                header.push_str(&format!(",atom{i}_re,atom{i}_im"));
            }
            header.push_str(",tail_re,tail_im");
            csv.header(&header);
            for (n, entry) in trace.indices().iter().zip(trace.entries()) {
                let mut cells = vec![n.to_string()];
                for z in entry.values() {
                    cells.push(io::fmt_float(z.re));
                    cells.push(io::fmt_float(z.im));
                }
                cells.push(io::fmt_float(entry.tail_value().re));
                cells.push(io::fmt_float(entry.tail_value().im));
                csv.row(cells);
            }
            if let Some((certificate, limit)) = &certificate {
                if sink.path.is_none() {
                    return Err(CliError::Parse(
                        "--egorov with csv format needs --out; the trace goes to the file and \
                         the certificate to stdout"
                            .into(),
                    ));
                }
                sink.emit(&csv.finish())?;
                io::emit(None, &io::json_doc(&echo, certificate_json(certificate, limit)))?;
            } else {
                sink.emit(&csv.finish())?;
            }
        }
        Format::Json => {
            let rows: Vec<Value> = trace
                .indices()
                .iter()
                .zip(trace.entries())
                .map(|(&n, entry)| {
                    json!({
                        "n": n,
                        "values": entry
                            .values()
                            .iter()
                            .map(|&z| io::complex_json(z))
                            .collect::<Vec<_>>(),
                        "tail": io::complex_json(entry.tail_value()),
                    })
                })
                .collect();
            let result = json!({
                "trace": rows,
                "certificate": certificate
                    .as_ref()
                    .map(|(certificate, limit)| certificate_json(certificate, limit)),
            });
            sink.emit(&io::json_doc(&echo, result))?;
        }
    }
    Ok(certificate.map_or(true, |(certificate, _)| certificate.is_certified()))
}

const LEVELS: [f64; 3] = [0.05, 0.5, 2.5];
const POSITIVE_CLASSES: [OperatorClass; 3] = [
    OperatorClass::Permutation,
    OperatorClass::BirkhoffMixture,
    OperatorClass::Substochastic,
];

fn class_name(class: OperatorClass) -> &'static str {
    match class {
        OperatorClass::Permutation => "permutation",
        OperatorClass::BirkhoffMixture => "birkhoff-mixture",
        OperatorClass::Substochastic => "substochastic",
        OperatorClass::PhasedSubstochastic => "phased-substochastic",
    }
}

pub fn run_weak11_suite(
    instances: u64,
    horizon: usize,
    max_atoms: usize,
    weighted: bool,
    seed: u64,
    sink: &Sink,
) -> Result<bool, CliError> {
    if instances == 0 {
        return Err(CliError::Parse("need at least one instance".into()));
    }
    if horizon == 0 {
        return Err(CliError::Parse("horizon must be at least 1".into()));
    }
    if max_atoms == 0 {
        return Err(CliError::Parse("max-atoms must be at least 1".into()));
    }
    let echo = echo(
        "weak11-suite",
        json!({
            "instances": instances,
            "horizon": horizon,
            "max-atoms": max_atoms,
            "weighted": weighted,
        }),
        Some(seed),
    );
    let mut rows = Vec::with_capacity(instances as usize);
    let mut violations = 0u64;
    for index in 0..instances {
        let mut rng = seeded_rng(seed, index);
        let atoms = rng.random_range(1..=max_atoms);
        let with_tail = index % 2 == 1;
        let (class, report) = if weighted {
            let class = OperatorClass::ALL[(index % 4) as usize];
            let level = LEVELS[((index / 4) % 3) as usize];
            let (space, op) = sample_instance(&mut rng, class, atoms, with_tail);
            let f = sample_function(&mut rng, &space, 2.0, true);
            let sequence = sample_besicovitch(&mut rng, 3, true);
            let report = check_weighted_weak11(&space, &op, &f, &sequence, level, horizon)
                .map_err(|e| CliError::Parse(format!("instance {index}: {e}")))?;
            (class, report)
        } else {
            let class = POSITIVE_CLASSES[(index % 3) as usize];
            let level = LEVELS[((index / 3) % 3) as usize];
            let (space, op) = sample_instance(&mut rng, class, atoms, with_tail);
            let f = sample_function(&mut rng, &space, 2.0, true);
            let report = check_weak11(&space, &op, &f, level, horizon)
                .map_err(|e| CliError::Parse(format!("instance {index}: {e}")))?;
            (class, report)
        };
        if !report.holds {
            violations += 1;
        }
        rows.push((index, class, atoms, with_tail, report));
    }
    match sink.format {
        Format::Json => {
            let report_rows: Vec<Value> = rows
                .iter()
                .map(|(index, class, atoms, with_tail, report)| {
                    json!({
                        "instance": index,
                        "class": class_name(*class),
                        "atoms": atoms,
                        "with_tail": with_tail,
                        "level": report.level,
                        "measure_above": report.measure_above,
                        "bound": report.bound,
                        "holds": report.holds,
                    })
                })
                .collect();
            let result = json!({
                "instances": instances,
                "violations": violations,
                "holds": violations == 0,
                "rows": report_rows,
            });
            sink.emit(&io::json_doc(&echo, result))?;
        }
        Format::Csv => {
            let mut csv = CsvDoc::new(&echo);
            csv.header("instance,class,atoms,with_tail,level,measure_above,bound,holds");
            for (index, class, atoms, with_tail, report) in &rows {
                csv.row([
                    index.to_string(),
                    class_name(*class).to_string(),
                    atoms.to_string(),
                    with_tail.to_string(),
                    io::fmt_float(report.level),
                    io::fmt_float(report.measure_above),
                    io::fmt_float(report.bound),
                    report.holds.to_string(),
                ]);
            }
            sink.emit(&csv.finish())?;
        }
    }
    Ok(violations == 0)
}

pub fn run_ww_sweep(
    system_text: &str,
    fn_text: &str,
    omega: usize,
    lambda_grid: usize,
    indices: &[usize],
    sink: &Sink,
    seed: Option<u64>,
) -> Result<bool, CliError> {
    if lambda_grid == 0 {
        return Err(CliError::Parse("lambda-grid needs at least one point".into()));
    }
    let system = parse::parse_system(system_text)?;
    let f = parse::parse_orbit_function(fn_text, system.point_count())?;
    let lambdas = unit_circle_grid(lambda_grid);
    let lanes = wiener_wintner_sweep(&system, &f, omega, &lambdas, indices)
        .map_err(|e| CliError::Parse(format!("sweep: {e}")))?;
    let echo = echo(
        "ww-sweep",
        json!({
            "system": system_text,
            "fn": fn_text,
            "omega": omega,
            "lambda-grid": lambda_grid,
            "n": indices,
        }),
        seed,
    );
    match sink.format {
        Format::Csv => {
            let mut csv = CsvDoc::new(&echo);
            csv.header("lambda_re,lambda_im,n,avg_re,avg_im,delta_re,delta_im");
            for lane in &lanes {
                for (&n, value) in lane.series.indices.iter().zip(&lane.series.values) {
                    csv.row([
                        io::fmt_float(lane.lambda.re),
                        io::fmt_float(lane.lambda.im),
                        n.to_string(),
                        io::fmt_float(value.re),
                        io::fmt_float(value.im),
                        io::fmt_float(lane.oscillation.re_span),
                        io::fmt_float(lane.oscillation.im_span),
                    ]);
                }
            }
            sink.emit(&csv.finish())?;
        }
        Format::Json => {
            let lane_values: Vec<Value> = lanes
                .iter()
                .map(|lane| {
                    json!({
                        "lambda": io::complex_json(lane.lambda),
                        "window": [lane.oscillation.window_lo, lane.oscillation.window_hi],
                        "delta": [lane.oscillation.re_span, lane.oscillation.im_span],
                        "rows": lane
                            .series
                            .indices
                            .iter()
                            .zip(&lane.series.values)
                            .map(|(&n, value)| json!({ "n": n, "avg": io::complex_json(*value) }))
                            .collect::<Vec<_>>(),
                    })
                })
                .collect();
            sink.emit(&io::json_doc(&echo, json!({ "lanes": lane_values })))?;
        }
    }
    Ok(true)
}

#[allow(clippy::too_many_arguments)]
pub fn run_return_times(
    system_a_text: &str,
    fn_a_text: &str,
    omega: usize,
    system_b_text: &str,
    fn_b_text: &str,
    x: usize,
    indices: &[usize],
    sink: &Sink,
    seed: Option<u64>,
) -> Result<bool, CliError> {
    let system_a = parse::parse_system(system_a_text)?;
    let system_b = parse::parse_system(system_b_text)?;
    let f = parse::parse_orbit_function(fn_a_text, system_a.point_count())?;
    let g = parse::parse_orbit_function(fn_b_text, system_b.point_count())?;
    let series = return_times_average(&system_a, &f, omega, &system_b, &g, x, indices)
        .map_err(|e| CliError::Parse(format!("return times: {e}")))?;
    let echo = echo(
        "return-times",
        json!({
            "system-a": system_a_text,
            "fn-a": fn_a_text,
            "omega": omega,
            "system-b": system_b_text,
            "fn-b": fn_b_text,
            "x": x,
            "n": indices,
        }),
        seed,
    );
    match sink.format {
        Format::Csv => {
            let mut csv = CsvDoc::new(&echo);
            csv.header("n,avg_re,avg_im");
            for (&n, value) in series.indices.iter().zip(&series.values) {
                csv.row([n.to_string(), io::fmt_float(value.re), io::fmt_float(value.im)]);
            }
            sink.emit(&csv.finish())?;
        }
        Format::Json => {
            let rows: Vec<Value> = series
                .indices
                .iter()
                .zip(&series.values)
                .map(|(&n, value)| json!({ "n": n, "avg": io::complex_json(*value) }))
                .collect();
            sink.emit(&io::json_doc(&echo, json!({ "rows": rows })))?;
        }
    }
    Ok(true)
}

/// Integral of the rearrangement's p-th power over measure `[0, cutoff]`.
fn truncated_power_mass(star: &StepFunction, p: u32, cutoff: f64) -> f64 {
    let mut total = 0.0;
    let mut left = 0.0;
    for (&b, &v) in star.breakpoints().iter().zip(star.step_values()) {
        let right = b.min(cutoff);
        if right > left {
            total += v.powi(p as i32) * (right - left);
        }
        if b >= cutoff {
            break;
        }
        left = b;
    }
    total
}

pub fn run_slow_decay(
    depth: u32,
    omega_max: f64,
    points: usize,
    sink: &Sink,
    seed: Option<u64>,
) -> Result<bool, CliError> {
    if !omega_max.is_finite() || omega_max <= 1.0 {
        return Err(CliError::Parse(format!("omega-max must exceed 1, got {omega_max}")));
    }
    if points < 2 {
        return Err(CliError::Parse("need at least two grid points".into()));
    }
    let grid: Vec<f64> = (0..points)
        .map(|j| omega_max.powf(j as f64 / (points - 1) as f64))
        .collect();
    let (space, f) = slow_decay_example(depth, &grid)
        .map_err(|e| CliError::Parse(format!("profile: {e}")))?;
    let star = rearrange(&space, &f);

    let extent = star.breakpoints().last().copied().unwrap_or(0.0);
    let mut cutoffs = Vec::new();
    let mut decade = 10.0;
    while decade < extent {
        cutoffs.push(decade);
        decade *= 10.0;
    }
    cutoffs.push(extent);
    let mut masses: Vec<(u32, f64, f64)> = Vec::new();
    for p in [1u32, 2, 3] {
        for &cutoff in &cutoffs {
            masses.push((p, cutoff, truncated_power_mass(&star, p, cutoff)));
        }
    }

    let echo = echo(
        "slow-decay",
        json!({ "depth": depth, "omega-max": omega_max, "points": points }),
        seed,
    );
    match sink.format {
        Format::Csv => {
            let mut csv = CsvDoc::new(&echo);
            for &(p, cutoff, mass) in &masses {
                csv.comment(&format!(
                    "truncated_mass p={p} cutoff={} mass={}",
                    io::fmt_float(cutoff),
                    io::fmt_float(mass)
                ));
            }
            csv.comment("each row gives fstar from its t up to the next row's t");
            csv.header("t,fstar");
            let doc = StepDoc::from_model(&star);
            if let Some(&first) = doc.v.first() {
                csv.row([io::fmt_float(0.0), io::fmt_float(first)]);
            }
            for (i, &t) in doc.t.iter().enumerate() {
                let next = doc.v.get(i + 1).copied().unwrap_or(doc.tail);
                csv.row([io::fmt_float(t), io::fmt_float(next)]);
            }
            sink.emit(&csv.finish())?;
        }
        Format::Json => {
            let mass_rows: Vec<Value> = masses
                .iter()
                .map(|&(p, cutoff, mass)| json!({ "p": p, "cutoff": cutoff, "mass": mass }))
                .collect();
            let result = json!({
                "profile": serde_json::to_value(StepDoc::from_model(&star))
                    .expect("step docs serialize"),
                "truncated_masses": mass_rows,
            });
            sink.emit(&io::json_doc(&echo, result))?;
        }
    }
    Ok(true)
}
