//! Text grammars for flags and config values: complex literals, weight
//! specs, system specs, norm specs, and index lists. Errors carry the byte
//! position of the offending fragment where one is meaningful.

use std::path::Path;

use ergodesk_core::averaging::{BesicovitchSequence, Perturbation, TrigPolynomial};
use ergodesk_core::norms::{ConcaveWeight, NormSpec, OrliczFunction};
use ergodesk_core::orbit::MptSystem;
use ergodesk_core::Complex64;

use crate::io::{self, FunctionDoc};
use crate::CliError;

fn parse_err(text: &str, at: usize, message: &str) -> CliError {
    CliError::Parse(format!("'{text}' at byte {at}: {message}"))
}

/// Literals like `2`, `-0.5i`, `1+2i`, `0.6-0.8i`, `i`, `1e-3+2e-4i`. The
/// split point is the last sign that does not follow an exponent marker.
pub fn parse_complex(text: &str) -> Result<Complex64, CliError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(parse_err(text, 0, "empty complex literal"));
    }
    if !s.ends_with('i') {
        let re: f64 = s
            .parse()
            .map_err(|_| parse_err(text, 0, "expected a number or a+bi"))?;
        return Ok(Complex64::new(re, 0.0));
    }
    let body = &s[..s.len() - 1];
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re_part, im_part) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("", body),
    };
    let re: f64 = if re_part.is_empty() {
        0.0
    } else {
        re_part
            .parse()
            .map_err(|_| parse_err(text, 0, "bad real part"))?
    };
    let im: f64 = match im_part {
        "" | "+" => 1.0,
        "-" => -1.0,
        _ => im_part
            .parse()
            .map_err(|_| parse_err(text, re_part.len(), "bad imaginary part"))?,
    };
    Ok(Complex64::new(re, im))
}

fn keyed<'a>(segment: &'a str, key: &str, text: &str, at: usize) -> Result<&'a str, CliError> {
    segment
        .strip_prefix(key)
        .ok_or_else(|| parse_err(text, at, &format!("expected '{key}...'")))
}

/// Weight spec grammar:
///
/// ```text
/// trig:z=<c>,lambda=<c>(;z=<c>,lambda=<c>)*(;pert:<name>:<args>)?
/// ```
///
/// where `<c>` is a complex literal, every `lambda` must sit on the unit
/// circle, and perturbations are `zero`, `harmonic:<c>`, or
/// `geometric:<c>,<ratio>`.
pub fn parse_weights(text: &str) -> Result<BesicovitchSequence, CliError> {
    let mut terms: Vec<(Complex64, Complex64)> = Vec::new();
    let mut perturbation = Perturbation::zero();
    let mut at = 0usize;
    let segments: Vec<&str> = text.split(';').collect();
    for (index, segment) in segments.iter().enumerate() {
        if index == segments.len() - 1 && segment.starts_with("pert:") {
            perturbation = parse_perturbation(&segment[5..], text, at + 5)?;
        } else if segment.starts_with("pert:") {
            return Err(parse_err(text, at, "pert must be the final segment"));
        } else {
            let body = if index == 0 {
                keyed(segment, "trig:", text, at)?
            } else {
                segment
            };
            let term_at = if index == 0 { at + 5 } else { at };
            let (z_part, lambda_part) = body
                .split_once(',')
                .ok_or_else(|| parse_err(text, term_at, "expected 'z=<c>,lambda=<c>'"))?;
            let z = parse_complex(keyed(z_part, "z=", text, term_at)?)?;
            let lambda_at = term_at + z_part.len() + 1;
            let lambda = parse_complex(keyed(lambda_part, "lambda=", text, lambda_at)?)?;
            terms.push((z, lambda));
        }
        at += segment.len() + 1;
    }
    let base = TrigPolynomial::new(&terms)
        .map_err(|e| CliError::Parse(format!("'{text}': {e}")))?;
    Ok(BesicovitchSequence::new(base, perturbation))
}

fn parse_perturbation(body: &str, text: &str, at: usize) -> Result<Perturbation, CliError> {
    if body == "zero" {
        return Ok(Perturbation::zero());
    }
    if let Some(rest) = body.strip_prefix("harmonic:") {
        let scale = parse_complex(rest)?;
        return Perturbation::harmonic(scale).map_err(|e| parse_err(text, at, &e.to_string()));
    }
    if let Some(rest) = body.strip_prefix("geometric:") {
        let (scale_part, ratio_part) = rest
            .split_once(',')
            .ok_or_else(|| parse_err(text, at, "expected 'geometric:<c>,<ratio>'"))?;
        let scale = parse_complex(scale_part)?;
        let ratio: f64 = ratio_part
            .parse()
            .map_err(|_| parse_err(text, at, "bad geometric ratio"))?;
        return Perturbation::geometric(scale, ratio)
            .map_err(|e| parse_err(text, at, &e.to_string()));
    }
    Err(parse_err(text, at, "expected zero, harmonic:<c>, or geometric:<c>,<ratio>"))
}

/// System spec grammar: `cyclic:N=<len>,r=<step>`, `shift:lo=<a>,hi=<b>`, or
/// `product:[<system>]x[<system>]` with nesting allowed.
pub fn parse_system(text: &str) -> Result<MptSystem, CliError> {
    parse_system_at(text, text, 0)
}

fn parse_system_at(spec: &str, text: &str, at: usize) -> Result<MptSystem, CliError> {
    if let Some(rest) = spec.strip_prefix("cyclic:") {
        let (n_part, r_part) = rest
            .split_once(',')
            .ok_or_else(|| parse_err(text, at, "expected 'cyclic:N=<len>,r=<step>'"))?;
        let len: usize = keyed(n_part, "N=", text, at + 7)?
            .parse()
            .map_err(|_| parse_err(text, at + 7, "bad cycle length"))?;
        let step: usize = keyed(r_part, "r=", text, at + 8 + n_part.len())?
            .parse()
            .map_err(|_| parse_err(text, at + 8 + n_part.len(), "bad step"))?;
        return MptSystem::cyclic(len, step).map_err(|e| parse_err(text, at, &e.to_string()));
    }
    if let Some(rest) = spec.strip_prefix("shift:") {
        let (lo_part, hi_part) = rest
            .split_once(',')
            .ok_or_else(|| parse_err(text, at, "expected 'shift:lo=<a>,hi=<b>'"))?;
        let lo: i64 = keyed(lo_part, "lo=", text, at + 6)?
            .parse()
            .map_err(|_| parse_err(text, at + 6, "bad window start"))?;
        let hi: i64 = keyed(hi_part, "hi=", text, at + 7 + lo_part.len())?
            .parse()
            .map_err(|_| parse_err(text, at + 7 + lo_part.len(), "bad window end"))?;
        return MptSystem::integer_shift(lo, hi).map_err(|e| parse_err(text, at, &e.to_string()));
    }
    if let Some(rest) = spec.strip_prefix("product:") {
        let (left, right) = split_product(rest, text, at + 8)?;
        let a = parse_system_at(left, text, at + 9)?;
        let b = parse_system_at(right, text, at + 12 + left.len())?;
        return Ok(MptSystem::product(a, b));
    }
    Err(parse_err(text, at, "expected cyclic:, shift:, or product:"))
}

fn split_product<'a>(rest: &'a str, text: &str, at: usize) -> Result<(&'a str, &'a str), CliError> {
    let bytes = rest.as_bytes();
    if bytes.first() != Some(&b'[') {
        return Err(parse_err(text, at, "expected '[<system>]x[<system>]'"));
    }
    let mut depth = 0usize;
    let mut close = None;
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'[' => depth += 1,
            b']' => {
                depth -= 1;
                if depth == 0 {
                    close = Some(i);
                    break;
                }
            }
            _ => {}
        }
    }
    let close = close.ok_or_else(|| parse_err(text, at, "unbalanced brackets"))?;
    let left = &rest[1..close];
    let remainder = &rest[close + 1..];
    let inner = remainder
        .strip_prefix("x[")
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| parse_err(text, at + close + 1, "expected 'x[<system>]'"))?;
    Ok((left, inner))
}

/// Norm spec tokens, comma separated. Recognized tokens:
///
/// `l1`, `linf`, `l1cap`, `l1plus`, `orlicz:p=<p>`, `orlicz:exp`,
/// `orlicz:loglin`, `lorentz:t`, `lorentz:sqrt`, `lorentz:log`,
/// `lorentz:alpha=<a>`, and the same four shapes under `marcinkiewicz:`.
pub fn parse_norm_specs(text: &str) -> Result<Vec<(String, NormSpec)>, CliError> {
    let mut specs = Vec::new();
    for token in text.split(',') {
        let token = token.trim();
        specs.push((token.to_string(), parse_norm_spec(token)?));
    }
    Ok(specs)
}

fn parse_norm_spec(token: &str) -> Result<NormSpec, CliError> {
    let bad = |e: &dyn std::fmt::Display| CliError::Parse(format!("norm spec '{token}': {e}"));
    match token {
        "l1" => return Ok(NormSpec::L1),
        "linf" => return Ok(NormSpec::LInf),
        "l1cap" => return Ok(NormSpec::L1CapLInf),
        "l1plus" => return Ok(NormSpec::L1PlusLInf),
        _ => {}
    }
    if let Some(rest) = token.strip_prefix("orlicz:") {
        let phi = match rest {
            "exp" => OrliczFunction::exp_minus_one(),
            "loglin" => OrliczFunction::linear_log(),
            _ => {
                let p: f64 = keyed(rest, "p=", token, 7)?
                    .parse()
                    .map_err(|_| bad(&"bad exponent"))?;
                OrliczFunction::power(p)
            }
        };
        return Ok(NormSpec::Orlicz(phi.map_err(|e| bad(&e))?));
    }
    let (family, rest) = match token.strip_prefix("lorentz:") {
        Some(rest) => (NormSpec::Lorentz as fn(ConcaveWeight) -> NormSpec, rest),
        None => match token.strip_prefix("marcinkiewicz:") {
            Some(rest) => (NormSpec::Marcinkiewicz as fn(ConcaveWeight) -> NormSpec, rest),
            None => return Err(bad(&"unknown norm")),
        },
    };
    let phi = match rest {
        "t" => ConcaveWeight::power(1.0),
        "sqrt" => ConcaveWeight::sqrt(),
        "log" => ConcaveWeight::log_plus(),
        _ => {
            let alpha: f64 = rest
                .strip_prefix("alpha=")
                .ok_or_else(|| bad(&"expected t, sqrt, log, or alpha=<a>"))?
                .parse()
                .map_err(|_| bad(&"bad exponent"))?;
            ConcaveWeight::power(alpha)
        }
    };
    Ok(family(phi.map_err(|e| bad(&e))?))
}

/// Comma-separated report indices, strictly increasing, all at least 1.
pub fn parse_indices(text: &str) -> Result<Vec<usize>, CliError> {
    let mut indices = Vec::new();
    let mut at = 0usize;
    for token in text.split(',') {
        let n: usize = token
            .trim()
            .parse()
            .map_err(|_| parse_err(text, at, "bad index"))?;
        if n == 0 {
            return Err(parse_err(text, at, "indices start at 1"));
        }
        if indices.last().is_some_and(|&last| last >= n) {
            return Err(parse_err(text, at, "indices must be strictly increasing"));
        }
        indices.push(n);
        at += token.len() + 1;
    }
    if indices.is_empty() {
        return Err(parse_err(text, 0, "need at least one index"));
    }
    Ok(indices)
}

/// A function over a system's points: `chi:<index>` for an indicator,
/// `const:<c>` for a constant, anything else is a function JSON path whose
/// value count must match the point count.
pub fn parse_orbit_function(text: &str, points: usize) -> Result<Vec<Complex64>, CliError> {
    if let Some(rest) = text.strip_prefix("chi:") {
        let index: usize = rest
            .parse()
            .map_err(|_| parse_err(text, 4, "bad indicator index"))?;
        if index >= points {
            return Err(parse_err(
                text,
                4,
                &format!("indicator index {index} outside the {points} system points"),
            ));
        }
        let mut values = vec![Complex64::new(0.0, 0.0); points];
        values[index] = Complex64::new(1.0, 0.0);
        return Ok(values);
    }
    if let Some(rest) = text.strip_prefix("const:") {
        return Ok(vec![parse_complex(rest)?; points]);
    }
    let doc: FunctionDoc = io::read_json(Path::new(text))?;
    if doc.values.len() != points {
        return Err(CliError::Parse(format!(
            "{text}: {} values but the system has {points} points",
            doc.values.len()
        )));
    }
    Ok(doc.values.iter().map(|v| v.to_complex()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn complex_literals_cover_the_sign_and_exponent_forms() {
        assert_eq!(parse_complex("2").unwrap(), c(2.0, 0.0));
        assert_eq!(parse_complex("-0.5").unwrap(), c(-0.5, 0.0));
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("3i").unwrap(), c(0.0, 3.0));
        assert_eq!(parse_complex("1+2i").unwrap(), c(1.0, 2.0));
        assert_eq!(parse_complex("0.6-0.8i").unwrap(), c(0.6, -0.8));
        assert_eq!(parse_complex("-3-4i").unwrap(), c(-3.0, -4.0));
        assert_eq!(parse_complex("1+i").unwrap(), c(1.0, 1.0));
        assert_eq!(parse_complex("1e-3+2e-4i").unwrap(), c(1e-3, 2e-4));
        assert_eq!(parse_complex("1E-3i").unwrap(), c(0.0, 1e-3));
        assert!(parse_complex("").is_err());
        assert!(parse_complex("1+").is_err());
        assert!(parse_complex("one").is_err());
    }

    #[test]
    fn weight_specs_build_sequences() {
        let seq = parse_weights("trig:z=1,lambda=1").unwrap();
        assert!(seq.is_constant_one());
        assert_eq!(seq.bound(), 1.0);

        let seq = parse_weights("trig:z=1,lambda=1;pert:harmonic:0.5").unwrap();
        assert_eq!(seq.bound(), 1.5);

        let seq = parse_weights("trig:z=0.5,lambda=0.6+0.8i;z=0.5i,lambda=-1").unwrap();
        assert_eq!(seq.base().coefficients().len(), 2);

        let seq = parse_weights("trig:z=1,lambda=i;pert:geometric:0.25,0.5").unwrap();
        assert_eq!(seq.bound(), 1.25);
    }

    #[test]
    fn weight_specs_reject_off_circle_frequencies_and_misplaced_segments() {
        assert!(parse_weights("trig:z=1,lambda=0.7+0.714i").is_err());
        assert!(parse_weights("trig:z=1,lambda=1;pert:zero;z=1,lambda=1").is_err());
        assert!(parse_weights("z=1,lambda=1").is_err());
        assert!(parse_weights("trig:z=1").is_err());
        assert!(parse_weights("trig:z=1,lambda=1;pert:cubic:1").is_err());
    }

    #[test]
    fn system_specs_cover_all_three_shapes() {
        let cyclic = parse_system("cyclic:N=12,r=5").unwrap();
        assert_eq!(cyclic.point_count(), 12);
        assert_eq!(cyclic.advance(10).unwrap(), 3);

        let shift = parse_system("shift:lo=-5,hi=5").unwrap();
        assert_eq!(shift.point_count(), 11);

        let product = parse_system("product:[cyclic:N=3,r=1]x[cyclic:N=4,r=1]").unwrap();
        assert_eq!(product.point_count(), 12);

        let nested = parse_system("product:[product:[cyclic:N=2,r=1]x[cyclic:N=3,r=1]]x[shift:lo=0,hi=4]").unwrap();
        assert_eq!(nested.point_count(), 30);

        assert!(parse_system("torus:N=3").is_err());
        assert!(parse_system("cyclic:N=0,r=1").is_err());
        assert!(parse_system("product:[cyclic:N=3,r=1]").is_err());
    }

    #[test]
    fn norm_specs_map_to_the_catalog() {
        let specs = parse_norm_specs("l1,linf,l1cap,l1plus,orlicz:p=2,lorentz:sqrt").unwrap();
        assert_eq!(specs.len(), 6);
        assert_eq!(specs[0].0, "l1");
        assert!(matches!(specs[4].1, NormSpec::Orlicz(_)));
        assert!(matches!(specs[5].1, NormSpec::Lorentz(_)));
        assert!(matches!(
            parse_norm_spec("marcinkiewicz:alpha=0.3").unwrap(),
            NormSpec::Marcinkiewicz(_)
        ));
        assert!(parse_norm_spec("l3").is_err());
        assert!(parse_norm_spec("lorentz:alpha=1.5").is_err());
        assert!(parse_norm_spec("orlicz:p=0.5").is_err());
    }

    #[test]
    fn index_lists_must_increase() {
        assert_eq!(parse_indices("1,10,100").unwrap(), vec![1, 10, 100]);
        assert!(parse_indices("10,10").is_err());
        assert!(parse_indices("0,5").is_err());
        assert!(parse_indices("five").is_err());
        assert!(parse_indices("").is_err());
    }

    #[test]
    fn orbit_function_shortcuts_expand() {
        let chi = parse_orbit_function("chi:2", 4).unwrap();
        assert_eq!(chi[2], c(1.0, 0.0));
        assert_eq!(chi.iter().map(|z| z.norm()).sum::<f64>(), 1.0);
        let ones = parse_orbit_function("const:1", 3).unwrap();
        assert_eq!(ones, vec![c(1.0, 0.0); 3]);
        assert!(parse_orbit_function("chi:9", 4).is_err());
    }
}
