//! Orbitwise averages of measure-preserving point maps.
//!
//! These systems act on finitely many points, so every claim about an orbit
//! average is checkable by running the orbit. The sweep in
//! [`wiener_wintner_sweep`] follows one base point and reports, for a whole
//! grid of unimodular frequencies at once, how much the weighted averages
//! `(1/n) sum_{k<n} lambda^k f(T^k x)` still oscillate across the trailing
//! window `[H/2, H]`. Uniform smallness across the grid is the computable
//! shadow of a wholly oscillation-free limit.

use alloc::boxed::Box;
use alloc::vec::Vec;

use num_complex::Complex64;

/// Frequencies may sit off the unit circle by at most this much.
pub const CIRCLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OrbitError {
    #[error("integer shift needs lo <= hi spanning at most 2^32 points, got [{lo}, {hi}]")]
    BadShiftRange { lo: i64, hi: i64 },
    #[error("cyclic system needs at least one point")]
    EmptyCycle,
    #[error("orbit left the finite domain at point index {point}")]
    Escaped { point: usize },
    #[error("function has {got} samples but the system has {expected} points")]
    FunctionLength { got: usize, expected: usize },
    #[error("start index {start} out of range, the system has {count} points")]
    BadStart { start: usize, count: usize },
    #[error("requested indices must be nonempty, strictly increasing, and start at 1 or later")]
    BadIndexList,
    #[error("sample run is shorter than the largest requested index")]
    ShortSamples,
    #[error("frequency {index} is off the unit circle by {defect}, more than {CIRCLE_TOL}")]
    OffCircle { index: usize, defect: f64 },
    #[error("oscillation needs at least 4 reported entries, got {0}")]
    ShortSeries(usize),
    #[error("sweeps need a horizon of at least 2 to split a window")]
    ShortWindow,
}

/// A finite measure-preserving point map. Points are flat indices in
/// `0..point_count`; the measure is counting measure, preserved by
/// construction for the cyclic and product shapes and by partiality for the
/// integer shift, which refuses to wrap.
#[derive(Debug, Clone, PartialEq)]
pub enum MptSystem {
    /// `x -> x + 1` on the integer window `{lo, ..., hi}`. Orbits that reach
    /// `hi` cannot advance again; that is an [`OrbitError::Escaped`], never a
    /// silent wraparound.
    IntegerShift { lo: i64, hi: i64 },
    /// `x -> x + step (mod len)`.
    CyclicRotation { len: usize, step: usize },
    /// Coordinatewise action; the flat index is `a_index * b_count + b_index`.
    Product(Box<MptSystem>, Box<MptSystem>),
}

impl MptSystem {
    pub fn integer_shift(lo: i64, hi: i64) -> Result<Self, OrbitError> {
        let span = i128::from(hi) - i128::from(lo) + 1;
        if span < 1 || span > 1 << 32 {
            return Err(OrbitError::BadShiftRange { lo, hi });
        }
        Ok(MptSystem::IntegerShift { lo, hi })
    }

    pub fn cyclic(len: usize, step: usize) -> Result<Self, OrbitError> {
        if len == 0 {
            return Err(OrbitError::EmptyCycle);
        }
        Ok(MptSystem::CyclicRotation { len, step: step % len })
    }

    pub fn product(a: MptSystem, b: MptSystem) -> Self {
        MptSystem::Product(Box::new(a), Box::new(b))
    }

    pub fn point_count(&self) -> usize {
        match self {
            MptSystem::IntegerShift { lo, hi } => (i128::from(*hi) - i128::from(*lo) + 1) as usize,
            MptSystem::CyclicRotation { len, .. } => *len,
            MptSystem::Product(a, b) => a.point_count() * b.point_count(),
        }
    }

    /// One application of the map.
    pub fn advance(&self, index: usize) -> Result<usize, OrbitError> {
        match self {
            MptSystem::IntegerShift { .. } => {
                if index + 1 >= self.point_count() {
                    Err(OrbitError::Escaped { point: index })
                } else {
                    Ok(index + 1)
                }
            }
            MptSystem::CyclicRotation { len, step } => Ok((index + step) % len),
            MptSystem::Product(a, b) => {
                let b_count = b.point_count();
                let a_next = a.advance(index / b_count)?;
                let b_next = b.advance(index % b_count)?;
                Ok(a_next * b_count + b_next)
            }
        }
    }
}

fn validate_indices(indices: &[usize]) -> Result<(), OrbitError> {
    if indices.is_empty() || indices[0] == 0 {
        return Err(OrbitError::BadIndexList);
    }
    if indices.windows(2).any(|pair| pair[0] >= pair[1]) {
        return Err(OrbitError::BadIndexList);
    }
    Ok(())
}

/// `f(x), f(Tx), ..., f(T^{horizon-1} x)`.
pub fn orbit_samples(
    system: &MptSystem,
    f: &[Complex64],
    start: usize,
    horizon: usize,
) -> Result<Vec<Complex64>, OrbitError> {
    let count = system.point_count();
    if f.len() != count {
        return Err(OrbitError::FunctionLength { got: f.len(), expected: count });
    }
    if start >= count {
        return Err(OrbitError::BadStart { start, count });
    }
    let mut samples = Vec::with_capacity(horizon);
    let mut at = start;
    for step in 0..horizon {
        samples.push(f[at]);
        if step + 1 < horizon {
            at = system.advance(at)?;
        }
    }
    Ok(samples)
}

/// Scalar averages recorded at requested indices.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitSeries {
    pub indices: Vec<usize>,
    pub values: Vec<Complex64>,
}

/// `(1/n) sum_{k<n} lambda^k samples[k]` at each requested index.
pub fn averages_from_samples(
    samples: &[Complex64],
    lambda: Complex64,
    indices: &[usize],
) -> Result<OrbitSeries, OrbitError> {
    validate_indices(indices)?;
    let horizon = *indices.last().expect("validated nonempty");
    if samples.len() < horizon {
        return Err(OrbitError::ShortSamples);
    }
    let mut power = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut values = Vec::with_capacity(indices.len());
    let mut cursor = 0;
    for (k, sample) in samples.iter().take(horizon).enumerate() {
        sum += power * sample;
        power *= lambda;
        let n = k + 1;
        if indices[cursor] == n {
            values.push(sum / n as f64);
            cursor += 1;
            if cursor == indices.len() {
                break;
            }
        }
    }
    Ok(OrbitSeries { indices: indices.to_vec(), values })
}

/// Spread of a series over an index window: the sides of the smallest
/// axis-aligned box containing the visited values.
#[derive(Debug, Clone, PartialEq)]
pub struct OscillationReport {
    pub window_lo: usize,
    pub window_hi: usize,
    pub re_span: f64,
    pub im_span: f64,
}

impl OscillationReport {
    pub fn max_span(&self) -> f64 {
        self.re_span.max(self.im_span)
    }
}

fn span_report(window_lo: usize, window_hi: usize, values: &[Complex64]) -> OscillationReport {
    let mut re_lo = f64::INFINITY;
    let mut re_hi = f64::NEG_INFINITY;
    let mut im_lo = f64::INFINITY;
    let mut im_hi = f64::NEG_INFINITY;
    for value in values {
        re_lo = re_lo.min(value.re);
        re_hi = re_hi.max(value.re);
        im_lo = im_lo.min(value.im);
        im_hi = im_hi.max(value.im);
    }
    OscillationReport { window_lo, window_hi, re_span: re_hi - re_lo, im_span: im_hi - im_lo }
}

/// Oscillation of a reported series over the trailing half of its entries,
/// by position. Needs at least 4 entries.
pub fn oscillation(series: &OrbitSeries) -> Result<OscillationReport, OrbitError> {
    let count = series.values.len();
    if count < 4 {
        return Err(OrbitError::ShortSeries(count));
    }
    let start = count / 2;
    Ok(span_report(
        series.indices[start],
        series.indices[count - 1],
        &series.values[start..],
    ))
}

/// One frequency's view of the sweep: its sparse average series plus the
/// oscillation of the dense averages over the window `[H/2, H]`.
#[derive(Debug, Clone, PartialEq)]
pub struct WienerWintnerLane {
    pub lambda: Complex64,
    pub series: OrbitSeries,
    pub oscillation: OscillationReport,
}

/// Runs the frequency sweep from one base point. The orbit is sampled once;
/// each lane then streams its own powers of lambda. The oscillation is taken
/// over every index in `[H/2, H]`, not only the reported ones, so a lane
/// cannot look calm by reporting sparsely.
pub fn wiener_wintner_sweep(
    system: &MptSystem,
    f: &[Complex64],
    start: usize,
    lambdas: &[Complex64],
    indices: &[usize],
) -> Result<Vec<WienerWintnerLane>, OrbitError> {
    validate_indices(indices)?;
    for (index, lambda) in lambdas.iter().enumerate() {
        let defect = (lambda.norm() - 1.0).abs();
        if !defect.is_finite() || defect > CIRCLE_TOL {
            return Err(OrbitError::OffCircle { index, defect });
        }
    }
    let horizon = *indices.last().expect("validated nonempty");
    if horizon < 2 {
        return Err(OrbitError::ShortWindow);
    }
    let samples = orbit_samples(system, f, start, horizon)?;
    let window_lo = horizon / 2;

    let mut lanes = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let mut power = Complex64::new(1.0, 0.0);
        let mut sum = Complex64::new(0.0, 0.0);
        let mut values = Vec::with_capacity(indices.len());
        let mut cursor = 0;
        let mut window_values = Vec::with_capacity(horizon - window_lo + 1);
        for (k, sample) in samples.iter().enumerate() {
            sum += power * sample;
            power *= lambda;
            let n = k + 1;
            let average = sum / n as f64;
            if cursor < indices.len() && indices[cursor] == n {
                values.push(average);
                cursor += 1;
            }
            if n >= window_lo {
                window_values.push(average);
            }
        }
        lanes.push(WienerWintnerLane {
            lambda,
            series: OrbitSeries { indices: indices.to_vec(), values },
            oscillation: span_report(window_lo, horizon, &window_values),
        });
    }
    Ok(lanes)
}

/// `count` equally spaced points on the unit circle, starting at 1.
pub fn unit_circle_grid(count: usize) -> Vec<Complex64> {
    (0..count)
        .map(|j| Complex64::from_polar(1.0, core::f64::consts::TAU * j as f64 / count as f64))
        .collect()
}

/// Bilinear return-times averages along two independent orbits:
/// `(1/n) sum_{k<n} f(S^k a) g(R^k b)` at the requested indices.
pub fn return_times_average(
    system_a: &MptSystem,
    f: &[Complex64],
    start_a: usize,
    system_b: &MptSystem,
    g: &[Complex64],
    start_b: usize,
    indices: &[usize],
) -> Result<OrbitSeries, OrbitError> {
    validate_indices(indices)?;
    let horizon = *indices.last().expect("validated nonempty");
    let samples_a = orbit_samples(system_a, f, start_a, horizon)?;
    let samples_b = orbit_samples(system_b, g, start_b, horizon)?;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut values = Vec::with_capacity(indices.len());
    let mut cursor = 0;
    for (k, (a, b)) in samples_a.iter().zip(&samples_b).enumerate() {
        sum += a * b;
        let n = k + 1;
        if indices[cursor] == n {
            values.push(sum / n as f64);
            cursor += 1;
            if cursor == indices.len() {
                break;
            }
        }
    }
    Ok(OrbitSeries { indices: indices.to_vec(), values })
}
