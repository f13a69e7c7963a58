//! Non-increasing rearrangements and Hardy-Littlewood submajorization.
//!
//! The rearrangement of a function f on a tailed space is the step function
//!
//! ```text
//! f*(t) = inf{ lambda > 0 : mu{ |f| > lambda } <= t },      t > 0,
//! ```
//!
//! realized here with explicit breakpoints: sort the atoms by decreasing
//! |value|, emit cumulative weights as breakpoints, and let the value on the
//! infinite tail become the terminal level. Atoms whose |value| does not
//! exceed the tail level are absorbed by it: against a tail of infinite
//! measure sitting at that level they contribute nothing to f*.
//!
//! Submajorization g -<-< f compares cumulative integrals:
//!
//! ```text
//! integral_0^s g*  <=  integral_0^s f*   for every s > 0.
//! ```
//!
//! Both cumulatives are piecewise linear, so it suffices to compare them at
//! the merged breakpoints, at one point beyond the last breakpoint, and to
//! compare terminal slopes (the tail levels).
//!
//! `distribution` in [`crate::measure`] accumulates weights in the same
//! canonical order used here, which makes equimeasurability an exact identity
//! on the model rather than an approximation.

use alloc::vec::Vec;

use crate::measure::{check_shape, magnitude_order, TailedFunction, TailedMeasureSpace};

/// Default absolute slack for majorization comparisons.
pub const MAJORIZATION_TOL: f64 = 1e-12;

/// Errors from constructing step functions.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StepFunctionError {
    #[error("breakpoints and values must have equal length ({breakpoints} vs {values})")]
    LengthMismatch { breakpoints: usize, values: usize },
    #[error("breakpoints must be finite, positive, and strictly increasing (index {0})")]
    BadBreakpoint(usize),
    #[error("step values must be finite and nonnegative (index {0})")]
    BadValue(usize),
    #[error("tail level must be finite and nonnegative")]
    BadTail,
}

/// A right-continuous nonnegative step function on (0, infinity).
///
/// Value `values[i]` holds on `[breakpoints[i-1], breakpoints[i])` (with an
/// implicit leading breakpoint 0), and `tail_value` holds from the last
/// breakpoint on. Breakpoints are strictly increasing and positive. When the
/// function represents a rearrangement the values are strictly decreasing and
/// stay above the tail level, but the type does not force monotonicity.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    tail_value: f64,
}

impl StepFunction {
    pub fn new(
        breakpoints: Vec<f64>,
        values: Vec<f64>,
        tail_value: f64,
    ) -> Result<Self, StepFunctionError> {
        if breakpoints.len() != values.len() {
            return Err(StepFunctionError::LengthMismatch {
                breakpoints: breakpoints.len(),
                values: values.len(),
            });
        }
        let mut previous = 0.0;
        for (index, &b) in breakpoints.iter().enumerate() {
            if !b.is_finite() || b <= previous {
                return Err(StepFunctionError::BadBreakpoint(index));
            }
            previous = b;
        }
        for (index, &v) in values.iter().enumerate() {
            if !v.is_finite() || v < 0.0 {
                return Err(StepFunctionError::BadValue(index));
            }
        }
        if !tail_value.is_finite() || tail_value < 0.0 {
            return Err(StepFunctionError::BadTail);
        }
        Ok(Self { breakpoints, values, tail_value })
    }

    /// The constant function `level` on all of (0, infinity).
    pub fn constant(level: f64) -> Self {
        assert!(level.is_finite() && level >= 0.0, "level must be finite and nonnegative");
        Self {
            breakpoints: Vec::new(),
            values: Vec::new(),
            tail_value: level,
        }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn step_values(&self) -> &[f64] {
        &self.values
    }

    pub fn tail_value(&self) -> f64 {
        self.tail_value
    }

    /// Point evaluation (right-continuous convention).
    ///
    /// # Panics
    ///
    /// When `t <= 0` or `t` is not finite.
    pub fn eval(&self, t: f64) -> f64 {
        assert!(t.is_finite() && t > 0.0, "step functions live on (0, infinity)");
        let crossed = self.breakpoints.partition_point(|&b| b <= t);
        if crossed == self.breakpoints.len() {
            self.tail_value
        } else {
            self.values[crossed]
        }
    }

    /// Exact cumulative integral over (0, s], in closed form.
    pub fn cumulative(&self, s: f64) -> f64 {
        assert!(s.is_finite() && s >= 0.0, "upper limit must be finite and nonnegative");
        let mut total = 0.0;
        let mut left = 0.0;
        for (&b, &v) in self.breakpoints.iter().zip(&self.values) {
            if s <= b {
                total += v * (s - left);
                return total;
            }
            total += v * (b - left);
            left = b;
        }
        total + self.tail_value * (s - left)
    }

    /// Integral over the step region (up to the last breakpoint).
    pub fn step_mass(&self) -> f64 {
        match self.breakpoints.last() {
            Some(&b) => self.cumulative(b),
            None => 0.0,
        }
    }

    /// Lebesgue measure of `{ t : value > level }`, assuming the function is
    /// non-increasing (as every rearrangement is). Infinite when the tail
    /// sits above `level`.
    pub fn level_measure(&self, level: f64) -> f64 {
        assert!(level >= 0.0, "level must be nonnegative");
        if self.tail_value > level {
            return f64::INFINITY;
        }
        let mut measure = 0.0;
        for (&b, &v) in self.breakpoints.iter().zip(&self.values) {
            if v > level {
                measure = b;
            } else {
                break;
            }
        }
        measure
    }

    pub fn is_nonincreasing(&self) -> bool {
        let mut previous = f64::INFINITY;
        for &v in &self.values {
            if v > previous {
                return false;
            }
            previous = v;
        }
        self.tail_value <= previous
    }
}

/// The non-increasing rearrangement f* of `f` on its space.
///
/// Breakpoints are running sums of atom weights in the canonical magnitude
/// order; ties in |value| are coalesced into a single step. On a space with
/// an infinite tail, |tail value| becomes the terminal level and absorbs all
/// atoms at or below it.
pub fn rearrange(space: &TailedMeasureSpace, f: &TailedFunction) -> StepFunction {
    check_shape(space, f);
    let tail_level = if space.has_infinite_tail() {
        f.tail_value().norm()
    } else {
        0.0
    };
    let mut breakpoints: Vec<f64> = Vec::new();
    let mut values: Vec<f64> = Vec::new();
    let mut mass = 0.0;
    for &index in &magnitude_order(f.values()) {
        let magnitude = f.value(index).norm();
        if magnitude <= tail_level {
            break;
        }
        mass += space.weight(index);
        if values.last() == Some(&magnitude) {
            *breakpoints.last_mut().expect("values and breakpoints move together") = mass;
        } else {
            breakpoints.push(mass);
            values.push(magnitude);
        }
    }
    let step = StepFunction::new(breakpoints, values, tail_level)
        .expect("rearrangement invariants hold by construction");
    debug_assert!(step.is_nonincreasing());
    step
}

/// Hardy-Littlewood submajorization: does `dominant` majorize `dominated`?
///
/// Checks `cumulative(dominated, s) <= cumulative(dominant, s) + tol` at the
/// merged breakpoints and one point past the last of them, and compares the
/// terminal slopes (tail levels) so the verdict covers s -> infinity. Both
/// cumulatives are piecewise linear with kinks only at breakpoints, which
/// makes this finite check complete.
pub fn majorizes(dominant: &StepFunction, dominated: &StepFunction, tol: f64) -> bool {
    assert!(tol >= 0.0, "tolerance must be nonnegative");
    if dominated.tail_value() > dominant.tail_value() + tol {
        return false;
    }
    let mut probes: Vec<f64> = dominant
        .breakpoints()
        .iter()
        .chain(dominated.breakpoints())
        .copied()
        .collect();
    if probes.is_empty() {
        probes.push(1.0);
    } else {
        let last = probes.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        probes.push(last + 1.0);
    }
    probes
        .iter()
        .all(|&s| dominated.cumulative(s) <= dominant.cumulative(s) + tol)
}
