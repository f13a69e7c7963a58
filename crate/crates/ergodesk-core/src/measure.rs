//! Desk models of sigma-finite measure spaces and the functions on them.
//!
//! A [`TailedMeasureSpace`] has finitely many atoms with positive weights,
//! optionally followed by a tail of infinite measure. A [`TailedFunction`]
//! assigns a complex value to each atom and a single constant value to the
//! tail, so the pair can stand in for a simple function on a genuinely
//! infinite space while staying finitely checkable.
//!
//! The central smallness notion is decay in measure:
//!
//! ```text
//! f decays in measure  <=>  mu{ |f| > lambda } < infinity  for every lambda > 0
//! ```
//!
//! On a tailed model this says exactly that the tail value is zero (or that
//! there is no tail). Such an `f` splits, for any threshold eps > 0, into an
//! integrable spike and a uniformly small remainder:
//!
//! ```text
//! f = f * 1{|f| > eps}  +  f * 1{|f| <= eps},      ||remainder||_inf <= eps
//! ```
//!
//! [`threshold_split`] performs that decomposition exactly, coordinate by
//! coordinate. [`slow_decay_example`] samples the running example of a
//! function that decays in measure but lies outside every L^p with p >= 1.

use alloc::vec::Vec;

use num_complex::Complex64;
// Inherent float methods cover the std build; the trait supplies powf and ln
// without std.
#[cfg_attr(feature = "std", allow(unused_imports))]
use num_traits::Float;

/// Errors from constructing or querying desk models.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    /// A space needs at least one atom.
    #[error("atom list must be nonempty")]
    EmptyAtomList,
    /// Atom weights must be finite and strictly positive.
    #[error("atom weight at index {index} must be finite and positive, got {weight}")]
    BadWeight { index: usize, weight: f64 },
    /// Function values must be finite in both components.
    #[error("function value at index {index} is not finite")]
    NonfiniteValue { index: usize },
    /// The tail value must be finite.
    #[error("tail value is not finite")]
    NonfiniteTail,
    /// Thresholds must be finite and strictly positive.
    #[error("threshold must be finite and positive, got {0}")]
    BadThreshold(f64),
    /// L^p exponents must satisfy p >= 1 (infinity allowed).
    #[error("exponent must satisfy p >= 1, got {0}")]
    BadExponent(f64),
    /// The function carries a nonzero value on the infinite tail, so its
    /// super-level sets have infinite measure.
    #[error("function does not decay in measure: nonzero value on the infinite tail")]
    TailObstruction,
    /// A sample grid was rejected.
    #[error("invalid sample grid: {0}")]
    BadGrid(&'static str),
    /// Sample depth must be at least 1.
    #[error("sample depth must be at least 1")]
    BadDepth,
}

/// Finitely many weighted atoms, optionally extended by an infinite tail.
///
/// The tail carries no atoms; it only matters through the flag, which decides
/// whether constant-on-the-tail function values occupy infinite measure.
#[derive(Debug, Clone, PartialEq)]
pub struct TailedMeasureSpace {
    weights: Vec<f64>,
    infinite_tail: bool,
}

impl TailedMeasureSpace {
    /// Builds a space from positive atom weights.
    pub fn new(weights: Vec<f64>, infinite_tail: bool) -> Result<Self, ModelError> {
        if weights.is_empty() {
            return Err(ModelError::EmptyAtomList);
        }
        for (index, &weight) in weights.iter().enumerate() {
            if !weight.is_finite() || weight <= 0.0 {
                return Err(ModelError::BadWeight { index, weight });
            }
        }
        Ok(Self { weights, infinite_tail })
    }

    /// A space of `atom_count` unit-weight atoms.
    pub fn uniform(atom_count: usize, infinite_tail: bool) -> Result<Self, ModelError> {
        Self::new(alloc::vec![1.0; atom_count], infinite_tail)
    }

    pub fn atom_count(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, index: usize) -> f64 {
        self.weights[index]
    }

    pub fn has_infinite_tail(&self) -> bool {
        self.infinite_tail
    }

    /// Sum of the atom weights, tail excluded.
    pub fn atom_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Total measure: infinite when the tail is present.
    pub fn total_mass(&self) -> f64 {
        if self.infinite_tail {
            f64::INFINITY
        } else {
            self.atom_mass()
        }
    }
}

/// A complex simple function: one value per atom plus the constant tail value.
///
/// The tail value is meaningful only on spaces with an infinite tail, but it
/// is always carried so that algebraic identities hold coordinate by
/// coordinate. All components are finite; constructors reject NaN and
/// infinities.
#[derive(Debug, Clone, PartialEq)]
pub struct TailedFunction {
    values: Vec<Complex64>,
    tail_value: Complex64,
}

impl TailedFunction {
    pub fn new(values: Vec<Complex64>, tail_value: Complex64) -> Result<Self, ModelError> {
        for (index, value) in values.iter().enumerate() {
            if !value.re.is_finite() || !value.im.is_finite() {
                return Err(ModelError::NonfiniteValue { index });
            }
        }
        if !tail_value.re.is_finite() || !tail_value.im.is_finite() {
            return Err(ModelError::NonfiniteTail);
        }
        Ok(Self { values, tail_value })
    }

    /// Convenience constructor for real-valued data.
    pub fn from_real(values: &[f64], tail_value: f64) -> Result<Self, ModelError> {
        Self::new(
            values.iter().map(|&re| Complex64::new(re, 0.0)).collect(),
            Complex64::new(tail_value, 0.0),
        )
    }

    /// The zero function on `atom_count` atoms.
    pub fn zero(atom_count: usize) -> Self {
        Self {
            values: alloc::vec![Complex64::new(0.0, 0.0); atom_count],
            tail_value: Complex64::new(0.0, 0.0),
        }
    }

    /// Constant function, tail included.
    pub fn constant(atom_count: usize, value: Complex64) -> Self {
        assert!(value.re.is_finite() && value.im.is_finite(), "constant must be finite");
        Self {
            values: alloc::vec![value; atom_count],
            tail_value: value,
        }
    }

    /// The constant one function (the usual obstruction witness: it never
    /// decays in measure on a tailed space).
    pub fn one(atom_count: usize) -> Self {
        Self::constant(atom_count, Complex64::new(1.0, 0.0))
    }

    pub fn atom_count(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value(&self, index: usize) -> Complex64 {
        self.values[index]
    }

    pub fn tail_value(&self) -> Complex64 {
        self.tail_value
    }

    /// Entrywise modulus |f| (a nonnegative real-valued function).
    pub fn modulus(&self) -> Self {
        Self {
            values: self.values.iter().map(|v| Complex64::new(v.norm(), 0.0)).collect(),
            tail_value: Complex64::new(self.tail_value.norm(), 0.0),
        }
    }

    /// Entrywise scaling by a complex constant.
    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            values: self.values.iter().map(|v| v * factor).collect(),
            tail_value: self.tail_value * factor,
        }
    }

    /// Entrywise sum; panics on atom-count mismatch.
    pub fn plus(&self, other: &Self) -> Self {
        assert_eq!(self.values.len(), other.values.len(), "atom count mismatch");
        Self {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
            tail_value: self.tail_value + other.tail_value,
        }
    }

    /// Entrywise difference; panics on atom-count mismatch.
    pub fn minus(&self, other: &Self) -> Self {
        assert_eq!(self.values.len(), other.values.len(), "atom count mismatch");
        Self {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
            tail_value: self.tail_value - other.tail_value,
        }
    }
}

/// Atom indices sorted by decreasing |value|, ties broken by index.
///
/// This is the one canonical ordering shared by `distribution` and the
/// rearrangement machinery, so that both sum the same weights in the same
/// order and agree bitwise.
pub(crate) fn magnitude_order(values: &[Complex64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_unstable_by(|&a, &b| {
        values[b]
            .norm()
            .total_cmp(&values[a].norm())
            .then(a.cmp(&b))
    });
    order
}

pub(crate) fn check_shape(space: &TailedMeasureSpace, f: &TailedFunction) {
    assert_eq!(
        space.atom_count(),
        f.atom_count(),
        "function has {} atoms but the space has {}",
        f.atom_count(),
        space.atom_count()
    );
}

/// Distribution function mu{ |f| > level }.
///
/// Returns `f64::INFINITY` when the super-level set meets the infinite tail.
/// Exact on the model: a finite sum of atom weights, accumulated in the
/// canonical magnitude order.
///
/// # Panics
///
/// On atom-count mismatch or a negative/NaN `level`.
pub fn distribution(space: &TailedMeasureSpace, f: &TailedFunction, level: f64) -> f64 {
    check_shape(space, f);
    assert!(level >= 0.0, "level must be nonnegative, got {level}");
    if space.has_infinite_tail() && f.tail_value().norm() > level {
        return f64::INFINITY;
    }
    let mut mass = 0.0;
    for &index in &magnitude_order(f.values()) {
        if f.value(index).norm() > level {
            mass += space.weight(index);
        } else {
            break;
        }
    }
    mass
}

/// Whether every super-level set mu{ |f| > lambda }, lambda > 0, is finite.
///
/// On a tailed model this reduces to: the tail value is zero, or there is no
/// infinite tail.
pub fn decays_in_measure(space: &TailedMeasureSpace, f: &TailedFunction) -> bool {
    check_shape(space, f);
    !space.has_infinite_tail() || f.tail_value().norm() == 0.0
}

/// Membership in the measure-topology neighborhood
/// `{ f : mu{ |f| > delta } <= eps }` of zero.
pub fn in_measure_neighborhood(
    space: &TailedMeasureSpace,
    f: &TailedFunction,
    eps: f64,
    delta: f64,
) -> bool {
    assert!(eps >= 0.0 && delta >= 0.0, "neighborhood parameters must be nonnegative");
    distribution(space, f, delta) <= eps
}

/// The exact threshold decomposition of a function that decays in measure.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdSplit {
    /// The spike `f * 1{|f| > eps}`; integrable because it is supported on
    /// finitely many atoms of finite total weight.
    pub integrable: TailedFunction,
    /// The remainder `f * 1{|f| <= eps}`; bounded by `eps` in sup norm.
    pub bounded: TailedFunction,
}

/// Splits `f = integrable + bounded` at the threshold `eps`.
///
/// Each coordinate of `f` goes, untouched, into exactly one of the parts, so
/// reassembly is exact in floating point, not merely close.
pub fn threshold_split(
    space: &TailedMeasureSpace,
    f: &TailedFunction,
    eps: f64,
) -> Result<ThresholdSplit, ModelError> {
    check_shape(space, f);
    if !eps.is_finite() || eps <= 0.0 {
        return Err(ModelError::BadThreshold(eps));
    }
    if !decays_in_measure(space, f) {
        return Err(ModelError::TailObstruction);
    }
    let zero = Complex64::new(0.0, 0.0);
    let mut spike = Vec::with_capacity(f.atom_count());
    let mut rest = Vec::with_capacity(f.atom_count());
    for value in f.values() {
        if value.norm() > eps {
            spike.push(*value);
            rest.push(zero);
        } else {
            spike.push(zero);
            rest.push(*value);
        }
    }
    // The tail value is zero whenever the tail is infinite (checked above),
    // and on finite spaces it is inert; either way it belongs to the bounded
    // part so that the integrable part is honestly supported on atoms.
    Ok(ThresholdSplit {
        integrable: TailedFunction::new(spike, zero)?,
        bounded: TailedFunction::new(rest, f.tail_value())?,
    })
}

/// Sup norm over the atoms, and over the tail when the space has one.
pub fn sup_norm(space: &TailedMeasureSpace, f: &TailedFunction) -> f64 {
    check_shape(space, f);
    let atom_max = f
        .values()
        .iter()
        .map(|v| v.norm())
        .fold(0.0_f64, f64::max);
    if space.has_infinite_tail() {
        atom_max.max(f.tail_value().norm())
    } else {
        atom_max
    }
}

/// Sup distance between two functions on the same space.
pub fn sup_distance(space: &TailedMeasureSpace, a: &TailedFunction, b: &TailedFunction) -> f64 {
    sup_norm(space, &a.minus(b))
}

/// The L^p norm for p in [1, infinity]; pass `f64::INFINITY` for the sup norm.
///
/// A nonzero tail value forces every finite-p norm to infinity on a tailed
/// space. Errors on p < 1 or NaN.
pub fn norm_lp(space: &TailedMeasureSpace, f: &TailedFunction, p: f64) -> Result<f64, ModelError> {
    check_shape(space, f);
    if p.is_nan() || p < 1.0 {
        return Err(ModelError::BadExponent(p));
    }
    if p == f64::INFINITY {
        return Ok(sup_norm(space, f));
    }
    if space.has_infinite_tail() && f.tail_value().norm() > 0.0 {
        return Ok(f64::INFINITY);
    }
    let mut total = 0.0;
    for (value, &weight) in f.values().iter().zip(space.weights()) {
        total += weight * value.norm().powf(p);
    }
    Ok(total.powf(1.0 / p))
}

/// One summand family evaluated at a point: `sum_{k=1}^{depth} 2^-k * omega^(-1/k)`.
///
/// Decreasing in omega, equal to `1 - 2^-depth` at omega = 1. The partial
/// powers decay so slowly that the profile escapes every L^p while still
/// decaying in measure.
pub fn slow_decay_value(depth: u32, omega: f64) -> f64 {
    assert!(depth >= 1, "depth must be at least 1");
    assert!(omega >= 1.0 && omega.is_finite(), "omega must lie in [1, infinity)");
    let mut total = 0.0;
    for k in 1..=depth {
        total += 0.5_f64.powi(k as i32) * omega.powf(-1.0 / f64::from(k));
    }
    total
}

/// Samples the slow-decay profile on a grid of points in [1, omega_max).
///
/// Atom `i` carries the value at grid point `omega_i` and the length of its
/// midpoint cell in the partition of `[1, omega_max]` as weight, so that atom
/// sums approximate integrals against Lebesgue measure. The returned space
/// has an infinite tail and the function vanishes on it.
///
/// The grid must hold at least two strictly increasing points, all >= 1:
/// a single point has a degenerate midpoint cell.
pub fn slow_decay_example(
    depth: u32,
    grid: &[f64],
) -> Result<(TailedMeasureSpace, TailedFunction), ModelError> {
    if depth < 1 {
        return Err(ModelError::BadDepth);
    }
    if grid.len() < 2 {
        return Err(ModelError::BadGrid("need at least two grid points"));
    }
    if grid.iter().any(|omega| !omega.is_finite()) {
        return Err(ModelError::BadGrid("grid points must be finite"));
    }
    if grid[0] < 1.0 {
        return Err(ModelError::BadGrid("grid points must be >= 1"));
    }
    if grid.windows(2).any(|pair| pair[0] >= pair[1]) {
        return Err(ModelError::BadGrid("grid points must be strictly increasing"));
    }

    let count = grid.len();
    let mut weights = Vec::with_capacity(count);
    let mut edge = 1.0_f64;
    for index in 0..count {
        let next_edge = if index + 1 < count {
            0.5 * (grid[index] + grid[index + 1])
        } else {
            grid[count - 1]
        };
        weights.push(next_edge - edge);
        edge = next_edge;
    }
    // The first cell absorbs [1, omega_0]; if omega_0 == 1 its width comes
    // from the midpoint alone and stays positive. A zero first width can only
    // happen for the two-point grid [1, 1], excluded by strict monotonicity.
    if weights[0] <= 0.0 {
        return Err(ModelError::BadGrid("first midpoint cell is degenerate"));
    }

    let values: Vec<Complex64> = grid
        .iter()
        .map(|&omega| Complex64::new(slow_decay_value(depth, omega), 0.0))
        .collect();
    let space = TailedMeasureSpace::new(weights, true)?;
    let f = TailedFunction::new(values, Complex64::new(0.0, 0.0))?;
    Ok((space, f))
}
