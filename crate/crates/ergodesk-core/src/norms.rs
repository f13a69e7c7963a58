//! Fully symmetric function-space norms computed from rearrangements.
//!
//! Every norm here depends on f only through its non-increasing rearrangement
//! f*, which is what makes the spaces fully symmetric: if g -<-< f and f has
//! finite norm, so does g, with a smaller or equal value.
//!
//! ```text
//! ||f||_{L1 cap Linf}  = max(||f||_1, ||f||_inf)
//! ||f||_{L1 + Linf}    = integral_0^1 f*(t) dt
//! ||f||_Orlicz(Phi)    = inf{ a > 0 : sum_i w_i Phi(|f_i| / a) <= 1 }
//! ||f||_Lorentz(phi)   = integral_0^inf f* d(phi)
//! ||f||_Marcink(phi)   = sup_{s>0} (integral_0^s f*) / phi(s)
//! ```
//!
//! `Phi` ranges over a small catalog of Orlicz functions (convex, vanishing
//! at 0) and `phi` over concave increasing weights; constructors verify the
//! convexity or concavity numerically, by second differences on a log grid.
//!
//! Whether the constant one function has finite norm decides if the space
//! can contain functions that fail to decay in measure. [`space_excludes_one`]
//! reports that criterion per norm: always for Orlicz and L1, for Lorentz
//! exactly when phi is unbounded, for Marcinkiewicz exactly when phi(t)/t
//! vanishes at infinity.

// Inherent float methods cover the std build; the trait supplies the
// transcendental calls without std.
#[cfg_attr(feature = "std", allow(unused_imports))]
use num_traits::Float;

use crate::measure::{check_shape, norm_lp, sup_norm, TailedFunction, TailedMeasureSpace};
use crate::rearrangement::rearrange;

/// Absolute width at which the Luxemburg bisection stops.
pub const LUXEMBURG_TOL: f64 = 1e-10;
/// Absolute interval width at which golden-section refinement stops.
const GOLDEN_TOL: f64 = 1e-10;
/// Pre-grid resolution per interval for the Marcinkiewicz sup search.
const PRE_GRID: usize = 64;
/// Relative slack granted to the numeric convexity/concavity verification.
const SHAPE_CHECK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NormError {
    #[error("Orlicz exponent must satisfy p >= 1, got {0}")]
    BadOrliczExponent(f64),
    #[error("concave weight exponent must lie in (0, 1], got {0}")]
    BadConcaveExponent(f64),
    #[error("numeric convexity check failed near u = {0}")]
    NotConvex(f64),
    #[error("numeric concavity or monotonicity check failed near t = {0}")]
    NotConcave(f64),
    #[error("Luxemburg bracket search did not terminate; the modular is malformed")]
    BracketFailure,
    #[error("the criterion applies to spaces with an infinite tail only")]
    FiniteSpace,
}

/// Log-spaced probe grid shared by the shape checks.
fn shape_grid() -> [f64; 28] {
    let mut grid = [0.0; 28];
    let mut u = 1e-6;
    for slot in grid.iter_mut() {
        *slot = u;
        u *= 2.5;
    }
    grid
}

/// An Orlicz function from the catalog: convex, Phi(0) = 0, positive on u > 0.
#[derive(Debug, Clone, PartialEq)]
pub enum OrliczFunction {
    /// Phi(u) = u^p with p >= 1 (p = 1 recovers the L1 modular).
    Power { exponent: f64 },
    /// Phi(u) = e^u - 1.
    ExpMinusOne,
    /// Phi(u) = u * ln(1 + u).
    LinearLog,
}

impl OrliczFunction {
    pub fn power(exponent: f64) -> Result<Self, NormError> {
        if !exponent.is_finite() || exponent < 1.0 {
            return Err(NormError::BadOrliczExponent(exponent));
        }
        Self::Power { exponent }.verified()
    }

    pub fn exp_minus_one() -> Result<Self, NormError> {
        Self::ExpMinusOne.verified()
    }

    pub fn linear_log() -> Result<Self, NormError> {
        Self::LinearLog.verified()
    }

    pub fn eval(&self, u: f64) -> f64 {
        debug_assert!(u >= 0.0);
        match self {
            Self::Power { exponent } => u.powf(*exponent),
            Self::ExpMinusOne => u.exp_m1(),
            Self::LinearLog => u * u.ln_1p(),
        }
    }

    /// Numeric certificate: second differences on a log grid must be
    /// nonnegative, the origin value zero, and interior values positive.
    fn verified(self) -> Result<Self, NormError> {
        if self.eval(0.0) != 0.0 {
            return Err(NormError::NotConvex(0.0));
        }
        let grid = shape_grid();
        for &u in &grid {
            if !(self.eval(u) > 0.0) {
                return Err(NormError::NotConvex(u));
            }
        }
        for window in grid.windows(3) {
            let (a, c) = (window[0], window[2]);
            let mid = 0.5 * (a + c);
            let chord = 0.5 * (self.eval(a) + self.eval(c));
            let scale = chord.abs().max(1.0);
            if chord - self.eval(mid) < -SHAPE_CHECK_TOL * scale {
                return Err(NormError::NotConvex(mid));
            }
        }
        Ok(self)
    }
}

/// A concave increasing weight from the catalog, with phi(0) = 0.
#[derive(Debug, Clone, PartialEq)]
pub enum ConcaveWeight {
    /// phi(t) = t^alpha with 0 < alpha <= 1.
    Power { exponent: f64 },
    /// phi(t) = ln(1 + t).
    LogPlus,
}

impl ConcaveWeight {
    pub fn power(exponent: f64) -> Result<Self, NormError> {
        if !exponent.is_finite() || exponent <= 0.0 || exponent > 1.0 {
            return Err(NormError::BadConcaveExponent(exponent));
        }
        Self::Power { exponent }.verified()
    }

    pub fn sqrt() -> Result<Self, NormError> {
        Self::power(0.5)
    }

    pub fn log_plus() -> Result<Self, NormError> {
        Self::LogPlus.verified()
    }

    pub fn eval(&self, t: f64) -> f64 {
        debug_assert!(t >= 0.0);
        match self {
            Self::Power { exponent } => t.powf(*exponent),
            Self::LogPlus => t.ln_1p(),
        }
    }

    /// Whether phi(t) -> infinity as t -> infinity. True for the whole
    /// catalog; kept explicit because the Lorentz exclusion criterion reads
    /// off this flag.
    pub fn unbounded_at_infinity(&self) -> bool {
        match self {
            Self::Power { .. } | Self::LogPlus => true,
        }
    }

    /// Whether phi(t)/t -> 0 as t -> infinity; the Marcinkiewicz exclusion
    /// criterion. Fails only for phi(t) = t.
    pub fn ratio_vanishes_at_infinity(&self) -> bool {
        match self {
            Self::Power { exponent } => *exponent < 1.0,
            Self::LogPlus => true,
        }
    }

    /// Limit of s / phi(s) as s -> 0+, needed for the Marcinkiewicz sup.
    fn inverse_slope_at_zero(&self) -> f64 {
        match self {
            Self::Power { exponent } if *exponent < 1.0 => 0.0,
            // phi(t) = t and phi(t) = ln(1+t) both have unit slope at 0.
            _ => 1.0,
        }
    }

    fn verified(self) -> Result<Self, NormError> {
        if self.eval(0.0) != 0.0 {
            return Err(NormError::NotConcave(0.0));
        }
        let grid = shape_grid();
        for window in grid.windows(2) {
            if self.eval(window[1]) <= self.eval(window[0]) {
                return Err(NormError::NotConcave(window[0]));
            }
        }
        for window in grid.windows(3) {
            let (a, c) = (window[0], window[2]);
            let mid = 0.5 * (a + c);
            let chord = 0.5 * (self.eval(a) + self.eval(c));
            let scale = chord.abs().max(1.0);
            if self.eval(mid) - chord < -SHAPE_CHECK_TOL * scale {
                return Err(NormError::NotConcave(mid));
            }
        }
        Ok(self)
    }
}

/// A fully symmetric norm, selectable at runtime.
#[derive(Debug, Clone, PartialEq)]
pub enum NormSpec {
    L1,
    LInf,
    L1CapLInf,
    L1PlusLInf,
    Orlicz(OrliczFunction),
    Lorentz(ConcaveWeight),
    Marcinkiewicz(ConcaveWeight),
}

/// max(||f||_1, ||f||_inf); infinite as soon as the L1 part is.
pub fn norm_l1_cap_linf(space: &TailedMeasureSpace, f: &TailedFunction) -> f64 {
    let l1 = norm_lp(space, f, 1.0).expect("p = 1 is always a valid exponent");
    l1.max(sup_norm(space, f))
}

/// The K-functional at 1: integral of f* over (0, 1]. Always finite.
pub fn norm_l1_plus_linf(space: &TailedMeasureSpace, f: &TailedFunction) -> f64 {
    rearrange(space, f).cumulative(1.0)
}

/// Luxemburg norm inf{ a : sum_i w_i Phi(|f_i|/a) <= 1 }, by bisection.
///
/// The modular is monotone in `a`, so a doubling/halving bracket followed by
/// bisection to width [`LUXEMBURG_TOL`] pins the infimum. A nonzero value on
/// an infinite tail makes the modular infinite for every `a`, hence the norm
/// infinite.
pub fn luxemburg_norm(
    space: &TailedMeasureSpace,
    f: &TailedFunction,
    phi: &OrliczFunction,
) -> Result<f64, NormError> {
    check_shape(space, f);
    if space.has_infinite_tail() && f.tail_value().norm() > 0.0 {
        return Ok(f64::INFINITY);
    }
    let peak = f.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return Ok(0.0);
    }
    let modular = |a: f64| -> f64 {
        f.values()
            .iter()
            .zip(space.weights())
            .map(|(v, &w)| w * phi.eval(v.norm() / a))
            .sum()
    };

    let mut hi = f64::max(1.0, peak * f64::max(1.0, space.atom_mass()));
    let mut expansions = 0;
    while modular(hi) > 1.0 {
        hi *= 2.0;
        expansions += 1;
        if expansions > 200 {
            return Err(NormError::BracketFailure);
        }
    }
    let mut lo = LUXEMBURG_TOL;
    let mut contractions = 0;
    while lo < hi && modular(lo) < 1.0 {
        lo *= 0.5;
        contractions += 1;
        if contractions > 200 {
            return Err(NormError::BracketFailure);
        }
    }
    lo = lo.min(hi);
    while hi - lo > LUXEMBURG_TOL {
        let mid = 0.5 * (lo + hi);
        if modular(mid) <= 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Lorentz norm: the Stieltjes sum of f* against d(phi).
///
/// Exact on step functions. Infinite when f* has a positive tail level,
/// because every catalog weight is unbounded.
pub fn lorentz_norm(space: &TailedMeasureSpace, f: &TailedFunction, phi: &ConcaveWeight) -> f64 {
    let star = rearrange(space, f);
    if star.tail_value() > 0.0 {
        debug_assert!(phi.unbounded_at_infinity());
        return f64::INFINITY;
    }
    let mut total = 0.0;
    let mut previous = 0.0;
    for (&b, &v) in star.breakpoints().iter().zip(star.step_values()) {
        let weight = phi.eval(b);
        total += v * (weight - previous);
        previous = weight;
    }
    total
}

/// Golden-section maximization of a unimodal-enough slice of `ratio`.
fn golden_max(mut lo: f64, mut hi: f64, ratio: &dyn Fn(f64) -> f64) -> f64 {
    const INV_GOLDEN: f64 = 0.618_033_988_749_894_8;
    let mut best = ratio(lo).max(ratio(hi));
    let mut a = hi - INV_GOLDEN * (hi - lo);
    let mut b = lo + INV_GOLDEN * (hi - lo);
    let mut fa = ratio(a);
    let mut fb = ratio(b);
    let mut rounds = 0;
    while hi - lo > GOLDEN_TOL && rounds < 200 {
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + INV_GOLDEN * (hi - lo);
            fb = ratio(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - INV_GOLDEN * (hi - lo);
            fa = ratio(a);
        }
        best = best.max(fa.max(fb));
        rounds += 1;
    }
    best
}

/// Supremum of cumulative(f*, s) / phi(s) over an interval, by a 64-point
/// pre-grid plus golden-section refinement around the best cell.
fn interval_sup(lo: f64, hi: f64, ratio: &dyn Fn(f64) -> f64) -> f64 {
    debug_assert!(lo < hi);
    let width = hi - lo;
    let mut best_index = 0;
    let mut best = f64::NEG_INFINITY;
    for index in 0..=PRE_GRID {
        let s = lo + width * (index as f64) / (PRE_GRID as f64);
        let value = if s > 0.0 { ratio(s) } else { continue };
        if value > best {
            best = value;
            best_index = index;
        }
    }
    let cell = width / (PRE_GRID as f64);
    let refine_lo = (lo + cell * (best_index.saturating_sub(1)) as f64).max(lo + 1e-300);
    let refine_hi = (lo + cell * (best_index + 1) as f64).min(hi);
    best.max(golden_max(refine_lo, refine_hi, ratio))
}

/// Marcinkiewicz norm sup_{s > 0} (integral_0^s f*) / phi(s).
///
/// The sup is located among: the limit s -> 0+, the limit s -> infinity
/// (both in closed form for the catalog), the breakpoints of f*, and
/// grid-plus-golden-section sweeps of each interval between breakpoints.
pub fn marcinkiewicz_norm(
    space: &TailedMeasureSpace,
    f: &TailedFunction,
    phi: &ConcaveWeight,
) -> f64 {
    let star = rearrange(space, f);
    let tail = star.tail_value();
    if star.breakpoints().is_empty() && tail == 0.0 {
        return 0.0;
    }
    // s -> infinity: cumulative grows like tail * s, phi like its own growth.
    if tail > 0.0 && phi.ratio_vanishes_at_infinity() {
        return f64::INFINITY;
    }
    let ratio = |s: f64| star.cumulative(s) / phi.eval(s);

    let first_level = star.step_values().first().copied().unwrap_or(tail);
    let mut best = first_level * phi.inverse_slope_at_zero();
    if tail > 0.0 {
        // Catalog case phi(t) = t with a positive tail: the ratio tends to
        // the tail level from whichever side the step mass dictates.
        best = best.max(tail);
    }
    let breaks = star.breakpoints();
    for &b in breaks {
        best = best.max(ratio(b));
    }
    let mut left = 0.0;
    for &b in breaks {
        if b > left {
            best = best.max(interval_sup(left.max(b * 1e-9), b, &ratio));
        }
        left = b;
    }
    best
}

/// Computes the selected norm. Only the Orlicz branch can fail (malformed
/// modular growth).
pub fn norm(
    space: &TailedMeasureSpace,
    f: &TailedFunction,
    spec: &NormSpec,
) -> Result<f64, NormError> {
    match spec {
        NormSpec::L1 => Ok(norm_lp(space, f, 1.0).expect("p = 1 is always valid")),
        NormSpec::LInf => Ok(sup_norm(space, f)),
        NormSpec::L1CapLInf => Ok(norm_l1_cap_linf(space, f)),
        NormSpec::L1PlusLInf => Ok(norm_l1_plus_linf(space, f)),
        NormSpec::Orlicz(phi) => luxemburg_norm(space, f, phi),
        NormSpec::Lorentz(phi) => Ok(lorentz_norm(space, f, phi)),
        NormSpec::Marcinkiewicz(phi) => Ok(marcinkiewicz_norm(space, f, phi)),
    }
}

/// Whether the normed space excludes the constant one function on an
/// infinite-measure space, i.e. whether finite norm forces decay in measure.
///
/// Errors on spaces without an infinite tail: there the question is vacuous
/// because every function decays in measure.
pub fn space_excludes_one(
    space: &TailedMeasureSpace,
    spec: &NormSpec,
) -> Result<bool, NormError> {
    if !space.has_infinite_tail() {
        return Err(NormError::FiniteSpace);
    }
    Ok(match spec {
        NormSpec::L1 | NormSpec::L1CapLInf | NormSpec::Orlicz(_) => true,
        NormSpec::LInf | NormSpec::L1PlusLInf => false,
        NormSpec::Lorentz(phi) => phi.unbounded_at_infinity(),
        NormSpec::Marcinkiewicz(phi) => phi.ratio_vanishes_at_infinity(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    fn two_atom_fixture() -> (TailedMeasureSpace, TailedFunction) {
        let space = TailedMeasureSpace::uniform(2, false).unwrap();
        let f = TailedFunction::from_real(&[3.0, 1.0], 0.0).unwrap();
        (space, f)
    }

    #[test]
    fn cap_and_plus_norms_on_hand_values() {
        let (space, f) = two_atom_fixture();
        // ||f||_1 = 4 dominates ||f||_inf = 3.
        assert_eq!(norm_l1_cap_linf(&space, &f), 4.0);
        // f* = 3 on (0,1], 1 on (1,2]; the first unit interval integrates to 3.
        assert_eq!(norm_l1_plus_linf(&space, &f), 3.0);
    }

    #[test]
    fn constant_one_with_tail_has_unit_sum_norm() {
        let space = TailedMeasureSpace::uniform(3, true).unwrap();
        let one = TailedFunction::one(3);
        assert_eq!(norm_l1_plus_linf(&space, &one), 1.0);
        assert_eq!(norm_l1_cap_linf(&space, &one), f64::INFINITY);
    }

    #[test]
    fn luxemburg_with_identity_modular_is_l1() {
        let space = TailedMeasureSpace::new(alloc::vec![1.5, 0.5, 2.0], false).unwrap();
        let f = TailedFunction::new(
            alloc::vec![
                Complex64::new(0.4, -1.1),
                Complex64::new(2.0, 0.0),
                Complex64::new(0.0, 0.3),
            ],
            Complex64::new(0.0, 0.0),
        )
        .unwrap();
        let phi = OrliczFunction::power(1.0).unwrap();
        let expected = norm_lp(&space, &f, 1.0).unwrap();
        assert_abs_diff_eq!(
            luxemburg_norm(&space, &f, &phi).unwrap(),
            expected,
            epsilon = 2.0 * LUXEMBURG_TOL
        );
    }

    #[test]
    fn luxemburg_power_two_matches_l2() {
        let space = TailedMeasureSpace::new(alloc::vec![0.25, 1.0, 3.0], false).unwrap();
        let f = TailedFunction::from_real(&[1.25, -0.5, 0.75], 0.0).unwrap();
        let phi = OrliczFunction::power(2.0).unwrap();
        assert_abs_diff_eq!(
            luxemburg_norm(&space, &f, &phi).unwrap(),
            norm_lp(&space, &f, 2.0).unwrap(),
            epsilon = 1e-8
        );
    }

    #[test]
    fn luxemburg_handles_zero_and_tail() {
        let space = TailedMeasureSpace::uniform(2, true).unwrap();
        let phi = OrliczFunction::exp_minus_one().unwrap();
        assert_eq!(luxemburg_norm(&space, &TailedFunction::zero(2), &phi).unwrap(), 0.0);
        assert_eq!(
            luxemburg_norm(&space, &TailedFunction::one(2), &phi).unwrap(),
            f64::INFINITY
        );
    }

    #[test]
    fn lorentz_norm_on_hand_values() {
        let space = TailedMeasureSpace::uniform(1, false).unwrap();
        let f = TailedFunction::from_real(&[1.0], 0.0).unwrap();
        let sqrt = ConcaveWeight::sqrt().unwrap();
        // One unit step: 1 * (phi(1) - phi(0)) = 1.
        assert_eq!(lorentz_norm(&space, &f, &sqrt), 1.0);

        let (space, f) = two_atom_fixture();
        // 3 * phi(1) + 1 * (phi(2) - phi(1)) with phi = sqrt.
        let expected = 3.0 + (2.0_f64.sqrt() - 1.0);
        assert_abs_diff_eq!(lorentz_norm(&space, &f, &sqrt), expected, epsilon = 1e-14);
    }

    #[test]
    fn lorentz_with_identity_weight_is_l1() {
        let space = TailedMeasureSpace::new(alloc::vec![0.5, 1.25, 2.0], false).unwrap();
        let f = TailedFunction::from_real(&[0.3, 2.0, 1.1], 0.0).unwrap();
        let id = ConcaveWeight::power(1.0).unwrap();
        assert_abs_diff_eq!(
            lorentz_norm(&space, &f, &id),
            norm_lp(&space, &f, 1.0).unwrap(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn lorentz_blows_up_on_positive_tail() {
        let space = TailedMeasureSpace::uniform(2, true).unwrap();
        let one = TailedFunction::one(2);
        let sqrt = ConcaveWeight::sqrt().unwrap();
        assert_eq!(lorentz_norm(&space, &one, &sqrt), f64::INFINITY);
    }

    #[test]
    fn marcinkiewicz_on_hand_values() {
        let space = TailedMeasureSpace::uniform(1, false).unwrap();
        let f = TailedFunction::from_real(&[1.0], 0.0).unwrap();
        let sqrt = ConcaveWeight::sqrt().unwrap();
        // sup of min(s,1)/sqrt(s): increasing to 1 at s = 1, decreasing after.
        assert_abs_diff_eq!(marcinkiewicz_norm(&space, &f, &sqrt), 1.0, epsilon = 1e-9);

        let id = ConcaveWeight::power(1.0).unwrap();
        let (space, f) = two_atom_fixture();
        assert_abs_diff_eq!(
            marcinkiewicz_norm(&space, &f, &id),
            sup_norm(&space, &f),
            epsilon = 1e-10
        );
    }

    #[test]
    fn marcinkiewicz_identity_weight_keeps_one_finite() {
        let space = TailedMeasureSpace::uniform(2, true).unwrap();
        let one = TailedFunction::one(2);
        let id = ConcaveWeight::power(1.0).unwrap();
        assert_abs_diff_eq!(marcinkiewicz_norm(&space, &one, &id), 1.0, epsilon = 1e-10);
        let sqrt = ConcaveWeight::sqrt().unwrap();
        assert_eq!(marcinkiewicz_norm(&space, &one, &sqrt), f64::INFINITY);
    }

    #[test]
    fn catalog_constructors_reject_bad_shapes() {
        assert!(OrliczFunction::power(0.8).is_err());
        assert!(OrliczFunction::power(f64::NAN).is_err());
        assert!(ConcaveWeight::power(1.3).is_err());
        assert!(ConcaveWeight::power(0.0).is_err());
        assert!(OrliczFunction::power(1.0).is_ok());
        assert!(ConcaveWeight::power(1.0).is_ok());
    }

    #[test]
    fn exclusion_criteria_match_the_catalog() {
        let tailed = TailedMeasureSpace::uniform(1, true).unwrap();
        let finite = TailedMeasureSpace::uniform(1, false).unwrap();
        let sqrt = ConcaveWeight::sqrt().unwrap();
        let id = ConcaveWeight::power(1.0).unwrap();
        let table: [(NormSpec, bool); 8] = [
            (NormSpec::L1, true),
            (NormSpec::LInf, false),
            (NormSpec::L1CapLInf, true),
            (NormSpec::L1PlusLInf, false),
            (NormSpec::Orlicz(OrliczFunction::exp_minus_one().unwrap()), true),
            (NormSpec::Lorentz(sqrt.clone()), true),
            (NormSpec::Marcinkiewicz(sqrt), true),
            (NormSpec::Marcinkiewicz(id), false),
        ];
        for (spec, expected) in table {
            assert_eq!(
                space_excludes_one(&tailed, &spec).unwrap(),
                expected,
                "criterion mismatch for {spec:?}"
            );
            assert_eq!(space_excludes_one(&finite, &spec), Err(NormError::FiniteSpace));
        }
    }

    #[test]
    fn exclusion_flags_agree_with_norm_of_one() {
        let space = TailedMeasureSpace::uniform(2, true).unwrap();
        let one = TailedFunction::one(2);
        let specs = [
            NormSpec::L1,
            NormSpec::LInf,
            NormSpec::L1CapLInf,
            NormSpec::L1PlusLInf,
            NormSpec::Orlicz(OrliczFunction::power(2.0).unwrap()),
            NormSpec::Lorentz(ConcaveWeight::log_plus().unwrap()),
            NormSpec::Marcinkiewicz(ConcaveWeight::log_plus().unwrap()),
            NormSpec::Marcinkiewicz(ConcaveWeight::power(1.0).unwrap()),
        ];
        for spec in &specs {
            let excluded = space_excludes_one(&space, spec).unwrap();
            let value = norm(&space, &one, spec).unwrap();
            assert_eq!(
                excluded,
                value.is_infinite(),
                "norm of the constant one contradicts the exclusion flag for {spec:?}"
            );
        }
    }
}
