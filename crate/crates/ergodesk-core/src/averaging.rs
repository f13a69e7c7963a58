//! Weighted ergodic averages and almost-uniform convergence certificates.
//!
//! The weights are bounded Besicovitch sequences presented constructively: a
//! trigonometric polynomial `P(k) = sum_j z_j lambda_j^k` over unimodular
//! frequencies, plus a perturbation whose Cesaro defect is summably small.
//! [`weighted_trace`] accumulates `B_n f = (1/n) sum_{k<n} beta_k T^k f` at
//! requested indices, [`check_weak11`] and [`check_weighted_weak11`] test the
//! maximal inequalities that drive pointwise convergence, and
//! [`egorov_certify`] turns a computed trace into an explicit almost-uniform
//! convergence certificate: a small exceptional set plus uniform decay rates
//! off it.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
// Inherent float methods cover the std build; the trait supplies ln and powi
// without std.
#[cfg_attr(feature = "std", allow(unused_imports))]
use num_traits::Float;

use crate::measure::{
    check_shape, decays_in_measure, distribution, norm_lp, sup_distance, TailedFunction,
    TailedMeasureSpace,
};
use crate::operator::DsOperator;

/// Largest tolerated deviation of a frequency modulus from one.
pub const UNIMODULAR_TOL: f64 = 1e-12;

/// Additive slack in the weak-type verdicts, absorbing roundoff in the
/// maximal function and the mass sums.
pub const WEAK_TYPE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AveragingError {
    #[error("frequency {index} is off the unit circle by {defect}, more than {UNIMODULAR_TOL}")]
    NonUnimodularFrequency { index: usize, defect: f64 },
    #[error("coefficient {index} is not finite")]
    NonfiniteCoefficient { index: usize },
    #[error("perturbation scale must be finite")]
    NonfinitePerturbation,
    #[error("geometric perturbation needs |ratio| < 1, got {0}")]
    BadRatio(f64),
    #[error("declared bound {bound} fails at step {index}: |beta| = {observed}")]
    BoundTooSmall { index: usize, observed: f64, bound: f64 },
    #[error("averaging horizon must be at least 1")]
    EmptyHorizon,
    #[error("requested indices must be nonempty, strictly increasing, and start at 1 or later")]
    BadIndexList,
    #[error("maximal inequality checks need an entrywise nonnegative operator")]
    NotPositive,
    #[error("maximal inequality checks need a function with zero tail value")]
    NotIntegrable,
    #[error("threshold must be positive and finite, got {0}")]
    BadLevel(f64),
    #[error("traces report different index lists")]
    IndexMismatch,
    #[error("perturbation hypothesis fails at n = {index}: gap {gap} exceeds {bound}")]
    HypothesisViolated { index: usize, gap: f64, bound: f64 },
    #[error("trace holds no entries")]
    EmptyTrace,
}

/// `P(k) = sum_j z_j lambda_j^k` with every `|lambda_j| = 1` (within
/// [`UNIMODULAR_TOL`]). The model of a mean almost periodic sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPolynomial {
    coefficients: Vec<Complex64>,
    frequencies: Vec<Complex64>,
}

impl TrigPolynomial {
    /// Builds from `(coefficient, frequency)` terms. The empty polynomial is
    /// the zero sequence.
    pub fn new(terms: &[(Complex64, Complex64)]) -> Result<Self, AveragingError> {
        let mut coefficients = Vec::with_capacity(terms.len());
        let mut frequencies = Vec::with_capacity(terms.len());
        for (index, (z, lambda)) in terms.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(AveragingError::NonfiniteCoefficient { index });
            }
            let defect = (lambda.norm() - 1.0).abs();
            if !defect.is_finite() || defect > UNIMODULAR_TOL {
                return Err(AveragingError::NonUnimodularFrequency { index, defect });
            }
            coefficients.push(*z);
            frequencies.push(*lambda);
        }
        Ok(Self { coefficients, frequencies })
    }

    /// The constant sequence 1, as the single term z = 1, lambda = 1.
    pub fn constant_one() -> Self {
        Self {
            coefficients: vec![Complex64::new(1.0, 0.0)],
            frequencies: vec![Complex64::new(1.0, 0.0)],
        }
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn frequencies(&self) -> &[Complex64] {
        &self.frequencies
    }

    /// `P(0), ..., P(n-1)` by streaming powers; no powf in the loop.
    pub fn eval_prefix(&self, n: usize) -> Vec<Complex64> {
        let mut powers = vec![Complex64::new(1.0, 0.0); self.frequencies.len()];
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for (z, power) in self.coefficients.iter().zip(&powers) {
                acc += z * power;
            }
            out.push(acc);
            for (power, lambda) in powers.iter_mut().zip(&self.frequencies) {
                *power *= lambda;
            }
        }
        out
    }

    /// `sum_j |z_j|`, a uniform bound on `|P(k)|`.
    pub fn coefficient_bound(&self) -> f64 {
        self.coefficients.iter().map(|z| z.norm()).sum()
    }
}

/// Additive defect pushing a trigonometric polynomial into the bounded
/// Besicovitch class: the Cesaro averages of `|pert(k)|` must vanish, and
/// each catalog entry carries a closed-form rate for that.
#[derive(Debug, Clone, PartialEq)]
pub enum Perturbation {
    Zero,
    /// `scale / (k + 1)`.
    Harmonic { scale: Complex64 },
    /// `scale * ratio^k` with `|ratio| < 1`.
    Geometric { scale: Complex64, ratio: f64 },
}

impl Perturbation {
    pub fn zero() -> Self {
        Perturbation::Zero
    }

    pub fn harmonic(scale: Complex64) -> Result<Self, AveragingError> {
        if !scale.re.is_finite() || !scale.im.is_finite() {
            return Err(AveragingError::NonfinitePerturbation);
        }
        Ok(Perturbation::Harmonic { scale })
    }

    pub fn geometric(scale: Complex64, ratio: f64) -> Result<Self, AveragingError> {
        if !scale.re.is_finite() || !scale.im.is_finite() {
            return Err(AveragingError::NonfinitePerturbation);
        }
        if !(ratio.abs() < 1.0) {
            return Err(AveragingError::BadRatio(ratio));
        }
        Ok(Perturbation::Geometric { scale, ratio })
    }

    pub fn eval(&self, k: usize) -> Complex64 {
        match self {
            Perturbation::Zero => Complex64::new(0.0, 0.0),
            Perturbation::Harmonic { scale } => scale / (k as f64 + 1.0),
            Perturbation::Geometric { scale, ratio } => scale * ratio.powi(k as i32),
        }
    }

    /// `sup_k |pert(k)|`; attained at k = 0 for both nonzero shapes.
    pub fn sup_abs(&self) -> f64 {
        match self {
            Perturbation::Zero => 0.0,
            Perturbation::Harmonic { scale } => scale.norm(),
            Perturbation::Geometric { scale, .. } => scale.norm(),
        }
    }

    /// Closed-form upper bound on `(1/n) sum_{k<n} |pert(k)|`:
    /// zero, `|c|(1 + ln n)/n`, or `|c| / (n (1 - |r|))`.
    pub fn defect_bound(&self, n: usize) -> f64 {
        assert!(n >= 1, "defect bound needs n >= 1");
        let n_f = n as f64;
        match self {
            Perturbation::Zero => 0.0,
            Perturbation::Harmonic { scale } => scale.norm() * (1.0 + n_f.ln()) / n_f,
            Perturbation::Geometric { scale, ratio } => {
                scale.norm() / (n_f * (1.0 - ratio.abs()))
            }
        }
    }
}

/// A bounded Besicovitch weight sequence `beta_k = P(k) + pert(k)` together
/// with a certified uniform bound on `|beta_k|`.
#[derive(Debug, Clone, PartialEq)]
pub struct BesicovitchSequence {
    base: TrigPolynomial,
    perturbation: Perturbation,
    bound: f64,
}

impl BesicovitchSequence {
    /// Uses the automatic bound `sum_j |z_j| + sup_k |pert(k)|`.
    pub fn new(base: TrigPolynomial, perturbation: Perturbation) -> Self {
        let bound = base.coefficient_bound() + perturbation.sup_abs();
        Self { base, perturbation, bound }
    }

    /// Accepts a caller-declared bound after checking it against the first
    /// `horizon` terms.
    pub fn with_bound(
        base: TrigPolynomial,
        perturbation: Perturbation,
        bound: f64,
        horizon: usize,
    ) -> Result<Self, AveragingError> {
        let candidate = Self { base, perturbation, bound };
        for (index, beta) in candidate.eval_prefix(horizon).into_iter().enumerate() {
            let observed = beta.norm();
            if observed > bound {
                return Err(AveragingError::BoundTooSmall { index, observed, bound });
            }
        }
        Ok(candidate)
    }

    /// The unweighted case: base 1, no perturbation, bound 1.
    pub fn constant_one() -> Self {
        Self::new(TrigPolynomial::constant_one(), Perturbation::Zero)
    }

    pub fn base(&self) -> &TrigPolynomial {
        &self.base
    }

    pub fn perturbation(&self) -> &Perturbation {
        &self.perturbation
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    /// `beta_0, ..., beta_{n-1}`. The zero perturbation adds nothing, so the
    /// prefix is the base prefix verbatim.
    pub fn eval_prefix(&self, n: usize) -> Vec<Complex64> {
        let mut out = self.base.eval_prefix(n);
        if !matches!(self.perturbation, Perturbation::Zero) {
            for (k, beta) in out.iter_mut().enumerate() {
                *beta += self.perturbation.eval(k);
            }
        }
        out
    }

    /// Recognizes the literal constant-one presentation.
    pub fn is_constant_one(&self) -> bool {
        matches!(self.perturbation, Perturbation::Zero)
            && self.base.coefficients() == [Complex64::new(1.0, 0.0)]
            && self.base.frequencies() == [Complex64::new(1.0, 0.0)]
    }
}

/// `(1/n) sum_{k<n} |seq_k - reference(k)|`, the Besicovitch distance of the
/// sequence from its trigonometric model at horizon n.
pub fn besicovitch_defect(
    seq: &BesicovitchSequence,
    reference: &TrigPolynomial,
    n: usize,
) -> Result<f64, AveragingError> {
    if n == 0 {
        return Err(AveragingError::EmptyHorizon);
    }
    let actual = seq.eval_prefix(n);
    let model = reference.eval_prefix(n);
    let mut total = 0.0;
    for (a, m) in actual.iter().zip(&model) {
        total += (a - m).norm();
    }
    Ok(total / n as f64)
}

fn validate_indices(indices: &[usize]) -> Result<(), AveragingError> {
    if indices.is_empty() || indices[0] == 0 {
        return Err(AveragingError::BadIndexList);
    }
    if indices.windows(2).any(|pair| pair[0] >= pair[1]) {
        return Err(AveragingError::BadIndexList);
    }
    Ok(())
}

/// One accumulation pass shared by every average in this module. `weights`
/// None means Cesaro; the requested indices pick up the running sum divided
/// by n. Returns one function per requested index.
fn averages_at(
    op: &DsOperator,
    f: &TailedFunction,
    weights: Option<&BesicovitchSequence>,
    indices: &[usize],
) -> Result<Vec<TailedFunction>, AveragingError> {
    validate_indices(indices)?;
    let horizon = *indices.last().expect("validated nonempty");
    let beta = weights.map(|seq| seq.eval_prefix(horizon));
    let dim = f.atom_count();

    let mut current = f.clone();
    let mut sum_values = vec![Complex64::new(0.0, 0.0); dim];
    let mut sum_tail = Complex64::new(0.0, 0.0);
    let mut out = Vec::with_capacity(indices.len());
    let mut cursor = 0;

    for k in 0..horizon {
        match &beta {
            Some(beta) => {
                let w = beta[k];
                for (sum, value) in sum_values.iter_mut().zip(current.values()) {
                    *sum += w * value;
                }
                sum_tail += w * current.tail_value();
            }
            None => {
                for (sum, value) in sum_values.iter_mut().zip(current.values()) {
                    *sum += value;
                }
                sum_tail += current.tail_value();
            }
        }
        let n = k + 1;
        if indices[cursor] == n {
            let scale = n as f64;
            let values = sum_values.iter().map(|z| z / scale).collect();
            out.push(
                TailedFunction::new(values, sum_tail / scale)
                    .expect("averages of finite data stay finite"),
            );
            cursor += 1;
            if cursor == indices.len() {
                break;
            }
        }
        current = op.apply(&current);
    }
    Ok(out)
}

/// `A_n f = (1/n) sum_{k<n} T^k f`.
pub fn cesaro_average(
    op: &DsOperator,
    f: &TailedFunction,
    n: usize,
) -> Result<TailedFunction, AveragingError> {
    Ok(averages_at(op, f, None, &[n])?.pop().expect("one index, one entry"))
}

/// `B_n f = (1/n) sum_{k<n} beta_k T^k f`.
pub fn weighted_average(
    op: &DsOperator,
    f: &TailedFunction,
    seq: &BesicovitchSequence,
    n: usize,
) -> Result<TailedFunction, AveragingError> {
    Ok(averages_at(op, f, Some(seq), &[n])?.pop().expect("one index, one entry"))
}

/// A run of averages recorded at strictly increasing indices, kept together
/// with everything needed to certify its limit behavior afterwards.
#[derive(Debug, Clone)]
pub struct AveragesTrace {
    initial: TailedFunction,
    indices: Vec<usize>,
    entries: Vec<TailedFunction>,
    operator: DsOperator,
    weights: Option<BesicovitchSequence>,
}

impl AveragesTrace {
    pub fn initial(&self) -> &TailedFunction {
        &self.initial
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn entries(&self) -> &[TailedFunction] {
        &self.entries
    }

    pub fn operator(&self) -> &DsOperator {
        &self.operator
    }

    pub fn weights(&self) -> Option<&BesicovitchSequence> {
        self.weights.as_ref()
    }

    pub fn last_entry(&self) -> &TailedFunction {
        self.entries.last().expect("traces are built nonempty")
    }
}

pub fn cesaro_trace(
    op: &DsOperator,
    f: &TailedFunction,
    indices: &[usize],
) -> Result<AveragesTrace, AveragingError> {
    let entries = averages_at(op, f, None, indices)?;
    Ok(AveragesTrace {
        initial: f.clone(),
        indices: indices.to_vec(),
        entries,
        operator: op.clone(),
        weights: None,
    })
}

pub fn weighted_trace(
    op: &DsOperator,
    f: &TailedFunction,
    seq: &BesicovitchSequence,
    indices: &[usize],
) -> Result<AveragesTrace, AveragingError> {
    let entries = averages_at(op, f, Some(seq), indices)?;
    Ok(AveragesTrace {
        initial: f.clone(),
        indices: indices.to_vec(),
        entries,
        operator: op.clone(),
        weights: Some(seq.clone()),
    })
}

fn maximal_impl(
    op: &DsOperator,
    f: &TailedFunction,
    weights: Option<&BesicovitchSequence>,
    horizon: usize,
) -> Result<TailedFunction, AveragingError> {
    if horizon == 0 {
        return Err(AveragingError::EmptyHorizon);
    }
    let beta = weights.map(|seq| seq.eval_prefix(horizon));
    let dim = f.atom_count();

    let mut current = f.clone();
    let mut sum_values = vec![Complex64::new(0.0, 0.0); dim];
    let mut sum_tail = Complex64::new(0.0, 0.0);
    let mut best = vec![0.0_f64; dim];
    let mut best_tail = 0.0_f64;

    for k in 0..horizon {
        match &beta {
            Some(beta) => {
                let w = beta[k];
                for (sum, value) in sum_values.iter_mut().zip(current.values()) {
                    *sum += w * value;
                }
                sum_tail += w * current.tail_value();
            }
            None => {
                for (sum, value) in sum_values.iter_mut().zip(current.values()) {
                    *sum += value;
                }
                sum_tail += current.tail_value();
            }
        }
        let scale = (k + 1) as f64;
        for (record, sum) in best.iter_mut().zip(&sum_values) {
            *record = record.max(sum.norm() / scale);
        }
        best_tail = best_tail.max(sum_tail.norm() / scale);
        if k + 1 < horizon {
            current = op.apply(&current);
        }
    }
    Ok(TailedFunction::new(
        best.into_iter().map(|m| Complex64::new(m, 0.0)).collect(),
        Complex64::new(best_tail, 0.0),
    )
    .expect("maxima of finite data are finite"))
}

/// `max_{1 <= n <= horizon} |A_n f|`, pointwise; the truncated maximal
/// function. Real and nonnegative.
pub fn truncated_maximal_function(
    op: &DsOperator,
    f: &TailedFunction,
    horizon: usize,
) -> Result<TailedFunction, AveragingError> {
    maximal_impl(op, f, None, horizon)
}

/// `max_{1 <= n <= horizon} |B_n f|`, pointwise.
pub fn weighted_truncated_maximal(
    op: &DsOperator,
    f: &TailedFunction,
    seq: &BesicovitchSequence,
    horizon: usize,
) -> Result<TailedFunction, AveragingError> {
    maximal_impl(op, f, Some(seq), horizon)
}

/// Outcome of a weak (1,1) maximal inequality check at one threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct WeakTypeReport {
    pub level: f64,
    /// `mu{ maximal function > level }`.
    pub measure_above: f64,
    /// The right-hand side the inequality promises.
    pub bound: f64,
    pub holds: bool,
}

/// The Hopf maximal inequality for a positive operator:
/// `mu{ max_{n<=N} A_n(|f|) > level } <= ||f||_1 / level`.
///
/// Needs an entrywise nonnegative operator and a function with zero tail
/// value; the verdict allows [`WEAK_TYPE_SLACK`].
pub fn check_weak11(
    space: &TailedMeasureSpace,
    op: &DsOperator,
    f: &TailedFunction,
    level: f64,
    horizon: usize,
) -> Result<WeakTypeReport, AveragingError> {
    if !(level > 0.0) || !level.is_finite() {
        return Err(AveragingError::BadLevel(level));
    }
    if !op.is_entrywise_nonnegative() {
        return Err(AveragingError::NotPositive);
    }
    check_shape(space, f);
    if !decays_in_measure(space, f) || f.tail_value().norm() != 0.0 {
        return Err(AveragingError::NotIntegrable);
    }
    let maximal = truncated_maximal_function(op, &f.modulus(), horizon)?;
    let measure_above = distribution(space, &maximal, level);
    let bound = norm_lp(space, f, 1.0).expect("p = 1 is valid") / level;
    Ok(WeakTypeReport { level, measure_above, bound, holds: measure_above <= bound + WEAK_TYPE_SLACK })
}

/// The weighted maximal inequality: with `C` the certified weight bound,
/// `mu{ max_{n<=N} |B_n^{|T|}(|f|)| > level } <= 6 C ||f||_1 / level`.
///
/// The operator need not be positive; its modulus carries the maximal
/// function.
pub fn check_weighted_weak11(
    space: &TailedMeasureSpace,
    op: &DsOperator,
    f: &TailedFunction,
    seq: &BesicovitchSequence,
    level: f64,
    horizon: usize,
) -> Result<WeakTypeReport, AveragingError> {
    if !(level > 0.0) || !level.is_finite() {
        return Err(AveragingError::BadLevel(level));
    }
    check_shape(space, f);
    if !decays_in_measure(space, f) || f.tail_value().norm() != 0.0 {
        return Err(AveragingError::NotIntegrable);
    }
    let maximal = weighted_truncated_maximal(&op.modulus(), &f.modulus(), seq, horizon)?;
    let measure_above = distribution(space, &maximal, level);
    let bound = 6.0 * seq.bound() * norm_lp(space, f, 1.0).expect("p = 1 is valid") / level;
    Ok(WeakTypeReport { level, measure_above, bound, holds: measure_above <= bound + WEAK_TYPE_SLACK })
}

/// Residual of the decomposition of a weighted average into nonnegatively
/// weighted pieces:
///
/// ```text
/// B_n f = (1/n) sum (Re beta_k + shift) T^k f
///       + i (1/n) sum (Im beta_k + shift) T^k f
///       - shift (1 + i) A_n f
/// ```
///
/// The identity is algebraic and holds for every real `shift`; choosing
/// `shift >= sup_k max(-Re beta_k, -Im beta_k)` makes both weight families
/// nonnegative. Returns the sup distance between the two sides, which is
/// pure roundoff.
pub fn weighted_identity_residual(
    space: &TailedMeasureSpace,
    op: &DsOperator,
    f: &TailedFunction,
    seq: &BesicovitchSequence,
    n: usize,
    shift: f64,
) -> Result<f64, AveragingError> {
    if n == 0 {
        return Err(AveragingError::EmptyHorizon);
    }
    assert!(shift.is_finite(), "shift must be finite");
    check_shape(space, f);
    let beta = seq.eval_prefix(n);
    let dim = f.atom_count();

    let mut current = f.clone();
    let mut lhs = vec![Complex64::new(0.0, 0.0); dim + 1];
    let mut re_part = vec![Complex64::new(0.0, 0.0); dim + 1];
    let mut im_part = vec![Complex64::new(0.0, 0.0); dim + 1];
    let mut plain = vec![Complex64::new(0.0, 0.0); dim + 1];
    for (k, &b) in beta.iter().enumerate() {
        for (slot, value) in current
            .values()
            .iter()
            .chain(core::iter::once(&current.tail_value()))
            .enumerate()
        {
            lhs[slot] += b * value;
            re_part[slot] += (b.re + shift) * value;
            im_part[slot] += (b.im + shift) * value;
            plain[slot] += value;
        }
        if k + 1 < n {
            current = op.apply(&current);
        }
    }
    let scale = n as f64;
    let corner = Complex64::new(shift, shift);
    let rotate = Complex64::new(0.0, 1.0);
    let mut residual = 0.0_f64;
    let last = if space.has_infinite_tail() { dim + 1 } else { dim };
    for slot in 0..last {
        let rhs = re_part[slot] / scale + rotate * (im_part[slot] / scale)
            - corner * (plain[slot] / scale);
        residual = residual.max((lhs[slot] / scale - rhs).norm());
    }
    Ok(residual)
}

/// How the limit a certificate compares against was chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitRule {
    /// Orbit means of the initial function under an exact permutation kernel.
    MeanProjection,
    /// The final trace entry stands in for the limit.
    LastEntry,
    /// The caller supplied the limit.
    Supplied,
}

/// Picks a limit candidate for the trace. Unweighted (or constant-one
/// weighted) averages of an exact permutation kernel converge to orbit
/// means, computed exactly; anything else falls back to the last entry.
///
/// The tail of the mean projection is the initial tail when the tail
/// coefficient is exactly one, and zero otherwise (the Cesaro averages of
/// `eta^k` vanish for every other contraction coefficient).
pub fn limit_candidate(trace: &AveragesTrace) -> (TailedFunction, LimitRule) {
    let unweighted = trace.weights().map_or(true, BesicovitchSequence::is_constant_one);
    if unweighted {
        if let Some(sigma) = trace.operator().permutation() {
            let f = trace.initial();
            let dim = sigma.len();
            let mut values = vec![Complex64::new(0.0, 0.0); dim];
            let mut visited = vec![false; dim];
            for start in 0..dim {
                if visited[start] {
                    continue;
                }
                let mut cycle = Vec::new();
                let mut at = start;
                while !visited[at] {
                    visited[at] = true;
                    cycle.push(at);
                    at = sigma[at];
                }
                let mut total = Complex64::new(0.0, 0.0);
                for &index in &cycle {
                    total += f.value(index);
                }
                let mean = total / cycle.len() as f64;
                for &index in &cycle {
                    values[index] = mean;
                }
            }
            let tail = if trace.operator().tail_coeff() == Complex64::new(1.0, 0.0) {
                f.tail_value()
            } else {
                Complex64::new(0.0, 0.0)
            };
            let limit = TailedFunction::new(values, tail).expect("means of finite data are finite");
            return (limit, LimitRule::MeanProjection);
        }
    }
    (trace.last_entry().clone(), LimitRule::LastEntry)
}

/// An explicit almost-uniform convergence certificate: off the listed
/// exceptional atoms (and outside the tail, when flagged), the trace entries
/// approach the limit uniformly within `tolerance` over the trailing half of
/// the reported indices.
#[derive(Debug, Clone, PartialEq)]
pub struct EgorovCertificate {
    pub tolerance: f64,
    pub measure_budget: f64,
    pub exceptional_atoms: Vec<usize>,
    pub tail_exceptional: bool,
    /// Total weight of the exceptional atoms; infinite when the tail is
    /// exceptional.
    pub exceptional_measure: f64,
    /// Per reported index: the sup deviation from the limit off the
    /// exceptional set.
    pub sup_decay: Vec<(usize, f64)>,
    pub limit_rule: LimitRule,
}

impl EgorovCertificate {
    pub fn is_certified(&self) -> bool {
        self.exceptional_measure <= self.measure_budget
    }
}

/// Builds the certificate for a trace against a limit candidate.
///
/// Deviations are measured over the trailing half of the reported indices;
/// an atom (or the tail) is exceptional when its deviation there exceeds
/// `tolerance`. The certificate passes when the exceptional mass fits the
/// budget.
pub fn egorov_certify(
    space: &TailedMeasureSpace,
    trace: &AveragesTrace,
    limit: &TailedFunction,
    rule: LimitRule,
    measure_budget: f64,
    tolerance: f64,
) -> Result<EgorovCertificate, AveragingError> {
    assert!(measure_budget >= 0.0, "measure budget must be nonnegative");
    assert!(tolerance >= 0.0, "tolerance must be nonnegative");
    check_shape(space, limit);
    let entries = trace.entries();
    if entries.is_empty() {
        return Err(AveragingError::EmptyTrace);
    }
    check_shape(space, &entries[0]);
    let dim = space.atom_count();
    let window = &entries[entries.len() / 2..];

    let mut deviation = vec![0.0_f64; dim];
    let mut tail_deviation = 0.0_f64;
    for entry in window {
        for (slot, record) in deviation.iter_mut().enumerate() {
            *record = record.max((limit.value(slot) - entry.value(slot)).norm());
        }
        tail_deviation = tail_deviation.max((limit.tail_value() - entry.tail_value()).norm());
    }

    let mut exceptional_atoms = Vec::new();
    let mut exceptional_measure = 0.0;
    for (slot, &dev) in deviation.iter().enumerate() {
        if dev > tolerance {
            exceptional_atoms.push(slot);
            exceptional_measure += space.weight(slot);
        }
    }
    let tail_exceptional = space.has_infinite_tail() && tail_deviation > tolerance;
    if tail_exceptional {
        exceptional_measure = f64::INFINITY;
    }

    let mut sup_decay = Vec::with_capacity(entries.len());
    for (entry, &index) in entries.iter().zip(trace.indices()) {
        let mut sup = 0.0_f64;
        for slot in 0..dim {
            if deviation[slot] > tolerance {
                continue;
            }
            sup = sup.max((limit.value(slot) - entry.value(slot)).norm());
        }
        if space.has_infinite_tail() && !tail_exceptional {
            sup = sup.max((limit.tail_value() - entry.tail_value()).norm());
        }
        sup_decay.push((index, sup));
    }

    Ok(EgorovCertificate {
        tolerance,
        measure_budget,
        exceptional_atoms,
        tail_exceptional,
        exceptional_measure,
        sup_decay,
        limit_rule: rule,
    })
}

/// [`egorov_certify`] against the automatic limit candidate. Returns the
/// certificate together with the limit it used.
pub fn egorov_certify_auto(
    space: &TailedMeasureSpace,
    trace: &AveragesTrace,
    measure_budget: f64,
    tolerance: f64,
) -> Result<(EgorovCertificate, TailedFunction), AveragingError> {
    let (limit, rule) = limit_candidate(trace);
    let certificate = egorov_certify(space, trace, &limit, rule, measure_budget, tolerance)?;
    Ok((certificate, limit))
}

/// Transfers almost-uniform convergence across a uniform perturbation.
///
/// Hypothesis: the target and approximant traces share their index lists and
/// stay within `gap_bound` of each other in sup distance over the trailing
/// half of the indices. Violations are reported as
/// [`AveragingError::HypothesisViolated`], a different failure from a
/// certificate that merely exceeds its budget.
///
/// On success the target is certified against the approximant's limit
/// candidate with the widened tolerance `tolerance + 2 * gap_bound`.
pub fn au_perturbation_check(
    space: &TailedMeasureSpace,
    target: &AveragesTrace,
    approx: &AveragesTrace,
    gap_bound: f64,
    measure_budget: f64,
    tolerance: f64,
) -> Result<(EgorovCertificate, TailedFunction), AveragingError> {
    assert!(gap_bound >= 0.0 && gap_bound.is_finite(), "gap bound must be finite and nonnegative");
    if target.indices() != approx.indices() {
        return Err(AveragingError::IndexMismatch);
    }
    let entries = target.entries();
    if entries.is_empty() {
        return Err(AveragingError::EmptyTrace);
    }
    let start = entries.len() / 2;
    for position in start..entries.len() {
        let gap = sup_distance(space, &entries[position], &approx.entries()[position]);
        if gap > gap_bound {
            return Err(AveragingError::HypothesisViolated {
                index: target.indices()[position],
                gap,
                bound: gap_bound,
            });
        }
    }
    let (limit, rule) = limit_candidate(approx);
    let certificate =
        egorov_certify(space, target, &limit, rule, measure_budget, tolerance + 2.0 * gap_bound)?;
    Ok((certificate, limit))
}
