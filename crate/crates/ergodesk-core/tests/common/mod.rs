//! Oracle implementations shared by the integration suites.
//!
//! Everything here recomputes quantities straight from their definitions
//! (direct summation, grid search, explicit sorting), independently of the
//! library code paths under test.
#![allow(dead_code)]

use ergodesk_core::measure::{TailedFunction, TailedMeasureSpace};
use ergodesk_core::norms::ConcaveWeight;
use ergodesk_core::rearrangement::StepFunction;
use ergodesk_core::Complex64;

/// `mu{ |f| > level }` by direct summation in index order.
pub fn direct_distribution(space: &TailedMeasureSpace, f: &TailedFunction, level: f64) -> f64 {
    if space.has_infinite_tail() && f.tail_value().norm() > level {
        return f64::INFINITY;
    }
    f.values()
        .iter()
        .zip(space.weights())
        .filter(|(value, _)| value.norm() > level)
        .map(|(_, &weight)| weight)
        .sum()
}

/// The definitional rearrangement, restricted to the level grid
/// `{0, step, 2 step, ...}` up to `grid_max`: the smallest grid level whose
/// super-level measure fits under `t`. Binary search is valid because the
/// measure is non-increasing in the level.
pub fn inf_formula_on_grid(
    space: &TailedMeasureSpace,
    f: &TailedFunction,
    t: f64,
    step: f64,
    grid_max: f64,
) -> f64 {
    if direct_distribution(space, f, 0.0) <= t {
        return 0.0;
    }
    let count = (grid_max / step).ceil() as usize;
    assert!(
        direct_distribution(space, f, count as f64 * step) <= t,
        "grid_max must clear the peak"
    );
    let mut lo = 0;
    let mut hi = count;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if direct_distribution(space, f, mid as f64 * step) <= t {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi as f64 * step
}

/// Probe points covering every step of a rearrangement: below the first
/// breakpoint, at each breakpoint, at each midpoint, and past the last.
pub fn probe_points(step: &StepFunction) -> Vec<f64> {
    let breakpoints = step.breakpoints();
    if breakpoints.is_empty() {
        return vec![1.0];
    }
    let mut probes = vec![breakpoints[0] / 2.0];
    for pair in breakpoints.windows(2) {
        probes.push(pair[0]);
        probes.push(0.5 * (pair[0] + pair[1]));
    }
    probes.push(*breakpoints.last().unwrap());
    probes.push(breakpoints.last().unwrap() + 1.0);
    probes
}

/// `min_c ||(|f| - c)_+||_1 + c` over truncation levels, by a coarse grid
/// plus ternary refinement of the convex objective. On tailed spaces levels
/// below the tail magnitude cost infinitely much and are excluded.
pub fn truncation_grid_oracle(space: &TailedMeasureSpace, f: &TailedFunction) -> f64 {
    let tail = if space.has_infinite_tail() { f.tail_value().norm() } else { 0.0 };
    let peak = f.values().iter().map(|v| v.norm()).fold(tail, f64::max);
    if peak == 0.0 {
        return 0.0;
    }
    let objective = |c: f64| -> f64 {
        let mut total = c;
        for (value, &weight) in f.values().iter().zip(space.weights()) {
            let excess = value.norm() - c;
            if excess > 0.0 {
                total += weight * excess;
            }
        }
        total
    };

    let cells = 1024_usize;
    let width = peak - tail;
    let mut best = f64::INFINITY;
    let mut best_cell = 0_usize;
    for k in 0..=cells {
        let c = tail + width * k as f64 / cells as f64;
        let value = objective(c);
        if value < best {
            best = value;
            best_cell = k;
        }
    }
    let mut lo = tail + width * best_cell.saturating_sub(1) as f64 / cells as f64;
    let mut hi = tail + width * (best_cell + 1).min(cells) as f64 / cells as f64;
    for _ in 0..200 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if objective(m1) <= objective(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    best.min(objective(0.5 * (lo + hi)))
}

/// `sup_s C(s) / phi(s)` over breakpoints and a dense multiplicative grid,
/// with `C` the running integral of the decreasing rearrangement rebuilt
/// here by direct sorting. Finite only when the ratio stays bounded (always
/// true for zero tail).
pub fn marcinkiewicz_grid_oracle(
    space: &TailedMeasureSpace,
    f: &TailedFunction,
    phi: &ConcaveWeight,
) -> f64 {
    let tail = if space.has_infinite_tail() { f.tail_value().norm() } else { 0.0 };
    let mut steps: Vec<(f64, f64)> = f
        .values()
        .iter()
        .zip(space.weights())
        .map(|(value, &weight)| (value.norm(), weight))
        .filter(|&(magnitude, _)| magnitude > tail)
        .collect();
    steps.sort_by(|a, b| b.0.total_cmp(&a.0));
    if steps.is_empty() && tail == 0.0 {
        return 0.0;
    }

    let cumulative = |s: f64| -> f64 {
        let mut remaining = s;
        let mut total = 0.0;
        for &(magnitude, width) in &steps {
            if remaining <= 0.0 {
                break;
            }
            let used = remaining.min(width);
            total += magnitude * used;
            remaining -= used;
        }
        if remaining > 0.0 {
            total += tail * remaining;
        }
        total
    };

    let mut sup = 0.0_f64;
    let mut mass = 0.0;
    for &(_, width) in &steps {
        mass += width;
        sup = sup.max(cumulative(mass) / phi.eval(mass));
    }
    let mut s = 1e-9;
    while s <= 1e9 {
        sup = sup.max(cumulative(s) / phi.eval(s));
        s *= 1.01;
    }
    sup
}

/// One-cycle weighted average along a rotation orbit:
/// `(1/N) sum_{k<N} lambda^k f((start + k r) mod N)`.
pub fn cycle_fourier_oracle(
    values: &[Complex64],
    start: usize,
    r: usize,
    lambda: Complex64,
) -> Complex64 {
    let n = values.len();
    let mut power = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut at = start;
    for _ in 0..n {
        sum += power * values[at];
        power *= lambda;
        at = (at + r) % n;
    }
    sum / n as f64
}

/// Every multiset of (weight, value) pairs with weights in {0.5, 1, 2} and
/// real values in {0, 1, 2, 3}, over 1 to 6 atoms: 18,563 instances on
/// finite spaces.
pub fn multiset_corpus() -> Vec<(TailedMeasureSpace, TailedFunction)> {
    const WEIGHTS: [f64; 3] = [0.5, 1.0, 2.0];
    const VALUES: [f64; 4] = [0.0, 1.0, 2.0, 3.0];
    let pairs: Vec<(f64, f64)> = WEIGHTS
        .iter()
        .flat_map(|&w| VALUES.iter().map(move |&v| (w, v)))
        .collect();

    let mut corpus = Vec::new();
    for size in 1..=6 {
        let mut choice = vec![0_usize; size];
        'cases: loop {
            let weights: Vec<f64> = choice.iter().map(|&i| pairs[i].0).collect();
            let values: Vec<Complex64> =
                choice.iter().map(|&i| Complex64::new(pairs[i].1, 0.0)).collect();
            corpus.push((
                TailedMeasureSpace::new(weights, false).expect("catalog weights are positive"),
                TailedFunction::new(values, Complex64::new(0.0, 0.0))
                    .expect("catalog values are finite"),
            ));

            // Advance the non-decreasing odometer.
            let mut position = size;
            while position > 0 {
                position -= 1;
                if choice[position] + 1 < pairs.len() {
                    let next = choice[position] + 1;
                    for slot in choice[position..].iter_mut() {
                        *slot = next;
                    }
                    continue 'cases;
                }
            }
            break;
        }
    }
    corpus
}
