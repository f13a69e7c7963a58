//! The acceptance gate: ten numbered criteria, each printing one PASS/FAIL
//! line. Tolerances are pinned here, next to the checks they guard.

mod common;

use std::time::Instant;

use common::{
    cycle_fourier_oracle, inf_formula_on_grid, multiset_corpus, probe_points,
    truncation_grid_oracle,
};
use ergodesk_core::averaging::{
    besicovitch_defect, cesaro_trace, check_weak11, check_weighted_weak11, egorov_certify_auto,
    weighted_identity_residual, BesicovitchSequence, LimitRule, Perturbation, TrigPolynomial,
};
use ergodesk_core::measure::{
    decays_in_measure, distribution, norm_lp, slow_decay_example, sup_norm, threshold_split,
    TailedFunction, TailedMeasureSpace,
};
use ergodesk_core::norms::{
    lorentz_norm, luxemburg_norm, marcinkiewicz_norm, norm_l1_plus_linf, ConcaveWeight,
    OrliczFunction,
};
use ergodesk_core::operator::DsOperator;
use ergodesk_core::orbit::{unit_circle_grid, wiener_wintner_sweep, MptSystem};
use ergodesk_core::rearrangement::{majorizes, rearrange};
use ergodesk_core::sampling::{
    sample_besicovitch, sample_function, sample_instance, sample_space, seeded_rng, OperatorClass,
};
use ergodesk_core::Complex64;
use rand::Rng;

const CONTRACTION_SLACK: f64 = 1e-12;
const MAJORIZATION_SLACK: f64 = 1e-9;
const RESIDUAL_BOUND: f64 = 1e-12;
const LUXEMBURG_VS_LP: f64 = 1e-8;
const KFUNC_VS_SEARCH: f64 = 1e-6;
const MARCINKIEWICZ_VS_SUP: f64 = 1e-10;
const FOURIER_ORACLE_TOL: f64 = 1e-10;

fn conclude(number: usize, name: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("acceptance {number}: {verdict} - {name} ({detail})");
    assert!(pass, "acceptance {number} failed: {name} ({detail})");
}

fn unit_disc_sample(rng: &mut impl Rng, count: usize, radius: f64) -> Vec<Complex64> {
    (0..count)
        .map(|_| {
            Complex64::from_polar(
                rng.random_range(0.0..radius),
                rng.random_range(0.0..core::f64::consts::TAU),
            )
        })
        .collect()
}

#[test]
fn acceptance_01_contraction_sweep() {
    let started = Instant::now();
    let mut failures = Vec::new();
    for instance in 0..500u64 {
        let class = OperatorClass::ALL[instance as usize % 4];
        let mut rng = seeded_rng(101, instance);
        let atoms = rng.random_range(1..=64);
        let (space, op) = sample_instance(&mut rng, class, atoms, instance % 2 == 0);
        for round in 0..20 {
            let f = sample_function(&mut rng, &space, 3.0, true);
            let image = op.apply(&f);
            let l1_before = norm_lp(&space, &f, 1.0).unwrap();
            let l1_after = norm_lp(&space, &image, 1.0).unwrap();
            if l1_after > l1_before + CONTRACTION_SLACK {
                failures.push(format!("instance {instance} round {round}: L1 {l1_after} > {l1_before}"));
            }
            let sup_before = sup_norm(&space, &f);
            let sup_after = sup_norm(&space, &image);
            if sup_after > sup_before + CONTRACTION_SLACK {
                failures.push(format!("instance {instance} round {round}: sup {sup_after} > {sup_before}"));
            }
            if !majorizes(&rearrange(&space, &f), &rearrange(&space, &image), MAJORIZATION_SLACK) {
                failures.push(format!("instance {instance} round {round}: majorization"));
            }
        }
    }
    let elapsed = started.elapsed();
    let in_time = elapsed.as_secs_f64() < 30.0;
    let detail = format!(
        "500 operators x 20 functions, {} violations, {:.2}s",
        failures.len(),
        elapsed.as_secs_f64()
    );
    if let Some(first) = failures.first() {
        println!("first violation: {first}");
    }
    conclude(1, "contraction and majorization sweep", failures.is_empty() && in_time, &detail);
}

#[test]
fn acceptance_02_weak_type_sweep() {
    let started = Instant::now();
    let positive = [
        OperatorClass::Permutation,
        OperatorClass::BirkhoffMixture,
        OperatorClass::Substochastic,
    ];
    let levels = [0.05, 0.5, 2.5];
    let mut failures = Vec::new();

    for instance in 0..500u64 {
        let mut rng = seeded_rng(102, instance);
        let class = positive[instance as usize % 3];
        let level = levels[(instance as usize / 3) % 3];
        let atoms = rng.random_range(1..=32);
        let (space, op) = sample_instance(&mut rng, class, atoms, instance % 2 == 0);
        let f = sample_function(&mut rng, &space, 2.0, true);
        let report = check_weak11(&space, &op, &f, level, 200).unwrap();
        if !report.holds {
            failures.push(format!(
                "plain instance {instance}: {} > {}",
                report.measure_above, report.bound
            ));
        }
    }
    for instance in 0..500u64 {
        let mut rng = seeded_rng(103, instance);
        let class = OperatorClass::ALL[instance as usize % 4];
        let level = levels[(instance as usize / 4) % 3];
        let atoms = rng.random_range(1..=32);
        let (space, op) = sample_instance(&mut rng, class, atoms, instance % 2 == 1);
        let f = sample_function(&mut rng, &space, 2.0, true);
        let seq = sample_besicovitch(&mut rng, 3, true);
        let report = check_weighted_weak11(&space, &op, &f, &seq, level, 200).unwrap();
        if !report.holds {
            failures.push(format!(
                "weighted instance {instance}: {} > {}",
                report.measure_above, report.bound
            ));
        }
    }
    let elapsed = started.elapsed();
    let in_time = elapsed.as_secs_f64() < 60.0;
    let detail = format!(
        "500 plain + 500 weighted at horizon 200, {} violations, {:.2}s",
        failures.len(),
        elapsed.as_secs_f64()
    );
    if let Some(first) = failures.first() {
        println!("first violation: {first}");
    }
    conclude(2, "weak (1,1) maximal inequalities", failures.is_empty() && in_time, &detail);
}

#[test]
fn acceptance_03_decomposition_identity() {
    let mut worst = 0.0f64;
    for instance in 0..200u64 {
        let mut rng = seeded_rng(104, instance);
        let class = OperatorClass::ALL[instance as usize % 4];
        let atoms = rng.random_range(1..=16);
        let (space, op) = sample_instance(&mut rng, class, atoms, instance % 2 == 0);
        let f = sample_function(&mut rng, &space, 2.0, instance % 3 == 0);
        let seq = sample_besicovitch(&mut rng, 3, true);
        let n = rng.random_range(1..=100);
        let shift = seq.bound();
        let residual = weighted_identity_residual(&space, &op, &f, &seq, n, shift).unwrap();
        worst = worst.max(residual);
    }
    let detail = format!("200 instances, worst residual {worst:.3e}");
    conclude(3, "weighted average decomposition identity", worst <= RESIDUAL_BOUND, &detail);
}

#[test]
fn acceptance_04_rearrangement_oracle() {
    let corpus = multiset_corpus();
    let sized_right = corpus.len() == 18_563;
    let levels = [0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0];
    let mut failures = 0usize;

    for (space, f) in &corpus {
        let star = rearrange(space, f);
        if !star.is_nonincreasing() {
            failures += 1;
            continue;
        }
        // Equimeasurability is exact: identical weights added in identical
        // canonical order on both sides.
        for &level in &levels {
            if distribution(space, f, level) != star.level_measure(level) {
                failures += 1;
            }
        }
        let l1 = norm_lp(space, f, 1.0).unwrap();
        if (star.step_mass() - l1).abs() > 1e-12 {
            failures += 1;
        }
        // All data here is exactly representable, so probing breakpoints
        // against the grid inf-formula is safe.
        for t in probe_points(&star) {
            let oracle = inf_formula_on_grid(space, f, t, 1e-3, 3.5);
            if (star.eval(t) - oracle).abs() > 1e-3 + 1e-12 {
                failures += 1;
            }
        }
    }
    let detail = format!("{} multiset cases, {} failures", corpus.len(), failures);
    conclude(4, "exhaustive rearrangement oracle", sized_right && failures == 0, &detail);
}

#[test]
fn acceptance_05_norm_oracles() {
    let mut failures = Vec::new();

    let exponents = [1.5, 2.0, 4.0];
    for instance in 0..200u64 {
        let mut rng = seeded_rng(105, instance);
        let p = exponents[instance as usize % 3];
        let atoms = rng.random_range(1..=12);
        let space = sample_space(&mut rng, atoms, instance % 2 == 0);
        let f = sample_function(&mut rng, &space, 3.0, true);
        let phi = OrliczFunction::power(p).unwrap();
        let lux = luxemburg_norm(&space, &f, &phi).unwrap();
        let lp = norm_lp(&space, &f, p).unwrap();
        if (lux - lp).abs() > LUXEMBURG_VS_LP {
            failures.push(format!("Luxemburg p={p} instance {instance}: {lux} vs {lp}"));
        }
    }

    for instance in 0..200u64 {
        let mut rng = seeded_rng(106, instance);
        let atoms = rng.random_range(1..=12);
        let space = sample_space(&mut rng, atoms, instance % 2 == 0);
        let f = sample_function(&mut rng, &space, 3.0, instance % 3 == 0);
        let got = norm_l1_plus_linf(&space, &f);
        let oracle = truncation_grid_oracle(&space, &f);
        if (got - oracle).abs() > KFUNC_VS_SEARCH {
            failures.push(format!("K-functional instance {instance}: {got} vs {oracle}"));
        }
    }

    // phi(t) = t turns the Lorentz norm into L1; on the integer corpus every
    // intermediate value is exact, so equality is bitwise.
    let identity = ConcaveWeight::power(1.0).unwrap();
    for (space, f) in &multiset_corpus() {
        let lorentz = lorentz_norm(space, f, &identity);
        let l1 = norm_lp(space, f, 1.0).unwrap();
        if lorentz != l1 {
            failures.push(format!("Lorentz/L1 mismatch: {lorentz} vs {l1}"));
            break;
        }
    }
    for instance in 0..200u64 {
        let mut rng = seeded_rng(107, instance);
        let atoms = rng.random_range(1..=12);
        let space = sample_space(&mut rng, atoms, false);
        let f = sample_function(&mut rng, &space, 3.0, true);
        let lorentz = lorentz_norm(&space, &f, &identity);
        let l1 = norm_lp(&space, &f, 1.0).unwrap();
        if (lorentz - l1).abs() > 1e-12 * (1.0 + l1) {
            failures.push(format!("Lorentz float instance {instance}: {lorentz} vs {l1}"));
        }
    }

    for instance in 0..200u64 {
        let mut rng = seeded_rng(108, instance);
        let atoms = rng.random_range(1..=12);
        let space = sample_space(&mut rng, atoms, instance % 2 == 0);
        let f = sample_function(&mut rng, &space, 3.0, instance % 3 == 0);
        let marcinkiewicz = marcinkiewicz_norm(&space, &f, &identity);
        let sup = sup_norm(&space, &f);
        if (marcinkiewicz - sup).abs() > MARCINKIEWICZ_VS_SUP {
            failures.push(format!(
                "Marcinkiewicz instance {instance}: {marcinkiewicz} vs {sup}"
            ));
        }
    }

    let detail = format!("Luxemburg/K/Lorentz/Marcinkiewicz, {} failures", failures.len());
    if let Some(first) = failures.first() {
        println!("first failure: {first}");
    }
    conclude(5, "norm oracles", failures.is_empty(), &detail);
}

#[test]
fn acceptance_06_slow_decay_profile() {
    let grid: Vec<f64> = (0..=600).map(|j| 10f64.powf(j as f64 / 100.0)).collect();
    let (space, f) = slow_decay_example(30, &grid).unwrap();
    let star = rearrange(&space, &f);
    let mut pass = star.is_nonincreasing();

    let probe = 0.01 * space.atom_mass();
    let small_at_fraction = star.eval(probe);
    pass &= small_at_fraction < 0.06;

    // Truncated p-th power masses over [1, 10^j], by direct summation against
    // the cell widths; right edges are 1 plus the running weight.
    let mut strict = true;
    let mut mass_p1_at_6 = 0.0;
    for p in 1..=3i32 {
        let mut previous = 0.0;
        for j in 1..=6 {
            let cutoff = 10f64.powi(j);
            let mut edge = 1.0;
            let mut mass = 0.0;
            for (value, &width) in f.values().iter().zip(space.weights()) {
                edge += width;
                if edge > cutoff {
                    break;
                }
                mass += width * value.re.powi(p);
            }
            strict &= mass > previous;
            previous = mass;
            if p == 1 && j == 6 {
                mass_p1_at_6 = mass;
            }
        }
    }
    pass &= strict;
    pass &= mass_p1_at_6 > 10.0;

    let detail = format!(
        "f*({probe:.0}) = {small_at_fraction:.4}, truncated L1 mass at 1e6 = {mass_p1_at_6:.1}"
    );
    conclude(6, "slow decay escapes every Lp", pass, &detail);
}

#[test]
fn acceptance_07_egorov_on_exact_rotation() {
    let atoms = 257usize;
    let sigma: Vec<usize> = (0..atoms).map(|i| (i + 100) % atoms).collect();
    let op = DsOperator::from_permutation(&sigma).unwrap();
    let space = TailedMeasureSpace::uniform(atoms, false).unwrap();
    let mut rng = seeded_rng(109, 0);
    let f = TailedFunction::new(unit_disc_sample(&mut rng, atoms, 1.0), Complex64::new(0.0, 0.0))
        .unwrap();

    let indices = [10usize, 100, 1000, 2500, 5000, 6000, 7000, 8000, 9000, 10000];
    let trace = cesaro_trace(&op, &f, &indices).unwrap();
    let sup = sup_norm(&space, &f);
    // The deviation window starts at n = 6000; a 257-cycle block argument
    // bounds it by 2 * 257 * sup / n there.
    let tolerance = 2.0 * atoms as f64 * sup / 5000.0;
    let (certificate, _) = egorov_certify_auto(&space, &trace, 0.0, tolerance).unwrap();

    let mut pass = certificate.is_certified();
    pass &= certificate.limit_rule == LimitRule::MeanProjection;
    pass &= certificate.exceptional_atoms.is_empty() && !certificate.tail_exceptional;
    pass &= certificate.exceptional_measure == 0.0;

    let mut worst_ratio = 0.0f64;
    for &(n, dev) in &certificate.sup_decay {
        if n >= 1000 {
            let bound = 2.0 * atoms as f64 / n as f64 + 1e-12;
            worst_ratio = worst_ratio.max(dev / bound);
            pass &= dev <= bound;
        }
    }
    let detail = format!(
        "exceptional measure {}, worst decay ratio {worst_ratio:.3}",
        certificate.exceptional_measure
    );
    conclude(7, "Egorov certificate on an exact rotation", pass, &detail);
}

#[test]
fn acceptance_08_wiener_wintner_sweep() {
    // Integer shift, indicator of the base point: the averages are 1/n for
    // every frequency, so every lane must flatten at rate 2/(n/2).
    let shift = MptSystem::integer_shift(0, 9_999).unwrap();
    let mut chi: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); 10_000];
    chi[0] = Complex64::new(1.0, 0.0);
    let lanes = wiener_wintner_sweep(&shift, &chi, 0, &unit_circle_grid(64), &[5_000, 10_000])
        .unwrap();
    let shift_bound = 2.0 / 5_000.0 + 1e-12;
    let mut pass = lanes.len() == 64;
    let mut worst_shift_span = 0.0f64;
    for lane in &lanes {
        worst_shift_span = worst_shift_span.max(lane.oscillation.max_span());
        pass &= lane.oscillation.max_span() <= shift_bound;
    }

    // Cyclic rotation on 257 points against the grid of 257-th roots of
    // unity: whole-cycle indices recover the Fourier coefficient exactly and
    // the window oscillation obeys the block bound 4 * 257 * sup / (H/2).
    let atoms = 257usize;
    let rotation = MptSystem::cyclic(atoms, 100).unwrap();
    let mut rng = seeded_rng(110, 0);
    let f = unit_disc_sample(&mut rng, atoms, 2.0);
    let sup = f.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let horizon = 39 * atoms;
    let indices = [4 * atoms, 20 * atoms, horizon];
    let grid = unit_circle_grid(atoms);
    let lanes = wiener_wintner_sweep(&rotation, &f, 0, &grid, &indices).unwrap();

    let window_lo = horizon / 2;
    let cyclic_bound = 4.0 * atoms as f64 * sup / window_lo as f64 + 1e-9;
    let mut worst_cyclic_span = 0.0f64;
    let mut worst_oracle_gap = 0.0f64;
    pass &= lanes.len() == atoms;
    for lane in &lanes {
        worst_cyclic_span = worst_cyclic_span.max(lane.oscillation.max_span());
        pass &= lane.oscillation.max_span() <= cyclic_bound;
        let oracle = cycle_fourier_oracle(&f, 0, 100, lane.lambda);
        for value in &lane.series.values {
            let gap = (value - oracle).norm();
            worst_oracle_gap = worst_oracle_gap.max(gap);
            pass &= gap <= FOURIER_ORACLE_TOL;
        }
    }
    let detail = format!(
        "shift span {worst_shift_span:.2e} <= {shift_bound:.2e}, cyclic span {worst_cyclic_span:.2e} <= {cyclic_bound:.2e}, oracle gap {worst_oracle_gap:.2e}"
    );
    conclude(8, "Wiener-Wintner frequency sweep", pass, &detail);
}

#[test]
fn acceptance_09_besicovitch_defect() {
    let base = TrigPolynomial::new(&[
        (Complex64::new(0.7, -0.2), Complex64::new(0.6, 0.8)),
        (Complex64::new(-0.3, 0.5), Complex64::new(1.0, 0.0)),
    ])
    .unwrap();

    let scale = Complex64::new(0.48, 0.64);
    let harmonic = Perturbation::harmonic(scale).unwrap();
    let seq = BesicovitchSequence::new(base.clone(), harmonic);
    let mut pass = true;
    let mut detail_parts = Vec::new();
    for &n in &[100usize, 1_000, 10_000] {
        let defect = besicovitch_defect(&seq, &base, n).unwrap();
        let bound = scale.norm() * (1.0 + (n as f64).ln()) / n as f64;
        pass &= defect > 0.0 && defect <= bound;
        detail_parts.push(format!("n={n}: {defect:.2e} <= {bound:.2e}"));
    }

    let exact = BesicovitchSequence::new(base.clone(), Perturbation::zero());
    let zero_defect = besicovitch_defect(&exact, &base, 10_000).unwrap();
    pass &= zero_defect == 0.0;
    detail_parts.push(format!("zero perturbation: {zero_defect}"));

    conclude(9, "Besicovitch defect bounds", pass, &detail_parts.join(", "));
}

#[test]
fn acceptance_10_threshold_roundtrip() {
    let mut failures = 0usize;
    for instance in 0..10_000u64 {
        let mut rng = seeded_rng(111, instance);
        let tailed = instance % 2 == 0;
        let atoms = rng.random_range(1..=12);
        let space = sample_space(&mut rng, atoms, tailed);
        let f = sample_function(&mut rng, &space, 3.0, true);
        let eps = rng.random_range(1e-3..2.0);

        let split = threshold_split(&space, &f, eps).unwrap();
        let sum = split.integrable.plus(&split.bounded);
        if sum.values() != f.values() || sum.tail_value() != f.tail_value() {
            failures += 1;
        }
        if sup_norm(&space, &split.bounded) > eps {
            failures += 1;
        }
        if !norm_lp(&space, &split.integrable, 1.0).unwrap().is_finite() {
            failures += 1;
        }
        if tailed && decays_in_measure(&space, &TailedFunction::one(space.atom_count())) {
            failures += 1;
        }
    }
    let detail = format!("10000 round-trips, {failures} failures");
    conclude(10, "threshold decomposition round-trip", failures == 0, &detail);
}
