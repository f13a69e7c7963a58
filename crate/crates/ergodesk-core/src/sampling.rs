//! Seeded generators for randomized sweeps.
//!
//! Everything here is deterministic given (seed, stream): sweeps fan out one
//! stream per instance so reports can name the exact instance that failed
//! and anyone can regenerate it.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::averaging::{BesicovitchSequence, Perturbation, TrigPolynomial};
use crate::measure::{TailedFunction, TailedMeasureSpace};
use crate::operator::DsOperator;

/// The generator every sweep uses: one seed, one stream per instance.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Shapes of generated operators, ordered roughly by how much structure they
/// keep: exact permutations, convex mixtures of permutations, damped
/// nonnegative kernels, and damped kernels with random phases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorClass {
    Permutation,
    BirkhoffMixture,
    Substochastic,
    PhasedSubstochastic,
}

impl OperatorClass {
    pub const ALL: [OperatorClass; 4] = [
        OperatorClass::Permutation,
        OperatorClass::BirkhoffMixture,
        OperatorClass::Substochastic,
        OperatorClass::PhasedSubstochastic,
    ];
}

/// Weights drawn from [0.25, 2.5].
pub fn sample_space(rng: &mut impl Rng, atoms: usize, with_tail: bool) -> TailedMeasureSpace {
    let weights: Vec<f64> = (0..atoms).map(|_| rng.random_range(0.25..2.5)).collect();
    TailedMeasureSpace::new(weights, with_tail).expect("sampled weights are positive and finite")
}

/// Componentwise uniform values in the centered box of the given magnitude.
/// `zero_tail` forces membership in the decaying class; otherwise tailed
/// spaces get a random tail value.
pub fn sample_function(
    rng: &mut impl Rng,
    space: &TailedMeasureSpace,
    magnitude: f64,
    zero_tail: bool,
) -> TailedFunction {
    assert!(magnitude > 0.0 && magnitude.is_finite(), "magnitude must be positive and finite");
    let values: Vec<Complex64> = (0..space.atom_count())
        .map(|_| {
            Complex64::new(
                rng.random_range(-magnitude..magnitude),
                rng.random_range(-magnitude..magnitude),
            )
        })
        .collect();
    let tail = if zero_tail || !space.has_infinite_tail() {
        Complex64::new(0.0, 0.0)
    } else {
        Complex64::new(
            rng.random_range(-magnitude..magnitude),
            rng.random_range(-magnitude..magnitude),
        )
    };
    TailedFunction::new(values, tail).expect("sampled values are finite")
}

/// Fisher-Yates.
pub fn sample_permutation(rng: &mut impl Rng, count: usize) -> Vec<usize> {
    let mut sigma: Vec<usize> = (0..count).collect();
    for i in (1..count).rev() {
        let j = rng.random_range(0..=i);
        sigma.swap(i, j);
    }
    sigma
}

fn random_phase(rng: &mut impl Rng) -> Complex64 {
    Complex64::from_polar(1.0, rng.random_range(0.0..core::f64::consts::TAU))
}

fn sample_substochastic(
    rng: &mut impl Rng,
    atoms: usize,
    with_tail: bool,
) -> (TailedMeasureSpace, DsOperator) {
    let space = sample_space(rng, atoms, with_tail);
    let mut raw = vec![0.0_f64; atoms * atoms];
    for entry in raw.iter_mut() {
        if rng.random_range(0.0..1.0) < 0.35 {
            *entry = rng.random_range(0.0..1.0);
        }
    }
    let raw_tail: Vec<f64> = if with_tail {
        (0..atoms).map(|_| rng.random_range(0.0..0.5)).collect()
    } else {
        vec![0.0; atoms]
    };

    // The largest rescaling that keeps both substochasticity bounds, then a
    // strict damping s < 1 on top so margins stay visibly positive.
    let mut worst = 0.0_f64;
    for j in 0..atoms {
        let mut weighted_column = 0.0;
        for i in 0..atoms {
            weighted_column += space.weight(i) * raw[i * atoms + j];
        }
        worst = worst.max(weighted_column / space.weight(j));
    }
    for i in 0..atoms {
        let row_sum: f64 = raw[i * atoms..(i + 1) * atoms].iter().sum::<f64>() + raw_tail[i];
        worst = worst.max(row_sum);
    }
    let damping = rng.random_range(0.4..0.95);
    let scale = damping / worst.max(1e-9);

    let rows: Vec<Vec<Complex64>> = (0..atoms)
        .map(|i| (0..atoms).map(|j| Complex64::new(raw[i * atoms + j] * scale, 0.0)).collect())
        .collect();
    let tail_injection: Vec<Complex64> =
        raw_tail.iter().map(|&b| Complex64::new(b * scale, 0.0)).collect();
    let tail_coeff = Complex64::new(rng.random_range(0.0..damping), 0.0);
    let op = DsOperator::new(rows, tail_injection, tail_coeff).expect("sampled entries are finite");
    (space, op)
}

/// Draws a (space, operator) pair from the class. Permutations and their
/// mixtures need equal weights, so those classes use the uniform space.
pub fn sample_instance(
    rng: &mut impl Rng,
    class: OperatorClass,
    atoms: usize,
    with_tail: bool,
) -> (TailedMeasureSpace, DsOperator) {
    assert!(atoms >= 1, "instances need at least one atom");
    match class {
        OperatorClass::Permutation => {
            let space = TailedMeasureSpace::uniform(atoms, with_tail).expect("atoms >= 1");
            let sigma = sample_permutation(rng, atoms);
            let op = DsOperator::from_permutation(&sigma).expect("sampled sigma is a permutation");
            (space, op)
        }
        OperatorClass::BirkhoffMixture => {
            let space = TailedMeasureSpace::uniform(atoms, with_tail).expect("atoms >= 1");
            let pieces = rng.random_range(2..=3);
            let total = rng.random_range(0.5..1.0);
            let mut cuts: Vec<f64> = (0..pieces - 1).map(|_| rng.random_range(0.0..total)).collect();
            cuts.sort_unstable_by(f64::total_cmp);
            let mut kernel = vec![Complex64::new(0.0, 0.0); atoms * atoms];
            let mut previous = 0.0;
            for piece in 0..pieces {
                let upper = if piece + 1 == pieces { total } else { cuts[piece] };
                let coefficient = upper - previous;
                previous = upper;
                let sigma = sample_permutation(rng, atoms);
                for (i, &image) in sigma.iter().enumerate() {
                    kernel[i * atoms + image] += Complex64::new(coefficient, 0.0);
                }
            }
            let rows: Vec<Vec<Complex64>> =
                kernel.chunks(atoms).map(|chunk| chunk.to_vec()).collect();
            let op = DsOperator::new(
                rows,
                vec![Complex64::new(0.0, 0.0); atoms],
                Complex64::new(total, 0.0),
            )
            .expect("mixture coefficients are finite");
            (space, op)
        }
        OperatorClass::Substochastic => sample_substochastic(rng, atoms, with_tail),
        OperatorClass::PhasedSubstochastic => {
            let (space, op) = sample_substochastic(rng, atoms, with_tail);
            let rows: Vec<Vec<Complex64>> = (0..atoms)
                .map(|i| (0..atoms).map(|j| op.entry(i, j) * random_phase(rng)).collect())
                .collect();
            let tail_injection: Vec<Complex64> =
                op.tail_injection().iter().map(|b| b * random_phase(rng)).collect();
            let tail_coeff = op.tail_coeff() * random_phase(rng);
            let phased = DsOperator::new(rows, tail_injection, tail_coeff)
                .expect("phases keep entries finite");
            (space, phased)
        }
    }
}

/// A random weight sequence: one to `max_terms` unimodular terms, plus an
/// optional decaying perturbation.
pub fn sample_besicovitch(
    rng: &mut impl Rng,
    max_terms: usize,
    allow_perturbation: bool,
) -> BesicovitchSequence {
    assert!(max_terms >= 1, "need at least one term");
    let count = rng.random_range(1..=max_terms);
    let terms: Vec<(Complex64, Complex64)> = (0..count)
        .map(|_| {
            let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            (z, random_phase(rng))
        })
        .collect();
    let base = TrigPolynomial::new(&terms).expect("sampled frequencies sit on the circle");
    let perturbation = if allow_perturbation {
        let scale = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        match rng.random_range(0..3) {
            0 => Perturbation::Zero,
            1 => Perturbation::harmonic(scale).expect("finite scale"),
            _ => Perturbation::geometric(scale, rng.random_range(-0.9..0.9))
                .expect("ratio is inside the unit interval"),
        }
    } else {
        Perturbation::Zero
    };
    BesicovitchSequence::new(base, perturbation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::verify_ds;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let (space_a, op_a) = sample_instance(&mut seeded_rng(7, 3), OperatorClass::Substochastic, 6, true);
        let (space_b, op_b) = sample_instance(&mut seeded_rng(7, 3), OperatorClass::Substochastic, 6, true);
        assert_eq!(space_a.weights(), space_b.weights());
        assert_eq!(op_a, op_b);

        let (space_c, _) = sample_instance(&mut seeded_rng(7, 4), OperatorClass::Substochastic, 6, true);
        assert_ne!(space_a.weights(), space_c.weights());
    }

    #[test]
    fn every_class_generates_contractions() {
        for (stream, &class) in OperatorClass::ALL.iter().enumerate() {
            for round in 0..20 {
                let mut rng = seeded_rng(11, (stream * 100 + round) as u64);
                let atoms = rng.random_range(1..=12);
                let (space, op) = sample_instance(&mut rng, class, atoms, round % 2 == 0);
                let report = verify_ds(&space, &op, 1e-9);
                assert!(
                    report.is_dunford_schwartz(),
                    "{class:?} instance at stream {stream} round {round} is not a contraction"
                );
                if matches!(class, OperatorClass::Permutation | OperatorClass::BirkhoffMixture | OperatorClass::Substochastic) {
                    assert!(report.positive, "{class:?} should be entrywise nonnegative");
                }
            }
        }
    }

    #[test]
    fn permutation_samples_are_permutations() {
        let mut rng = seeded_rng(2, 0);
        for _ in 0..10 {
            let mut sigma = sample_permutation(&mut rng, 17);
            sigma.sort_unstable();
            assert_eq!(sigma, (0..17).collect::<Vec<_>>());
        }
    }

    #[test]
    fn functions_respect_the_tail_request() {
        let mut rng = seeded_rng(5, 1);
        let space = sample_space(&mut rng, 8, true);
        let decaying = sample_function(&mut rng, &space, 2.0, true);
        assert_eq!(decaying.tail_value(), Complex64::new(0.0, 0.0));
        for value in decaying.values() {
            assert!(value.re.abs() <= 2.0 && value.im.abs() <= 2.0);
        }
        let tailed = sample_function(&mut rng, &space, 2.0, false);
        assert!(tailed.tail_value().norm() > 0.0);
    }

    #[test]
    fn sampled_weights_stay_under_their_bound() {
        for stream in 0..10 {
            let mut rng = seeded_rng(13, stream);
            let seq = sample_besicovitch(&mut rng, 4, true);
            let bound = seq.bound();
            for (k, beta) in seq.eval_prefix(200).into_iter().enumerate() {
                assert!(beta.norm() <= bound + 1e-9, "step {k} exceeds the bound");
            }
        }
    }
}
