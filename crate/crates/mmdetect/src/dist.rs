//! Seeded samplers for the distribution families used in the experiments.
//!
//! All randomness flows from one master seed through a counter-based
//! sub-seed scheme (see [`child_seed`]), so datasets are reproducible and
//! identical whether sequences are generated sequentially or in parallel.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Normal};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::estimator::{Dataset, Sequence};

/// A 1-D sampling distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum DistSpec {
    Gaussian { mean: f64, variance: f64 },
    /// Parametrized by mean and variance; the scale is `sqrt(variance / 2)`.
    Laplace { mean: f64, variance: f64 },
    /// Takes value 0 with probability `p0`, else 1.
    Bernoulli { p0: f64 },
    /// Weighted mixture; weights must be nonnegative and sum to 1.
    Mixture { components: Vec<(f64, DistSpec)> },
}

impl DistSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            DistSpec::Gaussian { variance, .. } | DistSpec::Laplace { variance, .. } => {
                if !(*variance > 0.0) {
                    return Err(Error::invalid_input(format!(
                        "variance must be positive, got {variance}"
                    )));
                }
            }
            DistSpec::Bernoulli { p0 } => {
                if !(*p0 >= 0.0 && *p0 <= 1.0) {
                    return Err(Error::invalid_input(format!(
                        "bernoulli probability must lie in [0, 1], got {p0}"
                    )));
                }
            }
            DistSpec::Mixture { components } => {
                if components.is_empty() {
                    return Err(Error::invalid_input("mixture needs at least one component"));
                }
                let mut total = 0.0;
                for (w, c) in components {
                    if !(*w >= 0.0) {
                        return Err(Error::invalid_input(format!(
                            "mixture weight must be nonnegative, got {w}"
                        )));
                    }
                    total += w;
                    c.validate()?;
                }
                if (total - 1.0).abs() > 1e-9 {
                    return Err(Error::invalid_input(format!(
                        "mixture weights must sum to 1, got {total}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Population mean, where defined.
    pub fn mean(&self) -> f64 {
        match self {
            DistSpec::Gaussian { mean, .. } | DistSpec::Laplace { mean, .. } => *mean,
            DistSpec::Bernoulli { p0 } => 1.0 - p0,
            DistSpec::Mixture { components } => {
                components.iter().map(|(w, c)| w * c.mean()).sum()
            }
        }
    }

    fn draw<R: Rng>(&self, rng: &mut R) -> f64 {
        match self {
            DistSpec::Gaussian { mean, variance } => {
                Normal::new(*mean, variance.sqrt()).unwrap().sample(rng)
            }
            DistSpec::Laplace { mean, variance } => {
                // |x - mean| / scale is Exp(1) with a uniform random sign.
                let scale = (variance / 2.0).sqrt();
                let magnitude: f64 = rng.sample(Exp1);
                let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
                mean + sign * scale * magnitude
            }
            DistSpec::Bernoulli { p0 } => {
                if rng.gen::<f64>() < *p0 {
                    0.0
                } else {
                    1.0
                }
            }
            DistSpec::Mixture { components } => {
                let u: f64 = rng.gen();
                let mut acc = 0.0;
                for (w, c) in components {
                    acc += w;
                    if u < acc {
                        return c.draw(rng);
                    }
                }
                // Weights sum to 1 up to rounding; fall through to the last.
                components.last().unwrap().1.draw(rng)
            }
        }
    }
}

/// Derive an independent sub-seed from a master seed and a stream index.
///
/// SplitMix64 applied to `master + (stream + 1) * GOLDEN_GAMMA`. Documented
/// so that externally generated data can reproduce the scheme.
pub fn child_seed(master: u64, stream: u64) -> u64 {
    const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
    let mut z = master.wrapping_add(stream.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic RNG for a (master seed, stream) pair.
pub fn stream_rng(master: u64, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(child_seed(master, stream))
}

/// Draw `m` i.i.d. samples from `spec`, deterministically in `seed`.
pub fn sample_sequence(spec: &DistSpec, m: usize, seed: u64) -> Result<Sequence> {
    spec.validate()?;
    if m < 2 {
        return Err(Error::invalid_input(format!(
            "a sequence needs at least 2 samples, got {m}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values: Vec<f64> = (0..m).map(|_| spec.draw(&mut rng)).collect();
    Sequence::from_scalars(values)
}

// Stream layout for make_dataset: stream 0 picks the anomalous positions,
// streams 1..=n generate the sequences, stream n+1 the reference.
const PLACEMENT_STREAM: u64 = 0;

/// Generate a dataset of `n` sequences with `s` anomalous positions chosen
/// by a seeded uniform permutation. The ground-truth set is recorded on the
/// dataset. With `with_reference`, an extra sequence drawn from `p_spec` is
/// attached.
pub fn make_dataset(
    n: usize,
    s: usize,
    p_spec: &DistSpec,
    q_spec: &DistSpec,
    m: usize,
    with_reference: bool,
    seed: u64,
) -> Result<Dataset> {
    if n < 2 {
        return Err(Error::invalid_input(format!("need n >= 2 sequences, got {n}")));
    }
    if s >= n {
        return Err(Error::invalid_input(format!(
            "anomalous count s = {s} must be less than n = {n}"
        )));
    }
    p_spec.validate()?;
    q_spec.validate()?;

    let truth = anomalous_positions(n, s, seed);

    let sequences: Vec<Sequence> = (0..n)
        .map(|k| {
            let spec = if truth.contains(&k) { q_spec } else { p_spec };
            sample_sequence(spec, m, child_seed(seed, 1 + k as u64))
        })
        .collect::<Result<_>>()?;

    let reference = if with_reference {
        Some(sample_sequence(p_spec, m, child_seed(seed, 1 + n as u64))?)
    } else {
        None
    };

    Dataset::new(sequences, reference, Some(truth))
}

/// First `s` entries of a seeded Fisher-Yates permutation of `0..n`.
fn anomalous_positions(n: usize, s: usize, seed: u64) -> BTreeSet<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = stream_rng(seed, PLACEMENT_STREAM);
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        order.swap(i, j);
    }
    order.into_iter().take(s).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_sequence() {
        let spec = DistSpec::Gaussian { mean: 0.0, variance: 1.0 };
        let a = sample_sequence(&spec, 100, 42).unwrap();
        let b = sample_sequence(&spec, 100, 42).unwrap();
        assert_eq!(a, b);
        let c = sample_sequence(&spec, 100, 43).unwrap();
        assert_ne!(a, c);
    }

    fn moments(s: &Sequence) -> (f64, f64) {
        let n = s.len() as f64;
        let mean = s.as_flat().iter().sum::<f64>() / n;
        let var = s.as_flat().iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (mean, var)
    }

    #[test]
    fn laplace_moments() {
        let spec = DistSpec::Laplace { mean: 1.0, variance: 1.0 };
        let s = sample_sequence(&spec, 100_000, 7).unwrap();
        let (mean, var) = moments(&s);
        // SE of the mean is sqrt(1/1e5); SE of the variance of a Laplace is
        // sqrt((kurtosis - 1) var^2 / n) = sqrt(5/1e5).
        assert!((mean - 1.0).abs() < 3.0 * (1.0f64 / 1e5).sqrt(), "mean {mean}");
        assert!((var - 1.0).abs() < 3.0 * (5.0f64 / 1e5).sqrt(), "var {var}");
    }

    #[test]
    fn gaussian_moments() {
        let spec = DistSpec::Gaussian { mean: -2.0, variance: 4.0 };
        let s = sample_sequence(&spec, 100_000, 11).unwrap();
        let (mean, var) = moments(&s);
        assert!((mean + 2.0).abs() < 3.0 * (4.0f64 / 1e5).sqrt(), "mean {mean}");
        assert!((var - 4.0).abs() < 3.0 * (2.0 * 16.0f64 / 1e5).sqrt(), "var {var}");
    }

    #[test]
    fn bernoulli_moments() {
        let spec = DistSpec::Bernoulli { p0: 0.3 };
        let s = sample_sequence(&spec, 100_000, 13).unwrap();
        let (mean, _) = moments(&s);
        assert!((mean - 0.7).abs() < 3.0 * (0.3f64 * 0.7 / 1e5).sqrt(), "mean {mean}");
        assert!(s.as_flat().iter().all(|&v| v == 0.0 || v == 1.0));
    }

    #[test]
    fn symmetric_laplace_mixture_is_centered() {
        let spec = DistSpec::Mixture {
            components: vec![
                (0.5, DistSpec::Laplace { mean: -3.0, variance: 0.5 }),
                (0.5, DistSpec::Laplace { mean: 3.0, variance: 0.5 }),
            ],
        };
        let s = sample_sequence(&spec, 100_000, 17).unwrap();
        let (mean, _) = moments(&s);
        // Var = 0.5 + 9 = 9.5, SE of the mean = sqrt(9.5/1e5).
        assert!(mean.abs() < 3.0 * (9.5f64 / 1e5).sqrt(), "mean {mean}");
    }

    fn ks_two_sample(mut a: Vec<f64>, mut b: Vec<f64>) -> f64 {
        a.sort_by(|x, y| x.partial_cmp(y).unwrap());
        b.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let (na, nb) = (a.len() as f64, b.len() as f64);
        let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
        while i < a.len() && j < b.len() {
            if a[i] <= b[j] {
                i += 1;
            } else {
                j += 1;
            }
            d = d.max((i as f64 / na - j as f64 / nb).abs());
        }
        d
    }

    #[test]
    fn degenerate_mixture_matches_pure_component() {
        let p = DistSpec::Gaussian { mean: 0.0, variance: 1.0 };
        let mix = DistSpec::Mixture {
            components: vec![
                (1.0, p.clone()),
                (0.0, DistSpec::Gaussian { mean: 9.0, variance: 1.0 }),
            ],
        };
        let big = 50_000;
        let mix_draw = sample_sequence(&mix, big, 101).unwrap().as_flat().to_vec();
        let p_draw = sample_sequence(&p, big, 102).unwrap().as_flat().to_vec();
        let ks_mix = ks_two_sample(mix_draw, p_draw);

        // Baseline: the largest KS distance among independent same-family pairs.
        let mut baseline: f64 = 0.0;
        for k in 0..5u64 {
            let a = sample_sequence(&p, big, 200 + 2 * k).unwrap().as_flat().to_vec();
            let b = sample_sequence(&p, big, 201 + 2 * k).unwrap().as_flat().to_vec();
            baseline = baseline.max(ks_two_sample(a, b));
        }
        assert!(
            ks_mix < baseline,
            "mixture-vs-pure KS {ks_mix} not below same-family baseline {baseline}"
        );
    }

    #[test]
    fn make_dataset_shapes_and_truth() {
        let p = DistSpec::Gaussian { mean: 0.0, variance: 1.0 };
        let q = DistSpec::Gaussian { mean: 5.0, variance: 1.0 };

        let d = make_dataset(6, 0, &p, &q, 5, false, 3).unwrap();
        assert_eq!(d.n(), 6);
        assert_eq!(d.m(), 5);
        assert!(d.truth().unwrap().is_empty());
        assert!(d.reference().is_none());

        let d = make_dataset(6, 5, &p, &q, 5, true, 3).unwrap();
        assert_eq!(d.truth().unwrap().len(), 5);
        assert!(d.reference().is_some());

        assert!(make_dataset(6, 6, &p, &q, 5, false, 3).is_err());
        assert!(make_dataset(1, 0, &p, &q, 5, false, 3).is_err());
    }

    #[test]
    fn make_dataset_is_deterministic() {
        let p = DistSpec::Gaussian { mean: 0.0, variance: 1.0 };
        let q = DistSpec::Laplace { mean: 1.0, variance: 1.0 };
        let a = make_dataset(3, 1, &p, &q, 8, true, 99).unwrap();
        let b = make_dataset(3, 1, &p, &q, 8, true, 99).unwrap();
        assert_eq!(a.truth(), b.truth());
        for k in 0..3 {
            assert_eq!(a.sequence(k), b.sequence(k));
        }
        assert_eq!(a.reference(), b.reference());
    }

    #[test]
    fn anomalous_positions_are_uniform() {
        let n = 10;
        let s = 3;
        let trials = 3000;
        let mut counts = vec![0usize; n];
        for seed in 0..trials {
            for idx in anomalous_positions(n, s, seed as u64) {
                counts[idx] += 1;
            }
        }
        let expect = s as f64 / n as f64;
        let se = (expect * (1.0 - expect) / trials as f64).sqrt();
        for (idx, c) in counts.iter().enumerate() {
            let freq = *c as f64 / trials as f64;
            assert!(
                (freq - expect).abs() < 3.0 * se,
                "index {idx}: frequency {freq} vs expected {expect}"
            );
        }
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(DistSpec::Gaussian { mean: 0.0, variance: 0.0 }.validate().is_err());
        assert!(DistSpec::Bernoulli { p0: 1.2 }.validate().is_err());
        let bad = DistSpec::Mixture {
            components: vec![
                (0.6, DistSpec::Gaussian { mean: 0.0, variance: 1.0 }),
                (0.6, DistSpec::Gaussian { mean: 1.0, variance: 1.0 }),
            ],
        };
        assert!(bad.validate().is_err());
    }
}
