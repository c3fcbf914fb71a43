//! Unbiased squared-MMD estimation between sample sequences.
//!
//! The estimator is the standard three-term U-statistic: within-sample kernel
//! averages for both sequences minus twice the cross average. It accepts
//! sequences of unequal length because leave-one-out scoring compares one
//! sequence of `m` samples against a stack of `(n-1)*m` samples.
//!
//! [`GramBlocks`] caches the per-sequence and pairwise kernel sums of a
//! dataset so that all `n` leave-one-out statistics can be assembled in
//! `O(n)` arithmetic each after a single `O(n^2 m^2)` pass over the data.

use rayon::prelude::*;
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::kernel::KernelSpec;

/// One data sequence: `m` samples of dimension `dim`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Sequence {
    data: Vec<f64>,
    dim: usize,
}

impl Sequence {
    /// Build from a flat row-major buffer of `m * dim` values.
    pub fn from_flat(data: Vec<f64>, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid_input("sample dimension must be >= 1"));
        }
        if data.len() % dim != 0 {
            return Err(Error::invalid_input(format!(
                "buffer of {} values is not a multiple of dimension {}",
                data.len(),
                dim
            )));
        }
        let m = data.len() / dim;
        if m < 2 {
            return Err(Error::SequenceTooShort(m));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid_input("samples must be finite"));
        }
        Ok(Sequence { data, dim })
    }

    pub fn from_samples(samples: &[Vec<f64>]) -> Result<Self> {
        let dim = samples.first().map(|s| s.len()).unwrap_or(0);
        if samples.iter().any(|s| s.len() != dim) {
            return Err(Error::invalid_input("samples must share one dimension"));
        }
        Sequence::from_flat(samples.concat(), dim.max(1))
    }

    /// Convenience constructor for 1-D sequences.
    pub fn from_scalars(values: Vec<f64>) -> Result<Self> {
        Sequence::from_flat(values, 1)
    }

    /// Number of samples `m`.
    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn sample(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn samples(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }
}

/// A collection of `n` equal-shape sequences, an optional reference sequence
/// known to be drawn from the normal distribution, and an optional
/// ground-truth set of anomalous indices (0-based).
#[derive(Debug, Clone)]
pub struct Dataset {
    sequences: Vec<Sequence>,
    reference: Option<Sequence>,
    truth: Option<BTreeSet<usize>>,
}

impl Dataset {
    pub fn new(
        sequences: Vec<Sequence>,
        reference: Option<Sequence>,
        truth: Option<BTreeSet<usize>>,
    ) -> Result<Self> {
        if sequences.len() < 2 {
            return Err(Error::invalid_input(format!(
                "a dataset needs at least 2 sequences, got {}",
                sequences.len()
            )));
        }
        let m = sequences[0].len();
        let dim = sequences[0].dim();
        for (k, s) in sequences.iter().enumerate() {
            if s.len() != m || s.dim() != dim {
                return Err(Error::invalid_input(format!(
                    "sequence {} has shape {}x{}, expected {}x{}",
                    k + 1,
                    s.len(),
                    s.dim(),
                    m,
                    dim
                )));
            }
        }
        if let Some(r) = &reference {
            if r.len() != m || r.dim() != dim {
                return Err(Error::invalid_input(format!(
                    "reference has shape {}x{}, expected {}x{}",
                    r.len(),
                    r.dim(),
                    m,
                    dim
                )));
            }
        }
        if let Some(t) = &truth {
            if let Some(&bad) = t.iter().find(|&&i| i >= sequences.len()) {
                return Err(Error::invalid_input(format!(
                    "truth index {} out of range for {} sequences",
                    bad,
                    sequences.len()
                )));
            }
        }
        Ok(Dataset { sequences, reference, truth })
    }

    pub fn n(&self) -> usize {
        self.sequences.len()
    }

    /// Samples per sequence.
    pub fn m(&self) -> usize {
        self.sequences[0].len()
    }

    pub fn dim(&self) -> usize {
        self.sequences[0].dim()
    }

    pub fn sequences(&self) -> &[Sequence] {
        &self.sequences
    }

    pub fn sequence(&self, k: usize) -> &Sequence {
        &self.sequences[k]
    }

    pub fn reference(&self) -> Option<&Sequence> {
        self.reference.as_ref()
    }

    pub fn truth(&self) -> Option<&BTreeSet<usize>> {
        self.truth.as_ref()
    }
}

/// Unbiased estimator of squared MMD between two sequences.
///
/// With `l1 = x.len()` and `l2 = y.len()`:
///
/// ```text
/// sum_{i != j} k(x_i, x_j) / (l1 (l1-1))
///   + sum_{i != j} k(y_i, y_j) / (l2 (l2-1))
///   - 2 sum_{i, j} k(x_i, y_j) / (l1 l2)
/// ```
///
/// The value lies in `[-2K, 2K]` and can be negative; its expectation over
/// i.i.d. draws equals the population squared MMD.
pub fn mmd2_unbiased(x: &Sequence, y: &Sequence, spec: &KernelSpec) -> Result<f64> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch(x.dim(), y.dim()));
    }
    let l1 = x.len();
    let l2 = y.len();
    // Sequence construction enforces m >= 2, but guard anyway for clarity.
    if l1 < 2 {
        return Err(Error::SequenceTooShort(l1));
    }
    if l2 < 2 {
        return Err(Error::SequenceTooShort(l2));
    }

    let sx = within_sum(x, spec);
    let sy = within_sum(y, spec);
    let sxy = cross_sum(x, y, spec);

    Ok(assemble_mmd2(sx, l1, sy, l2, sxy))
}

/// Sum of `k(a_i, a_j)` over ordered pairs `i != j` within one sequence.
fn within_sum(a: &Sequence, spec: &KernelSpec) -> f64 {
    let m = a.len();
    let mut acc = 0.0;
    for i in 0..m {
        let xi = a.sample(i);
        for j in (i + 1)..m {
            acc += spec.eval_unchecked(xi, a.sample(j));
        }
    }
    2.0 * acc
}

/// Sum of `k(a_i, b_j)` over all pairs.
fn cross_sum(a: &Sequence, b: &Sequence, spec: &KernelSpec) -> f64 {
    let mut acc = 0.0;
    for xi in a.samples() {
        for yj in b.samples() {
            acc += spec.eval_unchecked(xi, yj);
        }
    }
    acc
}

#[inline]
fn assemble_mmd2(sx: f64, l1: usize, sy: f64, l2: usize, sxy: f64) -> f64 {
    let l1 = l1 as f64;
    let l2 = l2 as f64;
    sx / (l1 * (l1 - 1.0)) + sy / (l2 * (l2 - 1.0)) - 2.0 * sxy / (l1 * l2)
}

/// Cached kernel sums for a dataset.
///
/// `within[k]` is the ordered-pair sum inside sequence `k`; `cross[k][l]`
/// is the full `m x m` sum between sequences `k` and `l`. The cross matrix
/// is only materialized by [`GramBlocks::build`]; reference-scenario scoring
/// uses [`GramBlocks::build_for_reference`], which skips it and costs
/// `O(n m^2)` instead of `O(n^2 m^2)`.
#[derive(Debug, Clone)]
pub struct GramBlocks {
    n: usize,
    m: usize,
    within: Vec<f64>,
    /// Flat n*n row-major matrix; diagonal entries are zero. `None` when the
    /// blocks were built for reference scoring only.
    cross: Option<Vec<f64>>,
    /// `row_cross[k] = sum_{l != k} cross[k][l]`.
    row_cross: Option<Vec<f64>>,
    total_within: f64,
    total_cross: f64,
    ref_within: Option<f64>,
    ref_cross: Option<Vec<f64>>,
    spec: KernelSpec,
}

impl GramBlocks {
    /// Build all blocks: per-sequence within sums, the symmetric cross
    /// matrix, and (when a reference is present) the reference blocks.
    ///
    /// Work is parallelized over rows; each block sum uses a fixed internal
    /// iteration order, so results are identical for any thread count.
    pub fn build(d: &Dataset, spec: &KernelSpec) -> GramBlocks {
        let n = d.n();
        let rows: Vec<(f64, Vec<f64>)> = (0..n)
            .into_par_iter()
            .map(|k| {
                let w = within_sum(d.sequence(k), spec);
                let upper: Vec<f64> = ((k + 1)..n)
                    .map(|l| cross_sum(d.sequence(k), d.sequence(l), spec))
                    .collect();
                (w, upper)
            })
            .collect();

        let mut within = Vec::with_capacity(n);
        let mut cross = vec![0.0; n * n];
        for (k, (w, upper)) in rows.into_iter().enumerate() {
            within.push(w);
            for (off, v) in upper.into_iter().enumerate() {
                let l = k + 1 + off;
                cross[k * n + l] = v;
                cross[l * n + k] = v;
            }
        }

        let row_cross: Vec<f64> = (0..n)
            .map(|k| cross[k * n..(k + 1) * n].iter().sum())
            .collect();
        let total_within = within.iter().sum();
        let total_cross = row_cross.iter().sum();

        let (ref_within, ref_cross) = Self::reference_blocks(d, spec);

        GramBlocks {
            n,
            m: d.m(),
            within,
            cross: Some(cross),
            row_cross: Some(row_cross),
            total_within,
            total_cross,
            ref_within,
            ref_cross,
            spec: *spec,
        }
    }

    /// Build only what reference-scenario scoring needs: within sums plus
    /// the reference blocks. Requires a reference sequence.
    pub fn build_for_reference(d: &Dataset, spec: &KernelSpec) -> Result<GramBlocks> {
        if d.reference().is_none() {
            return Err(Error::invalid_state(
                "dataset has no reference sequence",
            ));
        }
        let n = d.n();
        let within: Vec<f64> = (0..n)
            .into_par_iter()
            .map(|k| within_sum(d.sequence(k), spec))
            .collect();
        let total_within = within.iter().sum();
        let (ref_within, ref_cross) = Self::reference_blocks(d, spec);
        Ok(GramBlocks {
            n,
            m: d.m(),
            within,
            cross: None,
            row_cross: None,
            total_within,
            total_cross: 0.0,
            ref_within,
            ref_cross,
            spec: *spec,
        })
    }

    fn reference_blocks(d: &Dataset, spec: &KernelSpec) -> (Option<f64>, Option<Vec<f64>>) {
        match d.reference() {
            Some(r) => {
                let rw = within_sum(r, spec);
                let rc: Vec<f64> = (0..d.n())
                    .into_par_iter()
                    .map(|k| cross_sum(r, d.sequence(k), spec))
                    .collect();
                (Some(rw), Some(rc))
            }
            None => (None, None),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn kernel(&self) -> &KernelSpec {
        &self.spec
    }

    /// `sum_{i != j} k(y_ki, y_kj)` for sequence `k`.
    pub fn within(&self, k: usize) -> f64 {
        self.within[k]
    }

    /// `sum_{i, j} k(y_ki, y_lj)` for `k != l`; zero on the diagonal.
    pub fn cross(&self, k: usize, l: usize) -> Result<f64> {
        let c = self
            .cross
            .as_ref()
            .ok_or_else(|| Error::invalid_state("cross blocks were not built"))?;
        Ok(c[k * self.n + l])
    }

    fn check_index(&self, k: usize) -> Result<()> {
        if k >= self.n {
            return Err(Error::invalid_input(format!(
                "sequence index {} out of range for n = {}",
                k, self.n
            )));
        }
        Ok(())
    }

    /// Squared-MMD statistic between the reference sequence and sequence `k`,
    /// assembled from cached sums. Equals `mmd2_unbiased(reference, Y_k)`.
    pub fn mmd2_ref(&self, k: usize) -> Result<f64> {
        self.check_index(k)?;
        let (rw, rc) = match (self.ref_within, &self.ref_cross) {
            (Some(rw), Some(rc)) => (rw, rc),
            _ => {
                return Err(Error::invalid_state(
                    "dataset has no reference sequence",
                ))
            }
        };
        Ok(assemble_mmd2(rw, self.m, self.within[k], self.m, rc[k]))
    }

    /// Leave-one-out statistic: sequence `k` against the stack of all other
    /// sequences, i.e. the unbiased estimator with `l1 = m` and
    /// `l2 = (n-1) m`. `O(1)` arithmetic per index from the cached totals.
    pub fn mmd2_loo(&self, k: usize) -> Result<f64> {
        self.check_index(k)?;
        let row = self
            .row_cross
            .as_ref()
            .ok_or_else(|| Error::invalid_state("cross blocks were not built"))?;
        // Within-sum of the stack: all within-blocks except k, plus every
        // cross-block not touching k.
        let stack_within =
            (self.total_within - self.within[k]) + (self.total_cross - 2.0 * row[k]);
        let l2 = (self.n - 1) * self.m;
        Ok(assemble_mmd2(self.within[k], self.m, stack_within, l2, row[k]))
    }

    /// Statistic of sequence `k` against the stack of a chosen subset of
    /// other sequences. `others` must be non-empty, sorted, duplicate-free,
    /// and must not contain `k`; the sorted order fixes the summation order.
    pub fn mmd2_subset(&self, k: usize, others: &[usize]) -> Result<f64> {
        self.check_index(k)?;
        if others.is_empty() {
            return Err(Error::invalid_input("subset must be non-empty"));
        }
        if others.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid_input("subset must be sorted and duplicate-free"));
        }
        if others.contains(&k) {
            return Err(Error::invalid_input("subset must not contain the scored index"));
        }
        if *others.last().unwrap() >= self.n {
            return Err(Error::invalid_input("subset index out of range"));
        }
        let cross = self
            .cross
            .as_ref()
            .ok_or_else(|| Error::invalid_state("cross blocks were not built"))?;

        let mut stack_within = 0.0;
        for (a, &l) in others.iter().enumerate() {
            stack_within += self.within[l];
            for &l2 in &others[a + 1..] {
                stack_within += 2.0 * cross[l * self.n + l2];
            }
        }
        let mut k_cross = 0.0;
        for &l in others {
            k_cross += cross[k * self.n + l];
        }
        let l2 = others.len() * self.m;
        Ok(assemble_mmd2(self.within[k], self.m, stack_within, l2, k_cross))
    }
}

/// Closed-form population squared MMD between two 1-D Gaussians under a
/// Gaussian kernel with bandwidth `sigma`.
///
/// Uses `E k(x, y) = sigma / sqrt(sigma^2 + tau^2) * exp(-mu^2 / (2 (sigma^2 + tau^2)))`
/// where `mu` and `tau^2` are the mean and variance of `x - y`.
///
/// Arguments are `(mean, variance)` pairs.
pub fn mmd2_population_gaussian(p: (f64, f64), q: (f64, f64), sigma: f64) -> Result<f64> {
    let (mp, vp) = p;
    let (mq, vq) = q;
    if !(vp > 0.0) || !(vq > 0.0) {
        return Err(Error::invalid_input("variances must be positive"));
    }
    if !(sigma > 0.0) {
        return Err(Error::invalid_input("kernel bandwidth must be positive"));
    }
    let expected_kernel = |mu: f64, tau2: f64| -> f64 {
        let t = sigma * sigma + tau2;
        sigma / t.sqrt() * (-mu * mu / (2.0 * t)).exp()
    };
    let e_pp = expected_kernel(0.0, 2.0 * vp);
    let e_qq = expected_kernel(0.0, 2.0 * vq);
    let e_pq = expected_kernel(mp - mq, vp + vq);
    Ok(e_pp + e_qq - 2.0 * e_pq)
}

/// Population squared MMD between `p` and the contaminated distribution
/// `(1 - epsilon) p + epsilon q_tilde`, given the squared MMD between `p`
/// and `q_tilde`. The identity is exact: the value is `epsilon^2` times the
/// pure-anomaly squared MMD.
pub fn mixture_effective_mmd2(epsilon: f64, mmd2_tilde: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::invalid_input(format!(
            "mixture weight must lie in (0, 1], got {epsilon}"
        )));
    }
    if !(mmd2_tilde >= 0.0) {
        return Err(Error::invalid_input("population squared MMD must be >= 0"));
    }
    Ok(epsilon * epsilon * mmd2_tilde)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gk() -> KernelSpec {
        KernelSpec::gaussian(1.0).unwrap()
    }

    fn const_seq(v: f64, m: usize) -> Sequence {
        Sequence::from_scalars(vec![v; m]).unwrap()
    }

    #[test]
    fn identical_constant_pairs_give_zero() {
        let x = const_seq(3.25, 2);
        let y = const_seq(3.25, 2);
        assert_eq!(mmd2_unbiased(&x, &y, &gk()).unwrap(), 0.0);
    }

    #[test]
    fn two_point_hand_value() {
        let x = Sequence::from_scalars(vec![0.0, 1.0]).unwrap();
        let y = Sequence::from_scalars(vec![0.0, 1.0]).unwrap();
        let v = mmd2_unbiased(&x, &y, &gk()).unwrap();
        assert!((v - (-0.3934693402873666)).abs() < 1e-15);
    }

    #[test]
    fn short_sequence_rejected() {
        assert!(Sequence::from_scalars(vec![1.0]).is_err());
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let x = Sequence::from_flat(vec![0.0, 0.0, 1.0, 1.0], 2).unwrap();
        let y = Sequence::from_scalars(vec![0.0, 1.0]).unwrap();
        assert!(matches!(
            mmd2_unbiased(&x, &y, &gk()),
            Err(Error::DimensionMismatch(2, 1))
        ));
    }

    #[test]
    fn gram_blocks_constant_dataset() {
        let d = Dataset::new(vec![const_seq(0.0, 3), const_seq(5.0, 3)], None, None).unwrap();
        let b = GramBlocks::build(&d, &gk());
        assert_eq!(b.within(0), 6.0);
        assert_eq!(b.within(1), 6.0);
        let c = b.cross(0, 1).unwrap();
        assert!((c - 9.0 * (-12.5f64).exp()).abs() < 1e-18);
        assert_eq!(b.cross(0, 1).unwrap(), b.cross(1, 0).unwrap());
    }

    #[test]
    fn mmd2_ref_constant_dataset() {
        let d = Dataset::new(
            vec![const_seq(0.0, 3), const_seq(5.0, 3)],
            Some(const_seq(0.0, 3)),
            None,
        )
        .unwrap();
        let b = GramBlocks::build(&d, &gk());
        assert_eq!(b.mmd2_ref(0).unwrap(), 0.0);
        let v = b.mmd2_ref(1).unwrap();
        assert!((v - 1.999992546693656).abs() < 1e-12);
    }

    #[test]
    fn mmd2_ref_requires_reference() {
        let d = Dataset::new(vec![const_seq(0.0, 3), const_seq(5.0, 3)], None, None).unwrap();
        let b = GramBlocks::build(&d, &gk());
        assert!(matches!(b.mmd2_ref(0), Err(Error::InvalidState(_))));
    }

    #[test]
    fn loo_with_two_sequences_reduces_to_pairwise() {
        let x = Sequence::from_scalars(vec![0.0, 0.7, -0.3, 1.4]).unwrap();
        let y = Sequence::from_scalars(vec![2.0, 2.5, 1.7, 2.2]).unwrap();
        let d = Dataset::new(vec![x.clone(), y.clone()], None, None).unwrap();
        let b = GramBlocks::build(&d, &gk());
        let direct = mmd2_unbiased(&x, &y, &gk()).unwrap();
        assert!((b.mmd2_loo(0).unwrap() - direct).abs() < 1e-12);
        assert!((b.mmd2_loo(1).unwrap() - direct).abs() < 1e-12);
    }

    #[test]
    fn loo_identical_constants_is_zero() {
        let d = Dataset::new(vec![const_seq(1.0, 4); 5], None, None).unwrap();
        let b = GramBlocks::build(&d, &gk());
        for k in 0..5 {
            assert!(b.mmd2_loo(k).unwrap().abs() < 1e-15);
        }
    }

    #[test]
    fn subset_full_complement_matches_loo() {
        let mut seqs = Vec::new();
        for k in 0..5 {
            let vals: Vec<f64> = (0..6).map(|i| (k * 7 + i) as f64 * 0.31).collect();
            seqs.push(Sequence::from_scalars(vals).unwrap());
        }
        let d = Dataset::new(seqs, None, None).unwrap();
        let b = GramBlocks::build(&d, &gk());
        for k in 0..5 {
            let others: Vec<usize> = (0..5).filter(|&l| l != k).collect();
            let a = b.mmd2_subset(k, &others).unwrap();
            let l = b.mmd2_loo(k).unwrap();
            assert!((a - l).abs() < 1e-12, "k={k}: {a} vs {l}");
        }
    }

    #[test]
    fn subset_validation() {
        let d = Dataset::new(vec![const_seq(0.0, 2); 4], None, None).unwrap();
        let b = GramBlocks::build(&d, &gk());
        assert!(b.mmd2_subset(0, &[]).is_err());
        assert!(b.mmd2_subset(0, &[0]).is_err());
        assert!(b.mmd2_subset(0, &[2, 1]).is_err());
        assert!(b.mmd2_subset(0, &[1, 1]).is_err());
        assert!(b.mmd2_subset(0, &[9]).is_err());
        assert!(b.mmd2_subset(0, &[1, 3]).is_ok());
    }

    #[test]
    fn reference_only_blocks_reject_loo() {
        let d = Dataset::new(
            vec![const_seq(0.0, 3), const_seq(5.0, 3)],
            Some(const_seq(0.0, 3)),
            None,
        )
        .unwrap();
        let b = GramBlocks::build_for_reference(&d, &gk()).unwrap();
        assert!(b.mmd2_ref(1).is_ok());
        assert!(matches!(b.mmd2_loo(0), Err(Error::InvalidState(_))));
    }

    #[test]
    fn population_gaussian_identical_is_zero() {
        let v = mmd2_population_gaussian((0.3, 1.7), (0.3, 1.7), 1.0).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn population_gaussian_frozen_values() {
        // Verified against numerical quadrature of the defining integrals.
        let v = mmd2_population_gaussian((0.0, 1.0), (1.0, 1.0), 1.0).unwrap();
        assert!((v - 0.17726763491986197).abs() < 1e-15);
        let w = mmd2_population_gaussian((0.0, 1.0), (3.0, 1.0), 1.0).unwrap();
        assert!((w - 0.8970520223272112).abs() < 1e-15);
    }

    #[test]
    fn population_gaussian_rejects_bad_params() {
        assert!(mmd2_population_gaussian((0.0, 0.0), (1.0, 1.0), 1.0).is_err());
        assert!(mmd2_population_gaussian((0.0, 1.0), (1.0, -1.0), 1.0).is_err());
        assert!(mmd2_population_gaussian((0.0, 1.0), (1.0, 1.0), 0.0).is_err());
    }

    #[test]
    fn mixture_effective_values() {
        assert_eq!(mixture_effective_mmd2(1.0, 0.37).unwrap(), 0.37);
        let v = mixture_effective_mmd2(0.5, 0.1772689).unwrap();
        assert!((v - 0.044317225).abs() < 1e-15);
        assert!((mixture_effective_mmd2(0.1, 1.0).unwrap() - 0.01).abs() < 1e-15);
        assert!(mixture_effective_mmd2(0.0, 1.0).is_err());
        assert!(mixture_effective_mmd2(1.5, 1.0).is_err());
        assert!(mixture_effective_mmd2(0.5, -0.1).is_err());
    }

    fn seq_strategy(m: std::ops::Range<usize>) -> impl Strategy<Value = Sequence> {
        prop::collection::vec(-5.0f64..5.0, (m.start.max(2))..m.end)
            .prop_map(|v| Sequence::from_scalars(v).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn swap_symmetry(x in seq_strategy(2..16), y in seq_strategy(2..16)) {
            let spec = gk();
            let a = mmd2_unbiased(&x, &y, &spec).unwrap();
            let b = mmd2_unbiased(&y, &x, &spec).unwrap();
            prop_assert!((a - b).abs() <= 1e-15);
        }

        #[test]
        fn range_bound(x in seq_strategy(2..16), y in seq_strategy(2..16)) {
            let spec = gk();
            let v = mmd2_unbiased(&x, &y, &spec).unwrap();
            prop_assert!(v >= -2.0 && v <= 2.0);
        }

        #[test]
        fn permutation_invariance(x in seq_strategy(3..12), y in seq_strategy(3..12)) {
            let spec = gk();
            let base = mmd2_unbiased(&x, &y, &spec).unwrap();
            let mut rev: Vec<f64> = x.as_flat().to_vec();
            rev.reverse();
            let xr = Sequence::from_scalars(rev).unwrap();
            let v = mmd2_unbiased(&xr, &y, &spec).unwrap();
            prop_assert!((base - v).abs() <= 1e-13);
        }
    }
}
