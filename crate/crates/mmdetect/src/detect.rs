//! Anomalous-sequence detectors built on the squared-MMD scores.
//!
//! Two scoring scenarios: against a known-normal reference sequence, or
//! leave-one-out against the stack of all other sequences. Three selection
//! modes on top of the scores: arg-max (single anomaly), top-s (known
//! anomaly count), and a vanishing threshold (unknown count, supports the
//! s = 0 null hypothesis).

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use crate::dist::stream_rng;
use crate::error::{Error, Result};
use crate::estimator::{Dataset, GramBlocks};
use crate::kernel::KernelSpec;

/// Where the comparison population comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    /// Score each sequence against the dataset's reference sequence.
    WithReference,
    /// Score each sequence against the stack of all other sequences.
    LeaveOneOut,
}

/// How the flagged set is selected from the score vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SelectionMode {
    /// Flag the single highest-scoring sequence.
    ArgMax,
    /// Flag the `s` highest-scoring sequences.
    TopS(usize),
    /// Flag every sequence whose score strictly exceeds the threshold.
    Threshold(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectorConfig {
    pub scenario: Scenario,
    pub mode: SelectionMode,
    /// Leave-one-out only: compare against a seeded random stack of this
    /// many other sequences instead of all `n - 1`. Cuts scoring cost from
    /// `O(n^2 m^2)` to `O(n l m^2)`.
    pub subsample_l: Option<usize>,
    pub kernel: KernelSpec,
    /// Flip the selection order for the regime where anomalous sequences
    /// form the majority: leave-one-out scores of normal sequences are then
    /// the large ones, so the detector flags the `s` smallest scores.
    /// Applies to `ArgMax` and `TopS`; rejected with `Threshold`.
    pub invert_selection: bool,
}

impl DetectorConfig {
    pub fn new(scenario: Scenario, mode: SelectionMode, kernel: KernelSpec) -> Self {
        DetectorConfig { scenario, mode, subsample_l: None, kernel, invert_selection: false }
    }

    fn validate(&self, n: usize) -> Result<()> {
        match self.mode {
            SelectionMode::TopS(s) => {
                if s < 1 || s > n - 1 {
                    return Err(Error::invalid_input(format!(
                        "top-s selection needs 1 <= s <= n-1, got s = {s} with n = {n}"
                    )));
                }
            }
            SelectionMode::Threshold(delta) => {
                if !(delta >= 0.0) {
                    return Err(Error::invalid_input(format!(
                        "threshold must be nonnegative, got {delta}"
                    )));
                }
                if self.invert_selection {
                    return Err(Error::invalid_input(
                        "inverted selection is defined for arg-max and top-s modes only",
                    ));
                }
            }
            SelectionMode::ArgMax => {}
        }
        if let Some(l) = self.subsample_l {
            if self.scenario != Scenario::LeaveOneOut {
                return Err(Error::invalid_input(
                    "subsampling applies to the leave-one-out scenario only",
                ));
            }
            if l < 1 || l >= n {
                return Err(Error::invalid_input(format!(
                    "subsample size must satisfy 1 <= l <= n-1, got l = {l} with n = {n}"
                )));
            }
        }
        Ok(())
    }
}

/// Outcome of one detector run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionResult {
    /// Flagged indices, 0-based.
    pub flagged: BTreeSet<usize>,
    pub scores: Vec<f64>,
    pub threshold_used: Option<f64>,
}

/// Score every sequence under the configured scenario.
///
/// With a reference this costs `O(n m^2)` kernel evaluations; leave-one-out
/// costs `O(n^2 m^2)` for the one-time block build plus `O(n)` assembly.
pub fn score_all(d: &Dataset, cfg: &DetectorConfig) -> Result<Vec<f64>> {
    match cfg.scenario {
        Scenario::WithReference => {
            let blocks = GramBlocks::build_for_reference(d, &cfg.kernel)?;
            (0..d.n()).map(|k| blocks.mmd2_ref(k)).collect()
        }
        Scenario::LeaveOneOut => {
            let blocks = GramBlocks::build(d, &cfg.kernel);
            (0..d.n()).map(|k| blocks.mmd2_loo(k)).collect()
        }
    }
}

/// Index of the largest score; ties broken by lowest index.
pub fn select_argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (k, &v) in scores.iter().enumerate().skip(1) {
        if v > scores[best] {
            best = k;
        }
    }
    best
}

/// Indices of the `s` largest scores; ties at the cut broken by lowest index.
pub fn select_top_s(scores: &[f64], s: usize) -> BTreeSet<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| {
        scores[b].partial_cmp(&scores[a]).unwrap().then(a.cmp(&b))
    });
    order.into_iter().take(s).collect()
}

/// Indices whose score strictly exceeds `delta`.
pub fn select_threshold(scores: &[f64], delta: f64) -> BTreeSet<usize> {
    scores
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > delta)
        .map(|(k, _)| k)
        .collect()
}

fn negate(scores: &[f64]) -> Vec<f64> {
    scores.iter().map(|v| -v).collect()
}

/// Run the configured detector end to end.
///
/// `seed` feeds the subsampled comparison stacks and is ignored otherwise.
pub fn run_detector(d: &Dataset, cfg: &DetectorConfig, seed: u64) -> Result<DetectionResult> {
    cfg.validate(d.n())?;
    if let Some(l) = cfg.subsample_l {
        let s = match cfg.mode {
            SelectionMode::ArgMax => 1,
            SelectionMode::TopS(s) => s,
            SelectionMode::Threshold(_) => {
                return Err(Error::invalid_input(
                    "subsampling is defined for arg-max and top-s modes only",
                ))
            }
        };
        return detect_loo_subsampled(d, s, l, seed, &cfg.kernel);
    }

    let scores = score_all(d, cfg)?;
    let effective = if cfg.invert_selection { negate(&scores) } else { scores.clone() };
    let (flagged, threshold_used) = match cfg.mode {
        SelectionMode::ArgMax => {
            (BTreeSet::from([select_argmax(&effective)]), None)
        }
        SelectionMode::TopS(s) => (select_top_s(&effective, s), None),
        SelectionMode::Threshold(delta) => (select_threshold(&scores, delta), Some(delta)),
    };
    Ok(DetectionResult { flagged, scores, threshold_used })
}

/// Single-anomaly detector: arg max of the scores.
pub fn detect_argmax(d: &Dataset, cfg: &DetectorConfig) -> Result<usize> {
    cfg.validate(d.n())?;
    let scores = score_all(d, cfg)?;
    let effective = if cfg.invert_selection { negate(&scores) } else { scores };
    Ok(select_argmax(&effective))
}

/// Known-count detector: the `s` largest scores.
pub fn detect_top_s(d: &Dataset, cfg: &DetectorConfig, s: usize) -> Result<BTreeSet<usize>> {
    let mut cfg = cfg.clone();
    cfg.mode = SelectionMode::TopS(s);
    cfg.validate(d.n())?;
    let scores = score_all(d, &cfg)?;
    let effective = if cfg.invert_selection { negate(&scores) } else { scores };
    Ok(select_top_s(&effective, s))
}

/// Unknown-count detector: scores strictly above `delta`. May flag nothing,
/// which is the correct answer under the no-anomaly null hypothesis.
pub fn detect_threshold(d: &Dataset, cfg: &DetectorConfig, delta: f64) -> Result<BTreeSet<usize>> {
    let mut cfg = cfg.clone();
    cfg.mode = SelectionMode::Threshold(delta);
    cfg.validate(d.n())?;
    let scores = score_all(d, &cfg)?;
    Ok(select_threshold(&scores, delta))
}

/// Default vanishing threshold schedule: `(ln n)^(-0.7)`.
pub fn default_delta(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::invalid_input(format!("threshold schedule needs n >= 2, got {n}")));
    }
    Ok((n as f64).ln().powf(-0.7))
}

/// Default subsample size `ceil(sqrt(s * n))`, clamped to `[1, n-1]`.
pub fn default_subsample_l(s: usize, n: usize) -> usize {
    let l = ((s.max(1) * n) as f64).sqrt().ceil() as usize;
    l.clamp(1, n.saturating_sub(1))
}

/// Low-complexity leave-one-out variant: score each sequence against a
/// stack of `l` sequences drawn without replacement from the other `n - 1`,
/// then flag the top `s`. The draw for index `k` comes from stream `k` of
/// `seed`, so results are deterministic and independent of evaluation order.
pub fn detect_loo_subsampled(
    d: &Dataset,
    s: usize,
    l: usize,
    seed: u64,
    kernel: &KernelSpec,
) -> Result<DetectionResult> {
    let n = d.n();
    if l < 1 || l >= n {
        return Err(Error::invalid_input(format!(
            "subsample size must satisfy 1 <= l <= n-1, got l = {l} with n = {n}"
        )));
    }
    if s < 1 || s > n - 1 {
        return Err(Error::invalid_input(format!(
            "top-s selection needs 1 <= s <= n-1, got s = {s} with n = {n}"
        )));
    }
    let blocks = GramBlocks::build(d, kernel);
    let mut scores = Vec::with_capacity(n);
    for k in 0..n {
        let mut others: Vec<usize> = (0..n).filter(|&i| i != k).collect();
        let mut rng = stream_rng(seed, k as u64);
        others.shuffle(&mut rng);
        let mut chosen: Vec<usize> = others.into_iter().take(l).collect();
        chosen.sort_unstable();
        scores.push(blocks.mmd2_subset(k, &chosen)?);
    }
    let flagged = select_top_s(&scores, s);
    Ok(DetectionResult { flagged, scores, threshold_used: None })
}

/// Baseline scorer: absolute Welch two-sample t statistic between the
/// reference sequence and each sequence, computed per coordinate with the
/// largest coordinate taken as the score. Unpooled variances:
/// `t = (mean1 - mean2) / sqrt(v1/m1 + v2/m2)`. A zero denominator scores
/// zero by convention.
pub fn baseline_t_scores(d: &Dataset) -> Result<Vec<f64>> {
    let reference = d
        .reference()
        .ok_or_else(|| Error::invalid_state("dataset has no reference sequence"))?;
    let dim = d.dim();
    let ref_stats: Vec<(f64, f64)> = (0..dim).map(|c| coord_stats(reference, c)).collect();
    let m = d.m() as f64;

    Ok(d.sequences()
        .iter()
        .map(|seq| {
            let mut best = 0.0f64;
            for c in 0..dim {
                let (mr, vr) = ref_stats[c];
                let (ms, vs) = coord_stats(seq, c);
                let denom = (vr / m + vs / m).sqrt();
                let t = if denom == 0.0 { 0.0 } else { ((mr - ms) / denom).abs() };
                best = best.max(t);
            }
            best
        })
        .collect())
}

fn coord_stats(seq: &crate::estimator::Sequence, coord: usize) -> (f64, f64) {
    let m = seq.len() as f64;
    let mut sum = 0.0;
    for i in 0..seq.len() {
        sum += seq.sample(i)[coord];
    }
    let mean = sum / m;
    let mut ss = 0.0;
    for i in 0..seq.len() {
        let d = seq.sample(i)[coord] - mean;
        ss += d * d;
    }
    (mean, ss / (m - 1.0))
}
