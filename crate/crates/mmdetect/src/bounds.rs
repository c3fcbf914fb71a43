//! Closed-form sample-complexity thresholds for each detector variant.
//!
//! Each case gives the number `m` of samples per sequence that guarantees
//! consistency of the corresponding test. All logarithms are natural: the
//! thresholds arise from comparing `log n`-style union-bound terms against
//! exponents of `exp(.)` concentration bounds.
//!
//! The slack `eta` has no canonical value; the bounds are order-level
//! guides rather than calibrated sample-size rules.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which detector variant the bound applies to.
///
/// `Ref*` cases score against a reference sequence; `Loo*` cases score
/// leave-one-out. `S1` is the single-anomaly arg-max test, `KnownS` the
/// top-s test, `UnknownS` the threshold test. `Mixture*` cases cover the
/// contaminated anomaly model `q = (1 - eps) p + eps q_tilde`, where the
/// effective squared MMD shrinks to `eps^2 * MMD^2[p, q_tilde]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundCase {
    RefS1,
    RefKnownS,
    RefUnknownS,
    LooS1,
    LooKnownS,
    LooUnknownS,
    MixtureRefKnownS,
    MixtureLooKnownS,
}

impl BoundCase {
    pub const ALL: [BoundCase; 8] = [
        BoundCase::RefS1,
        BoundCase::RefKnownS,
        BoundCase::RefUnknownS,
        BoundCase::LooS1,
        BoundCase::LooKnownS,
        BoundCase::LooUnknownS,
        BoundCase::MixtureRefKnownS,
        BoundCase::MixtureLooKnownS,
    ];
}

/// Inputs to [`required_m`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundSpec {
    pub case: BoundCase,
    /// Uniform kernel bound `K`.
    pub k_bound: f64,
    /// Population squared MMD between normal and anomalous distributions;
    /// for the mixture cases, between `p` and the pure anomaly `q_tilde`.
    pub mmd2: f64,
    /// Positive slack multiplying the threshold.
    pub eta: f64,
    pub n: u64,
    pub s: u64,
    /// Detection threshold; required by the unknown-s cases.
    pub delta: Option<f64>,
    /// Limit of `s / n`; required below 1/2 by the leave-one-out known-s
    /// cases. Defaults to `s / n` when absent.
    pub alpha: Option<f64>,
    /// Mixture weight; required by the mixture cases.
    pub epsilon: Option<f64>,
    /// Expected leave-one-out statistic of a normal sequence against a
    /// stack contaminated by `s` anomalous sequences; required by the
    /// leave-one-out unknown-s case. Never estimated silently.
    pub e_null: Option<f64>,
}

impl BoundSpec {
    pub fn new(case: BoundCase, k_bound: f64, mmd2: f64, eta: f64, n: u64, s: u64) -> Self {
        BoundSpec {
            case,
            k_bound,
            mmd2,
            eta,
            n,
            s,
            delta: None,
            alpha: None,
            epsilon: None,
            e_null: None,
        }
    }

    fn validate_common(&self) -> Result<()> {
        if !(self.k_bound > 0.0) {
            return Err(Error::invalid_input("kernel bound K must be positive"));
        }
        if !(self.mmd2 > 0.0) {
            return Err(Error::invalid_input("population squared MMD must be positive"));
        }
        if !(self.eta > 0.0) {
            return Err(Error::invalid_input("slack eta must be positive"));
        }
        if self.n < 2 {
            return Err(Error::invalid_input(format!("need n >= 2, got {}", self.n)));
        }
        Ok(())
    }

    fn known_s(&self) -> Result<u64> {
        if self.s < 1 || self.s > self.n - 1 {
            return Err(Error::invalid_input(format!(
                "known-s cases need 1 <= s <= n-1, got s = {} with n = {}",
                self.s, self.n
            )));
        }
        Ok(self.s)
    }

    fn unknown_s(&self) -> Result<u64> {
        if self.s > self.n - 1 {
            return Err(Error::invalid_input(format!(
                "unknown-s cases need 0 <= s <= n-1, got s = {} with n = {}",
                self.s, self.n
            )));
        }
        Ok(self.s)
    }

    fn delta(&self, effective_mmd2: f64) -> Result<f64> {
        let delta = self
            .delta
            .ok_or_else(|| Error::invalid_input("this case requires a threshold delta"))?;
        if !(delta > 0.0) {
            return Err(Error::invalid_input(
                "threshold delta must be positive (the bound diverges as delta -> 0)",
            ));
        }
        if delta >= effective_mmd2 {
            return Err(Error::invalid_input(format!(
                "threshold delta = {delta} must be below the squared MMD {effective_mmd2}; \
                 the bound is undefined otherwise"
            )));
        }
        Ok(delta)
    }

    fn alpha(&self) -> Result<f64> {
        let alpha = self.alpha.unwrap_or(self.s as f64 / self.n as f64);
        if !(0.0..0.5).contains(&alpha) {
            return Err(Error::invalid_input(format!(
                "leave-one-out known-s cases need 0 <= alpha < 1/2, got {alpha}"
            )));
        }
        Ok(alpha)
    }

    fn epsilon(&self) -> Result<f64> {
        let eps = self
            .epsilon
            .ok_or_else(|| Error::invalid_input("mixture cases require epsilon"))?;
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(Error::invalid_input(format!(
                "mixture weight must lie in (0, 1], got {eps}"
            )));
        }
        Ok(eps)
    }
}

/// Real-valued right-hand side of the selected consistency condition.
pub fn raw_bound(spec: &BoundSpec) -> Result<f64> {
    spec.validate_common()?;
    let k2 = spec.k_bound * spec.k_bound;
    let slack = 1.0 + spec.eta;
    let n = spec.n as f64;
    let v = spec.mmd2;

    let value = match spec.case {
        BoundCase::RefS1 => 24.0 * k2 * slack / (v * v) * n.ln(),
        BoundCase::RefKnownS => {
            let s = spec.known_s()? as f64;
            24.0 * k2 * slack / (v * v) * ((n - s) * s).ln()
        }
        BoundCase::RefUnknownS => {
            let s = spec.unknown_s()? as f64;
            let delta = spec.delta(v)?;
            let anomalous_term = (s.max(1.0)).ln() / ((v - delta) * (v - delta));
            let normal_term = (n - s).ln() / (delta * delta);
            16.0 * slack * k2 * anomalous_term.max(normal_term)
        }
        BoundCase::LooS1 => 16.0 * k2 * slack / (v * v) * n.ln(),
        BoundCase::LooKnownS => {
            let s = spec.known_s()? as f64;
            let alpha = spec.alpha()?;
            let shrink = 1.0 - 2.0 * alpha;
            16.0 * k2 * slack / (shrink * shrink * v * v) * (s * (n - s)).ln()
        }
        BoundCase::LooUnknownS => {
            let s = spec.unknown_s()? as f64;
            let delta = spec.delta(v)?;
            let e_null = spec
                .e_null
                .ok_or_else(|| Error::invalid_input(
                    "the leave-one-out unknown-s case requires an e-null estimate",
                ))?;
            if !(e_null >= 0.0) {
                return Err(Error::invalid_input("e-null must be nonnegative"));
            }
            if delta <= e_null {
                return Err(Error::invalid_input(format!(
                    "threshold delta = {delta} must exceed e-null = {e_null}"
                )));
            }
            let anomalous_term = (s.max(1.0)).ln() / ((v - delta) * (v - delta));
            let gap = delta - e_null;
            let normal_term = (n - s).ln() / (gap * gap);
            16.0 * slack * k2 * anomalous_term.max(normal_term)
        }
        BoundCase::MixtureRefKnownS => {
            let eps = spec.epsilon()?;
            let mut base = *spec;
            base.case = BoundCase::RefKnownS;
            base.mmd2 = crate::estimator::mixture_effective_mmd2(eps, v)?;
            return raw_bound(&base);
        }
        BoundCase::MixtureLooKnownS => {
            let eps = spec.epsilon()?;
            let mut base = *spec;
            base.case = BoundCase::LooKnownS;
            base.mmd2 = crate::estimator::mixture_effective_mmd2(eps, v)?;
            return raw_bound(&base);
        }
    };
    Ok(value)
}

/// Smallest integer `m` strictly exceeding the selected bound.
pub fn required_m(spec: &BoundSpec) -> Result<u64> {
    let bound = raw_bound(spec)?;
    if !bound.is_finite() || bound >= u64::MAX as f64 {
        return Err(Error::invalid_input(format!(
            "bound {bound} does not yield a representable sample count"
        )));
    }
    Ok(bound.max(0.0).floor() as u64 + 1)
}

/// `ln((n - s) s)`: the union-bound factor of the reference known-s case.
/// Symmetric under `s <-> n - s` and maximized at `s = n / 2`.
pub fn ref_known_s_symmetry_check(n: u64, s: u64) -> Result<f64> {
    if n < 2 || s < 1 || s > n - 1 {
        return Err(Error::invalid_input(format!(
            "need 1 <= s <= n-1, got s = {s} with n = {n}"
        )));
    }
    Ok((((n - s) * s) as f64).ln())
}
