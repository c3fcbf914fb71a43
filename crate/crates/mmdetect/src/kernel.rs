//! Bounded positive-definite kernels on real vectors.
//!
//! Both supported families are uniformly bounded by `K = 1`, which is what
//! the sample-complexity bounds in [`crate::bounds`] assume.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Kernel family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelFamily {
    /// `k(x, y) = exp(-||x - y||_2^2 / (2 sigma^2))`
    Gaussian,
    /// `k(x, y) = exp(-||x - y||_1 / sigma)`
    Laplace,
}

impl std::fmt::Display for KernelFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            KernelFamily::Gaussian => write!(f, "gaussian"),
            KernelFamily::Laplace => write!(f, "laplace"),
        }
    }
}

/// A kernel family together with its bandwidth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub family: KernelFamily,
    pub sigma: f64,
}

impl KernelSpec {
    pub fn new(family: KernelFamily, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::invalid_input(format!(
                "kernel bandwidth must be a positive finite number, got {sigma}"
            )));
        }
        Ok(KernelSpec { family, sigma })
    }

    pub fn gaussian(sigma: f64) -> Result<Self> {
        Self::new(KernelFamily::Gaussian, sigma)
    }

    pub fn laplace(sigma: f64) -> Result<Self> {
        Self::new(KernelFamily::Laplace, sigma)
    }

    /// Evaluate the kernel at a pair of equal-dimension points.
    pub fn eval(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch(x.len(), y.len()));
        }
        if x.is_empty() {
            return Err(Error::invalid_input("kernel arguments must have dimension >= 1"));
        }
        Ok(self.eval_unchecked(x, y))
    }

    /// Evaluate without the dimension check. Callers must guarantee
    /// `x.len() == y.len() >= 1`; used on the hot path after dataset
    /// invariants have been validated once.
    #[inline]
    pub(crate) fn eval_unchecked(&self, x: &[f64], y: &[f64]) -> f64 {
        match self.family {
            KernelFamily::Gaussian => {
                let mut sq = 0.0;
                for (a, b) in x.iter().zip(y.iter()) {
                    let d = a - b;
                    sq += d * d;
                }
                (-sq / (2.0 * self.sigma * self.sigma)).exp()
            }
            KernelFamily::Laplace => {
                let mut l1 = 0.0;
                for (a, b) in x.iter().zip(y.iter()) {
                    l1 += (a - b).abs();
                }
                (-l1 / self.sigma).exp()
            }
        }
    }

    /// Uniform upper bound `K` with `0 <= k(x, y) <= K` for all inputs.
    /// Equal to 1 for both families, independent of the bandwidth.
    pub fn bound(&self) -> f64 {
        1.0
    }
}
