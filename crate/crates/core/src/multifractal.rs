//! Box-counting singularity spectrum `f(α)` of a lattice state.
//!
//! The measure `μ_j = |ψ_j|²` is coarse-grained into boxes of size `l`, the
//! moments `Z(q, l) = Σ_k P_k(l)^q` are summed in log space, `τ(q)` is the
//! slope of `ln Z` against `ln l`, and `f(α)` follows from a Legendre
//! transform with `α = dτ/dq`.
//!
//! When `l` does not divide `N` the last box is partial, which keeps
//! `Z(1, l) = 1` exactly.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fit::linear_fit;

pub const MIN_SCALES: usize = 4;

#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityMeasure {
    weights: Vec<f64>,
}

impl ProbabilityMeasure {
    /// `|ψ_j|²` of a state normalized within 1e-10; renormalized to sum exactly to one.
    pub fn from_state(state: &[f64]) -> Result<Self> {
        let norm_sq: f64 = state.iter().map(|x| x * x).sum();
        if (norm_sq - 1.0).abs() > 1e-10 {
            return Err(Error::Unnormalized { norm_sq });
        }
        Ok(ProbabilityMeasure {
            weights: state.iter().map(|x| x * x / norm_sq).collect(),
        })
    }

    /// From nonnegative weights, normalized to unit mass.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        if weights.iter().any(|&w| !w.is_finite() || w < 0.0) {
            return Err(Error::InvalidSpec("measure weights must be finite and >= 0".into()));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::Degenerate("measure has zero mass".into()));
        }
        Ok(ProbabilityMeasure {
            weights: weights.iter().map(|w| w / total).collect(),
        })
    }

    pub fn uniform(n: usize) -> Self {
        ProbabilityMeasure {
            weights: vec![1.0 / n as f64; n],
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Box masses for `ceil(N/l)` consecutive boxes.
    pub fn box_masses(&self, l: usize) -> Vec<f64> {
        self.weights.chunks(l.max(1)).map(|c| c.iter().sum()).collect()
    }
}

/// `ln Z(q, l)`, dropping boxes whose mass is `<= floor`.
pub fn partition_function(mu: &ProbabilityMeasure, l: usize, q: f64) -> Result<f64> {
    partition_function_with_floor(mu, l, q, 0.0)
}

pub fn partition_function_with_floor(mu: &ProbabilityMeasure, l: usize, q: f64, floor: f64) -> Result<f64> {
    if l < 2 {
        return Err(Error::InvalidSpec(format!("box size must be >= 2, got {l}")));
    }
    let logs: Vec<f64> = mu
        .box_masses(l)
        .into_iter()
        .filter(|&p| p > floor)
        .map(|p| q * p.ln())
        .collect();
    if logs.is_empty() {
        return Err(Error::Degenerate(format!("every box of size {l} is empty")));
    }
    let m = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(m + logs.iter().map(|x| (x - m).exp()).sum::<f64>().ln())
}

/// Dyadic box sizes `2, 4, 8, …` up to `N/8`.
pub fn dyadic_scales(n: usize) -> Vec<usize> {
    std::iter::successors(Some(2usize), |l| Some(l * 2))
        .take_while(|&l| l <= n / 8)
        .collect()
}

/// `-8, -7.75, …, 8`.
pub fn default_q_grid() -> Vec<f64> {
    (-32..=32).map(|i| i as f64 * 0.25).collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TauPoint {
    pub q: f64,
    pub tau: f64,
    pub stderr: f64,
}

/// `τ(q)` as the least-squares slope of `ln Z(q,l)` against `ln l`.
pub fn tau(mu: &ProbabilityMeasure, scales: &[usize], q_grid: &[f64]) -> Result<Vec<TauPoint>> {
    BoxCounting::new(scales.to_vec(), q_grid.to_vec()).tau(mu)
}

pub fn singularity_spectrum(mu: &ProbabilityMeasure, scales: &[usize], q_grid: &[f64]) -> Result<SingularitySpectrum> {
    BoxCounting::new(scales.to_vec(), q_grid.to_vec()).spectrum(mu)
}

/// Box-counting settings.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxCounting {
    pub scales: Vec<usize>,
    pub q_grid: Vec<f64>,
    /// Boxes with mass at or below this are dropped (default 0).
    pub floor: f64,
}

impl BoxCounting {
    pub fn new(scales: Vec<usize>, q_grid: Vec<f64>) -> Self {
        BoxCounting {
            scales,
            q_grid,
            floor: 0.0,
        }
    }

    /// Dyadic scales for `n` sites and the default q grid.
    pub fn for_size(n: usize) -> Self {
        BoxCounting::new(dyadic_scales(n), default_q_grid())
    }

    pub fn with_floor(self, floor: f64) -> Self {
        BoxCounting { floor, ..self }
    }

    pub fn tau(&self, mu: &ProbabilityMeasure) -> Result<Vec<TauPoint>> {
        let scales: Vec<usize> = self
            .scales
            .iter()
            .copied()
            .filter(|&l| l >= 2 && l <= mu.len())
            .collect();
        if scales.len() < MIN_SCALES {
            return Err(Error::TooFewScales {
                needed: MIN_SCALES,
                got: scales.len(),
            });
        }
        let log_l: Vec<f64> = scales.iter().map(|&l| (l as f64).ln()).collect();
        self.q_grid
            .par_iter()
            .map(|&q| {
                let log_z = scales
                    .iter()
                    .map(|&l| partition_function_with_floor(mu, l, q, self.floor))
                    .collect::<Result<Vec<_>>>()?;
                let fit = linear_fit(&log_l, &log_z)?;
                Ok(TauPoint {
                    q,
                    tau: fit.slope,
                    stderr: fit.slope_stderr,
                })
            })
            .collect()
    }

    pub fn spectrum(&self, mu: &ProbabilityMeasure) -> Result<SingularitySpectrum> {
        if self.q_grid.len() < 3 {
            return Err(Error::InvalidSpec("q grid needs at least 3 points".into()));
        }
        let points = self.tau(mu)?;
        let q: Vec<f64> = points.iter().map(|p| p.q).collect();
        let tau: Vec<f64> = points.iter().map(|p| p.tau).collect();
        let m = q.len();
        let alpha: Vec<f64> = (0..m)
            .map(|i| {
                let (a, b) = match i {
                    0 => (0, 1),
                    i if i == m - 1 => (m - 2, m - 1),
                    i => (i - 1, i + 1),
                };
                (tau[b] - tau[a]) / (q[b] - q[a])
            })
            .collect();
        let f = (0..m).map(|i| q[i] * alpha[i] - tau[i]).collect();
        Ok(SingularitySpectrum {
            tau_stderr: points.iter().map(|p| p.stderr).collect(),
            q,
            tau,
            alpha,
            f,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SingularitySpectrum {
    pub q: Vec<f64>,
    pub tau: Vec<f64>,
    pub tau_stderr: Vec<f64>,
    /// `dτ/dq`; central differences inside, one-sided at the two ends.
    pub alpha: Vec<f64>,
    pub f: Vec<f64>,
}

impl SingularitySpectrum {
    /// `(α, f)` pairs without the two one-sided endpoints.
    pub fn reported(&self) -> Vec<(f64, f64)> {
        let m = self.q.len();
        (1..m - 1).map(|i| (self.alpha[i], self.f[i])).collect()
    }

    /// `α_max − α_min` over the reported points.
    pub fn support_width(&self) -> f64 {
        let pts = self.reported();
        let lo = pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        let hi = pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
        hi - lo
    }

    /// `τ` at the grid point nearest `q`.
    pub fn tau_at(&self, q: f64) -> f64 {
        let i = (0..self.q.len())
            .min_by(|&a, &b| (self.q[a] - q).abs().total_cmp(&(self.q[b] - q).abs()))
            .unwrap();
        self.tau[i]
    }

    /// Grid indices where the second difference of `f` along `q` is positive
    /// by more than three slope standard errors.
    pub fn concavity_warnings(&self) -> Vec<usize> {
        let r = self.reported();
        (1..r.len().saturating_sub(1))
            .filter(|&k| {
                let second = r[k + 1].1 - 2.0 * r[k].1 + r[k - 1].1;
                second > 3.0 * self.tau_stderr[k + 1].max(1e-12)
            })
            .map(|k| k + 1)
            .collect()
    }
}
