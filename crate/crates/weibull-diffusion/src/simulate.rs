//! Path generation and the analytic moments of the process.
//!
//! The log state is a Gaussian process, so transitions can be sampled
//! exactly on any grid:
//!
//! ```text
//! X_t = x0 (t/eps)^gamma exp(-(t^(g+1) - eps^(g+1)) - sigma^2/2 (t - eps) + sigma (B_t - B_eps))
//! E(X_t) = x0 (t/eps)^gamma exp(eps^(g+1) - t^(g+1))
//! ```
//!
//! with `g = gamma`. The mean is proportional to the unit-scale Weibull
//! density with shape `gamma + 1`; [`weibull_pdf`] and [`mean_xt`] expose
//! the two sides of that identity. [`exact_path`] samples the exact
//! transitions, [`euler_path`] applies the explicit Euler scheme to the
//! original state equation, and both consume the same normal draws in the
//! same order so the two schemes can be coupled pathwise under a shared
//! seed.

use crate::error::{Error, Result};
use crate::model::{drift_factor, ModelParams, ObservationSeries, PathSample, Scheme};
use crate::rng::NormalSource;

/// Sampling times: strictly increasing, all positive, at least 3 of them.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    times: Vec<f64>,
}

impl TimeGrid {
    /// Uniform grid `t_k = eps + k h`, `k = 0..n-1`.
    pub fn uniform(eps: f64, h: f64, n: usize) -> Result<Self> {
        if !(eps.is_finite() && eps > 0.0) {
            return Err(Error::InvalidParam {
                name: "eps",
                value: eps,
            });
        }
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::InvalidParam { name: "h", value: h });
        }
        if n < 3 {
            return Err(Error::TooShort { n });
        }
        let times = (0..n).map(|k| eps + k as f64 * h).collect();
        Ok(Self { times })
    }

    /// Explicit grid; must be strictly increasing and positive.
    pub fn explicit(times: Vec<f64>) -> Result<Self> {
        if times.len() < 3 {
            return Err(Error::TooShort { n: times.len() });
        }
        for (i, &t) in times.iter().enumerate() {
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::NonPositiveTime { index: i, value: t });
            }
            if i > 0 && t <= times[i - 1] {
                return Err(Error::NonIncreasingTimes { index: i });
            }
        }
        Ok(Self { times })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn eps(&self) -> f64 {
        self.times[0]
    }

    fn check_matches(&self, params: &ModelParams) -> Result<()> {
        if self.eps() == params.eps() {
            Ok(())
        } else {
            Err(Error::GridMismatch {
                grid_eps: self.eps(),
                param_eps: params.eps(),
            })
        }
    }
}

/// Unit-scale Weibull density `f(t) = k t^(k-1) exp(-t^k)` with shape `k`.
///
/// Zero for `t < 0`. The process mean equals this density times a
/// constant when `k = gamma + 1`.
pub fn weibull_pdf(t: f64, shape: f64) -> Result<f64> {
    if !(shape.is_finite() && shape > 0.0) {
        return Err(Error::InvalidShape(shape));
    }
    if t < 0.0 {
        return Ok(0.0);
    }
    Ok(shape * t.powf(shape - 1.0) * (-t.powf(shape)).exp())
}

/// Analytic mean `E(X_t)` for `t >= eps`.
pub fn mean_xt(params: &ModelParams, t: f64) -> Result<f64> {
    let eps = params.eps();
    if t < eps {
        return Err(Error::TimeBeforeStart { t, eps });
    }
    let g = params.gamma();
    Ok(params.x0() * (t / eps).powf(g) * (eps.powf(g + 1.0) - t.powf(g + 1.0)).exp())
}

/// Log of the deterministic one-step growth factor between `t0` and `t1`:
/// `gamma ln(t1/t0) - (t1^(g+1) - t0^(g+1))`.
fn log_trend_step(t0: f64, t1: f64, gamma: f64) -> f64 {
    gamma * (t1 / t0).ln() - (t1.powf(gamma + 1.0) - t0.powf(gamma + 1.0))
}

fn path_values_exact(params: &ModelParams, grid: &TimeGrid, sigma: f64, seed: u64) -> Vec<f64> {
    let mut src = NormalSource::new(seed);
    let times = grid.times();
    let mut values = Vec::with_capacity(times.len());
    values.push(params.x0());
    for w in times.windows(2) {
        let h = w[1] - w[0];
        let z = if sigma > 0.0 {
            src.next_standard_normal()
        } else {
            0.0
        };
        let log_step = log_trend_step(w[0], w[1], params.gamma())
            - 0.5 * sigma * sigma * h
            + sigma * h.sqrt() * z;
        let prev = *values.last().expect("non-empty");
        values.push(prev * log_step.exp());
    }
    values
}

/// Sample a path from the exact transition law.
///
/// `values[0] = x0` and every subsequent value multiplies by the exact
/// lognormal step factor; the result is strictly positive for any seed.
/// Deterministic in `(params, grid, seed)`.
pub fn exact_path(params: &ModelParams, grid: &TimeGrid, seed: u64) -> Result<PathSample> {
    grid.check_matches(params)?;
    let values = path_values_exact(params, grid, params.sigma(), seed);
    let series = ObservationSeries::new(grid.times().to_vec(), values)?;
    Ok(PathSample {
        series,
        scheme: Scheme::Exact,
        seed,
    })
}

/// The noise-free skeleton `x0 (t/eps)^gamma exp(-(t^(g+1) - eps^(g+1)))`,
/// i.e. the exact path with the diffusion switched off. Used as a cheap
/// deterministic oracle; note this is the sigma = 0 limit of the path,
/// not the mean of the noisy process.
pub fn skeleton_path(params: &ModelParams, grid: &TimeGrid) -> Result<ObservationSeries> {
    grid.check_matches(params)?;
    let values = path_values_exact(params, grid, 0.0, 0);
    ObservationSeries::new(grid.times().to_vec(), values)
}

/// Result of an Euler simulation: the path plus, when an Euler step drove
/// the state non-positive, the index at which the path was truncated.
#[derive(Debug, Clone, PartialEq)]
pub struct EulerOutcome {
    pub sample: PathSample,
    /// Index of the first grid point that was dropped, if any.
    pub truncated_at: Option<usize>,
}

/// Explicit Euler-Maruyama path for the state equation:
/// `X_{k+1} = X_k + c(t_k) X_k h_k + sigma X_k sqrt(h_k) Z_k`.
///
/// Draws the same `Z_k` sequence as [`exact_path`] under the same seed,
/// which is what makes shared-seed strong-error comparisons meaningful.
/// The exact process is positive, so an Euler step that lands at or
/// below zero is diagnostic of too coarse a step: the path is truncated
/// there and the index reported. Truncation that leaves fewer than 3
/// points is an error.
pub fn euler_path(params: &ModelParams, grid: &TimeGrid, seed: u64) -> Result<EulerOutcome> {
    grid.check_matches(params)?;
    let mut src = NormalSource::new(seed);
    let times = grid.times();
    let sigma = params.sigma();
    let mut values = Vec::with_capacity(times.len());
    values.push(params.x0());
    let mut truncated_at = None;
    for (i, w) in times.windows(2).enumerate() {
        let h = w[1] - w[0];
        let z = src.next_standard_normal();
        let x = *values.last().expect("non-empty");
        let next = x + drift_factor(w[0], params.gamma()) * x * h + sigma * x * h.sqrt() * z;
        if !(next > 0.0) {
            truncated_at = Some(i + 1);
            break;
        }
        values.push(next);
    }
    let kept = values.len();
    if kept < 3 {
        return Err(Error::NonPositiveState {
            index: truncated_at.unwrap_or(kept),
        });
    }
    let series = ObservationSeries::new(times[..kept].to_vec(), values)?;
    Ok(EulerOutcome {
        sample: PathSample {
            series,
            scheme: Scheme::Euler,
            seed,
        },
        truncated_at,
    })
}
