//! Domain types for the diffusion
//!
//! ```text
//! X_eps = x0,   dX_t = (gamma/t (1 - t^(gamma+1)) - t^gamma) X_t dt + sigma X_t dB_t
//! ```
//!
//! together with validation of observed series and the linear-growth
//! contract on the coefficients. The drift factor has a `1/t` pole, so
//! nothing in this crate ever touches `t <= 0`; the process starts at a
//! small positive time `eps` carried inside [`ModelParams`].

use serde::Serialize;

use crate::error::{Error, Result};

/// Model parameters `(gamma, sigma)` plus the initial condition `(x0, eps)`.
///
/// All four must be finite and strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    gamma: f64,
    sigma: f64,
    x0: f64,
    eps: f64,
}

impl ModelParams {
    pub fn new(gamma: f64, sigma: f64, x0: f64, eps: f64) -> Result<Self> {
        check_positive("gamma", gamma)?;
        check_positive("sigma", sigma)?;
        check_positive("x0", x0)?;
        check_positive("eps", eps)?;
        Ok(Self {
            gamma,
            sigma,
            x0,
            eps,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }
}

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParam { name, value })
    }
}

/// State-independent drift factor `c(t) = gamma/t (1 - t^(gamma+1)) - t^gamma`,
/// so that the drift is `mu(t, x) = c(t) x` and the diffusion is `sigma x`.
pub fn drift_factor(t: f64, gamma: f64) -> f64 {
    gamma / t * (1.0 - t.powf(gamma + 1.0)) - t.powf(gamma)
}

/// Linear-growth constant for the coefficients over a concrete set of times:
/// the smallest `L` with `|mu(t,x)| + |sigma x| <= L (1 + |x|)` for every
/// grid time `t`, namely `max_t |c(t)| + sigma`.
///
/// The Lipschitz and moment conditions are documented contracts of the
/// model; only this grid-local growth bound is observable at runtime.
pub fn linear_growth_bound(params: &ModelParams, times: &[f64]) -> f64 {
    let sup = times
        .iter()
        .map(|&t| drift_factor(t, params.gamma()).abs())
        .fold(0.0_f64, f64::max);
    sup + params.sigma()
}

/// A discretely observed trajectory: strictly increasing positive times
/// paired with strictly positive states. Construction validates, and the
/// fields are immutable afterwards.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObservationSeries {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl ObservationSeries {
    /// Validate `(times, values)` into a series. See [`validate_series`].
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::LengthMismatch {
                times: times.len(),
                values: values.len(),
            });
        }
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
        for (i, &x) in values.iter().enumerate() {
            if !(x.is_finite() && x > 0.0) {
                return Err(Error::NonPositiveValue { index: i, value: x });
            }
        }
        Ok(Self { times, values })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of observations N.
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        false // invariant: N >= 3
    }

    /// First observation time; the process start eps.
    pub fn start_time(&self) -> f64 {
        self.times[0]
    }

    /// Common spacing when the grid is uniform (relative tolerance 1e-9),
    /// `None` on irregular grids.
    pub fn uniform_spacing(&self) -> Option<f64> {
        let h = self.times[1] - self.times[0];
        let uniform = self
            .times
            .windows(2)
            .all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h);
        uniform.then_some(h)
    }
}

/// Validate raw `(times, values)` vectors into an [`ObservationSeries`].
///
/// Checks, in order: equal lengths, N >= 3, every time finite and > 0,
/// strict increase, every value finite and > 0. Inputs are never mutated;
/// validating an already-valid series returns an equal series.
pub fn validate_series(times: Vec<f64>, values: Vec<f64>) -> Result<ObservationSeries> {
    ObservationSeries::new(times, values)
}

/// Which stepping scheme produced a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Scheme {
    Exact,
    Euler,
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Scheme::Exact => write!(f, "exact"),
            Scheme::Euler => write!(f, "euler"),
        }
    }
}

/// A simulated trajectory together with what generated it, so any path
/// can be replayed bit-for-bit from `(scheme, seed, params, grid)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathSample {
    pub series: ObservationSeries,
    pub scheme: Scheme,
    pub seed: u64,
}

/// Which estimator produced an [`EstimationResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EstimationMode {
    /// Profile maximum likelihood on the exact transition density.
    ExactMle,
    /// Fixed point of the closed-form score expressions, kept for
    /// comparison with the exact route.
    PaperLiteral,
}

/// Diagnostic flags attached to a fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FitFlag {
    /// The optimum sat on the search boundary even after one expansion.
    BoundaryHit,
    /// The profiled sigma^2 collapsed to zero (noise-free data).
    DegenerateSigma,
    /// Every summand of the literal score vanished; any gamma solves it.
    DegenerateScore,
    /// The literal sigma^2 expression evaluated negative.
    NegativeLiteralSigma,
}

/// Parameter a confidence interval refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Param {
    Gamma,
    Sigma,
}

/// How a confidence interval was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CiMethod {
    Fisher,
    Bootstrap,
}

/// One confidence interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConfidenceInterval {
    pub param: Param,
    pub method: CiMethod,
    pub level: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Point estimates with uncertainty and solver diagnostics.
///
/// `sigma_hat` is always `sqrt(sigma2_hat)`. Standard errors and
/// confidence intervals are empty until filled in by the uncertainty
/// routines; `neg_log_lik` is the Gaussian objective on the
/// log-increments (the parameter-free Jacobian term is omitted).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimationResult {
    pub gamma_hat: f64,
    pub sigma_hat: f64,
    pub sigma2_hat: f64,
    pub neg_log_lik: f64,
    pub stderr_gamma: f64,
    pub stderr_sigma: f64,
    pub ci: Vec<ConfidenceInterval>,
    pub mode: EstimationMode,
    pub iterations: usize,
    pub converged: bool,
    pub flags: Vec<FitFlag>,
}

impl EstimationResult {
    pub fn has_flag(&self, flag: FitFlag) -> bool {
        self.flags.contains(&flag)
    }

    fn point(&self, param: Param) -> f64 {
        match param {
            Param::Gamma => self.gamma_hat,
            Param::Sigma => self.sigma_hat,
        }
    }

    /// Check the CI sanity invariant: every interval at level >= 0.5
    /// brackets its point estimate (only meaningful once converged).
    pub fn ci_brackets_estimates(&self) -> bool {
        self.ci
            .iter()
            .filter(|c| c.level >= 0.5)
            .all(|c| c.lower <= self.point(c.param) && self.point(c.param) <= c.upper)
    }
}

/// Per-parameter aggregate over Monte Carlo replications.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParamStats {
    pub mean: f64,
    pub bias: f64,
    /// Population standard deviation over replicates, so that
    /// `rmse^2 = bias^2 + sd^2` holds exactly.
    pub sd: f64,
    pub rmse: f64,
    /// Monte Carlo standard error of the mean.
    pub mc_se: f64,
}

/// Echo of a Monte Carlo study configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyConfig {
    pub gamma: f64,
    pub sigma: f64,
    pub x0: f64,
    pub eps: f64,
    pub h: f64,
    pub n: usize,
    pub replications: usize,
    pub seed: u64,
    pub mode: EstimationMode,
}

/// Bias/SD/RMSE summary of a simulate-then-fit study at fixed truth.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudySummary {
    pub config: StudyConfig,
    pub gamma: ParamStats,
    pub sigma: ParamStats,
    /// Mean of |sigma2_hat - sigma^2| with its Monte Carlo standard error.
    pub sigma2_abs_error_mean: f64,
    pub sigma2_abs_error_se: f64,
    /// Signed mean of (sigma2_hat - sigma^2).
    pub sigma2_bias: f64,
    pub failed_replicates: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_require_positive_fields() {
        assert!(ModelParams::new(1.0, 0.2, 10.0, 1e-3).is_ok());
        for bad in [
            ModelParams::new(0.0, 0.2, 10.0, 1e-3),
            ModelParams::new(1.0, 0.0, 10.0, 1e-3),
            ModelParams::new(1.0, 0.2, 0.0, 1e-3),
            ModelParams::new(1.0, 0.2, 10.0, 0.0),
            ModelParams::new(f64::NAN, 0.2, 10.0, 1e-3),
            ModelParams::new(1.0, 0.2, 10.0, -1.0),
        ] {
            assert!(matches!(bad, Err(Error::InvalidParam { .. })));
        }
    }

    #[test]
    fn validate_accepts_simple_series() {
        let s = validate_series(vec![0.001, 0.002, 0.003], vec![10.0, 9.9, 9.8]).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.start_time(), 0.001);
    }

    #[test]
    fn validate_rejects_zero_time() {
        let err = validate_series(vec![0.0, 0.001], vec![10.0, 9.9]).unwrap_err();
        // Length check runs first, so keep N = 3 to reach the time check.
        assert!(matches!(err, Error::TooShort { n: 2 }));
        let err =
            validate_series(vec![0.0, 0.001, 0.002], vec![10.0, 9.9, 9.8]).unwrap_err();
        assert!(matches!(err, Error::NonPositiveTime { index: 0, .. }));
    }

    #[test]
    fn validate_rejects_negative_value() {
        let err =
            validate_series(vec![0.001, 0.002, 0.003], vec![10.0, -1.0, 9.8]).unwrap_err();
        assert!(matches!(err, Error::NonPositiveValue { index: 1, .. }));
    }

    #[test]
    fn validate_rejects_shape_errors() {
        assert!(matches!(
            validate_series(vec![0.1, 0.2], vec![1.0, 2.0, 3.0]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            validate_series(vec![0.1, 0.2, 0.2], vec![1.0, 2.0, 3.0]),
            Err(Error::NonIncreasingTimes { index: 2 })
        ));
    }

    #[test]
    fn validation_is_idempotent() {
        let s = validate_series(vec![0.1, 0.2, 0.35], vec![1.0, 2.0, 3.0]).unwrap();
        let again =
            validate_series(s.times().to_vec(), s.values().to_vec()).unwrap();
        assert_eq!(s, again);
    }

    #[test]
    fn uniform_spacing_detection() {
        let s = validate_series(vec![0.1, 0.2, 0.3, 0.4], vec![1.0; 4]).unwrap();
        let h = s.uniform_spacing().unwrap();
        assert!((h - 0.1).abs() < 1e-15);
        let s = validate_series(vec![0.1, 0.2, 0.45], vec![1.0; 3]).unwrap();
        assert!(s.uniform_spacing().is_none());
    }

    #[test]
    fn growth_bound_dominates_coefficients_on_grid() {
        let params = ModelParams::new(1.3, 0.4, 5.0, 1e-3).unwrap();
        let times: Vec<f64> = (0..500).map(|k| 1e-3 + k as f64 * 2e-3).collect();
        let l = linear_growth_bound(&params, &times);
        for &t in &times {
            for x in [0.01_f64, 1.0, 42.0, 1e6] {
                let mu = drift_factor(t, params.gamma()) * x;
                let g = params.sigma() * x;
                assert!(
                    mu.abs() + g.abs() <= l * (1.0 + x.abs()) + 1e-9,
                    "growth bound violated at t={t}, x={x}"
                );
            }
        }
    }
}
