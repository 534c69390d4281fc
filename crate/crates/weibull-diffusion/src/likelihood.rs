//! Exact discrete-observation likelihood.
//!
//! On the log scale the process has independent Gaussian increments:
//!
//! ```text
//! ln X_k | X_{k-1} ~ N( ln X_{k-1} + gamma ln(t_k/t_{k-1})
//!                       - (t_k^(g+1) - t_{k-1}^(g+1)) - sigma^2 h_k / 2,
//!                       sigma^2 h_k )
//! ```
//!
//! with `h_k = t_k - t_{k-1}`. The residual
//! `a_k = ln(X_k/X_{k-1}) - gamma ln(t_k/t_{k-1}) + t_k^(g+1) - t_{k-1}^(g+1)`
//! is then `N(-sigma^2 h_k / 2, sigma^2 h_k)`, and the negative
//! log-likelihood of the observed increments is a plain Gaussian sum over
//! the `a_k`. The objective deliberately omits the parameter-free
//! lognormal Jacobian `sum ln X_k`, which shifts the value but not the
//! argmax.
//!
//! Setting the sigma^2 derivative of that sum to zero gives, on a uniform
//! grid with spacing `h` and `S = sum a_k^2`, the quadratic
//! `(sigma^2 h)^2 + 4 sigma^2 h - 4 S/(N-1) = 0`, whose positive root is
//! the closed-form profile implemented by [`sigma2_profile_closed`]. The
//! differently-signed textbook expression that inspired it is kept
//! verbatim in [`paper_sigma2`] and [`paper_gamma_score`] for
//! side-by-side comparison; those two are never used by the exact
//! estimator.

use crate::error::{Error, Result};
use crate::model::{ModelParams, ObservationSeries};
use crate::optimize;

const LN_TAU: f64 = 1.837877066409345483560659472811; // ln(2 pi)

/// Increment residuals `a_k` of a series at a given drift exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct Residuals {
    a: Vec<f64>,
}

impl Residuals {
    /// The residual vector, one entry per increment (length N-1).
    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// `S = sum a_k^2`.
    pub fn sum_sq(&self) -> f64 {
        self.a.iter().map(|a| a * a).sum()
    }
}

/// Residuals `a_k = ln(X_k/X_{k-1}) - gamma ln(t_k/t_{k-1}) + t_k^(g+1) - t_{k-1}^(g+1)`.
///
/// Under the model each `a_k` has conditional mean `-sigma^2 h_k / 2` and
/// variance `sigma^2 h_k`.
pub fn residuals(series: &ObservationSeries, gamma: f64) -> Residuals {
    let t = series.times();
    let x = series.values();
    let mut a = Vec::with_capacity(t.len() - 1);
    let mut p_prev = t[0].powf(gamma + 1.0);
    for k in 1..t.len() {
        let p = t[k].powf(gamma + 1.0);
        a.push((x[k] / x[k - 1]).ln() - gamma * (t[k] / t[k - 1]).ln() + p - p_prev);
        p_prev = p;
    }
    Residuals { a }
}

/// Log-density of one exact transition, as a function of `ln x_next`.
///
/// This is the Gaussian log-pdf of `ln x_next` given `(x_prev, t_prev)`;
/// the `-ln x_next` Jacobian of the lognormal is excluded, consistently
/// with [`neg_log_likelihood`].
pub fn transition_logpdf(
    x_prev: f64,
    t_prev: f64,
    x_next: f64,
    t_next: f64,
    params: &ModelParams,
) -> Result<f64> {
    if !(t_prev > 0.0) || !(t_next > t_prev) {
        return Err(Error::NonIncreasingTimes { index: 1 });
    }
    if !(x_prev > 0.0) {
        return Err(Error::NonPositiveValue {
            index: 0,
            value: x_prev,
        });
    }
    if !(x_next > 0.0) {
        return Err(Error::NonPositiveValue {
            index: 1,
            value: x_next,
        });
    }
    let gamma = params.gamma();
    let v = params.sigma() * params.sigma() * (t_next - t_prev);
    let a = (x_next / x_prev).ln() - gamma * (t_next / t_prev).ln()
        + t_next.powf(gamma + 1.0)
        - t_prev.powf(gamma + 1.0);
    let z = a + 0.5 * v;
    Ok(-0.5 * (LN_TAU + v.ln()) - z * z / (2.0 * v))
}

/// Negative log-likelihood of the observed increments at `(gamma, sigma^2)`.
///
/// Equal to minus the sum of [`transition_logpdf`] over consecutive
/// observation pairs. `sigma2 = 0` returns negative infinity when the
/// residuals vanish too (a perfect deterministic fit) and positive
/// infinity otherwise.
pub fn neg_log_likelihood_at(series: &ObservationSeries, gamma: f64, sigma2: f64) -> f64 {
    let res = residuals(series, gamma);
    nll_from_residuals(&res, series.times(), sigma2)
}

/// [`neg_log_likelihood_at`] with the parameter pair taken from `params`.
pub fn neg_log_likelihood(series: &ObservationSeries, params: &ModelParams) -> f64 {
    neg_log_likelihood_at(series, params.gamma(), params.sigma() * params.sigma())
}

fn nll_from_residuals(res: &Residuals, times: &[f64], sigma2: f64) -> f64 {
    if sigma2 <= 0.0 {
        return if res.sum_sq() == 0.0 {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        };
    }
    let mut nll = 0.0;
    for (k, a) in res.a().iter().enumerate() {
        let v = sigma2 * (times[k + 1] - times[k]);
        let z = a + 0.5 * v;
        nll += 0.5 * (LN_TAU + v.ln()) + z * z / (2.0 * v);
    }
    nll
}

/// Profiled `sigma^2` at fixed `gamma`: the exact maximizer of the
/// likelihood over `sigma^2`.
///
/// Uniform grids use the closed form; irregular grids fall back to a
/// numeric one-dimensional minimization of the objective. The boundary
/// value 0 (all residuals zero) is returned as-is; callers treat it as
/// the degenerate noise-free case.
pub fn sigma2_profile(series: &ObservationSeries, gamma: f64) -> f64 {
    match sigma2_profile_closed(series, gamma) {
        Ok(s) => s,
        Err(_) => sigma2_profile_numeric(series, gamma),
    }
}

/// Closed-form profile on a uniform grid:
/// `sigma^2(gamma) = (2/h) (sqrt(1 + S/(N-1)) - 1)` with `S = sum a_k^2`.
///
/// Errors with [`Error::NonUniformGrid`] on irregular spacing.
pub fn sigma2_profile_closed(series: &ObservationSeries, gamma: f64) -> Result<f64> {
    let h = series.uniform_spacing().ok_or(Error::NonUniformGrid)?;
    let res = residuals(series, gamma);
    let m = res.len() as f64;
    let u = res.sum_sq() / m;
    // 2 (sqrt(1+u) - 1) written in its cancellation-free form.
    Ok(2.0 * u / (1.0 + (1.0 + u).sqrt()) / h)
}

fn sigma2_profile_numeric(series: &ObservationSeries, gamma: f64) -> f64 {
    let res = residuals(series, gamma);
    let times = series.times();
    // Moment-style scale for the bracket: E a_k^2 ~ sigma^2 h_k.
    let q: f64 = res
        .a()
        .iter()
        .enumerate()
        .map(|(k, a)| a * a / (times[k + 1] - times[k]))
        .sum();
    if q == 0.0 {
        return 0.0;
    }
    let s0 = q / res.len() as f64;
    let f = |u: f64| nll_from_residuals(&res, times, u.exp());
    let (u, _, _) = optimize::brent_min(f, s0.ln() - 40.0, s0.ln() + 40.0, 1e-13, 300);
    u.exp()
}

/// Literal and sign-flipped variants of the closed-form `sigma^2`
/// expression kept for paper-literal mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PaperSigma2 {
    /// `sqrt(4 - 4S/(N-1)) - 2`, exactly as printed. Non-positive for
    /// any S > 0.
    pub literal: f64,
    /// `2 - sqrt(4 - 4S/(N-1))`, the sign-flipped reading used by the
    /// paper-literal fitting route.
    pub sign_flipped: f64,
    /// Set when the literal value came out negative.
    pub negative_literal: bool,
}

/// Evaluate the literal closed-form `sigma^2` expression (and its
/// sign-flipped twin) at fixed `gamma`. Diagnostic only; the exact
/// estimator never consults it.
pub fn paper_sigma2(series: &ObservationSeries, gamma: f64) -> Result<PaperSigma2> {
    let res = residuals(series, gamma);
    let m = res.len() as f64;
    let radicand = 4.0 - 4.0 * res.sum_sq() / m;
    if radicand < 0.0 {
        return Err(Error::SigmaDomain { radicand });
    }
    let root = radicand.sqrt();
    Ok(PaperSigma2 {
        literal: root - 2.0,
        sign_flipped: 2.0 - root,
        negative_literal: root - 2.0 < 0.0,
    })
}

/// Literal first-order score in `gamma`:
/// `(1/2 sigma^2) sum (sigma^2 + 2 a_k)(ln(t_k/t_{k-1}) - (gamma+1)(t_k^gamma - t_{k-1}^gamma))`.
///
/// Kept verbatim (including its `(gamma+1) t^gamma` sensitivity term) for
/// paper-literal mode; the exact route profiles `sigma^2` out and never
/// differentiates analytically.
pub fn paper_gamma_score(series: &ObservationSeries, gamma: f64, sigma2: f64) -> f64 {
    let res = residuals(series, gamma);
    let t = series.times();
    let mut sum = 0.0;
    for (k, a) in res.a().iter().enumerate() {
        let w = (t[k + 1] / t[k]).ln()
            - (gamma + 1.0) * (t[k + 1].powf(gamma) - t[k].powf(gamma));
        sum += (sigma2 + 2.0 * a) * w;
    }
    sum / (2.0 * sigma2)
}
