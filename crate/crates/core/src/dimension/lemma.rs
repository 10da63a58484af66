//! Monte Carlo check of the Gaussian moment bound
//!
//! ```text
//! E[ (‖h‖² + (λ + ΔW)²)^{-s/2} ] ≤ C · ‖h‖^{1-s-α}   (s > 1)
//!                                 ≤ C · ‖h‖^{-αs}     (s < 1)
//! ```
//!
//! with `ΔW ~ N(0, σ²(h))`, `σ² = Σ_i |h_i|^{2α}`. A single constant `C`
//! exists iff the ratio of the empirical expectation to the reference power
//! of `‖h‖` is flat across scales, so the check fits a log-log trend of the
//! per-`h` maxima (over the λ grid) against `‖h‖` and also bounds their
//! spread.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::dimension::boxes::linear_fit;
use crate::error::{Error, Result};
use crate::process::{increment_variance, HurstParameter};
use crate::rng::RngSeed;

/// Flatness gate: fitted log-log trend of ratio vs ‖h‖ within ±0.15 of 0.
pub const TREND_TOL: f64 = 0.15;
/// Spread gate: max/min of per-h maxima below 10.
pub const SPREAD_TOL: f64 = 10.0;
/// Minimum Monte Carlo sample count per (h, λ) cell.
pub const MIN_REPLICATES: usize = 10_000;

/// Which side of `s = 1` the bound was checked on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundBranch {
    SGreaterThanOne,
    SLessThanOne,
}

/// One Monte Carlo cell of the check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaCell {
    pub h_norm: f64,
    pub lambda: f64,
    /// Empirical expectation divided by the branch's reference power of ‖h‖.
    pub ratio: f64,
    /// Monte Carlo standard error of the ratio.
    pub std_error: f64,
}

/// Full report of the bound check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub alpha: f64,
    pub s: f64,
    pub branch: BoundBranch,
    pub replicates: usize,
    pub cells: Vec<LemmaCell>,
    /// Per-‖h‖ maximum ratio over the λ grid.
    pub per_h_max: Vec<(f64, f64)>,
    /// Fitted log-log slope of the per-h maxima against ‖h‖.
    pub trend_slope: f64,
    /// max/min of the per-h maxima.
    pub ratio_spread: f64,
    pub pass: bool,
}

/// Monte Carlo bound check over grids of offsets and shifts.
///
/// Each `(h, λ)` cell draws `replicates` Gaussians from its own derived
/// stream, so cells are independent and the whole report is reproducible.
pub fn lemma_bound_check(
    alpha: HurstParameter,
    s: f64,
    lambda_grid: &[f64],
    h_grid: &[Vec<f64>],
    replicates: usize,
    seed: RngSeed,
) -> Result<LemmaReport> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::parameter(format!("exponent s must be positive, got {s}")));
    }
    if (s - 1.0).abs() < 1e-12 {
        return Err(Error::Unsupported("the bound is stated for s ≠ 1".into()));
    }
    if replicates < MIN_REPLICATES {
        return Err(Error::parameter(format!(
            "replicate underflow: need at least {MIN_REPLICATES}, got {replicates}"
        )));
    }
    if lambda_grid.is_empty() || h_grid.is_empty() {
        return Err(Error::parameter("lambda and h grids must be nonempty"));
    }

    let branch =
        if s > 1.0 { BoundBranch::SGreaterThanOne } else { BoundBranch::SLessThanOne };
    let power = match branch {
        BoundBranch::SGreaterThanOne => 1.0 - s - alpha.value(),
        BoundBranch::SLessThanOne => -alpha.value() * s,
    };

    let mut cells = Vec::with_capacity(h_grid.len() * lambda_grid.len());
    let mut per_h_max = Vec::with_capacity(h_grid.len());
    for (hi, h) in h_grid.iter().enumerate() {
        let h_norm = h.iter().map(|x| x * x).sum::<f64>().sqrt();
        if h_norm == 0.0 {
            return Err(Error::parameter("offset h must be nonzero"));
        }
        let sigma = increment_variance(h, alpha).sqrt();
        let reference = h_norm.powf(power);
        let mut best = f64::NEG_INFINITY;
        for (li, &lambda) in lambda_grid.iter().enumerate() {
            let axis = (hi * lambda_grid.len() + li) as u64;
            let mut rng = seed.stream(axis);
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            for _ in 0..replicates {
                let z: f64 = rng.sample(StandardNormal);
                let dw = lambda + sigma * z;
                let val = (h_norm * h_norm + dw * dw).powf(-s / 2.0);
                sum += val;
                sum_sq += val * val;
            }
            let n = replicates as f64;
            let mean = sum / n;
            let var = (sum_sq / n - mean * mean).max(0.0);
            let ratio = mean / reference;
            let std_error = (var / n).sqrt() / reference;
            best = best.max(ratio);
            cells.push(LemmaCell { h_norm, lambda, ratio, std_error });
        }
        per_h_max.push((h_norm, best));
    }

    let xs: Vec<f64> = per_h_max.iter().map(|(h, _)| h.ln()).collect();
    let ys: Vec<f64> = per_h_max.iter().map(|(_, r)| r.ln()).collect();
    let (trend_slope, ratio_spread) = if per_h_max.len() >= 2 {
        let fit = linear_fit(&xs, &ys);
        let max = per_h_max.iter().map(|&(_, r)| r).fold(f64::NEG_INFINITY, f64::max);
        let min = per_h_max.iter().map(|&(_, r)| r).fold(f64::INFINITY, f64::min);
        (fit.slope, max / min)
    } else {
        (0.0, 1.0)
    };
    let pass = trend_slope.abs() <= TREND_TOL && ratio_spread < SPREAD_TOL;

    Ok(LemmaReport {
        alpha: alpha.value(),
        s,
        branch,
        replicates,
        cells,
        per_h_max,
        trend_slope,
        ratio_spread,
        pass,
    })
}

/// Dyadic offset grid along the first axis: `‖h‖ = 2^{-e}` for each exponent.
pub fn dyadic_offsets(d: usize, exponents: &[u32]) -> Vec<Vec<f64>> {
    exponents
        .iter()
        .map(|&e| {
            let mut h = vec![0.0; d];
            h[0] = 2.0_f64.powi(-(e as i32));
            h
        })
        .collect()
}
