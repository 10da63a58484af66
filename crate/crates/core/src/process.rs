//! Fractional Gaussian noise, fractional Brownian motion, and the additive
//! d-dimensional field built from independent per-axis motions.
//!
//! Unit-spacing fractional Gaussian noise has autocovariance
//!
//! ```text
//! γ(k) = ½ (|k+1|^{2α} − 2|k|^{2α} + |k−1|^{2α})
//! ```
//!
//! and is sampled exactly by circulant embedding: the 2n-circulant whose
//! first row matches γ on lags 0..n has nonnegative FFT spectrum for the
//! parameters of interest, so a spectrally-weighted complex Gaussian vector
//! transformed by one FFT realizes the noise with the exact covariance. When
//! the embedding spectrum dips below `-1e-10` the sampler falls back to a
//! dense Cholesky factorization of the Toeplitz covariance, which is exact
//! for every admissible parameter at O(n²) memory / O(n³) setup cost.

use std::sync::Arc;

use rand::Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngSeed;

/// Spectrum entries below this trigger the dense fallback; entries in
/// `[-EMBED_TOL, 0)` are rounding noise and are clamped to zero.
const EMBED_TOL: f64 = 1e-10;

/// Relative slack when matching a coordinate to a grid node.
const GRID_TOL: f64 = 1e-6;

/// Hurst parameter, strictly inside (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct HurstParameter(f64);

impl HurstParameter {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 0.0 && alpha < 1.0 {
            Ok(Self(alpha))
        } else {
            Err(Error::parameter(format!(
                "Hurst parameter must lie strictly in (0, 1), got {alpha}"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for HurstParameter {
    type Error = Error;
    fn try_from(alpha: f64) -> Result<Self> {
        Self::new(alpha)
    }
}

impl From<HurstParameter> for f64 {
    fn from(h: HurstParameter) -> f64 {
        h.0
    }
}

/// Autocovariance of unit-spacing fractional Gaussian noise at lag `k`.
pub fn fgn_autocovariance(k: usize, alpha: HurstParameter) -> f64 {
    let two_a = 2.0 * alpha.value();
    if k == 0 {
        1.0
    } else {
        let k = k as f64;
        0.5 * ((k + 1.0).powf(two_a) - 2.0 * k.powf(two_a) + (k - 1.0).powf(two_a))
    }
}

/// Closed-form covariance of fractional Brownian motion:
/// `Cov(W(s), W(t)) = ½ (s^{2α} + t^{2α} − |s−t|^{2α})`.
pub fn fbm_covariance(s: f64, t: f64, alpha: HurstParameter) -> f64 {
    let two_a = 2.0 * alpha.value();
    0.5 * (s.abs().powf(two_a) + t.abs().powf(two_a) - (s - t).abs().powf(two_a))
}

/// Variance of a field increment over offset `h`:
/// `σ² = |h₁|^{2α} + ⋯ + |h_d|^{2α}`.
///
/// Satisfies `‖h‖^{2α} ≤ σ² ≤ d^{1−α} ‖h‖^{2α}`.
pub fn increment_variance(h: &[f64], alpha: HurstParameter) -> f64 {
    let two_a = 2.0 * alpha.value();
    h.iter().map(|hi| hi.abs().powf(two_a)).sum()
}

/// Which sampling backend a [`FgnSampler`] ended up with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FgnBackend {
    Circulant,
    DenseCholesky,
}

#[derive(Clone)]
enum BackendImpl {
    Circulant {
        // sqrt(λ_k / 2n) for the 2n embedding eigenvalues λ_k
        weights: Arc<Vec<f64>>,
        fft: Arc<dyn Fft<f64>>,
    },
    Dense {
        // packed lower-triangular Cholesky factor of the n×n Toeplitz covariance
        chol: Arc<Vec<f64>>,
    },
}

/// Reusable sampler for `n` unit-spacing fGn increments with fixed `alpha`.
///
/// Construction precomputes the embedding spectrum (or the Cholesky factor),
/// so replicate loops pay only one FFT (or one triangular multiply) per draw.
#[derive(Clone)]
pub struct FgnSampler {
    n: usize,
    alpha: HurstParameter,
    backend: BackendImpl,
}

impl FgnSampler {
    /// Circulant-embedding sampler, falling back to dense Cholesky when the
    /// embedding spectrum has an eigenvalue below `-1e-10`.
    pub fn new(n: usize, alpha: HurstParameter) -> Result<Self> {
        if n == 0 {
            return Err(Error::parameter("sample length n must be at least 1"));
        }
        if let Some(backend) = Self::circulant_backend(n, alpha) {
            return Ok(Self { n, alpha, backend });
        }
        Self::with_dense_backend(n, alpha)
    }

    /// Dense Cholesky sampler; exact for any admissible parameters.
    pub fn with_dense_backend(n: usize, alpha: HurstParameter) -> Result<Self> {
        if n == 0 {
            return Err(Error::parameter("sample length n must be at least 1"));
        }
        let gamma: Vec<f64> = (0..n).map(|k| fgn_autocovariance(k, alpha)).collect();
        let chol = toeplitz_cholesky(&gamma)?;
        Ok(Self { n, alpha, backend: BackendImpl::Dense { chol: Arc::new(chol) } })
    }

    fn circulant_backend(n: usize, alpha: HurstParameter) -> Option<BackendImpl> {
        let m = 2 * n;
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(m);

        let mut buf: Vec<Complex64> = (0..m)
            .map(|j| {
                let lag = j.min(m - j);
                Complex64::new(fgn_autocovariance(lag, alpha), 0.0)
            })
            .collect();
        fft.process(&mut buf);

        let mut weights = Vec::with_capacity(m);
        for eig in &buf {
            let lambda = eig.re;
            if lambda < -EMBED_TOL {
                return None;
            }
            weights.push((lambda.max(0.0) / m as f64).sqrt());
        }
        Some(BackendImpl::Circulant { weights: Arc::new(weights), fft })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> HurstParameter {
        self.alpha
    }

    pub fn backend(&self) -> FgnBackend {
        match self.backend {
            BackendImpl::Circulant { .. } => FgnBackend::Circulant,
            BackendImpl::Dense { .. } => FgnBackend::DenseCholesky,
        }
    }

    /// Draw `n` unit-spacing increments (γ(0) = 1) from `rng`.
    pub fn sample(&self, rng: &mut impl Rng) -> Vec<f64> {
        match &self.backend {
            BackendImpl::Circulant { weights, fft } => {
                let m = weights.len();
                let mut buf: Vec<Complex64> = Vec::with_capacity(m);
                for w in weights.iter() {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    buf.push(Complex64::new(re * w, im * w));
                }
                fft.process(&mut buf);
                buf[..self.n].iter().map(|z| z.re).collect()
            }
            BackendImpl::Dense { chol } => {
                let z: Vec<f64> = (0..self.n).map(|_| rng.sample(StandardNormal)).collect();
                let mut out = vec![0.0; self.n];
                for i in 0..self.n {
                    let row = &chol[i * (i + 1) / 2..i * (i + 1) / 2 + i + 1];
                    out[i] = row.iter().zip(&z).map(|(l, zj)| l * zj).sum();
                }
                out
            }
        }
    }
}

/// Cholesky factorization of the symmetric Toeplitz matrix with first
/// column `gamma`, returned as a packed row-major lower triangle.
fn toeplitz_cholesky(gamma: &[f64]) -> Result<Vec<f64>> {
    let n = gamma.len();
    let mut l = vec![0.0; n * (n + 1) / 2];
    let idx = |i: usize, j: usize| i * (i + 1) / 2 + j;
    for i in 0..n {
        for j in 0..=i {
            let mut s = gamma[i - j];
            for k in 0..j {
                s -= l[idx(i, k)] * l[idx(j, k)];
            }
            if i == j {
                if s <= 0.0 {
                    return Err(Error::Factorization { pivot: i, value: s });
                }
                l[idx(i, i)] = s.sqrt();
            } else {
                l[idx(i, j)] = s / l[idx(j, j)];
            }
        }
    }
    Ok(l)
}

/// One fractional Brownian motion path on the uniform grid `{i/n}` of `[0,1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FbmPath {
    pub alpha: HurstParameter,
    /// `n + 1` uniform grid nodes `0, 1/n, …, 1`.
    pub grid: Vec<f64>,
    /// Path values at the grid nodes; `values[0] == 0`.
    pub values: Vec<f64>,
    /// Derived stream seed that produced this path.
    pub seed: u64,
}

impl FbmPath {
    /// Number of increments (grid has `n + 1` nodes).
    pub fn n(&self) -> usize {
        self.values.len() - 1
    }

    /// Value at grid node `i/n`.
    pub fn value_at_index(&self, i: usize) -> f64 {
        self.values[i]
    }

    /// Value at coordinate `x`, which must be a grid node up to `GRID_TOL`.
    pub fn value_at(&self, x: f64, axis: usize) -> Result<f64> {
        Ok(self.values[grid_index(x, self.n(), axis)?])
    }
}

/// Map `x ∈ [0,1]` to its index on the uniform `n`-increment grid, rejecting
/// coordinates that are not grid nodes.
pub(crate) fn grid_index(x: f64, n: usize, axis: usize) -> Result<usize> {
    let t = x * n as f64;
    let r = t.round();
    if (t - r).abs() > GRID_TOL || r < 0.0 || r > n as f64 {
        return Err(Error::GridMismatch { axis, coordinate: x, n });
    }
    Ok(r as usize)
}

/// Additive fractional field `W(x) = W¹(x₁) + ⋯ + W^d(x_d)` on `[0,1]^d`,
/// built from `d` independent per-axis paths with a common Hurst parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FbmField {
    pub alpha: HurstParameter,
    pub components: Vec<FbmPath>,
}

impl FbmField {
    pub fn d(&self) -> usize {
        self.components.len()
    }

    /// Grid increments per axis.
    pub fn n(&self) -> usize {
        self.components[0].n()
    }

    /// Field value at a grid node given per-axis indices.
    pub fn value_at_indices(&self, idx: &[usize]) -> f64 {
        assert_eq!(idx.len(), self.d(), "index arity must match field dimension");
        idx.iter().zip(&self.components).map(|(&i, c)| c.value_at_index(i)).sum()
    }

    /// Field value at `x`; every coordinate must be a grid node.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.d() {
            return Err(Error::parameter(format!(
                "point has dimension {}, field has dimension {}",
                x.len(),
                self.d()
            )));
        }
        let mut sum = 0.0;
        for (axis, (&xi, c)) in x.iter().zip(&self.components).enumerate() {
            sum += c.values[grid_index(xi, c.n(), axis)?];
        }
        Ok(sum)
    }
}

/// `n` unit-spacing fGn increments for the stream `(seed, axis 0)`.
pub fn sample_fgn(n: usize, alpha: HurstParameter, seed: RngSeed) -> Result<Vec<f64>> {
    let sampler = FgnSampler::new(n, alpha)?;
    Ok(sampler.sample(&mut seed.stream(0)))
}

/// fBm path on `[0,1]` with `n` increments: cumulative sum of fGn rescaled
/// to grid spacing `1/n`, so `Var(W(t)) = t^{2α}` and `W(0) = 0`.
pub fn sample_fbm_path(n: usize, alpha: HurstParameter, seed: RngSeed) -> Result<FbmPath> {
    let sampler = FgnSampler::new(n, alpha)?;
    Ok(fbm_from_sampler(&sampler, seed, 0))
}

/// Additive field of `d` independent fBm paths; axis `i` draws from the
/// stream `(seed, axis i)`, so components are independent across axes and
/// reproducible per replicate.
pub fn sample_additive_field(
    d: usize,
    n: usize,
    alpha: HurstParameter,
    seed: RngSeed,
) -> Result<FbmField> {
    if d == 0 {
        return Err(Error::parameter("field dimension d must be at least 1"));
    }
    let sampler = FgnSampler::new(n, alpha)?;
    let components = (0..d).map(|axis| fbm_from_sampler(&sampler, seed, axis as u64)).collect();
    Ok(FbmField { alpha, components })
}

fn fbm_from_sampler(sampler: &FgnSampler, seed: RngSeed, axis: u64) -> FbmPath {
    let n = sampler.n();
    let scale = (n as f64).powf(-sampler.alpha().value());
    let fgn = sampler.sample(&mut seed.stream(axis));

    let mut values = Vec::with_capacity(n + 1);
    values.push(0.0);
    let mut acc = 0.0;
    for inc in fgn {
        acc += inc * scale;
        values.push(acc);
    }
    let grid = (0..=n).map(|i| i as f64 / n as f64).collect();
    FbmPath { alpha: sampler.alpha(), grid, values, seed: seed.stream_seed(axis) }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hurst(a: f64) -> HurstParameter {
        HurstParameter::new(a).unwrap()
    }

    #[test]
    fn hurst_rejects_boundary_and_garbage() {
        assert!(HurstParameter::new(0.0).is_err());
        assert!(HurstParameter::new(1.0).is_err());
        assert!(HurstParameter::new(-0.2).is_err());
        assert!(HurstParameter::new(f64::NAN).is_err());
        assert!(HurstParameter::new(0.5).is_ok());
    }

    #[test]
    fn autocovariance_brownian_case_is_white() {
        let a = hurst(0.5);
        assert_eq!(fgn_autocovariance(0, a), 1.0);
        for k in 1..=8 {
            assert!(fgn_autocovariance(k, a).abs() < 1e-15, "lag {k} not zero");
        }
    }

    #[test]
    fn autocovariance_lag_one_alpha_075() {
        // γ(1) = ½(2^{1.5} − 2) = √2 − 1
        let expected = 2.0_f64.sqrt() - 1.0;
        let got = fgn_autocovariance(1, hurst(0.75));
        assert!((got - expected).abs() < 1e-15, "got {got}, expected {expected}");
    }

    #[test]
    fn sampler_rejects_zero_length() {
        assert!(FgnSampler::new(0, hurst(0.5)).is_err());
        assert!(sample_fgn(0, hurst(0.5), RngSeed::new(1, 0)).is_err());
    }

    #[test]
    fn circulant_backend_selected_for_standard_alphas() {
        for &a in &[0.3, 0.5, 0.7] {
            let s = FgnSampler::new(256, hurst(a)).unwrap();
            assert_eq!(s.backend(), FgnBackend::Circulant, "alpha {a}");
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let seed = RngSeed::new(99, 4);
        let a = sample_fgn(512, hurst(0.7), seed).unwrap();
        let b = sample_fgn(512, hurst(0.7), seed).unwrap();
        assert_eq!(a, b, "identical (n, alpha, seed) must be bit-identical");
        let c = sample_fgn(512, hurst(0.7), RngSeed::new(99, 5)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn path_starts_at_zero_with_full_grid() {
        for rep in 0..4 {
            let p = sample_fbm_path(128, hurst(0.4), RngSeed::new(7, rep)).unwrap();
            assert_eq!(p.values[0], 0.0);
            assert_eq!(p.values.len(), p.grid.len());
            assert_eq!(p.grid.len(), 129);
            assert_eq!(p.grid[128], 1.0);
        }
    }

    #[test]
    fn field_d1_matches_single_path() {
        let seed = RngSeed::new(3, 11);
        let field = sample_additive_field(1, 64, hurst(0.6), seed).unwrap();
        let path = sample_fbm_path(64, hurst(0.6), seed).unwrap();
        for i in 0..=64 {
            assert_eq!(field.value_at_indices(&[i]), path.value_at_index(i));
        }
    }

    #[test]
    fn field_shared_coordinate_contributes_zero() {
        let field = sample_additive_field(3, 32, hurst(0.5), RngSeed::new(21, 0)).unwrap();
        // x and y agree on axes 0 and 2, so those per-axis terms are the
        // same f64 lookups and the difference reduces to the axis-1 term.
        let x = [0.25, 0.5, 0.75];
        let y = [0.25, 0.125, 0.75];
        for axis in [0, 2] {
            let c = &field.components[axis];
            assert_eq!(c.value_at(x[axis], axis).unwrap(), c.value_at(y[axis], axis).unwrap());
        }
        let diff = field.evaluate(&x).unwrap() - field.evaluate(&y).unwrap();
        let axis1 = &field.components[1];
        let expected = axis1.value_at(0.5, 1).unwrap() - axis1.value_at(0.125, 1).unwrap();
        assert!((diff - expected).abs() < 1e-12, "diff {diff} vs {expected}");
    }

    #[test]
    fn field_starts_at_zero() {
        let field = sample_additive_field(2, 64, hurst(0.3), RngSeed::new(5, 2)).unwrap();
        assert_eq!(field.evaluate(&[0.0, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn off_grid_evaluation_is_rejected() {
        let field = sample_additive_field(1, 16, hurst(0.5), RngSeed::new(1, 1)).unwrap();
        assert!(field.evaluate(&[1.0 / 3.0]).is_err());
        assert!(field.evaluate(&[0.5]).is_ok());
        assert!(matches!(
            field.evaluate(&[1.0 / 3.0]),
            Err(Error::GridMismatch { axis: 0, .. })
        ));
    }

    #[test]
    fn increment_variance_examples() {
        let a5 = hurst(0.5);
        assert_eq!(increment_variance(&[1.0, 0.0], a5), 1.0);
        assert_eq!(increment_variance(&[0.0, 0.0, 0.0], a5), 0.0);
        // h = (1,1), α = 0.5: σ² = 2, and the upper bound d^{1−α}‖h‖^{2α} = 2 is tight.
        let sigma2 = increment_variance(&[1.0, 1.0], a5);
        assert!((sigma2 - 2.0).abs() < 1e-15);
        let norm2a = 2.0_f64.sqrt();
        let upper = 2.0_f64.powf(0.5) * norm2a;
        assert!(norm2a <= sigma2 + 1e-12);
        assert!((sigma2 - upper).abs() < 1e-12, "upper bound should be tight here");
    }

    #[test]
    fn increment_variance_sandwich_holds() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xFEED);
        for _ in 0..1000 {
            let d = rng.random_range(1..=4);
            let alpha = hurst(rng.random_range(0.05..0.95));
            let h: Vec<f64> = (0..d).map(|_| rng.random_range(-2.0..2.0)).collect();
            let sigma2 = increment_variance(&h, alpha);
            let norm = h.iter().map(|x| x * x).sum::<f64>().sqrt();
            let lower = norm.powf(2.0 * alpha.value());
            let upper = (d as f64).powf(1.0 - alpha.value()) * lower;
            assert!(
                sigma2 >= lower * (1.0 - 1e-12) - 1e-300,
                "lower bound violated: d={d} alpha={} h={h:?}",
                alpha.value()
            );
            assert!(
                sigma2 <= upper * (1.0 + 1e-12) + 1e-300,
                "upper bound violated: d={d} alpha={} h={h:?}",
                alpha.value()
            );
        }
    }

    #[test]
    fn dense_backend_is_available_and_deterministic() {
        let s = FgnSampler::with_dense_backend(64, hurst(0.7)).unwrap();
        assert_eq!(s.backend(), FgnBackend::DenseCholesky);
        let seed = RngSeed::new(17, 0);
        let a = s.sample(&mut seed.stream(0));
        let b = s.sample(&mut seed.stream(0));
        assert_eq!(a, b);
        assert_eq!(a.len(), 64);
    }
}
