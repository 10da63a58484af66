//! Test functions on the unit cube: truncated Weierstrass series
//! `Σ_k 2^{-kα} cos(2^k x + θ_k)` (deterministic or with i.i.d. uniform
//! random phases) and elementary Hölder functions used for upper-bound
//! experiments.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngSeed;

/// Stream axis used for phase draws; far above any field axis so a shared
/// replicate seed never reuses a component stream.
pub const PHASE_AXIS: u64 = 1 << 40;

/// Truncated Weierstrass series with exponent `alpha`, top frequency
/// `2^k_max`, and optional per-term phases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeierstrassSpec {
    pub alpha: f64,
    pub k_max: usize,
    /// One phase per term `k = 0..=k_max`; absent means all zero.
    pub phases: Option<Vec<f64>>,
}

impl WeierstrassSpec {
    pub fn new(alpha: f64, k_max: usize, phases: Option<Vec<f64>>) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0 && alpha < 1.0) {
            return Err(Error::parameter(format!(
                "Weierstrass exponent must lie in (0, 1), got {alpha}"
            )));
        }
        if k_max < 1 {
            return Err(Error::parameter("truncation k_max must be at least 1"));
        }
        if let Some(p) = &phases {
            if p.len() != k_max + 1 {
                return Err(Error::parameter(format!(
                    "expected {} phases for k = 0..={k_max}, got {}",
                    k_max + 1,
                    p.len()
                )));
            }
        }
        Ok(Self { alpha, k_max, phases })
    }

    /// Bound on the discarded tail: `2^{-(k_max+1)α} / (1 - 2^{-α})`.
    pub fn tail_bound(&self) -> f64 {
        2.0_f64.powf(-((self.k_max + 1) as f64) * self.alpha) / (1.0 - 2.0_f64.powf(-self.alpha))
    }

    /// Value of the full (untruncated) series at `x = 0` when all phases
    /// vanish: the geometric sum `1 / (1 - 2^{-α})`.
    pub fn full_series_at_zero(&self) -> f64 {
        1.0 / (1.0 - 2.0_f64.powf(-self.alpha))
    }
}

/// Partial sum `Σ_{k=0}^{k_max} 2^{-kα} cos(2^k x + θ_k)`.
pub fn weierstrass(spec: &WeierstrassSpec, x: f64) -> f64 {
    let mut sum = 0.0;
    let mut freq = 1.0;
    for k in 0..=spec.k_max {
        let phase = spec.phases.as_ref().map_or(0.0, |p| p[k]);
        sum += 2.0_f64.powf(-(k as f64) * spec.alpha) * (freq * x + phase).cos();
        freq *= 2.0;
    }
    sum
}

/// Spec with phases drawn i.i.d. uniform on `[0, 2π)` from the seeded stream.
pub fn random_phase_weierstrass(
    alpha: f64,
    k_max: usize,
    seed: RngSeed,
) -> Result<WeierstrassSpec> {
    use rand::Rng;
    let mut rng = seed.stream(PHASE_AXIS);
    let phases: Vec<f64> = (0..=k_max).map(|_| rng.random_range(0.0..TAU)).collect();
    WeierstrassSpec::new(alpha, k_max, Some(phases))
}

/// Elementary Hölder test functions on `[0,1]^d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum HolderKind {
    /// Identically zero (Lipschitz).
    Constant,
    /// `x ↦ Σ_i x_i` (Lipschitz).
    Linear,
    /// `x ↦ ‖x − c‖^β` with `c` the cube center; Hölder of exponent `beta`.
    Cusp { beta: f64 },
}

impl HolderKind {
    /// Hölder exponent certified for this function (1 for the Lipschitz ones).
    pub fn holder_exponent(&self) -> f64 {
        match self {
            HolderKind::Constant | HolderKind::Linear => 1.0,
            HolderKind::Cusp { beta } => *beta,
        }
    }
}

/// Evaluate a Hölder test function at `x` (domain `[0,1]^d`).
pub fn holder_test_function(kind: HolderKind, x: &[f64]) -> f64 {
    match kind {
        HolderKind::Constant => 0.0,
        HolderKind::Linear => x.iter().sum(),
        HolderKind::Cusp { beta } => {
            let r2: f64 = x.iter().map(|xi| (xi - 0.5) * (xi - 0.5)).sum();
            r2.sqrt().powf(beta)
        }
    }
}

/// A base function `f` for graph experiments, evaluated on `[0,1]^d`.
///
/// Weierstrass specs are univariate and are evaluated over one period by
/// mapping `[0,1]` affinely onto `[0,2π]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TestFunction {
    Zero,
    Holder(HolderKind),
    Weierstrass(WeierstrassSpec),
}

impl TestFunction {
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            TestFunction::Zero => 0.0,
            TestFunction::Holder(kind) => holder_test_function(*kind, x),
            TestFunction::Weierstrass(spec) => {
                debug_assert_eq!(x.len(), 1, "Weierstrass base functions are univariate");
                weierstrass(spec, TAU * x[0])
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            TestFunction::Zero => "zero".into(),
            TestFunction::Holder(HolderKind::Constant) => "constant".into(),
            TestFunction::Holder(HolderKind::Linear) => "linear".into(),
            TestFunction::Holder(HolderKind::Cusp { beta }) => format!("cusp(beta={beta})"),
            TestFunction::Weierstrass(s) => {
                let kind = if s.phases.is_some() { "random-phase " } else { "" };
                format!("{kind}weierstrass(alpha={}, k_max={})", s.alpha, s.k_max)
            }
        }
    }
}
