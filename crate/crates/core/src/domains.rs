//! Finite-resolution models of compact subsets of `[0,1]^d` with known
//! dimension, and natural probability measures on them.
//!
//! Three constructors cover the test family: the full cube `[0,1]^d`,
//! digit-restricted Cantor sets (base `b`, surviving digit set `D`, giving
//! similarity dimension `log|D| / log b`), and finite products of the two.
//! Each model carries one representative sample point per cell — the cell's
//! lower-left corner — and, when known, the analytic dimension used as
//! ground truth by the estimators.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::PointCloud;

/// Relative tolerance when checking that two models share a cell side.
const SIDE_TOL: f64 = 1e-9;

/// Digit-restricted Cantor construction: keep base-`b` expansions whose
/// first `level` digits all lie in `digits`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CantorSpec {
    pub base: u32,
    pub digits: Vec<u32>,
    pub level: u32,
}

impl CantorSpec {
    pub fn new(base: u32, digits: impl Into<Vec<u32>>, level: u32) -> Result<Self> {
        let mut digits = digits.into();
        digits.sort_unstable();
        digits.dedup();
        if base < 2 {
            return Err(Error::parameter("Cantor base must be at least 2"));
        }
        if digits.is_empty() {
            return Err(Error::parameter("Cantor digit set must be nonempty"));
        }
        if digits.iter().any(|&d| d >= base) {
            return Err(Error::parameter(format!(
                "Cantor digits must lie in 0..{base}, got {digits:?}"
            )));
        }
        Ok(Self { base, digits, level })
    }

    /// Similarity dimension `log|D| / log b`, in (0, 1].
    pub fn similarity_dimension(&self) -> f64 {
        (self.digits.len() as f64).ln() / (self.base as f64).ln()
    }
}

/// A compact set in `[0,1]^d` modeled as disjoint axis-aligned cells of a
/// common side length, with one representative sample point per cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompactSetModel {
    /// Ambient dimension.
    pub d: usize,
    /// Common side length of all cells.
    pub side: f64,
    /// Lower-left corner of each cell (also the sample point).
    pub corners: PointCloud,
    /// Analytic dimension when known for this family.
    pub reference_dimension: Option<f64>,
    /// Human-readable construction label.
    pub label: String,
}

impl CompactSetModel {
    pub fn cell_count(&self) -> usize {
        self.corners.len()
    }

    /// Representative points (cell lower-left corners).
    pub fn sample_points(&self) -> &PointCloud {
        &self.corners
    }

    /// Grid increments per axis implied by the cell side (`1 / side`).
    pub fn grid_resolution(&self) -> usize {
        (1.0 / self.side).round() as usize
    }
}

/// A finitely supported probability measure: weighted points in `R^d`
/// (or `R^{d+1}` after a graph lift).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMeasure {
    pub points: PointCloud,
    pub weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn new(points: PointCloud, weights: Vec<f64>) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(Error::parameter(format!(
                "{} points but {} weights",
                points.len(),
                weights.len()
            )));
        }
        if weights.iter().any(|&w| !w.is_finite() || w < 0.0) {
            return Err(Error::parameter("weights must be finite and nonnegative"));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::parameter(format!("weights sum to {total}, expected 1")));
        }
        Ok(Self { points, weights })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Model of the full cube `[0,1]^d` as a grid of `resolution^d` cells.
pub fn build_interval(d: usize, resolution: usize) -> Result<CompactSetModel> {
    if d == 0 {
        return Err(Error::parameter("ambient dimension must be at least 1"));
    }
    if resolution == 0 {
        return Err(Error::parameter("resolution must be at least 1"));
    }
    let side = 1.0 / resolution as f64;
    let count = resolution.checked_pow(d as u32).ok_or_else(|| {
        Error::parameter(format!("cell count {resolution}^{d} overflows"))
    })?;

    let mut corners = PointCloud::with_capacity(d, count);
    let mut point = vec![0usize; d];
    let mut buf = vec![0.0; d];
    loop {
        for (b, &i) in buf.iter_mut().zip(&point) {
            *b = i as f64 * side;
        }
        corners.push(&buf);
        // odometer increment over the d-fold grid
        let mut axis = 0;
        loop {
            if axis == d {
                return Ok(CompactSetModel {
                    d,
                    side,
                    corners,
                    reference_dimension: Some(d as f64),
                    label: format!("interval(d={d}, res={resolution})"),
                });
            }
            point[axis] += 1;
            if point[axis] < resolution {
                break;
            }
            point[axis] = 0;
            axis += 1;
        }
    }
}

/// Level-`level` iterate of the digit-restricted Cantor set in `[0,1]`.
pub fn build_cantor(spec: &CantorSpec) -> Result<CompactSetModel> {
    let b = spec.base as f64;
    let side = b.powi(-(spec.level as i32));
    let count = (spec.digits.len() as u64).checked_pow(spec.level).ok_or_else(|| {
        Error::parameter(format!("cell count |D|^{} overflows", spec.level))
    })? as usize;

    // Corners are Σ d_i b^{-i} over all digit strings in D^level, generated
    // in lexicographic order so the output is sorted.
    let mut corners = PointCloud::with_capacity(1, count);
    let mut stack = vec![(0.0_f64, 0u32)];
    while let Some((x, depth)) = stack.pop() {
        if depth == spec.level {
            corners.push(&[x]);
            continue;
        }
        let scale = b.powi(-(depth as i32 + 1));
        for &digit in spec.digits.iter().rev() {
            stack.push((x + digit as f64 * scale, depth + 1));
        }
    }

    Ok(CompactSetModel {
        d: 1,
        side,
        corners,
        reference_dimension: Some(spec.similarity_dimension()),
        label: format!("cantor(b={}, digits={:?}, level={})", spec.base, spec.digits, spec.level),
    })
}

/// Cartesian product of two models sharing a cell side.
pub fn build_product(a: &CompactSetModel, b: &CompactSetModel) -> Result<CompactSetModel> {
    let rel = (a.side - b.side).abs() / a.side.max(b.side);
    if rel > SIDE_TOL {
        return Err(Error::parameter(format!(
            "incompatible resolutions: sides {} and {}",
            a.side, b.side
        )));
    }
    let d = a.d + b.d;
    let mut corners = PointCloud::with_capacity(d, a.cell_count() * b.cell_count());
    let mut buf = vec![0.0; d];
    for pa in a.corners.iter() {
        buf[..a.d].copy_from_slice(pa);
        for pb in b.corners.iter() {
            buf[a.d..].copy_from_slice(pb);
            corners.push(&buf);
        }
    }
    let reference_dimension = match (a.reference_dimension, b.reference_dimension) {
        (Some(x), Some(y)) => Some(x + y),
        _ => None,
    };
    Ok(CompactSetModel {
        d,
        side: a.side,
        corners,
        reference_dimension,
        label: format!("{} x {}", a.label, b.label),
    })
}

/// Natural measure at this resolution: uniform weight `1/cells` on each
/// representative point. For the self-similar constructions above this is
/// the canonical equal-split measure.
pub fn natural_measure(set: &CompactSetModel) -> Result<DiscreteMeasure> {
    let n = set.cell_count();
    if n == 0 {
        return Err(Error::parameter("cannot build a measure on an empty set"));
    }
    let w = 1.0 / n as f64;
    DiscreteMeasure::new(set.corners.clone(), vec![w; n])
}
