//! Numerical laboratory for dimension theory of function graphs.
//!
//! The crate samples additive fractional Gaussian fields on compact subsets
//! of the unit cube, builds graph point clouds `{(x, f(x) + W(x))}`, and
//! estimates their box-counting dimension together with a potential-theoretic
//! (Riesz-energy) lower estimate. The pieces are:
//!
//! - [`process`]: exact fractional Gaussian noise / fractional Brownian
//!   motion sampling (circulant embedding with a dense Cholesky fallback)
//!   and the additive field `W(x) = W¹(x₁) + ⋯ + W^d(x_d)`.
//! - [`domains`]: finite-resolution models of compact sets (intervals,
//!   digit-restricted Cantor sets, products) and their natural measures.
//! - [`functions`]: Weierstrass-type series with optional random phases and
//!   elementary Hölder test functions.
//! - [`dimension`]: box counting with log-log regression, discrete
//!   `s`-energies of (graph-lifted) measures, and a Monte Carlo check of the
//!   Gaussian moment bound used in the dimension lower-bound argument.
//!
//! Everything is a pure function of its arguments; randomness always flows
//! through an explicit [`rng::RngSeed`], so results are reproducible bit for
//! bit given the same inputs.

pub mod dimension;
pub mod domains;
pub mod error;
pub mod functions;
pub mod process;
pub mod rng;

pub use dimension::{
    box_count, box_count_graph, box_dimension, discrete_energy, energy_scan, graph_box_dimension,
    graph_points, lemma_bound_check, lift_measure, theoretical_graph_dimension, BoundBranch,
    DimensionEstimate, EnergyReport, GraphCloud, LemmaCell, LemmaReport, Verdict,
};
pub use domains::{
    build_cantor, build_interval, build_product, natural_measure, CantorSpec, CompactSetModel,
    DiscreteMeasure,
};
pub use error::{Error, Result};
pub use functions::{random_phase_weierstrass, weierstrass, HolderKind, TestFunction, WeierstrassSpec};
pub use process::{
    increment_variance, sample_additive_field, sample_fbm_path, sample_fgn, FbmField, FbmPath,
    FgnSampler, HurstParameter,
};
pub use rng::RngSeed;

/// A flat, dimension-tagged point cloud in `R^dim`.
///
/// Coordinates are stored contiguously (`point i` occupies
/// `coords[i*dim .. (i+1)*dim]`), which keeps million-point graph clouds in
/// a single allocation.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PointCloud {
    dim: usize,
    coords: Vec<f64>,
}

impl PointCloud {
    /// Empty cloud of points in `R^dim`.
    pub fn new(dim: usize) -> Self {
        assert!(dim > 0, "point cloud dimension must be positive");
        Self { dim, coords: Vec::new() }
    }

    pub fn with_capacity(dim: usize, points: usize) -> Self {
        assert!(dim > 0, "point cloud dimension must be positive");
        Self { dim, coords: Vec::with_capacity(dim * points) }
    }

    /// Build from a flat coordinate buffer; `coords.len()` must be a
    /// multiple of `dim`.
    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Self {
        assert!(dim > 0, "point cloud dimension must be positive");
        assert!(coords.len() % dim == 0, "flat buffer length must be a multiple of dim");
        Self { dim, coords }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn push(&mut self, p: &[f64]) {
        assert_eq!(p.len(), self.dim, "point has wrong dimension");
        self.coords.extend_from_slice(p);
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}
