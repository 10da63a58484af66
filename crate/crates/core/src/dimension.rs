//! Computable dimension machinery: graph clouds, box-counting regression,
//! discrete Riesz energies of (lifted) measures, and the Monte Carlo check
//! of the Gaussian moment bound behind the lower-bound argument.
//!
//! Box-counting slopes are an upper-dimension proxy; the energy scan gives
//! an independent lower estimate (the largest exponent whose energy
//! stabilizes under refinement). Experiments report both, bracketing the
//! dimension being tested.

pub mod boxes;
pub mod energy;
pub mod lemma;

pub use boxes::{
    box_count, box_count_graph, box_dimension, graph_box_dimension, graph_points,
    DimensionEstimate, GraphCloud,
};
pub use energy::{discrete_energy, energy_scan, largest_stabilizing, lift_measure, EnergyReport, Verdict};
pub use lemma::{lemma_bound_check, BoundBranch, LemmaCell, LemmaReport};

/// Expected graph dimension `min(dim_K / α, dim_K + 1 − α)`.
///
/// For a field of Hurst parameter `α` this is the almost-sure lower bound
/// (sharp for the unperturbed field); for an `α`-Hölder function it is the
/// classical upper bound. The two branches cross exactly at `α = dim_K`
/// when `dim_K < 1`.
pub fn theoretical_graph_dimension(dim_k: f64, alpha: f64) -> f64 {
    (dim_k / alpha).min(dim_k + 1.0 - alpha)
}

#[cfg(test)]
mod tests {
    use super::theoretical_graph_dimension;

    #[test]
    fn unit_interval_alpha_half() {
        assert!((theoretical_graph_dimension(1.0, 0.5) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn cantor_alpha_03_takes_the_holder_branch() {
        let dim_k = 2.0_f64.ln() / 3.0_f64.ln();
        let got = theoretical_graph_dimension(dim_k, 0.3);
        assert!((got - (dim_k + 0.7)).abs() < 1e-12, "got {got}");
        // the other branch is larger here
        assert!(dim_k / 0.3 > got);
    }

    #[test]
    fn branches_cross_at_alpha_equal_dim() {
        for dim_k in [0.2, 0.5, 0.9] {
            let at_cross = theoretical_graph_dimension(dim_k, dim_k);
            assert!((dim_k / dim_k - (dim_k + 1.0 - dim_k)).abs() < 1e-15);
            assert!((at_cross - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn unit_interval_any_alpha_is_two_minus_alpha() {
        for alpha in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let got = theoretical_graph_dimension(1.0, alpha);
            assert!((got - (2.0 - alpha)).abs() < 1e-15, "alpha {alpha}");
        }
    }
}
