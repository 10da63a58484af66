//! Discrete Riesz energies `I_s(m) = Σ_{i≠j} w_i w_j ‖X_i − X_j‖^{-s}` and
//! the refinement scan that classifies each exponent as stabilizing or
//! diverging.
//!
//! The scan drives a level-indexed measure factory (deeper level = finer
//! discretization of the same measure) and inspects the energy increments
//! across the last three refinements. Increments of these self-similar
//! constructions decay or grow geometrically with a per-level factor that
//! crosses 1 exactly at the critical exponent, so the verdict thresholds
//! sit symmetrically around 1.

use serde::{Deserialize, Serialize};

use crate::domains::DiscreteMeasure;
use crate::error::{Error, Result};
use crate::process::FbmField;
use crate::PointCloud;

/// Fast-path stabilization: last increment below 5% of the current energy
/// (and not growing).
pub const ENERGY_REL_TOL: f64 = 0.05;
/// Per-level increment growth at or below this certifies geometric decay.
pub const ENERGY_SHRINK_TOL: f64 = 0.98;
/// Per-level increment growth at or above this certifies geometric growth.
pub const ENERGY_GROW_TOL: f64 = 1.02;

/// Outcome of an energy refinement scan at one exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Stabilizing,
    Diverging,
    Inconclusive,
}

/// Energies of one exponent across refinement levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub s: f64,
    pub levels: Vec<u32>,
    pub energies: Vec<f64>,
    pub verdict: Verdict,
}

/// Push a measure onto the graph of `f (+ W)`: points map to
/// `(x, f(x) + W(x))`, weights are unchanged.
pub fn lift_measure(
    m: &DiscreteMeasure,
    f: impl Fn(&[f64]) -> f64,
    field: Option<&FbmField>,
) -> Result<DiscreteMeasure> {
    let d = m.points.dim();
    if let Some(w) = field {
        if w.d() != d {
            return Err(Error::parameter(format!(
                "field dimension {} does not match measure dimension {d}",
                w.d()
            )));
        }
    }
    let mut lifted = PointCloud::with_capacity(d + 1, m.len());
    let mut buf = vec![0.0; d + 1];
    for x in m.points.iter() {
        buf[..d].copy_from_slice(x);
        let mut value = f(x);
        if let Some(w) = field {
            value += w.evaluate(x)?;
        }
        buf[d] = value;
        lifted.push(&buf);
    }
    DiscreteMeasure::new(lifted, m.weights.clone())
}

/// Discrete `s`-energy with strict diagonal exclusion.
///
/// Coincident distinct-index atoms make the kernel singular and are an
/// error rather than a clamp; the measures built by this crate never
/// duplicate points.
pub fn discrete_energy(m: &DiscreteMeasure, s: f64) -> Result<f64> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::parameter(format!("energy exponent must be positive, got {s}")));
    }
    let n = m.len();
    if n < 2 {
        return Ok(0.0);
    }
    let dim = m.points.dim();
    let coords = m.points.coords();
    let half = -s / 2.0;
    let mut total = 0.0;
    for i in 0..n {
        let pi = &coords[i * dim..(i + 1) * dim];
        let wi = m.weights[i];
        for j in (i + 1)..n {
            let pj = &coords[j * dim..(j + 1) * dim];
            let mut dist2 = 0.0;
            for k in 0..dim {
                let dx = pi[k] - pj[k];
                dist2 += dx * dx;
            }
            if dist2 == 0.0 {
                return Err(Error::DegeneratePair { i, j });
            }
            total += wi * m.weights[j] * dist2.powf(half);
        }
    }
    Ok(2.0 * total)
}

/// Scan exponents against refinements of a measure.
///
/// `m_builder(level)` must return the level-`level` discretization; levels
/// must be increasing. One [`EnergyReport`] per exponent.
pub fn energy_scan(
    m_builder: impl Fn(u32) -> Result<DiscreteMeasure>,
    s_grid: &[f64],
    levels: &[u32],
) -> Result<Vec<EnergyReport>> {
    if s_grid.is_empty() {
        return Err(Error::parameter("s_grid must be nonempty"));
    }
    if s_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::parameter("s_grid must be strictly increasing"));
    }
    if levels.is_empty() {
        return Err(Error::parameter("levels must be nonempty"));
    }
    if levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::parameter("levels must be strictly increasing"));
    }

    let measures: Vec<DiscreteMeasure> =
        levels.iter().map(|&l| m_builder(l)).collect::<Result<_>>()?;

    let mut reports = Vec::with_capacity(s_grid.len());
    for &s in s_grid {
        let energies: Vec<f64> =
            measures.iter().map(|m| discrete_energy(m, s)).collect::<Result<_>>()?;
        let verdict = classify(&energies);
        reports.push(EnergyReport { s, levels: levels.to_vec(), energies, verdict });
    }
    Ok(reports)
}

/// Largest exponent classified stabilizing: the energy-based dimension
/// lower estimate.
pub fn largest_stabilizing(reports: &[EnergyReport]) -> Option<f64> {
    reports.iter().filter(|r| r.verdict == Verdict::Stabilizing).map(|r| r.s).fold(None, |acc, s| {
        Some(match acc {
            Some(best) if best >= s => best,
            _ => s,
        })
    })
}

/// Classify an energy sequence by the geometry of its last three increments.
pub(crate) fn classify(energies: &[f64]) -> Verdict {
    let n = energies.len();
    if n < 4 {
        return Verdict::Inconclusive;
    }
    let e_last = energies[n - 1];
    if e_last <= 0.0 {
        return Verdict::Stabilizing;
    }
    let d1 = energies[n - 3] - energies[n - 4];
    let d2 = energies[n - 2] - energies[n - 3];
    let d3 = energies[n - 1] - energies[n - 2];
    let floor = 1e-12 * e_last;
    if d3.abs() <= floor && d2.abs() <= floor {
        return Verdict::Stabilizing;
    }
    let rel = d3.abs() / e_last;
    if d1 <= floor || d2 <= floor || d3 <= floor {
        // increments not consistently positive: no growth trend to read
        return if rel < ENERGY_REL_TOL { Verdict::Stabilizing } else { Verdict::Inconclusive };
    }
    let growth = (d3 / d1).sqrt();
    if growth <= ENERGY_SHRINK_TOL {
        Verdict::Stabilizing
    } else if growth >= ENERGY_GROW_TOL {
        Verdict::Diverging
    } else if rel < ENERGY_REL_TOL && growth <= 1.0 {
        Verdict::Stabilizing
    } else {
        Verdict::Inconclusive
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::{build_cantor, build_interval, natural_measure, CantorSpec};

    fn measure_on(points: Vec<f64>, dim: usize) -> DiscreteMeasure {
        let n = points.len() / dim;
        DiscreteMeasure::new(PointCloud::from_flat(dim, points), vec![1.0 / n as f64; n]).unwrap()
    }

    #[test]
    fn two_atoms_at_unit_distance() {
        let m = measure_on(vec![0.0, 1.0], 1);
        for s in [0.3, 0.7, 1.5, 2.4] {
            let e = discrete_energy(&m, s).unwrap();
            assert!((e - 0.5).abs() < 1e-15, "s={s}: {e}");
        }
    }

    #[test]
    fn single_atom_has_zero_energy() {
        let m = DiscreteMeasure::new(PointCloud::from_flat(1, vec![0.25]), vec![1.0]).unwrap();
        assert_eq!(discrete_energy(&m, 0.8).unwrap(), 0.0);
    }

    #[test]
    fn coincident_atoms_are_reported_with_indices() {
        let m = measure_on(vec![0.0, 0.5, 0.5], 1);
        match discrete_energy(&m, 0.5) {
            Err(Error::DegeneratePair { i: 1, j: 2 }) => {}
            other => panic!("expected degenerate pair (1,2), got {other:?}"),
        }
    }

    #[test]
    fn energy_is_monotone_in_s_for_small_diameter() {
        // all pairwise distances ≤ 1, so every kernel term is nondecreasing in s
        let c = build_cantor(&CantorSpec::new(3, vec![0, 2], 5).unwrap()).unwrap();
        let m = natural_measure(&c).unwrap();
        let mut prev = 0.0;
        for s in [0.2, 0.4, 0.6, 0.8, 1.0] {
            let e = discrete_energy(&m, s).unwrap();
            assert!(e >= prev, "s={s}: {e} < {prev}");
            prev = e;
        }
    }

    #[test]
    fn lift_preserves_weights_and_mass() {
        let c = build_cantor(&CantorSpec::new(3, vec![0, 2], 4).unwrap()).unwrap();
        let m = natural_measure(&c).unwrap();
        let lifted = lift_measure(&m, |_| 0.0, None).unwrap();
        assert_eq!(lifted.weights, m.weights);
        assert_eq!(lifted.points.dim(), 2);
        for (orig, lift) in m.points.iter().zip(lifted.points.iter()) {
            assert_eq!(lift[0], orig[0]);
            assert_eq!(lift[1], 0.0);
        }
        let total: f64 = lifted.weights.iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn scan_validates_inputs() {
        let builder = |l: u32| natural_measure(&build_interval(1, 1 << l)?);
        assert!(energy_scan(builder, &[], &[4, 5, 6, 7]).is_err());
        assert!(energy_scan(builder, &[0.5, 0.4], &[4, 5, 6, 7]).is_err());
        assert!(energy_scan(builder, &[0.5], &[]).is_err());
        assert!(energy_scan(builder, &[0.5], &[4, 4]).is_err());
    }

    #[test]
    fn interval_scan_classifies_both_sides_of_criticality() {
        // Lebesgue on [0,1] has finite s-energy exactly for s < 1.
        let builder = |l: u32| natural_measure(&build_interval(1, 1 << l)?);
        let reports = energy_scan(builder, &[0.9, 1.1], &[4, 5, 6, 7, 8, 9, 10]).unwrap();
        assert_eq!(reports[0].verdict, Verdict::Stabilizing, "s=0.9: {:?}", reports[0]);
        assert_eq!(reports[1].verdict, Verdict::Diverging, "s=1.1: {:?}", reports[1]);
    }

    #[test]
    fn cantor_scan_classifies_both_sides_of_criticality() {
        // critical exponent log 2 / log 3 ≈ 0.63
        let builder = |l: u32| {
            natural_measure(&build_cantor(&CantorSpec::new(3, vec![0, 2], l)?)?)
        };
        let reports = energy_scan(builder, &[0.4, 0.9], &[4, 5, 6, 7, 8, 9, 10]).unwrap();
        assert_eq!(reports[0].verdict, Verdict::Stabilizing, "s=0.4: {:?}", reports[0]);
        assert_eq!(reports[1].verdict, Verdict::Diverging, "s=0.9: {:?}", reports[1]);
    }

    #[test]
    fn cantor_largest_stabilizing_brackets_the_dimension() {
        let builder = |l: u32| {
            natural_measure(&build_cantor(&CantorSpec::new(3, vec![0, 2], l)?)?)
        };
        let s_grid: Vec<f64> = (3..=9).map(|i| i as f64 / 10.0).collect();
        let reports = energy_scan(builder, &s_grid, &[4, 5, 6, 7, 8, 9, 10]).unwrap();
        let best = largest_stabilizing(&reports).expect("some exponent must stabilize");
        assert!((0.55..=0.65).contains(&best), "largest stabilizing {best}");
    }

    #[test]
    fn classifier_flags_flat_and_short_sequences() {
        assert_eq!(classify(&[1.0, 1.0, 1.0, 1.0]), Verdict::Stabilizing);
        assert_eq!(classify(&[1.0, 2.0, 3.0]), Verdict::Inconclusive);
        assert_eq!(classify(&[0.0, 0.0, 0.0, 0.0]), Verdict::Stabilizing);
        // clean geometric growth
        assert_eq!(classify(&[1.0, 3.0, 7.0, 15.0]), Verdict::Diverging);
        // clean geometric decay toward a limit
        assert_eq!(classify(&[1.0, 1.5, 1.75, 1.875]), Verdict::Stabilizing);
    }
}
