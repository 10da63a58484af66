use fracdim_core::dimension::{box_dimension, graph_points};
use fracdim_core::domains::{build_cantor, build_interval, CantorSpec};
use fracdim_core::process::{sample_additive_field, HurstParameter};
use fracdim_core::RngSeed;

fn main() {
    // cantor windows at levels 8 and 10
    for level in [8u32, 10] {
        let m = build_cantor(&CantorSpec::new(3, vec![0, 2], level).unwrap()).unwrap();
        for (lo, hi) in [(2u32, 7u32), (3, 8), (2, 8), (3, 9), (3, 10), (2, 9)] {
            if hi as usize > (level as usize * 3) { continue; }
            let est = box_dimension(m.sample_points(), lo, hi).unwrap();
            println!("cantor l={level} window {lo}..{hi}: slope={:.4} r2={:.4}", est.slope, est.r_squared);
        }
    }
    // brownian graph, isotropic normalization, several seeds
    for nexp in [12u32, 14] {
        let set = build_interval(1, 1 << nexp).unwrap();
        let hi = if nexp == 12 { 9 } else { 10 };
        let mut slopes = Vec::new();
        for rep in 0..8 {
            let field = sample_additive_field(1, 1 << nexp, HurstParameter::new(0.5).unwrap(), RngSeed::new(4242, rep)).unwrap();
            let graph = graph_points(|_| 0.0, &set, Some(&field)).unwrap();
            let est = box_dimension(&graph.points, 3, hi).unwrap();
            slopes.push(est.slope);
        }
        let mean = slopes.iter().sum::<f64>() / slopes.len() as f64;
        println!("fbm graph a=0.5 n=2^{nexp} window 3..{hi}: mean={mean:.4} slopes={:?}", slopes.iter().map(|s| format!("{s:.3}")).collect::<Vec<_>>());
    }
}
