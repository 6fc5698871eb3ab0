//! Regenerates `src/goftests/lilliefors_table.rs`: upper quantiles of
//! `sqrt(n) D` for the KS distance to the normal fitted to each sample.
//!
//!     cargo run --release -p modelcred-core --example lilliefors_table \
//!         > crates/core/src/goftests/lilliefors_table.rs

use modelcred_core::goftests::estimated_normal_distance_sorted;
use modelcred_core::{DistributionFamily, SeedSpec};
use rayon::prelude::*;

const SIZES: &[usize] = &[
    4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20, 22, 25, 30, 35, 40, 45, 50, 60, 70, 80,
    90, 100, 120, 150, 200, 250, 300, 400, 500, 700, 1000, 1500, 2000, 3000, 5000,
];
const ALPHAS: &[f64] = &[
    0.5, 0.4, 0.3, 0.25, 0.2, 0.15, 0.1, 0.075, 0.05, 0.04, 0.03, 0.025, 0.02, 0.01, 0.005, 0.0025, 0.001,
];
const REPLICATES: u64 = 100_000;
const SEED: u64 = 0x11ef_0e75;

fn main() {
    let normal = DistributionFamily::STANDARD_NORMAL;
    let rows: Vec<Vec<f64>> = SIZES
        .iter()
        .map(|&n| {
            let job = SeedSpec::from_master(SEED).fork(n as u64);
            let mut stats: Vec<f64> = (0..REPLICATES)
                .into_par_iter()
                .map_init(
                    || vec![0.0; n],
                    |buf, b| {
                        let mut rng = job.stream(b).rng();
                        normal.fill(&mut rng, buf);
                        buf.sort_unstable_by(f64::total_cmp);
                        estimated_normal_distance_sorted(buf).expect("continuous draws") * (n as f64).sqrt()
                    },
                )
                .collect();
            stats.sort_unstable_by(f64::total_cmp);
            eprintln!("n = {n} done");
            ALPHAS.iter().map(|&a| upper_quantile(&stats, a)).collect()
        })
        .collect();

    println!("// Generated by examples/lilliefors_table.rs ({REPLICATES} replicates per size). Do not edit.");
    println!("pub(super) const SIZES: &[usize] = &{SIZES:?};");
    println!("pub(super) const ALPHAS: &[f64] = &{ALPHAS:?};");
    println!("pub(super) const SCALED_QUANTILES: &[[f64; {}]] = &[", ALPHAS.len());
    for (n, row) in SIZES.iter().zip(&rows) {
        let cells: Vec<String> = row.iter().map(|q| format!("{q:.5}")).collect();
        println!("    [{}], // n = {n}", cells.join(", "));
    }
    println!("];");
}

/// Linear interpolation between order statistics at probability `1 - alpha`.
fn upper_quantile(sorted: &[f64], alpha: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * (1.0 - alpha);
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}
