// Seeded random balanced graphs. Every census comes out even.
//
// cargo run --example random_instances

use std::error::Error;

use stein_parity::gen::{random_graph, GenConfig};
use stein_parity::graph::Parity;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let mut histogram = std::collections::BTreeMap::new();
    for seed in 0..200 {
        let config = GenConfig {
            scale_exp: (seed % 4) as u32,
            ..GenConfig::new(2 + 2 * (seed as usize % 15), seed)
        };
        let census = random_graph(&config)?.census();
        assert_eq!(census.parity(), Parity::Even, "seed {seed}");
        *histogram.entry(census.count()).or_insert(0) += 1;
    }
    println!("minimal-vertex counts over 200 graphs:");
    for (count, n) in histogram {
        println!("  {count:>3}: {n}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
