// Descent with a checkable certificate: rebalance along primitive cycles,
// halve, repeat, and re-verify the trace independently.
//
// cargo run --example parity_certificate

use std::error::Error;

use stein_parity::gen::{random_cubic, random_even_balancing, GenConfig};
use stein_parity::reduction::{reduce_and_certify, verify_certificate};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let config = GenConfig {
        bound: 15,
        scale_exp: 1,
        ..GenConfig::new(12, 2024)
    };
    let g = random_even_balancing(&random_cubic(&config)?, &config)?;
    println!("input: {}", g.census());

    let cert = reduce_and_certify(&g)?;
    for (i, round) in cert.rounds.iter().enumerate() {
        println!(
            "round {i}: M={} count={} -> {:?} ({} cycles)",
            round.before.minimum,
            round.before.argmin_count,
            round.branch,
            round.cycles.len()
        );
    }
    println!("conclusion: {:?}, parity {}", cert.reason, cert.parity);
    verify_certificate(&g, &cert)?;

    // a forged count is caught
    let mut forged = cert.clone();
    forged.rounds[0].before.argmin_count += 1;
    assert!(verify_certificate(&g, &forged).is_err());
    println!("forged certificate rejected");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
