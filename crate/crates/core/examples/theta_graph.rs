// The theta graph: two vertices joined by three edges. Builds it from JSON,
// prints the vertex census and runs the structural audits.
//
// cargo run --example theta_graph

use std::error::Error;

use stein_parity::graph::{BalancedGraph, Parity};

const THETA: &str = r#"{
  "schema_version": 1,
  "vertices": ["a", "b"],
  "edges": [
    {"id": "e0", "tail": "a", "head": "b", "b": ["1", "0"]},
    {"id": "e1", "tail": "a", "head": "b", "b": ["0", "1"]},
    {"id": "e2", "tail": "a", "head": "b", "b": ["-1", "-1"]}
  ]
}"#;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let g: BalancedGraph = serde_json::from_str(THETA)?;
    let census = g.census();
    println!("{census}");
    for v in 0..g.vertex_count() {
        println!("  {}: m = {}", g.vertex_id(v), g.vertex_multiplicity(v));
    }
    assert_eq!(census.parity(), Parity::Even);

    g.primitive_degree_audit()?;
    let checked = g.edge_inclusion_audit()?;
    println!("audits pass ({checked} primitive edges)");

    // an unbalanced variant is rejected on load
    let broken = THETA.replace(r#"["-1", "-1"]"#, r#"["-1", "0"]"#);
    let err = serde_json::from_str::<BalancedGraph>(&broken).unwrap_err();
    println!("rejected: {err}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
