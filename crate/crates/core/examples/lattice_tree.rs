// Walking the tree of lattices: superlattices above a primitive lattice and
// the three index-2 sublattices below it.
//
// cargo run --example lattice_tree

use std::error::Error;

use stein_parity::dyadic::{vec2, Val2};
use stein_parity::lattice::Lattice;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let l = Lattice::span(&vec2(1, 2), &vec2(3, -10))?;
    let d = l.multiplicity();
    println!("L = {:?}, multiplicity {d}", l.generators());
    assert_eq!(d, Val2::Finite(4));

    for i in 0..=4 {
        let sup = l.superlattice_at(Val2::Finite(i))?;
        assert!(sup.includes(&l));
        println!("  level {i}: {:?}", sup.generators());
    }

    let t = l.index2_trichotomy()?;
    println!("plus  {:?}", t.plus.generators());
    println!("minus {:?}", t.minus.generators());
    println!("zero  {:?}", t.zero.generators());
    // primitive elements land in exactly one half, the rest in the zero part
    for v in [vec2(1, 2), vec2(1, 18), vec2(4, -8)] {
        let mut parts = Vec::new();
        for (name, part) in [("plus", &t.plus), ("minus", &t.minus), ("zero", &t.zero)] {
            if part.contains(&v)? {
                parts.push(name);
            }
        }
        println!("  {v:?} lies in {}", parts.join(", "));
    }
    assert!(!t.zero.contains(&vec2(1, 2))?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
