// 2-adic valuations, primitivity and multiplicities of exact rationals.
//
// cargo run --example valuation

use std::error::Error;

use stein_parity::dyadic::{vec2, Scalar, Val2, Vector};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for text in ["12", "3/8", "-5/6", "0"] {
        let x: Scalar = text.parse()?;
        println!("v2({x}) = {}", x.val2());
    }
    assert_eq!("3/8".parse::<Scalar>()?.val2(), Val2::Finite(-3));
    assert_eq!(Scalar::zero().val2(), Val2::Infinite);

    // a vector is primitive when some coordinate is odd
    let u = vec2(3, 4);
    let w = vec2(2, 6);
    println!("{u:?} primitive: {}", u.is_primitive()?);
    println!("{w:?} primitive: {}", w.is_primitive()?);
    println!("cross = {}, v2 = {}", u.cross(&w), u.cross(&w).val2());
    assert_eq!(u.cross(&w), Scalar::from_int(10));

    // halves are outside the 2-local ring
    let half = Vector::new(Scalar::from_ratio(1, 2), Scalar::one());
    assert!(half.is_primitive().is_err());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
