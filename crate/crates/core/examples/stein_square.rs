// Dissections of the square. The dual of a triangulated balanced polygon is
// a balanced graph whose multiplicities track the triangle areas, so equal
// areas force an even number of triangles.
//
// cargo run --example stein_square [out.svg]

use std::error::Error;

use stein_parity::dissection::{render_svg, run_pipeline, stein_check, Dissection, Point};
use stein_parity::dyadic::vec2;

fn tri(a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> [Point; 3] {
    [vec2(a.0, a.1), vec2(b.0, b.1), vec2(c.0, c.1)]
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let square = vec![vec2(0, 0), vec2(2, 0), vec2(2, 2), vec2(0, 2)];

    let diagonals = Dissection::new(
        square.clone(),
        vec![
            tri((0, 0), (2, 0), (1, 1)),
            tri((2, 0), (2, 2), (1, 1)),
            tri((2, 2), (0, 2), (1, 1)),
            tri((0, 2), (0, 0), (1, 1)),
        ],
        None,
    )?;
    let report = stein_check(&diagonals, true)?;
    println!("both diagonals: {}", report.summary());

    // a T-vertex at (0,1): the gluing inserts a degenerate face
    let t_vertex = Dissection::new(
        square,
        vec![
            tri((0, 0), (2, 0), (0, 1)),
            tri((2, 0), (2, 2), (0, 2)),
            tri((0, 1), (2, 0), (0, 2)),
        ],
        None,
    )?;
    let report = stein_check(&t_vertex, false)?;
    println!("T-vertex: {}", report.summary());
    for f in &report.faces {
        println!("  {}: area {}, m = {}", f.face, f.area, f.multiplicity);
    }
    assert_eq!(report.inserted_degenerate, 1);

    let pipeline = run_pipeline(&t_vertex)?;
    let svg = render_svg(&pipeline.glued, &pipeline.dual.census().multiplicities);
    if let Some(path) = std::env::args().nth(1).filter(|a| a.ends_with(".svg")) {
        std::fs::write(&path, &svg)?;
        println!("wrote {path}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
