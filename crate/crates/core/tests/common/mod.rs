#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stein_parity::dissection::{Dissection, Point};
use stein_parity::dyadic::{vec2, Scalar, Vector};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn tri(a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> [Point; 3] {
    [vec2(a.0, a.1), vec2(b.0, b.1), vec2(c.0, c.1)]
}

pub fn square(side: i64) -> Vec<Point> {
    vec![vec2(0, 0), vec2(side, 0), vec2(side, side), vec2(0, side)]
}

/// Twice the signed area, computed independently of the library.
pub fn shoelace2(points: &[Point]) -> Scalar {
    let mut s = Scalar::zero();
    for i in 0..points.len() {
        let (p, q) = (&points[i], &points[(i + 1) % points.len()]);
        s += &(&(&p.x * &q.y) - &(&p.y * &q.x));
    }
    s
}

fn lerp(a: &Point, b: &Point, t: &Scalar) -> Point {
    a + &(b - a).scale(t)
}

/// Random dissection of a balanced polygon: fan-triangulate, then repeatedly
/// split a triangle at a rational point on one side (which leaves a T-vertex
/// on the neighbour) or at a rational interior point.
pub fn random_dissection(rng: &mut impl Rng, splits: usize) -> Dissection {
    let polygon = match rng.random_range(0..3) {
        0 => square(rng.random_range(1..=4)),
        1 => vec![vec2(0, 0), vec2(2, 0), vec2(3, 2), vec2(2, 4), vec2(0, 4), vec2(-1, 2)],
        _ => vec![vec2(0, 0), vec2(3, 0), vec2(4, 2), vec2(1, 2)],
    };
    let mut triangles: Vec<[Point; 3]> = (1..polygon.len() - 1)
        .map(|i| [polygon[0].clone(), polygon[i].clone(), polygon[i + 1].clone()])
        .collect();
    for _ in 0..splits {
        let k = rng.random_range(0..triangles.len());
        let [a, b, c] = triangles.swap_remove(k);
        if rng.random_bool(0.7) {
            let q = rng.random_range(2..=6i64);
            let t = Scalar::from_ratio(rng.random_range(1..q), q);
            let (a, b, c) = match rng.random_range(0..3) {
                0 => (a, b, c),
                1 => (b, c, a),
                _ => (c, a, b),
            };
            let p = lerp(&a, &b, &t);
            triangles.push([a, p.clone(), c.clone()]);
            triangles.push([p, b, c]);
        } else {
            let w: Vec<i64> = (0..3).map(|_| rng.random_range(1..=4)).collect();
            let total = Scalar::from_int(w.iter().sum::<i64>());
            let mut p = Vector::zero();
            for (v, &wi) in [&a, &b, &c].into_iter().zip(&w) {
                p += &v.scale(&Scalar::from_int(wi).checked_div(&total).unwrap());
            }
            triangles.push([a.clone(), b.clone(), p.clone()]);
            triangles.push([b, c.clone(), p.clone()]);
            triangles.push([c, a, p]);
        }
    }
    Dissection::new(polygon, triangles, None).expect("generated dissection")
}
