//! Triangle dissections of balanced polygons and their dual balanced graphs.
//!
//! The pipeline: orient everything clockwise, scale to integer coordinates,
//! pair up the polygon edges, split every triangle side at every vertex lying
//! inside it (including translates of vertices across glued boundary edges),
//! close each split side with a fan of zero-area faces, and match every
//! remaining side with exactly one opposite side. The dual graph has one
//! vertex per face and one edge per matched pair of sides, carrying the side
//! vector; each face closes up, so the graph is balanced.
//!
//! Validation is combinatorial: every sub-segment must be used exactly twice
//! with opposite orientations, and face areas must add up to the polygon
//! area. Geometrically pathological inputs that pass both checks (for
//! instance a self-overlapping polygon) are not detected.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dyadic::{Scalar, Val2, Vector};
use crate::graph::{BalancedGraph, Edge, GraphError, SCHEMA_VERSION};
use crate::reduction::{reduce_and_certify, CensusSummary, ParityCertificate};

pub type Point = Vector;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DissectionError {
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("polygon has zero signed area")]
    ZeroArea,
    #[error("polygon is not balanced: edge {edge} has no opposite partner")]
    NotBalancedPolygon { edge: usize },
    #[error("invalid pairing: {0}")]
    BadPairing(String),
    #[error("segment {segment} is covered {count} times, expected 2")]
    CoverageMismatch { segment: String, count: usize },
    #[error("segment {segment} is traversed twice in the same direction")]
    OrientationConflict { segment: String },
    #[error("face areas sum to {faces}, polygon area is {polygon}")]
    AreaMismatch { faces: Scalar, polygon: Scalar },
    #[error("dual graph rejected: {0}")]
    Dual(GraphError),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl DissectionError {
    /// Errors that can only arise from a bug, never from bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, DissectionError::Dual(_) | DissectionError::Internal(_))
    }
}

/// Twice the signed area; negative for clockwise.
fn signed_area2(points: &[Point]) -> Scalar {
    let mut total = Scalar::zero();
    for (i, p) in points.iter().enumerate() {
        total += &p.cross(&points[(i + 1) % points.len()]);
    }
    total
}

/// On-disk form: `{ "polygon": [[x, y], ...], "triangles": [[[x, y], [x, y], [x, y]], ...], "pairing"?: [[i, j], ...] }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DissectionData {
    pub polygon: Vec<Point>,
    pub triangles: Vec<[Point; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing: Option<Vec<(usize, usize)>>,
}

/// A polygon cut into triangles, oriented clockwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dissection {
    pub polygon: Vec<Point>,
    pub triangles: Vec<[Point; 3]>,
    pub pairing: Option<Vec<(usize, usize)>>,
    /// The polygon was given counter-clockwise and has been reversed.
    pub polygon_reoriented: bool,
    pub triangles_reoriented: usize,
}

impl Dissection {
    pub fn new(
        polygon: Vec<Point>,
        triangles: Vec<[Point; 3]>,
        pairing: Option<Vec<(usize, usize)>>,
    ) -> Result<Self, DissectionError> {
        let n = polygon.len();
        if n < 3 {
            return Err(DissectionError::TooFewVertices(n));
        }
        let area = signed_area2(&polygon);
        if area.is_zero() {
            return Err(DissectionError::ZeroArea);
        }
        let mut polygon = polygon;
        let mut pairing = pairing;
        let polygon_reoriented = !area.is_negative();
        if polygon_reoriented {
            polygon.reverse();
            // old edge j (p_j -> p_{j+1}) is new edge n-2-j, reversed
            let remap = |j: usize| (2 * n - 2 - j % n) % n;
            if let Some(p) = pairing.as_mut() {
                for (a, b) in p.iter_mut() {
                    *a = remap(*a);
                    *b = remap(*b);
                }
            }
        }
        let mut triangles_reoriented = 0;
        let triangles = triangles
            .into_iter()
            .map(|[a, b, c]| {
                if !(&b - &a).cross(&(&c - &a)).is_positive() {
                    [a, b, c]
                } else {
                    triangles_reoriented += 1;
                    [a, c, b]
                }
            })
            .collect();
        Ok(Dissection {
            polygon,
            triangles,
            pairing,
            polygon_reoriented,
            triangles_reoriented,
        })
    }

    pub fn from_data(data: DissectionData) -> Result<Self, DissectionError> {
        Self::new(data.polygon, data.triangles, data.pairing)
    }

    pub fn to_data(&self) -> DissectionData {
        DissectionData {
            polygon: self.polygon.clone(),
            triangles: self.triangles.clone(),
            pairing: self.pairing.clone(),
        }
    }

    pub fn edge_vector(&self, i: usize) -> Vector {
        let n = self.polygon.len();
        &self.polygon[(i + 1) % n] - &self.polygon[i]
    }

    /// Polygon area, positive.
    pub fn area(&self) -> Scalar {
        (-signed_area2(&self.polygon)).halved()
    }

    /// Multiply every coordinate by `k`.
    pub fn scaled(&self, k: &Scalar) -> Dissection {
        Dissection {
            polygon: self.polygon.iter().map(|p| p.scale(k)).collect(),
            triangles: self.triangles.iter().map(|t| t.clone().map(|p| p.scale(k))).collect(),
            ..self.clone()
        }
    }

    fn points(&self) -> impl Iterator<Item = &Point> {
        self.polygon.iter().chain(self.triangles.iter().flatten())
    }
}

/// Scale by the least common multiple of all coordinate denominators.
pub fn normalize_to_integers(d: &Dissection) -> (Dissection, BigInt) {
    let mut scale = BigInt::one();
    for p in d.points() {
        scale = scale.lcm(p.x.denom()).lcm(p.y.denom());
    }
    (d.scaled(&Scalar::from_int(scale.clone())), scale)
}

/// Pair polygon edges with their exact negations. An explicit pairing is
/// verified; otherwise each edge is matched with the first later unmatched
/// edge carrying the opposite vector.
pub fn balanced_pairing(d: &Dissection) -> Result<Vec<(usize, usize)>, DissectionError> {
    let n = d.polygon.len();
    if let Some(pairs) = &d.pairing {
        let mut used = vec![false; n];
        for &(i, j) in pairs {
            if i >= n || j >= n || i == j {
                return Err(DissectionError::BadPairing(format!("pair ({i}, {j}) out of range")));
            }
            for k in [i, j] {
                if std::mem::replace(&mut used[k], true) {
                    return Err(DissectionError::BadPairing(format!("edge {k} paired twice")));
                }
            }
            if d.edge_vector(i) != -d.edge_vector(j) {
                return Err(DissectionError::BadPairing(format!(
                    "edges {i} and {j} are not opposite"
                )));
            }
        }
        if let Some(edge) = used.iter().position(|u| !u) {
            return Err(DissectionError::NotBalancedPolygon { edge });
        }
        return Ok(pairs.iter().map(|&(i, j)| (i.min(j), i.max(j))).collect());
    }
    let mut partner: Vec<Option<usize>> = vec![None; n];
    let mut pairs = Vec::new();
    for i in 0..n {
        if partner[i].is_some() {
            continue;
        }
        let want = -d.edge_vector(i);
        let j = (i + 1..n)
            .find(|&j| partner[j].is_none() && d.edge_vector(j) == want)
            .ok_or(DissectionError::NotBalancedPolygon { edge: i })?;
        partner[i] = Some(j);
        partner[j] = Some(i);
        pairs.push((i, j));
    }
    Ok(pairs)
}

/// Is `p` on the closed segment `a b`?
fn on_segment(p: &Point, a: &Point, b: &Point) -> bool {
    let ab = b - a;
    let ap = p - a;
    if !ab.cross(&ap).is_zero() {
        return false;
    }
    let t = ab.dot(&ap);
    !t.is_negative() && t <= ab.dot(&ab)
}

/// Points strictly inside segment `a b`, ordered from `a`.
fn interior_points(points: &BTreeSet<Point>, a: &Point, b: &Point) -> Vec<Point> {
    let ab = b - a;
    let len = ab.dot(&ab);
    let mut inner: Vec<(Scalar, Point)> = points
        .iter()
        .filter(|p| ab.cross(&(*p - a)).is_zero())
        .map(|p| (ab.dot(&(p - a)), p.clone()))
        .filter(|(t, _)| !t.is_negative() && !t.is_zero() && *t < len)
        .collect();
    inner.sort();
    inner.into_iter().map(|(_, p)| p).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "index", rename_all = "snake_case")]
pub enum FaceKind {
    /// One of the input triangles.
    Triangle(usize),
    /// A zero-area face closing a split side.
    Degenerate(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub kind: FaceKind,
    /// Corners in traversal order; side `k` runs `corners[k] -> corners[k+1]`.
    pub corners: [Point; 3],
}

impl Face {
    pub fn side(&self, k: usize) -> (Point, Point) {
        (self.corners[k].clone(), self.corners[(k + 1) % 3].clone())
    }

    pub fn side_vector(&self, k: usize) -> Vector {
        &self.corners[(k + 1) % 3] - &self.corners[k]
    }

    /// Area, positive for clockwise faces.
    pub fn area(&self) -> Scalar {
        (-signed_area2(&self.corners)).halved()
    }

    pub fn is_degenerate(&self) -> bool {
        self.area().is_zero()
    }

    pub fn label(&self) -> String {
        match self.kind {
            FaceKind::Triangle(i) => format!("t{i}"),
            FaceKind::Degenerate(i) => format!("d{i}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkKind {
    Interior,
    /// Sides on paired polygon edges `(i, j)`.
    Glued(usize, usize),
    /// A split side and the degenerate face closing it.
    Fan,
}

/// Two face sides identified with each other, with opposite orientations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Link {
    pub kind: LinkKind,
    /// `(face, side index)` on each end.
    pub ends: [(usize, usize); 2],
}

/// Faces after T-vertex resolution, with every side matched exactly once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GluedTriangulation {
    pub faces: Vec<Face>,
    pub links: Vec<Link>,
    pub pairing: Vec<(usize, usize)>,
    pub polygon: Vec<Point>,
}

impl GluedTriangulation {
    pub fn degenerate_count(&self) -> usize {
        self.faces
            .iter()
            .filter(|f| matches!(f.kind, FaceKind::Degenerate(_)))
            .count()
    }
}

struct Gluing<'a> {
    polygon: &'a [Point],
    pairing: &'a [(usize, usize)],
}

impl Gluing<'_> {
    fn edge(&self, i: usize) -> (&Point, &Point) {
        (&self.polygon[i], &self.polygon[(i + 1) % self.polygon.len()])
    }

    /// Translation carrying edge `i` onto its partner `j`, start to end.
    fn translation(&self, i: usize, j: usize) -> Vector {
        self.edge(j).1 - self.edge(i).0
    }

    /// Boundary edge containing the whole segment, and the pair it belongs to.
    fn boundary_of(&self, a: &Point, b: &Point) -> Option<(usize, usize, usize)> {
        for &(i, j) in self.pairing {
            for e in [i, j] {
                let (s, t) = self.edge(e);
                if on_segment(a, s, t) && on_segment(b, s, t) {
                    return Some((e, i, j));
                }
            }
        }
        None
    }
}

/// Undirected side: lower glued edge (if on the boundary) and its endpoints in order.
type SideKey = (Option<usize>, Point, Point);

/// Resolve T-vertices, glue paired boundary edges and check coverage and area.
pub fn validate_and_glue(d: &Dissection, pairing: &[(usize, usize)]) -> Result<GluedTriangulation, DissectionError> {
    let gluing = Gluing {
        polygon: &d.polygon,
        pairing,
    };

    let mut points: BTreeSet<Point> = d.points().cloned().collect();
    loop {
        let mut added = Vec::new();
        for &(i, j) in pairing {
            let t = gluing.translation(i, j);
            let (ai, bi) = gluing.edge(i);
            let (aj, bj) = gluing.edge(j);
            for p in &points {
                if on_segment(p, ai, bi) {
                    added.push(p + &t);
                }
                if on_segment(p, aj, bj) {
                    added.push(p - &t);
                }
            }
        }
        let before = points.len();
        points.extend(added);
        if points.len() == before {
            break;
        }
    }

    let mut faces: Vec<Face> = d
        .triangles
        .iter()
        .enumerate()
        .map(|(i, t)| Face {
            kind: FaceKind::Triangle(i),
            corners: t.clone(),
        })
        .collect();
    let mut links = Vec::new();
    let mut atomic: Vec<(usize, usize)> = Vec::new();
    for f in 0..d.triangles.len() {
        for k in 0..3 {
            let (a, b) = faces[f].side(k);
            let inner = interior_points(&points, &a, &b);
            if inner.is_empty() {
                atomic.push((f, k));
                continue;
            }
            // fan (a, p1, b), (p1, p2, b), ...: each closes the previous side
            let mut parent = (f, k);
            let mut start = a.clone();
            for p in inner {
                let g = faces.len();
                let kind = FaceKind::Degenerate(g - d.triangles.len());
                faces.push(Face {
                    kind,
                    corners: [start.clone(), p.clone(), b.clone()],
                });
                links.push(Link {
                    kind: LinkKind::Fan,
                    ends: [parent, (g, 2)],
                });
                atomic.push((g, 0));
                parent = (g, 1);
                start = p;
            }
            atomic.push(parent);
        }
    }

    // canonical undirected key; glued sides are carried back onto the lower edge of their pair
    let mut groups: BTreeMap<SideKey, Vec<(usize, usize, bool)>> = BTreeMap::new();
    for &(f, k) in &atomic {
        let (mut a, mut b) = faces[f].side(k);
        let mut edge = None;
        if let Some((e, i, j)) = gluing.boundary_of(&a, &b) {
            if e == j {
                let t = gluing.translation(i, j);
                a = &a - &t;
                b = &b - &t;
            }
            edge = Some(i);
        }
        let forward = a < b;
        let key = if forward { (edge, a, b) } else { (edge, b, a) };
        groups.entry(key).or_default().push((f, k, forward));
    }
    for ((edge, a, b), occ) in groups {
        let segment = format!("{a}-{b}");
        if occ.len() != 2 {
            return Err(DissectionError::CoverageMismatch {
                segment,
                count: occ.len(),
            });
        }
        if occ[0].2 == occ[1].2 {
            return Err(DissectionError::OrientationConflict { segment });
        }
        let kind = match edge {
            None => LinkKind::Interior,
            Some(i) => {
                let &(_, j) = pairing.iter().find(|p| p.0 == i).expect("pair of lower edge");
                LinkKind::Glued(i, j)
            }
        };
        links.push(Link {
            kind,
            ends: [(occ[0].0, occ[0].1), (occ[1].0, occ[1].1)],
        });
    }

    let face_area = faces.iter().fold(Scalar::zero(), |acc, f| &acc + &f.area());
    if face_area != d.area() {
        return Err(DissectionError::AreaMismatch {
            faces: face_area,
            polygon: d.area(),
        });
    }
    Ok(GluedTriangulation {
        faces,
        links,
        pairing: pairing.to_vec(),
        polygon: d.polygon.clone(),
    })
}

/// One vertex per face, one edge per link. The dart arriving at a face
/// carries that face's side vector.
pub fn build_dual(t: &GluedTriangulation) -> Result<BalancedGraph, DissectionError> {
    let vertex_ids = t.faces.iter().map(Face::label).collect();
    let edges = t
        .links
        .iter()
        .enumerate()
        .map(|(i, link)| {
            let [(f, k), (g, _)] = link.ends;
            let prefix = match link.kind {
                LinkKind::Interior => "s",
                LinkKind::Glued(..) => "g",
                LinkKind::Fan => "f",
            };
            Edge {
                id: format!("{prefix}{i}"),
                tail: g,
                head: f,
                vector: t.faces[f].side_vector(k),
            }
        })
        .collect();
    BalancedGraph::new(vertex_ids, edges).map_err(DissectionError::Dual)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceReport {
    pub face: String,
    /// Area in the integer-scaled coordinates.
    pub area: Scalar,
    pub multiplicity: Val2,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SteinReport {
    pub schema_version: u32,
    pub triangle_count: usize,
    pub nondegenerate_count: usize,
    pub inserted_degenerate: usize,
    /// Factor applied to reach integer coordinates.
    pub scale: String,
    /// Input triangle areas in the original coordinates.
    pub areas: Vec<Scalar>,
    /// Common area of the nondegenerate triangles, original coordinates.
    pub common_area: Option<Scalar>,
    pub faces: Vec<FaceReport>,
    pub census: CensusSummary,
    pub all_equal_areas: bool,
    pub nondegenerate_count_even: bool,
    pub parity_holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<ParityCertificate>,
}

impl SteinReport {
    pub fn summary(&self) -> String {
        let parity = if self.parity_holds {
            "parity holds"
        } else {
            "PARITY FAILS"
        };
        match &self.common_area {
            Some(s) => format!(
                "{} triangles of equal area {s}; count {}; {parity}",
                self.nondegenerate_count,
                if self.nondegenerate_count_even { "even" } else { "odd" }
            ),
            None => format!("{} triangles; areas unequal; {parity}", self.nondegenerate_count),
        }
    }
}

/// Everything the pipeline produced for one dissection.
#[derive(Debug, Clone)]
pub struct Pipeline {
    pub normalized: Dissection,
    pub scale: BigInt,
    pub glued: GluedTriangulation,
    pub dual: BalancedGraph,
}

pub fn run_pipeline(d: &Dissection) -> Result<Pipeline, DissectionError> {
    let (normalized, scale) = normalize_to_integers(d);
    let pairing = balanced_pairing(&normalized)?;
    let glued = validate_and_glue(&normalized, &pairing)?;
    let dual = build_dual(&glued)?;
    Ok(Pipeline {
        normalized,
        scale,
        glued,
        dual,
    })
}

/// Full check of one dissection: dual multiplicities against areas, and the
/// parity of the minimal count.
pub fn stein_check(d: &Dissection, with_certificate: bool) -> Result<SteinReport, DissectionError> {
    let p = run_pipeline(d)?;
    let internal = |msg: String| DissectionError::Internal(msg);
    let census = p.dual.census();
    let scale2 = Scalar::from_int(&p.scale * &p.scale);

    let mut faces = Vec::with_capacity(p.glued.faces.len());
    for (v, face) in p.glued.faces.iter().enumerate() {
        let area = face.area();
        let m = census.multiplicities[v];
        let expected = if area.is_zero() {
            Val2::Infinite
        } else {
            (&area + &area).val2()
        };
        if m != expected {
            return Err(internal(format!(
                "face {} has multiplicity {m}, area gives {expected}",
                face.label()
            )));
        }
        faces.push(FaceReport {
            face: face.label(),
            area,
            multiplicity: m,
        });
    }

    let nondegenerate: Vec<&FaceReport> = faces.iter().filter(|f| !f.area.is_zero()).collect();
    let common = nondegenerate.first().map(|f| f.area.clone());
    let all_equal = match &common {
        Some(s) => nondegenerate.iter().all(|f| &f.area == s),
        None => false,
    };
    if all_equal {
        let s = common.as_ref().expect("nonempty");
        let formula = s.val2().shifted(1);
        if let Some(bad) = nondegenerate.iter().find(|f| f.multiplicity != formula) {
            return Err(internal(format!(
                "face {} multiplicity {} differs from 1 + v2(S) = {formula}",
                bad.face, bad.multiplicity
            )));
        }
    }
    let parity_holds = census.count() % 2 == 0;
    let nondegenerate_count_even = nondegenerate.len().is_multiple_of(2);
    if !parity_holds || (all_equal && !nondegenerate_count_even) {
        return Err(internal(format!(
            "odd count: census {census}, {} nondegenerate faces",
            nondegenerate.len()
        )));
    }
    let certificate = if with_certificate {
        Some(reduce_and_certify(&p.dual).map_err(|e| internal(e.to_string()))?)
    } else {
        None
    };

    let original_area = |a: &Scalar| a.checked_div(&scale2).expect("scale is nonzero");
    Ok(SteinReport {
        schema_version: SCHEMA_VERSION,
        triangle_count: d.triangles.len(),
        nondegenerate_count: nondegenerate.len(),
        inserted_degenerate: p.glued.degenerate_count(),
        scale: p.scale.to_string(),
        areas: p
            .glued
            .faces
            .iter()
            .filter(|f| matches!(f.kind, FaceKind::Triangle(_)))
            .map(|f| original_area(&f.area()))
            .collect(),
        common_area: if all_equal {
            common.as_ref().map(original_area)
        } else {
            None
        },
        faces,
        census: CensusSummary::from(&census),
        all_equal_areas: all_equal,
        nondegenerate_count_even,
        parity_holds,
        certificate,
    })
}

/// SVG drawing of the resolved faces, each labeled with its multiplicity.
pub fn render_svg(t: &GluedTriangulation, multiplicities: &[Val2]) -> String {
    let f = |s: &Scalar| s.as_ratio().to_f64().unwrap_or(0.0);
    let xs = t.polygon.iter().map(|p| f(&p.x));
    let ys = t.polygon.iter().map(|p| f(&p.y));
    let (min_x, max_x) = xs.fold((f64::MAX, f64::MIN), |(lo, hi), x| (lo.min(x), hi.max(x)));
    let (min_y, max_y) = ys.fold((f64::MAX, f64::MIN), |(lo, hi), y| (lo.min(y), hi.max(y)));
    let span = (max_x - min_x).max(max_y - min_y).max(1e-9);
    let size = 480.0;
    let pad = 20.0;
    // flip y so the picture matches the usual axes
    let map = |p: &Point| {
        (
            pad + (f(&p.x) - min_x) / span * size,
            pad + (max_y - f(&p.y)) / span * size,
        )
    };

    let mut out = String::new();
    let total = size + 2.0 * pad;
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total}" height="{total}">"#
    );
    let poly: Vec<String> = t
        .polygon
        .iter()
        .map(|p| {
            let (x, y) = map(p);
            format!("{x:.2},{y:.2}")
        })
        .collect();
    let _ = writeln!(
        out,
        r##"  <polygon points="{}" fill="#f4f4f4" stroke="black" stroke-width="2"/>"##,
        poly.join(" ")
    );
    for (i, face) in t.faces.iter().enumerate() {
        if face.is_degenerate() {
            continue;
        }
        let pts: Vec<(f64, f64)> = face.corners.iter().map(map).collect();
        let list: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
        let _ = writeln!(
            out,
            r#"  <polygon points="{}" fill="none" stroke="steelblue"/>"#,
            list.join(" ")
        );
        let cx = pts.iter().map(|p| p.0).sum::<f64>() / 3.0;
        let cy = pts.iter().map(|p| p.1).sum::<f64>() / 3.0;
        let m = multiplicities.get(i).copied().unwrap_or(Val2::Infinite);
        let _ = writeln!(
            out,
            r#"  <text x="{cx:.2}" y="{cy:.2}" font-size="12" text-anchor="middle">{} m={m}</text>"#,
            face.label()
        );
    }
    out.push_str("</svg>\n");
    out
}
