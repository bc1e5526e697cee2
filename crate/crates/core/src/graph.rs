//! Balanced 3-valent multigraphs.
//!
//! Each undirected edge stores one vector, the value of the balancing
//! function on the dart running tail to head. The reverse dart carries the
//! negation, so antisymmetry holds by construction. Loops and parallel edges
//! are allowed; connectivity is not required.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dyadic::{Val2, Vector};
use crate::lattice::Lattice;

/// Version tag written into every JSON document this crate emits.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphError {
    #[error("duplicate vertex id {vertex:?}")]
    DuplicateVertex { vertex: String },
    #[error("duplicate edge id {edge:?}")]
    DuplicateEdge { edge: String },
    #[error("edge {edge:?} references unknown vertex {vertex:?}")]
    UnknownVertex { edge: String, vertex: String },
    #[error("edge {edge:?} carries a vector that is not 2-integral")]
    NotTwoIntegral { edge: String },
    #[error("vertex {vertex:?} has {degree} dart slots, expected 3")]
    NotThreeValent { vertex: String, degree: usize },
    #[error("vertex {vertex:?} is unbalanced, residual {residual}")]
    UnbalancedVertex { vertex: String, residual: Vector },
    #[error("primitive edges do not form disjoint cycles at {vertex:?}: {detail}")]
    CycleStructureViolation { vertex: String, detail: String },
}

/// An internal-consistency failure: a structural invariant did not hold.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[error("{check} audit failed at {location}: {detail}")]
pub struct AuditFailure {
    pub check: String,
    pub location: String,
    pub detail: String,
}

impl AuditFailure {
    pub fn new(check: &str, location: impl Into<String>, detail: impl Into<String>) -> Self {
        AuditFailure {
            check: check.into(),
            location: location.into(),
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub tail: usize,
    pub head: usize,
    /// Value on the dart `tail -> head`.
    pub vector: Vector,
}

/// One orientation of an edge. A forward dart runs tail to head.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dart {
    pub edge: usize,
    pub forward: bool,
}

impl Dart {
    pub fn reversed(self) -> Dart {
        Dart {
            edge: self.edge,
            forward: !self.forward,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Parity {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// Vertex multiplicities together with their minimum and where it is attained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexCensus {
    pub multiplicities: Vec<Val2>,
    pub minimum: Val2,
    pub argmin: Vec<usize>,
}

impl VertexCensus {
    pub fn from_multiplicities(multiplicities: Vec<Val2>) -> Self {
        let minimum = multiplicities.iter().copied().min().unwrap_or(Val2::Infinite);
        let argmin = (0..multiplicities.len())
            .filter(|&v| multiplicities[v] == minimum)
            .collect();
        VertexCensus {
            multiplicities,
            minimum,
            argmin,
        }
    }

    pub fn count(&self) -> usize {
        self.argmin.len()
    }

    pub fn parity(&self) -> Parity {
        Parity::of(self.count())
    }

    /// Number of vertices with multiplicity exactly `m`.
    pub fn count_at(&self, m: Val2) -> usize {
        self.multiplicities.iter().filter(|&&x| x == m).count()
    }
}

impl fmt::Display for VertexCensus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M={} count={} {}", self.minimum, self.count(), self.parity())
    }
}

/// A simple cycle of primitive edges, listed as `v_0, ..., v_{n-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimitiveCycle {
    pub vertices: Vec<usize>,
    /// `edges[i]` is the dart `v_i -> v_{i+1}` (indices mod n).
    pub edges: Vec<Dart>,
    /// `outgoing[i]` is the non-primitive dart terminating at `v_i`.
    pub outgoing: Vec<Dart>,
}

impl PrimitiveCycle {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// A 3-valent multigraph with a balancing function. Values of this type
/// obtained through the public constructors have passed [`BalancedGraph::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalancedGraph {
    vertex_ids: Vec<String>,
    edges: Vec<Edge>,
    darts_at: Vec<Vec<Dart>>,
}

impl BalancedGraph {
    /// Build and validate a graph from vertex ids and `(id, tail, head, vector)` edges.
    pub fn new(vertex_ids: Vec<String>, edges: Vec<Edge>) -> Result<Self, GraphError> {
        let g = Self::assemble(vertex_ids, edges)?;
        g.validate()?;
        Ok(g)
    }

    /// Graph on vertices `v0..v{n-1}` with edges `e0, e1, ...` given by index.
    pub fn from_indexed(n: usize, edges: &[(usize, usize, Vector)]) -> Result<Self, GraphError> {
        let vertex_ids = (0..n).map(|i| format!("v{i}")).collect();
        let edges = edges
            .iter()
            .enumerate()
            .map(|(i, (t, h, b))| Edge {
                id: format!("e{i}"),
                tail: *t,
                head: *h,
                vector: b.clone(),
            })
            .collect();
        Self::new(vertex_ids, edges)
    }

    fn assemble(vertex_ids: Vec<String>, edges: Vec<Edge>) -> Result<Self, GraphError> {
        let mut seen = HashMap::new();
        for (i, id) in vertex_ids.iter().enumerate() {
            if seen.insert(id.as_str(), i).is_some() {
                return Err(GraphError::DuplicateVertex { vertex: id.clone() });
            }
        }
        let mut edge_seen = HashMap::new();
        let mut darts_at = vec![Vec::with_capacity(3); vertex_ids.len()];
        for (i, e) in edges.iter().enumerate() {
            if edge_seen.insert(e.id.as_str(), i).is_some() {
                return Err(GraphError::DuplicateEdge { edge: e.id.clone() });
            }
            for end in [e.tail, e.head] {
                if end >= vertex_ids.len() {
                    return Err(GraphError::UnknownVertex {
                        edge: e.id.clone(),
                        vertex: end.to_string(),
                    });
                }
            }
            if !e.vector.is_two_integral() {
                return Err(GraphError::NotTwoIntegral { edge: e.id.clone() });
            }
            darts_at[e.head].push(Dart { edge: i, forward: true });
            darts_at[e.tail].push(Dart {
                edge: i,
                forward: false,
            });
        }
        Ok(BalancedGraph {
            vertex_ids,
            edges,
            darts_at,
        })
    }

    /// Exact check of 3-valence and the vertex balance condition.
    pub fn validate(&self) -> Result<(), GraphError> {
        for v in 0..self.vertex_count() {
            let darts = &self.darts_at[v];
            if darts.len() != 3 {
                return Err(GraphError::NotThreeValent {
                    vertex: self.vertex_ids[v].clone(),
                    degree: darts.len(),
                });
            }
            let mut residual = Vector::zero();
            for d in darts {
                residual += &self.dart_vector(*d);
            }
            if !residual.is_zero() {
                return Err(GraphError::UnbalancedVertex {
                    vertex: self.vertex_ids[v].clone(),
                    residual,
                });
            }
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.vertex_ids
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.vertex_ids[v]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn dart_vector(&self, d: Dart) -> Vector {
        let b = &self.edges[d.edge].vector;
        if d.forward {
            b.clone()
        } else {
            -b
        }
    }

    pub fn dart_target(&self, d: Dart) -> usize {
        let e = &self.edges[d.edge];
        if d.forward {
            e.head
        } else {
            e.tail
        }
    }

    pub fn dart_source(&self, d: Dart) -> usize {
        self.dart_target(d.reversed())
    }

    /// The three darts terminating at `v`; a loop contributes two.
    pub fn terminating_darts(&self, v: usize) -> &[Dart] {
        &self.darts_at[v]
    }

    pub fn is_primitive_edge(&self, e: usize) -> bool {
        self.edges[e].vector.is_primitive().unwrap_or(false)
    }

    pub fn vertex_lattice(&self, v: usize) -> Lattice {
        let d = &self.darts_at[v];
        Lattice::span_unchecked(&self.dart_vector(d[0]), &self.dart_vector(d[1]))
    }

    pub fn vertex_multiplicity(&self, v: usize) -> Val2 {
        let d = &self.darts_at[v];
        self.dart_vector(d[0]).cross(&self.dart_vector(d[1])).val2()
    }

    pub fn census(&self) -> VertexCensus {
        VertexCensus::from_multiplicities((0..self.vertex_count()).map(|v| self.vertex_multiplicity(v)).collect())
    }

    fn primitive_darts_at(&self, v: usize) -> Vec<Dart> {
        self.darts_at[v]
            .iter()
            .copied()
            .filter(|d| self.is_primitive_edge(d.edge))
            .collect()
    }

    /// Multiplicity 0 with three primitive darts, or positive multiplicity
    /// with an even number of primitive darts.
    pub fn primitive_degree_audit(&self) -> Result<(), AuditFailure> {
        for v in 0..self.vertex_count() {
            let m = self.vertex_multiplicity(v);
            let k = self.primitive_darts_at(v).len();
            let ok = if m == Val2::Finite(0) {
                k == 3
            } else {
                k.is_multiple_of(2)
            };
            if !ok {
                return Err(AuditFailure::new(
                    "primitive-edge count",
                    self.vertex_id(v),
                    format!("multiplicity {m} with {k} primitive darts"),
                ));
            }
        }
        Ok(())
    }

    /// Along every primitive edge, the endpoint of larger multiplicity has
    /// the smaller lattice.
    pub fn edge_inclusion_audit(&self) -> Result<usize, AuditFailure> {
        let mut checked = 0;
        for (i, e) in self.edges.iter().enumerate() {
            if !self.is_primitive_edge(i) || e.tail == e.head {
                continue;
            }
            let (mv, mw) = (self.vertex_multiplicity(e.tail), self.vertex_multiplicity(e.head));
            let (big, small) = if mv >= mw { (e.tail, e.head) } else { (e.head, e.tail) };
            if !self.vertex_lattice(small).includes(&self.vertex_lattice(big)) {
                return Err(AuditFailure::new(
                    "primitive-edge inclusion",
                    e.id.clone(),
                    format!(
                        "L({}) not contained in L({})",
                        self.vertex_id(big),
                        self.vertex_id(small)
                    ),
                ));
            }
            checked += 1;
        }
        Ok(checked)
    }

    /// Partition the primitive edges into vertex-disjoint simple cycles,
    /// ordered by their smallest vertex index.
    pub fn primitive_cycles(&self) -> Result<Vec<PrimitiveCycle>, GraphError> {
        let n = self.vertex_count();
        let prim: Vec<Vec<Dart>> = (0..n).map(|v| self.primitive_darts_at(v)).collect();
        let violation = |v: usize, detail: String| GraphError::CycleStructureViolation {
            vertex: self.vertex_ids[v].clone(),
            detail,
        };
        for (v, p) in prim.iter().enumerate() {
            if !(p.is_empty() || p.len() == 2) {
                return Err(violation(v, format!("{} primitive darts", p.len())));
            }
        }
        let mut visited = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if visited[start] || prim[start].is_empty() {
                continue;
            }
            visited[start] = true;
            let mut vertices = vec![start];
            let mut edges = Vec::new();
            let mut leave = prim[start][0].reversed();
            loop {
                edges.push(leave);
                let next = self.dart_target(leave);
                if next == start {
                    break;
                }
                if visited[next] {
                    return Err(violation(next, "primitive path revisits a vertex".into()));
                }
                visited[next] = true;
                vertices.push(next);
                let other = prim[next]
                    .iter()
                    .copied()
                    .find(|&d| d != leave)
                    .ok_or_else(|| violation(next, "dead end".into()))?;
                leave = other.reversed();
            }
            let outgoing: Vec<Dart> = vertices
                .iter()
                .map(|&v| {
                    self.darts_at[v]
                        .iter()
                        .copied()
                        .find(|d| !self.is_primitive_edge(d.edge))
                        .ok_or_else(|| violation(v, "no outgoing dart".into()))
                })
                .collect::<Result<_, _>>()?;
            let mut total = Vector::zero();
            for f in &outgoing {
                total += &self.dart_vector(*f);
            }
            if !total.is_zero() {
                return Err(violation(start, format!("outgoing vectors sum to {total}")));
            }
            cycles.push(PrimitiveCycle {
                vertices,
                edges,
                outgoing,
            });
        }
        Ok(cycles)
    }

    /// Same graph with every stored vector replaced through `f(edge index, vector)`,
    /// without re-validation.
    pub(crate) fn map_vectors(&self, mut f: impl FnMut(usize, &Vector) -> Vector) -> BalancedGraph {
        let mut g = self.clone();
        for (i, e) in g.edges.iter_mut().enumerate() {
            e.vector = f(i, &self.edges[i].vector);
        }
        g
    }

    pub fn to_data(&self) -> GraphData {
        GraphData {
            schema_version: Some(SCHEMA_VERSION),
            vertices: self.vertex_ids.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeData {
                    id: e.id.clone(),
                    tail: self.vertex_ids[e.tail].clone(),
                    head: self.vertex_ids[e.head].clone(),
                    b: e.vector.clone(),
                })
                .collect(),
        }
    }

    pub fn from_data(data: &GraphData) -> Result<Self, GraphError> {
        let index: HashMap<&str, usize> = data
            .vertices
            .iter()
            .enumerate()
            .map(|(i, id)| (id.as_str(), i))
            .collect();
        let lookup = |edge: &str, v: &str| {
            index.get(v).copied().ok_or_else(|| GraphError::UnknownVertex {
                edge: edge.to_string(),
                vertex: v.to_string(),
            })
        };
        let edges = data
            .edges
            .iter()
            .map(|e| {
                Ok(Edge {
                    id: e.id.clone(),
                    tail: lookup(&e.id, &e.tail)?,
                    head: lookup(&e.id, &e.head)?,
                    vector: e.b.clone(),
                })
            })
            .collect::<Result<Vec<_>, GraphError>>()?;
        Self::new(data.vertices.clone(), edges)
    }
}

/// Graph file: `{ "vertices": [...], "edges": [{ "id", "tail", "head", "b": [sx, sy] }] }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphData {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema_version: Option<u32>,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeData>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeData {
    pub id: String,
    pub tail: String,
    pub head: String,
    pub b: Vector,
}

impl Serialize for BalancedGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_data().serialize(s)
    }
}

impl<'de> Deserialize<'de> for BalancedGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let data = GraphData::deserialize(d)?;
        BalancedGraph::from_data(&data).map_err(serde::de::Error::custom)
    }
}
