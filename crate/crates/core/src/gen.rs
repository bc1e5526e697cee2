//! Seeded random instances.
//!
//! Skeletons come from the pairing model: shuffle the `3n` dart slots and
//! pair them off. Balancing functions are vector-valued circulations, built
//! by drawing free values on the edges outside a spanning forest and solving
//! for the forest edges from the leaves inward.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dyadic::{Scalar, Vector};
use crate::graph::BalancedGraph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("vertex count {0} must be even and at least 2")]
    BadVertexCount(usize),
    #[error("coefficient bound must be at least 1")]
    BadBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenConfig {
    pub vertices: usize,
    pub seed: u64,
    /// Free vectors are drawn from `[-bound, bound]^2`.
    pub bound: i64,
    /// All vectors are multiplied by `2^scale_exp`.
    pub scale_exp: u32,
}

impl GenConfig {
    pub fn new(vertices: usize, seed: u64) -> Self {
        GenConfig {
            vertices,
            seed,
            bound: 4096,
            scale_exp: 0,
        }
    }

    pub fn check(&self) -> Result<(), GenError> {
        if self.vertices < 2 || !self.vertices.is_multiple_of(2) {
            return Err(GenError::BadVertexCount(self.vertices));
        }
        if self.bound < 1 {
            return Err(GenError::BadBound);
        }
        Ok(())
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

/// An unweighted cubic multigraph; edge `(a, b)` is oriented `a -> b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skeleton {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Skeleton {
    /// Edge indices of a BFS spanning forest, rooted at the smallest vertex of each component.
    /// Returns `(parent edge per vertex, BFS order)`.
    fn spanning_forest(&self) -> (Vec<Option<usize>>, Vec<usize>) {
        let mut adj = vec![Vec::new(); self.vertices];
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            if a != b {
                adj[a].push((i, b));
                adj[b].push((i, a));
            }
        }
        let mut parent = vec![None; self.vertices];
        let mut seen = vec![false; self.vertices];
        let mut order = Vec::with_capacity(self.vertices);
        for root in 0..self.vertices {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                order.push(v);
                for &(e, w) in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        parent[w] = Some(e);
                        queue.push_back(w);
                    }
                }
            }
        }
        (parent, order)
    }
}

/// Uniform random perfect matching on the `3n` dart slots.
pub fn random_cubic(config: &GenConfig) -> Result<Skeleton, GenError> {
    config.check()?;
    let n = config.vertices;
    let mut slots: Vec<usize> = (0..3 * n).map(|s| s / 3).collect();
    slots.shuffle(&mut config.rng(0));
    let edges = slots.chunks_exact(2).map(|p| (p[0], p[1])).collect();
    Ok(Skeleton { vertices: n, edges })
}

/// Complete free values on co-tree edges to a circulation.
fn solve_circulation(skeleton: &Skeleton, free: impl FnMut(usize) -> Vector) -> Vec<Vector> {
    let (parent, order) = skeleton.spanning_forest();
    let mut is_tree = vec![false; skeleton.edges.len()];
    for e in parent.iter().flatten() {
        is_tree[*e] = true;
    }
    let mut free = free;
    let mut values: Vec<Vector> = (0..skeleton.edges.len())
        .map(|e| if is_tree[e] { Vector::zero() } else { free(e) })
        .collect();

    // net inflow at each vertex from the edges assigned so far
    let mut inflow = vec![Vector::zero(); skeleton.vertices];
    for (e, &(t, h)) in skeleton.edges.iter().enumerate() {
        if !is_tree[e] && t != h {
            inflow[h] += &values[e];
            inflow[t] += &(-&values[e]);
        }
    }
    for &v in order.iter().rev() {
        let Some(e) = parent[v] else { continue };
        let (t, h) = skeleton.edges[e];
        // choose the tree edge so that v balances; its other end absorbs the opposite
        let need = -&inflow[v];
        let value = if h == v { need } else { -&need };
        inflow[h] += &value;
        inflow[t] += &(-&value);
        values[e] = value;
    }
    values
}

fn assemble(skeleton: &Skeleton, values: Vec<Vector>, scale_exp: u32) -> BalancedGraph {
    let factor = Scalar::pow2(scale_exp);
    let edges: Vec<_> = skeleton
        .edges
        .iter()
        .zip(values)
        .map(|(&(t, h), b)| (t, h, b.scale(&factor)))
        .collect();
    BalancedGraph::from_indexed(skeleton.vertices, &edges).expect("circulations are balanced")
}

/// Random balancing function with co-tree vectors uniform in `[-K, K]^2`.
pub fn random_balancing(skeleton: &Skeleton, config: &GenConfig) -> Result<BalancedGraph, GenError> {
    config.check()?;
    let mut rng = config.rng(1);
    let k = config.bound;
    let values = solve_circulation(skeleton, |_| {
        Vector::new(rng.random_range(-k..=k), rng.random_range(-k..=k))
    });
    Ok(assemble(skeleton, values, config.scale_exp))
}

/// Balancing function with every vector congruent mod 2 to a multiple of one
/// primitive direction `u`: `B = phi * u + 2 * B2` for an integer circulation
/// `phi`. Every vertex then has positive multiplicity, and the edges with odd
/// `phi` form primitive cycles.
pub fn random_even_balancing(skeleton: &Skeleton, config: &GenConfig) -> Result<BalancedGraph, GenError> {
    config.check()?;
    let mut rng = config.rng(2);
    let k = config.bound;
    let u = loop {
        let cand = Vector::new(rng.random_range(-k..=k), rng.random_range(-k..=k));
        if cand.is_primitive().unwrap_or(false) {
            break cand;
        }
    };
    let flow = solve_circulation(skeleton, |_| Vector::new(rng.random_range(-k..=k), 0));
    let rest = solve_circulation(skeleton, |_| {
        Vector::new(rng.random_range(-k..=k), rng.random_range(-k..=k))
    });
    let two = Scalar::from_int(2);
    let values = flow
        .iter()
        .zip(&rest)
        .map(|(phi, r)| &u.scale(&phi.x) + &r.scale(&two))
        .collect();
    Ok(assemble(skeleton, values, config.scale_exp))
}

/// Skeleton and balancing in one step.
pub fn random_graph(config: &GenConfig) -> Result<BalancedGraph, GenError> {
    random_balancing(&random_cubic(config)?, config)
}
