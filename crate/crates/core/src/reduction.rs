//! The descent that proves the minimal-multiplicity count is even.
//!
//! Each round looks at the current minimum `M`:
//!
//! * `M = 0`: vertices of multiplicity zero are exactly the 3-valent vertices
//!   of the primitive subgraph, whose other vertices are 2-valent, so the
//!   degree sum forces an even count.
//! * `M = inf`: every vertex is minimal and a cubic graph has an even number
//!   of vertices.
//! * otherwise the primitive edges form disjoint cycles. Every cycle carries
//!   an even number of vertices whose lattice is the cycle's maximal one.
//!   Rewriting the cycle edges by partial sums of the outgoing vectors kills
//!   all primitive edges and lifts those vertices above `M`. If no minimal
//!   vertex remains the cycles accounted for all of them; otherwise every
//!   vector is even, and halving lowers `M` by two for the next round.
//!
//! [`reduce_and_certify`] records every count it relies on in a
//! [`ParityCertificate`], and [`verify_certificate`] re-checks those records
//! against the input graph without running the descent.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dyadic::{Val2, Vector};
use crate::graph::{AuditFailure, BalancedGraph, Parity, PrimitiveCycle, VertexCensus, SCHEMA_VERSION};
use crate::lattice::Lattice;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("edge {edge:?} is primitive; cannot halve")]
    PrimitiveEdgePresent { edge: String },
    #[error("round {round}: {failure}")]
    Audit { round: usize, failure: AuditFailure },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("certificate rejected at round {round}: {detail}")]
pub struct CertificateError {
    pub round: usize,
    pub detail: String,
}

/// Inclusion-maximum of the vertex lattices along a primitive cycle.
///
/// With every cycle vertex of infinite multiplicity all cycle-edge vectors
/// are parallel, and the line they span is returned.
pub fn cycle_max_lattice(g: &BalancedGraph, c: &PrimitiveCycle) -> Result<Lattice, AuditFailure> {
    let finite = c.vertices.iter().any(|&v| g.vertex_multiplicity(v).is_finite());
    if !finite {
        return Ok(Lattice::span_unchecked(&g.dart_vector(c.edges[0]), &Vector::zero()));
    }
    let mut best = g.vertex_lattice(c.vertices[0]);
    for &v in &c.vertices[1..] {
        let l = g.vertex_lattice(v);
        if l.includes(&best) {
            best = l;
        } else if !best.includes(&l) {
            return Err(AuditFailure::new(
                "maximal cycle lattice",
                g.vertex_id(v),
                format!("{l:?} incomparable with running maximum {best:?}"),
            ));
        }
    }
    Ok(best)
}

/// What the cycle audit established.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleAudit {
    /// Cycle positions whose vertex lattice equals the maximal one.
    pub maximal_positions: Vec<usize>,
}

impl CycleAudit {
    pub fn equal_count(&self) -> usize {
        self.maximal_positions.len()
    }
}

/// Checks on a cycle with finite maximal lattice `L`: an even number of
/// vertices have lattice `L`; outgoing vectors lie in the non-primitive part
/// of `L`; those vertices are exactly where consecutive cycle edges switch
/// between the two primitive index-2 sublattices.
pub fn cycle_audit(g: &BalancedGraph, c: &PrimitiveCycle, max: &Lattice) -> Result<CycleAudit, AuditFailure> {
    let here = g.vertex_id(c.vertices[0]).to_string();
    let fail = |detail: String| AuditFailure::new("cycle lattice", here.clone(), detail);
    let parts = max.index2_trichotomy().map_err(|e| fail(e.to_string()))?;
    let n = c.len();
    let maximal_positions: Vec<usize> = (0..n)
        .filter(|&i| g.vertex_lattice(c.vertices[i]).equals(max))
        .collect();
    if !maximal_positions.len().is_multiple_of(2) {
        return Err(fail(format!(
            "{} vertices carry the maximal lattice",
            maximal_positions.len()
        )));
    }
    for f in &c.outgoing {
        let b = g.dart_vector(*f);
        if !parts.zero.contains_unchecked(&b) {
            return Err(fail(format!("outgoing vector {b} outside the non-primitive part")));
        }
    }
    let mut switches = Vec::new();
    for i in 0..n {
        let before = g.dart_vector(c.edges[(i + n - 1) % n]);
        let after = g.dart_vector(c.edges[i]);
        let same = max.same_half(&before, &after).map_err(|e| fail(e.to_string()))?;
        if !same {
            switches.push(i);
        }
    }
    if switches != maximal_positions {
        return Err(fail(format!(
            "half switches at {switches:?} but maximal lattice at {maximal_positions:?}"
        )));
    }
    Ok(CycleAudit { maximal_positions })
}

/// Replace the cycle edges by partial sums of the outgoing vectors: the dart
/// `v_i -> v_{i+1}` gets `B(f_1) + ... + B(f_i)` (zero for `i = 0`).
pub fn rebalance_cycle(g: &BalancedGraph, c: &PrimitiveCycle) -> Result<BalancedGraph, AuditFailure> {
    let max = cycle_max_lattice(g, c)?;
    rebalance_with(g, c, &max)
}

fn rebalance_with(g: &BalancedGraph, c: &PrimitiveCycle, max: &Lattice) -> Result<BalancedGraph, AuditFailure> {
    let here = g.vertex_id(c.vertices[0]).to_string();
    let fail = |detail: String| AuditFailure::new("rebalance", here.clone(), detail);

    let mut assigned: Vec<Option<Vector>> = vec![None; g.edge_count()];
    let mut partial = Vector::zero();
    for (i, dart) in c.edges.iter().enumerate() {
        if i > 0 {
            partial += &g.dart_vector(c.outgoing[i]);
        }
        assigned[dart.edge] = Some(if dart.forward { partial.clone() } else { -&partial });
    }
    let out = g.map_vectors(|i, old| assigned[i].clone().unwrap_or_else(|| old.clone()));
    out.validate().map_err(|e| fail(e.to_string()))?;

    for dart in &c.edges {
        if out.is_primitive_edge(dart.edge) {
            return Err(fail(format!("edge {} still primitive", out.edges()[dart.edge].id)));
        }
    }
    if max.multiplicity().is_finite() {
        let zero = max.index2_trichotomy().map_err(|e| fail(e.to_string()))?.zero;
        for &v in &c.vertices {
            if !zero.includes(&out.vertex_lattice(v)) {
                return Err(fail(format!(
                    "lattice at {} not lifted into the non-primitive part",
                    g.vertex_id(v)
                )));
            }
        }
    } else {
        for &v in &c.vertices {
            if out.vertex_multiplicity(v).is_finite() {
                return Err(fail(format!("vertex {} gained finite multiplicity", g.vertex_id(v))));
            }
        }
    }
    Ok(out)
}

/// Divide every vector by two. Requires every edge to be non-primitive.
pub fn halve(g: &BalancedGraph) -> Result<BalancedGraph, ReductionError> {
    for e in g.edges() {
        if e.vector.val2() < Val2::Finite(1) {
            return Err(ReductionError::PrimitiveEdgePresent { edge: e.id.clone() });
        }
    }
    Ok(g.map_vectors(|_, v| v.halved()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    BaseCaseM0,
    AllInfinite,
    CyclesOnly,
    Halve,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    /// `2 V2 + 3 V3 = 2 E` on the primitive subgraph.
    PrimitiveSubgraphHandshake,
    /// `3 V = 2 E` on the whole graph.
    GlobalHandshake,
    CyclesAccountForAllMinimal,
    DescentToSmallerInstance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusSummary {
    pub minimum: Val2,
    pub argmin_count: usize,
}

impl From<&VertexCensus> for CensusSummary {
    fn from(c: &VertexCensus) -> Self {
        CensusSummary {
            minimum: c.minimum,
            argmin_count: c.count(),
        }
    }
}

/// Degree counts for a handshake identity: `2 * two_valent + 3 * three_valent = 2 * edges`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Handshake {
    pub two_valent: usize,
    pub three_valent: usize,
    pub edges: usize,
}

impl Handshake {
    pub fn holds(&self) -> bool {
        2 * self.two_valent + 3 * self.three_valent == 2 * self.edges
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleRecord {
    pub vertices: Vec<String>,
    pub length: usize,
    pub max_lattice: Lattice,
    pub multiplicity: Val2,
    /// Cycle vertices whose lattice equals `max_lattice`.
    pub equal_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Round {
    pub before: CensusSummary,
    pub branch: Branch,
    pub reason: Reason,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub handshake: Option<Handshake>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cycles: Vec<CycleRecord>,
    /// Census of the rebalanced graph.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub after_rebalance: Option<CensusSummary>,
    /// Vertices of the rebalanced graph still at multiplicity `before.minimum`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub remaining_at_minimum: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub after_halve: Option<CensusSummary>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityCertificate {
    pub schema_version: u32,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub rounds: Vec<Round>,
    pub reason: Reason,
    /// Parity of the minimal-vertex count as derived from the round ledger.
    pub parity: Parity,
}

impl ParityCertificate {
    pub fn final_round(&self) -> &Round {
        self.rounds.last().expect("certificate has at least one round")
    }
}

fn round_limit(m: Val2) -> usize {
    match m {
        Val2::Finite(m) => (m.max(0) as usize).div_ceil(2) + 1,
        Val2::Infinite => 1,
    }
}

fn audit(round: usize) -> impl Fn(AuditFailure) -> ReductionError {
    move |failure| ReductionError::Audit { round, failure }
}

/// Run the descent on `g`, recording each round.
pub fn reduce_and_certify(g: &BalancedGraph) -> Result<ParityCertificate, ReductionError> {
    let direct = g.census();
    let limit = round_limit(direct.minimum);
    let mut rounds = Vec::new();
    let mut current = g.clone();

    loop {
        let r = rounds.len();
        if r >= limit {
            return Err(audit(r)(AuditFailure::new(
                "descent",
                "-",
                format!("exceeded {limit} rounds"),
            )));
        }
        let census = current.census();
        current.primitive_degree_audit().map_err(audit(r))?;
        let before = CensusSummary::from(&census);
        let m = census.minimum;

        if m == Val2::Finite(0) {
            let mut hs = Handshake {
                two_valent: 0,
                three_valent: 0,
                edges: 0,
            };
            for v in 0..current.vertex_count() {
                let k = current
                    .terminating_darts(v)
                    .iter()
                    .filter(|d| current.is_primitive_edge(d.edge))
                    .count();
                match k {
                    2 => hs.two_valent += 1,
                    3 => hs.three_valent += 1,
                    _ => {}
                }
            }
            hs.edges = (0..current.edge_count())
                .filter(|&e| current.is_primitive_edge(e))
                .count();
            if !hs.holds() || hs.three_valent != before.argmin_count {
                return Err(audit(r)(AuditFailure::new(
                    "handshake",
                    "-",
                    format!("{hs:?} vs {before:?}"),
                )));
            }
            rounds.push(Round::terminal(
                before,
                Branch::BaseCaseM0,
                Reason::PrimitiveSubgraphHandshake,
                Some(hs),
            ));
            break;
        }
        if m == Val2::Infinite {
            let hs = Handshake {
                two_valent: 0,
                three_valent: current.vertex_count(),
                edges: current.edge_count(),
            };
            if !hs.holds() {
                return Err(audit(r)(AuditFailure::new("handshake", "-", format!("{hs:?}"))));
            }
            rounds.push(Round::terminal(
                before,
                Branch::AllInfinite,
                Reason::GlobalHandshake,
                Some(hs),
            ));
            break;
        }

        current.edge_inclusion_audit().map_err(audit(r))?;
        let cycles = current
            .primitive_cycles()
            .map_err(|e| audit(r)(AuditFailure::new("primitive cycles", "-", e.to_string())))?;
        let mut records = Vec::with_capacity(cycles.len());
        let mut rebalanced = current.clone();
        let mut lifted = 0usize;
        for c in &cycles {
            let max = cycle_max_lattice(&current, c).map_err(audit(r))?;
            let mult = max.multiplicity();
            let equal_count = if mult.is_finite() {
                cycle_audit(&current, c, &max).map_err(audit(r))?.equal_count()
            } else {
                0
            };
            if mult == m {
                lifted += equal_count;
            }
            // cycles are vertex-disjoint, so rewriting one leaves the others intact
            rebalanced = rebalance_with(&rebalanced, c, &max).map_err(audit(r))?;
            records.push(CycleRecord {
                vertices: c.vertices.iter().map(|&v| current.vertex_id(v).to_string()).collect(),
                length: c.len(),
                max_lattice: max,
                multiplicity: mult,
                equal_count,
            });
        }
        if let Some(e) = (0..rebalanced.edge_count()).find(|&e| rebalanced.is_primitive_edge(e)) {
            return Err(audit(r)(AuditFailure::new(
                "rebalance",
                rebalanced.edges()[e].id.clone(),
                "primitive edge survived rebalancing",
            )));
        }
        let after = rebalanced.census();
        let remaining = after.count_at(m);
        if before.argmin_count != remaining + lifted {
            return Err(audit(r)(AuditFailure::new(
                "ledger",
                "-",
                format!(
                    "{} minimal before, {remaining} remain, {lifted} on cycles",
                    before.argmin_count
                ),
            )));
        }

        let mut round = Round {
            before,
            branch: Branch::CyclesOnly,
            reason: Reason::CyclesAccountForAllMinimal,
            handshake: None,
            cycles: records,
            after_rebalance: Some(CensusSummary::from(&after)),
            remaining_at_minimum: Some(remaining),
            after_halve: None,
        };
        if remaining == 0 {
            rounds.push(round);
            break;
        }

        let halved = halve(&rebalanced).map_err(|e| audit(r)(AuditFailure::new("halve", "-", e.to_string())))?;
        let next = halved.census();
        if next.minimum != m.shifted(-2) || next.argmin != after.argmin {
            return Err(audit(r)(AuditFailure::new(
                "halve",
                "-",
                format!(
                    "minimum {m} became {}, argmin {:?} became {:?}",
                    next.minimum, after.argmin, next.argmin
                ),
            )));
        }
        round.branch = Branch::Halve;
        round.reason = Reason::DescentToSmallerInstance;
        round.after_halve = Some(CensusSummary::from(&next));
        rounds.push(round);
        current = halved;
    }

    let parity = ledger_parity(&rounds);
    let cert = ParityCertificate {
        schema_version: SCHEMA_VERSION,
        vertex_count: g.vertex_count(),
        edge_count: g.edge_count(),
        reason: rounds.last().map(|r| r.reason).expect("at least one round"),
        rounds,
        parity,
    };
    if parity != direct.parity() {
        return Err(audit(cert.rounds.len())(AuditFailure::new(
            "conclusion",
            "-",
            format!("ledger parity {parity} but direct census is {}", direct.parity()),
        )));
    }
    Ok(cert)
}

impl Round {
    fn terminal(before: CensusSummary, branch: Branch, reason: Reason, handshake: Option<Handshake>) -> Round {
        Round {
            before,
            branch,
            reason,
            handshake,
            cycles: Vec::new(),
            after_rebalance: None,
            remaining_at_minimum: None,
            after_halve: None,
        }
    }
}

/// Parity of the input's minimal count, from the terminal evidence plus the
/// per-round differences.
fn ledger_parity(rounds: &[Round]) -> Parity {
    let Some(last) = rounds.last() else { return Parity::Even };
    let mut total = match (last.branch, last.handshake) {
        (Branch::BaseCaseM0, Some(hs)) => hs.three_valent,
        (Branch::AllInfinite, Some(hs)) => hs.three_valent,
        _ => 0,
    };
    for r in rounds {
        let m = r.before.minimum;
        total += r
            .cycles
            .iter()
            .filter(|c| c.multiplicity == m)
            .map(|c| c.equal_count)
            .sum::<usize>();
    }
    Parity::of(total)
}

/// Re-check a stored certificate against `g`. The first round is checked
/// against the graph itself; later rounds are checked for internal
/// consistency of the ledger.
pub fn verify_certificate(g: &BalancedGraph, cert: &ParityCertificate) -> Result<(), CertificateError> {
    let err = |round: usize, detail: String| CertificateError { round, detail };
    if cert.schema_version != SCHEMA_VERSION {
        return Err(err(0, format!("unsupported schema version {}", cert.schema_version)));
    }
    if cert.vertex_count != g.vertex_count() || cert.edge_count != g.edge_count() {
        return Err(err(0, "vertex or edge count does not match the graph".into()));
    }
    let Some(first) = cert.rounds.first() else {
        return Err(err(0, "no rounds".into()));
    };
    let direct = g.census();
    if first.before != CensusSummary::from(&direct) {
        return Err(err(
            0,
            format!("recorded census {:?} differs from {direct}", first.before),
        ));
    }
    if cert.rounds.len() > round_limit(direct.minimum) {
        return Err(err(0, "more rounds than the descent allows".into()));
    }
    verify_first_round_cycles(g, first).map_err(|d| err(0, d))?;

    let last = cert.rounds.len() - 1;
    for (i, r) in cert.rounds.iter().enumerate() {
        let m = r.before.minimum;
        if i > 0 {
            let prev = cert.rounds[i - 1].after_halve;
            if prev != Some(r.before) {
                return Err(err(
                    i,
                    format!("starts from {:?}, previous round ended at {prev:?}", r.before),
                ));
            }
        }
        let terminal = matches!(r.branch, Branch::BaseCaseM0 | Branch::AllInfinite | Branch::CyclesOnly);
        if terminal != (i == last) {
            return Err(err(i, format!("branch {:?} in position {i} of {}", r.branch, last + 1)));
        }
        let expected_reason = match r.branch {
            Branch::BaseCaseM0 => Reason::PrimitiveSubgraphHandshake,
            Branch::AllInfinite => Reason::GlobalHandshake,
            Branch::CyclesOnly => Reason::CyclesAccountForAllMinimal,
            Branch::Halve => Reason::DescentToSmallerInstance,
        };
        if r.reason != expected_reason {
            return Err(err(
                i,
                format!("reason {:?} does not match branch {:?}", r.reason, r.branch),
            ));
        }
        match r.branch {
            Branch::BaseCaseM0 => {
                let hs = r.handshake.ok_or_else(|| err(i, "missing handshake".into()))?;
                if m != Val2::Finite(0) || !hs.holds() || hs.three_valent != r.before.argmin_count {
                    return Err(err(
                        i,
                        format!("base case evidence {hs:?} inconsistent with {:?}", r.before),
                    ));
                }
            }
            Branch::AllInfinite => {
                let hs = r.handshake.ok_or_else(|| err(i, "missing handshake".into()))?;
                if m != Val2::Infinite
                    || !hs.holds()
                    || hs.two_valent != 0
                    || hs.three_valent != r.before.argmin_count
                    || hs.three_valent != g.vertex_count()
                {
                    return Err(err(
                        i,
                        format!("global handshake {hs:?} inconsistent with {:?}", r.before),
                    ));
                }
            }
            Branch::CyclesOnly | Branch::Halve => {
                let Some(mf) = m.finite().filter(|&x| x > 0) else {
                    return Err(err(i, format!("cycle round with minimum {m}")));
                };
                let mut lifted = 0;
                for (k, c) in r.cycles.iter().enumerate() {
                    if c.length != c.vertices.len() || c.length == 0 {
                        return Err(err(i, format!("cycle {k} has inconsistent length")));
                    }
                    if c.max_lattice.multiplicity() != c.multiplicity {
                        return Err(err(i, format!("cycle {k} lattice multiplicity mismatch")));
                    }
                    if c.multiplicity < m {
                        return Err(err(i, format!("cycle {k} maximal lattice below the minimum")));
                    }
                    if c.equal_count % 2 != 0 || c.equal_count > c.length {
                        return Err(err(i, format!("cycle {k} has equal-lattice count {}", c.equal_count)));
                    }
                    if c.multiplicity == m {
                        lifted += c.equal_count;
                    }
                }
                let remaining = r
                    .remaining_at_minimum
                    .ok_or_else(|| err(i, "missing remaining count".into()))?;
                if r.before.argmin_count != remaining + lifted {
                    return Err(err(
                        i,
                        format!(
                            "ledger: {} before, {remaining} remaining, {lifted} lifted",
                            r.before.argmin_count
                        ),
                    ));
                }
                let after = r
                    .after_rebalance
                    .ok_or_else(|| err(i, "missing post-rebalance census".into()))?;
                if r.branch == Branch::CyclesOnly {
                    if remaining != 0 || after.minimum <= m {
                        return Err(err(i, "minimal vertices remain off the cycles".into()));
                    }
                } else {
                    let halved = r.after_halve.ok_or_else(|| err(i, "missing halved census".into()))?;
                    if remaining == 0
                        || after.minimum != m
                        || after.argmin_count != remaining
                        || mf < 2
                        || halved.minimum != Val2::Finite(mf - 2)
                        || halved.argmin_count != after.argmin_count
                    {
                        return Err(err(i, format!("halving step {after:?} -> {halved:?} inconsistent")));
                    }
                }
            }
        }
    }

    let parity = ledger_parity(&cert.rounds);
    if parity != cert.parity {
        return Err(err(
            last,
            format!("recorded parity {} but ledger gives {parity}", cert.parity),
        ));
    }
    if parity != direct.parity() {
        return Err(err(
            last,
            format!("ledger parity {parity} but the graph's count is {}", direct.parity()),
        ));
    }
    if cert.reason != cert.rounds[last].reason {
        return Err(err(last, "final reason differs from the last round".into()));
    }
    Ok(())
}

fn verify_first_round_cycles(g: &BalancedGraph, round: &Round) -> Result<(), String> {
    if round.cycles.is_empty() {
        return Ok(());
    }
    let index = |id: &str| {
        g.vertex_ids()
            .iter()
            .position(|v| v == id)
            .ok_or_else(|| format!("unknown vertex {id:?}"))
    };
    let mut covered = BTreeSet::new();
    for c in &round.cycles {
        let mut equal = 0;
        for id in &c.vertices {
            let v = index(id)?;
            if !covered.insert(v) {
                return Err(format!("vertex {id:?} appears in two cycles"));
            }
            let l = g.vertex_lattice(v);
            if !c.max_lattice.includes(&l) {
                return Err(format!("lattice at {id:?} not inside the recorded maximal lattice"));
            }
            if l.equals(&c.max_lattice) {
                equal += 1;
            }
        }
        if c.multiplicity.is_finite() && equal != c.equal_count {
            return Err(format!("recorded equal count {} but found {equal}", c.equal_count));
        }
    }
    let primitive_vertices: BTreeSet<usize> = (0..g.vertex_count())
        .filter(|&v| g.terminating_darts(v).iter().any(|d| g.is_primitive_edge(d.edge)))
        .collect();
    if primitive_vertices != covered {
        return Err("recorded cycles do not cover exactly the primitive vertices".into());
    }
    Ok(())
}
