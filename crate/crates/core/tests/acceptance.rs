//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::collections::HashSet;
use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use rand::Rng;
use stein_parity::cli::{run, ExitCode};
use stein_parity::dissection::{normalize_to_integers, run_pipeline, stein_check, Dissection, DissectionError};
use stein_parity::dyadic::{vec2, Scalar, Val2, Vector};
use stein_parity::gen::{random_cubic, random_even_balancing, random_graph, GenConfig};
use stein_parity::graph::{BalancedGraph, Parity};
use stein_parity::lattice::Lattice;
use stein_parity::reduction::{halve, reduce_and_certify, verify_certificate, Branch, ParityCertificate};

use common::{rng, shoelace2, square, tri};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Structural audits on one graph; returns the number of primitive edges checked.
fn audits(g: &BalancedGraph) -> Result<usize, String> {
    g.primitive_degree_audit().map_err(|e| e.to_string())?;
    let checked = g.edge_inclusion_audit().map_err(|e| e.to_string())?;
    let expected = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(i, e)| g.is_primitive_edge(*i) && e.tail != e.head)
        .count();
    ensure(checked == expected, || {
        format!("{checked} of {expected} primitive edges audited")
    })?;
    Ok(checked)
}

#[derive(Default)]
struct AuditTally {
    graphs: usize,
    edges: usize,
    failures: Vec<String>,
}

impl AuditTally {
    fn record(&mut self, label: &str, g: &BalancedGraph) {
        self.graphs += 1;
        match audits(g) {
            Ok(n) => self.edges += n,
            Err(e) => self.failures.push(format!("{label}: {e}")),
        }
    }
}

// ---------------------------------------------------------------------------

fn census_suite(tally: &mut AuditTally) -> Outcome {
    let mut r = rng(1);
    let mut even = 0;
    let total = 10_000;
    for seed in 0..total {
        let config = GenConfig {
            vertices: 2 * r.random_range(1..=30),
            seed,
            bound: 4096,
            scale_exp: (seed % 4) as u32,
        };
        let g = random_graph(&config).map_err(|e| e.to_string())?;
        tally.record(&format!("census seed {seed}"), &g);
        if g.census().parity() == Parity::Even {
            even += 1;
        }
    }
    ensure(even == total, || format!("{even}/{total} even"))?;
    Ok(format!("{even}/{total} censuses even"))
}

/// Independent check of a certificate's bookkeeping.
fn check_ledger(g: &BalancedGraph, cert: &ParityCertificate) -> Result<(), String> {
    let mut total = 0usize;
    for (i, round) in cert.rounds.iter().enumerate() {
        let m = round.before.minimum;
        let mut lifted = 0;
        for c in &round.cycles {
            if c.multiplicity.is_finite() {
                ensure(c.equal_count % 2 == 0, || {
                    format!("round {i}: odd equal count {}", c.equal_count)
                })?;
            }
            if c.multiplicity == m {
                lifted += c.equal_count;
            }
        }
        total += lifted;
        match round.branch {
            Branch::CyclesOnly | Branch::Halve => {
                let remaining = round.remaining_at_minimum.ok_or("missing remaining count")?;
                ensure(round.before.argmin_count == remaining + lifted, || {
                    format!("round {i}: {} != {remaining} + {lifted}", round.before.argmin_count)
                })?;
                if round.branch == Branch::CyclesOnly {
                    ensure(remaining == 0, || {
                        format!("round {i}: terminal round leaves {remaining}")
                    })?;
                } else {
                    let after = round.after_halve.ok_or("missing halved census")?;
                    ensure(
                        after.minimum == m.shifted(-2) && after.argmin_count == remaining,
                        || format!("round {i}: halving gave {after:?}"),
                    )?;
                    let next = cert.rounds.get(i + 1).ok_or("halving round is last")?;
                    ensure(next.before == after, || {
                        format!("round {}: does not continue the halved census", i + 1)
                    })?;
                }
            }
            Branch::BaseCaseM0 | Branch::AllInfinite => {
                ensure(i + 1 == cert.rounds.len(), || "terminal branch before the end".into())?;
                let hs = round.handshake.ok_or("missing handshake")?;
                ensure(hs.holds(), || format!("handshake {hs:?}"))?;
                ensure(hs.three_valent == round.before.argmin_count, || {
                    "handshake count".into()
                })?;
                total += hs.three_valent;
            }
        }
    }
    let direct = g.census().parity();
    ensure(Parity::of(total) == direct && cert.parity == direct, || {
        format!("ledger parity {} vs census {direct}", Parity::of(total))
    })
}

fn certificate_suite(tally: &mut AuditTally) -> Outcome {
    let mut r = rng(2);
    let total = 1000;
    let mut halvings = 0;
    let mut cycles = 0;
    for i in 0..total {
        let n = 2 * r.random_range(1..=30);
        let seed = 100_000 + i as u64;
        let g = if i % 2 == 0 {
            let config = GenConfig {
                vertices: n,
                seed,
                bound: 4096,
                scale_exp: r.random_range(0..=2),
            };
            random_even_balancing(&random_cubic(&config).map_err(|e| e.to_string())?, &config)
        } else {
            random_graph(&GenConfig {
                vertices: n,
                seed,
                bound: 4096,
                scale_exp: r.random_range(1..=3),
            })
        }
        .map_err(|e| e.to_string())?;
        ensure(g.census().minimum >= Val2::Finite(1), || {
            format!("instance {i} has M = 0")
        })?;
        tally.record(&format!("certificate instance {i}"), &g);

        let cert = reduce_and_certify(&g).map_err(|e| format!("instance {i}: {e}"))?;
        check_ledger(&g, &cert).map_err(|e| format!("instance {i}: {e}"))?;
        verify_certificate(&g, &cert).map_err(|e| format!("instance {i}: {e}"))?;
        halvings += cert.rounds.iter().filter(|r| r.branch == Branch::Halve).count();
        cycles += cert.rounds.iter().map(|r| r.cycles.len()).sum::<usize>();
    }
    Ok(format!(
        "{total}/{total} certified ({halvings} halvings, {cycles} cycles rebalanced)"
    ))
}

fn random_primitive(r: &mut impl Rng, bound: i64) -> Vector {
    loop {
        let (x, y) = (r.random_range(-bound..=bound), r.random_range(-bound..=bound));
        if x % 2 != 0 || y % 2 != 0 {
            return vec2(x, y);
        }
    }
}

/// A vector whose cross product with `u` is odd.
fn odd_partner(r: &mut impl Rng, u: &Vector, bound: i64) -> Vector {
    loop {
        let w = vec2(r.random_range(-bound..=bound), r.random_range(-bound..=bound));
        if u.cross(&w).is_odd() {
            return w;
        }
    }
}

/// Primitive lattice of multiplicity `d` with scrambled generators.
fn random_lattice(r: &mut impl Rng, d: u32) -> (Lattice, Vector, Vector) {
    let u = random_primitive(r, 50);
    let w = odd_partner(r, &u, 50);
    let v = &w.scale(&Scalar::pow2(d)) + &u.scale(&Scalar::from_int(r.random_range(-5..=5)));
    let g1 = &u + &v.scale(&Scalar::from_int(r.random_range(-3..=3)));
    (Lattice::span(&g1, &v).unwrap(), g1, v)
}

fn lattice_suite() -> Outcome {
    let mut r = rng(3);
    let mut samples = 0;
    let mut candidates = (0, 0);
    for i in 0..500 {
        let d = r.random_range(0..=10u32);
        let (l, g1, g2) = random_lattice(&mut r, d);
        let ctx = |msg: String| format!("lattice {i} (d={d}): {msg}");
        ensure(l.multiplicity() == Val2::Finite(d as i64), || {
            ctx("wrong multiplicity".into())
        })?;
        let u = if g1.is_primitive().unwrap() {
            g1.clone()
        } else {
            g2.clone()
        };

        let mut previous: Option<Lattice> = None;
        for level in 0..=d {
            let s = l
                .superlattice_at(Val2::Finite(level as i64))
                .map_err(|e| ctx(e.to_string()))?;
            ensure(s.includes(&l), || ctx(format!("level {level} misses L")))?;
            ensure(s.multiplicity() == Val2::Finite(level as i64), || {
                ctx(format!("level {level} multiplicity"))
            })?;
            if let Some(p) = &previous {
                ensure(p.includes(&s), || ctx(format!("chain broken at {level}")))?;
            }
            // perturbed candidates of the same multiplicity through a primitive vector of L
            for _ in 0..10 {
                let x = &u + &random_primitive(&mut r, 20).scale(&Scalar::from_int(2));
                let y = odd_partner(&mut r, &x, 20).scale(&Scalar::pow2(level));
                let c = Lattice::span(&x, &y).unwrap();
                ensure(c.multiplicity() == s.multiplicity(), || {
                    ctx("candidate multiplicity".into())
                })?;
                let contains = c.includes(&l);
                ensure(contains == (c == s), || {
                    ctx(format!("second superlattice at level {level}"))
                })?;
                if contains {
                    candidates.0 += 1;
                } else {
                    candidates.1 += 1;
                }
            }
            previous = Some(s);
        }

        if d == 0 {
            ensure(l.index2_trichotomy().is_err(), || {
                ctx("trichotomy at multiplicity 0".into())
            })?;
            continue;
        }
        let t = l.index2_trichotomy().map_err(|e| ctx(e.to_string()))?;
        let parts = [&t.plus, &t.minus, &t.zero];
        for (a, p) in parts.iter().enumerate() {
            ensure(l.includes(p), || ctx(format!("part {a} not inside L")))?;
            ensure(p.multiplicity() == Val2::Finite(d as i64 + 1), || {
                ctx(format!("part {a} multiplicity"))
            })?;
            for q in &parts[a + 1..] {
                ensure(p != q, || ctx("parts coincide".into()))?;
            }
        }
        // a lattice generated by even vectors has only even elements
        ensure(t.zero.generators().iter().all(|g| !g.is_primitive().unwrap()), || {
            ctx("primitive zero part".into())
        })?;
        let mut drawn = 0;
        while drawn < 1000 {
            let v = &g1.scale(&Scalar::from_int(r.random_range(-40..=40)))
                + &g2.scale(&Scalar::from_int(r.random_range(-40..=40)));
            if !v.is_primitive().unwrap() {
                ensure(t.zero.contains(&v).unwrap(), || {
                    ctx(format!("even element {v} outside zero part"))
                })?;
                continue;
            }
            drawn += 1;
            let hits = (
                t.plus.contains(&v).unwrap(),
                t.minus.contains(&v).unwrap(),
                t.zero.contains(&v).unwrap(),
            );
            ensure(matches!(hits, (true, false, false) | (false, true, false)), || {
                ctx(format!("{v} lands in {hits:?}"))
            })?;
            ensure(l.same_half(&u, &v).unwrap() == t.plus.contains(&v).unwrap(), || {
                ctx("same_half disagrees".into())
            })?;
        }
        samples += drawn;
    }
    Ok(format!(
        "500 lattices; {samples} primitive samples split cleanly; {}/{} perturbed candidates accepted",
        candidates.0,
        candidates.0 + candidates.1
    ))
}

fn membership_oracle() -> Outcome {
    let mut r = rng(4);
    let mut cells = 0;
    let mut lattices = 0;
    while lattices < 100 {
        let g1 = vec2(r.random_range(-60..=60), r.random_range(-60..=60));
        let g2 = vec2(r.random_range(-60..=60), r.random_range(-60..=60));
        let det = g1.cross(&g2);
        let d = match det.val2() {
            Val2::Finite(d) if d <= 6 => d as u32,
            _ => continue,
        };
        lattices += 1;
        let l = Lattice::span(&g1, &g2).unwrap();
        let n = 1i64 << (d + 1);
        let modn = |s: &Scalar| {
            let k: i64 = s.numer().try_into().unwrap();
            k.rem_euclid(n)
        };
        let (a, b) = ((modn(&g1.x), modn(&g1.y)), (modn(&g2.x), modn(&g2.y)));
        let mut span = HashSet::new();
        for i in 0..n {
            for j in 0..n {
                span.insert(((i * a.0 + j * b.0).rem_euclid(n), (i * a.1 + j * b.1).rem_euclid(n)));
            }
        }
        for x in 0..n {
            for y in 0..n {
                let member = l.contains(&vec2(x, y)).unwrap();
                ensure(member == span.contains(&(x, y)), || {
                    format!("{g1} {g2}: ({x},{y}) contains={member} but enumeration disagrees")
                })?;
                cells += 1;
            }
        }
    }
    Ok(format!("100 lattices, {cells} residues, 0 mismatches"))
}

fn audit_summary(tally: &AuditTally) -> Outcome {
    match tally.failures.first() {
        None => Ok(format!(
            "{} graphs, {} primitive edges audited",
            tally.graphs, tally.edges
        )),
        Some(f) => Err(format!("{} failures, first: {f}", tally.failures.len())),
    }
}

// ---------------------------------------------------------------------------

/// `m == 1 + v2(S)` per face, with `S` from an independent shoelace.
fn check_face_multiplicities(d: &Dissection) -> Result<Vec<Val2>, String> {
    let p = run_pipeline(d).map_err(|e| e.to_string())?;
    let mults = p.dual.census().multiplicities;
    for (face, m) in p.glued.faces.iter().zip(&mults) {
        let area = shoelace2(&face.corners).abs().halved();
        let expected = area.val2().shifted(1);
        ensure(*m == expected, || {
            format!("face {}: m = {m}, 1 + v2({area}) = {expected}", face.label())
        })?;
    }
    Ok(mults)
}

fn corpus_case(
    name: &str,
    d: Dissection,
    expected: &[Val2],
    degenerate: usize,
    log: &mut Vec<String>,
) -> Result<(), String> {
    let ctx = |e: String| format!("({name}) {e}");
    let mults = check_face_multiplicities(&d).map_err(ctx)?;
    ensure(mults == expected, || {
        ctx(format!("multiplicities {mults:?}, expected {expected:?}"))
    })?;
    let report = stein_check(&d, true).map_err(|e| ctx(e.to_string()))?;
    ensure(report.inserted_degenerate == degenerate, || {
        ctx(format!("{} degenerate faces", report.inserted_degenerate))
    })?;
    ensure(report.parity_holds && report.census.argmin_count % 2 == 0, || {
        ctx("parity".into())
    })?;
    if report.all_equal_areas {
        ensure(report.nondegenerate_count_even, || ctx("odd equal-area count".into()))?;
    }
    log.push(format!("{name}:{}", report.census.argmin_count));
    Ok(())
}

fn dissection_corpus() -> Outcome {
    let f = Val2::Finite;
    let mut log = Vec::new();

    let two = Dissection::new(
        square(2),
        vec![tri((0, 0), (2, 0), (2, 2)), tri((0, 0), (2, 2), (0, 2))],
        None,
    )
    .map_err(|e| e.to_string())?;
    let dual = run_pipeline(&two).map_err(|e| e.to_string())?.dual;
    ensure(dual.vertex_count() == 2 && dual.edge_count() == 3, || {
        "(a) dual is not a theta graph".into()
    })?;
    corpus_case("a", two, &[f(2), f(2)], 0, &mut log)?;

    let four = Dissection::new(
        square(2),
        vec![
            tri((0, 0), (2, 0), (1, 1)),
            tri((2, 0), (2, 2), (1, 1)),
            tri((2, 2), (0, 2), (1, 1)),
            tri((0, 2), (0, 0), (1, 1)),
        ],
        None,
    )
    .map_err(|e| e.to_string())?;
    corpus_case("b", four, &[f(1); 4], 0, &mut log)?;

    let mut strips = Vec::new();
    for k in 0..3 {
        let (x0, x1) = (2 * k, 2 * k + 2);
        strips.push(tri((x0, 0), (x1, 0), (x1, 6)));
        strips.push(tri((x0, 0), (x1, 6), (x0, 6)));
    }
    let strips = Dissection::new(square(6), strips, None).map_err(|e| e.to_string())?;
    // every triangle has area 6, so m = 1 + v2(6) = 2
    corpus_case("c", strips, &[f(2); 6], 0, &mut log)?;

    let t_vertex = Dissection::new(
        square(2),
        vec![
            tri((0, 0), (2, 0), (0, 1)),
            tri((2, 0), (2, 2), (0, 2)),
            tri((0, 1), (2, 0), (0, 2)),
        ],
        None,
    )
    .map_err(|e| e.to_string())?;
    let p = run_pipeline(&t_vertex).map_err(|e| e.to_string())?;
    ensure(p.dual.vertex_count() == 4, || "(d) dual should have 4 vertices".into())?;
    let census = p.dual.census();
    ensure(census.minimum == f(1) && census.count() == 2, || {
        format!("(d) census {census}")
    })?;
    corpus_case("d", t_vertex, &[f(1), f(2), f(1), Val2::Infinite], 1, &mut log)?;

    let triangle = Dissection::new(
        vec![vec2(0, 0), vec2(2, 0), vec2(0, 2)],
        vec![tri((0, 0), (2, 0), (0, 2))],
        None,
    )
    .map_err(|e| e.to_string())?;
    match stein_check(&triangle, false) {
        Err(DissectionError::NotBalancedPolygon { .. }) => log.push("e:rejected".into()),
        other => return Err(format!("(e) expected NotBalancedPolygon, got {other:?}")),
    }
    Ok(format!("5/5 cases ({})", log.join(" ")))
}

fn halving_contract() -> Outcome {
    let mut r = rng(7);
    for i in 0..200 {
        let config = GenConfig {
            vertices: 2 * r.random_range(1..=30),
            seed: 200_000 + i,
            bound: 4096,
            scale_exp: 1,
        };
        let g = random_graph(&config).map_err(|e| e.to_string())?;
        let h = halve(&g).map_err(|e| format!("instance {i}: {e}"))?;
        for v in 0..g.vertex_count() {
            let (before, after) = (g.vertex_multiplicity(v), h.vertex_multiplicity(v));
            let ok = match before {
                Val2::Finite(m) => after == Val2::Finite(m - 2),
                Val2::Infinite => after == Val2::Infinite,
            };
            ensure(ok, || format!("instance {i}, vertex {v}: {before} -> {after}"))?;
        }
        ensure(g.census().argmin == h.census().argmin, || {
            format!("instance {i}: argmin moved")
        })?;
    }
    Ok("200/200 instances shift by -2 with argmin fixed".into())
}

fn scale_invariance() -> Outcome {
    let mut r = rng(8);
    let mut faces = 0;
    for i in 0..100 {
        let splits = r.random_range(0..8);
        let (base, _) = normalize_to_integers(&common::random_dissection(&mut r, splits));
        let p = run_pipeline(&base).map_err(|e| format!("dissection {i}: {e}"))?;
        let census = p.dual.census();
        faces += census.multiplicities.len();
        for lambda in [2i64, 3, 6] {
            let shift = 2 * Scalar::from_int(lambda).val2().finite().unwrap();
            let scaled = run_pipeline(&base.scaled(&Scalar::from_int(lambda)))
                .map_err(|e| format!("dissection {i}, scale {lambda}: {e}"))?
                .dual
                .census();
            ensure(scaled.multiplicities.len() == census.multiplicities.len(), || {
                format!("dissection {i}: face count")
            })?;
            for (a, b) in census.multiplicities.iter().zip(&scaled.multiplicities) {
                ensure(*b == a.shifted(shift), || {
                    format!("dissection {i}, scale {lambda}: {a} -> {b}")
                })?;
            }
            ensure(scaled.argmin == census.argmin, || {
                format!("dissection {i}, scale {lambda}: argmin moved")
            })?;
        }
    }
    Ok(format!(
        "100 dissections x 3 scales, {faces} faces each shifted exactly"
    ))
}

fn cli_contract() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let exe = env!("CARGO_BIN_EXE_stein-parity");
    let path = |name: &str| -> PathBuf { dir.path().join(name) };
    let arg = |p: &PathBuf| p.to_str().unwrap().to_string();
    let mut valid_runs = 0;

    let call = |args: &[String]| -> ExitCode {
        let mut out = Vec::new();
        let mut err = Vec::new();
        run(
            std::iter::once("stein-parity".to_string()).chain(args.iter().cloned()),
            &mut out,
            &mut err,
        )
    };

    for seed in 0..100u64 {
        let n = (2 + 2 * (seed % 20)).to_string();
        let mut gen = vec!["gen".into(), "--vertices".into(), n, "--seed".into(), seed.to_string()];
        gen.extend(["--scale-exp".into(), (seed % 4).to_string()]);
        if seed % 3 == 0 {
            gen.push("--even".into());
        }
        let out = Command::new(exe).args(&gen).output().map_err(|e| e.to_string())?;
        ensure(out.status.code() == Some(0), || {
            format!("gen seed {seed} exited {:?}", out.status.code())
        })?;
        let graph = path(&format!("g{seed}.json"));
        std::fs::write(&graph, &out.stdout).map_err(|e| e.to_string())?;

        let check = Command::new(exe)
            .args(["check-graph", &arg(&graph)])
            .output()
            .map_err(|e| e.to_string())?;
        ensure(check.status.code() == Some(0), || {
            format!("check-graph seed {seed} exited {:?}", check.status.code())
        })?;
        valid_runs += 1;

        let cert = path(&format!("c{seed}.json"));
        for args in [
            vec!["reduce".to_string(), arg(&graph), "--trace".into(), arg(&cert)],
            vec!["verify-certificate".into(), arg(&graph), arg(&cert)],
            vec!["audit".into(), arg(&graph)],
            vec!["--json".into(), "check-graph".into(), arg(&graph)],
        ] {
            let code = call(&args);
            ensure(code == ExitCode::Success, || {
                format!("seed {seed}: {args:?} exited {code:?}")
            })?;
            valid_runs += 1;
        }

        // corrupt: perturb the vector on a non-loop edge so both ends go out of balance
        let mut data: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
        let edges = data["edges"].as_array_mut().unwrap();
        let edge = edges
            .iter_mut()
            .find(|e| e["tail"] != e["head"])
            .ok_or("no non-loop edge")?;
        let x = &mut edge["b"][0];
        let bumped: Scalar = x.as_str().unwrap().parse().unwrap();
        *x = (&bumped + &Scalar::one()).to_string().into();
        let bad = path(&format!("bad{seed}.json"));
        std::fs::write(&bad, data.to_string()).map_err(|e| e.to_string())?;
        let code = Command::new(exe)
            .args(["check-graph", &arg(&bad)])
            .output()
            .map_err(|e| e.to_string())?
            .status
            .code();
        ensure(code == Some(1), || format!("corrupted seed {seed} exited {code:?}"))?;
    }

    let corpus = ["t_vertex_square.json"];
    for name in corpus {
        let file = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name);
        let code = call(&["stein".into(), arg(&file), "--certificate".into()]);
        ensure(code == ExitCode::Success, || format!("stein {name} exited {code:?}"))?;
        valid_runs += 1;
    }
    let garbage = path("garbage.json");
    std::fs::write(&garbage, "{ not json").map_err(|e| e.to_string())?;
    for cmd in ["check-graph", "reduce", "audit", "stein"] {
        let code = call(&[cmd.into(), arg(&garbage)]);
        ensure(code == ExitCode::InvalidInput, || {
            format!("{cmd} on garbage exited {code:?}")
        })?;
    }
    Ok(format!(
        "100/100 round trips; {valid_runs} valid runs, none exited 2; corrupted inputs exit 1"
    ))
}

// ---------------------------------------------------------------------------

fn main() {
    let mut tally = AuditTally::default();
    let mut results: Vec<(usize, &str, Outcome, f64)> = Vec::new();
    let mut timed = |id: usize, name: &'static str, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let outcome = f();
        results.push((id, name, outcome, start.elapsed().as_secs_f64()));
    };

    timed(1, "parity of minimal vertices on random graphs", &mut || {
        census_suite(&mut tally)
    });
    timed(2, "certificate soundness", &mut || certificate_suite(&mut tally));
    timed(3, "superlattice chain and index-2 trichotomy", &mut lattice_suite);
    timed(4, "membership vs. residue enumeration", &mut membership_oracle);
    timed(5, "primitive-degree and edge-inclusion audits", &mut || {
        audit_summary(&tally)
    });
    timed(6, "dissection corpus", &mut dissection_corpus);
    timed(7, "halving contract", &mut halving_contract);
    timed(8, "scale invariance", &mut scale_invariance);
    timed(9, "command-line contract", &mut cli_contract);

    let mut failed = 0;
    for (id, name, outcome, secs) in &results {
        match outcome {
            Ok(detail) => println!("PASS [{id}] {name}: {detail} ({secs:.1}s)"),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{id}] {name}: {detail} ({secs:.1}s)");
            }
        }
    }
    println!(
        "acceptance: {}/{} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
