//! Command-line front end.
//!
//! Exit codes: 0 success, 1 invalid input, 2 internal consistency failure
//! (a structural audit or parity check failed, which correct code never does),
//! 3 usage error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::dissection::{render_svg, run_pipeline, stein_check, Dissection, DissectionData};
use crate::gen::{random_balancing, random_cubic, random_even_balancing, GenConfig};
use crate::graph::{BalancedGraph, GraphData, SCHEMA_VERSION};
use crate::reduction::{cycle_audit, cycle_max_lattice, reduce_and_certify, verify_certificate, ParityCertificate};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Success = 0,
    InvalidInput = 1,
    Internal = 2,
    Usage = 3,
}

impl ExitCode {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "stein-parity",
    version,
    about = "Parity checks for balanced 3-valent graphs and balanced-polygon dissections"
)]
struct Cli {
    /// Emit machine-readable JSON reports.
    #[arg(long, global = true)]
    json: bool,
    /// Suppress human-readable output.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Census of vertex multiplicities; succeeds iff the minimal count is even.
    CheckGraph { file: PathBuf },
    /// Run the descent and produce a parity certificate.
    Reduce {
        file: PathBuf,
        /// Write the certificate JSON here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Re-check a stored certificate against its graph.
    VerifyCertificate { graph: PathBuf, certificate: PathBuf },
    /// Check a triangle dissection of a balanced polygon.
    Stein {
        file: PathBuf,
        /// Include a parity certificate for the dual graph.
        #[arg(long)]
        certificate: bool,
        /// Write an SVG drawing of the resolved dissection here.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Emit a random balanced graph as JSON.
    Gen {
        #[arg(long, default_value_t = 10)]
        vertices: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4096)]
        bound: i64,
        #[arg(long = "scale-exp", default_value_t = 0)]
        scale_exp: u32,
        /// Draw every vector from one residue line mod 2, forcing positive multiplicities.
        #[arg(long)]
        even: bool,
    },
    /// Run the structural audits on a graph.
    Audit { file: PathBuf },
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    json: bool,
    quiet: bool,
}

impl Io<'_> {
    fn say(&mut self, line: &str) {
        if !self.quiet && !self.json {
            let _ = writeln!(self.out, "{line}");
        }
    }

    fn emit<T: Serialize>(&mut self, value: &T) {
        if self.json {
            let _ = writeln!(
                self.out,
                "{}",
                serde_json::to_string_pretty(value).expect("serializable")
            );
        }
    }

    fn fail(&mut self, code: ExitCode, kind: &str, detail: serde_json::Value, message: &str) -> ExitCode {
        let _ = writeln!(self.err, "error: {message}");
        self.emit(&json!({ "schema_version": SCHEMA_VERSION, "error": kind, "detail": detail }));
        code
    }
}

/// Parse `args` (including the program name) and run. Output goes to `out`
/// and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let shown = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{shown}");
                    ExitCode::Success
                }
                _ => {
                    let _ = write!(err, "{shown}");
                    ExitCode::Usage
                }
            };
        }
    };
    let mut io = Io {
        out,
        err,
        json: cli.json,
        quiet: cli.quiet,
    };
    match cli.command {
        Command::CheckGraph { file } => check_graph(&mut io, &file),
        Command::Reduce { file, trace } => reduce(&mut io, &file, trace.as_deref()),
        Command::VerifyCertificate { graph, certificate } => verify(&mut io, &graph, &certificate),
        Command::Stein { file, certificate, svg } => stein(&mut io, &file, certificate, svg.as_deref()),
        Command::Gen {
            vertices,
            seed,
            bound,
            scale_exp,
            even,
        } => gen(
            &mut io,
            GenConfig {
                vertices,
                seed,
                bound,
                scale_exp,
            },
            even,
        ),
        Command::Audit { file } => audit(&mut io, &file),
    }
}

fn read(io: &mut Io<'_>, path: &Path) -> Result<String, ExitCode> {
    fs::read_to_string(path).map_err(|e| {
        io.fail(
            ExitCode::InvalidInput,
            "io",
            json!(e.to_string()),
            &format!("{}: {e}", path.display()),
        )
    })
}

fn load_graph(io: &mut Io<'_>, path: &Path) -> Result<BalancedGraph, ExitCode> {
    let text = read(io, path)?;
    let data: GraphData = serde_json::from_str(&text).map_err(|e| {
        io.fail(
            ExitCode::InvalidInput,
            "parse",
            json!(e.to_string()),
            &format!("{}: {e}", path.display()),
        )
    })?;
    BalancedGraph::from_data(&data).map_err(|e| {
        let detail = serde_json::to_value(&e).expect("serializable");
        io.fail(
            ExitCode::InvalidInput,
            "invalid_graph",
            detail,
            &format!("{}: {e}", path.display()),
        )
    })
}

fn write_file(io: &mut Io<'_>, path: &Path, contents: &str) -> Result<(), ExitCode> {
    fs::write(path, contents).map_err(|e| {
        io.fail(
            ExitCode::InvalidInput,
            "io",
            json!(e.to_string()),
            &format!("{}: {e}", path.display()),
        )
    })
}

fn check_graph(io: &mut Io<'_>, path: &Path) -> ExitCode {
    let g = match load_graph(io, path) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let census = g.census();
    io.say(&census.to_string());
    io.emit(&json!({
        "schema_version": SCHEMA_VERSION,
        "minimum": census.minimum,
        "argmin_count": census.count(),
        "parity": census.parity(),
        "argmin": census.argmin.iter().map(|&v| g.vertex_id(v)).collect::<Vec<_>>(),
    }));
    if census.count() % 2 == 0 {
        ExitCode::Success
    } else {
        ExitCode::Internal
    }
}

fn reduce(io: &mut Io<'_>, path: &Path, trace: Option<&Path>) -> ExitCode {
    let g = match load_graph(io, path) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let cert = match reduce_and_certify(&g) {
        Ok(c) => c,
        Err(e) => {
            return io.fail(
                ExitCode::Internal,
                "audit_failure",
                json!(e.to_string()),
                &e.to_string(),
            )
        }
    };
    let branches: Vec<String> = cert.rounds.iter().map(|r| format!("{:?}", r.branch)).collect();
    io.say(&format!(
        "{} round(s): {}; parity {}",
        cert.rounds.len(),
        branches.join(" -> "),
        cert.parity
    ));
    if let Some(p) = trace {
        let text = serde_json::to_string_pretty(&cert).expect("serializable");
        if let Err(code) = write_file(io, p, &text) {
            return code;
        }
    }
    io.emit(&cert);
    ExitCode::Success
}

fn verify(io: &mut Io<'_>, graph: &Path, certificate: &Path) -> ExitCode {
    let g = match load_graph(io, graph) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let text = match read(io, certificate) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let cert: ParityCertificate = match serde_json::from_str(&text) {
        Ok(c) => c,
        Err(e) => return io.fail(ExitCode::InvalidInput, "parse", json!(e.to_string()), &e.to_string()),
    };
    match verify_certificate(&g, &cert) {
        Ok(()) => {
            io.say(&format!(
                "certificate accepted: {} round(s), parity {}",
                cert.rounds.len(),
                cert.parity
            ));
            io.emit(&json!({ "schema_version": SCHEMA_VERSION, "accepted": true }));
            ExitCode::Success
        }
        Err(e) => io.fail(
            ExitCode::InvalidInput,
            "certificate_rejected",
            json!({ "round": e.round, "detail": e.detail }),
            &e.to_string(),
        ),
    }
}

fn stein(io: &mut Io<'_>, path: &Path, certificate: bool, svg: Option<&Path>) -> ExitCode {
    let text = match read(io, path) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let data: DissectionData = match serde_json::from_str(&text) {
        Ok(d) => d,
        Err(e) => return io.fail(ExitCode::InvalidInput, "parse", json!(e.to_string()), &e.to_string()),
    };
    let failure = |io: &mut Io<'_>, e: crate::dissection::DissectionError| {
        let code = if e.is_internal() {
            ExitCode::Internal
        } else {
            ExitCode::InvalidInput
        };
        io.fail(code, "dissection", json!(format!("{e:?}")), &e.to_string())
    };
    let d = match Dissection::from_data(data) {
        Ok(d) => d,
        Err(e) => return failure(io, e),
    };
    let report = match stein_check(&d, certificate) {
        Ok(r) => r,
        Err(e) => return failure(io, e),
    };
    if let Some(p) = svg {
        let drawing = match run_pipeline(&d) {
            Ok(pl) => render_svg(&pl.glued, &pl.dual.census().multiplicities),
            Err(e) => return failure(io, e),
        };
        if let Err(code) = write_file(io, p, &drawing) {
            return code;
        }
    }
    io.say(&report.summary());
    io.emit(&report);
    ExitCode::Success
}

fn gen(io: &mut Io<'_>, config: GenConfig, even: bool) -> ExitCode {
    let built = random_cubic(&config).and_then(|s| {
        if even {
            random_even_balancing(&s, &config)
        } else {
            random_balancing(&s, &config)
        }
    });
    match built {
        Ok(g) => {
            // the graph itself is the output, regardless of --json
            let _ = writeln!(io.out, "{}", serde_json::to_string_pretty(&g).expect("serializable"));
            ExitCode::Success
        }
        Err(e) => {
            let _ = writeln!(io.err, "error: {e}");
            ExitCode::Usage
        }
    }
}

#[derive(Serialize)]
struct AuditReport {
    schema_version: u32,
    ok: bool,
    vertex_count: usize,
    primitive_edges_checked: usize,
    cycles_checked: usize,
    failure: Option<String>,
}

fn audit(io: &mut Io<'_>, path: &Path) -> ExitCode {
    let g = match load_graph(io, path) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let mut report = AuditReport {
        schema_version: SCHEMA_VERSION,
        ok: true,
        vertex_count: g.vertex_count(),
        primitive_edges_checked: 0,
        cycles_checked: 0,
        failure: None,
    };
    let outcome = (|| -> Result<(), String> {
        g.primitive_degree_audit().map_err(|e| e.to_string())?;
        report.primitive_edges_checked = g.edge_inclusion_audit().map_err(|e| e.to_string())?;
        let m = g.census().minimum;
        if m.is_finite() && m > crate::dyadic::Val2::Finite(0) {
            for c in g.primitive_cycles().map_err(|e| e.to_string())? {
                let max = cycle_max_lattice(&g, &c).map_err(|e| e.to_string())?;
                if max.multiplicity().is_finite() {
                    cycle_audit(&g, &c, &max).map_err(|e| e.to_string())?;
                }
                report.cycles_checked += 1;
            }
        }
        Ok(())
    })();
    if let Err(msg) = outcome {
        report.ok = false;
        report.failure = Some(msg.clone());
        let _ = writeln!(io.err, "error: audit failed: {msg}");
        io.emit(&report);
        return ExitCode::Internal;
    }
    io.say(&format!(
        "ok: {} vertices, {} primitive edges, {} cycles audited",
        report.vertex_count, report.primitive_edges_checked, report.cycles_checked
    ));
    io.emit(&report);
    ExitCode::Success
}
