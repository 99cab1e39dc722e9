//! Command-line front end: `run` parses arguments, dispatches a subcommand
//! and returns the process exit code.
//!
//! Exit codes: 0 success or positive verdict, 1 negative verdict, 2
//! inconclusive (budget or size limit), 3 input error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use pvg_core::audit::{audit_embedding_with, AuditConfig};
use pvg_core::catalog::{build_catalog, Catalog, CATALOG_GRID};
use pvg_core::etr::{emit_etr, EtrOptions};
use pvg_core::gadget::build_gadget;
use pvg_core::hamilton::hamiltonian_cycle_report;
use pvg_core::io::{parse_graph, parse_points, write_graph, write_points};
use pvg_core::nc::{
    check_nc1, search_nc2, search_nc3, Nc1Report, Nc2Report, Nc3Report, NcConfig, SearchBudget, Verdict,
};
use pvg_core::planar::{classify, reconstruct, PlanarClass};
use pvg_core::search::{grid_search_embedding, GridOutcome};
use pvg_core::{build_pvg, Error, Graph, PointSet};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

/// Search budget when none is given.
pub const DEFAULT_TIME_LIMIT_SECS: f64 = 10.0;
pub const DEFAULT_NODE_LIMIT: u64 = 10_000_000;

#[derive(Debug, Parser)]
#[command(name = "pvg", version, about = "Point visibility graph toolkit")]
pub struct Cli {
    #[command(flatten)]
    pub opts: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Point file: one "x y" per line.
    #[arg(long, global = true, value_name = "FILE")]
    pub points: Option<PathBuf>,
    /// Graph file: header "n m", then one "u v" per edge.
    #[arg(long, global = true, value_name = "FILE")]
    pub graph: Option<PathBuf>,
    /// Output file or directory.
    #[arg(long, global = true, value_name = "FILE/DIR")]
    pub out: Option<PathBuf>,
    /// Grid size for search and catalog, e.g. 7x7.
    #[arg(long, global = true, value_name = "WxH", value_parser = parse_grid)]
    pub grid: Option<(u32, u32)>,
    /// Wall-clock budget for searches, in seconds.
    #[arg(long, global = true, value_name = "SECS")]
    pub time_limit: Option<f64>,
    /// Node budget for searches.
    #[arg(long, global = true, value_name = "N")]
    pub node_limit: Option<u64>,
    /// Worker threads.
    #[arg(long, global = true, value_name = "K", default_value_t = 1)]
    pub workers: usize,
    /// Seed for sampled checks.
    #[arg(long, global = true, value_name = "N", default_value_t = 0)]
    pub seed: u64,
    /// Machine-readable JSON on stdout.
    #[arg(long, global = true)]
    pub json: bool,
    /// Emit formulas exactly as printed in the source construction.
    #[arg(long, global = true)]
    pub paper_compat: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Points to visibility graph and blockers.
    Build,
    /// Graph to necessary-condition report.
    Check,
    /// Graph to planar class, with --out writing a realizing point set.
    Planar,
    /// Points to a Hamiltonian cycle of their visibility graph.
    Hamcycle,
    /// Points to the lemma audit report.
    Audit,
    /// Graph and grid to an embedding on that grid.
    Search,
    /// Graph to a visibility graph containing it as an induced subgraph.
    Gadget,
    /// Graph to an existential-theory-of-the-reals formula (.smt2).
    Etr,
    /// Grid to the catalog of particular planar visibility graphs.
    Catalog,
}

fn parse_grid(s: &str) -> std::result::Result<(u32, u32), String> {
    let (w, h) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected WxH, got {s:?}"))?;
    let dim = |t: &str| t.trim().parse::<u32>().map_err(|_| format!("bad grid dimension {t:?}"));
    let (w, h) = (dim(w)?, dim(h)?);
    if w == 0 || h == 0 {
        return Err("grid dimensions must be positive".into());
    }
    Ok((w, h))
}

/// A failed run: message for stderr and exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    msg: String,
}

type Run<T = i32> = std::result::Result<T, Failure>;

fn input_err(msg: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        msg: msg.into(),
    }
}

/// Library errors: size budgets are inconclusive, the rest are input errors.
fn lib_err(context: &str, e: Error) -> Failure {
    let code = match e {
        Error::Budget { .. } => EXIT_INCONCLUSIVE,
        _ => EXIT_INPUT,
    };
    Failure {
        code,
        msg: format!("{context}: {e}"),
    }
}

/// Runs the CLI on `argv` (program name first).
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let mut buf = Vec::new();
    let result = validate(&cli.opts).and_then(|()| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.opts.workers)
            .build()
            .map_err(|e| input_err(format!("worker pool: {e}")))?;
        pool.install(|| dispatch(&cli, &mut buf))
    });
    if let Err(e) = stdout.write_all(&buf).and_then(|()| stdout.flush()) {
        let _ = writeln!(stderr, "error: stdout: {e}");
        return EXIT_INPUT;
    }
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.msg);
            f.code
        }
    }
}

fn validate(o: &RunConfig) -> Run<()> {
    if o.workers == 0 {
        return Err(input_err("--workers must be at least 1"));
    }
    if let Some(t) = o.time_limit {
        if !(t.is_finite() && t > 0.0) {
            return Err(input_err("--time-limit must be positive"));
        }
    }
    if o.node_limit == Some(0) {
        return Err(input_err("--node-limit must be positive"));
    }
    for p in [&o.points, &o.graph].into_iter().flatten() {
        if !p.is_file() {
            return Err(input_err(format!("{}: no such file", p.display())));
        }
    }
    if let Some(out) = &o.out {
        if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
            if !parent.is_dir() {
                return Err(input_err(format!("{}: parent directory does not exist", out.display())));
            }
        }
    }
    Ok(())
}

fn dispatch(cli: &Cli, stdout: &mut Vec<u8>) -> Run {
    let o = &cli.opts;
    let mut out = Output { o, stdout };
    match cli.command {
        Command::Build => cmd_build(o, &mut out),
        Command::Check => cmd_check(o, &mut out),
        Command::Planar => cmd_planar(o, &mut out),
        Command::Hamcycle => cmd_hamcycle(o, &mut out),
        Command::Audit => cmd_audit(o, &mut out),
        Command::Search => cmd_search(o, &mut out),
        Command::Gadget => cmd_gadget(o, &mut out),
        Command::Etr => cmd_etr(o, &mut out),
        Command::Catalog => cmd_catalog(o, &mut out),
    }
}

struct Output<'a> {
    o: &'a RunConfig,
    stdout: &'a mut Vec<u8>,
}

impl Output<'_> {
    fn text(&mut self, s: &str) -> Run<()> {
        self.stdout.extend_from_slice(s.as_bytes());
        Ok(())
    }

    /// `--json` prints `value`; otherwise `text` is printed.
    fn report<T: Serialize>(&mut self, value: &T, text: impl FnOnce() -> String) -> Run<()> {
        if self.o.json {
            let s = serde_json::to_string_pretty(value).expect("report serializes");
            self.text(&(s + "\n"))
        } else {
            let t = text();
            self.text(&t)
        }
    }
}

fn read(path: &Path) -> Run<String> {
    fs::read_to_string(path).map_err(|e| input_err(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Run<()> {
    fs::write(path, contents).map_err(|e| input_err(format!("{}: {e}", path.display())))
}

fn load_points(o: &RunConfig) -> Run<PointSet> {
    let path = o
        .points
        .as_ref()
        .ok_or_else(|| input_err("--points FILE is required"))?;
    parse_points(&read(path)?).map_err(|e| lib_err(&path.display().to_string(), e))
}

fn load_graph(o: &RunConfig) -> Run<Graph> {
    let path = o.graph.as_ref().ok_or_else(|| input_err("--graph FILE is required"))?;
    parse_graph(&read(path)?).map_err(|e| lib_err(&path.display().to_string(), e))
}

fn budget(o: &RunConfig) -> SearchBudget {
    SearchBudget {
        node_limit: o.node_limit.unwrap_or(DEFAULT_NODE_LIMIT),
        time_limit: Some(Duration::from_secs_f64(o.time_limit.unwrap_or(DEFAULT_TIME_LIMIT_SECS))),
    }
}

fn join(vs: &[usize]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn cmd_build(o: &RunConfig, out: &mut Output) -> Run {
    let e = build_pvg(&load_points(o)?);
    if let Some(path) = &o.out {
        write_file(path, &write_graph(&e.graph))?;
    }
    out.report(&e, || write_graph(&e.graph))?;
    Ok(EXIT_OK)
}

/// NC1 and NC2 are evaluated independently; NC3 needs an NC2 assignment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub verdict: Verdict,
    pub nc1: Nc1Report,
    pub nc2: Nc2Report,
    pub nc3: Nc3Report,
}

fn cmd_check(o: &RunConfig, out: &mut Output) -> Run {
    let g = load_graph(o)?;
    if !g.is_connected() {
        out.text("verdict: refuted (graph is disconnected)\n")?;
        return Ok(EXIT_NEGATIVE);
    }
    let cfg = NcConfig {
        max_interior: None,
        budget: budget(o),
    };
    let ctx = "check";
    let nc1 = check_nc1(&g).map_err(|e| lib_err(ctx, e))?;
    let mut nc2 = search_nc2(&g, &cfg).map_err(|e| lib_err(ctx, e))?;
    let mut nc3 = if nc2.verdict == Verdict::Satisfied {
        search_nc3(&g, &cfg).map_err(|e| lib_err(ctx, e))?
    } else {
        Nc3Report {
            verdict: if nc2.verdict == Verdict::Refuted {
                Verdict::Refuted
            } else {
                Verdict::NotAttempted
            },
            assignment: None,
            ordering: None,
            failing_vertex: None,
            stats: Default::default(),
        }
    };
    nc2.stats.elapsed_ms = 0;
    nc3.stats.elapsed_ms = 0;
    let all = [nc1.verdict, nc2.verdict, nc3.verdict];
    let verdict = if all.contains(&Verdict::Refuted) {
        Verdict::Refuted
    } else if all.contains(&Verdict::Inconclusive) {
        Verdict::Inconclusive
    } else {
        Verdict::Satisfied
    };
    let report = CheckReport { verdict, nc1, nc2, nc3 };
    out.report(&report, || check_text(&report))?;
    Ok(match verdict {
        Verdict::Refuted => EXIT_NEGATIVE,
        Verdict::Inconclusive | Verdict::NotAttempted => EXIT_INCONCLUSIVE,
        Verdict::Satisfied => EXIT_OK,
    })
}

fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::Satisfied => "satisfied",
        Verdict::Refuted => "refuted",
        Verdict::Inconclusive => "inconclusive",
        Verdict::NotAttempted => "not attempted",
    }
}

fn check_text(r: &CheckReport) -> String {
    let mut s = format!("verdict: {}\n", verdict_word(r.verdict));
    s += &format!("NC1: {}", verdict_word(r.nc1.verdict));
    if let Some(v) = &r.nc1.violation {
        s += &format!("  witness={}", json(v));
    }
    s += &format!("\nNC2: {} ({} nodes)", verdict_word(r.nc2.verdict), r.nc2.stats.nodes);
    if let Some(v) = &r.nc2.conflict {
        s += &format!("  witness={}", json(v));
    }
    if let Some(a) = &r.nc2.assignment {
        s += &format!("\n  assignment: {}", chains_text(a));
    }
    s += &format!("\nNC3: {} ({} nodes)", verdict_word(r.nc3.verdict), r.nc3.stats.nodes);
    if let Some(v) = r.nc3.failing_vertex {
        s += &format!("  failing vertex {v}");
    }
    s + "\n"
}

fn chains_text(a: &pvg_core::nc::BlockerAssignment) -> String {
    let parts: Vec<String> = a
        .chains()
        .map(|c| format!("{}-{}:[{}]", c.pair.0, c.pair.1, join(&c.interior)))
        .collect();
    parts.join(" ")
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializes")
}

fn cmd_planar(o: &RunConfig, out: &mut Output) -> Run {
    let g = load_graph(o)?;
    let class = classify(&g);
    if let Some(path) = &o.out {
        if let Some(e) = reconstruct(&class) {
            write_file(path, &write_points(&e.points))?;
        }
    }
    out.report(&class, || planar_text(&class))?;
    Ok(if class.is_planar_pvg() { EXIT_OK } else { EXIT_NEGATIVE })
}

fn planar_text(c: &PlanarClass) -> String {
    let mut s = c.summary() + "\n";
    match c {
        PlanarClass::FamilyA { path, .. }
        | PlanarClass::FamilyB { path, .. }
        | PlanarClass::FamilyC { path, .. }
        | PlanarClass::FamilyD { path, .. }
        | PlanarClass::FamilyE { path, .. }
        | PlanarClass::FamilyF { path, .. } => s += &format!("path: {}\n", join(path)),
        PlanarClass::Particular { bijection, .. } => s += &format!("bijection: {}\n", join(bijection)),
        PlanarClass::NotPlanarPVG { .. } => {}
    }
    s
}

fn cmd_hamcycle(o: &RunConfig, out: &mut Output) -> Run {
    let e = build_pvg(&load_points(o)?);
    match hamiltonian_cycle_report(&e) {
        Ok(r) => {
            out.report(&r, || format!("{}\n", join(&r.cycle)))?;
            Ok(EXIT_OK)
        }
        Err(Error::PathGraph) => {
            out.text("no Hamiltonian cycle: the points are collinear\n")?;
            Ok(EXIT_NEGATIVE)
        }
        Err(e) => Err(lib_err("hamcycle", e)),
    }
}

fn cmd_audit(o: &RunConfig, out: &mut Output) -> Run {
    let e = build_pvg(&load_points(o)?);
    let cfg = AuditConfig {
        seed: o.seed,
        ..AuditConfig::default()
    };
    let r = audit_embedding_with(&e, &cfg);
    out.report(&r, || r.to_text())?;
    Ok(if r.passed() { EXIT_OK } else { EXIT_NEGATIVE })
}

fn cmd_search(o: &RunConfig, out: &mut Output) -> Run {
    let g = load_graph(o)?;
    let (w, h) = o.grid.ok_or_else(|| input_err("--grid WxH is required"))?;
    let mut r = grid_search_embedding(&g, w, h, &budget(o)).map_err(|e| lib_err("search", e))?;
    r.elapsed_ms = 0;
    if let (Some(path), Some(e)) = (&o.out, r.embedding()) {
        write_file(path, &write_points(&e.points))?;
    }
    out.report(&r, || match &r.outcome {
        GridOutcome::Found { embedding } => write_points(&embedding.points),
        GridOutcome::Exhausted => format!("no embedding on the {w}x{h} grid ({} nodes)\n", r.nodes),
        GridOutcome::Timeout => format!("budget exhausted after {} nodes\n", r.nodes),
    })?;
    Ok(match r.outcome {
        GridOutcome::Found { .. } => EXIT_OK,
        GridOutcome::Exhausted => EXIT_NEGATIVE,
        GridOutcome::Timeout => EXIT_INCONCLUSIVE,
    })
}

/// `manifest.json` written next to the gadget graph and points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetManifest {
    pub base_n: usize,
    pub x: usize,
    pub n: usize,
    pub m: usize,
    pub denominator: i64,
    pub injection: Vec<usize>,
    pub blocked_pairs: Vec<(usize, usize)>,
    pub graph_file: String,
    pub points_file: String,
}

fn cmd_gadget(o: &RunConfig, out: &mut Output) -> Run {
    let g = load_graph(o)?;
    let dir = o.out.as_ref().ok_or_else(|| input_err("--out DIR is required"))?;
    let gd = build_gadget(&g).map_err(|e| lib_err("gadget", e))?;
    fs::create_dir_all(dir).map_err(|e| input_err(format!("{}: {e}", dir.display())))?;
    let m = GadgetManifest {
        base_n: g.n(),
        x: gd.x,
        n: gd.graph.n(),
        m: gd.graph.m(),
        denominator: gd.denominator,
        injection: gd.injection.clone(),
        blocked_pairs: gd.blocked_pairs.clone(),
        graph_file: "gadget.graph".into(),
        points_file: "gadget.points".into(),
    };
    write_file(&dir.join(&m.graph_file), &write_graph(&gd.graph))?;
    write_file(&dir.join(&m.points_file), &write_points(&gd.embedding.points))?;
    let json = serde_json::to_string_pretty(&m).expect("manifest serializes") + "\n";
    write_file(&dir.join("manifest.json"), &json)?;
    out.report(&m, || {
        format!(
            "gadget: base n={} plus x={} blockers, {} vertices, {} edges, denominator {}\n",
            m.base_n, m.x, m.n, m.m, m.denominator
        )
    })?;
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EtrSummary {
    pub n: usize,
    pub t_vars: usize,
    pub atoms: usize,
    pub paper_compat: bool,
    pub smtlib: String,
}

fn cmd_etr(o: &RunConfig, out: &mut Output) -> Run {
    let g = load_graph(o)?;
    let f = emit_etr(
        &g,
        EtrOptions {
            paper_compat: o.paper_compat,
        },
    );
    let smt = f.to_smtlib();
    if let Some(path) = &o.out {
        write_file(path, &smt)?;
    }
    let summary = EtrSummary {
        n: f.n,
        t_vars: f.t_count(),
        atoms: f.atom_count(),
        paper_compat: o.paper_compat,
        smtlib: smt,
    };
    out.report(&summary, || {
        if o.out.is_some() {
            format!(
                "etr: n={} t-variables={} atoms={}\n",
                summary.n, summary.t_vars, summary.atoms
            )
        } else {
            summary.smtlib.clone()
        }
    })?;
    Ok(EXIT_OK)
}

fn cmd_catalog(o: &RunConfig, out: &mut Output) -> Run {
    let dir = o.out.as_ref().ok_or_else(|| input_err("--out DIR is required"))?;
    let (w, h) = o.grid.unwrap_or((CATALOG_GRID.0 as u32, CATALOG_GRID.1 as u32));
    let limit = o.time_limit.map(Duration::from_secs_f64);
    let run = build_catalog(w as usize, h as usize, &[6, 7], limit).map_err(|e| lib_err("catalog", e))?;
    run.catalog
        .write_dir(dir, run.grid)
        .map_err(|e| lib_err("catalog", e))?;
    if o.json {
        out.text(&read(&dir.join("manifest.json"))?)?;
    } else {
        out.text(&catalog_text(&run.catalog, run.grid, run.complete))?;
    }
    Ok(if run.complete { EXIT_OK } else { EXIT_INCONCLUSIVE })
}

fn catalog_text(c: &Catalog, grid: (usize, usize), complete: bool) -> String {
    let mut s = format!(
        "catalog on {}x{}: {} particular graphs{}\n",
        grid.0,
        grid.1,
        c.len(),
        if complete { "" } else { " (time limit reached, partial)" }
    );
    for e in c.entries() {
        s += &format!(
            "#{} n={} m={} canonical={}{}\n",
            e.id,
            e.graph.n(),
            e.graph.m(),
            e.canonical.to_hex(),
            e.coincides_with
                .map(|f| format!(" coincides with {f:?}"))
                .unwrap_or_default()
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_values() {
        assert_eq!(parse_grid("7x5"), Ok((7, 5)));
        assert_eq!(parse_grid("3X3"), Ok((3, 3)));
        assert!(parse_grid("0x3").is_err());
        assert!(parse_grid("7").is_err());
        assert!(parse_grid("ax3").is_err());
    }

    #[test]
    fn usage_errors_are_input_errors() {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        assert_eq!(run(["pvg", "frobnicate"], &mut o, &mut e), EXIT_INPUT);
        assert_eq!(run(["pvg", "build"], &mut o, &mut e), EXIT_INPUT);
        assert_eq!(run(["pvg", "--workers", "0", "build"], &mut o, &mut e), EXIT_INPUT);
        assert_eq!(run(["pvg", "--help"], &mut o, &mut e), EXIT_OK);
    }
}
