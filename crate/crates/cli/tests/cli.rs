use std::fs;
use std::path::Path;
use std::process::Command;

use pvg_cli::{CheckReport, EtrSummary, GadgetManifest, EXIT_INCONCLUSIVE, EXIT_INPUT, EXIT_NEGATIVE, EXIT_OK};
use pvg_core::audit::AuditReport;
use pvg_core::catalog::Catalog;
use pvg_core::fixtures;
use pvg_core::gadget::with_universal_vertices;
use pvg_core::graph::Graph;
use pvg_core::hamilton::{is_hamiltonian_cycle, HamiltonReport};
use pvg_core::io::{parse_graph, parse_points, write_graph, write_points};
use pvg_core::nc::{Nc2Violation, Verdict};
use pvg_core::planar::PlanarClass;
use pvg_core::search::GridSearchReport;
use pvg_core::{build_pvg, Embedding, PointSet};
use tempfile::TempDir;

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn pvg(args: &[&str]) -> Out {
    let o = Command::new(env!("CARGO_BIN_EXE_pvg"))
        .args(args)
        .output()
        .expect("binary runs");
    Out {
        code: o.status.code().expect("exit code"),
        stdout: String::from_utf8(o.stdout).unwrap(),
        stderr: String::from_utf8(o.stderr).unwrap(),
    }
}

fn file(dir: &TempDir, name: &str, contents: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, contents).unwrap();
    p.to_str().unwrap().to_string()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

fn grid_points() -> PointSet {
    let c: Vec<(i64, i64)> = (0..3).flat_map(|y| (0..3).map(move |x| (x, y))).collect();
    PointSet::from_coords(&c).unwrap()
}

#[test]
fn build_outputs_reparse() {
    let d = TempDir::new().unwrap();
    let ps = grid_points();
    let pts = file(&d, "grid.points", &write_points(&ps));
    let out = path(&d, "grid.graph");
    let r = pvg(&["build", "--points", &pts, "--out", &out]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    let e = build_pvg(&ps);
    assert_eq!(parse_graph(&r.stdout).unwrap(), e.graph);
    assert_eq!(fs::read_to_string(&out).unwrap(), r.stdout);

    let j = pvg(&["build", "--points", &pts, "--json"]);
    let back: Embedding = serde_json::from_str(&j.stdout).unwrap();
    assert_eq!(back, e);
}

#[test]
fn planar_on_path_is_family_a() {
    let d = TempDir::new().unwrap();
    let g = file(&d, "p10.graph", &write_graph(&Graph::path(10)));
    let out = path(&d, "p10.points");
    let r = pvg(&["planar", "--graph", &g, "--out", &out]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.stdout.starts_with("FamilyA(n=10)"), "{}", r.stdout);
    let ps = parse_points(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(build_pvg(&ps).graph, Graph::path(10));

    let j = pvg(&["planar", "--graph", &g, "--json"]);
    let c: PlanarClass = serde_json::from_str(&j.stdout).unwrap();
    assert!(matches!(c, PlanarClass::FamilyA { n: 10, .. }));

    let k5 = file(&d, "k5.graph", &write_graph(&Graph::complete(5)));
    let r = pvg(&["planar", "--graph", &k5]);
    assert_eq!(r.code, EXIT_NEGATIVE);
    assert!(r.stdout.starts_with("NotPlanarPVG"));
}

#[test]
fn check_reports_nc2_item_two_witness() {
    let d = TempDir::new().unwrap();
    let g = file(&d, "p5c.graph", &write_graph(&fixtures::p5_chord()));
    let r = pvg(&["check", "--graph", &g]);
    assert_eq!(r.code, EXIT_NEGATIVE);
    assert!(r.stdout.contains("NC2: refuted"), "{}", r.stdout);
    let j = pvg(&["check", "--graph", &g, "--json"]);
    let rep: CheckReport = serde_json::from_str(&j.stdout).unwrap();
    assert_eq!(rep.verdict, Verdict::Refuted);
    assert_eq!(rep.nc2.verdict, Verdict::Refuted);
    assert!(matches!(
        rep.nc2.conflict,
        Some(Nc2Violation::OverlapNotStraight { .. })
    ));
}

#[test]
fn check_on_the_thirteen_vertex_pair() {
    let d = TempDir::new().unwrap();
    let g = file(&d, "g.graph", &write_graph(&fixtures::g_embedding().graph));
    let r = pvg(&["check", "--graph", &g, "--json"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    let rep: CheckReport = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(
        [rep.nc1.verdict, rep.nc2.verdict, rep.nc3.verdict],
        [Verdict::Satisfied; 3]
    );

    let gp = file(&d, "gp.graph", &write_graph(&fixtures::g_prime()));
    let r = pvg(&["check", "--graph", &gp, "--json"]);
    assert_eq!(r.code, EXIT_NEGATIVE);
    let rep: CheckReport = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(
        [rep.nc1.verdict, rep.nc2.verdict, rep.nc3.verdict],
        [Verdict::Satisfied, Verdict::Satisfied, Verdict::Refuted]
    );

    let r = pvg(&["check", "--graph", &gp, "--node-limit", "5"]);
    assert_eq!(r.code, EXIT_INCONCLUSIVE, "{}", r.stdout);
}

#[test]
fn etr_on_triangle_and_determinism() {
    let d = TempDir::new().unwrap();
    let g = file(&d, "k3.graph", &write_graph(&Graph::complete(3)));
    let (a, b) = (path(&d, "a.smt2"), path(&d, "b.smt2"));
    assert_eq!(pvg(&["etr", "--graph", &g, "--out", &a]).code, EXIT_OK);
    assert_eq!(
        pvg(&["etr", "--graph", &g, "--out", &b, "--workers", "3"]).code,
        EXIT_OK
    );
    let smt = fs::read_to_string(&a).unwrap();
    assert_eq!(smt, fs::read_to_string(&b).unwrap());
    assert_eq!(smt.matches("(declare-const t_").count(), 3);

    let j = pvg(&["etr", "--graph", &g, "--json", "--paper-compat"]);
    let s: EtrSummary = serde_json::from_str(&j.stdout).unwrap();
    assert_eq!((s.n, s.t_vars, s.paper_compat), (3, 3, true));
    assert_eq!(s.smtlib.matches("(declare-const t_").count(), 3);
}

#[test]
fn hamcycle_and_audit() {
    let d = TempDir::new().unwrap();
    let ps = grid_points();
    let pts = file(&d, "grid.points", &write_points(&ps));
    let g = build_pvg(&ps).graph;

    let r = pvg(&["hamcycle", "--points", &pts]);
    assert_eq!(r.code, EXIT_OK);
    let cycle: Vec<usize> = r.stdout.split_whitespace().map(|t| t.parse().unwrap()).collect();
    assert!(is_hamiltonian_cycle(&g, &cycle));
    let j = pvg(&["hamcycle", "--points", &pts, "--json"]);
    let rep: HamiltonReport = serde_json::from_str(&j.stdout).unwrap();
    assert_eq!(rep.cycle, cycle);

    let line = file(&d, "line.points", "0 0\n1 1\n2 2\n");
    assert_eq!(pvg(&["hamcycle", "--points", &line]).code, EXIT_NEGATIVE);

    let r = pvg(&["audit", "--points", &pts, "--json", "--seed", "7"]);
    assert_eq!(r.code, EXIT_OK);
    let rep: AuditReport = serde_json::from_str(&r.stdout).unwrap();
    assert!(rep.passed());
    assert_eq!(
        pvg(&["audit", "--points", &pts, "--json", "--seed", "7"]).stdout,
        r.stdout
    );
}

#[test]
fn search_outcomes() {
    let d = TempDir::new().unwrap();
    let c5 = file(&d, "c5.graph", &write_graph(&Graph::cycle(5)));
    assert_eq!(pvg(&["search", "--graph", &c5, "--grid", "4x4"]).code, EXIT_NEGATIVE);
    assert_eq!(
        pvg(&["search", "--graph", &c5, "--grid", "8x8", "--node-limit", "3"]).code,
        EXIT_INCONCLUSIVE
    );
    assert_eq!(pvg(&["search", "--graph", &c5]).code, EXIT_INPUT);

    let k4 = Graph::complete(4);
    let g = file(&d, "k4.graph", &write_graph(&k4));
    let out = path(&d, "k4.points");
    let r = pvg(&["search", "--graph", &g, "--grid", "2x2", "--out", &out]);
    assert_eq!(r.code, EXIT_OK);
    let ps = parse_points(&r.stdout).unwrap();
    assert_eq!(build_pvg(&ps).graph, k4);
    assert_eq!(fs::read_to_string(&out).unwrap(), r.stdout);
    let j = pvg(&["search", "--graph", &g, "--grid", "2x2", "--json"]);
    let rep: GridSearchReport = serde_json::from_str(&j.stdout).unwrap();
    assert_eq!(rep.embedding().unwrap().graph, k4);
}

#[test]
fn gadget_files() {
    let d = TempDir::new().unwrap();
    let c5 = Graph::cycle(5);
    let g = file(&d, "c5.graph", &write_graph(&c5));
    let dir = path(&d, "gadget");
    let r = pvg(&["gadget", "--graph", &g, "--out", &dir, "--json"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    let m: GadgetManifest = serde_json::from_str(&r.stdout).unwrap();
    let on_disk: GadgetManifest =
        serde_json::from_str(&fs::read_to_string(Path::new(&dir).join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m, on_disk);
    assert_eq!(m.x, 5);
    let gg = parse_graph(&fs::read_to_string(Path::new(&dir).join(&m.graph_file)).unwrap()).unwrap();
    let ps = parse_points(&fs::read_to_string(Path::new(&dir).join(&m.points_file)).unwrap()).unwrap();
    assert_eq!(gg, with_universal_vertices(&c5, 5));
    assert_eq!(build_pvg(&ps).graph, gg);

    let big = file(&d, "e13.graph", &write_graph(&Graph::empty(13)));
    assert_eq!(pvg(&["gadget", "--graph", &big, "--out", &dir]).code, EXIT_INCONCLUSIVE);
}

#[test]
fn catalog_is_deterministic_across_workers() {
    let d = TempDir::new().unwrap();
    let (a, b) = (path(&d, "a"), path(&d, "b"));
    let r = pvg(&["catalog", "--out", &a, "--workers", "1"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    assert!(r.stdout.starts_with("catalog on 7x7: 5 particular graphs"));
    assert_eq!(pvg(&["catalog", "--out", &b, "--workers", "2"]).code, EXIT_OK);
    for f in fs::read_dir(&a).unwrap() {
        let name = f.unwrap().file_name();
        assert_eq!(
            fs::read(Path::new(&a).join(&name)).unwrap(),
            fs::read(Path::new(&b).join(&name)).unwrap()
        );
    }
    let (cat, grid) = Catalog::read_dir(Path::new(&a)).unwrap();
    assert_eq!((cat.count_with_n(6), cat.count_with_n(7), grid), (3, 2, (7, 7)));
}

#[test]
fn input_errors() {
    let d = TempDir::new().unwrap();
    let bad = file(&d, "bad.graph", "3 2\n0 1\n# fine\n2 1\n");
    let r = pvg(&["planar", "--graph", &bad]);
    assert_eq!(r.code, EXIT_INPUT);
    assert!(r.stderr.contains("line 4"), "{}", r.stderr);

    let dup = file(&d, "dup.points", "0 0\n1 1\n0 0\n");
    let r = pvg(&["build", "--points", &dup]);
    assert_eq!(r.code, EXIT_INPUT);
    assert!(r.stderr.contains("line 3"), "{}", r.stderr);

    assert_eq!(pvg(&["build", "--points", &path(&d, "missing")]).code, EXIT_INPUT);
    assert_eq!(
        pvg(&["etr", "--graph", &bad, "--out", "/nonexistent/x.smt2"]).code,
        EXIT_INPUT
    );
    assert_eq!(pvg(&["check", "--time-limit", "0", "--graph", &bad]).code, EXIT_INPUT);
    assert_eq!(pvg(&["nonsense"]).code, EXIT_INPUT);
    assert_eq!(pvg(&["--help"]).code, EXIT_OK);
}
