use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn navtree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_navtree")).args(args).env("STRUCT_LOG", "error").output().expect("binary runs")
}

fn fixtures_in(dir: &Path) {
    let out = navtree(&["fixture", "--out", dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn extract_corridor() {
    let dir = tempfile::tempdir().unwrap();
    fixtures_in(dir.path());
    let out_dir = p(dir.path(), "out");
    let out = navtree(&[
        "extract",
        "--surface",
        &p(dir.path(), "corridor.obj"),
        "--blockers",
        &p(dir.path(), "corridor_blockers.obj"),
        "--out",
        &out_dir,
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let table = String::from_utf8(out.stdout).unwrap();
    let row: Vec<&str> = table.lines().nth(1).unwrap().split_whitespace().collect();
    // experiment, s1 t N E, s2 t N, s3 t N E, s4 t, s5 t N E, total
    assert_eq!(row[0], "corridor");
    assert_eq!((row[2], row[3], row[5]), ("12", "11", "2"));
    assert_eq!((row[11], row[12]), ("3", "2"));
    for name in ["structure.json", "structure.dot", "overlay.obj", "report.json", "report.txt"] {
        assert!(Path::new(&out_dir).join(name).exists(), "{name} missing");
    }
}

#[test]
fn extract_hub_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    fixtures_in(dir.path());
    let mut docs = Vec::new();
    for run in ["a", "b"] {
        let out_dir = p(dir.path(), run);
        let out = navtree(&[
            "extract",
            "--surface",
            &p(dir.path(), "hub.obj"),
            "--blockers",
            &p(dir.path(), "hub_blockers.obj"),
            "--out",
            &out_dir,
            "--format",
            "json",
        ]);
        assert!(out.status.success());
        docs.push(fs::read(Path::new(&out_dir).join("structure.json")).unwrap());
    }
    assert_eq!(docs[0], docs[1]);
}

#[test]
fn analyze_graph_input() {
    let dir = tempfile::tempdir().unwrap();
    fixtures_in(dir.path());
    let out_dir = p(dir.path(), "out");
    let out = navtree(&[
        "analyze",
        "--graph",
        &p(dir.path(), "comb_graph.json"),
        "--terminals",
        "leaves",
        "--out",
        &out_dir,
        "--format",
        "dot,obj",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(Path::new(&out_dir).join("report.json")).unwrap()).unwrap();
    assert_eq!(report["stages"]["terminals"], 24);
    assert!(report["density"]["nodes"].as_array().unwrap().len() > 24);
    assert!(!Path::new(&out_dir).join("structure.json").exists());
}

#[test]
fn config_file_with_command_line_override() {
    let dir = tempfile::tempdir().unwrap();
    fixtures_in(dir.path());
    let cfg = p(dir.path(), "run.cfg");
    fs::write(
        &cfg,
        format!(
            "# corridor with offset exits\nsurface = {}\nblockers = {}\nexit-offset = 0.5\nname = from-file\n",
            p(dir.path(), "corridor.obj"),
            p(dir.path(), "corridor_blockers.obj")
        ),
    )
    .unwrap();
    let out = navtree(&["extract", "--config", &cfg, "--out", &p(dir.path(), "o1")]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let row = String::from_utf8(out.stdout).unwrap().lines().nth(1).unwrap().to_string();
    let cols: Vec<&str> = row.split_whitespace().collect();
    assert_eq!((cols[0], cols[11], cols[12]), ("from-file", "5", "4"));

    let out = navtree(&["extract", "--config", &cfg, "--exit-offset", "0", "--out", &p(dir.path(), "o2")]);
    let row = String::from_utf8(out.stdout).unwrap().lines().nth(1).unwrap().to_string();
    let cols: Vec<&str> = row.split_whitespace().collect();
    assert_eq!((cols[11], cols[12]), ("3", "2"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    fixtures_in(dir.path());
    let od = p(dir.path(), "out");
    let corridor = p(dir.path(), "corridor.obj");
    let graph = p(dir.path(), "comb_graph.json");

    let both = navtree(&["extract", "--surface", &corridor, "--graph", &graph, "--out", &od]);
    assert_eq!(both.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&both.stderr).contains("not both"));

    let missing = navtree(&["extract", "--surface", &p(dir.path(), "nope.obj"), "--out", &od]);
    assert_eq!(missing.status.code(), Some(4));

    let bad_flag = navtree(&["extract", "--surface", &corridor, "--out", &od, "--interval", "-1"]);
    assert_eq!(bad_flag.status.code(), Some(2));

    let unknown = navtree(&["extract", "--surface", &corridor, "--out", &od, "--terminals", "everything"]);
    assert_eq!(unknown.status.code(), Some(2));

    let split = p(dir.path(), "split.json");
    fs::write(
        &split,
        r#"{"nodes":[{"pos":[0,0,0]},{"pos":[1,0,0]},{"pos":[5,0,0]},{"pos":[6,0,0]}],"edges":[[0,1,1.0],[2,3,1.0]]}"#,
    )
    .unwrap();
    let disconnected = navtree(&["extract", "--graph", &split, "--terminals", "leaves", "--out", &od]);
    assert_eq!(disconnected.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&disconnected.stderr).contains("steiner_tree"));

    let missing_config = navtree(&["extract", "--config", &p(dir.path(), "none.cfg"), "--out", &od]);
    assert_ne!(missing_config.status.code(), Some(0));
}

#[test]
fn log_level_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    fixtures_in(dir.path());
    let out = Command::new(env!("CARGO_BIN_EXE_navtree"))
        .args(["extract", "--surface", &p(dir.path(), "l_corridor.obj"), "--out", &p(dir.path(), "o")])
        .env("STRUCT_LOG", "info")
        .output()
        .unwrap();
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("no blocker geometry"), "{err}");
    assert!(err.contains("steiner_tree done"), "{err}");
}

#[test]
fn oracle_and_bench_subcommands() {
    let out = navtree(&["oracle", "--cases", "5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() >= 7);
    assert!(text.lines().all(|l| l.contains("PASS")));

    let out = navtree(&["bench", "--runs", "1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("experiment")).count(), 4);
}
