use std::fs;
use std::process::{Command, Output};

use tevtrop::construction::{reference_point, verify_solution};
use tevtrop::io::cover_from_json;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tevtrop")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn tev_text_reports_the_degree() {
    let o = run(&["tev", "3"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("total 8"), "{s}");
    assert!(s.contains("Tev_3 = 8"), "{s}");
}

#[test]
fn tev_csv_has_one_row_per_solution() {
    let o = run(&["tev", "3", "--format", "csv"]);
    assert!(o.status.success());
    let s = stdout(&o);
    let rows: Vec<&str> = s.lines().collect();
    assert_eq!(rows.len(), 9);
    assert!(rows[0].starts_with("tag,word,j"));
    assert!(rows[1..].iter().all(|r| r.ends_with(",1")));
}

#[test]
fn tev_json_sequential_matches() {
    let par: serde_json::Value = serde_json::from_slice(&run(&["tev", "2", "--format", "json"]).stdout).unwrap();
    let seq: serde_json::Value =
        serde_json::from_slice(&run(&["tev", "2", "--format", "json", "--sequential"]).stdout).unwrap();
    assert_eq!(par["certificates"], seq["certificates"]);
    assert_eq!(par["certificates"].as_array().unwrap().len(), 4);
}

#[test]
fn genus_zero_is_a_usage_error() {
    assert_eq!(run(&["tev", "0"]).status.code(), Some(2));
}

#[test]
fn solutions_json_roundtrip_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g2");
    let o = run(&["solutions", "2", "--format", "json", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let mut files: Vec<_> = fs::read_dir(&out).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    assert_eq!(files.len(), 4);
    let p = reference_point(2);
    for f in files {
        let c = cover_from_json(&fs::read_to_string(&f).unwrap()).unwrap();
        verify_solution(&c, &p).unwrap_or_else(|e| panic!("{}: {e}", f.display()));
    }
}

#[test]
fn solutions_dot_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["solutions", "1", "--format", "dot", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    for j in 1..=2 {
        let dot = fs::read_to_string(dir.path().join(format!("tev_g1_w_j{j}.dot"))).unwrap();
        assert!(dot.contains("cluster_source") && dot.contains("cluster_target"));
    }
}

#[test]
fn verify_passes_and_detects_faults() {
    let ok = run(&["verify", "2"]);
    assert!(ok.status.success());
    assert!(stdout(&ok).contains("all checks passed"));
    let bad = run(&["verify", "2", "--inject-fault"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("FAIL"));
}

#[test]
fn base_below_floor_is_rejected() {
    let o = run(&["verify", "1", "--base", "5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("must exceed"));
}

#[test]
fn paths_csv_matches_binomials() {
    let o = run(&["paths", "7", "--format", "csv"]);
    assert!(o.status.success());
    for line in stdout(&o).lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f[3], f[4], "{line}");
    }
}

#[test]
fn matrix_determinant_and_bad_word() {
    let o = run(&["matrix", "2", "U", "2"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("|det| = 4"));
    assert_eq!(run(&["matrix", "2", "UU", "1"]).status.code(), Some(1));
}

#[test]
fn output_file_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("nested").join("paths.txt");
    let o = run(&["paths", "5", "--out", f.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(fs::read_to_string(f).unwrap().contains("weighted total 16"));
}
