//! End-to-end runs of the `ndi` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn data(file: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/data")
        .join(file)
}

fn ndi<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_ndi"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn cycle(n: usize) -> String {
    (0..n).map(|i| format!("{} {}\n", i, (i + 1) % n)).collect()
}

fn complete(n: usize) -> String {
    let mut s = String::new();
    for i in 0..n {
        for j in i + 1..n {
            s += &format!("{i} {j}\n");
        }
    }
    s
}

fn svg_circles(doc: &roxmltree::Document) -> usize {
    doc.descendants()
        .filter(|n| n.has_tag_name("circle"))
        .count()
}

fn has_class(doc: &roxmltree::Document, class: &str) -> bool {
    doc.descendants().any(|n| {
        n.attribute("class")
            .is_some_and(|c| c.split(' ').any(|x| x == class))
    })
}

#[test]
fn karate_report() {
    let json = stdout_json(&ndi([Path::new("ndi"), &data("karate.txt")]));
    let ndi = json["network"]["ndi"].as_f64().unwrap();
    assert!((ndi - 1.1966).abs() < 5e-4, "{ndi}");
    assert_eq!(json["network"]["n"], 34);
    assert_eq!(json["network"]["edges"], 78);
    assert_eq!(json["network"]["degenerate"], false);
    assert_eq!(json["nodes"].as_array().unwrap().len(), 34);
    let dissimilar = json["nodes"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|n| n["category"] == "dissimilar")
        .count();
    assert_eq!(json["network"]["dissimilar_count"], dissimilar);
}

#[test]
fn cycle_is_degenerate() {
    let dir = TempDir::new().unwrap();
    let c6 = write(&dir, "c6.txt", &cycle(6));
    let json = stdout_json(&ndi([Path::new("ndi"), &c6]));
    assert_eq!(json["network"]["ndi"].as_f64(), Some(1.0));
    assert_eq!(json["network"]["degenerate"], true);
    assert_eq!(json["network"]["dissimilar_count"], 0);
}

#[test]
fn disconnected_input_exits_one() {
    let dir = TempDir::new().unwrap();
    let two = write(&dir, "two.txt", "a b\nb c\nc a\nx y\n");
    let out = ndi([Path::new("ndi"), &two]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("graph has 2 components"));
    assert!(out.stdout.is_empty());

    for cmd in ["nsi", "centrality"] {
        let out = ndi([Path::new(cmd), &two]);
        assert_eq!(out.status.code(), Some(1), "{cmd}");
    }

    let json = stdout_json(&ndi([Path::new("ndi"), &two, Path::new("--lcc")]));
    assert_eq!(json["network"]["n"], 3);
}

#[test]
fn input_errors_exit_one() {
    let out = ndi(["ndi", "/nonexistent/edges.txt"]);
    assert_eq!(out.status.code(), Some(1));
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.txt", "a b\nlonely\n");
    let out = ndi([Path::new("ndi"), &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    assert_eq!(
        ndi(["ndi", "--convention", "median", "x.txt"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(ndi(["frobnicate"]).status.code(), Some(1));
    assert_eq!(ndi(["--help"]).status.code(), Some(0));
}

#[test]
fn output_is_deterministic() {
    let karate = data("karate.txt");
    for format in ["json", "csv"] {
        let run = || {
            ndi([
                Path::new("ndi"),
                &karate,
                Path::new("--format"),
                Path::new(format),
            ])
        };
        let (a, b) = (run(), run());
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{format}");
    }
    let dir = TempDir::new().unwrap();
    let manifest = write(
        &dir,
        "manifest.csv",
        &format!(
            "name,path\nkarate,{}\nlesmis,{}\n",
            data("karate.txt").display(),
            data("lesmis.txt").display()
        ),
    );
    let run = || {
        ndi([
            Path::new("batch"),
            &manifest,
            Path::new("--format"),
            Path::new("csv"),
        ])
    };
    assert_eq!(run().stdout, run().stdout);
}

#[test]
fn csv_formats() {
    let out = ndi([
        Path::new("ndi"),
        &data("karate.txt"),
        Path::new("--format"),
        Path::new("csv"),
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("node,deg,evc,bwc,clc,node_ndi,rank,category")
    );
    assert_eq!(lines.count(), 34);

    let out = ndi([
        Path::new("centrality"),
        &data("karate.txt"),
        Path::new("--format"),
        Path::new("csv"),
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("node,deg,evc,bwc,clc\n"));
    assert_eq!(text.lines().count(), 35);

    let out = ndi([
        Path::new("nsi"),
        &data("karate.txt"),
        Path::new("--format"),
        Path::new("csv"),
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("min_threshold,nsi,method\n"));
}

#[test]
fn precision_flag() {
    let get = |p: &str| {
        let json = stdout_json(&ndi([
            Path::new("ndi"),
            &data("karate.txt"),
            Path::new("--precision"),
            Path::new(p),
        ]));
        json["network"]["ndi"].to_string()
    };
    assert_eq!(get("3"), "1.2");
    assert_eq!(get("6"), "1.19664");
    assert!(get("0").len() > 10);
}

#[test]
fn nsi_methods_agree() {
    let run = |method: &str| {
        let json = stdout_json(&ndi([
            Path::new("nsi"),
            &data("karate.txt"),
            Path::new("--method"),
            Path::new(method),
            Path::new("--precision"),
            Path::new("0"),
        ]));
        json["min_threshold"].as_f64().unwrap()
    };
    let (mst, search) = (run("mst"), run("bsearch"));
    assert!(search >= mst && search - mst <= 1e-6);
}

#[test]
fn sorted_ndi_svg() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("karate.svg");
    let out = ndi([
        Path::new("ndi"),
        &data("karate.txt"),
        Path::new("--svg"),
        &path,
    ]);
    assert!(out.status.success());
    let text = fs::read_to_string(&path).unwrap();
    let doc = roxmltree::Document::parse(&text).expect("well-formed XML");
    assert_eq!(svg_circles(&doc), 34);
    assert!(has_class(&doc, "elbow"));
    assert!(has_class(&doc, "dissimilar") && has_class(&doc, "similar"));

    let c6 = write(&dir, "c6.txt", &cycle(6));
    let flat = dir.path().join("c6.svg");
    assert!(ndi([Path::new("ndi"), &c6, Path::new("--svg"), &flat])
        .status
        .success());
    let text = fs::read_to_string(&flat).unwrap();
    let doc = roxmltree::Document::parse(&text).unwrap();
    assert_eq!(svg_circles(&doc), 6);
    assert!(!has_class(&doc, "elbow"));
}

#[test]
fn unwritable_svg_exits_one() {
    let out = ndi([
        Path::new("ndi"),
        &data("karate.txt"),
        Path::new("--svg"),
        Path::new("/nonexistent/dir/plot.svg"),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn ndm_export() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("ndm.csv");
    assert!(ndi([
        Path::new("ndi"),
        &data("karate.txt"),
        Path::new("--ndm-csv"),
        &path
    ])
    .status
    .success());
    let text = fs::read_to_string(&path).unwrap();
    let rows: Vec<Vec<f64>> = text
        .lines()
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 34);
    assert!(rows.iter().all(|r| r.len() == 34));
    assert!((0..34).all(|i| rows[i][i] == 0.0 && (0..34).all(|j| rows[i][j] == rows[j][i])));
}

#[test]
fn regular_batch_has_unit_ratio() {
    let dir = TempDir::new().unwrap();
    write(&dir, "k5.txt", &complete(5));
    write(&dir, "c8.txt", &cycle(8));
    let manifest = write(&dir, "manifest.csv", "name,path\nK5,k5.txt\nC8,c8.txt\n");
    let out = ndi([
        Path::new("batch"),
        &manifest,
        Path::new("--format"),
        Path::new("csv"),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("name,nodes,edges,lambda_sp,ndi,nsi"));
    let lambda: Vec<&str> = lines.map(|l| l.split(',').nth(3).unwrap()).collect();
    assert_eq!(lambda, ["1", "1"]);
}

#[test]
fn batch_reports_failed_entries() {
    let dir = TempDir::new().unwrap();
    let manifest = write(
        &dir,
        "manifest.csv",
        &format!(
            "name,path\nkarate,{}\nmissing,nowhere.txt\nlesmis,{}\n",
            data("karate.txt").display(),
            data("lesmis.txt").display()
        ),
    );
    let out = ndi([Path::new("batch"), &manifest]);
    assert_eq!(out.status.code(), Some(1));
    let json: Value = serde_json::from_slice(&out.stdout).unwrap();
    let names: Vec<&str> = json["networks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|n| n["name"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["karate", "lesmis"]);
    assert_eq!(json["failed"][0]["name"], "missing");
    assert!(json["study"].is_null());
}

#[test]
fn fit_from_transcribed_table() {
    let dir = TempDir::new().unwrap();
    let plots = dir.path().join("plots");
    let study = dir.path().join("study.json");
    let out = ndi([
        Path::new("batch"),
        Path::new("--fit-from-csv"),
        &data("reference_summary.csv"),
        Path::new("--svg"),
        &plots,
        Path::new("--study"),
        &study,
    ]);
    let json = stdout_json(&out);
    assert_eq!(json["networks"].as_array().unwrap().len(), 12);
    let r2 = |x: &str| {
        json["study"]["fits"]
            .as_array()
            .unwrap()
            .iter()
            .find(|f| f["x"] == x)
            .unwrap()["r_squared"]
            .as_f64()
            .unwrap()
    };
    assert!((r2("lambda_sp") - 0.4083).abs() <= 0.01);
    assert!((r2("nsi") - 0.5382).abs() <= 0.01);

    let written: Value = serde_json::from_str(&fs::read_to_string(&study).unwrap()).unwrap();
    assert_eq!(written, json["study"]);

    for key in ["lambda_sp", "nsi"] {
        let text = fs::read_to_string(plots.join(format!("ndi_vs_{key}.svg"))).unwrap();
        let doc = roxmltree::Document::parse(&text).unwrap();
        assert_eq!(svg_circles(&doc), 12);
        assert!(has_class(&doc, "fit"));
        assert!(text.contains("R² = "));
    }

    let out = ndi([
        Path::new("fit"),
        &data("reference_summary.csv"),
        Path::new("--format"),
        Path::new("csv"),
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("x,y,slope,intercept,r_squared\nlambda_sp,ndi,"));
}

#[test]
fn output_file_flag() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("report.json");
    let out = ndi([
        Path::new("ndi"),
        &data("karate.txt"),
        Path::new("-o"),
        &path,
    ]);
    assert!(out.status.success() && out.stdout.is_empty());
    let json: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(json["network"]["n"], 34);
}

#[test]
fn conventions_change_the_ratio() {
    let get = |c: &str| {
        stdout_json(&ndi([
            Path::new("ndi"),
            &data("karate.txt"),
            Path::new("--convention"),
            Path::new(c),
        ]))["network"]["ndi"]
            .as_f64()
            .unwrap()
    };
    let (row, nm1, entry) = (get("row-mean"), get("nondiag-nm1"), get("entry-mean"));
    assert!((nm1 - row * 33.0 / 34.0).abs() < 1e-4);
    assert!((entry - row * 33.0).abs() < 1e-3);
}
