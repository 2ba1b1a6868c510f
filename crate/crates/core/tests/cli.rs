use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn smalltc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smalltc")).args(args).output().expect("run smalltc")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const S2: &str = "ring S2\ncoeff Z\ndim 2\nbasis v:2\nmul v*v = 0\n";
const CONNSUM4: &str = "\
ring ConnSum4
coeff Z
dim 4
basis u1:1 u2:1 v1:3 v2:3 g:4
mul u1*v1 = g
mul u2*v2 = g
";

#[test]
fn tc_bound_on_even_sphere() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "s2.ring", S2);
    let o = smalltc(&["tc-bound", &f]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "zcl 3"));
    let o = smalltc(&["--format", "tsv", "tc-bound", &f, "--coeff", "F_2"]);
    assert!(stdout(&o).lines().any(|l| l == "zcl\t2"));
}

#[test]
fn connected_sum_witness() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "connsum.ring", CONNSUM4);
    let o = smalltc(&["--format", "tsv", "zcl", &f, "--witness"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l == "zcl\t5"));
    let factors = out.lines().find_map(|l| l.strip_prefix("witness_factors\t")).unwrap();
    assert_eq!(factors.split(',').count(), 4);
    let product = out.lines().find_map(|l| l.strip_prefix("witness_product\t")).unwrap();
    assert!(product == "2*g⊗g" || product == "-2*g⊗g", "{product}");
}

#[test]
fn tsv_keys_are_stable() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "s2.ring", S2);
    let o = smalltc(&["--format", "tsv", "tc-bound", &f]);
    let keys: Vec<String> = stdout(&o).lines().map(|l| l.split('\t').next().unwrap().to_string()).collect();
    assert_eq!(
        keys,
        ["ring", "coeff", "zcl", "tc_lower_bound", "cuplength", "cat_lower_bound", "witness_factors", "witness_product"]
    );
    assert_eq!(smalltc(&["--format", "tsv", "tc-bound", &f]).stdout, o.stdout);
}

#[test]
fn catalog_commands() {
    let o = smalltc(&["--format", "tsv", "catalog", "check"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().all(|l| l.ends_with("\tPASS")));
    assert!(out.lines().any(|l| l == "S2\tPASS"));

    let list = stdout(&smalltc(&["--format", "tsv", "catalog", "list"]));
    assert!(list.lines().any(|l| l == "SU3\t8"));

    let o = smalltc(&["catalog", "show", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
}

#[test]
fn catalog_show_feeds_classify() {
    let dir = TempDir::new().unwrap();
    for (name, verdict) in [("Wu", "Alternative3(2)"), ("Sp2", "Alternative2(3,7)"), ("S2xS2", "Excluded")] {
        let text = stdout(&smalltc(&["catalog", "show", name]));
        let f = write(dir.path(), &format!("{name}.mf"), &text);
        let o = smalltc(&["--format", "tsv", "classify", &f]);
        assert_eq!(o.status.code(), Some(0), "{name}");
        assert!(stdout(&o).lines().any(|l| l == format!("verdict\t{verdict}")), "{name}");
    }
}

#[test]
fn classify_with_ringfile() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "s1s3.ring", "ring S1xS3\ncoeff Z\ndim 4\nbasis u:1 v:3 g:4\nmul u*v = g\n");
    let f = write(
        dir.path(),
        "s1s3.mf",
        "manifold S1xS3\ndim 4\norientable yes\npi1rank 1\nhomology 0:1\nhomology 1:1\nhomology 3:1\nhomology 4:1\nringfile s1s3.ring\n",
    );
    let o = smalltc(&["classify", &f]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict Alternative2(1,3)"));
}

#[test]
fn missing_ring_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let f = write(
        dir.path(),
        "wu.mf",
        "manifold Wu\ndim 5\npi1rank 0\nhomology 0:1\nhomology 2:0,2\nhomology 5:1\n",
    );
    let o = smalltc(&["classify", &f]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("F_2"));
}

#[test]
fn input_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let bad = write(dir.path(), "bad.ring", "ring bad\ncoeff Z\nbasis u:1 v:1 g:2\nmul u*v = g\nmul v*u = g\n");
    let o = smalltc(&["validate", &bad]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 4") && err.contains("commutativity"), "{err}");
    assert!(o.stdout.is_empty());

    assert_eq!(smalltc(&["zcl", "/nonexistent/file.ring"]).status.code(), Some(2));
    assert_eq!(smalltc(&["frobnicate"]).status.code(), Some(2));
    let s2 = write(dir.path(), "s2.ring", S2);
    assert_eq!(smalltc(&["tc-bound", &s2, "--coeff", "F_4"]).status.code(), Some(2));
    assert_eq!(smalltc(&["--help"]).status.code(), Some(0));
}

#[test]
fn missing_witness_and_cap_exit_one() {
    let dir = TempDir::new().unwrap();
    let point = write(dir.path(), "pt.ring", "ring pt\ncoeff Q\ndim 0\n");
    let o = smalltc(&["zcl", &point, "--witness"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("zcl 1"));
    let s2 = write(dir.path(), "s2.ring", S2);
    assert_eq!(smalltc(&["zcl", &s2, "--max-k", "2"]).status.code(), Some(1));
}

#[test]
fn info_and_cuplength() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "cs.ring", CONNSUM4);
    let out = stdout(&smalltc(&["--format", "tsv", "info", &f]));
    assert!(out.contains("betti\t1,2,0,2,1"));
    assert!(out.contains("poincare_duality\tholds"));
    let out = stdout(&smalltc(&["cuplength", &f]));
    assert!(out.contains("cuplength 3"));
    let out = stdout(&smalltc(&["validate", &f]));
    assert!(out.contains("valid yes"));
}
