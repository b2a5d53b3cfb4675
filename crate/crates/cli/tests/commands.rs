//! Runs the `netcg` binary and checks outputs and exit codes.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn netcg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_netcg")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn construct_to(path: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["construct"];
    args.extend_from_slice(extra);
    args.extend_from_slice(&["--out", path.to_str().unwrap()]);
    netcg(&args)
}

#[test]
fn construct_writes_the_header() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g21.txt");
    let o = construct_to(&path, &["--p", "7", "--q", "3", "--ell", "2", "--i", "1", "--format", "edges"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("n=21 m=42 valency=4 connected=true"));
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("NETCG v1 21 42\n"));
    assert!(text.contains("# ell=2\n"));

    let path = dir.path().join("k33.txt");
    let o = construct_to(&path, &["--p", "3", "--q", "2", "--construction1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(fs::read_to_string(&path).unwrap().starts_with("NETCG v1 6 9\n"));
}

#[test]
fn construct_rejects_bad_parameters() {
    let o = netcg(&["construct", "--p", "7", "--q", "3", "--ell", "1", "--i", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("ell must exceed 1"), "{err}");
    assert_eq!(err.lines().count(), 1);
    let o = netcg(&["construct", "--p", "7", "--q", "3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = netcg(&["construct", "--p", "7", "--q", "3", "--abelian", "1,2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = netcg(&["no-such-command"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn output_is_byte_stable_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 5] = [
        &["--p", "7", "--q", "3", "--ell", "2", "--i", "1"],
        &["--p", "7", "--q", "2", "--ell", "3"],
        &["--p", "11", "--q", "2", "--ell", "5"],
        &["--p", "5", "--q", "3", "--abelian", "1,4,2"],
        &["--p", "5", "--q", "2", "--construction1"],
    ];
    for args in cases {
        let a = dir.path().join("a.txt");
        let b = dir.path().join("b.txt");
        assert_eq!(construct_to(&a, args).status.code(), Some(0));
        assert_eq!(construct_to(&b, args).status.code(), Some(0));
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
        // aut parses the file back
        let o = netcg(&["aut", "--in", a.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
    }
}

#[test]
fn dot_output_is_well_formed() {
    let o = netcg(&["construct", "--p", "7", "--q", "3", "--ell", "2", "--format", "dot"]);
    assert_eq!(o.status.code(), Some(0));
    let dot = stdout(&o);
    assert!(dot.starts_with("graph netcg {\n") && dot.ends_with("}\n"));
    for line in dot.lines().skip(1).filter(|l| *l != "}") {
        let line = line.trim();
        assert!(line.starts_with("//") || line.ends_with(';'), "{line}");
    }
    assert_eq!(dot.matches(" -- ").count(), 42);
}

#[test]
fn aut_reports_orders() {
    let dir = tempfile::tempdir().unwrap();
    let g21 = dir.path().join("g21.txt");
    construct_to(&g21, &["--p", "7", "--q", "3", "--ell", "2", "--i", "1"]);
    let o = netcg(&["aut", "--in", g21.to_str().unwrap(), "--primitive", "--blocks"]);
    assert!(stdout(&o).contains("order=336 primitive=true"));
    assert!(stdout(&o).contains("minimal_block_sizes=none"));

    let g55 = dir.path().join("g55.txt");
    construct_to(&g55, &["--p", "11", "--q", "5", "--ell", "2", "--i", "1"]);
    let o = netcg(&["aut", "--in", g55.to_str().unwrap(), "--blocks"]);
    assert!(stdout(&o).starts_with("order=110\n"));
    assert!(stdout(&o).contains("minimal_block_sizes="));

    let c5 = dir.path().join("c5.txt");
    fs::write(&c5, "NETCG v1 5 5\n0 1\n0 4\n1 2\n2 3\n3 4\n").unwrap();
    let o = netcg(&["aut", "--in", c5.to_str().unwrap()]);
    assert!(stdout(&o).starts_with("order=10\n"));

    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "NETCG v1 5 1\n1 0\n").unwrap();
    assert_eq!(netcg(&["aut", "--in", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(netcg(&["aut", "--in", "/nonexistent/file"]).status.code(), Some(2));
}

#[test]
fn classify_reports_and_exit_codes() {
    let o = netcg(&["classify", "--p", "11", "--q", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let md = stdout(&o);
    assert!(md.contains("| Γ(55,2,1) |") && md.contains("| Γ(55,2,2) |"), "{md}");

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.kv");
    let o = netcg(&["classify", "--p", "13", "--q", "3", "--report", "kv", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let kv = fs::read_to_string(&path).unwrap();
    let mut orders = Vec::new();
    for k in 0.. {
        let Some(case) = kv.lines().find_map(|l| l.strip_prefix(&format!("row.{k}.case="))) else {
            break;
        };
        if case == "proper" {
            let order = kv.lines().find_map(|l| l.strip_prefix(&format!("row.{k}.aut_order="))).unwrap();
            orders.push(order.to_string());
        }
    }
    assert_eq!(orders, ["78", "234", "156", "468"]);
    assert!(kv.contains("passed=true"));

    assert_eq!(netcg(&["classify", "--p", "7", "--q", "4"]).status.code(), Some(2));
    assert_eq!(netcg(&["classify", "--p", "7", "--q", "3", "--max-size", "10"]).status.code(), Some(2));
    assert_eq!(netcg(&["classify", "--p", "7", "--q", "3", "--report", "xml"]).status.code(), Some(2));
}

#[test]
fn exceptional_geometries_verify() {
    let o = netcg(&["verify-table1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).matches("- result: pass").count(), 3);
    let o = netcg(&["verify-table1", "--corrupt-geometry"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn exceptional_geometries_with_pg28() {
    let o = netcg(&["verify-table1", "--include-146"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).matches("- result: pass").count(), 4);
}

#[test]
fn houlis_lists_triples() {
    let o = netcg(&["houlis", "--p", "5", "--q", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "d2=1 d1=1 d=0 valency=8 swapped=1,1,0\nd2=1 d1=2 d=0 valency=4 swapped=2,1,0\nd2=1 d1=4 d=2 valency=2 swapped=2,2,1\n"
    );
    assert_eq!(netcg(&["houlis", "--p", "6", "--q", "3"]).status.code(), Some(2));
}
