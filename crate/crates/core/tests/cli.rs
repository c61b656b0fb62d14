use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn spmul(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spmul")).current_dir(dir).args(args).output().expect("spawn spmul")
}

fn write(dir: &Path, name: &str, text: &str) {
    fs::write(dir.join(name), text).unwrap();
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn gen_is_deterministic_and_parses_back() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let args = ["gen", "--terms", "3", "--degree", "10", "--height", "5", "--structure", "progression", "--seed", "1"];
    assert_eq!(spmul(d, &[&args[..], &["--out", "a"]].concat()).status.code(), Some(0));
    assert_eq!(spmul(d, &[&args[..], &["--out", "b"]].concat()).status.code(), Some(0));
    assert_eq!(read(d, "a.f.sp"), read(d, "b.f.sp"));
    assert_eq!(read(d, "a.g.sp"), read(d, "b.g.sp"));
    let f = spmul::SparsePoly::parse(&read(d, "a.f.sp")).unwrap();
    assert_eq!(f.to_text(), read(d, "a.f.sp"));
    let e: Vec<i64> = f.exponents().map(|e| e.try_into().unwrap()).collect();
    assert_eq!(e[1] - e[0], e[2] - e[1]);

    spmul(d, &["gen", "--terms", "1", "--degree", "10", "--height", "5", "--out", "m"]);
    assert_eq!(spmul::SparsePoly::parse(&read(d, "m.f.sp")).unwrap().sparsity(), 1);
}

#[test]
fn mul_writes_the_product() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(d, "f", "sp 1 1\n1 0\n1 1\n");
    write(d, "g", "sp 1 1\n1 0\n-1 1\n");
    let out = spmul(d, &["mul", "f", "g", "--verify", "--seed", "4", "--out", "h"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let h = read(d, "h");
    assert!(h.lines().any(|l| l == "1 0"));
    assert!(h.lines().any(|l| l == "-1 2"));
    assert_eq!(h.lines().filter(|l| !l.starts_with("sp")).count(), 2);

    write(d, "z", "sp 1 1\n");
    assert_eq!(spmul(d, &["mul", "z", "g", "--out", "hz"]).status.code(), Some(0));
    assert!(spmul::SparsePoly::parse(&read(d, "hz")).unwrap().is_zero());
}

#[test]
fn mul_verify_on_generated_instances() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let mut ok = 0;
    for seed in 0..20 {
        let s = seed.to_string();
        spmul(d, &["gen", "--terms", "8", "--degree", "1000000", "--height", "100", "--seed", &s, "--out", "x"]);
        let out = spmul(d, &["mul", "x.f.sp", "x.g.sp", "--verify", "--mu", "0.1", "--seed", &s, "--out", "y"]);
        match out.status.code() {
            Some(0) => ok += 1,
            Some(2) => assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL (retry with new seed)")),
            c => panic!("exit {c:?}: {}", String::from_utf8_lossy(&out.stderr)),
        }
    }
    assert!(ok >= 16, "{ok}");
}

#[test]
fn sumset_examples_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for (a, b, want) in [("0\n", "0\n", "0\n"), ("0\n1\n3\n", "0\n2\n", "0\n1\n2\n3\n5\n"), ("-2\n1\n", "-1\n1\n", "-3\n-1\n0\n2\n")] {
        write(d, "a", a);
        write(d, "b", b);
        let out = spmul(d, &["sumset", "a", "b", "--verify", "--seed", "1", "--out", "s"]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(read(d, "s"), want);
    }
}

#[test]
fn bench_csv_shapes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = spmul(d, &["bench", "--suite", "crossover", "--sizes", "", "--csv", "e.csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(read(d, "e.csv"), "suite,R,D,C,T,S,algo,ms,word_ops,success\n");
    spmul(d, &["bench", "--suite", "crossover", "--sizes", "3,5", "--mu", "0.1", "--csv", "c.csv"]);
    let csv = read(d, "c.csv");
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[0].contains(",naive,") && rows[1].contains(",paper,"));
    assert!(rows.iter().all(|r| r.ends_with(",true")));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(spmul(d, &["mul", "only-one"]).status.code(), Some(1));
    assert_eq!(spmul(d, &["mul", "missing", "missing"]).status.code(), Some(1));
    write(d, "bad", "sp 1 1\nnot a term\n");
    assert_eq!(spmul(d, &["mul", "bad", "bad"]).status.code(), Some(1));
    write(d, "f", "sp 1 1\n1 0\n");
    assert_eq!(spmul(d, &["mul", "f", "f", "--mu", "2"]).status.code(), Some(1));
    assert_eq!(spmul(d, &["bench", "--suite", "nope"]).status.code(), Some(1));
}
