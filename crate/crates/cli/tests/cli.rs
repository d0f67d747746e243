use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use tempfile::TempDir;

const EXAMPLE: &str = "CDABCCDABCCA";

fn strattr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_strattr"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn strattr_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_strattr"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn error_code(o: &Output) -> String {
    let v: serde_json::Value = serde_json::from_slice(&o.stderr).expect("error record is JSON");
    v["error"]["code"].as_str().unwrap().to_string()
}

struct Dir(TempDir);

impl Dir {
    fn new() -> Self {
        Dir(tempfile::tempdir().unwrap())
    }

    fn file(&self, name: &str, content: &[u8]) -> PathBuf {
        let p = self.0.path().join(name);
        fs::write(&p, content).unwrap();
        p
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.path().join(name)
    }
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_example() {
    let d = Dir::new();
    let t = d.file("example2.txt", format!("{EXAMPLE}\n").as_bytes());
    let g = d.file(
        "gamma.json",
        br#"{"n":12,"positions":[4,7,11,12],"provenance":"user"}"#,
    );
    let o = strattr(&["verify", s(&t), s(&g)]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "valid");

    let bad = d.file(
        "bad.json",
        br#"{"n":12,"positions":[4,7,11],"provenance":"user"}"#,
    );
    let o = strattr(&["verify", s(&t), s(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("invalid"));
}

#[test]
fn pipeline_closure() {
    let d = Dir::new();
    for (k, text) in [
        "CDABCCDABCCA",
        "abaababaabaababaababa",
        "aaaaaaaaaa",
        "x",
        "mississippi",
    ]
    .iter()
    .enumerate()
    {
        let t = d.file(&format!("t{k}.txt"), text.as_bytes());
        for src in ["lz77", "bwt", "grammar", "macro", "stree", "greedy"] {
            let a = strattr(&["attractor", src, s(&t)]);
            assert!(
                a.status.success(),
                "{src} on {text}: {}",
                String::from_utf8_lossy(&a.stderr)
            );
            let v = strattr_stdin(&["verify", s(&t), "-"], &a.stdout);
            assert_eq!(stdout(&v).trim(), "valid", "{src} on {text}");
        }
    }
}

#[test]
fn decode_closure() {
    let d = Dir::new();
    let text = "abaababaabaababaababaabaababaabaab";
    let t = d.file("t.txt", text.as_bytes());
    let g = d.file("g.json", &strattr(&["attractor", "lz77", s(&t)]).stdout);
    let parse = d.file("p.json", &strattr(&["to-parse", s(&t), s(&g)]).stdout);
    assert_eq!(
        strattr(&["decode", "parse", s(&parse)]).stdout,
        text.as_bytes()
    );
    let slp = d.file("s.json", &strattr(&["to-slp", s(&t), s(&g)]).stdout);
    assert_eq!(strattr(&["decode", "slp", s(&slp)]).stdout, text.as_bytes());
    let lz = d.file(
        "lz.json",
        br#"[{"lit":"a"},{"src":1,"len":1},{"src":1,"len":2}]"#,
    );
    let out = d.path("out.txt");
    assert!(strattr(&["decode", "lz77", s(&lz), "-o", s(&out)])
        .status
        .success());
    assert_eq!(fs::read(out).unwrap(), b"aaaa");
}

#[test]
fn adag_build_and_extract() {
    let d = Dir::new();
    let t = d.file("t.txt", EXAMPLE.as_bytes());
    let g = d.file(
        "g.json",
        br#"{"n":12,"positions":[4,7,11,12],"provenance":"user"}"#,
    );
    let out = d.path("out.adag");
    let b = strattr(&[
        "adag",
        "build",
        s(&t),
        s(&g),
        "--tau",
        "2",
        "--word-bits",
        "1",
        "-o",
        s(&out),
    ]);
    assert!(b.status.success(), "{}", String::from_utf8_lossy(&b.stderr));
    let e = strattr(&["adag", "extract", s(&out), "--pos", "6", "--len", "5"]);
    assert_eq!(e.stdout, b"CDABC");
    let e = strattr(&["adag", "extract", s(&out), "--pos", "12", "--len", "3"]);
    assert_eq!(e.status.code(), Some(2));
    assert_eq!(error_code(&e), "adag.range-out-of-bounds");
    assert!(stdout(&strattr(&["adag", "space", s(&out)])).contains("coordinate_words"));
}

#[test]
fn report_and_bounds() {
    let d = Dir::new();
    let t = d.file("example2.txt", EXAMPLE.as_bytes());
    let r: serde_json::Value = serde_json::from_slice(&strattr(&["report", s(&t)]).stdout).unwrap();
    assert_eq!(r["gamma_exact"], 4);
    assert_eq!(r["z"], 8);
    let b: serde_json::Value = serde_json::from_slice(&strattr(&["bounds", s(&t)]).stdout).unwrap();
    assert_eq!(b["linguistic"]["capped"], 67);
    let b = strattr(&["bounds", s(&t), "--gamma", "3"]);
    assert_eq!(error_code(&b), "bounds.parameter-out-of-range");
    assert!(stdout(&strattr(&["report", s(&t), "--table"])).contains("gamma (exact)"));
}

#[test]
fn trees() {
    let d = Dir::new();
    let sc = d.file("sc.json", br#"{"universe":2,"sets":[[0],[1]]}"#);
    let tree = strattr(&["reduce-setcover", s(&sc)]);
    assert!(tree.status.success());
    let v: serde_json::Value = serde_json::from_slice(&tree.stdout).unwrap();
    assert_eq!(v["edges"].as_array().unwrap().len(), 10);
    assert_eq!(v["t"], 2);
    let tf = d.file("tree.json", &tree.stdout);
    let b: serde_json::Value =
        serde_json::from_slice(&strattr(&["tree-brute", s(&tf)]).stdout).unwrap();
    assert_eq!(b["k"], 6);
    let g = strattr(&["tree-greedy", s(&tf)]);
    assert!(g.status.success());

    let empty = d.file("empty.json", br#"{"universe":0,"sets":[]}"#);
    assert_eq!(
        error_code(&strattr(&["reduce-setcover", s(&empty)])),
        "reduce-setcover.empty-universe"
    );
    let small = strattr(&["tree-brute", s(&tf), "--limit", "3"]);
    assert_eq!(error_code(&small), "tree-brute.input-too-large");
}

#[test]
fn brute_and_errors() {
    let d = Dir::new();
    let t = d.file("t.txt", EXAMPLE.as_bytes());
    let g: serde_json::Value = serde_json::from_slice(&strattr(&["brute", s(&t)]).stdout).unwrap();
    assert_eq!(g["positions"].as_array().unwrap().len(), 4);
    let empty = d.file("e.txt", b"");
    assert_eq!(
        error_code(&strattr(&["greedy", s(&empty)])),
        "greedy.empty-text"
    );
    let missing = d.path("missing.txt");
    assert_eq!(error_code(&strattr(&["greedy", s(&missing)])), "greedy.io");
    let other = d.file("g.json", br#"{"n":5,"positions":[1],"provenance":"user"}"#);
    assert_eq!(
        error_code(&strattr(&["verify", s(&t), s(&other)])),
        "verify.length-mismatch"
    );
}
