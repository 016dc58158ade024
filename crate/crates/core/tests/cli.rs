use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cascade-timing"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn default_capacity_table() {
    let text = stdout(&["capacity"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "m,q,capacity,time_sharing_rate,capacity_infinite");
    assert_eq!(lines.len(), 1 + 16);
    assert_eq!(lines[1], "2,1,0.7729,0.5000,0.6942");
    assert_eq!(lines[4], "3,2,1.0665,0.7925,1.0000");
    assert_eq!(lines[16], "101,2,1.0001,0.7925,1.0000");
}

#[test]
fn empty_list_gives_header_only() {
    assert_eq!(stdout(&["capacity", "--m", ""]).lines().count(), 1);
}

#[test]
fn capacity_json() {
    let text = stdout(&["capacity", "--m", "2", "--q", "2", "--format", "json"]);
    let rows: serde_json::Value = serde_json::from_str(&text).unwrap();
    let c = rows[0]["capacity"].as_f64().unwrap();
    assert!((c - 1.1389).abs() < 1e-4);
}

#[test]
fn region_csv() {
    let text = stdout(&["region", "--step", "0.05"]);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("region_tag,R0,R1"));
    let rows: Vec<&str> = lines.collect();
    assert!(rows.contains(&"star,0.0000,1.5850"));
    assert!(rows.contains(&"circle,0.9654,0.3909"));
    assert!(rows.contains(&"achievable,1.1389,0.0000"));
}

#[test]
fn table1_transcript() {
    let text = stdout(&["simulate", "--code", "table1", "--blocks", "4", "--messages", "1,2,4,7"]);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "block,node,word,decoded");
    let words = |node: &str| -> Vec<String> {
        rows[1..]
            .iter()
            .filter(|r| r.split(',').nth(1) == Some(node))
            .map(|r| r.split(',').nth(2).unwrap().to_string())
            .collect()
    };
    assert_eq!(words("0"), ["001N", "N010", "1N00", "11N1"]);
    assert_eq!(words("1"), ["NNNN", "1NNN", "N0NN", "NN0N"]);
    let sink: Vec<&str> = rows[1..]
        .iter()
        .filter(|r| r.split(',').nth(1) == Some("2"))
        .map(|r| r.rsplit(',').next().unwrap())
        .collect();
    assert_eq!(sink, ["", "1", "2", "4"]);
}

#[test]
fn exhaustive_table2() {
    let text = stdout(&["simulate", "--code", "table2", "--blocks", "3", "--exhaustive"]);
    assert_eq!(text, "code,blocks,sequences,failures\ntable2,3,256,0\n");
}

#[test]
fn seeded_transcripts_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, seed: &str| {
        let path = dir.path().join(name);
        let p = path.to_str().unwrap();
        stdout(&[
            "simulate",
            "--code",
            "single-relay:6,2,2",
            "--blocks",
            "8",
            "--seed",
            seed,
            "--format",
            "json",
            "--out",
            p,
        ]);
        std::fs::read(path).unwrap()
    };
    let a = write("a.jsonl", "11");
    assert_eq!(a, write("b.jsonl", "11"));
    assert_ne!(a, write("c.jsonl", "12"));
    for line in String::from_utf8(a).unwrap().lines() {
        let entry: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(entry["block"].as_u64().is_some());
    }
}

#[test]
fn config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    let out = dir.path().join("tree.csv");
    std::fs::write(
        &cfg,
        serde_json::json!({
            "command": "tree",
            "tree": {"q": 2, "edges": [[0, 1], [1, 2]]},
            "out": out,
        })
        .to_string(),
    )
    .unwrap();
    assert_eq!(stdout(&["--config", cfg.to_str().unwrap()]), "");
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().nth(1), Some("0,2,2,2,1,1.1389"));
}

#[test]
fn tree_and_butterfly() {
    let tree = stdout(&["tree"]);
    assert_eq!(tree.lines().nth(1), Some("1,1,3,7;8,2;3;5;6,0.7324"));
    let edge = stdout(&["tree", "--q", "3", "--edges", "0-1"]);
    assert!(edge.lines().nth(1).unwrap().ends_with(",2.0000"));
    let b = stdout(&["butterfly", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&b).unwrap();
    assert_eq!(v["nc_pairs_decoded"], 4);
    assert!((v["timing_rate"].as_f64().unwrap() - 0.7729).abs() < 1e-4);
}

#[test]
fn codebook_text() {
    let text = stdout(&["codebook", "--code", "table2", "--format", "text"]);
    assert!(text.lines().next().unwrap().starts_with("w0 | C_0"));
    assert!(text.contains("NBNB a"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["simulate", "--code", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["capacity", "--tol", "0"]).status.code(), Some(2));
    assert_eq!(run(&["tree", "--edges", "1-2,3-2"]).status.code(), Some(2));
    assert_eq!(run(&["--bogus"]).status.code(), Some(2));
    assert!(run(&["--help"]).status.success());
    // a message outside the source alphabet is a usage error, not a failed check
    assert_eq!(
        run(&["simulate", "--code", "table1", "--blocks", "2", "--messages", "9,0"])
            .status
            .code(),
        Some(2)
    );
}
