use std::io::Write;
use std::process::{Command, Output, Stdio};

fn snortlab(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_snortlab"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    {
        let mut pipe = child.stdin.take().unwrap();
        if let Some(text) = stdin {
            pipe.write_all(text.as_bytes()).unwrap();
        }
    }
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(stdout(o).trim()).expect("one JSON document")
}

#[test]
fn figure_pipes_into_solve() {
    let fig = snortlab(&["figure", "P3uC3"], None);
    assert!(fig.status.success());
    let solved = snortlab(&["solve", "-"], Some(&stdout(&fig)));
    assert!(solved.status.success());
    assert!(stdout(&solved).starts_with("SecondWins"));
}

#[test]
fn solve_json_and_tinted_fixture() {
    let o = snortlab(&["--json", "solve", "-"], Some("CR\nrrbb\n"));
    let v = json(&o);
    assert_eq!(v["outcome"], "SecondWins");
    assert_eq!(v["states"], "rrbb");
    let unpruned = snortlab(&["--json", "solve", "EgCW", "--no-prune", "--trace"], None);
    let v = json(&unpruned);
    assert_eq!(v["outcome"], "SecondWins");
    assert_eq!(v["trace"].as_array().unwrap().len(), 2);
}

#[test]
fn chess_prediction_and_witness() {
    let o = snortlab(&["chess", "rook", "4", "6"], None);
    assert!(stdout(&o).contains("predicted SecondWins"));
    let v = json(&snortlab(&["--json", "chess", "knight", "3", "3", "--witness", "--solve"], None));
    assert_eq!(v["predicted"], "FirstWins");
    assert_eq!(v["solved"], "FirstWins");
    assert_eq!(v["witness"]["verified"], true);
    let queen = json(&snortlab(&["--json", "chess", "queen", "2", "2", "--witness"], None));
    assert_eq!(queen["predicted"], "Unknown");
    assert!(queen["witness"].is_null());
}

#[test]
fn witnesses_as_json() {
    let v = json(&snortlab(&["--json", "opposable", "C]"], None));
    assert_eq!(v["type"], "opposition");
    let v = json(&snortlab(&["--json", "opposable", "EgCW"], None));
    assert_eq!(v["type"], "none");
    let ag = stdout(&snortlab(&["figure", "AlmostGraphAG"], None));
    let v = json(&snortlab(&["--json", "almost", "-"], Some(&ag)));
    assert_eq!(v["type"], "almost-opposition");
    assert_eq!(v["S"], serde_json::json!([2, 3, 6]));
    let v = json(&snortlab(&["--json", "almost", "--compatible", "-"], Some(&ag)));
    assert_eq!(v["type"], "none");
}

#[test]
fn products() {
    let v =
        json(&snortlab(&["--json", "product", "C]", "Bw", "--named", "strong", "--lift", "--check-condition"], None));
    assert_eq!(v["order"], 12);
    assert_eq!(v["condition"], true);
    assert_eq!(v["lifted"]["type"], "opposition");
    let o = snortlab(&["product", "C]", "Bw", "--formula", "eqH | adjH & !adjG", "--lift"], None);
    assert_eq!(o.status.code(), Some(1));
    let o = snortlab(&["product", "C]", "Bw", "--formula", "adjG &"], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("position 7"));
}

#[test]
fn firework_check() {
    let v = json(&snortlab(&["--json", "firework", "EgCW", "3", "1", "6", "--check"], None));
    assert_eq!(v["order"], 18);
    assert_eq!(v["hypotheses_hold"], true);
    assert_eq!(v["outcome"], "SecondWins");
}

#[test]
fn scan_writes_jsonl() {
    let dir = std::env::temp_dir().join(format!("snortlab-scan-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("report.jsonl");
    let o = snortlab(
        &["scan", "--scope", "connected", "--min-order", "7", "--max-order", "7", "--out", out.to_str().unwrap()],
        None,
    );
    assert!(o.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 6);
    assert!(lines[5].starts_with("{\"summary\""));

    let list = "EgCW\nC]\nBw\n";
    let v = snortlab(&["--json", "scan", "--input", "-"], Some(list));
    let text = stdout(&v);
    assert_eq!(text.lines().count(), 2, "{text}");
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn exit_codes() {
    assert_eq!(snortlab(&["solve", "not graph6!"], None).status.code(), Some(2));
    assert_eq!(snortlab(&["scan", "--max-order", "9"], None).status.code(), Some(3));
    assert_eq!(snortlab(&["scan", "--predicate", "secondwins & bogus"], None).status.code(), Some(2));
    assert_eq!(snortlab(&["chess", "queen", "5", "5", "--solve"], None).status.code(), Some(3));
    assert_eq!(snortlab(&["chess", "pawn", "2", "2"], None).status.code(), Some(2));
    assert_eq!(snortlab(&["frobnicate"], None).status.code(), Some(2));
}

#[test]
fn verify_paper_subsets() {
    let o = snortlab(&["verify-paper", "--fast", "--only", "1", "--only", "7"], None);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().filter(|l| l.contains("PASS")).count(), 2);
    let o = snortlab(&["--json", "verify-paper", "--only", "3a"], None);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["criteria"][0]["passed"], false);
    assert_eq!(snortlab(&["verify-paper", "--only", "9"], None).status.code(), Some(2));
}

#[test]
fn play_to_the_end() {
    let o = snortlab(&["play", "EgCW", "--as", "left"], Some("0\n1\n2\n"));
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("Right plays"), "{text}");
    assert!(text.contains("Right wins"), "{text}");
}
