#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output, Stdio};
use std::io::Write;

use cpnet::model::{CpNet, Outcome};

pub const GOLDEN_NETS: &[&str] = &["cyclic4.cpn", "acyclic4.cpn", "twocycle.cpn", "redundant3.cpn"];
pub const GOLDEN_GAMES: &[&str] = &["prisoners.game"];

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn read(name: &str) -> String {
    std::fs::read_to_string(data(name)).unwrap()
}

pub fn golden(name: &str) -> CpNet {
    cpnet::io::parse_cpnet(&read(name)).unwrap()
}

/// Outcomes as value-name lists, sorted, so nets with different index
/// layouts compare by meaning.
pub fn named(net: &CpNet, outcomes: &[Outcome]) -> Vec<Vec<String>> {
    let mut v: Vec<Vec<String>> = outcomes.iter().map(|o| net.outcome_names(o)).collect();
    v.sort();
    v
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn cli(args: &[&str]) -> Run {
    cli_with_stdin(args, None)
}

pub fn cli_with_stdin(args: &[&str], stdin: Option<&str>) -> Run {
    let mut child = Command::new(env!("CARGO_BIN_EXE_cpnet"))
        .args(args)
        .env_remove("CPNET_MAX_OUTCOMES")
        .env_remove("CPNET_MAX_TABLE_ROWS")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn cpnet");
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    }
    drop(child.stdin.take());
    let Output { status, stdout, stderr } = child.wait_with_output().unwrap();
    Run {
        code: status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&stdout).into_owned(),
        stderr: String::from_utf8_lossy(&stderr).into_owned(),
    }
}

/// `(label, args, expected exit code)` for every subcommand and outcome class.
pub fn exit_code_matrix() -> Vec<(&'static str, Vec<String>, i32)> {
    let p = |n: &str| data(n).display().to_string();
    let junk = std::env::temp_dir().join(format!("cpnet-junk-{}.cpn", std::process::id()));
    std::fs::write(&junk, "domain A = a, b\ncpt A:\n  : a > a\n").unwrap();
    let junk = junk.display().to_string();
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<String>>();
    let cyc = p("cyclic4.cpn");
    let acy = p("acyclic4.cpn");
    let two = p("twocycle.cpn");
    let game = p("prisoners.game");
    vec![
        ("validate ok", s(&["validate", &cyc]), 0),
        ("validate invalid", s(&["validate", &junk]), 2),
        ("validate missing file", s(&["validate", "/nonexistent/x.cpn"]), 2),
        ("validate table limit", s(&["validate", &acy, "--max-table-rows", "2"]), 3),
        ("solve ok", s(&["solve", &cyc]), 0),
        ("solve no optimum", s(&["solve", &two]), 0),
        ("solve oracle limit", s(&["solve", &cyc, "--method", "oracle", "--max-outcomes", "8"]), 3),
        ("solve acyclic on cycle", s(&["solve", &cyc, "--method", "acyclic"]), 2),
        ("solve invalid", s(&["solve", &junk]), 2),
        ("solve bad method", s(&["solve", &cyc, "--method", "magic"]), 2),
        ("reduce ok", s(&["reduce", &cyc]), 0),
        ("reduce invalid", s(&["reduce", &junk]), 2),
        ("eliminate ok", s(&["eliminate", &cyc, "--kind", "dominated", "--trace"]), 0),
        ("eliminate invalid", s(&["eliminate", &junk]), 2),
        ("to-game ok", s(&["to-game", &cyc]), 0),
        ("to-game limit", s(&["to-game", &cyc, "--max-outcomes", "4"]), 3),
        ("to-game invalid", s(&["to-game", &junk]), 2),
        ("to-cpnet ok", s(&["to-cpnet", &game]), 0),
        ("to-cpnet not a game", s(&["to-cpnet", &cyc]), 2),
        ("better yes", s(&["better", &two, "a b", "a b"]), 0),
        ("better no", s(&["better", &cyc, "abar b c d", "a b c d"]), 1),
        ("better bad outcome", s(&["better", &cyc, "A=a", "a b c d"]), 2),
        ("better limit", s(&["better", &cyc, "a b c d", "a b c d", "--max-outcomes", "3"]), 3),
        ("flips ok", s(&["flips", &cyc, "A=a B=b C=c D=d", "--dir", "up"]), 0),
        ("flips bad outcome", s(&["flips", &cyc, "A=z B=b C=c D=d"]), 2),
        ("gen ok", s(&["gen", "--vars", "3", "--domain", "2", "--seed", "1"]), 0),
        ("gen bad args", s(&["gen", "--vars", "0", "--domain", "2"]), 2),
        ("gen table limit", s(&["gen", "--vars", "3", "--domain", "3", "--acyclic", "--seed", "5", "--max-table-rows", "1"]), 3),
        ("unknown subcommand", s(&["frobnicate"]), 2),
    ]
}
