//! Invocations shared by the CLI tests and the acceptance run.
#![allow(dead_code)]

use std::path::Path;
use std::process::Command;

pub fn modlaw() -> Command {
    Command::new(env!("CARGO_BIN_EXE_modlaw"))
}

pub fn write_graph(dir: &Path) -> String {
    let path = dir.join("g.json");
    std::fs::write(&path, r#"{"n":5,"edges":[[0,1],[1,2],[0,2],[2,3],[3,4]]}"#).unwrap();
    path.to_string_lossy().into_owned()
}

/// Arguments for every subcommand at sizes that finish in a second or two.
pub fn invocations(graph: &str) -> Vec<Vec<String>> {
    let raw: Vec<Vec<&str>> = vec![
        vec!["eval", "--graph", graph, "--formula", "parity y. E(x,y)", "--bind", "x=2", "--psi-q", "2"],
        vec!["limit", "--formula", "mod[3,0] x. mod[3,1] y. E(x,y)", "--q", "3", "--edge-polynomial", "3"],
        vec!["freq", "--graph", graph, "--a", "3", "--q", "2", "--roots", "0"],
        vec!["equidist", "--patterns", "K3;P3", "--n", "20", "--samples", "3000", "--seed", "5"],
        vec!["freqdist", "--q", "3", "--a", "3", "--n", "16", "--samples", "3000", "--seed", "5"],
        vec!["labelled", "--n", "16", "--samples", "3000", "--seed", "5"],
        vec!["gowers", "--gip", "12,2", "--p", "0.3", "--d", "2", "--samples", "4000", "--seed", "5"],
        vec!["bias", "--gip", "20,2", "--p", "0.3", "--mode", "mc", "--samples", "4000", "--seed", "5"],
        vec![
            "convergence",
            "--formula",
            "exists x. !parity y. E(x,y)",
            "--q",
            "2",
            "--n-list",
            "12,13",
            "--samples",
            "500",
        ],
    ];
    raw.into_iter().map(|v| v.into_iter().map(String::from).collect()).collect()
}

fn run_to(args: &[String], threads: usize, out: &Path) -> Result<Vec<u8>, String> {
    let status = modlaw()
        .args(args)
        .args(["--threads", &threads.to_string(), "--json-out"])
        .arg(out)
        .output()
        .map_err(|e| e.to_string())?;
    if status.status.code() != Some(0) {
        return Err(format!("{args:?} with {threads} threads exited with {:?}", status.status.code()));
    }
    let bytes = std::fs::read(out).map_err(|e| e.to_string())?;
    if bytes.is_empty() {
        return Err(format!("{args:?} wrote nothing"));
    }
    Ok(bytes)
}

/// Runs every subcommand with one and with four workers and compares the
/// JSON byte for byte. Returns how many subcommands were compared.
pub fn thread_determinism() -> Result<usize, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let graph = write_graph(dir.path());
    let all = invocations(&graph);
    for args in &all {
        let a = run_to(args, 1, &dir.path().join("a.json"))?;
        let b = run_to(args, 4, &dir.path().join("b.json"))?;
        if a != b {
            return Err(format!("{} differs between 1 and 4 workers", args[0]));
        }
    }
    Ok(all.len())
}
