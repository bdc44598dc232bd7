// Drives the command-line front end from code: a kernel scan written to a
// temporary directory, then the CSV and its sidecar read back.

use std::fs;

use wavefield::cli::{run, Command, Invocation};

const CONFIG: &str = r#"{
  "field": {"g": 1, "B": 2, "profile": "zero"},
  "eval": {"m": 1, "x_a": [0, 0, 0, 0], "x_b": [1, 0.5, 0, 0], "pL": [0.3, 1.5]},
  "command": {"grid": {"param": "e0", "start": 0.1, "stop": 3.3, "count": 33}}
}"#;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join(format!("wavefield-example-{}", std::process::id()));
    fs::create_dir_all(&dir)?;
    let config = dir.join("kernel.json");
    fs::write(&config, CONFIG)?;

    let report = run(&Invocation {
        command: Command::Kernel,
        config: Some(config),
        out: dir.join("kernel.csv"),
        angle: None,
        profile_sign_toggle: false,
    })?;
    for line in &report.lines {
        println!("{line}");
    }
    let csv = fs::read_to_string(&report.csv)?;
    for row in csv.lines().filter(|l| l.ends_with("true")) {
        println!("flagged: {row}");
    }
    let sidecar: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report.sidecar)?)?;
    println!("contour convention: {}", sidecar["conventions"]["contour"]);
    fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
