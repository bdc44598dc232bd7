// The full verification suite, one line per check.

use wavefield::verify::run_all;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let outcomes = run_all();
    for o in &outcomes {
        println!("{}", o.summary());
    }
    let failed = outcomes.iter().filter(|o| !o.passed()).count();
    if failed > 0 {
        return Err(format!("{failed} checks failed").into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
