// The library side of `wave run`: parse a config, run it into a directory,
// then re-check the directory.

use wavelab::run::{check_run_dir, parse_config, run};
use wavelab::Result;

const CONFIG: &str = "
scenario = peakon_antipeakon
grid.n_x = 1024
grid.n_xi = 2048
time.T = 1
time.dt = 0.01
checks = energy, structure
# coarse grid, so looser than the defaults
check.energy_tol = 1e-4
check.structure_tol = 5e-3
";

pub fn run_example() -> Result<()> {
    let spec = parse_config(CONFIG)?;
    let dir = std::env::temp_dir().join(format!("wavelab-config-run-{}", std::process::id()));
    let out = run(&spec, &dir)?;
    for (k, v) in out.report.entries() {
        println!("{k} = {v}");
    }
    let summary = check_run_dir(&dir)?;
    println!("exit code {} / re-check {}", out.exit_code, summary.exit_code);
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
