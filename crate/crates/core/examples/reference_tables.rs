// Pauli counts, exact energies and VQE energies for the three reference
// systems in one pass, with a reduced optimizer budget.

use z3gauge::config::{Command, Overrides, RunConfig};
use z3gauge::harness::{run_tables, tables_csv, tables_text};

pub fn run_example() -> z3gauge::Result<()> {
    let overrides = Overrides {
        restarts: Some(1),
        max_iterations: Some(80),
        ..Overrides::default()
    };
    let cfg = RunConfig::resolve(Command::Tables, None, &overrides)?;
    let rows = run_tables(&cfg)?;
    print!("{}", tables_text(&rows));
    print!("\n{}", tables_csv(&rows));
    Ok(())
}

#[allow(dead_code)]
fn main() -> z3gauge::Result<()> {
    run_example()
}
