// Ground energy of the triangle against chemical potential at m = 1,
// on a coarse grid with a shallow ansatz, written as CSV and SVG.

use z3gauge::config::{Command, Overrides, RunConfig};
use z3gauge::harness::run_eos;

pub fn run_example() -> z3gauge::Result<()> {
    let out = std::env::temp_dir().join("z3gauge-eos-example");
    let overrides = Overrides {
        mu_start: Some(0.0),
        mu_end: Some(2.0),
        mu_step: Some(0.5),
        depth: Some(1),
        restarts: Some(1),
        max_iterations: Some(60),
        out_dir: Some(out.clone()),
        ..Overrides::default()
    };
    let cfg = RunConfig::resolve(Command::Eos, None, &overrides)?;
    println!(
        "m = {}, g = {}, padding lambda at mu = 0: {}",
        cfg.lattice.mass,
        cfg.lattice.coupling,
        cfg.padding_lambda()
    );
    for p in run_eos(&cfg)? {
        println!(
            "mu {:>4.2}  exact {:+.6}  vqe {:+.6}  gap {:.2e}  <N> {:.3}",
            p.mu, p.exact_energy, p.vqe_energy, p.gap, p.particle_number
        );
    }
    println!("wrote {}", out.display());
    Ok(())
}

#[allow(dead_code)]
fn main() -> z3gauge::Result<()> {
    run_example()
}
