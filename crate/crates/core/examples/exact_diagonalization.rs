// Ground energies of the three reference lattices at g = 0.15, m = μ = 0,
// plus the hopping-free limit where the answer can be counted by hand.

use z3gauge::harness::exact_ground;
use z3gauge::LatticeSpec;

pub fn run_example() -> z3gauge::Result<()> {
    for (name, spec) in [
        ("two sites, one link", LatticeSpec::open_chain(2)),
        ("three-site open chain", LatticeSpec::open_chain(3)),
        ("closed triangle", LatticeSpec::triangle()),
    ] {
        let r = exact_ground(&spec)?;
        println!(
            "{name:<22} dim {:>3}  qubits {}  E0 = {:+.8}  <N> = {:.4}",
            r.dim, r.n_qubits, r.ground_energy, r.particle_number
        );
    }

    let frozen = LatticeSpec::open_chain(2).with_mass(1.0).without_hopping();
    println!(
        "no hopping, m = 1: E0 = {:+.8}",
        exact_ground(&frozen)?.ground_energy
    );

    println!("coupling scan on two sites:");
    for g in [0.0, 0.15, 0.5, 1.0, 2.0] {
        let e = exact_ground(&LatticeSpec::open_chain(2).with_coupling(g))?.ground_energy;
        println!("  g = {g:<4} E0 = {e:+.8}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> z3gauge::Result<()> {
    run_example()
}
