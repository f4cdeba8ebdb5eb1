// Pads each reference Hamiltonian to a qubit register, expands it in Pauli
// strings, and rebuilds it from the expansion.

use z3gauge::model::{qubit_hamiltonian, QubitLayout};
use z3gauge::pauli::{decompose, reconstruct, DEFAULT_THRESHOLD};
use z3gauge::LatticeSpec;

pub fn run_example() -> z3gauge::Result<()> {
    for spec in [
        LatticeSpec::open_chain(2),
        LatticeSpec::open_chain(3),
        LatticeSpec::triangle(),
    ] {
        for layout in [QubitLayout::BosonMajor, QubitLayout::FermionMajor] {
            let q = qubit_hamiltonian(&spec, layout)?;
            let sum = decompose(&q.matrix, DEFAULT_THRESHOLD)?;
            let err = (&reconstruct(&sum) - &q.matrix).max_abs();
            println!(
                "{} sites, {} links, {layout:<13}: {} qubits, {:>5} terms, round-trip {err:.1e}",
                spec.n_sites,
                spec.n_links,
                q.n_qubits,
                sum.term_count()
            );
        }
    }

    let q = qubit_hamiltonian(&LatticeSpec::open_chain(2), QubitLayout::BosonMajor)?;
    let sum = decompose(&q.matrix, DEFAULT_THRESHOLD)?;
    println!("two-site expansion:");
    print!("{}", sum.to_text());
    Ok(())
}

#[allow(dead_code)]
fn main() -> z3gauge::Result<()> {
    run_example()
}
