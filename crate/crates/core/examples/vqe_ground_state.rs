// Variational ground state of the two-site lattice on four qubits with an
// RyRz ansatz, checked against exact diagonalization.

use z3gauge::circuit::expectation_pauli;
use z3gauge::model::{qubit_hamiltonian, QubitLayout};
use z3gauge::pauli::{decompose, DEFAULT_THRESHOLD};
use z3gauge::{
    build_ansatz, eigh, minimize, prepare_state, Entanglement, LatticeSpec, SparseOperator,
    VqeConfig,
};

pub fn run_example() -> z3gauge::Result<()> {
    let spec = LatticeSpec::open_chain(2);
    let q = qubit_hamiltonian(&spec, QubitLayout::BosonMajor)?;
    let exact = eigh(&z3gauge::build_hamiltonian(&spec)?)?.ground_energy();

    let ansatz = build_ansatz(q.n_qubits, 3, Entanglement::Full);
    let config = VqeConfig {
        restarts: 2,
        seed: 7,
        ..VqeConfig::default()
    };
    let result = minimize(&SparseOperator::from_dense(&q.matrix), &ansatz, &config)?;
    println!(
        "{} parameters, {} evaluations, best restart {}",
        ansatz.param_count(),
        result.evaluations,
        result.best_restart
    );
    println!(
        "exact {exact:+.10}\nvqe   {:+.10}\ngap   {:.2e}",
        result.energy,
        result.energy - exact
    );

    // same state measured term by term
    let state = prepare_state(&ansatz, &result.optimal_params)?;
    let sum = decompose(&q.matrix, DEFAULT_THRESHOLD)?;
    println!("termwise energy {:+.10}", expectation_pauli(&state, &sum)?);

    let best = result.trace.best_so_far();
    for k in [0, best.len() / 4, best.len() / 2, best.len() - 1] {
        println!("  evaluation {k:>4}: best so far {:+.10}", best[k]);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> z3gauge::Result<()> {
    run_example()
}
