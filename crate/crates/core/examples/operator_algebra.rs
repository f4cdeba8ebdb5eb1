// Builds the single-link clock operators and the Jordan–Wigner fermions of
// a two-site lattice, then checks the relations they must satisfy.

use z3gauge::linalg::{dagger, OperatorMatrix};
use z3gauge::model::{clock_p, clock_x, fermion_op, link_ops, link_phase, sylvester};

pub fn run_example() -> z3gauge::Result<()> {
    let x = clock_x();
    let s = sylvester();
    let p = clock_p();
    println!("X = {x:?}");
    println!("S = {s:?}");

    let s_dag_s = s.matmul(&dagger(&s))?;
    println!(
        "|S S^dag - I| = {:.1e}",
        (&s_dag_s - &OperatorMatrix::identity(3)).max_abs()
    );
    let spectrum = z3gauge::eigh(&p)?.values;
    println!("spec(P) = {spectrum:?}");

    let u = link_phase(0.15);
    println!(
        "U(A) at g = 0.15: diag phases {:?}",
        (0..3).map(|i| u[(i, i)].arg()).collect::<Vec<_>>()
    );

    // two sites, one link
    let (n_sites, n_links) = (2, 1);
    let c1 = fermion_op(1, n_sites, n_links)?;
    let c2 = fermion_op(2, n_sites, n_links)?;
    let id = OperatorMatrix::identity(c1.dim());
    let canonical = (&c1.anticommutator(&dagger(&c1))? - &id).max_abs();
    let mixed = c1.anticommutator(&dagger(&c2))?.max_abs();
    let pauli = c1.anticommutator(&c2)?.max_abs();
    println!("{{c1, c1^dag}} - 1: {canonical:.1e}   {{c1, c2^dag}}: {mixed:.1e}   {{c1, c2}}: {pauli:.1e}");

    let (a1, e1) = link_ops(1, n_sites, n_links)?;
    let commutes_with_fermions = a1
        .commutator(&c1)?
        .max_abs()
        .max(e1.commutator(&c2)?.max_abs());
    println!("[A, c] and [E, c]: {commutes_with_fermions:.1e}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> z3gauge::Result<()> {
    run_example()
}
