//! Z₃ lattice gauge theory with staggered fermions on small lattices:
//! Hamiltonian construction, exact diagonalization, Pauli decomposition,
//! and a statevector VQE.

pub mod circuit;
pub mod config;
pub mod error;
pub mod format;
pub mod harness;
pub mod linalg;
pub mod model;
pub mod pauli;
pub mod vqe;

pub use circuit::{
    build_ansatz, energy, expectation, gradient, prepare_state, Ansatz, Entanglement,
    ParameterVector,
};
pub use config::{Command, EosGrid, Overrides, Padding, RunConfig};
pub use error::{Error, Result};
pub use harness::{
    run_ed, run_eos, run_pauli, run_tables, run_vqe, EdReport, EosPoint, PauliReport, TableRow,
    VqeReport,
};
pub use linalg::{eigh, kron, Eigh, OperatorMatrix, SparseOperator, StateVector, C64};
pub use model::{
    build_hamiltonian, qubit_hamiltonian, qubitize, LatticeSpec, QubitLayout, Topology,
};
pub use pauli::{decompose, reconstruct, term_count, Pauli, PauliString, PauliSum, PauliTerm};
pub use vqe::{minimize, ConvergenceTrace, OptimizerKind, VqeConfig, VqeResult};
