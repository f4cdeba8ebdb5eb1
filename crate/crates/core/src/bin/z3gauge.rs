use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use z3gauge::config::{Command, Overrides, RunConfig};
use z3gauge::format::fmt_sig17;
use z3gauge::harness;
use z3gauge::{Entanglement, OptimizerKind, QubitLayout, Topology};

#[derive(Parser)]
#[command(
    name = "z3gauge",
    version,
    about = "Z3 lattice gauge theory: exact diagonalization, Pauli mapping, VQE"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Exact ground energy of the unpadded Hamiltonian
    Ed(Flags),
    /// VQE on the padded Hamiltonian
    Vqe(Flags),
    /// Pauli decomposition of the unit-padded Hamiltonian
    Pauli(Flags),
    /// Exact and VQE ground energy across a chemical-potential grid
    Eos(Flags),
    /// Pauli count, exact and VQE energy for the three reference systems
    Tables(Flags),
}

#[derive(Args)]
struct Flags {
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    #[arg(long)]
    g: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    m: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    mu: Option<f64>,
    #[arg(long)]
    n_sites: Option<usize>,
    #[arg(long)]
    n_links: Option<usize>,
    #[arg(long, value_name = "open|triangle")]
    topology: Option<Topology>,
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long, value_name = "full|linear")]
    entanglement: Option<Entanglement>,
    #[arg(long, value_name = "bfgs|nelder-mead")]
    optimizer: Option<OptimizerKind>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, conflicts_with = "safe_padding")]
    lambda: Option<f64>,
    #[arg(long)]
    safe_padding: bool,
    #[arg(long, value_name = "boson-major|fermion-major")]
    layout: Option<QubitLayout>,
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    mu_start: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    mu_end: Option<f64>,
    #[arg(long)]
    mu_step: Option<f64>,
    #[arg(long, value_name = "DIR", default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    no_plot: bool,
}

impl Flags {
    fn overrides(&self) -> Overrides {
        Overrides {
            topology: self.topology,
            n_sites: self.n_sites,
            n_links: self.n_links,
            coupling: self.g,
            mass: self.m,
            chem_potential: self.mu,
            lambda: self.lambda,
            safe_padding: self.safe_padding.then_some(true),
            layout: self.layout,
            threshold: self.threshold,
            depth: self.depth,
            entanglement: self.entanglement,
            optimizer: self.optimizer,
            max_iterations: self.max_iter,
            restarts: self.restarts,
            seed: self.seed,
            mu_start: self.mu_start,
            mu_end: self.mu_end,
            mu_step: self.mu_step,
            out_dir: Some(self.out.clone()),
            plot: self.no_plot.then_some(false),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (command, flags) = match &cli.command {
        Sub::Ed(f) => (Command::Ed, f),
        Sub::Vqe(f) => (Command::Vqe, f),
        Sub::Pauli(f) => (Command::Pauli, f),
        Sub::Eos(f) => (Command::Eos, f),
        Sub::Tables(f) => (Command::Tables, f),
    };
    match run(command, flags) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(command: Command, flags: &Flags) -> z3gauge::Result<()> {
    let cfg = RunConfig::resolve(command, flags.config.as_deref(), &flags.overrides())?;
    match command {
        Command::Ed => {
            let r = harness::run_ed(&cfg)?;
            println!("ground_energy = {}", fmt_sig17(r.ground_energy));
            println!("dim = {}  n_qubits = {}", r.dim, r.n_qubits);
        }
        Command::Vqe => {
            let r = harness::run_vqe(&cfg)?;
            println!("exact_energy = {}", fmt_sig17(r.exact_energy));
            println!("vqe_energy = {}", fmt_sig17(r.result.energy));
            println!("gap = {:.3e}  converged = {}", r.gap(), r.result.converged);
        }
        Command::Pauli => {
            let r = harness::run_pauli(&cfg)?;
            println!(
                "pauli_terms = {}  n_qubits = {}",
                r.sum.term_count(),
                r.n_qubits
            );
        }
        Command::Eos => {
            for p in harness::run_eos(&cfg)? {
                println!(
                    "mu = {:>6.3}  exact = {:>12.8}  vqe = {:>12.8}",
                    p.mu, p.exact_energy, p.vqe_energy
                );
            }
        }
        Command::Tables => print!("{}", harness::tables_text(&harness::run_tables(&cfg)?)),
    }
    if let Some(dir) = &cfg.out_dir {
        eprintln!("wrote {}", dir.display());
    }
    Ok(())
}
