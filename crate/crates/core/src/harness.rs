//! Drivers behind the command-line subcommands. Each `run_*` computes its
//! report and, when the config names an output directory, writes the
//! artifacts there together with `manifest.txt`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::circuit::{build_ansatz, expectation};
use crate::config::{Padding, RunConfig};
use crate::error::{Error, Result};
use crate::format::fmt_sig17;
use crate::linalg::{eigh, SparseOperator};
use crate::model::{build_hamiltonian, qubitize_with_layout, LatticeSpec, ModelOperators};
use crate::pauli::{decompose, PauliSum};
use crate::vqe::{minimize, VqeResult};

#[derive(Clone, Debug, PartialEq)]
pub struct EdReport {
    pub ground_energy: f64,
    /// `⟨N⟩` in the returned ground state.
    pub particle_number: f64,
    pub dim: usize,
    pub n_qubits: usize,
}

/// Exact diagonalization of the unpadded physical Hamiltonian.
pub fn exact_ground(spec: &LatticeSpec) -> Result<EdReport> {
    let ops = ModelOperators::new(spec)?;
    let h = crate::model::build_hamiltonian_from(spec, &ops)?;
    let eig = eigh(&h)?;
    let ground = eig.vector(0);
    Ok(EdReport {
        ground_energy: eig.ground_energy(),
        particle_number: expectation(&ground, &ops.total_number())?,
        dim: h.dim(),
        n_qubits: spec.n_qubits(),
    })
}

pub fn run_ed(cfg: &RunConfig) -> Result<EdReport> {
    let report = exact_ground(&cfg.lattice)?;
    if let Some(dir) = &cfg.out_dir {
        let mut s = String::new();
        kv(&mut s, "ground_energy", fmt_sig17(report.ground_energy));
        kv(&mut s, "particle_number", fmt_sig17(report.particle_number));
        kv(&mut s, "dim", report.dim);
        kv(&mut s, "n_qubits", report.n_qubits);
        write_outputs(dir, cfg, &[("summary.txt", s)])?;
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq)]
pub struct VqeReport {
    pub exact_energy: f64,
    pub result: VqeResult,
    pub n_qubits: usize,
    pub lambda: f64,
    pub pauli_terms: usize,
}

impl VqeReport {
    pub fn gap(&self) -> f64 {
        self.result.energy - self.exact_energy
    }
}

/// VQE on `spec` padded with `lambda`, compared with unpadded ED.
pub fn vqe_for(cfg: &RunConfig, spec: &LatticeSpec, lambda: f64) -> Result<VqeReport> {
    let h = build_hamiltonian(spec)?;
    let exact = eigh(&h)?.ground_energy();
    let q = qubitize_with_layout(&h, spec, lambda, cfg.layout)?;
    let pauli_terms = decompose(&q.matrix, cfg.threshold)?.term_count();
    let ansatz = build_ansatz(q.n_qubits, cfg.depth, cfg.entanglement);
    let result = minimize(&SparseOperator::from_dense(&q.matrix), &ansatz, &cfg.vqe)?;
    Ok(VqeReport {
        exact_energy: exact,
        result,
        n_qubits: q.n_qubits,
        lambda,
        pauli_terms,
    })
}

pub fn run_vqe(cfg: &RunConfig) -> Result<VqeReport> {
    let report = vqe_for(cfg, &cfg.lattice, cfg.padding_lambda())?;
    if let Some(dir) = &cfg.out_dir {
        write_outputs(
            dir,
            cfg,
            &[
                ("trace.csv", trace_csv(&report.result)),
                ("summary.txt", vqe_summary(&report)),
            ],
        )?;
    }
    Ok(report)
}

/// `evaluation,energy` rows of the winning restart.
pub fn trace_csv(result: &VqeResult) -> String {
    let mut s = String::from("evaluation,energy\n");
    for &(i, e) in result.trace.entries() {
        let _ = writeln!(s, "{i},{}", fmt_sig17(e));
    }
    s
}

fn vqe_summary(r: &VqeReport) -> String {
    let mut s = String::new();
    kv(&mut s, "exact_energy", fmt_sig17(r.exact_energy));
    kv(&mut s, "vqe_energy", fmt_sig17(r.result.energy));
    kv(&mut s, "gap", fmt_sig17(r.gap()));
    kv(&mut s, "pauli_terms", r.pauli_terms);
    kv(&mut s, "n_qubits", r.n_qubits);
    kv(&mut s, "lambda", fmt_sig17(r.lambda));
    kv(&mut s, "converged", r.result.converged);
    kv(&mut s, "gradient_norm", fmt_sig17(r.result.gradient_norm));
    kv(&mut s, "evaluations", r.result.evaluations);
    kv(&mut s, "restarts_used", r.result.restarts_used);
    kv(&mut s, "best_restart", r.result.best_restart);
    kv(&mut s, "seed", r.result.seed);
    s
}

#[derive(Clone, Debug, PartialEq)]
pub struct PauliReport {
    pub sum: PauliSum,
    pub n_qubits: usize,
    pub threshold: f64,
}

/// Decomposition of the `λ = 1` padded Hamiltonian, whatever the config
/// says about padding.
pub fn run_pauli(cfg: &RunConfig) -> Result<PauliReport> {
    let mut cfg = cfg.clone();
    cfg.padding = Padding::Lambda(1.0);
    cfg.lattice.padding_lambda = 1.0;
    let h = build_hamiltonian(&cfg.lattice)?;
    let q = qubitize_with_layout(&h, &cfg.lattice, 1.0, cfg.layout)?;
    let sum = decompose(&q.matrix, cfg.threshold)?;
    let report = PauliReport {
        n_qubits: q.n_qubits,
        threshold: cfg.threshold,
        sum,
    };
    if let Some(dir) = &cfg.out_dir {
        let mut s = String::new();
        kv(&mut s, "n_qubits", report.n_qubits);
        kv(&mut s, "pauli_terms", report.sum.term_count());
        kv(&mut s, "threshold", fmt_sig17(report.threshold));
        kv(&mut s, "layout", cfg.layout);
        write_outputs(
            dir,
            &cfg,
            &[
                ("pauli_terms.txt", report.sum.to_text()),
                ("summary.txt", s),
            ],
        )?;
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EosPoint {
    pub mu: f64,
    pub exact_energy: f64,
    pub vqe_energy: f64,
    /// `vqe_energy − exact_energy`
    pub gap: f64,
    /// `⟨N⟩` of the exact ground state.
    pub particle_number: f64,
}

/// Exact and VQE ground energies across the chemical-potential grid.
pub fn run_eos(cfg: &RunConfig) -> Result<Vec<EosPoint>> {
    cfg.eos.validate()?;
    let mut points = Vec::with_capacity(cfg.eos.len());
    for mu in cfg.eos.points() {
        let spec = cfg.lattice.clone().with_chem_potential(mu);
        let lambda = cfg.padding.lambda_for(&spec);
        let ed = exact_ground(&spec)?;
        let v = vqe_for(cfg, &spec, lambda)?;
        points.push(EosPoint {
            mu,
            exact_energy: ed.ground_energy,
            vqe_energy: v.result.energy,
            gap: v.result.energy - ed.ground_energy,
            particle_number: ed.particle_number,
        });
    }
    points.sort_by(|a, b| a.mu.total_cmp(&b.mu));
    if let Some(dir) = &cfg.out_dir {
        let mut files = vec![("eos.csv", eos_csv(&points))];
        if cfg.plot {
            files.push(("eos.svg", eos_svg(&points)));
        }
        write_outputs(dir, cfg, &files)?;
    }
    Ok(points)
}

pub fn eos_csv(points: &[EosPoint]) -> String {
    let mut s = String::from("mu,exact,vqe,gap\n");
    for p in points {
        let _ = writeln!(
            s,
            "{},{},{},{}",
            fmt_sig17(p.mu),
            fmt_sig17(p.exact_energy),
            fmt_sig17(p.vqe_energy),
            fmt_sig17(p.gap)
        );
    }
    s
}

/// Line chart of both curves against `μ`.
pub fn eos_svg(points: &[EosPoint]) -> String {
    const W: f64 = 640.0;
    const H: f64 = 400.0;
    const PAD: f64 = 60.0;
    let xs: Vec<f64> = points.iter().map(|p| p.mu).collect();
    let ys: Vec<f64> = points
        .iter()
        .flat_map(|p| [p.exact_energy, p.vqe_energy])
        .collect();
    let (x0, x1) = span(&xs);
    let (y0, y1) = span(&ys);
    let px = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
    let py = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);
    let polyline = |f: &dyn Fn(&EosPoint) -> f64| {
        points
            .iter()
            .map(|p| format!("{:.2},{:.2}", px(p.mu), py(f(p))))
            .collect::<Vec<_>>()
            .join(" ")
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<path d="M{PAD} {PAD} V{b} H{r}" fill="none" stroke="black"/>"#,
        b = H - PAD,
        r = W - PAD
    );
    for i in 0..=4 {
        let t = i as f64 / 4.0;
        let (xv, yv) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="middle">{:.2}</text>"#,
            px(xv),
            H - PAD + 18.0,
            xv
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{:.3}</text>"#,
            PAD - 6.0,
            py(yv) + 4.0,
            yv
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-size="13" text-anchor="middle">mu</text>"#,
        W / 2.0,
        H - 16.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" font-size="13" text-anchor="middle" transform="rotate(-90 16 {})">ground energy</text>"#,
        H / 2.0,
        H / 2.0
    );
    let _ = writeln!(
        s,
        r#"<polyline fill="none" stroke="black" stroke-width="2" points="{}"/>"#,
        polyline(&|p| p.exact_energy)
    );
    let _ = writeln!(
        s,
        r#"<polyline fill="none" stroke="red" stroke-width="1.5" stroke-dasharray="5,3" points="{}"/>"#,
        polyline(&|p| p.vqe_energy)
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-size="12">exact</text>"#,
        W - PAD - 60.0,
        PAD + 4.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-size="12" fill="red">vqe</text>"#,
        W - PAD - 60.0,
        PAD + 20.0
    );
    s.push_str("</svg>\n");
    s
}

fn span(v: &[f64]) -> (f64, f64) {
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi <= lo || hi.is_nan() || lo.is_nan() {
        let c = if lo.is_finite() { lo } else { 0.0 };
        (c - 0.5, c + 0.5)
    } else {
        (lo, hi)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableRow {
    pub system: &'static str,
    pub n_qubits: usize,
    pub pauli_terms: usize,
    pub exact_energy: f64,
    pub vqe_energy: f64,
    pub gap: f64,
}

/// The three reference systems: two sites and one link, a three-site open
/// chain, and the closed triangle. Coupling comes from the config; mass
/// and chemical potential are zero.
pub fn table_systems(cfg: &RunConfig) -> Vec<(&'static str, LatticeSpec)> {
    let g = cfg.lattice.coupling;
    vec![
        ("chain-2", LatticeSpec::open_chain(2).with_coupling(g)),
        ("chain-3", LatticeSpec::open_chain(3).with_coupling(g)),
        ("triangle", LatticeSpec::triangle().with_coupling(g)),
    ]
}

/// Pauli count at `λ = 1`, exact energy and VQE energy for each reference
/// system.
pub fn run_tables(cfg: &RunConfig) -> Result<Vec<TableRow>> {
    let mut rows = Vec::new();
    for (name, spec) in table_systems(cfg) {
        let v = vqe_for(cfg, &spec, 1.0)?;
        rows.push(TableRow {
            system: name,
            n_qubits: v.n_qubits,
            pauli_terms: v.pauli_terms,
            exact_energy: v.exact_energy,
            vqe_energy: v.result.energy,
            gap: v.gap(),
        });
    }
    if let Some(dir) = &cfg.out_dir {
        write_outputs(
            dir,
            cfg,
            &[
                ("tables.csv", tables_csv(&rows)),
                ("summary.txt", tables_text(&rows)),
            ],
        )?;
    }
    Ok(rows)
}

pub fn tables_csv(rows: &[TableRow]) -> String {
    let mut s = String::from("system,n_qubits,pauli_terms,exact,vqe,gap\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            r.system,
            r.n_qubits,
            r.pauli_terms,
            fmt_sig17(r.exact_energy),
            fmt_sig17(r.vqe_energy),
            fmt_sig17(r.gap)
        );
    }
    s
}

/// Aligned comparison table for terminals.
pub fn tables_text(rows: &[TableRow]) -> String {
    let mut s = format!(
        "{:<10} {:>6} {:>7} {:>14} {:>14} {:>12}\n",
        "system", "qubits", "paulis", "exact", "vqe", "gap"
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{:<10} {:>6} {:>7} {:>14.8} {:>14.8} {:>12.3e}",
            r.system, r.n_qubits, r.pauli_terms, r.exact_energy, r.vqe_energy, r.gap
        );
    }
    s
}

fn kv(s: &mut String, key: &str, value: impl std::fmt::Display) {
    let _ = writeln!(s, "{key} = {value}");
}

fn write_outputs(dir: &Path, cfg: &RunConfig, files: &[(&str, String)]) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut all = vec![("manifest.txt", cfg.manifest())];
    all.extend(files.iter().map(|(n, c)| (*n, c.clone())));
    for (name, contents) in all {
        let path = dir.join(name);
        fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{Command, EosGrid, Overrides};
    use crate::model::{QubitLayout, Topology};
    use crate::vqe::VqeConfig;

    fn quick(command: Command) -> RunConfig {
        let mut c = RunConfig::defaults(command);
        c.vqe = VqeConfig {
            restarts: 1,
            max_iterations: 30,
            ..c.vqe
        };
        c.depth = 1;
        c
    }

    fn chain2(mut c: RunConfig) -> RunConfig {
        c.lattice = LatticeSpec::open_chain(2).with_mass(c.lattice.mass);
        c
    }

    #[test]
    fn ed_is_independent_of_padding() {
        let mut c = quick(Command::Ed);
        let a = run_ed(&c).unwrap();
        c.padding = Padding::Safe;
        c.lattice.padding_lambda = 99.0;
        let b = run_ed(&c).unwrap();
        assert_eq!(a, b);
        assert_eq!((a.dim, a.n_qubits), (216, 8));
    }

    #[test]
    fn diagonal_limit_through_driver() {
        // with no hopping the minimum fills exactly the negative-stagger sites
        let mut c = quick(Command::Ed);
        for spec in [
            LatticeSpec::open_chain(2),
            LatticeSpec::open_chain(3),
            LatticeSpec::triangle(),
        ] {
            c.lattice = spec.with_mass(1.0).without_hopping();
            let negative = (1..=c.lattice.n_sites)
                .filter(|&j| c.lattice.stagger_sign(j) < 0.0)
                .count();
            let r = run_ed(&c).unwrap();
            assert!((r.ground_energy + negative as f64).abs() < 1e-12);
            assert!((r.particle_number - negative as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn vqe_writes_trace_and_summary() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = chain2(quick(Command::Vqe));
        c.out_dir = Some(dir.path().to_path_buf());
        let r = run_vqe(&c).unwrap();
        assert!(r.gap() >= -1e-9);
        let trace = fs::read_to_string(dir.path().join("trace.csv")).unwrap();
        assert!(trace.starts_with("evaluation,energy\n"));
        assert_eq!(trace.lines().count(), r.result.trace.len() + 1);
        let last: f64 = trace
            .lines()
            .last()
            .unwrap()
            .split(',')
            .nth(1)
            .unwrap()
            .parse()
            .unwrap();
        assert_eq!(last, r.result.energy);
        let summary = fs::read_to_string(dir.path().join("summary.txt")).unwrap();
        for key in ["exact_energy", "vqe_energy", "gap", "pauli_terms"] {
            assert!(summary.contains(&format!("{key} = ")), "{key}");
        }
        assert!(dir.path().join("manifest.txt").exists());
    }

    #[test]
    fn pauli_forces_unit_lambda() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = chain2(quick(Command::Pauli));
        c.padding = Padding::Lambda(5.0);
        c.out_dir = Some(dir.path().to_path_buf());
        let r = run_pauli(&c).unwrap();
        let mut unit = c.clone();
        unit.padding = Padding::Lambda(1.0);
        unit.out_dir = None;
        assert_eq!(run_pauli(&unit).unwrap(), r);
        let manifest = fs::read_to_string(dir.path().join("manifest.txt")).unwrap();
        assert!(manifest.contains("lambda = 1\n"));
        assert!(manifest.contains("threshold = 9.9999999999999998e-13\n"));
        assert!(manifest.contains(&format!("layout = {}\n", QubitLayout::BosonMajor)));
        let text = fs::read_to_string(dir.path().join("pauli_terms.txt")).unwrap();
        assert_eq!(PauliSum::from_text(&text).unwrap(), r.sum);
    }

    #[test]
    fn eos_rows_and_plot() {
        let dir = tempfile::tempdir().unwrap();
        let o = Overrides {
            mu_start: Some(0.0),
            mu_end: Some(0.3),
            mu_step: Some(0.15),
            restarts: Some(1),
            max_iterations: Some(20),
            depth: Some(1),
            out_dir: Some(dir.path().to_path_buf()),
            ..Default::default()
        };
        let c = RunConfig::resolve(Command::Eos, None, &o).unwrap();
        assert_eq!(c.lattice.topology, Topology::ClosedTriangle);
        let pts = run_eos(&c).unwrap();
        assert_eq!(pts.len(), 3);
        assert!(pts.iter().all(|p| p.gap >= -1e-9));
        let csv = fs::read_to_string(dir.path().join("eos.csv")).unwrap();
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.starts_with("mu,exact,vqe,gap\n"));
        assert!(!csv.contains('\r'));
        let svg = fs::read_to_string(dir.path().join("eos.svg")).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 2);
    }

    #[test]
    fn eos_grid_matches_row_count_formula() {
        let g = EosGrid {
            start: 0.0,
            end: 0.25,
            step: 0.1,
        };
        assert_eq!(g.points(), vec![0.0, 0.1, 0.2]);
    }

    #[test]
    fn svg_handles_flat_curves() {
        let p = EosPoint {
            mu: 0.0,
            exact_energy: 0.0,
            vqe_energy: 0.0,
            gap: 0.0,
            particle_number: 0.0,
        };
        let svg = eos_svg(&[p]);
        assert!(!svg.contains("NaN"));
    }

    #[test]
    fn tables_text_layout() {
        let row = TableRow {
            system: "chain-2",
            n_qubits: 4,
            pauli_terms: 22,
            exact_energy: -0.5,
            vqe_energy: -0.49,
            gap: 0.01,
        };
        let csv = tables_csv(std::slice::from_ref(&row));
        assert_eq!(csv, "system,n_qubits,pauli_terms,exact,vqe,gap\nchain-2,4,22,-0.5,-0.48999999999999999,0.01\n");
        assert_eq!(tables_text(&[row]).lines().count(), 2);
    }
}
