// Resolves a config file plus overrides, then reads the written manifest
// back in to show it reproduces the same run.

use z3gauge::config::{Command, Overrides, RunConfig};

pub fn run_example() -> z3gauge::Result<()> {
    let dir = std::env::temp_dir().join("z3gauge-config-example");
    std::fs::create_dir_all(&dir).map_err(|e| z3gauge::Error::Io {
        path: dir.clone(),
        source: e,
    })?;
    let path = dir.join("run.cfg");
    let text = "# two-site chain\ntopology = open\nn_sites = 2\nmu = 0.0\nseed = 42\n";
    std::fs::write(&path, text).map_err(|e| z3gauge::Error::Io {
        path: path.clone(),
        source: e,
    })?;

    let flags = Overrides {
        chem_potential: Some(0.5),
        ..Overrides::default()
    };
    let cfg = RunConfig::resolve(Command::Vqe, Some(&path), &flags)?;
    println!(
        "resolved n_links = {}, mu = {}",
        cfg.lattice.n_links, cfg.lattice.chem_potential
    );
    print!("{}", cfg.manifest());

    let manifest = dir.join("manifest.txt");
    std::fs::write(&manifest, cfg.manifest()).map_err(|e| z3gauge::Error::Io {
        path: manifest.clone(),
        source: e,
    })?;
    let again = RunConfig::resolve(Command::Vqe, Some(&manifest), &Overrides::default())?;
    println!("manifest reproduces config: {}", again == cfg);

    let bad = Overrides {
        n_sites: Some(3),
        topology: Some(z3gauge::Topology::OpenChain),
        n_links: Some(3),
        ..Overrides::default()
    };
    match RunConfig::resolve(Command::Ed, None, &bad) {
        Err(e) => println!("rejected: {e} (exit code {})", e.exit_code()),
        Ok(_) => println!("unexpectedly accepted"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> z3gauge::Result<()> {
    run_example()
}
