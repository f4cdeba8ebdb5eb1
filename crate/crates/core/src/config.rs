//! Run configuration: a flat `key = value` file, command-line overrides,
//! and the resolved [`RunConfig`] that every driver consumes.
//!
//! Resolution order is built-in defaults, then the file, then flags. The
//! resolved config is written back out in the same syntax as `manifest.txt`,
//! so a manifest can be fed back in with `--config`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::circuit::Entanglement;
use crate::error::{Error, Result};
use crate::format::fmt_sig17;
use crate::model::{safe_padding_lambda, LatticeSpec, QubitLayout, Topology};
use crate::pauli::DEFAULT_THRESHOLD;
use crate::vqe::{OptimizerKind, VqeConfig};

pub const DEFAULT_SEED: u64 = 1234;

/// Mass used by `eos` when neither the file nor a flag sets one.
pub const EOS_DEFAULT_MASS: f64 = 1.0;

/// Which driver the config is resolved for; a few defaults depend on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Ed,
    Vqe,
    Pauli,
    Eos,
    Tables,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Ed => "ed",
            Command::Vqe => "vqe",
            Command::Pauli => "pauli",
            Command::Eos => "eos",
            Command::Tables => "tables",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Padding {
    Lambda(f64),
    /// [`safe_padding_lambda`] evaluated per lattice.
    Safe,
}

impl Padding {
    pub fn lambda_for(self, spec: &LatticeSpec) -> f64 {
        match self {
            Padding::Lambda(l) => l,
            Padding::Safe => safe_padding_lambda(spec),
        }
    }
}

/// Chemical-potential grid for `eos`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EosGrid {
    pub start: f64,
    pub end: f64,
    pub step: f64,
}

impl Default for EosGrid {
    fn default() -> Self {
        Self {
            start: 0.0,
            end: 2.0,
            step: 0.1,
        }
    }
}

impl EosGrid {
    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::config(
                "mu_step",
                format!("must be positive, got {}", self.step),
            ));
        }
        if !(self.start.is_finite() && self.end.is_finite()) || self.end < self.start {
            return Err(Error::config(
                "mu_end",
                format!("must be >= mu_start ({}), got {}", self.start, self.end),
            ));
        }
        Ok(())
    }

    /// `⌊(end − start)/step⌋ + 1`, with a relative guard so a grid like
    /// `0..2 step 0.1` keeps its endpoint.
    pub fn len(&self) -> usize {
        let ratio = (self.end - self.start) / self.step;
        (ratio + 1e-9 * ratio.abs().max(1.0)).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len())
            .map(|i| self.start + i as f64 * self.step)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub lattice: LatticeSpec,
    pub depth: usize,
    pub entanglement: Entanglement,
    pub vqe: VqeConfig,
    pub eos: EosGrid,
    pub padding: Padding,
    pub layout: QubitLayout,
    pub threshold: f64,
    pub out_dir: Option<PathBuf>,
    /// Write `eos.svg` alongside `eos.csv`.
    pub plot: bool,
}

impl RunConfig {
    /// Built-in defaults with no file and no flags.
    pub fn defaults(command: Command) -> Self {
        Self::resolve(command, None, &Overrides::default()).expect("built-in defaults are valid")
    }

    /// Reads `path` (if any), applies `overrides`, fills defaults and
    /// validates.
    pub fn resolve(command: Command, path: Option<&Path>, overrides: &Overrides) -> Result<Self> {
        let mut merged = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
                Overrides::parse_file(&text)?
            }
            None => Overrides::default(),
        };
        merged.apply(overrides);
        merged.build(command)
    }

    /// Lambda that `vqe` and `eos` pad with.
    pub fn padding_lambda(&self) -> f64 {
        self.padding.lambda_for(&self.lattice)
    }

    /// Resolved settings in config-file syntax.
    pub fn manifest(&self) -> String {
        let l = &self.lattice;
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv("command", self.command.name().into());
        kv("topology", l.topology.to_string());
        kv("n_sites", l.n_sites.to_string());
        kv("n_links", l.n_links.to_string());
        kv("g", fmt_sig17(l.coupling));
        kv("m", fmt_sig17(l.mass));
        kv("mu", fmt_sig17(l.chem_potential));
        match self.padding {
            Padding::Lambda(v) => kv("lambda", fmt_sig17(v)),
            Padding::Safe => kv("safe_padding", "true".into()),
        }
        kv("layout", self.layout.to_string());
        kv("threshold", fmt_sig17(self.threshold));
        kv("depth", self.depth.to_string());
        kv("entanglement", self.entanglement.to_string());
        kv("optimizer", self.vqe.optimizer.to_string());
        kv("max_iter", self.vqe.max_iterations.to_string());
        kv("restarts", self.vqe.restarts.to_string());
        kv("seed", self.vqe.seed.to_string());
        kv("mu_start", fmt_sig17(self.eos.start));
        kv("mu_end", fmt_sig17(self.eos.end));
        kv("mu_step", fmt_sig17(self.eos.step));
        kv("plot", self.plot.to_string());
        s
    }
}

/// Partially specified settings: one source (file or flags) before merging.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub topology: Option<Topology>,
    pub n_sites: Option<usize>,
    pub n_links: Option<usize>,
    pub coupling: Option<f64>,
    pub mass: Option<f64>,
    pub chem_potential: Option<f64>,
    pub lambda: Option<f64>,
    pub safe_padding: Option<bool>,
    pub layout: Option<QubitLayout>,
    pub threshold: Option<f64>,
    pub depth: Option<usize>,
    pub entanglement: Option<Entanglement>,
    pub optimizer: Option<OptimizerKind>,
    pub max_iterations: Option<usize>,
    pub restarts: Option<usize>,
    pub seed: Option<u64>,
    pub mu_start: Option<f64>,
    pub mu_end: Option<f64>,
    pub mu_step: Option<f64>,
    pub out_dir: Option<PathBuf>,
    pub plot: Option<bool>,
}

impl Overrides {
    /// Parses `key = value` lines; `#` starts a comment. Unknown keys and
    /// repeated keys are errors.
    pub fn parse_file(text: &str) -> Result<Self> {
        let mut seen = BTreeMap::new();
        let mut out = Overrides::default();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::config(
                    format!("line {line_no}"),
                    format!("expected `key = value`, got `{line}`"),
                ));
            };
            let (key, value) = (key.trim(), value.trim());
            if let Some(prev) = seen.insert(key.to_string(), line_no) {
                return Err(Error::config(
                    key,
                    format!("set twice (lines {prev} and {line_no})"),
                ));
            }
            out.set(key, value, line_no)?;
        }
        Ok(out)
    }

    fn set(&mut self, key: &str, value: &str, line: usize) -> Result<()> {
        match key {
            "command" => {}
            "topology" => self.topology = Some(parse(key, value)?),
            "n_sites" => self.n_sites = Some(parse(key, value)?),
            "n_links" => self.n_links = Some(parse(key, value)?),
            "g" => self.coupling = Some(parse(key, value)?),
            "m" => self.mass = Some(parse(key, value)?),
            "mu" => self.chem_potential = Some(parse(key, value)?),
            "lambda" => self.lambda = Some(parse(key, value)?),
            "safe_padding" => self.safe_padding = Some(parse(key, value)?),
            "layout" => self.layout = Some(parse(key, value)?),
            "threshold" => self.threshold = Some(parse(key, value)?),
            "depth" => self.depth = Some(parse(key, value)?),
            "entanglement" => self.entanglement = Some(parse(key, value)?),
            "optimizer" => self.optimizer = Some(parse(key, value)?),
            "max_iter" => self.max_iterations = Some(parse(key, value)?),
            "restarts" => self.restarts = Some(parse(key, value)?),
            "seed" => self.seed = Some(parse(key, value)?),
            "mu_start" => self.mu_start = Some(parse(key, value)?),
            "mu_end" => self.mu_end = Some(parse(key, value)?),
            "mu_step" => self.mu_step = Some(parse(key, value)?),
            "out" => self.out_dir = Some(PathBuf::from(value)),
            "plot" => self.plot = Some(parse(key, value)?),
            _ => {
                return Err(Error::UnknownKey {
                    key: key.to_string(),
                    line,
                })
            }
        }
        Ok(())
    }

    /// Copies every field that `other` sets.
    pub fn apply(&mut self, other: &Overrides) {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f.clone(); } )* };
        }
        take!(
            topology,
            n_sites,
            n_links,
            coupling,
            mass,
            chem_potential,
            lambda,
            safe_padding,
            layout,
            threshold,
            depth,
            entanglement,
            optimizer,
            max_iterations,
            restarts,
            seed,
            mu_start,
            mu_end,
            mu_step,
            out_dir,
            plot
        );
        // an explicit lambda cancels a safe-padding request from an earlier source
        if other.lambda.is_some() && other.safe_padding.is_none() {
            self.safe_padding = None;
        }
        if other.safe_padding == Some(true) && other.lambda.is_none() {
            self.lambda = None;
        }
    }

    fn build(&self, command: Command) -> Result<RunConfig> {
        let topology = self.topology.unwrap_or(Topology::ClosedTriangle);
        let n_sites = self.n_sites.unwrap_or(3);
        let n_links = self.n_links.unwrap_or(match topology {
            Topology::OpenChain => n_sites.saturating_sub(1),
            Topology::ClosedTriangle => n_sites,
        });
        let default_mass = if command == Command::Eos {
            EOS_DEFAULT_MASS
        } else {
            0.0
        };

        if self.lambda.is_some() && self.safe_padding == Some(true) {
            return Err(Error::config(
                "lambda",
                "conflicts with safe_padding = true",
            ));
        }
        let padding = match (self.lambda, self.safe_padding) {
            (Some(l), _) => Padding::Lambda(l),
            (None, Some(true)) => Padding::Safe,
            (None, _) if command == Command::Eos => Padding::Safe,
            (None, _) => Padding::Lambda(1.0),
        };
        if let Padding::Lambda(l) = padding {
            if !l.is_finite() {
                return Err(Error::config("lambda", format!("must be finite, got {l}")));
            }
        }

        let mut lattice = LatticeSpec {
            n_sites,
            n_links,
            topology,
            ..LatticeSpec::open_chain(n_sites)
        }
        .with_coupling(self.coupling.unwrap_or(0.15))
        .with_mass(self.mass.unwrap_or(default_mass))
        .with_chem_potential(self.chem_potential.unwrap_or(0.0));
        lattice.padding_lambda = padding.lambda_for(&lattice);
        lattice.validate().map_err(|e| match e {
            Error::InvalidLattice(msg) => Error::config("n_links", msg),
            other => other,
        })?;

        let threshold = self.threshold.unwrap_or(DEFAULT_THRESHOLD);
        if !(threshold >= 0.0 && threshold.is_finite()) {
            return Err(Error::config(
                "threshold",
                format!("must be a finite value >= 0, got {threshold}"),
            ));
        }
        let defaults = VqeConfig::default();
        let vqe = VqeConfig {
            optimizer: self.optimizer.unwrap_or(defaults.optimizer),
            max_iterations: self.max_iterations.unwrap_or(defaults.max_iterations),
            restarts: self.restarts.unwrap_or(defaults.restarts),
            seed: self.seed.unwrap_or(DEFAULT_SEED),
        };
        if vqe.restarts == 0 {
            return Err(Error::config("restarts", "must be at least 1"));
        }
        let d = EosGrid::default();
        let eos = EosGrid {
            start: self.mu_start.unwrap_or(d.start),
            end: self.mu_end.unwrap_or(d.end),
            step: self.mu_step.unwrap_or(d.step),
        };
        if command == Command::Eos {
            eos.validate()?;
            if topology != Topology::ClosedTriangle {
                return Err(Error::config("topology", "eos runs on the closed triangle"));
            }
        }

        Ok(RunConfig {
            command,
            lattice,
            depth: self.depth.unwrap_or(3),
            entanglement: self.entanglement.unwrap_or_default(),
            vqe,
            eos,
            padding,
            layout: self.layout.unwrap_or_default(),
            threshold,
            out_dir: self.out_dir.clone(),
            plot: self.plot.unwrap_or(true),
        })
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e: T::Err| Error::config(key, format!("cannot parse `{value}`: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn file(text: &str) -> Overrides {
        Overrides::parse_file(text).unwrap()
    }

    #[test]
    fn empty_file_gives_documented_defaults() {
        let mut o = file("");
        o.apply(&Overrides::default());
        let c = o.build(Command::Vqe).unwrap();
        assert_eq!(c.lattice.topology, Topology::ClosedTriangle);
        assert_eq!((c.lattice.n_sites, c.lattice.n_links), (3, 3));
        assert_eq!(c.lattice.coupling, 0.15);
        assert_eq!(c.lattice.mass, 0.0);
        assert_eq!(c.lattice.chem_potential, 0.0);
        assert_eq!(c.vqe.seed, DEFAULT_SEED);
        assert_eq!(c.padding, Padding::Lambda(1.0));
        assert_eq!(c.eos, EosGrid::default());
        assert_eq!(c, RunConfig::defaults(Command::Vqe));
    }

    #[test]
    fn flag_overrides_file() {
        let mut o = file("mu = 0.0\n");
        o.apply(&Overrides {
            chem_potential: Some(0.5),
            ..Default::default()
        });
        assert_eq!(o.build(Command::Ed).unwrap().lattice.chem_potential, 0.5);
    }

    #[test]
    fn open_chain_with_three_links_is_rejected() {
        let o = Overrides {
            n_sites: Some(3),
            topology: Some(Topology::OpenChain),
            n_links: Some(3),
            ..Default::default()
        };
        let err = o.build(Command::Ed).unwrap_err();
        assert!(
            matches!(&err, Error::Config { field, .. } if field == "n_links"),
            "{err}"
        );
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn links_are_derived_from_topology() {
        let o = Overrides {
            n_sites: Some(2),
            topology: Some(Topology::OpenChain),
            ..Default::default()
        };
        assert_eq!(o.build(Command::Ed).unwrap().lattice.n_links, 1);
    }

    #[test]
    fn unknown_and_repeated_keys_fail() {
        assert!(matches!(
            Overrides::parse_file("g = 0.1\ncoupling_typo = 3\n"),
            Err(Error::UnknownKey { line: 2, .. })
        ));
        assert!(matches!(
            Overrides::parse_file("g = 1\ng = 2\n"),
            Err(Error::Config { .. })
        ));
        assert!(matches!(
            Overrides::parse_file("g 1\n"),
            Err(Error::Config { .. })
        ));
        assert!(
            matches!(Overrides::parse_file("depth = -1\n"), Err(Error::Config { field, .. }) if field == "depth")
        );
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let o = file("# header\n\n  g = 0.3  # inline\n");
        assert_eq!(o.coupling, Some(0.3));
    }

    #[test]
    fn eos_defaults_and_grid_checks() {
        let c = RunConfig::defaults(Command::Eos);
        assert_eq!(c.lattice.mass, EOS_DEFAULT_MASS);
        assert_eq!(c.padding, Padding::Safe);
        assert!(c.padding_lambda() > 10.0);
        assert_eq!(c.eos.len(), 21);

        let bad = Overrides {
            mu_step: Some(0.0),
            ..Default::default()
        };
        assert!(
            matches!(bad.build(Command::Eos), Err(Error::Config { field, .. }) if field == "mu_step")
        );
        let bad = Overrides {
            mu_start: Some(1.0),
            mu_end: Some(0.5),
            ..Default::default()
        };
        assert!(bad.build(Command::Eos).is_err());
        // grid checks only apply to eos
        assert!(bad.build(Command::Ed).is_ok());
    }

    #[test]
    fn grid_row_count() {
        for (start, end, step, n) in [
            (0.0, 2.0, 0.1, 21),
            (0.0, 1.0, 0.3, 4),
            (0.5, 0.5, 0.1, 1),
            (0.0, 0.95, 0.1, 10),
        ] {
            let g = EosGrid { start, end, step };
            assert_eq!(g.len(), n);
            assert_eq!(g.points().len(), n);
        }
    }

    #[test]
    fn lambda_and_safe_padding_conflict() {
        let mut o = file("lambda = 2\n");
        assert_eq!(o.build(Command::Vqe).unwrap().padding, Padding::Lambda(2.0));
        o.apply(&Overrides {
            safe_padding: Some(true),
            ..Default::default()
        });
        assert_eq!(o.build(Command::Vqe).unwrap().padding, Padding::Safe);
        let both = file("lambda = 2\nsafe_padding = true\n");
        assert!(both.build(Command::Vqe).is_err());
    }

    #[test]
    fn manifest_round_trips() {
        let mut o =
            file("g = 0.25\nm = 0.5\nmu = 0.1\nseed = 7\ndepth = 2\nentanglement = linear\n");
        o.apply(&Overrides::default());
        let c = o.build(Command::Vqe).unwrap();
        let again = file(&c.manifest()).build(Command::Vqe).unwrap();
        assert_eq!(c, again);
    }
}
