//! Z₃ gauge links coupled to staggered fermions.
//!
//! The physical Hilbert space is `(C²)^{⊗ sites} ⊗ (C³)^{⊗ links}` with the
//! fermionic factors leftmost. Fermions are the explicit sign-string
//! matrices `diag(1,-1)^{⊗(j-1)} ⊗ σ⁺ ⊗ I₂^{⊗…}`; each link carries the
//! clock position `X = diag(-1,0,1)` and its conjugate field
//! `P = S† X S`, with `S` the 3×3 Sylvester matrix.
//!
//! ```text
//! H = Σ_k ½ E_k²  +  m Σ_j (-1)^j n_j  +  μ Σ_j n_j
//!     + (i/2) Σ_links [ U(A_k) c†_head c_tail − h.c. ],   U(A) = e^{i g (2π/3) A}
//! ```

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{dagger, direct_sum_pad, kron_all, OperatorMatrix, C64};

/// Largest number of sites the builder accepts.
pub const MAX_SITES: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Topology {
    OpenChain,
    ClosedTriangle,
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Topology::OpenChain => "open",
            Topology::ClosedTriangle => "triangle",
        })
    }
}

impl FromStr for Topology {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "open" | "chain" | "open-chain" => Ok(Topology::OpenChain),
            "triangle" | "closed-triangle" => Ok(Topology::ClosedTriangle),
            other => Err(format!(
                "unknown topology `{other}` (expected open|triangle)"
            )),
        }
    }
}

/// Physical parameters and topology of one Hamiltonian instance.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeSpec {
    pub n_sites: usize,
    pub n_links: usize,
    pub topology: Topology,
    pub mass: f64,
    pub coupling: f64,
    pub chem_potential: f64,
    /// Diagonal value of the identity block adjoined during qubitization.
    pub padding_lambda: f64,
    /// Site `j` (1-based) carries `(-1)^(j - 1 + stagger_offset)`; the
    /// default 1 puts `-m` on site 1.
    pub stagger_offset: u8,
    /// Zeroes the hopping term when false; used by diagonal-limit checks.
    pub hopping_enabled: bool,
}

impl LatticeSpec {
    pub fn open_chain(n_sites: usize) -> Self {
        Self {
            n_sites,
            n_links: n_sites.saturating_sub(1),
            topology: Topology::OpenChain,
            mass: 0.0,
            coupling: 0.15,
            chem_potential: 0.0,
            padding_lambda: 1.0,
            stagger_offset: 1,
            hopping_enabled: true,
        }
    }

    pub fn triangle() -> Self {
        Self {
            n_sites: 3,
            n_links: 3,
            topology: Topology::ClosedTriangle,
            ..Self::open_chain(3)
        }
    }

    pub fn with_mass(mut self, m: f64) -> Self {
        self.mass = m;
        self
    }

    pub fn with_coupling(mut self, g: f64) -> Self {
        self.coupling = g;
        self
    }

    pub fn with_chem_potential(mut self, mu: f64) -> Self {
        self.chem_potential = mu;
        self
    }

    pub fn with_padding_lambda(mut self, lambda: f64) -> Self {
        self.padding_lambda = lambda;
        self
    }

    pub fn without_hopping(mut self) -> Self {
        self.hopping_enabled = false;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_sites < 2 || self.n_sites > MAX_SITES {
            return Err(Error::InvalidLattice(format!(
                "n_sites must be in 2..={MAX_SITES}, got {}",
                self.n_sites
            )));
        }
        match self.topology {
            Topology::OpenChain if self.n_links != self.n_sites - 1 => {
                return Err(Error::InvalidLattice(format!(
                    "open chain with {} sites needs n_links = {}, got {}",
                    self.n_sites,
                    self.n_sites - 1,
                    self.n_links
                )))
            }
            Topology::ClosedTriangle if self.n_sites != 3 || self.n_links != 3 => {
                return Err(Error::InvalidLattice(format!(
                    "closed triangle needs n_sites = n_links = 3, got {} and {}",
                    self.n_sites, self.n_links
                )))
            }
            _ => {}
        }
        if self.stagger_offset > 1 {
            return Err(Error::InvalidLattice(format!(
                "stagger_offset must be 0 or 1, got {}",
                self.stagger_offset
            )));
        }
        for (name, v) in [
            ("mass", self.mass),
            ("coupling", self.coupling),
            ("chem_potential", self.chem_potential),
            ("padding_lambda", self.padding_lambda),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidLattice(format!(
                    "{name} must be finite, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// `2^sites · 3^links`
    pub fn physical_dim(&self) -> usize {
        (1usize << self.n_sites) * 3usize.pow(self.n_links as u32)
    }

    /// Qubits needed after padding the physical space to a power of two.
    pub fn n_qubits(&self) -> usize {
        ceil_log2(self.physical_dim())
    }

    /// Hopping bonds, one per link, with 1-based site and link labels.
    pub fn bonds(&self) -> Vec<Bond> {
        (1..=self.n_links)
            .map(|k| Bond {
                link: k,
                tail: k,
                head: if k == self.n_sites { 1 } else { k + 1 },
            })
            .collect()
    }

    /// `(-1)^j` for the 1-based site `j` under the configured offset.
    pub fn stagger_sign(&self, site: usize) -> f64 {
        if (site - 1 + self.stagger_offset as usize).is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }
}

/// A hop `c†_head c_tail` dressed by link `link`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bond {
    pub link: usize,
    pub tail: usize,
    pub head: usize,
}

pub(crate) fn ceil_log2(n: usize) -> usize {
    assert!(n >= 1);
    (usize::BITS - (n - 1).leading_zeros()) as usize
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Clock position operator `diag(-1, 0, 1)`.
pub fn clock_x() -> OperatorMatrix {
    OperatorMatrix::from_real_diag(&[-1.0, 0.0, 1.0])
}

/// `(1/√3)·[[ω,1,ω̄],[1,1,1],[ω̄,1,ω]]` with `ω = e^{2πi/3}`.
pub fn sylvester() -> OperatorMatrix {
    let s = 1.0 / 3f64.sqrt();
    let w = C64::from_polar(s, 2.0 * PI / 3.0);
    let wb = w.conj();
    let one = c(s, 0.0);
    OperatorMatrix::from_rows(&[&[w, one, wb], &[one, one, one], &[wb, one, w]])
        .expect("3x3 literal")
}

/// Electric field operator `S† X S`.
pub fn clock_p() -> OperatorMatrix {
    let s = sylvester();
    &(&dagger(&s) * &clock_x()) * &s
}

/// `e^{i g (2π/3) X}`, exact because `X` is diagonal.
pub fn link_phase(coupling: f64) -> OperatorMatrix {
    let theta = coupling * 2.0 * PI / 3.0;
    OperatorMatrix::from_diag(&[
        C64::from_polar(1.0, -theta),
        c(1.0, 0.0),
        C64::from_polar(1.0, theta),
    ])
}

fn sigma_plus() -> OperatorMatrix {
    OperatorMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).expect("2x2 literal")
}

fn sign_string() -> OperatorMatrix {
    OperatorMatrix::from_real_diag(&[1.0, -1.0])
}

fn check_index(what: &'static str, index: usize, max: usize) -> Result<()> {
    if index == 0 || index > max {
        return Err(Error::IndexOutOfRange { what, index, max });
    }
    Ok(())
}

/// Annihilation operator of site `j` (1-based) on the full physical space.
pub fn fermion_op(j: usize, n_sites: usize, n_links: usize) -> Result<OperatorMatrix> {
    check_index("site", j, n_sites)?;
    let z = sign_string();
    let sp = sigma_plus();
    let i2 = OperatorMatrix::identity(2);
    let bosons = OperatorMatrix::identity(3usize.pow(n_links as u32));
    let factors = (1..=n_sites)
        .map(|site| match site.cmp(&j) {
            std::cmp::Ordering::Less => &z,
            std::cmp::Ordering::Equal => &sp,
            std::cmp::Ordering::Greater => &i2,
        })
        .chain(std::iter::once(&bosons));
    kron_all(factors)
}

/// Places a 3×3 operator on link `k` (1-based) of the full space.
pub fn lift_link(
    op: &OperatorMatrix,
    k: usize,
    n_sites: usize,
    n_links: usize,
) -> Result<OperatorMatrix> {
    check_index("link", k, n_links)?;
    let fermions = OperatorMatrix::identity(1 << n_sites);
    let i3 = OperatorMatrix::identity(3);
    let factors =
        std::iter::once(&fermions)
            .chain((1..=n_links).map(|link| if link == k { op } else { &i3 }));
    kron_all(factors)
}

/// `(A_k, E_k)`: clock position and electric field of link `k`.
pub fn link_ops(
    k: usize,
    n_sites: usize,
    n_links: usize,
) -> Result<(OperatorMatrix, OperatorMatrix)> {
    Ok((
        lift_link(&clock_x(), k, n_sites, n_links)?,
        lift_link(&clock_p(), k, n_sites, n_links)?,
    ))
}

/// Every site and link operator of one lattice, on the physical space.
#[derive(Clone, Debug)]
pub struct ModelOperators {
    pub fermion_ops: Vec<OperatorMatrix>,
    pub link_pos_ops: Vec<OperatorMatrix>,
    pub link_field_ops: Vec<OperatorMatrix>,
    pub physical_dim: usize,
}

impl ModelOperators {
    pub fn new(spec: &LatticeSpec) -> Result<Self> {
        spec.validate()?;
        let (s, l) = (spec.n_sites, spec.n_links);
        let fermion_ops = (1..=s)
            .map(|j| fermion_op(j, s, l))
            .collect::<Result<Vec<_>>>()?;
        let (link_pos_ops, link_field_ops) = (1..=l)
            .map(|k| link_ops(k, s, l))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .unzip();
        Ok(Self {
            fermion_ops,
            link_pos_ops,
            link_field_ops,
            physical_dim: spec.physical_dim(),
        })
    }

    /// `c_j† c_j` for 1-based `j`.
    pub fn number_op(&self, j: usize) -> OperatorMatrix {
        let cj = &self.fermion_ops[j - 1];
        &dagger(cj) * cj
    }

    /// Total fermion number `Σ_j n_j`.
    pub fn total_number(&self) -> OperatorMatrix {
        let mut n = OperatorMatrix::zeros(self.physical_dim);
        for j in 1..=self.fermion_ops.len() {
            n.add_scaled(&self.number_op(j), c(1.0, 0.0));
        }
        n
    }
}

/// Electric, mass and chemical-potential parts only (no hopping).
pub fn mass_term(spec: &LatticeSpec, ops: &ModelOperators) -> OperatorMatrix {
    let mut h = OperatorMatrix::zeros(ops.physical_dim);
    for j in 1..=spec.n_sites {
        h.add_scaled(&ops.number_op(j), c(spec.mass * spec.stagger_sign(j), 0.0));
    }
    h
}

/// `(i/2) Σ_bonds [U(A_k) c†_head c_tail − h.c.]`
pub fn hopping_term(spec: &LatticeSpec, ops: &ModelOperators) -> Result<OperatorMatrix> {
    let phase = link_phase(spec.coupling);
    let mut h = OperatorMatrix::zeros(ops.physical_dim);
    for bond in spec.bonds() {
        let u = lift_link(&phase, bond.link, spec.n_sites, spec.n_links)?;
        let hop =
            dagger(&ops.fermion_ops[bond.head - 1]).matmul(&ops.fermion_ops[bond.tail - 1])?;
        let t = u.matmul(&hop)?;
        let anti = &t - &dagger(&t);
        h.add_scaled(&anti, c(0.0, 0.5));
    }
    Ok(h)
}

/// Hamiltonian on the physical (unpadded) space.
pub fn build_hamiltonian(spec: &LatticeSpec) -> Result<OperatorMatrix> {
    let ops = ModelOperators::new(spec)?;
    build_hamiltonian_from(spec, &ops)
}

pub fn build_hamiltonian_from(spec: &LatticeSpec, ops: &ModelOperators) -> Result<OperatorMatrix> {
    let mut h = OperatorMatrix::zeros(ops.physical_dim);
    for e in &ops.link_field_ops {
        h.add_scaled(&e.matmul(e)?, c(0.5, 0.0));
    }
    h.add_scaled(&mass_term(spec, ops), c(1.0, 0.0));
    if spec.chem_potential != 0.0 {
        h.add_scaled(&ops.total_number(), c(spec.chem_potential, 0.0));
    }
    if spec.hopping_enabled {
        h.add_scaled(&hopping_term(spec, ops)?, c(1.0, 0.0));
    }
    Ok(h)
}

/// How physical basis states are laid out on the qubit register before
/// padding.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum QubitLayout {
    /// Physical order as built (fermions most significant); padding is a
    /// plain direct sum.
    FermionMajor,
    /// Link (qutrit) digits most significant, fermion bits least
    /// significant; the padded block sits at the top of every fermion
    /// sector. This is the layout whose Pauli counts match the reference
    /// tables.
    #[default]
    BosonMajor,
}

impl fmt::Display for QubitLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QubitLayout::FermionMajor => "fermion-major",
            QubitLayout::BosonMajor => "boson-major",
        })
    }
}

impl FromStr for QubitLayout {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "fermion-major" => Ok(QubitLayout::FermionMajor),
            "boson-major" => Ok(QubitLayout::BosonMajor),
            other => Err(format!(
                "unknown layout `{other}` (expected fermion-major|boson-major)"
            )),
        }
    }
}

/// A Hamiltonian embedded in `n_qubits` qubits.
#[derive(Clone, Debug)]
pub struct Qubitized {
    pub matrix: OperatorMatrix,
    pub n_qubits: usize,
}

/// Pads `h` to the next power of two with `λ` on the adjoined diagonal.
pub fn qubitize(h: &OperatorMatrix, lambda: f64) -> Result<Qubitized> {
    let n_qubits = ceil_log2(h.dim());
    Ok(Qubitized {
        matrix: direct_sum_pad(h, 1 << n_qubits, lambda)?,
        n_qubits,
    })
}

/// Register index of each physical basis state under `layout`.
pub fn register_map(n_sites: usize, n_links: usize, layout: QubitLayout) -> Vec<usize> {
    let boson_dim = 3usize.pow(n_links as u32);
    let dim = (1usize << n_sites) * boson_dim;
    match layout {
        QubitLayout::FermionMajor => (0..dim).collect(),
        QubitLayout::BosonMajor => (0..dim)
            .map(|i| {
                let (f, b) = (i / boson_dim, i % boson_dim);
                (b << n_sites) | f
            })
            .collect(),
    }
}

/// Qubitizes a physical Hamiltonian of `spec` under the given layout.
pub fn qubitize_with_layout(
    h: &OperatorMatrix,
    spec: &LatticeSpec,
    lambda: f64,
    layout: QubitLayout,
) -> Result<Qubitized> {
    if h.dim() != spec.physical_dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.physical_dim(),
            actual: h.dim(),
        });
    }
    if layout == QubitLayout::FermionMajor {
        return qubitize(h, lambda);
    }
    let n_qubits = ceil_log2(h.dim());
    let size = 1usize << n_qubits;
    let map = register_map(spec.n_sites, spec.n_links, layout);
    let mut out = OperatorMatrix::zeros(size);
    let mut used = vec![false; size];
    for (i, &ri) in map.iter().enumerate() {
        used[ri] = true;
        for (j, &rj) in map.iter().enumerate() {
            out[(ri, rj)] = h[(i, j)];
        }
    }
    for (r, _) in used.iter().enumerate().filter(|(_, &u)| !u) {
        out[(r, r)] = c(lambda, 0.0);
    }
    Ok(Qubitized {
        matrix: out,
        n_qubits,
    })
}

/// Builds and qubitizes `spec` with its own `padding_lambda`.
pub fn qubit_hamiltonian(spec: &LatticeSpec, layout: QubitLayout) -> Result<Qubitized> {
    let h = build_hamiltonian(spec)?;
    qubitize_with_layout(&h, spec, spec.padding_lambda, layout)
}

/// Padding value that keeps the adjoined block above every physical level:
/// `10·(2 + |μ| + |m|)`.
pub fn safe_padding_lambda(spec: &LatticeSpec) -> f64 {
    10.0 * (1.0 + spec.chem_potential.abs() + spec.mass.abs() + 1.0)
}
