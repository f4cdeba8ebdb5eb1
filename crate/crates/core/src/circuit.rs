//! Statevector simulation of the layered Ry/Rz hardware-efficient ansatz.
//!
//! Layout: `[Ry layer, Rz layer]` followed by `depth` repetitions of
//! `[CX entangler block, Ry layer, Rz layer]`. Qubit 0 is the most
//! significant tensor factor, so it lives on the highest amplitude bit.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{OperatorMatrix, SparseOperator, StateVector, C64};
use crate::pauli::{string_expectation, PauliSum};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Entanglement {
    /// Every pair `(i, j)`, `i < j`, in lexicographic order.
    #[default]
    Full,
    /// Nearest neighbours `(i, i+1)`.
    Linear,
}

impl fmt::Display for Entanglement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Entanglement::Full => "full",
            Entanglement::Linear => "linear",
        })
    }
}

impl FromStr for Entanglement {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "full" => Ok(Entanglement::Full),
            "linear" => Ok(Entanglement::Linear),
            other => Err(format!(
                "unknown entanglement `{other}` (expected full|linear)"
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gate {
    Ry { qubit: usize, param: usize },
    Rz { qubit: usize, param: usize },
    Cx { control: usize, target: usize },
}

/// Circuit description plus the flat gate list it expands to.
#[derive(Clone, Debug, PartialEq)]
pub struct Ansatz {
    n_qubits: usize,
    depth: usize,
    entanglement: Entanglement,
    pairs: Vec<(usize, usize)>,
    gates: Vec<Gate>,
}

impl Ansatz {
    pub fn new(n_qubits: usize, depth: usize, entanglement: Entanglement) -> Self {
        assert!(n_qubits >= 1, "ansatz needs at least one qubit");
        let pairs: Vec<(usize, usize)> = match entanglement {
            Entanglement::Full => (0..n_qubits)
                .flat_map(|i| ((i + 1)..n_qubits).map(move |j| (i, j)))
                .collect(),
            Entanglement::Linear => (0..n_qubits.saturating_sub(1))
                .map(|i| (i, i + 1))
                .collect(),
        };

        let mut gates = Vec::new();
        let mut param = 0;
        let mut rotation_layers = |gates: &mut Vec<Gate>| {
            for qubit in 0..n_qubits {
                gates.push(Gate::Ry { qubit, param });
                param += 1;
            }
            for qubit in 0..n_qubits {
                gates.push(Gate::Rz { qubit, param });
                param += 1;
            }
        };
        rotation_layers(&mut gates);
        for _ in 0..depth {
            gates.extend(
                pairs
                    .iter()
                    .map(|&(control, target)| Gate::Cx { control, target }),
            );
            rotation_layers(&mut gates);
        }

        Self {
            n_qubits,
            depth,
            entanglement,
            pairs,
            gates,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn entanglement(&self) -> Entanglement {
        self.entanglement
    }

    /// Entangling pairs of one block, `(control, target)`.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// `2 · n_qubits · (depth + 1)`
    pub fn param_count(&self) -> usize {
        2 * self.n_qubits * (self.depth + 1)
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    fn check_params(&self, params: &[f64]) -> Result<()> {
        if params.len() != self.param_count() {
            return Err(Error::ParameterCount {
                expected: self.param_count(),
                actual: params.len(),
            });
        }
        Ok(())
    }
}

pub fn build_ansatz(n_qubits: usize, depth: usize, entanglement: Entanglement) -> Ansatz {
    Ansatz::new(n_qubits, depth, entanglement)
}

/// Circuit angles in radians, in gate order.
#[derive(Clone, Debug, PartialEq)]
pub struct ParameterVector(Vec<f64>);

impl ParameterVector {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for ParameterVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for ParameterVector {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

#[inline]
fn apply_gate(amps: &mut [C64], n_qubits: usize, gate: Gate, params: &[f64], shift: f64) {
    match gate {
        Gate::Ry { qubit, param } => {
            let half = 0.5 * (params[param] + shift);
            let (s, c) = half.sin_cos();
            let bit = 1 << (n_qubits - 1 - qubit);
            for i in 0..amps.len() {
                if i & bit == 0 {
                    let (a0, a1) = (amps[i], amps[i | bit]);
                    amps[i] = a0 * c - a1 * s;
                    amps[i | bit] = a0 * s + a1 * c;
                }
            }
        }
        Gate::Rz { qubit, param } => {
            let half = 0.5 * (params[param] + shift);
            let lo = C64::from_polar(1.0, -half);
            let hi = lo.conj();
            let bit = 1 << (n_qubits - 1 - qubit);
            for (i, a) in amps.iter_mut().enumerate() {
                *a *= if i & bit == 0 { lo } else { hi };
            }
        }
        Gate::Cx { control, target } => {
            let cbit = 1 << (n_qubits - 1 - control);
            let tbit = 1 << (n_qubits - 1 - target);
            for i in 0..amps.len() {
                if i & cbit != 0 && i & tbit == 0 {
                    amps.swap(i, i | tbit);
                }
            }
        }
    }
}

/// `|ψ(θ)⟩` starting from `|0…0⟩`.
pub fn prepare_state(ansatz: &Ansatz, params: &[f64]) -> Result<StateVector> {
    ansatz.check_params(params)?;
    let mut amps = vec![C64::new(0.0, 0.0); ansatz.dim()];
    amps[0] = C64::new(1.0, 0.0);
    for &g in &ansatz.gates {
        apply_gate(&mut amps, ansatz.n_qubits, g, params, 0.0);
    }
    Ok(StateVector::new(amps))
}

/// Anything whose expectation value can be taken in a state.
pub trait Observable {
    fn dim(&self) -> usize;

    /// `⟨ψ|O|ψ⟩ / ⟨ψ|ψ⟩`
    fn expectation(&self, state: &StateVector) -> Result<f64>;
}

impl Observable for OperatorMatrix {
    fn dim(&self) -> usize {
        OperatorMatrix::dim(self)
    }

    fn expectation(&self, state: &StateVector) -> Result<f64> {
        expectation(state, self)
    }
}

impl Observable for SparseOperator {
    fn dim(&self) -> usize {
        SparseOperator::dim(self)
    }

    fn expectation(&self, state: &StateVector) -> Result<f64> {
        if self.dim() != state.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: state.dim(),
            });
        }
        let v = state.amplitudes();
        let mut acc = C64::new(0.0, 0.0);
        for (i, vi) in v.iter().enumerate() {
            let hv: C64 = self.row(i).map(|(j, a)| a * v[j]).sum();
            acc += vi.conj() * hv;
        }
        real_part(acc / state.norm_sqr())
    }
}

impl Observable for PauliSum {
    fn dim(&self) -> usize {
        1 << self.n_qubits()
    }

    fn expectation(&self, state: &StateVector) -> Result<f64> {
        expectation_pauli(state, self)
    }
}

/// Dense `Re(v†Hv) / v†v`; errors when the imaginary part exceeds 1e-10.
pub fn expectation(state: &StateVector, h: &OperatorMatrix) -> Result<f64> {
    if h.dim() != state.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            actual: state.dim(),
        });
    }
    let v = state.amplitudes();
    let mut acc = C64::new(0.0, 0.0);
    for (i, vi) in v.iter().enumerate() {
        let hv: C64 = h.row(i).iter().zip(v).map(|(a, b)| a * b).sum();
        acc += vi.conj() * hv;
    }
    real_part(acc / state.norm_sqr())
}

fn real_part(value: C64) -> Result<f64> {
    if value.im.abs() >= 1e-10 {
        return Err(Error::ImaginaryResidue {
            context: "expectation value",
            residue: value.im.abs(),
        });
    }
    Ok(value.re)
}

/// Term-by-term `Σ c_P ⟨ψ|P|ψ⟩ / ⟨ψ|ψ⟩`, never forming the dense sum.
pub fn expectation_pauli(state: &StateVector, sum: &PauliSum) -> Result<f64> {
    let dim = 1usize << sum.n_qubits();
    if state.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: state.dim(),
        });
    }
    let mut acc = 0.0;
    for t in sum.terms() {
        acc += t.coefficient * string_expectation(state, &t.label)?;
    }
    Ok(acc / state.norm_sqr())
}

/// Energy of the ansatz state at `params`.
pub fn energy<O: Observable + ?Sized>(h: &O, ansatz: &Ansatz, params: &[f64]) -> Result<f64> {
    h.expectation(&prepare_state(ansatz, params)?)
}

/// Parameter-shift gradient `∂E/∂θ_k = [E(θ_k + π/2) − E(θ_k − π/2)] / 2`.
///
/// Every parameter drives exactly one gate, so the state before gate `k` is
/// carried forward once and each shifted evaluation only replays the suffix.
pub fn gradient<O: Observable + ?Sized>(
    h: &O,
    ansatz: &Ansatz,
    params: &[f64],
) -> Result<Vec<f64>> {
    ansatz.check_params(params)?;
    if h.dim() != ansatz.dim() {
        return Err(Error::DimensionMismatch {
            expected: ansatz.dim(),
            actual: h.dim(),
        });
    }
    let n = ansatz.n_qubits;
    let gates = &ansatz.gates;
    let mut grad = vec![0.0; params.len()];
    let mut prefix = vec![C64::new(0.0, 0.0); ansatz.dim()];
    prefix[0] = C64::new(1.0, 0.0);
    let mut scratch = prefix.clone();

    for (k, &gate) in gates.iter().enumerate() {
        let param = match gate {
            Gate::Ry { param, .. } | Gate::Rz { param, .. } => Some(param),
            Gate::Cx { .. } => None,
        };
        if let Some(p) = param {
            let mut shifted = [0.0; 2];
            for (slot, shift) in shifted.iter_mut().zip([FRAC_PI_2, -FRAC_PI_2]) {
                scratch.copy_from_slice(&prefix);
                apply_gate(&mut scratch, n, gate, params, shift);
                for &g in &gates[k + 1..] {
                    apply_gate(&mut scratch, n, g, params, 0.0);
                }
                let state = StateVector::new(std::mem::take(&mut scratch));
                *slot = h.expectation(&state)?;
                scratch = state.into_amplitudes();
            }
            grad[p] = 0.5 * (shifted[0] - shifted[1]);
        }
        apply_gate(&mut prefix, n, gate, params, 0.0);
    }
    Ok(grad)
}
