//! Pauli-string expansion of qubit Hamiltonians.
//!
//! Coefficients are Hilbert–Schmidt projections `Tr(P·H)/2ⁿ`. Labels are
//! written with qubit 0 (the most significant tensor factor) first.
//!
//! Decomposition groups labels by their X-support: with `P = i^{|x∧z|} XˣZᶻ`
//! and `(XˣZᶻ)_{a,b} = δ_{a,b⊕x} (-1)^{|b∧z|}`, every coefficient sharing
//! one `x` is a Walsh–Hadamard transform of the diagonal `b ↦ H[b, b⊕x]`.
//! That makes the full expansion `O(n·4ⁿ)` instead of `O(8ⁿ)`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::format::fmt_sig17;
use crate::linalg::{OperatorMatrix, StateVector, C64};

/// Terms with `|coefficient|` at or below this are dropped.
pub const DEFAULT_THRESHOLD: f64 = 1e-12;

/// Largest imaginary part tolerated in a projection.
pub const IMAGINARY_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> OperatorMatrix {
        let z = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        let rows: [[C64; 2]; 2] = match self {
            Pauli::I => [[one, z], [z, one]],
            Pauli::X => [[z, one], [one, z]],
            Pauli::Y => [[z, -i], [i, z]],
            Pauli::Z => [[one, z], [z, -one]],
        };
        OperatorMatrix::from_rows(&[&rows[0], &rows[1]]).expect("2x2 literal")
    }

    fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }
}

/// Tensor product of single-qubit Paulis, qubit 0 first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliString(Vec<Pauli>);

impl PauliString {
    pub fn new(ops: Vec<Pauli>) -> Self {
        Self(ops)
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self(vec![Pauli::I; n_qubits])
    }

    pub fn n_qubits(&self) -> usize {
        self.0.len()
    }

    pub fn ops(&self) -> &[Pauli] {
        &self.0
    }

    /// `(x_mask, z_mask)` with qubit 0 on the highest bit.
    pub fn masks(&self) -> (usize, usize) {
        let n = self.0.len();
        let mut x = 0;
        let mut z = 0;
        for (q, p) in self.0.iter().enumerate() {
            let bit = 1 << (n - 1 - q);
            if matches!(p, Pauli::X | Pauli::Y) {
                x |= bit;
            }
            if matches!(p, Pauli::Z | Pauli::Y) {
                z |= bit;
            }
        }
        (x, z)
    }

    pub fn from_masks(n_qubits: usize, x: usize, z: usize) -> Self {
        Self(
            (0..n_qubits)
                .map(|q| {
                    let bit = 1 << (n_qubits - 1 - q);
                    Pauli::from_bits(x & bit != 0, z & bit != 0)
                })
                .collect(),
        )
    }

    /// Dense `2ⁿ × 2ⁿ` matrix of the string.
    pub fn matrix(&self) -> OperatorMatrix {
        let n = self.0.len();
        let dim = 1usize << n;
        let (x, z) = self.masks();
        let phase = y_phase((x & z).count_ones());
        let mut m = OperatorMatrix::zeros(dim);
        for b in 0..dim {
            let sign = if (b & z).count_ones() % 2 == 0 {
                1.0
            } else {
                -1.0
            };
            m[(b ^ x, b)] = phase * sign;
        }
        m
    }
}

/// `i^k`
fn y_phase(k: u32) -> C64 {
    match k % 4 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.0 {
            write!(f, "{}", p.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::InvalidLabel("empty label".into()));
        }
        s.chars()
            .map(|ch| match ch {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(Error::InvalidLabel(format!("`{s}` contains `{other}`"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(PauliString)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PauliTerm {
    pub label: PauliString,
    pub coefficient: f64,
}

/// Real linear combination of Pauli strings, sorted by label.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum {
    n_qubits: usize,
    terms: Vec<PauliTerm>,
}

impl PauliSum {
    /// Sorts by label and merges duplicates.
    pub fn from_terms(n_qubits: usize, mut terms: Vec<PauliTerm>) -> Result<Self> {
        for t in &terms {
            if t.label.n_qubits() != n_qubits {
                return Err(Error::InvalidLabel(format!(
                    "`{}` has {} qubits, expected {n_qubits}",
                    t.label,
                    t.label.n_qubits()
                )));
            }
        }
        terms.sort_by(|a, b| a.label.cmp(&b.label));
        let mut merged: Vec<PauliTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last) if last.label == t.label => last.coefficient += t.coefficient,
                _ => merged.push(t),
            }
        }
        Ok(Self {
            n_qubits,
            terms: merged,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, label: &PauliString) -> f64 {
        self.terms
            .binary_search_by(|t| t.label.cmp(label))
            .map(|i| self.terms[i].coefficient)
            .unwrap_or(0.0)
    }

    /// One `<label> <coefficient>` line per term, 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for t in &self.terms {
            out.push_str(&t.label.to_string());
            out.push(' ');
            out.push_str(&fmt_sig17(t.coefficient));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut terms = Vec::new();
        let mut n_qubits = None;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (Some(label), Some(value), None) = (parts.next(), parts.next(), parts.next())
            else {
                return Err(Error::InvalidLabel(format!(
                    "line {}: `{line}`",
                    lineno + 1
                )));
            };
            let label: PauliString = label.parse()?;
            let coefficient: f64 = value.parse().map_err(|_| {
                Error::InvalidLabel(format!("line {}: bad coefficient `{value}`", lineno + 1))
            })?;
            n_qubits.get_or_insert(label.n_qubits());
            terms.push(PauliTerm { label, coefficient });
        }
        let n = n_qubits.ok_or_else(|| Error::InvalidLabel("no terms".into()))?;
        Self::from_terms(n, terms)
    }
}

pub fn term_count(sum: &PauliSum) -> usize {
    sum.term_count()
}

/// Expands a `2ⁿ × 2ⁿ` Hermitian matrix in the Pauli basis.
pub fn decompose(h: &OperatorMatrix, threshold: f64) -> Result<PauliSum> {
    let dim = h.dim();
    if !dim.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(dim));
    }
    let n = dim.trailing_zeros() as usize;
    let norm = dim as f64;
    let mut terms = Vec::new();
    let mut w = vec![C64::new(0.0, 0.0); dim];
    for x in 0..dim {
        for (b, slot) in w.iter_mut().enumerate() {
            *slot = h[(b, b ^ x)];
        }
        walsh_hadamard(&mut w);
        for (z, &tr) in w.iter().enumerate() {
            let coeff = y_phase((x & z).count_ones()) * tr / norm;
            if coeff.im.abs() >= IMAGINARY_TOL {
                return Err(Error::ImaginaryResidue {
                    context: "Pauli projection",
                    residue: coeff.im.abs(),
                });
            }
            if coeff.re.abs() > threshold {
                terms.push(PauliTerm {
                    label: PauliString::from_masks(n, x, z),
                    coefficient: coeff.re,
                });
            }
        }
    }
    PauliSum::from_terms(n, terms)
}

/// In-place unnormalized Walsh–Hadamard transform:
/// `w[z] ← Σ_b (-1)^{|b∧z|} w[b]`.
fn walsh_hadamard(w: &mut [C64]) {
    let n = w.len();
    let mut h = 1;
    while h < n {
        for block in (0..n).step_by(2 * h) {
            for i in block..block + h {
                let (a, b) = (w[i], w[i + h]);
                w[i] = a + b;
                w[i + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// `Σ coeff · P` as a dense matrix.
pub fn reconstruct(sum: &PauliSum) -> OperatorMatrix {
    let dim = 1usize << sum.n_qubits;
    let mut m = OperatorMatrix::zeros(dim);
    for t in &sum.terms {
        let (x, z) = t.label.masks();
        let phase = y_phase((x & z).count_ones()) * t.coefficient;
        for b in 0..dim {
            let sign = if (b & z).count_ones() % 2 == 0 {
                1.0
            } else {
                -1.0
            };
            m[(b ^ x, b)] += phase * sign;
        }
    }
    m
}

/// `⟨ψ|P|ψ⟩` for a single string; real because `P` is Hermitian.
pub fn string_expectation(state: &StateVector, label: &PauliString) -> Result<f64> {
    let dim = 1usize << label.n_qubits();
    if state.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: state.dim(),
        });
    }
    let (x, z) = label.masks();
    let amps = state.amplitudes();
    let mut acc = C64::new(0.0, 0.0);
    for (b, &a) in amps.iter().enumerate() {
        let term = amps[b ^ x].conj() * a;
        if (b & z).count_ones() % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok((y_phase((x & z).count_ones()) * acc).re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::kron_all;

    fn herm(n_qubits: usize, seed: u64) -> OperatorMatrix {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let dim = 1 << n_qubits;
        let mut m = OperatorMatrix::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(rng.gen_range(-1.0..1.0), 0.0);
            for j in (i + 1)..dim {
                let z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        m
    }

    /// Independent route: form every label's Kronecker product and take
    /// the trace against `h`.
    fn decompose_brute(h: &OperatorMatrix) -> Vec<(String, C64)> {
        let n = h.dim().trailing_zeros() as usize;
        let paulis = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
        let mut out = Vec::new();
        for idx in 0..4usize.pow(n as u32) {
            let ops: Vec<Pauli> = (0..n)
                .map(|q| paulis[(idx >> (2 * (n - 1 - q))) & 3])
                .collect();
            let mats: Vec<OperatorMatrix> = ops.iter().map(|p| p.matrix()).collect();
            let p = kron_all(mats.iter()).unwrap();
            let tr = p.matmul(h).unwrap().trace() / h.dim() as f64;
            out.push((PauliString::new(ops).to_string(), tr));
        }
        out
    }

    #[test]
    fn single_qubit_examples() {
        let z = decompose(&Pauli::Z.matrix(), DEFAULT_THRESHOLD).unwrap();
        assert_eq!(z.to_text(), "Z 1\n");
        let proj = decompose(
            &OperatorMatrix::from_real_diag(&[1.0, 0.0]),
            DEFAULT_THRESHOLD,
        )
        .unwrap();
        assert_eq!(proj.terms().len(), 2);
        assert_eq!(proj.coefficient(&"I".parse().unwrap()), 0.5);
        assert_eq!(proj.coefficient(&"Z".parse().unwrap()), 0.5);
        let y = decompose(&Pauli::Y.matrix(), DEFAULT_THRESHOLD).unwrap();
        assert_eq!(y.coefficient(&"Y".parse().unwrap()), 1.0);
    }

    #[test]
    fn string_matrix_matches_kron() {
        for label in ["XZ", "YI", "ZYX", "YYZ"] {
            let s: PauliString = label.parse().unwrap();
            let mats: Vec<OperatorMatrix> = s.ops().iter().map(|p| p.matrix()).collect();
            assert_eq!(s.matrix(), kron_all(mats.iter()).unwrap(), "{label}");
        }
    }

    #[test]
    fn fast_projection_matches_brute_force() {
        for (n, seed) in [(1, 3), (2, 5), (3, 7), (4, 11)] {
            let h = herm(n, seed);
            let fast = decompose(&h, 0.0).unwrap();
            let brute = decompose_brute(&h);
            for (label, want) in brute {
                assert!(want.im.abs() < 1e-14);
                let got = fast.coefficient(&label.parse().unwrap());
                assert!(
                    (got - want.re).abs() < 1e-13,
                    "{label}: {got} vs {}",
                    want.re
                );
            }
        }
    }

    #[test]
    fn reconstruct_examples() {
        let s = PauliSum::from_terms(
            2,
            vec![PauliTerm {
                label: "II".parse().unwrap(),
                coefficient: 1.0,
            }],
        )
        .unwrap();
        assert_eq!(reconstruct(&s), OperatorMatrix::identity(4));
        let s = PauliSum::from_terms(
            2,
            vec![PauliTerm {
                label: "XZ".parse().unwrap(),
                coefficient: 0.5,
            }],
        )
        .unwrap();
        let want = kron_all([&Pauli::X.matrix(), &Pauli::Z.matrix()])
            .unwrap()
            .scale_real(0.5);
        assert_eq!(reconstruct(&s), want);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            decompose(&OperatorMatrix::identity(3), 0.0),
            Err(Error::NotPowerOfTwo(3))
        ));
        let mut bad = OperatorMatrix::zeros(2);
        bad[(0, 1)] = C64::new(1.0, 0.0);
        assert!(matches!(
            decompose(&bad, 0.0),
            Err(Error::ImaginaryResidue { .. })
        ));
        assert!("IXQ".parse::<PauliString>().is_err());
    }

    #[test]
    fn identity_coefficient_is_normalized_trace() {
        let h = herm(3, 21);
        let s = decompose(&h, 0.0).unwrap();
        let tr = h.trace().re / 8.0;
        assert!((s.coefficient(&PauliString::identity(3)) - tr).abs() < 1e-14);
    }

    #[test]
    fn parseval_identity() {
        let h = herm(4, 2);
        let s = decompose(&h, 0.0).unwrap();
        let sum_sq: f64 = s
            .terms()
            .iter()
            .map(|t| t.coefficient * t.coefficient)
            .sum();
        assert!((sum_sq * 16.0 - h.frobenius_norm().powi(2)).abs() < 1e-8);
    }

    #[test]
    fn term_count_monotone_in_threshold() {
        let h = herm(3, 8);
        let mut prev = usize::MAX;
        for th in [0.0, 1e-3, 1e-2, 0.05, 0.1, 0.2, 0.5] {
            let n = term_count(&decompose(&h, th).unwrap());
            assert!(n <= prev);
            prev = n;
        }
    }

    #[test]
    fn linearity() {
        let (a, b) = (herm(3, 1), herm(3, 2));
        let mut combo = a.scale_real(0.7);
        combo.add_scaled(&b, C64::new(-1.3, 0.0));
        let lhs = decompose(&combo, 0.0).unwrap();
        let (da, db) = (decompose(&a, 0.0).unwrap(), decompose(&b, 0.0).unwrap());
        for t in lhs.terms() {
            let want = 0.7 * da.coefficient(&t.label) - 1.3 * db.coefficient(&t.label);
            assert!((t.coefficient - want).abs() < 1e-13);
        }
    }

    #[test]
    fn text_serialization_is_sorted_and_parses_back() {
        let h = herm(2, 4);
        let s = decompose(&h, DEFAULT_THRESHOLD).unwrap();
        let text = s.to_text();
        let labels: Vec<&str> = text.lines().map(|l| l.split(' ').next().unwrap()).collect();
        let mut sorted = labels.clone();
        sorted.sort();
        assert_eq!(labels, sorted);
        assert_eq!(PauliSum::from_text(&text).unwrap(), s);
    }

    #[test]
    fn string_expectation_examples() {
        let one = StateVector::basis(2, 1);
        assert_eq!(
            string_expectation(&one, &"Z".parse().unwrap()).unwrap(),
            -1.0
        );
        let plus = StateVector::from_real(&[1.0, 1.0]).normalized();
        assert!((string_expectation(&plus, &"X".parse().unwrap()).unwrap() - 1.0).abs() < 1e-15);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]

            #[test]
            fn round_trip(seed in 0u64..10_000, n in 1usize..5) {
                let h = herm(n, seed);
                let back = reconstruct(&decompose(&h, 0.0).unwrap());
                prop_assert!(back.max_abs_diff(&h) < 1e-12);
            }
        }
    }
}
