//! Dense complex linear algebra.
//!
//! Everything here works on row-major `dim × dim` complex matrices. The
//! largest operator the model ever produces is 256×256, so there is no
//! sparse storage and no blocking.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Largest dimension any constructor in this module will produce.
pub const MAX_DIM: usize = 4096;

/// Hermiticity tolerance used as a precondition by [`eigh`].
pub const HERMITIAN_TOL: f64 = 1e-10;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct OperatorMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl OperatorMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "operator dimension must be positive");
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let d: Vec<C64> = diag.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::from_diag(&d)
    }

    /// Builds a matrix from row-major entries; `entries.len()` must be a
    /// perfect square.
    pub fn from_row_major(entries: Vec<C64>) -> Result<Self> {
        let dim = (entries.len() as f64).sqrt().round() as usize;
        if dim == 0 || dim * dim != entries.len() {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: entries.len(),
            });
        }
        Ok(Self { dim, data: entries })
    }

    pub fn from_rows(rows: &[&[C64]]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::from_row_major(data)
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        let refs: Vec<&[C64]> = rows.iter().map(|r| r.as_slice()).collect();
        Self::from_rows(&refs)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    /// `self += s * other`
    pub fn add_scaled(&mut self, other: &OperatorMatrix, s: C64) {
        assert_eq!(self.dim, other.dim, "add_scaled dimension mismatch");
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a += b * s;
        }
    }

    pub fn matmul(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: other.dim,
            });
        }
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            let out_row = &mut out[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let b_row = &other.data[k * n..(k + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Ok(OperatorMatrix { dim: n, data: out })
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest elementwise deviation from `other`.
    pub fn max_abs_diff(&self, other: &OperatorMatrix) -> f64 {
        assert_eq!(self.dim, other.dim, "max_abs_diff dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |M - M†|` over all entries.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let d = (self[(i, j)] - self[(j, i)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() < tol
    }

    /// `AB - BA`
    pub fn commutator(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        Ok(&self.matmul(other)? - &other.matmul(self)?)
    }

    /// `AB + BA`
    pub fn anticommutator(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        Ok(&self.matmul(other)? + &other.matmul(self)?)
    }
}

impl Index<(usize, usize)> for OperatorMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for OperatorMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn add(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix add dimension mismatch");
        OperatorMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn sub(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix sub dimension mismatch");
        OperatorMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;

    /// Panics on dimension mismatch; use [`OperatorMatrix::matmul`] for the
    /// fallible form.
    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        self.matmul(rhs).expect("matrix product dimension mismatch")
    }
}

impl fmt::Debug for OperatorMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "OperatorMatrix({}x{})", self.dim, self.dim)?;
        if self.dim <= 8 {
            for i in 0..self.dim {
                let row: Vec<String> = self
                    .row(i)
                    .iter()
                    .map(|z| format!("{:+.4}{:+.4}i", z.re, z.im))
                    .collect();
                writeln!(f, "  [{}]", row.join(", "))?;
            }
        }
        Ok(())
    }
}

/// Complex amplitude vector.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: Vec<C64>,
}

impl StateVector {
    pub fn new(amps: Vec<C64>) -> Self {
        assert!(!amps.is_empty(), "state dimension must be positive");
        Self { amps }
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Self { amps }
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self::new(values.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(mut self) -> Self {
        let n = self.norm();
        for a in &mut self.amps {
            *a /= n;
        }
        self
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &StateVector) -> C64 {
        assert_eq!(self.dim(), other.dim(), "inner product dimension mismatch");
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Kronecker product with the default dimension cap [`MAX_DIM`].
pub fn kron(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<OperatorMatrix> {
    kron_with_limit(a, b, MAX_DIM)
}

pub fn kron_with_limit(
    a: &OperatorMatrix,
    b: &OperatorMatrix,
    max_dim: usize,
) -> Result<OperatorMatrix> {
    let dim =
        a.dim
            .checked_mul(b.dim)
            .filter(|&d| d <= max_dim)
            .ok_or(Error::DimensionOverflow {
                dim: a.dim.saturating_mul(b.dim),
                max: max_dim,
            })?;
    let bd = b.dim;
    let mut out = OperatorMatrix::zeros(dim);
    for i in 0..a.dim {
        for j in 0..a.dim {
            let aij = a[(i, j)];
            if aij == ZERO {
                continue;
            }
            for k in 0..bd {
                for l in 0..bd {
                    out[(i * bd + k, j * bd + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    Ok(out)
}

/// Kronecker product of a sequence of factors, leftmost most significant.
pub fn kron_all<'a, I>(factors: I) -> Result<OperatorMatrix>
where
    I: IntoIterator<Item = &'a OperatorMatrix>,
{
    let mut acc = OperatorMatrix::identity(1);
    for f in factors {
        acc = kron(&acc, f)?;
    }
    Ok(acc)
}

/// Conjugate transpose.
pub fn dagger(a: &OperatorMatrix) -> OperatorMatrix {
    let n = a.dim;
    let mut out = OperatorMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = a[(j, i)].conj();
        }
    }
    out
}

/// Plain matrix-vector product; the result is not renormalized.
pub fn matvec(a: &OperatorMatrix, v: &StateVector) -> Result<StateVector> {
    if a.dim != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim,
            actual: v.dim(),
        });
    }
    let amps = (0..a.dim)
        .map(|i| {
            a.row(i)
                .iter()
                .zip(v.amplitudes())
                .map(|(x, y)| x * y)
                .sum()
        })
        .collect();
    Ok(StateVector { amps })
}

/// Row-compressed copy of an operator holding only its nonzero entries.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseOperator {
    dim: usize,
    row_start: Vec<usize>,
    cols: Vec<usize>,
    values: Vec<C64>,
}

impl SparseOperator {
    pub fn from_dense(a: &OperatorMatrix) -> Self {
        let mut row_start = Vec::with_capacity(a.dim + 1);
        let mut cols = Vec::new();
        let mut values = Vec::new();
        row_start.push(0);
        for i in 0..a.dim {
            for (j, &x) in a.row(i).iter().enumerate() {
                if x != C64::new(0.0, 0.0) {
                    cols.push(j);
                    values.push(x);
                }
            }
            row_start.push(cols.len());
        }
        Self {
            dim: a.dim,
            row_start,
            cols,
            values,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// `(column, value)` pairs of row `i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        let span = self.row_start[i]..self.row_start[i + 1];
        self.cols[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    pub fn to_dense(&self) -> OperatorMatrix {
        let mut m = OperatorMatrix::zeros(self.dim);
        for i in 0..self.dim {
            for (j, x) in self.row(i) {
                m[(i, j)] = x;
            }
        }
        m
    }
}

/// Block-diagonal `diag(a, λ·I)` of size `target_dim`.
pub fn direct_sum_pad(
    a: &OperatorMatrix,
    target_dim: usize,
    lambda: f64,
) -> Result<OperatorMatrix> {
    if target_dim < a.dim {
        return Err(Error::PaddingTooSmall {
            dim: a.dim,
            target: target_dim,
        });
    }
    if target_dim > MAX_DIM {
        return Err(Error::DimensionOverflow {
            dim: target_dim,
            max: MAX_DIM,
        });
    }
    let mut out = OperatorMatrix::zeros(target_dim);
    for i in 0..a.dim {
        out.data[i * target_dim..i * target_dim + a.dim].copy_from_slice(a.row(i));
    }
    for i in a.dim..target_dim {
        out[(i, i)] = C64::new(lambda, 0.0);
    }
    Ok(out)
}

/// Spectral decomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct Eigh {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, in the order of `values`.
    pub vectors: OperatorMatrix,
}

impl Eigh {
    pub fn ground_energy(&self) -> f64 {
        self.values[0]
    }

    pub fn vector(&self, k: usize) -> StateVector {
        StateVector::new(self.vectors.column(k))
    }

    /// Largest `‖A v_k − λ_k v_k‖₂` over all pairs.
    pub fn max_residual(&self, a: &OperatorMatrix) -> f64 {
        (0..self.values.len())
            .map(|k| residual(a, &self.vector(k), self.values[k]))
            .fold(0.0, f64::max)
    }
}

fn residual(a: &OperatorMatrix, v: &StateVector, lambda: f64) -> f64 {
    let av = matvec(a, v).expect("eigenvector dimension");
    av.amplitudes()
        .iter()
        .zip(v.amplitudes())
        .map(|(x, y)| (x - y * lambda).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

const JACOBI_MAX_SWEEPS: usize = 100;

/// Hermitian eigensolver (cyclic complex Jacobi).
///
/// Eigenvalues come back ascending; each eigenvector is rotated so its
/// largest-magnitude component is real and positive.
pub fn eigh(a: &OperatorMatrix) -> Result<Eigh> {
    let defect = a.hermiticity_defect();
    if defect >= HERMITIAN_TOL {
        return Err(Error::NotHermitian { defect });
    }
    let n = a.dim;
    let mut m = a.clone();
    let mut v = OperatorMatrix::identity(n);
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&m);
        if off <= 1e-15 * scale || off == 0.0 {
            break;
        }
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                residual: off,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]).then(i.cmp(&j)));

    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = OperatorMatrix::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        let mut column = v.column(src);
        fix_phase(&mut column);
        for (row, z) in column.into_iter().enumerate() {
            vectors[(row, col)] = z;
        }
    }

    let out = Eigh { values, vectors };
    let residual = out.max_residual(a);
    if residual >= 1e-8 * a.max_abs().max(1.0) {
        return Err(Error::NoConvergence { sweeps, residual });
    }
    Ok(out)
}

fn off_diagonal_norm(m: &OperatorMatrix) -> f64 {
    let n = m.dim;
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Annihilates `m[p][q]` with the unitary `J = diag(1, e^{-iφ}) · R(θ)`
/// acting on rows/columns `p, q`, where `φ = arg m[p][q]` and `R` is the
/// real Jacobi rotation of the phase-stripped 2×2 block.
fn rotate(m: &mut OperatorMatrix, v: &mut OperatorMatrix, p: usize, q: usize) {
    let n = m.dim;
    let apq = m[(p, q)];
    let r = apq.norm();
    if r < 1e-300 {
        return;
    }
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    if r < 1e-18 * (app.abs() + aqq.abs()) {
        m[(p, q)] = ZERO;
        m[(q, p)] = ZERO;
        return;
    }
    let phase = apq / r;
    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // J entries: J_pp = c, J_pq = s, J_qp = -s e^{-iφ}, J_qq = c e^{-iφ}
    let jpp = C64::new(c, 0.0);
    let jpq = C64::new(s, 0.0);
    let jqp = -phase.conj() * s;
    let jqq = phase.conj() * c;

    // columns: M <- M J
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * jpp + mkq * jqp;
        m[(k, q)] = mkp * jpq + mkq * jqq;
    }
    // rows: M <- J† M
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = jpp.conj() * mpk + jqp.conj() * mqk;
        m[(q, k)] = jpq.conj() * mpk + jqq.conj() * mqk;
    }
    m[(p, q)] = ZERO;
    m[(q, p)] = ZERO;
    m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = C64::new(m[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
}

/// Makes the largest-magnitude component real and positive. Ties within
/// 1e-12 go to the lowest index.
fn fix_phase(column: &mut [C64]) {
    let mut best = 0;
    let mut best_abs = -1.0;
    for (i, z) in column.iter().enumerate() {
        let a = z.norm();
        if a > best_abs + 1e-12 {
            best = i;
            best_abs = a;
        }
    }
    if best_abs <= 0.0 {
        return;
    }
    let phase = column[best].conj() / best_abs;
    for z in column.iter_mut() {
        *z *= phase;
    }
    column[best] = C64::new(column[best].norm(), 0.0);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn sigma_plus() -> OperatorMatrix {
        OperatorMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap()
    }

    fn random_hermitian(n: usize, seed: u64) -> OperatorMatrix {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut m = OperatorMatrix::zeros(n);
        for i in 0..n {
            m[(i, i)] = c(rng.gen_range(-1.0..1.0), 0.0);
            for j in (i + 1)..n {
                let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        m
    }

    #[test]
    fn kron_identities() {
        let i6 = kron(&OperatorMatrix::identity(2), &OperatorMatrix::identity(3)).unwrap();
        assert_eq!(i6, OperatorMatrix::identity(6));

        let z = OperatorMatrix::from_real_diag(&[1.0, -1.0]);
        let out = kron(&z, &OperatorMatrix::identity(2)).unwrap();
        assert_eq!(out, OperatorMatrix::from_real_diag(&[1.0, 1.0, -1.0, -1.0]));
    }

    #[test]
    fn kron_sigma_plus_identity_is_upper_block() {
        let out = kron(&sigma_plus(), &OperatorMatrix::identity(2)).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expected = if j == i + 2 { 1.0 } else { 0.0 };
                assert_eq!(out[(i, j)], c(expected, 0.0), "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn kron_overflow_is_an_error() {
        let a = OperatorMatrix::identity(64);
        let b = OperatorMatrix::identity(128);
        assert!(matches!(
            kron(&a, &b),
            Err(Error::DimensionOverflow { dim: 8192, .. })
        ));
        assert!(kron_with_limit(&a, &b, 8192).is_ok());
    }

    #[test]
    fn dagger_examples() {
        assert_eq!(
            dagger(&OperatorMatrix::identity(3)),
            OperatorMatrix::identity(3)
        );
        let minus = OperatorMatrix::from_real_rows(&[&[0.0, 0.0], &[1.0, 0.0]]).unwrap();
        assert_eq!(dagger(&sigma_plus()), minus);
    }

    #[test]
    fn matvec_examples() {
        let v = StateVector::from_real(&[0.1, 0.2, 0.3, 0.4]);
        assert_eq!(matvec(&OperatorMatrix::identity(4), &v).unwrap(), v);

        let x = OperatorMatrix::from_real_diag(&[-1.0, 0.0, 1.0]);
        let out = matvec(&x, &StateVector::basis(3, 0)).unwrap();
        assert_eq!(out, StateVector::from_real(&[-1.0, 0.0, 0.0]));

        let s = 1.0 / 3f64.sqrt();
        let out = matvec(&x, &StateVector::from_real(&[s, s, s])).unwrap();
        assert!(out.max_abs_diff(&StateVector::from_real(&[-s, 0.0, s])) < 1e-15);

        assert!(matches!(
            matvec(&x, &StateVector::basis(4, 0)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn eigh_small_examples() {
        let e = eigh(&OperatorMatrix::from_real_diag(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(e.values, vec![1.0, 2.0, 3.0]);

        let x = OperatorMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let e = eigh(&x).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
        // phase convention: largest component real positive
        let v0 = e.vector(0);
        assert!(v0.amplitudes()[0].re > 0.0 && v0.amplitudes()[0].im == 0.0);
    }

    #[test]
    fn eigh_rejects_non_hermitian() {
        assert!(matches!(
            eigh(&sigma_plus()),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn eigh_random_hermitian_contract() {
        for (n, seed) in [(5, 1), (17, 2), (40, 3)] {
            let a = random_hermitian(n, seed);
            let e = eigh(&a).unwrap();
            assert!(e.max_residual(&a) < 1e-8 * a.max_abs().max(1.0));
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
            let gram = dagger(&e.vectors).matmul(&e.vectors).unwrap();
            assert!(gram.max_abs_diff(&OperatorMatrix::identity(n)) < 1e-8);
            let sum: f64 = e.values.iter().sum();
            assert!((sum - a.trace().re).abs() < 1e-8 * n as f64);
        }
    }

    #[test]
    fn eigh_degenerate_spectrum() {
        let e = eigh(&OperatorMatrix::identity(6).scale_real(2.5)).unwrap();
        assert!(e.values.iter().all(|&x| x == 2.5));
    }

    #[test]
    fn pad_examples() {
        let h = random_hermitian(12, 9);
        let p = direct_sum_pad(&h, 16, 1.0).unwrap();
        assert_eq!(p.dim(), 16);
        for i in 12..16 {
            for j in 12..16 {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert_eq!(p[(i, j)], c(expected, 0.0));
            }
        }
        assert!(p.is_hermitian(1e-15));
        assert_eq!(direct_sum_pad(&h, 12, 7.0).unwrap(), h);
        assert!(matches!(
            direct_sum_pad(&h, 8, 1.0),
            Err(Error::PaddingTooSmall { dim: 12, target: 8 })
        ));

        let big = direct_sum_pad(&OperatorMatrix::identity(72), 128, 1.0).unwrap();
        assert_eq!(big, OperatorMatrix::identity(128));
    }

    #[test]
    fn pad_preserves_spectrum() {
        let h = random_hermitian(6, 4);
        let base = eigh(&h).unwrap().values;
        let padded = eigh(&direct_sum_pad(&h, 8, 0.25).unwrap()).unwrap().values;
        let mut expected = base.clone();
        expected.extend([0.25, 0.25]);
        expected.sort_by(f64::total_cmp);
        for (a, b) in padded.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_matrix(max_dim: usize) -> impl Strategy<Value = OperatorMatrix> {
            (1..=max_dim).prop_flat_map(|d| {
                proptest::collection::vec((-2.0..2.0f64, -2.0..2.0f64), d * d).prop_map(|v| {
                    OperatorMatrix::from_row_major(
                        v.into_iter().map(|(a, b)| C64::new(a, b)).collect(),
                    )
                    .unwrap()
                })
            })
        }

        proptest! {
            #[test]
            fn kron_is_associative(a in small_matrix(3), b in small_matrix(3), c in small_matrix(2)) {
                let left = kron(&kron(&a, &b).unwrap(), &c).unwrap();
                let right = kron(&a, &kron(&b, &c).unwrap()).unwrap();
                prop_assert!(left.max_abs_diff(&right) < 1e-14);
            }

            #[test]
            fn dagger_is_an_involution(a in small_matrix(5)) {
                prop_assert_eq!(dagger(&dagger(&a)), a);
            }

            #[test]
            fn eigh_trace_matches_eigenvalue_sum(seed in 0u64..1000, n in 1usize..12) {
                let a = random_hermitian(n, seed);
                let e = eigh(&a).unwrap();
                let sum: f64 = e.values.iter().sum();
                prop_assert!((sum - a.trace().re).abs() < 1e-8 * n as f64);
            }
        }
    }
}
