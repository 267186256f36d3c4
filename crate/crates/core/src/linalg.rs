//! Dense complex linear algebra at desk scale.
//!
//! Everything here works on [`ComplexMatrix`], a row-major dense matrix of
//! `Complex64`. The Hermitian eigensolver embeds an `n × n` Hermitian matrix
//! `H = X + iY` into the real symmetric `2n × 2n` matrix `[[X, −Y], [Y, X]]`
//! and diagonalises that with cyclic Jacobi rotations. Every eigenvalue of `H`
//! shows up twice in the embedding; the pairs are merged and a complex
//! orthonormal basis is recovered per eigenvalue cluster.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use thiserror::Error;

pub type C64 = Complex64;

/// Relative tolerance on `‖m − m†‖_F` accepted by the eigensolver.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Absolute tolerance used when grouping eigenvalues into degenerate sets.
pub const DEGENERACY_TOL: f64 = 1e-8;

/// Cap on full Jacobi sweeps before giving up.
pub const MAX_JACOBI_SWEEPS: usize = 100;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix is not square ({0}×{1})")]
    NotSquare(usize, usize),
    #[error("matrix is not Hermitian: ‖m − m†‖_F = {defect:e} exceeds {tolerance:e}")]
    NotHermitian { defect: f64, tolerance: f64 },
    #[error("Jacobi iteration did not converge within {0} sweeps")]
    NoConvergence(usize),
    #[error("non-finite entry at ({0}, {1})")]
    NonFinite(usize, usize),
}

/// Dense complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Build from row-major data. Panics if `data.len() != rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), rows * cols, "entries must be rows × cols");
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Self::from_vec(r, c, data)
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Self {
        assert_eq!(data.len(), rows * cols);
        Self::from_vec(rows, cols, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> Self {
        Self::from_fn(h, w, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &ComplexMatrix) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)];
            }
        }
    }

    pub fn add_block(&mut self, r0: usize, c0: usize, b: &ComplexMatrix) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] += b[(i, j)];
            }
        }
    }

    fn check_same_shape(&self, other: &Self) -> Result<(), LinalgError> {
        if self.shape() != other.shape() {
            return Err(LinalgError::DimensionMismatch {
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let orow = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[C64]) -> Result<Vec<C64>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                left: self.shape(),
                right: (v.len(), 1),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (r1, c1) = self.shape();
        let (r2, c2) = other.shape();
        Self::from_fn(r1 * r2, c1 * c2, |i, j| {
            self[(i / r2, j / c2)] * other[(i % r2, j % c2)]
        })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `‖m − m†‖_F`.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.shape(), other.shape());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// Largest imaginary part in absolute value.
    pub fn max_imag(&self) -> f64 {
        self.data.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    pub fn check_finite(&self) -> Result<(), LinalgError> {
        for i in 0..self.rows {
            for j in 0..self.cols {
                let z = self[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(LinalgError::NonFinite(i, j));
                }
            }
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}×{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:>8.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: Self) -> ComplexMatrix {
        self.try_add(rhs).expect("matrix add")
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: Self) -> ComplexMatrix {
        self.try_sub(rhs).expect("matrix sub")
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Self) -> ComplexMatrix {
        self.try_mul(rhs).expect("matrix mul")
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale(C64::new(-1.0, 0.0))
    }
}

/// The identity and the three Pauli matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    Sigma0,
    SigmaX,
    SigmaY,
    SigmaZ,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::Sigma0, Pauli::SigmaX, Pauli::SigmaY, Pauli::SigmaZ];

    pub fn matrix(self) -> ComplexMatrix {
        pauli(self)
    }

    pub fn name(self) -> &'static str {
        match self {
            Pauli::Sigma0 => "sigma0",
            Pauli::SigmaX => "sigmaX",
            Pauli::SigmaY => "sigmaY",
            Pauli::SigmaZ => "sigmaZ",
        }
    }
}

pub fn pauli(kind: Pauli) -> ComplexMatrix {
    let o = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let rows = match kind {
        Pauli::Sigma0 => [[one, o], [o, one]],
        Pauli::SigmaX => [[o, one], [one, o]],
        Pauli::SigmaY => [[o, -i], [i, o]],
        Pauli::SigmaZ => [[one, o], [o, -one]],
    };
    ComplexMatrix::from_vec(2, 2, rows.concat())
}

pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare(a.rows, a.cols));
    }
    if a.shape() != b.shape() {
        return Err(LinalgError::DimensionMismatch {
            left: a.shape(),
            right: b.shape(),
        });
    }
    a.try_mul(b)?.try_sub(&b.try_mul(a)?)
}

pub fn frobenius_norm(m: &ComplexMatrix) -> f64 {
    m.frobenius_norm()
}

/// Eigenvalues (ascending) and unit eigenvectors stored as the columns of
/// `vectors`.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        (0..self.vectors.rows()).map(|i| self.vectors[(i, k)]).collect()
    }

    /// `V·diag(f(λ))·V†`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let n = self.values.len();
        let weights: Vec<C64> = self.values.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| self.vectors[(i, k)] * weights[k] * self.vectors[(j, k)].conj())
                .sum()
        })
    }
}

fn hermitian_input(m: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare(m.rows, m.cols));
    }
    m.check_finite()?;
    let defect = m.hermitian_defect();
    let tolerance = HERMITIAN_TOL * m.frobenius_norm().max(1.0);
    if defect > tolerance {
        return Err(LinalgError::NotHermitian { defect, tolerance });
    }
    if defect == 0.0 {
        return Ok(m.clone());
    }
    let n = m.rows;
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        (m[(i, j)] + m[(j, i)].conj()) * 0.5
    }))
}

/// Real symmetric embedding `[[Re, −Im], [Im, Re]]`, row-major `2n × 2n`.
fn real_embedding(m: &ComplexMatrix) -> Vec<f64> {
    let n = m.rows;
    let dim = 2 * n;
    let mut a = vec![0.0; dim * dim];
    for i in 0..n {
        for j in 0..n {
            let z = m[(i, j)];
            a[i * dim + j] = z.re;
            a[i * dim + n + j] = -z.im;
            a[(n + i) * dim + j] = z.im;
            a[(n + i) * dim + n + j] = z.re;
        }
    }
    a
}

/// Cyclic Jacobi on a real symmetric row-major matrix. Returns the diagonal
/// and, if requested, the accumulated rotations (columns are eigenvectors).
fn jacobi_symmetric(
    mut a: Vec<f64>,
    n: usize,
    want_vectors: bool,
) -> Result<(Vec<f64>, Option<Vec<f64>>), LinalgError> {
    let mut v = want_vectors.then(|| {
        let mut id = vec![0.0; n * n];
        for i in 0..n {
            id[i * n + i] = 1.0;
        }
        id
    });
    let frob = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let target = f64::EPSILON * frob;

    let mut converged = false;
    for _ in 0..MAX_JACOBI_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if (2.0 * off).sqrt() <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                if apq.abs() < 1e-3 * target / (n as f64) {
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a[r * n + p];
                    let arq = a[r * n + q];
                    let nrp = c * arp - s * arq;
                    let nrq = s * arp + c * arq;
                    a[r * n + p] = nrp;
                    a[p * n + r] = nrp;
                    a[r * n + q] = nrq;
                    a[q * n + r] = nrq;
                }
                if let Some(v) = v.as_mut() {
                    for r in 0..n {
                        let vrp = v[r * n + p];
                        let vrq = v[r * n + q];
                        v[r * n + p] = c * vrp - s * vrq;
                        v[r * n + q] = s * vrp + c * vrq;
                    }
                }
            }
        }
    }
    if !converged {
        return Err(LinalgError::NoConvergence(MAX_JACOBI_SWEEPS));
    }
    Ok(((0..n).map(|i| a[i * n + i]).collect(), v))
}

fn sorted_order(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    idx
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>, LinalgError> {
    let h = hermitian_input(m)?;
    let n = h.rows;
    let (diag, _) = jacobi_symmetric(real_embedding(&h), 2 * n, false)?;
    let order = sorted_order(&diag);
    Ok((0..n)
        .map(|k| 0.5 * (diag[order[2 * k]] + diag[order[2 * k + 1]]))
        .collect())
}

/// Full eigendecomposition of a Hermitian matrix.
pub fn hermitian_eigendecomposition(m: &ComplexMatrix) -> Result<HermitianEigen, LinalgError> {
    let h = hermitian_input(m)?;
    let n = h.rows;
    if n == 0 {
        return Ok(HermitianEigen {
            values: vec![],
            vectors: ComplexMatrix::zeros(0, 0),
        });
    }
    let dim = 2 * n;
    let (diag, v) = jacobi_symmetric(real_embedding(&h), dim, true)?;
    let v = v.expect("vectors requested");
    let order = sorted_order(&diag);

    let values: Vec<f64> = (0..n)
        .map(|k| 0.5 * (diag[order[2 * k]] + diag[order[2 * k + 1]]))
        .collect();

    // Real eigenvector [x; y] of the embedding maps to x + iy.
    let complex_col = |col: usize| -> Vec<C64> {
        (0..n)
            .map(|r| C64::new(v[r * dim + col], v[(n + r) * dim + col]))
            .collect()
    };

    let cluster_tol = 1e-9 * h.frobenius_norm().max(1.0);
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[end] - values[end - 1] <= cluster_tol {
            end += 1;
        }
        // Pairs start..end own the real columns order[2*start..2*end].
        let mut candidates: Vec<Vec<C64>> = (2 * start..2 * end).map(|k| complex_col(order[k])).collect();
        for _ in start..end {
            for cand in candidates.iter_mut() {
                orthogonalize(cand, &basis);
            }
            let (best, _) = candidates
                .iter()
                .enumerate()
                .map(|(i, c)| (i, vec_norm(c)))
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .expect("non-empty cluster");
            let mut chosen = candidates.swap_remove(best);
            orthogonalize(&mut chosen, &basis);
            let nrm = vec_norm(&chosen);
            for z in chosen.iter_mut() {
                *z /= nrm;
            }
            basis.push(chosen);
        }
        start = end;
    }

    let vectors = ComplexMatrix::from_fn(n, n, |i, k| basis[k][i]);
    Ok(HermitianEigen { values, vectors })
}

fn orthogonalize(v: &mut [C64], basis: &[Vec<C64>]) {
    // Two passes of modified Gram-Schmidt.
    for _ in 0..2 {
        for q in basis {
            let proj: C64 = q.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
            for (x, qi) in v.iter_mut().zip(q) {
                *x -= proj * qi;
            }
        }
    }
}

pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `⟨a, b⟩ = Σ conj(a_i)·b_i`.
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Group an ascending list into `(value, multiplicity)` clusters, chaining
/// neighbours closer than `tol`.
pub fn group_degenerate(sorted: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] - sorted[j - 1] <= tol {
            j += 1;
        }
        let mean = sorted[i..j].iter().sum::<f64>() / (j - i) as f64;
        out.push((mean, j - i));
        i = j;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn pauli_entries() {
        let y = pauli(Pauli::SigmaY);
        assert_eq!(y[(0, 1)], c(0.0, -1.0));
        assert_eq!(y[(1, 0)], c(0.0, 1.0));
        assert_eq!(y[(0, 0)], c(0.0, 0.0));
        assert_eq!(pauli(Pauli::SigmaZ)[(1, 1)], c(-1.0, 0.0));
        let x = pauli(Pauli::SigmaX);
        assert_eq!(&x * &x, ComplexMatrix::identity(2));
    }

    #[test]
    fn pauli_involutions_and_hermitian() {
        for p in Pauli::ALL {
            let m = p.matrix();
            assert_eq!(&m * &m, ComplexMatrix::identity(2), "{p:?}");
            assert_eq!(m.adjoint(), m, "{p:?}");
        }
        assert_eq!(pauli(Pauli::Sigma0), ComplexMatrix::identity(2));
    }

    #[test]
    fn pauli_commutator() {
        let xy = commutator(&pauli(Pauli::SigmaX), &pauli(Pauli::SigmaY)).unwrap();
        assert_eq!(xy, pauli(Pauli::SigmaZ).scale(c(0.0, 2.0)));
        let m = pauli(Pauli::SigmaY);
        assert!(commutator(&m, &m).unwrap().is_zero());
    }

    #[test]
    fn commutator_dimension_mismatch() {
        let err = commutator(&ComplexMatrix::identity(2), &ComplexMatrix::identity(3));
        assert!(matches!(err, Err(LinalgError::DimensionMismatch { .. })));
    }

    #[test]
    fn frobenius_examples() {
        assert_eq!(frobenius_norm(&ComplexMatrix::zeros(2, 2)), 0.0);
        assert!((frobenius_norm(&pauli(Pauli::Sigma0)) - 2f64.sqrt()).abs() < 1e-15);
        assert!((frobenius_norm(&pauli(Pauli::SigmaY)) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn eigenvalues_of_small_hermitians() {
        let z = hermitian_eigenvalues(&pauli(Pauli::SigmaZ)).unwrap();
        assert_eq!(z.len(), 2);
        assert!((z[0] + 1.0).abs() < 1e-14 && (z[1] - 1.0).abs() < 1e-14);

        // (λ − 2)² − 1 = 0
        let m = ComplexMatrix::from_rows(&[vec![c(2.0, 0.0), c(0.0, 1.0)], vec![c(0.0, -1.0), c(2.0, 0.0)]]);
        let e = hermitian_eigendecomposition(&m).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-13);
        assert!((e.values[1] - 3.0).abs() < 1e-13);
        let v = e.vector(0);
        let mv = m.mul_vec(&v).unwrap();
        for (a, b) in mv.iter().zip(&v) {
            assert!((a - b * e.values[0]).norm() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_rows(&[vec![c(1.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]]);
        assert!(matches!(
            hermitian_eigenvalues(&m),
            Err(LinalgError::NotHermitian { .. })
        ));
        let r = ComplexMatrix::zeros(2, 3);
        assert!(matches!(hermitian_eigenvalues(&r), Err(LinalgError::NotSquare(2, 3))));
    }

    #[test]
    fn symmetrizes_tiny_defects() {
        let mut m = pauli(Pauli::SigmaX);
        m[(0, 1)] += c(1e-13, 0.0);
        let vals = hermitian_eigenvalues(&m).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_eigenspace_is_orthonormal() {
        let m = ComplexMatrix::identity(4).scale(c(3.0, 0.0));
        let e = hermitian_eigendecomposition(&m).unwrap();
        let gram = &e.vectors.adjoint() * &e.vectors;
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-12);
        assert!(e.values.iter().all(|&v| (v - 3.0).abs() < 1e-14));
    }

    #[test]
    fn empty_matrix() {
        let e = hermitian_eigendecomposition(&ComplexMatrix::zeros(0, 0)).unwrap();
        assert!(e.values.is_empty());
        assert!(hermitian_eigenvalues(&ComplexMatrix::zeros(0, 0)).unwrap().is_empty());
    }

    #[test]
    fn kron_with_identity() {
        let k = pauli(Pauli::SigmaX).kron(&ComplexMatrix::identity(2));
        assert_eq!(k.shape(), (4, 4));
        assert_eq!(k[(0, 2)], c(1.0, 0.0));
        assert_eq!(k[(1, 3)], c(1.0, 0.0));
        assert_eq!(k[(0, 3)], c(0.0, 0.0));
    }

    #[test]
    fn grouping() {
        let g = group_degenerate(&[0.0, 1e-10, 1.0, 2.0, 2.0 + 5e-9], 1e-8);
        assert_eq!(g.len(), 3);
        assert_eq!(g.iter().map(|x| x.1).sum::<usize>(), 5);
        assert_eq!(g[2].1, 2);
    }
}
