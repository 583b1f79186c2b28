//! Small dense complex linear algebra for one, two and three qubits.
//!
//! Everything here works on 2, 4 and 8 dimensional spaces only. Qubit 1 is
//! the most significant bit of a basis index, so `|q1 q2 q3>` sits at
//! `4*q1 + 2*q2 + q3`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bell::Direction;
use crate::error::{Error, Result};

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

/// Eigenvalues of `rho * rho_tilde` with a real part this close to zero
/// from below are reported as exactly zero.
pub const SPECTRUM_CLAMP: f64 = 1e-10;

const MAX_QR_ITERATIONS: usize = 200;

fn check_dim(dim: usize) -> Result<()> {
    match dim {
        2 | 4 | 8 => Ok(()),
        _ => Err(Error::UnsupportedDimension(dim)),
    }
}

/// Dense row-major complex matrix with side lengths in {2, 4, 8}.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        check_dim(rows)?;
        check_dim(cols)?;
        Ok(Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim, dim)?;
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        Ok(m)
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        check_dim(rows)?;
        check_dim(cols)?;
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                actual: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::from_rows(rows, cols, data.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn diagonal(entries: &[Complex64]) -> Result<Self> {
        let mut m = Self::zeros(entries.len(), entries.len())?;
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        Ok(m)
    }

    /// `|v><v|`
    pub fn outer(v: &ComplexVector) -> Self {
        let n = v.dim();
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(v[i] * v[j].conj());
            }
        }
        Self {
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].conj());
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * k).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.max_abs_diff(&self.adjoint()) <= tol
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                actual: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols)?;
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if self.cols != v.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                actual: v.dim(),
            });
        }
        let out = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect();
        ComplexVector::new(out)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

fn zip_with(a: &ComplexMatrix, b: &ComplexMatrix, op: impl Fn(Complex64, Complex64) -> Complex64) -> ComplexMatrix {
    assert_eq!(
        (a.rows, a.cols),
        (b.rows, b.cols),
        "elementwise op on mismatched shapes"
    );
    ComplexMatrix {
        rows: a.rows,
        cols: a.cols,
        data: a.data.iter().zip(&b.data).map(|(&x, &y)| op(x, y)).collect(),
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        zip_with(self, rhs, |x, y| x + y)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        zip_with(self, rhs, |x, y| x - y)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale(-ONE)
    }
}

impl Mul<f64> for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, k: f64) -> ComplexMatrix {
        self.scale(Complex64::new(k, 0.0))
    }
}

/// Complex amplitude vector of dimension 2, 4 or 8.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct ComplexVector {
    data: Vec<Complex64>,
}

impl ComplexVector {
    pub fn new(data: Vec<Complex64>) -> Result<Self> {
        check_dim(data.len())?;
        Ok(Self { data })
    }

    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        check_dim(dim)?;
        let mut data = vec![ZERO; dim];
        data[index] = ONE;
        Ok(Self { data })
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Unit-norm copy; fails on the zero vector.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroNorm);
        }
        Ok(Self {
            data: self.data.iter().map(|z| z / n).collect(),
        })
    }

    /// `<self|other>`
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim(), other.dim());
        self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn kron(&self, other: &Self) -> Result<Self> {
        let dim = self.dim() * other.dim();
        if dim > 8 {
            return Err(Error::DimensionTooLarge(dim));
        }
        let mut data = Vec::with_capacity(dim);
        for a in &self.data {
            for b in &other.data {
                data.push(a * b);
            }
        }
        Ok(Self { data })
    }
}

impl Index<usize> for ComplexVector {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.data[i]
    }
}

impl fmt::Debug for ComplexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.data.iter()).finish()
    }
}

impl TryFrom<Vec<Complex64>> for ComplexVector {
    type Error = Error;

    fn try_from(data: Vec<Complex64>) -> Result<Self> {
        Self::new(data)
    }
}

impl From<ComplexVector> for Vec<Complex64> {
    fn from(v: ComplexVector) -> Self {
        v.data
    }
}

/// Kronecker product `a ⊗ b`. Results larger than 8x8 are rejected.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    if rows > 8 || cols > 8 {
        return Err(Error::DimensionTooLarge(rows.max(cols)));
    }
    let mut out = ComplexMatrix::zeros(rows, cols)?;
    for i in 0..a.rows {
        for j in 0..a.cols {
            let x = a[(i, j)];
            for k in 0..b.rows {
                for l in 0..b.cols {
                    out[(i * b.rows + k, j * b.cols + l)] = x * b[(k, l)];
                }
            }
        }
    }
    Ok(out)
}

pub fn kron3(a: &ComplexMatrix, b: &ComplexMatrix, c: &ComplexMatrix) -> Result<ComplexMatrix> {
    kron(&kron(a, b)?, c)
}

pub fn identity2() -> ComplexMatrix {
    ComplexMatrix {
        rows: 2,
        cols: 2,
        data: vec![ONE, ZERO, ZERO, ONE],
    }
}

pub fn sigma_x() -> ComplexMatrix {
    ComplexMatrix {
        rows: 2,
        cols: 2,
        data: vec![ZERO, ONE, ONE, ZERO],
    }
}

pub fn sigma_y() -> ComplexMatrix {
    ComplexMatrix {
        rows: 2,
        cols: 2,
        data: vec![ZERO, -I, I, ZERO],
    }
}

pub fn sigma_z() -> ComplexMatrix {
    ComplexMatrix {
        rows: 2,
        cols: 2,
        data: vec![ONE, ZERO, ZERO, -ONE],
    }
}

/// The spin observable `n · σ` for a measurement direction.
pub fn pauli_projection(n: &Direction) -> ComplexMatrix {
    let [x, y, z] = n.vector();
    ComplexMatrix {
        rows: 2,
        cols: 2,
        data: vec![
            Complex64::new(z, 0.0),
            Complex64::new(x, -y),
            Complex64::new(x, y),
            Complex64::new(-z, 0.0),
        ],
    }
}

fn check_qubit(q: usize) -> Result<()> {
    if (1..=3).contains(&q) {
        Ok(())
    } else {
        Err(Error::InvalidQubit(q))
    }
}

/// Bit position (from the least significant end) of qubit `q` in a
/// three-qubit basis index.
pub(crate) fn bit_of(q: usize) -> usize {
    3 - q
}

/// Reduced density matrix over the `keep` qubits of an 8x8 three-qubit
/// operator. Kept qubits appear in ascending label order in the result.
pub fn partial_trace(rho: &ComplexMatrix, keep: &[usize]) -> Result<ComplexMatrix> {
    if rho.rows != 8 || rho.cols != 8 {
        return Err(Error::DimensionMismatch {
            expected: 8,
            actual: rho.rows.max(rho.cols),
        });
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.is_empty() || kept.len() > 2 || kept.len() != keep.len() {
        return Err(Error::InvalidKeepSet(keep.len()));
    }
    for &q in &kept {
        check_qubit(q)?;
    }
    let keep_mask: usize = kept.iter().map(|&q| 1 << bit_of(q)).sum();
    let reduce = |idx: usize| -> usize {
        kept.iter()
            .fold(0, |acc, &q| (acc << 1) | ((idx >> bit_of(q)) & 1))
    };
    let dim = 1 << kept.len();
    let mut out = ComplexMatrix::zeros(dim, dim)?;
    for r in 0..8 {
        for c in 0..8 {
            if r & !keep_mask == c & !keep_mask {
                out[(reduce(r), reduce(c))] += rho[(r, c)];
            }
        }
    }
    Ok(out)
}

/// Reduce a square matrix to upper Hessenberg form with Householder
/// reflections. The spectrum is preserved.
fn hessenberg(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.rows;
    let mut h = m.clone();
    for k in 0..n.saturating_sub(2) {
        let alpha_norm = (k + 1..n).map(|i| h[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if alpha_norm == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0.norm() == 0.0 { ONE } else { x0 / x0.norm() };
        let alpha = -phase * alpha_norm;
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in &mut v {
            *z /= vnorm;
        }
        // h <- (I - 2 v v^H) h
        for j in 0..n {
            let dot: Complex64 = v.iter().enumerate().map(|(t, vt)| vt.conj() * h[(k + 1 + t, j)]).sum();
            for (t, vt) in v.iter().enumerate() {
                h[(k + 1 + t, j)] -= 2.0 * vt * dot;
            }
        }
        // h <- h (I - 2 v v^H)
        for i in 0..n {
            let dot: Complex64 = v.iter().enumerate().map(|(t, vt)| h[(i, k + 1 + t)] * vt).sum();
            for (t, vt) in v.iter().enumerate() {
                h[(i, k + 1 + t)] -= 2.0 * dot * vt.conj();
            }
        }
    }
    h
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half_tr = (a + d) * 0.5;
    let disc = ((a - d) * 0.5).powi(2) + b * c;
    let root = disc.sqrt();
    let l1 = half_tr + root;
    let l2 = half_tr - root;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// All eigenvalues of a square complex matrix, with multiplicity, in no
/// particular order. Uses Hessenberg reduction followed by single-shift QR
/// sweeps with deflation.
pub fn eigenvalues(m: &ComplexMatrix) -> Result<Vec<Complex64>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.rows,
            actual: m.cols,
        });
    }
    let n = m.rows;
    let mut h = hessenberg(m);
    let scale = h.entries().iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut eig = Vec::with_capacity(n);
    if scale == 0.0 {
        return Ok(vec![ZERO; n]);
    }

    let mut hi = n - 1;
    let mut iter = 0;
    while hi > 0 {
        let mut lo = hi;
        while lo > 0 {
            let mut s = h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm();
            if s == 0.0 {
                s = scale;
            }
            if h[(lo, lo - 1)].norm() <= f64::EPSILON * s {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig.push(h[(hi, hi)]);
            hi -= 1;
            iter = 0;
            continue;
        }

        iter += 1;
        if iter > MAX_QR_ITERATIONS {
            return Err(Error::NoConvergence(MAX_QR_ITERATIONS));
        }
        let mu = if iter % 11 == 0 {
            // exceptional shift to break cycles
            h[(hi, hi)] + h[(hi, hi - 1)].norm()
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };

        for k in lo..=hi {
            h[(k, k)] -= mu;
        }
        let mut rotations = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let a = h[(k, k)];
            let b = h[(k + 1, k)];
            let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
            let (c, s) = if r == 0.0 { (ONE, ZERO) } else { (a / r, b / r) };
            for j in k..=hi {
                let x = h[(k, j)];
                let y = h[(k + 1, j)];
                h[(k, j)] = c.conj() * x + s.conj() * y;
                h[(k + 1, j)] = -s * x + c * y;
            }
            rotations.push((c, s));
        }
        for (offset, &(c, s)) in rotations.iter().enumerate() {
            let k = lo + offset;
            for i in lo..=(k + 1).min(hi) {
                let x = h[(i, k)];
                let y = h[(i, k + 1)];
                h[(i, k)] = x * c + y * s;
                h[(i, k + 1)] = -x * s.conj() + y * c.conj();
            }
        }
        for k in lo..=hi {
            h[(k, k)] += mu;
        }
    }
    eig.push(h[(0, 0)]);
    Ok(eig)
}

/// Eigenvalues of a matrix whose exact spectrum is known to be real and
/// nonnegative (such as `rho * rho_tilde`). Imaginary parts are dropped and
/// small negative artifacts are clamped to zero.
pub fn nonnegative_spectrum(m: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(eigenvalues(m)?
        .into_iter()
        .map(|z| if z.re < 0.0 && z.re > -SPECTRUM_CLAMP { 0.0 } else { z.re })
        .collect())
}
