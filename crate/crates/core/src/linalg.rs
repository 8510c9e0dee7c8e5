//! Dense complex matrices over qubit registers.
//!
//! Matrices are stored row-major. Qubit `0` is the most significant bit of a
//! basis index, so on a `q`-qubit register qubit `i` lives at bit `q - 1 - i`.
//! Eigen- and singular-value decompositions are delegated to `nalgebra`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};
use std::sync::atomic::{AtomicUsize, Ordering};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hermiticity tolerance (max-entry norm).
pub const EPS_HERM: f64 = 1e-10;
/// Tolerance on spectrum residuals, traces and eigenvalue signs.
pub const EPS_EIG: f64 = 1e-9;
/// Default largest register handled by dense routines.
pub const DEFAULT_MAX_QUBITS: usize = 11;

static MAX_QUBITS: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_QUBITS);

/// Current register-size limit in qubits.
pub fn max_register_qubits() -> usize {
    MAX_QUBITS.load(Ordering::Relaxed)
}

/// Change the register-size limit for the whole process.
pub fn set_max_register_qubits(qubits: usize) {
    MAX_QUBITS.store(qubits, Ordering::Relaxed);
}

pub(crate) fn check_register(qubits: usize) -> Result<()> {
    let max = max_register_qubits();
    if qubits > max {
        return Err(Error::RegisterTooLarge { qubits, max });
    }
    Ok(())
}

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    let max = max_register_qubits();
    if dim > 1usize << max {
        let qubits = (usize::BITS - (dim - 1).leading_zeros()) as usize;
        return Err(Error::RegisterTooLarge { qubits, max });
    }
    Ok(())
}

pub(crate) const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub(crate) const ZERO: Complex64 = c(0.0, 0.0);
pub(crate) const ONE: Complex64 = c(1.0, 0.0);

#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for col in 0..cols {
                m[(r, col)] = f(r, col);
            }
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting non-finite values.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("matrix entries must be finite".into()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::from_row_major(n_rows, n_cols, rows.concat())
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = c(d, 0.0);
        }
        m
    }

    /// `|v><v|` for a column vector `v`.
    pub fn outer(v: &[Complex64]) -> Self {
        Self::from_fn(v.len(), v.len(), |r, col| v[r] * v[col].conj())
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

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, col: usize) -> Vec<Complex64> {
        (0..self.rows).map(|r| self[(r, col)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, col| self[(col, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, col| self[(col, r)])
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(c(s, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry modulus.
    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |a_ij - b_ij|`; infinite when shapes differ.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |h - h^dagger|` over all entries.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for r in 0..self.rows {
            for col in r..self.cols {
                worst = worst.max((self[(r, col)] - self[(col, r)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// `max |U^dagger U - I|`.
    pub fn unitarity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        (&self.adjoint() * self).max_abs_diff(&Self::identity(self.rows))
    }

    /// `u * self * u^dagger`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        &(u * self) * &u.adjoint()
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.cols, "vector length must match column count");
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `<phi| self |psi>`.
    pub fn sandwich(&self, phi: &[Complex64], psi: &[Complex64]) -> Complex64 {
        let m_psi = self.mul_vec(psi);
        phi.iter().zip(&m_psi).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub fn from_nalgebra(m: &DMatrix<Complex64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |r, col| m[(r, col)])
    }

    /// Hermitian part `(h + h^dagger) / 2`.
    pub(crate) fn hermitian_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |r, col| {
            (self[(r, col)] + self[(col, r)].conj()) * 0.5
        })
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (r, col): (usize, usize)) -> &Complex64 {
        debug_assert!(r < self.rows && col < self.cols);
        &self.data[r * self.cols + col]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (r, col): (usize, usize)) -> &mut Complex64 {
        debug_assert!(r < self.rows && col < self.cols);
        &mut self.data[r * self.cols + col]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            let out_row = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
            for (k, a) in self.row(r).iter().enumerate() {
                if *a == ZERO {
                    continue;
                }
                for (o, b) in out_row.iter_mut().zip(rhs.row(k)) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(r) {
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Eigenvalues sorted non-increasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SortedSpectrum {
    values: Vec<f64>,
}

impl SortedSpectrum {
    /// Wraps already-sorted values; rejects empty, non-finite or increasing input.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSpectrum("empty spectrum".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSpectrum("non-finite eigenvalue".into()));
        }
        if let Some(i) = values.windows(2).position(|w| w[0] < w[1]) {
            return Err(Error::InvalidSpectrum(format!(
                "not sorted non-increasing at position {i}: {} < {}",
                values[i],
                values[i + 1]
            )));
        }
        Ok(Self { values })
    }

    pub fn from_unsorted(mut values: Vec<f64>) -> Result<Self> {
        values.sort_by(|a, b| b.total_cmp(a));
        Self::new(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Eigenvalue with 1-based rank (`lambda(1)` is the largest).
    pub fn lambda(&self, rank: usize) -> Result<f64> {
        if rank == 0 || rank > self.values.len() {
            return Err(Error::SpectrumTooShort {
                needed: rank,
                len: self.values.len(),
            });
        }
        Ok(self.values[rank - 1])
    }

    pub fn max(&self) -> f64 {
        self.values[0]
    }

    pub fn min(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Checks the density-matrix conditions: no value below `-EPS_EIG` and unit sum.
    pub fn check_density(&self) -> Result<()> {
        if self.min() < -EPS_EIG {
            return Err(Error::InvalidSpectrum(format!("negative eigenvalue {}", self.min())));
        }
        if (self.sum() - 1.0).abs() > EPS_EIG {
            return Err(Error::InvalidSpectrum(format!("eigenvalues sum to {}", self.sum())));
        }
        Ok(())
    }
}

/// Full Hermitian eigendecomposition: spectrum plus eigenvectors as the
/// columns of a unitary, in the same (non-increasing) order.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub spectrum: SortedSpectrum,
    pub vectors: ComplexMatrix,
}

pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<HermitianEigen> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigendecomposition of a {}x{} matrix",
            h.rows(),
            h.cols()
        )));
    }
    let deviation = h.hermiticity_defect();
    if deviation > EPS_HERM {
        return Err(Error::NotHermitian { deviation });
    }
    let eig = h.hermitian_part().to_nalgebra().symmetric_eigen();
    let mut order: Vec<usize> = (0..h.rows()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = ComplexMatrix::from_fn(h.rows(), h.rows(), |r, col| eig.eigenvectors[(r, order[col])]);
    Ok(HermitianEigen {
        spectrum: SortedSpectrum::new(values)?,
        vectors,
    })
}

pub fn hermitian_spectrum(h: &ComplexMatrix) -> Result<SortedSpectrum> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "spectrum of a {}x{} matrix",
            h.rows(),
            h.cols()
        )));
    }
    let deviation = h.hermiticity_defect();
    if deviation > EPS_HERM {
        return Err(Error::NotHermitian { deviation });
    }
    let values = h.hermitian_part().to_nalgebra().symmetric_eigenvalues();
    SortedSpectrum::from_unsorted(values.iter().copied().collect())
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(h: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_spectrum(h)?.min())
}

pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    a.to_nalgebra().singular_values().iter().copied().collect()
}

/// Sum of singular values. Hermitian input takes the eigenvalue path.
pub fn trace_norm(a: &ComplexMatrix) -> f64 {
    if a.is_square() && a.is_hermitian(EPS_HERM) {
        if let Ok(spec) = hermitian_spectrum(a) {
            return spec.values().iter().map(|v| v.abs()).sum();
        }
    }
    singular_values(a).iter().sum()
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let rows = a.rows().checked_mul(b.rows());
    let cols = a.cols().checked_mul(b.cols());
    let (Some(rows), Some(cols)) = (rows, cols) else {
        return Err(Error::RegisterTooLarge {
            qubits: usize::BITS as usize,
            max: max_register_qubits(),
        });
    };
    check_dim(rows)?;
    check_dim(cols)?;
    let mut out = ComplexMatrix::zeros(rows, cols);
    for ar in 0..a.rows() {
        for ac in 0..a.cols() {
            let x = a[(ar, ac)];
            if x == ZERO {
                continue;
            }
            for br in 0..b.rows() {
                let base = (ar * b.rows() + br) * cols + ac * b.cols();
                for (bc, y) in b.row(br).iter().enumerate() {
                    out.data[base + bc] = x * y;
                }
            }
        }
    }
    Ok(out)
}

/// Bit mask of qubit `qubit` within a `total`-qubit basis index.
#[inline]
pub fn qubit_bit(qubit: usize, total: usize) -> usize {
    1 << (total - 1 - qubit)
}

/// Maps each local gate index onto its scattered register bits.
/// `targets[0]` is the most significant qubit of the gate.
fn scatter_table(targets: &[usize], total: usize) -> Vec<usize> {
    let k = targets.len();
    (0..1usize << k)
        .map(|local| {
            targets
                .iter()
                .enumerate()
                .filter(|(pos, _)| local & (1 << (k - 1 - pos)) != 0)
                .fold(0, |acc, (_, &q)| acc | qubit_bit(q, total))
        })
        .collect()
}

fn check_targets(gate: &ComplexMatrix, targets: &[usize], total: usize) -> Result<usize> {
    if targets.is_empty() {
        return Err(Error::GateTargetMismatch("no target qubits".into()));
    }
    if !gate.is_square() || gate.rows() != 1 << targets.len() {
        return Err(Error::GateTargetMismatch(format!(
            "{}x{} gate on {} target(s)",
            gate.rows(),
            gate.cols(),
            targets.len()
        )));
    }
    let mut mask = 0usize;
    for &t in targets {
        if t >= total {
            return Err(Error::GateTargetMismatch(format!(
                "target qubit {t} outside a {total}-qubit register"
            )));
        }
        let bit = qubit_bit(t, total);
        if mask & bit != 0 {
            return Err(Error::GateTargetMismatch(format!("repeated target qubit {t}")));
        }
        mask |= bit;
    }
    Ok(mask)
}

/// Full `2^total` operator acting as `gate` on `targets` and identity elsewhere.
pub fn embed(gate: &ComplexMatrix, targets: &[usize], total_qubits: usize) -> Result<ComplexMatrix> {
    check_register(total_qubits)?;
    let mask = check_targets(gate, targets, total_qubits)?;
    let dim = 1usize << total_qubits;
    let table = scatter_table(targets, total_qubits);
    let mut out = ComplexMatrix::zeros(dim, dim);
    for base in (0..dim).filter(|b| b & mask == 0) {
        for (gr, &sr) in table.iter().enumerate() {
            for (gc, &sc) in table.iter().enumerate() {
                out[(base | sr, base | sc)] = gate[(gr, gc)];
            }
        }
    }
    Ok(out)
}

/// `m <- embed(gate, targets) * m` without forming the embedded operator.
pub fn apply_gate(m: &mut ComplexMatrix, gate: &ComplexMatrix, targets: &[usize]) -> Result<()> {
    if !m.is_square() || !m.rows().is_power_of_two() {
        return Err(Error::DimensionMismatch("register operator must be 2^q square".into()));
    }
    let total = m.rows().trailing_zeros() as usize;
    let mask = check_targets(gate, targets, total)?;
    let table = scatter_table(targets, total);
    let width = table.len();
    let mut gathered = vec![ZERO; width];
    for col in 0..m.cols() {
        for base in (0..m.rows()).filter(|b| b & mask == 0) {
            for (slot, &s) in gathered.iter_mut().zip(&table) {
                *slot = m[(base | s, col)];
            }
            for (gr, &sr) in table.iter().enumerate() {
                let mut acc = ZERO;
                for gc in 0..width {
                    acc += gate[(gr, gc)] * gathered[gc];
                }
                m[(base | sr, col)] = acc;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma_x() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[vec![ZERO, ONE], vec![ONE, ZERO]]).unwrap()
    }

    fn basis(dim: usize, i: usize) -> Vec<Complex64> {
        let mut v = vec![ZERO; dim];
        v[i] = ONE;
        v
    }

    #[test]
    fn kron_identity_and_projector() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2).unwrap(), ComplexMatrix::identity(4));
        let p0 = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
        assert_eq!(
            kron(&p0, &i2).unwrap(),
            ComplexMatrix::from_real_diagonal(&[1.0, 1.0, 0.0, 0.0])
        );
    }

    #[test]
    fn kron_xx_flips_both_bits() {
        let xx = kron(&sigma_x(), &sigma_x()).unwrap();
        assert_eq!(xx.mul_vec(&basis(4, 0b00)), basis(4, 0b11));
    }

    #[test]
    fn kron_rejects_oversized_product() {
        let big = ComplexMatrix::identity(1 << 6);
        let err = kron(&big, &big).unwrap_err();
        assert!(matches!(err, Error::RegisterTooLarge { .. }));
    }

    #[test]
    fn spectrum_examples() {
        let d = ComplexMatrix::from_real_diagonal(&[0.25; 4]);
        assert_eq!(hermitian_spectrum(&d).unwrap().values(), &[0.25; 4]);
        let s = hermitian_spectrum(&sigma_x()).unwrap();
        assert!((s.values()[0] - 1.0).abs() < 1e-14);
        assert!((s.values()[1] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn spectrum_rejects_non_hermitian() {
        let m = ComplexMatrix::from_rows(&[vec![ZERO, ONE], vec![ZERO, ZERO]]).unwrap();
        assert!(matches!(hermitian_spectrum(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn eigen_reconstructs() {
        let h = ComplexMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(0.5, -0.25), c(0.0, 1.0)],
            vec![c(0.5, 0.25), c(-1.0, 0.0), c(0.3, 0.0)],
            vec![c(0.0, -1.0), c(0.3, 0.0), c(0.7, 0.0)],
        ])
        .unwrap();
        let e = hermitian_eigen(&h).unwrap();
        let lam = ComplexMatrix::from_real_diagonal(e.spectrum.values());
        let rebuilt = lam.conjugate_by(&e.vectors);
        assert!(rebuilt.max_abs_diff(&h) <= EPS_EIG * 3.0);
    }

    #[test]
    fn trace_norm_examples() {
        let z = ComplexMatrix::zeros(4, 4);
        assert_eq!(trace_norm(&z), 0.0);
        let d = ComplexMatrix::from_real_diagonal(&[0.5, -0.5]);
        assert!((trace_norm(&d) - 1.0).abs() < 1e-14);
        let nil = ComplexMatrix::from_rows(&[vec![ZERO, c(3.0, 0.0)], vec![ZERO, ZERO]]).unwrap();
        assert!((trace_norm(&nil) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn embed_examples() {
        let x0 = embed(&sigma_x(), &[0], 2).unwrap();
        assert_eq!(x0, kron(&sigma_x(), &ComplexMatrix::identity(2)).unwrap());
        assert_eq!(embed(&ComplexMatrix::identity(2), &[1], 3).unwrap(), ComplexMatrix::identity(8));
        let x1 = embed(&sigma_x(), &[1], 2).unwrap();
        assert_eq!(x1, kron(&ComplexMatrix::identity(2), &sigma_x()).unwrap());
    }

    #[test]
    fn embed_reversed_targets_swaps_roles() {
        let p0 = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
        let p1 = ComplexMatrix::from_real_diagonal(&[0.0, 1.0]);
        let g = &kron(&p0, &sigma_x()).unwrap() + &kron(&p1, &ComplexMatrix::identity(2)).unwrap();
        // flip qubit 0 when qubit 1 is clear
        let e = embed(&g, &[1, 0], 2).unwrap();
        assert_eq!(e.mul_vec(&basis(4, 0b00)), basis(4, 0b10));
        assert_eq!(e.mul_vec(&basis(4, 0b01)), basis(4, 0b01));
    }

    #[test]
    fn embed_rejects_mismatch() {
        assert!(matches!(
            embed(&sigma_x(), &[0, 1], 2),
            Err(Error::GateTargetMismatch(_))
        ));
        assert!(matches!(embed(&sigma_x(), &[2], 2), Err(Error::GateTargetMismatch(_))));
        let g = ComplexMatrix::identity(4);
        assert!(matches!(embed(&g, &[1, 1], 2), Err(Error::GateTargetMismatch(_))));
    }

    #[test]
    fn apply_gate_matches_embed() {
        let g = ComplexMatrix::from_fn(4, 4, |r, col| c(r as f64 + 0.5, col as f64 - 1.0));
        let m0 = ComplexMatrix::from_fn(8, 8, |r, col| c((r * 3 + col) as f64, (r as f64) - (col as f64)));
        let mut m = m0.clone();
        apply_gate(&mut m, &g, &[2, 0]).unwrap();
        let expected = &embed(&g, &[2, 0], 3).unwrap() * &m0;
        assert!(m.max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn sorted_spectrum_validation() {
        assert!(SortedSpectrum::new(vec![0.5, 0.6]).is_err());
        assert!(SortedSpectrum::new(vec![]).is_err());
        let s = SortedSpectrum::from_unsorted(vec![0.1, 0.6, 0.3]).unwrap();
        assert_eq!(s.values(), &[0.6, 0.3, 0.1]);
        assert_eq!(s.lambda(1).unwrap(), 0.6);
        assert!(s.lambda(4).is_err());
    }
}
