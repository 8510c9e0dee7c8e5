//! Named states of the one-clean-qubit model and the depolarizing map.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, check_register, ComplexMatrix, SortedSpectrum, EPS_EIG, EPS_HERM};

/// Hermitian, positive semi-definite, unit-trace operator on `qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    qubits: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity before wrapping `matrix`.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let rho = Self::wrap(matrix)?;
        let deviation = rho.matrix.hermiticity_defect();
        if deviation > EPS_HERM {
            return Err(Error::NotHermitian { deviation });
        }
        let tr = rho.matrix.trace();
        if (tr.re - 1.0).abs() > EPS_EIG || tr.im.abs() > EPS_EIG {
            return Err(Error::InvalidState(format!("trace is {tr}")));
        }
        let min = linalg::min_eigenvalue(&rho.matrix)?;
        if min < -EPS_EIG {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(rho)
    }

    /// Wraps a matrix whose density-matrix properties hold by construction.
    pub(crate) fn wrap(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() || !matrix.rows().is_power_of_two() || matrix.rows() < 2 {
            return Err(Error::DimensionMismatch(format!(
                "density matrix must be 2^q x 2^q with q >= 1, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let qubits = matrix.rows().trailing_zeros() as usize;
        check_register(qubits)?;
        Ok(Self { qubits, matrix })
    }

    /// `|psi><psi|` for a normalized state vector.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > EPS_EIG {
            return Err(Error::InvalidState(format!("state vector has norm^2 {norm}")));
        }
        Self::wrap(ComplexMatrix::outer(psi))
    }

    pub fn maximally_mixed(qubits: usize) -> Result<Self> {
        check_register(qubits)?;
        let dim = 1usize << qubits;
        Self::wrap(ComplexMatrix::from_real_diagonal(&vec![1.0 / dim as f64; dim]))
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `U rho U^dagger`. Unitarity of `u` is the caller's responsibility.
    pub fn evolve(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.rows() != self.dim() || !u.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} unitary on a {}-dimensional state",
                u.rows(),
                u.cols(),
                self.dim()
            )));
        }
        Self::wrap(self.matrix.conjugate_by(u))
    }

    pub fn spectrum(&self) -> Result<SortedSpectrum> {
        linalg::hermitian_spectrum(&self.matrix)
    }

    pub fn purity(&self) -> f64 {
        // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
        self.matrix.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidMixingParameter(alpha));
    }
    Ok(())
}

/// Largest and smallest eigenvalue of the `n + 1` qubit input state:
/// `(2 - alpha) / 2^(n+1)` and `alpha / 2^(n+1)`.
pub fn dqc1_eigenvalues(n: usize, alpha: f64) -> Result<(f64, f64)> {
    check_alpha(alpha)?;
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let dim = (n as f64 + 1.0).exp2();
    Ok(((2.0 - alpha) / dim, alpha / dim))
}

/// Input state `((1 - alpha) / 2^n) |0><0| (x) 1_n + (alpha / 2^(n+1)) 1_(n+1)`,
/// with the clean qubit as qubit 0.
pub fn dqc1_state(n: usize, alpha: f64) -> Result<DensityMatrix> {
    let (hi, lo) = dqc1_eigenvalues(n, alpha)?;
    check_register(n + 1)?;
    let half = 1usize << n;
    let diag: Vec<f64> = (0..2 * half).map(|i| if i < half { hi } else { lo }).collect();
    DensityMatrix::wrap(ComplexMatrix::from_real_diagonal(&diag))
}

/// Spectrum of [`dqc1_state`] without building the matrix.
pub fn dqc1_spectrum(n: usize, alpha: f64) -> Result<SortedSpectrum> {
    let (hi, lo) = dqc1_eigenvalues(n, alpha)?;
    if n >= usize::BITS as usize - 1 {
        return Err(Error::InvalidArgument(format!("n = {n} is too large")));
    }
    let half = 1usize << n;
    let mut values = vec![hi; half];
    values.resize(2 * half, lo);
    SortedSpectrum::new(values)
}

/// Uniform mixture of all `n + 1` qubit basis states except the first and the last.
pub fn tau_state(n: usize) -> Result<DensityMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    check_register(n + 1)?;
    let dim = 1usize << (n + 1);
    let w = 1.0 / (dim - 2) as f64;
    let diag: Vec<f64> = (0..dim)
        .map(|i| if i == 0 || i == dim - 1 { 0.0 } else { w })
        .collect();
    DensityMatrix::wrap(ComplexMatrix::from_real_diagonal(&diag))
}

/// `(1 - alpha) rho + alpha 1 / 2^q`.
pub fn depolarize(rho: &DensityMatrix, alpha: f64) -> Result<DensityMatrix> {
    check_alpha(alpha)?;
    let dim = rho.dim();
    let mut m = rho.matrix().scale_real(1.0 - alpha);
    let shift = alpha / dim as f64;
    for i in 0..dim {
        m[(i, i)] += shift;
    }
    DensityMatrix::wrap(m)
}
