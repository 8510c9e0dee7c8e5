//! Gates, one-clean-qubit circuits, the exact readout and its shot-sampled estimate.

mod parse;

pub use parse::{parse_circuit, GateKind};

use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng as _;
use rand_distr::{Binomial, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, c, check_register, ComplexMatrix, ONE, ZERO};
use crate::rng;
use crate::states::dqc1_state;

/// Tolerance on `max |U^dagger U - I|`.
pub const UNITARITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Unitary {
    qubits: usize,
    matrix: ComplexMatrix,
}

impl Unitary {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() || !matrix.rows().is_power_of_two() {
            return Err(Error::DimensionMismatch(format!(
                "unitary must be 2^q x 2^q, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let qubits = matrix.rows().trailing_zeros() as usize;
        check_register(qubits)?;
        let deviation = matrix.unitarity_defect();
        if deviation > UNITARITY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self { qubits, matrix })
    }

    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        debug_assert!(matrix.unitarity_defect() < 1e-8);
        let qubits = matrix.rows().trailing_zeros() as usize;
        Self { qubits, matrix }
    }

    pub fn identity(qubits: usize) -> Result<Self> {
        check_register(qubits)?;
        Ok(Self::from_trusted(ComplexMatrix::identity(1 << qubits)))
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

    pub fn adjoint(&self) -> Self {
        Self::from_trusted(self.matrix.adjoint())
    }

    /// `self` applied after `first`.
    pub fn compose(&self, first: &Unitary) -> Result<Self> {
        if self.qubits != first.qubits {
            return Err(Error::DimensionMismatch(format!(
                "composing {}- and {}-qubit unitaries",
                self.qubits, first.qubits
            )));
        }
        Ok(Self::from_trusted(&self.matrix * &first.matrix))
    }

    /// Embeds this unitary on `targets` of a larger register.
    pub fn embed(&self, targets: &[usize], total_qubits: usize) -> Result<Self> {
        Ok(Self::from_trusted(linalg::embed(&self.matrix, targets, total_qubits)?))
    }

    /// Normalized trace `tr(U) / 2^q`.
    pub fn normalized_trace(&self) -> Complex64 {
        self.matrix.trace() / self.dim() as f64
    }
}

/// Readout observable on the clean qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PauliAxis {
    X,
    Y,
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_fn(2, 2, |r, col| if r != col { ONE } else { ZERO })
}

pub fn pauli_y() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2, 2);
    m[(0, 1)] = c(0.0, -1.0);
    m[(1, 0)] = c(0.0, 1.0);
    m
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real_diagonal(&[1.0, -1.0])
}

pub fn hadamard() -> ComplexMatrix {
    let h = FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(2, 2, |r, col| if r == 1 && col == 1 { c(-h, 0.0) } else { c(h, 0.0) })
}

/// `diag(1, e^{i phi})`.
pub fn phase(phi: f64) -> ComplexMatrix {
    let mut m = ComplexMatrix::identity(2);
    m[(1, 1)] = Complex64::from_polar(1.0, phi);
    m
}

/// `exp(-i theta sigma / 2)` for a Pauli `sigma`.
pub fn pauli_rotation(sigma: &ComplexMatrix, theta: f64) -> ComplexMatrix {
    let cos = ComplexMatrix::identity(2).scale_real((theta / 2.0).cos());
    let sin = sigma.scale(c(0.0, -(theta / 2.0).sin()));
    &cos + &sin
}

/// Two-qubit controlled version of a one-qubit gate, control = first qubit.
pub fn controlled(gate: &ComplexMatrix) -> ComplexMatrix {
    let mut m = ComplexMatrix::identity(4);
    for r in 0..2 {
        for col in 0..2 {
            m[(2 + r, 2 + col)] = gate[(r, col)];
        }
    }
    m
}

pub fn cnot() -> ComplexMatrix {
    controlled(&pauli_x())
}

pub fn cz() -> ComplexMatrix {
    controlled(&pauli_z())
}

/// Rotation by `theta` in the `(|01>, |10>)` plane, identity on `|00>` and `|11>`:
/// `|01> -> cos|01> + sin|10>` and `|10> -> -sin|01> + cos|10>`.
pub fn r_theta(theta: f64) -> Unitary {
    let (s, co) = theta.sin_cos();
    let mut m = ComplexMatrix::identity(4);
    m[(0b01, 0b01)] = c(co, 0.0);
    m[(0b10, 0b01)] = c(s, 0.0);
    m[(0b01, 0b10)] = c(-s, 0.0);
    m[(0b10, 0b10)] = c(co, 0.0);
    Unitary::from_trusted(m)
}

/// `[|0><0| (x) 1 + |1><1| (x) V] (H (x) 1)` on `n + 1` qubits, clean qubit first.
pub fn cdqc1_unitary(v: &Unitary) -> Result<Unitary> {
    let n = v.qubits();
    check_register(n + 1)?;
    let h = v.dim();
    let s = FRAC_1_SQRT_2;
    let mut m = ComplexMatrix::zeros(2 * h, 2 * h);
    for r in 0..h {
        m[(r, r)] = c(s, 0.0);
        m[(r, r + h)] = c(s, 0.0);
        for col in 0..h {
            let x = v.matrix()[(r, col)] * s;
            m[(r + h, col)] = x;
            m[(r + h, col + h)] = -x;
        }
    }
    Ok(Unitary::from_trusted(m))
}

/// Haar-distributed unitary from the QR factorization of a complex Ginibre
/// matrix, with the phases of `R`'s diagonal absorbed into `Q`.
pub fn haar_random_unitary(qubits: usize, seed: u64) -> Result<Unitary> {
    check_register(qubits)?;
    let mut rng = rng::stream(seed, 0);
    Ok(haar_with(qubits, &mut rng))
}

pub(crate) fn haar_with(qubits: usize, rng: &mut rng::Rng) -> Unitary {
    let dim = 1usize << qubits;
    let scale = FRAC_1_SQRT_2;
    let g = DMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re * scale, im * scale)
    });
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let m = ComplexMatrix::from_fn(dim, dim, |row, col| {
        let d = r[(col, col)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        q[(row, col)] * ph
    });
    Unitary::from_trusted(m)
}

fn readout_register(u: &Unitary) -> Result<usize> {
    if u.qubits() < 2 {
        return Err(Error::InvalidArgument(
            "a one-clean-qubit circuit needs at least 2 qubits".into(),
        ));
    }
    Ok(u.qubits() - 1)
}

/// Exact readout `tr[U rho U^dagger (sigma (x) 1_n)]` for the input state with
/// mixing parameter `alpha`.
pub fn dqc1_expectation(u: &Unitary, alpha: f64, axis: PauliAxis) -> Result<f64> {
    let n = readout_register(u)?;
    let rho = dqc1_state(n, alpha)?;
    let diag: Vec<f64> = (0..rho.dim()).map(|i| rho.matrix()[(i, i)].re).collect();
    let h = 1usize << n;
    let m = u.matrix();
    // coherence sum_i <i|U rho U^dagger|i + h> of the final state
    let mut coherence = ZERO;
    for i in 0..h {
        for (k, &d) in diag.iter().enumerate() {
            if d != 0.0 {
                coherence += m[(i, k)] * m[(i + h, k)].conj() * d;
            }
        }
    }
    Ok(match axis {
        PauliAxis::X => 2.0 * coherence.re,
        PauliAxis::Y => -2.0 * coherence.im,
    })
}

/// Shot-sampled estimate of a readout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampledReadout {
    pub estimate: f64,
    pub std_error: f64,
    pub shots: u64,
}

/// Mean of `shots` Born-rule `+-1` outcomes of `sigma` on the clean qubit.
pub fn sample_dqc1(u: &Unitary, alpha: f64, axis: PauliAxis, shots: u64, seed: u64) -> Result<SampledReadout> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    let exact = dqc1_expectation(u, alpha, axis)?;
    let mut rng = rng::stream(seed, 0);
    Ok(sample_outcomes(exact, shots, &mut rng))
}

fn sample_outcomes(expectation: f64, shots: u64, rng: &mut rng::Rng) -> SampledReadout {
    let p_plus = ((1.0 + expectation) / 2.0).clamp(0.0, 1.0);
    let plus = Binomial::new(shots, p_plus)
        .expect("probability clamped to [0, 1]")
        .sample(rng);
    let n = shots as f64;
    let mean = (2.0 * plus as f64 - n) / n;
    let std_error = if shots > 1 {
        let var = (n / (n - 1.0)) * (1.0 - mean * mean).max(0.0);
        (var / n).sqrt()
    } else {
        0.0
    };
    SampledReadout {
        estimate: mean,
        std_error,
        shots,
    }
}

/// Sign relating the y-axis readout of the controlled circuit to `Im tr(V)`.
///
/// Fixed once from the exact readout for `V = diag(1, i)`, whose normalized
/// trace has imaginary part `1/2`.
pub fn y_axis_sign() -> f64 {
    static SIGN: OnceLock<f64> = OnceLock::new();
    *SIGN.get_or_init(|| {
        let v = Unitary::from_trusted(phase(std::f64::consts::FRAC_PI_2));
        let u = cdqc1_unitary(&v).expect("two-qubit register");
        let y = dqc1_expectation(&u, 0.0, PauliAxis::Y).expect("valid register");
        y.signum()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceEstimate {
    /// Estimate of `tr(V) / 2^n`.
    pub estimate: Complex64,
    /// Standard errors of the real and imaginary parts.
    pub std_error: Complex64,
    pub shots: u64,
}

/// Estimates `tr(V) / 2^n` from x- and y-readouts of the controlled circuit,
/// rescaled by `1 / (1 - alpha)`.
pub fn normalized_trace_estimate(v: &Unitary, alpha: f64, shots: u64, seed: u64) -> Result<TraceEstimate> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    if alpha == 1.0 {
        return Err(Error::NoSignal);
    }
    let u = cdqc1_unitary(v)?;
    let ex = dqc1_expectation(&u, alpha, PauliAxis::X)?;
    let ey = dqc1_expectation(&u, alpha, PauliAxis::Y)?;
    let x = sample_outcomes(ex, shots, &mut rng::stream(seed, 0));
    let y = sample_outcomes(ey, shots, &mut rng::stream(seed, 1));
    let gain = 1.0 / (1.0 - alpha);
    let sign = y_axis_sign();
    Ok(TraceEstimate {
        estimate: c(x.estimate * gain, sign * y.estimate * gain),
        std_error: c(x.std_error * gain, y.std_error * gain),
        shots,
    })
}

/// A gate list over a fixed register.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    qubits: usize,
    ops: Vec<CircuitOp>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CircuitOp {
    Gate {
        kind: GateKind,
        targets: Vec<usize>,
        param: Option<f64>,
    },
    Matrix {
        matrix: ComplexMatrix,
        targets: Vec<usize>,
    },
}

impl CircuitOp {
    pub fn matrix(&self) -> ComplexMatrix {
        match self {
            Self::Gate { kind, param, .. } => kind.matrix(param.unwrap_or(0.0)),
            Self::Matrix { matrix, .. } => matrix.clone(),
        }
    }

    pub fn targets(&self) -> &[usize] {
        match self {
            Self::Gate { targets, .. } | Self::Matrix { targets, .. } => targets,
        }
    }
}

impl Circuit {
    pub fn new(qubits: usize) -> Result<Self> {
        check_register(qubits)?;
        if qubits == 0 {
            return Err(Error::InvalidArgument("circuit needs at least one qubit".into()));
        }
        Ok(Self { qubits, ops: Vec::new() })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn ops(&self) -> &[CircuitOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn push_gate(&mut self, kind: GateKind, targets: &[usize], param: Option<f64>) -> Result<()> {
        if targets.len() != kind.arity() {
            return Err(Error::GateTargetMismatch(format!(
                "{} acts on {} qubit(s), got {}",
                kind.name(),
                kind.arity(),
                targets.len()
            )));
        }
        if kind.takes_param() != param.is_some() {
            return Err(Error::InvalidArgument(format!(
                "{} {} a parameter",
                kind.name(),
                if kind.takes_param() { "requires" } else { "does not take" }
            )));
        }
        self.check_targets(targets)?;
        self.ops.push(CircuitOp::Gate {
            kind,
            targets: targets.to_vec(),
            param,
        });
        Ok(())
    }

    /// Appends an arbitrary unitary acting on `targets`.
    pub fn push_matrix(&mut self, matrix: ComplexMatrix, targets: &[usize]) -> Result<()> {
        if !matrix.is_square() || matrix.rows() != 1 << targets.len() {
            return Err(Error::GateTargetMismatch(format!(
                "{}x{} matrix on {} target(s)",
                matrix.rows(),
                matrix.cols(),
                targets.len()
            )));
        }
        let deviation = matrix.unitarity_defect();
        if deviation > UNITARITY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        self.check_targets(targets)?;
        self.ops.push(CircuitOp::Matrix {
            matrix,
            targets: targets.to_vec(),
        });
        Ok(())
    }

    fn check_targets(&self, targets: &[usize]) -> Result<()> {
        for (i, &t) in targets.iter().enumerate() {
            if t >= self.qubits {
                return Err(Error::GateTargetMismatch(format!(
                    "qubit {t} outside a {}-qubit register",
                    self.qubits
                )));
            }
            if targets[..i].contains(&t) {
                return Err(Error::GateTargetMismatch(format!("repeated qubit {t}")));
            }
        }
        Ok(())
    }

    /// Product of all gates, first gate applied first.
    pub fn unitary(&self) -> Unitary {
        let mut m = ComplexMatrix::identity(1 << self.qubits);
        for op in &self.ops {
            linalg::apply_gate(&mut m, &op.matrix(), op.targets()).expect("targets validated on push");
        }
        Unitary::from_trusted(m)
    }
}
