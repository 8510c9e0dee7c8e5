//! Line-oriented circuit files.
//!
//! One gate per line: `GATE q0 [q1] [param]`. Everything after `#` is a
//! comment and blank lines are skipped. Gate names are case-insensitive.
//! Angles are radians, written as plain numbers or with `pi`
//! (`pi/4`, `-pi/2`, `3*pi/8`, `0.5pi`).
//!
//! ```text
//! # Bell pair, then a cross-cut rotation
//! H 0
//! CNOT 0 1
//! R 1 2 pi/8
//! ```

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{cnot, controlled, cz, hadamard, pauli_rotation, pauli_x, pauli_y, pauli_z, phase, r_theta, Circuit};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    S,
    Sdg,
    T,
    Tdg,
    Rx,
    Ry,
    Rz,
    Cnot,
    Cz,
    /// Controlled phase `diag(1, 1, 1, e^{i phi})`.
    Cp,
    /// Rotation in the `(|01>, |10>)` plane.
    R,
}

impl GateKind {
    pub const ALL: [GateKind; 15] = [
        Self::H,
        Self::X,
        Self::Y,
        Self::Z,
        Self::S,
        Self::Sdg,
        Self::T,
        Self::Tdg,
        Self::Rx,
        Self::Ry,
        Self::Rz,
        Self::Cnot,
        Self::Cz,
        Self::Cp,
        Self::R,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::H => "H",
            Self::X => "X",
            Self::Y => "Y",
            Self::Z => "Z",
            Self::S => "S",
            Self::Sdg => "SDG",
            Self::T => "T",
            Self::Tdg => "TDG",
            Self::Rx => "RX",
            Self::Ry => "RY",
            Self::Rz => "RZ",
            Self::Cnot => "CNOT",
            Self::Cz => "CZ",
            Self::Cp => "CP",
            Self::R => "R",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Self::Cnot | Self::Cz | Self::Cp | Self::R => 2,
            _ => 1,
        }
    }

    pub fn takes_param(self) -> bool {
        matches!(self, Self::Rx | Self::Ry | Self::Rz | Self::Cp | Self::R)
    }

    /// Gate matrix; `param` is ignored by fixed gates.
    pub fn matrix(self, param: f64) -> ComplexMatrix {
        match self {
            Self::H => hadamard(),
            Self::X => pauli_x(),
            Self::Y => pauli_y(),
            Self::Z => pauli_z(),
            Self::S => phase(PI / 2.0),
            Self::Sdg => phase(-PI / 2.0),
            Self::T => phase(PI / 4.0),
            Self::Tdg => phase(-PI / 4.0),
            Self::Rx => pauli_rotation(&pauli_x(), param),
            Self::Ry => pauli_rotation(&pauli_y(), param),
            Self::Rz => pauli_rotation(&pauli_z(), param),
            Self::Cnot => cnot(),
            Self::Cz => cz(),
            Self::Cp => controlled(&phase(param)),
            Self::R => r_theta(param).into_matrix(),
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let upper = s.to_ascii_uppercase();
        let alias = match upper.as_str() {
            "CX" => "CNOT",
            "SDAG" => "SDG",
            "TDAG" => "TDG",
            "CPHASE" => "CP",
            "RTHETA" => "R",
            other => other,
        };
        Self::ALL
            .into_iter()
            .find(|k| k.name() == alias)
            .ok_or_else(|| format!("unknown gate '{s}'"))
    }
}

/// Parses an angle such as `0.3`, `pi`, `-pi/2`, `3*pi/8` or `0.5pi`.
pub(crate) fn parse_angle(token: &str) -> std::result::Result<f64, String> {
    let t = token.trim().to_ascii_lowercase();
    let Some(pos) = t.find("pi") else {
        return t.parse::<f64>().map_err(|_| format!("bad angle '{token}'"));
    };
    let coeff = t[..pos].trim_end_matches('*');
    let coeff = match coeff {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => x.parse::<f64>().map_err(|_| format!("bad angle '{token}'"))?,
    };
    let rest = &t[pos + 2..];
    let divisor = if rest.is_empty() {
        1.0
    } else if let Some(d) = rest.strip_prefix('/') {
        d.parse::<f64>().map_err(|_| format!("bad angle '{token}'"))?
    } else {
        return Err(format!("bad angle '{token}'"));
    };
    Ok(coeff * PI / divisor)
}

/// Parses a circuit file for a register of `qubits` qubits.
pub fn parse_circuit(text: &str, qubits: usize) -> Result<Circuit> {
    let mut circuit = Circuit::new(qubits)?;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::CircuitParse { line: line_no, message };
        let mut tokens = line.split_whitespace();
        let kind: GateKind = tokens.next().unwrap_or_default().parse().map_err(err)?;
        let args: Vec<&str> = tokens.collect();
        let expected = kind.arity() + usize::from(kind.takes_param());
        if args.len() != expected {
            return Err(err(format!(
                "{kind} expects {expected} argument(s), got {}",
                args.len()
            )));
        }
        let targets = args[..kind.arity()]
            .iter()
            .map(|a| a.parse::<usize>().map_err(|_| format!("bad qubit index '{a}'")))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(err)?;
        let param = if kind.takes_param() {
            Some(parse_angle(args[kind.arity()]).map_err(err)?)
        } else {
            None
        };
        circuit
            .push_gate(kind, &targets, param)
            .map_err(|e| err(e.to_string()))?;
    }
    Ok(circuit)
}
