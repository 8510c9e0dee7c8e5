//! Randomized search for unitaries that entangle a state across a cut.
//!
//! Haar-random restarts followed by greedy refinement with random two-qubit
//! rotations `exp(i t H)`, accepting only improvements and halving `t` after
//! a run of rejections. The objective is the smallest eigenvalue of the
//! partial transpose. A zero result is not a separability certificate.

use num_complex::Complex64;
use rand::Rng as _;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::bipartite::{default_tolerance, negativity_with_tolerance, partial_transpose_matrix, Bipartition};
use crate::circuits::{haar_with, Unitary};
use crate::error::{Error, Result};
use crate::linalg::{apply_gate, hermitian_eigen, min_eigenvalue, ComplexMatrix};
use crate::rng;
use crate::states::{dqc1_state, DensityMatrix};

/// Evaluations per restart before the budget is split further.
const EVALS_PER_RESTART: usize = 250;
const MAX_RESTARTS: usize = 16;
const INITIAL_STEP: f64 = 0.6;
const MIN_STEP: f64 = 1e-4;

#[derive(Debug, Clone, Serialize)]
pub struct SearchOutcome {
    pub unitary: Unitary,
    /// Negativity of `U rho U^dagger` at the default tolerance.
    pub negativity: f64,
    pub min_pt_eigenvalue: f64,
    pub evaluations: usize,
    pub restarts: usize,
}

impl SearchOutcome {
    pub fn found(&self) -> bool {
        self.negativity > 0.0
    }
}

/// Searches for a unitary that makes the input state `rho^alpha_n` entangled across `bp`.
pub fn search_entangling_unitary(
    n: usize,
    alpha: f64,
    bp: &Bipartition,
    budget: usize,
    seed: u64,
) -> Result<SearchOutcome> {
    let rho = dqc1_state(n, alpha)?;
    search_entangling_unitary_for(&rho, bp, budget, seed)
}

/// Same as [`search_entangling_unitary`] for an arbitrary starting state.
pub fn search_entangling_unitary_for(
    rho: &DensityMatrix,
    bp: &Bipartition,
    budget: usize,
    seed: u64,
) -> Result<SearchOutcome> {
    if budget == 0 {
        return Err(Error::InvalidArgument("search budget must be at least 1".into()));
    }
    if bp.total_qubits() != rho.qubits() {
        return Err(Error::InvalidBipartition(format!(
            "{}-qubit bipartition for a {}-qubit state",
            bp.total_qubits(),
            rho.qubits()
        )));
    }
    let restarts = budget.div_ceil(EVALS_PER_RESTART).clamp(1, MAX_RESTARTS.min(budget));
    let shares: Vec<usize> = (0..restarts)
        .map(|r| budget / restarts + usize::from(r < budget % restarts))
        .collect();
    let runs: Vec<Result<(ComplexMatrix, f64, usize)>> = shares
        .par_iter()
        .enumerate()
        .map(|(r, &evals)| refine(rho, bp, evals, &mut rng::stream(seed, r as u64)))
        .collect();
    let mut best: Option<(ComplexMatrix, f64)> = None;
    let mut evaluations = 0;
    for run in runs {
        let (u, value, used) = run?;
        evaluations += used;
        if best.as_ref().is_none_or(|(_, b)| value < *b) {
            best = Some((u, value));
        }
    }
    let (u, min_pt_eigenvalue) = best.expect("at least one restart");
    let unitary = Unitary::from_trusted(u);
    let evolved = rho.evolve(unitary.matrix())?;
    let negativity = negativity_with_tolerance(&evolved, bp, default_tolerance(rho.dim()))?;
    Ok(SearchOutcome {
        unitary,
        negativity,
        min_pt_eigenvalue,
        evaluations,
        restarts,
    })
}

fn objective(state: &ComplexMatrix, bp: &Bipartition) -> Result<f64> {
    min_eigenvalue(&partial_transpose_matrix(state, bp)?)
}

/// `g m g^dagger` for a gate on `targets`.
fn conjugate_local(m: &ComplexMatrix, g: &ComplexMatrix, targets: &[usize]) -> Result<ComplexMatrix> {
    let mut out = m.clone();
    apply_gate(&mut out, g, targets)?;
    let mut out = out.adjoint();
    apply_gate(&mut out, g, targets)?;
    Ok(out)
}

/// `exp(i t H)` for a GUE-distributed `H` on two qubits.
fn random_rotation(step: f64, rng: &mut rng::Rng) -> Result<ComplexMatrix> {
    let mut gauss = || -> f64 { rng.sample(StandardNormal) };
    let mut h = ComplexMatrix::zeros(4, 4);
    for r in 0..4 {
        h[(r, r)] = Complex64::new(gauss(), 0.0);
        for c in r + 1..4 {
            let z = Complex64::new(gauss(), gauss()) * std::f64::consts::FRAC_1_SQRT_2;
            h[(r, c)] = z;
            h[(c, r)] = z.conj();
        }
    }
    let eig = hermitian_eigen(&h)?;
    let v = &eig.vectors;
    let phases: Vec<Complex64> = eig
        .spectrum
        .values()
        .iter()
        .map(|&l| Complex64::from_polar(1.0, step * l))
        .collect();
    Ok(ComplexMatrix::from_fn(4, 4, |r, c| {
        (0..4).map(|k| v[(r, k)] * phases[k] * v[(c, k)].conj()).sum()
    }))
}

fn refine(
    rho: &DensityMatrix,
    bp: &Bipartition,
    evals: usize,
    rng: &mut rng::Rng,
) -> Result<(ComplexMatrix, f64, usize)> {
    let q = rho.qubits();
    let mut u = haar_with(q, rng).into_matrix();
    let mut state = rho.matrix().conjugate_by(&u);
    let mut value = objective(&state, bp)?;
    let mut used = 1;
    let mut step = INITIAL_STEP;
    let mut rejections = 0;
    let patience = 2 * q * (q - 1);
    while used < evals {
        let a = rng.random_range(0..q);
        let b = (a + rng.random_range(1..q)) % q;
        let g = random_rotation(step, rng)?;
        let candidate = conjugate_local(&state, &g, &[a, b])?;
        let cand_value = objective(&candidate, bp)?;
        used += 1;
        if cand_value < value {
            apply_gate(&mut u, &g, &[a, b])?;
            state = candidate;
            value = cand_value;
            rejections = 0;
        } else {
            rejections += 1;
            if rejections >= patience {
                step = (step / 2.0).max(MIN_STEP);
                rejections = 0;
            }
        }
    }
    Ok((u, value, used))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipartite::negativity;
    use crate::circuits::r_theta;
    use crate::states::tau_state;

    #[test]
    fn rejects_zero_budget() {
        let bp = Bipartition::from_qubits(2, &[0]).unwrap();
        assert!(search_entangling_unitary(1, 0.0, &bp, 0, 1).is_err());
    }

    #[test]
    fn finds_entanglement_below_one_half() {
        let bp = Bipartition::from_qubits(3, &[0]).unwrap();
        let out = search_entangling_unitary(2, 0.4, &bp, 1000, 7).unwrap();
        assert!(out.negativity > 0.0, "{out:?}");
        assert!(out.unitary.matrix().unitarity_defect() < 1e-9);
        let rho = dqc1_state(2, 0.4).unwrap().evolve(out.unitary.matrix()).unwrap();
        assert!((negativity(&rho, &bp).unwrap() - out.negativity).abs() < 1e-12);
        assert_eq!(out.evaluations, 1000);
    }

    #[test]
    fn matches_rotation_certificate_at_alpha_zero() {
        let bp = Bipartition::from_qubits(2, &[0]).unwrap();
        let rho = dqc1_state(1, 0.0).unwrap();
        let reference = negativity(&rho.evolve(r_theta(std::f64::consts::FRAC_PI_4).matrix()).unwrap(), &bp).unwrap();
        let out = search_entangling_unitary(1, 0.0, &bp, 1000, 3).unwrap();
        assert!(out.negativity >= reference - 1e-9, "{} < {reference}", out.negativity);
    }

    #[test]
    fn sound_above_threshold() {
        let bp = Bipartition::from_qubits(3, &[1]).unwrap();
        let out = search_entangling_unitary(2, 0.55, &bp, 300, 11).unwrap();
        assert_eq!(out.negativity, 0.0);
        assert!(out.min_pt_eigenvalue > -1e-9);
    }

    #[test]
    fn deterministic_given_seed() {
        let bp = Bipartition::from_qubits(3, &[0]).unwrap();
        let a = search_entangling_unitary_for(&tau_state(2).unwrap(), &bp, 300, 5).unwrap();
        let b = search_entangling_unitary_for(&tau_state(2).unwrap(), &bp, 300, 5).unwrap();
        assert_eq!(a.unitary, b.unitary);
        assert_eq!(a.negativity, b.negativity);
    }
}
