//! Zero-discord test for a measurement on party A.
//!
//! `rho` has zero discord for measurements on A iff
//! `rho = sum_l p_l |l><l| (x) rho_l` for some orthonormal basis `{|l>}` of A.
//! Writing `rho = sum_kl A_kl (x) |k><l|` over a product basis of B, this holds
//! iff the family `{A_kl}` is simultaneously unitarily diagonalizable, that
//! is, normal and pairwise commuting. The family is closed under adjoints
//! (`A_lk = A_kl^dagger`).
//!
//! When the reduced state `rho_A` has a simple spectrum its eigenbasis is the
//! only candidate, and the off-diagonal blocks are checked there directly.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bipartite::Bipartition;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, qubit_bit, ComplexMatrix, ZERO};
use crate::states::{depolarize, DensityMatrix};

/// Eigenvalue gap below which `rho_A` counts as degenerate.
pub const DEGENERACY_GAP: f64 = 1e-8;

/// `tol = 1e-8 * dim`
pub fn default_discord_tolerance(dim: usize) -> f64 {
    1e-8 * dim as f64
}

/// Register index of the local basis state `local` on `qubits` (first qubit most significant).
fn scatter(qubits: &[usize], local: usize, total: usize) -> usize {
    let k = qubits.len();
    qubits
        .iter()
        .enumerate()
        .filter(|(pos, _)| local & (1 << (k - 1 - pos)) != 0)
        .fold(0, |acc, (_, &q)| acc | qubit_bit(q, total))
}

/// `B_ij = (<i| (x) 1) rho (|j> (x) 1)` over the computational basis of party A.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockDecomposition {
    bipartition: Bipartition,
    party_a_dim: usize,
    party_b_dim: usize,
    blocks: Vec<ComplexMatrix>,
}

impl BlockDecomposition {
    pub fn party_a_dim(&self) -> usize {
        self.party_a_dim
    }

    pub fn party_b_dim(&self) -> usize {
        self.party_b_dim
    }

    pub fn block(&self, i: usize, j: usize) -> &ComplexMatrix {
        &self.blocks[i * self.party_a_dim + j]
    }

    /// `rho_A`, with entries `tr B_ij`.
    pub fn reduced_a(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.party_a_dim, self.party_a_dim, |i, j| self.block(i, j).trace())
    }

    /// The A-side family `A_kl` with `(A_kl)_ij = (B_ij)_kl`, indexed `k * d_B + l`.
    pub fn a_family(&self) -> Vec<ComplexMatrix> {
        let (da, db) = (self.party_a_dim, self.party_b_dim);
        (0..db * db)
            .map(|kl| ComplexMatrix::from_fn(da, da, |i, j| self.block(i, j)[(kl / db, kl % db)]))
            .collect()
    }

    /// `sum_ij |i><j| (x) B_ij` in the original register ordering.
    pub fn reassemble(&self) -> ComplexMatrix {
        let total = self.bipartition.total_qubits();
        let (a, b) = (self.bipartition.party_a(), self.bipartition.party_b());
        let dim = 1usize << total;
        let mut m = ComplexMatrix::zeros(dim, dim);
        for i in 0..self.party_a_dim {
            for j in 0..self.party_a_dim {
                let block = self.block(i, j);
                for k in 0..self.party_b_dim {
                    for l in 0..self.party_b_dim {
                        m[(scatter(&a, i, total) | scatter(&b, k, total), scatter(&a, j, total) | scatter(&b, l, total))] =
                            block[(k, l)];
                    }
                }
            }
        }
        m
    }
}

pub fn blocks(rho: &DensityMatrix, bp: &Bipartition) -> Result<BlockDecomposition> {
    let total = rho.qubits();
    if bp.total_qubits() != total {
        return Err(Error::InvalidBipartition(format!(
            "{}-qubit bipartition for a {total}-qubit state",
            bp.total_qubits()
        )));
    }
    let (a, b) = (bp.party_a(), bp.party_b());
    let (da, db) = (1usize << a.len(), 1usize << b.len());
    let a_idx: Vec<usize> = (0..da).map(|i| scatter(&a, i, total)).collect();
    let b_idx: Vec<usize> = (0..db).map(|k| scatter(&b, k, total)).collect();
    let m = rho.matrix();
    let blocks = (0..da * da)
        .map(|ij| {
            let (ri, ci) = (a_idx[ij / da], a_idx[ij % da]);
            ComplexMatrix::from_fn(db, db, |k, l| m[(ri | b_idx[k], ci | b_idx[l])])
        })
        .collect();
    Ok(BlockDecomposition {
        bipartition: *bp,
        party_a_dim: da,
        party_b_dim: db,
        blocks,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscordMethod {
    /// Off-diagonal blocks checked in the eigenbasis of a non-degenerate `rho_A`.
    Eigenbasis,
    /// Normality and pairwise commutation of the A-side family.
    Commuting,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscordVerdict {
    pub zero_discord: bool,
    pub method: DiscordMethod,
    /// Largest violating norm: off-diagonal block, commutator or normality defect.
    pub residual: f64,
    pub tolerance: f64,
}

/// Eigenbasis test: largest off-diagonal block entry of `rho` in the basis `vectors` of A.
fn eigenbasis_residual(dec: &BlockDecomposition, vectors: &ComplexMatrix) -> f64 {
    let da = dec.party_a_dim;
    let db = dec.party_b_dim;
    let mut worst: f64 = 0.0;
    for l in 0..da {
        for m in 0..da {
            if l == m {
                continue;
            }
            // C_lm = sum_ij conj(e_l[i]) e_m[j] B_ij
            let mut c = vec![ZERO; db * db];
            for i in 0..da {
                for j in 0..da {
                    let w = vectors[(i, l)].conj() * vectors[(j, m)];
                    if w == ZERO {
                        continue;
                    }
                    for (slot, z) in c.iter_mut().zip(dec.block(i, j).as_slice()) {
                        *slot += w * z;
                    }
                }
            }
            worst = c.iter().fold(worst, |acc, z| acc.max(z.norm()));
        }
    }
    worst
}

/// Members of `family` whose vectorizations span the same space, chosen greedily by residual norm.
fn spanning_subset(family: &[ComplexMatrix], tol: f64) -> Vec<&ComplexMatrix> {
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    let mut chosen = Vec::new();
    for m in family {
        let mut r: Vec<Complex64> = m.as_slice().to_vec();
        for q in &basis {
            let dot: Complex64 = q.iter().zip(&r).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in r.iter_mut().zip(q) {
                *x -= dot * y;
            }
        }
        let norm = r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > tol {
            basis.push(r.iter().map(|z| z / norm).collect());
            chosen.push(m);
        }
    }
    chosen
}

fn commuting_residual(dec: &BlockDecomposition, tol: f64) -> f64 {
    let family = dec.a_family();
    let members = spanning_subset(&family, tol * 1e-3);
    let mut worst: f64 = 0.0;
    for (i, x) in members.iter().enumerate() {
        let xd = x.adjoint();
        worst = worst.max((&(*x * &xd) - &(&xd * *x)).max_norm());
        for y in &members[i + 1..] {
            worst = worst.max((&(*x * *y) - &(*y * *x)).max_norm());
        }
    }
    worst
}

/// Decides whether `rho` has zero discord for a projective measurement on party A of `bp`.
pub fn is_zero_discord(rho: &DensityMatrix, bp: &Bipartition, tol: f64) -> Result<DiscordVerdict> {
    let dec = blocks(rho, bp)?;
    let eig = hermitian_eigen(&dec.reduced_a())?;
    let simple = eig.spectrum.values().windows(2).all(|w| w[0] - w[1] > DEGENERACY_GAP);
    let (method, residual) = if simple {
        (DiscordMethod::Eigenbasis, eigenbasis_residual(&dec, &eig.vectors))
    } else {
        (DiscordMethod::Commuting, commuting_residual(&dec, tol))
    };
    Ok(DiscordVerdict {
        zero_discord: residual <= tol,
        method,
        residual,
        tolerance: tol,
    })
}

/// The commuting-family test regardless of the spectrum of `rho_A`.
pub fn is_zero_discord_commuting(rho: &DensityMatrix, bp: &Bipartition, tol: f64) -> Result<DiscordVerdict> {
    let dec = blocks(rho, bp)?;
    let residual = commuting_residual(&dec, tol);
    Ok(DiscordVerdict {
        zero_discord: residual <= tol,
        method: DiscordMethod::Commuting,
        residual,
        tolerance: tol,
    })
}

/// Whether the zero-discord verdict is the same for every `depolarize(rho, alpha)`.
pub fn discord_depolarization_check(rho: &DensityMatrix, bp: &Bipartition, alphas: &[f64]) -> Result<bool> {
    if alphas.is_empty() {
        return Err(Error::InvalidArgument("no mixing parameters given".into()));
    }
    let tol = default_discord_tolerance(rho.dim());
    let mut verdicts = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        if !(0.0..1.0).contains(&alpha) {
            return Err(Error::InvalidMixingParameter(alpha));
        }
        verdicts.push(is_zero_discord(&depolarize(rho, alpha)?, bp, tol)?.zero_discord);
    }
    Ok(verdicts.windows(2).all(|w| w[0] == w[1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipartite::partial_trace;
    use crate::circuits::{cdqc1_unitary, haar_random_unitary};
    use crate::linalg::kron;
    use crate::states::dqc1_state;

    fn bell() -> DensityMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::pure(&[Complex64::new(h, 0.0), ZERO, ZERO, Complex64::new(h, 0.0)]).unwrap()
    }

    fn diag(v: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(v)
    }

    fn tol(rho: &DensityMatrix) -> f64 {
        default_discord_tolerance(rho.dim())
    }

    #[test]
    fn blocks_of_product_and_reassembly() {
        let ra = ComplexMatrix::from_rows(&[
            vec![Complex64::new(0.7, 0.0), Complex64::new(0.1, 0.2)],
            vec![Complex64::new(0.1, -0.2), Complex64::new(0.3, 0.0)],
        ])
        .unwrap();
        let rb = diag(&[0.6, 0.4]);
        let rho = DensityMatrix::new(kron(&ra, &rb).unwrap()).unwrap();
        let bp = Bipartition::from_qubits(2, &[0]).unwrap();
        let dec = blocks(&rho, &bp).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!(dec.block(i, j).max_abs_diff(&rb.scale(ra[(i, j)])) < 1e-15);
            }
        }
        assert_eq!(dec.reassemble(), *rho.matrix());

        // party A on the second qubit regroups indices
        let bp1 = Bipartition::from_qubits(2, &[1]).unwrap();
        let dec1 = blocks(&rho, &bp1).unwrap();
        assert!(dec1.reduced_a().max_abs_diff(&rb) < 1e-15);
        assert_eq!(dec1.reassemble(), *rho.matrix());
    }

    #[test]
    fn reassembly_of_scattered_party() {
        let u = haar_random_unitary(4, 9).unwrap();
        let rho = dqc1_state(3, 0.2).unwrap().evolve(u.matrix()).unwrap();
        let bp = Bipartition::from_qubits(4, &[1, 3]).unwrap();
        let dec = blocks(&rho, &bp).unwrap();
        assert_eq!(dec.reassemble(), *rho.matrix());
        let reduced = partial_trace(rho.matrix(), 4, bp.mask_a()).unwrap();
        assert!(dec.reduced_a().max_abs_diff(&reduced) < 1e-14);
    }

    #[test]
    fn classical_quantum_state() {
        let rho0 = diag(&[1.0, 0.0]);
        let plus = ComplexMatrix::from_fn(2, 2, |_, _| Complex64::new(0.5, 0.0));
        let m = &kron(&diag(&[0.5, 0.0]), &rho0).unwrap() + &kron(&diag(&[0.0, 0.5]), &plus).unwrap();
        let rho = DensityMatrix::new(m).unwrap();
        let bp = Bipartition::from_qubits(2, &[0]).unwrap();
        let v = is_zero_discord(&rho, &bp, tol(&rho)).unwrap();
        assert!(v.zero_discord);
        assert_eq!(v.method, DiscordMethod::Commuting);
        // measuring the other side disturbs the non-orthogonal conditional states
        assert!(!is_zero_discord(&rho, &bp.complement(), tol(&rho)).unwrap().zero_discord);
    }

    #[test]
    fn bell_is_discordant_both_ways() {
        let rho = bell();
        let bp = Bipartition::from_qubits(2, &[0]).unwrap();
        assert!(!is_zero_discord(&rho, &bp, tol(&rho)).unwrap().zero_discord);
        assert!(!is_zero_discord(&rho, &bp.complement(), tol(&rho)).unwrap().zero_discord);
    }

    #[test]
    fn cdqc1_asymmetry() {
        for seed in 0..5 {
            let v = haar_random_unitary(2, seed).unwrap();
            let u = cdqc1_unitary(&v).unwrap();
            let rho = dqc1_state(2, 0.0).unwrap().evolve(u.matrix()).unwrap();
            let clean = Bipartition::from_qubits(3, &[0]).unwrap();
            assert!(is_zero_discord(&rho, &clean.complement(), tol(&rho)).unwrap().zero_discord);
            assert!(!is_zero_discord(&rho, &clean, tol(&rho)).unwrap().zero_discord);
            assert!(discord_depolarization_check(&rho, &clean, &[0.0, 0.3, 0.9]).unwrap());
        }
    }

    #[test]
    fn maximally_mixed_is_classical() {
        let rho = DensityMatrix::maximally_mixed(3).unwrap();
        let bp = Bipartition::from_qubits(3, &[0, 2]).unwrap();
        assert!(is_zero_discord(&rho, &bp, tol(&rho)).unwrap().zero_discord);
        assert!(discord_depolarization_check(&rho, &bp, &[0.0, 0.5]).unwrap());
        assert!(discord_depolarization_check(&rho, &bp, &[1.0]).is_err());
        assert!(discord_depolarization_check(&rho, &bp, &[]).is_err());
    }
}
