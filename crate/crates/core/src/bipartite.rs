//! Qubit bipartitions, partial transposition and the PPT-based entanglement tests.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuits::{r_theta, Unitary};
use crate::error::{Error, Result};
use crate::linalg::{self, check_register, qubit_bit, trace_norm, ComplexMatrix};
use crate::states::{dqc1_state, DensityMatrix};

/// Split of a `total_qubits` register into party A and its complement.
///
/// `mask_a` has bit `i` set when qubit `i` belongs to party A. The orientation
/// is kept as given: discord tests measure party A. Use [`Bipartition::canonical`]
/// to identify a cut with its complement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bipartition {
    total_qubits: usize,
    mask_a: u64,
}

impl Bipartition {
    pub fn new(total_qubits: usize, mask_a: u64) -> Result<Self> {
        if !(2..=63).contains(&total_qubits) {
            return Err(Error::InvalidBipartition(format!(
                "need between 2 and 63 qubits, got {total_qubits}"
            )));
        }
        let full = (1u64 << total_qubits) - 1;
        if mask_a == 0 || mask_a & full == full || mask_a & !full != 0 {
            return Err(Error::InvalidBipartition(format!(
                "mask {mask_a:#b} is not a nontrivial subset of {total_qubits} qubits"
            )));
        }
        Ok(Self { total_qubits, mask_a })
    }

    pub fn from_qubits(total_qubits: usize, party_a: &[usize]) -> Result<Self> {
        let mut mask = 0u64;
        for &q in party_a {
            if q >= total_qubits || q >= 63 {
                return Err(Error::InvalidBipartition(format!(
                    "qubit {q} outside a {total_qubits}-qubit register"
                )));
            }
            if mask & (1 << q) != 0 {
                return Err(Error::InvalidBipartition(format!("qubit {q} listed twice")));
            }
            mask |= 1 << q;
        }
        Self::new(total_qubits, mask)
    }

    /// Parses a comma-separated list of party-A qubits, e.g. `0` or `0,2,3`.
    pub fn parse(total_qubits: usize, text: &str) -> Result<Self> {
        let qubits = text
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidBipartition(format!("bad qubit index '{t}' in '{text}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_qubits(total_qubits, &qubits)
    }

    pub fn total_qubits(&self) -> usize {
        self.total_qubits
    }

    pub fn mask_a(&self) -> u64 {
        self.mask_a
    }

    pub fn party_a(&self) -> Vec<usize> {
        (0..self.total_qubits).filter(|q| self.mask_a & (1 << q) != 0).collect()
    }

    pub fn party_b(&self) -> Vec<usize> {
        (0..self.total_qubits).filter(|q| self.mask_a & (1 << q) == 0).collect()
    }

    pub fn size_a(&self) -> usize {
        self.mask_a.count_ones() as usize
    }

    pub fn size_b(&self) -> usize {
        self.total_qubits - self.size_a()
    }

    /// Size of the smaller party.
    pub fn cut_size(&self) -> usize {
        self.size_a().min(self.size_b())
    }

    pub fn complement(&self) -> Self {
        let full = (1u64 << self.total_qubits) - 1;
        Self {
            total_qubits: self.total_qubits,
            mask_a: full & !self.mask_a,
        }
    }

    /// Representative with the smaller party A; on ties, the side holding qubit 0.
    pub fn canonical(&self) -> Self {
        let (a, b) = (self.size_a(), self.size_b());
        if a < b || (a == b && self.mask_a & 1 != 0) {
            *self
        } else {
            self.complement()
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical() == *self
    }

    /// Basis-index bits belonging to party A.
    pub fn index_mask(&self) -> usize {
        self.party_a()
            .into_iter()
            .fold(0, |acc, q| acc | qubit_bit(q, self.total_qubits))
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.party_a().iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// All `2^(q-1) - 1` nontrivial cuts of a `q`-qubit register, one canonical
/// representative each, ordered by cut size and then by party-A qubits.
pub fn enumerate_bipartitions(total_qubits: usize) -> Result<Vec<Bipartition>> {
    if !(2..=20).contains(&total_qubits) {
        return Err(Error::InvalidBipartition(format!(
            "enumeration supports 2..=20 qubits, got {total_qubits}"
        )));
    }
    let full = 1u64 << total_qubits;
    let mut cuts: Vec<Bipartition> = (1..full - 1)
        .map(|m| Bipartition { total_qubits, mask_a: m })
        .filter(Bipartition::is_canonical)
        .collect();
    cuts.sort_by_key(|b| (b.size_a(), b.party_a()));
    Ok(cuts)
}

/// Canonical cuts whose smaller party has exactly `k` qubits.
pub fn bipartitions_of_size(total_qubits: usize, k: usize) -> Result<Vec<Bipartition>> {
    Ok(enumerate_bipartitions(total_qubits)?
        .into_iter()
        .filter(|b| b.size_a() == k)
        .collect())
}

fn check_cut(dim: usize, bp: &Bipartition) -> Result<()> {
    if dim != 1usize << bp.total_qubits() {
        return Err(Error::DimensionMismatch(format!(
            "{}-qubit bipartition on a {dim}-dimensional operator",
            bp.total_qubits()
        )));
    }
    Ok(())
}

/// Transposes the party-A indices of a register operator.
pub fn partial_transpose_matrix(m: &ComplexMatrix, bp: &Bipartition) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("partial transpose of a non-square matrix".into()));
    }
    check_cut(m.rows(), bp)?;
    let a = bp.index_mask();
    let keep = !a;
    let dim = m.rows();
    let mut out = ComplexMatrix::zeros(dim, dim);
    for r in 0..dim {
        for col in 0..dim {
            let src_r = (r & keep) | (col & a);
            let src_c = (col & keep) | (r & a);
            out[(r, col)] = m[(src_r, src_c)];
        }
    }
    Ok(out)
}

pub fn partial_transpose(rho: &DensityMatrix, bp: &Bipartition) -> Result<ComplexMatrix> {
    partial_transpose_matrix(rho.matrix(), bp)
}

/// Default PPT tolerance: `1e-9` times the matrix dimension.
pub fn default_tolerance(dim: usize) -> f64 {
    1e-9 * dim as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PptVerdict {
    pub ppt: bool,
    /// Smallest eigenvalue of the partial transpose.
    pub min_eigenvalue: f64,
    pub tolerance: f64,
}

pub fn is_ppt(rho: &DensityMatrix, bp: &Bipartition, tol: f64) -> Result<PptVerdict> {
    let min = linalg::min_eigenvalue(&partial_transpose(rho, bp)?)?;
    Ok(PptVerdict {
        ppt: min >= -tol,
        min_eigenvalue: min,
        tolerance: tol,
    })
}

/// Sum of `|lambda|` over partial-transpose eigenvalues below `-tol`.
pub fn negativity_with_tolerance(rho: &DensityMatrix, bp: &Bipartition, tol: f64) -> Result<f64> {
    let spec = linalg::hermitian_spectrum(&partial_transpose(rho, bp)?)?;
    Ok(spec.values().iter().filter(|&&v| v < -tol).map(|v| -v).sum())
}

pub fn negativity(rho: &DensityMatrix, bp: &Bipartition) -> Result<f64> {
    negativity_with_tolerance(rho, bp, default_tolerance(rho.dim()))
}

/// Outcome of the two-vector partial-transpose witness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PtWitness {
    /// `<phi| PT |phi>`
    pub diagonal: Complex64,
    /// `<psi| PT |phi>`
    pub cross: Complex64,
    pub tolerance: f64,
    /// True when the diagonal term vanishes and the cross term does not,
    /// which rules out a positive partial transpose.
    pub fires: bool,
}

pub fn pt_witness(
    rho: &DensityMatrix,
    bp: &Bipartition,
    phi: &[Complex64],
    psi: &[Complex64],
    tol: f64,
) -> Result<PtWitness> {
    let dim = rho.dim();
    if phi.len() != dim || psi.len() != dim {
        return Err(Error::DimensionMismatch(format!(
            "witness vectors of length {} and {} for dimension {dim}",
            phi.len(),
            psi.len()
        )));
    }
    for v in [phi, psi] {
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > linalg::EPS_EIG {
            return Err(Error::InvalidArgument(format!("witness vector has norm^2 {norm}")));
        }
    }
    let pt = partial_transpose(rho, bp)?;
    let diagonal = pt.sandwich(phi, phi);
    let cross = pt.sandwich(psi, phi);
    Ok(PtWitness {
        diagonal,
        cross,
        tolerance: tol,
        fires: diagonal.norm() <= tol && cross.norm() > tol,
    })
}

pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(format!(
            "trace distance between dimensions {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    Ok(trace_norm(&(rho.matrix() - sigma.matrix())))
}

/// Reduced state on the qubits in `keep` (bit `i` = qubit `i`), tracing out the rest.
pub fn partial_trace(m: &ComplexMatrix, total_qubits: usize, keep: u64) -> Result<ComplexMatrix> {
    if !m.is_square() || m.rows() != 1usize << total_qubits {
        return Err(Error::DimensionMismatch("partial trace on a mismatched register".into()));
    }
    let kept: Vec<usize> = (0..total_qubits).filter(|q| keep & (1 << q) != 0).collect();
    let traced: Vec<usize> = (0..total_qubits).filter(|q| keep & (1 << q) == 0).collect();
    let scatter = |qs: &[usize], local: usize| -> usize {
        qs.iter()
            .enumerate()
            .filter(|(pos, _)| local & (1 << (qs.len() - 1 - pos)) != 0)
            .fold(0, |acc, (_, &q)| acc | qubit_bit(q, total_qubits))
    };
    let kept_idx: Vec<usize> = (0..1usize << kept.len()).map(|i| scatter(&kept, i)).collect();
    let traced_idx: Vec<usize> = (0..1usize << traced.len()).map(|i| scatter(&traced, i)).collect();
    let d = kept_idx.len();
    Ok(ComplexMatrix::from_fn(d, d, |r, col| {
        traced_idx
            .iter()
            .map(|&t| m[(kept_idx[r] | t, kept_idx[col] | t)])
            .sum()
    }))
}

/// Certificate that the pure-input state has entangled states arbitrarily
/// close in its unitary orbit.
#[derive(Debug, Clone, Serialize)]
pub struct OrbitDemo {
    pub unitary: Unitary,
    pub theta: f64,
    /// Qubit pair the rotation acts on: the clean qubit and the lowest qubit of the other party.
    pub targets: [usize; 2],
    pub negativity: f64,
    /// Trace norm `||U - 1||_1`.
    pub distance_from_identity: f64,
}

/// Trace norm of `R_theta - 1` embedded in a `total`-qubit register.
fn embedded_rotation_distance(theta: f64, total_qubits: usize) -> f64 {
    let diff = r_theta(theta).matrix() - &ComplexMatrix::identity(4);
    trace_norm(&diff) * (1usize << (total_qubits - 2)) as f64
}

/// Builds `U_eps` from a rotation across the cut with `||U_eps - 1||_1 = eps / 2`
/// and measures the negativity it creates from the `alpha = 0` input state.
pub fn boundary_orbit_demo(n: usize, bp: &Bipartition, epsilon: f64) -> Result<OrbitDemo> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::InvalidArgument(format!("epsilon must be positive, got {epsilon}")));
    }
    let total = n + 1;
    check_register(total)?;
    if bp.total_qubits() != total {
        return Err(Error::DimensionMismatch(format!(
            "{}-qubit bipartition for an {total}-qubit register",
            bp.total_qubits()
        )));
    }
    let a = bp.party_a()[0];
    let b = bp.party_b()[0];
    let targets = [a.min(b), a.max(b)];

    let target_norm = epsilon / 2.0;
    let (mut lo, mut hi) = (0.0, std::f64::consts::FRAC_PI_2);
    if embedded_rotation_distance(hi, total) <= target_norm {
        lo = hi;
    } else {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if embedded_rotation_distance(mid, total) <= target_norm {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= f64::EPSILON * hi {
                break;
            }
        }
    }
    let theta = lo;

    let unitary = r_theta(theta).embed(&targets, total)?;
    let distance_from_identity = trace_norm(&(unitary.matrix() - &ComplexMatrix::identity(unitary.dim())));
    let rho = dqc1_state(n, 0.0)?.evolve(unitary.matrix())?;
    let tolerance = default_tolerance(rho.dim());
    let negativity = negativity_with_tolerance(&rho, bp, tolerance)?;
    if negativity <= tolerance {
        return Err(Error::EpsilonBelowResolution { negativity, tolerance });
    }
    Ok(OrbitDemo {
        unitary,
        theta,
        targets,
        negativity,
        distance_from_identity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, kron, ONE, ZERO};
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn bell() -> DensityMatrix {
        let h = FRAC_1_SQRT_2;
        DensityMatrix::pure(&[c(h, 0.0), ZERO, ZERO, c(h, 0.0)]).unwrap()
    }

    fn basis(dim: usize, i: usize) -> Vec<Complex64> {
        let mut v = vec![ZERO; dim];
        v[i] = ONE;
        v
    }

    #[test]
    fn bipartition_counts() {
        assert_eq!(enumerate_bipartitions(2).unwrap().len(), 1);
        assert_eq!(enumerate_bipartitions(3).unwrap().len(), 3);
        assert_eq!(enumerate_bipartitions(5).unwrap().len(), 15);
        for q in 2..=8 {
            let cuts = enumerate_bipartitions(q).unwrap();
            assert_eq!(cuts.len(), (1 << (q - 1)) - 1);
            let mut seen = std::collections::HashSet::new();
            for cut in &cuts {
                assert!(cut.is_canonical());
                assert!(seen.insert(cut.canonical()));
                assert!(seen.insert(cut.complement()) || cut.complement() == *cut);
            }
        }
    }

    #[test]
    fn bipartition_parsing_and_canonical_form() {
        let bp = Bipartition::parse(4, "1, 2, 3").unwrap();
        assert_eq!(bp.party_a(), vec![1, 2, 3]);
        assert_eq!(bp.canonical().party_a(), vec![0]);
        assert_eq!(Bipartition::parse(4, "2,3").unwrap().canonical().party_a(), vec![0, 1]);
        assert_eq!(bp.to_string(), "1,2,3");
        assert!(Bipartition::parse(3, "0,1,2").is_err());
        assert!(Bipartition::parse(3, "").is_err());
        assert!(Bipartition::parse(3, "3").is_err());
        assert!(Bipartition::parse(3, "1,1").is_err());
    }

    #[test]
    fn partial_transpose_of_product_state() {
        let ra = ComplexMatrix::from_rows(&[vec![c(0.7, 0.0), c(0.1, 0.2)], vec![c(0.1, -0.2), c(0.3, 0.0)]]).unwrap();
        let rb = ComplexMatrix::from_rows(&[vec![c(0.4, 0.0), c(0.0, 0.3)], vec![c(0.0, -0.3), c(0.6, 0.0)]]).unwrap();
        let rho = DensityMatrix::new(kron(&ra, &rb).unwrap()).unwrap();
        let bp = Bipartition::parse(2, "0").unwrap();
        let pt = partial_transpose(&rho, &bp).unwrap();
        assert!(pt.max_abs_diff(&kron(&ra.transpose(), &rb).unwrap()) < 1e-15);
        let s1 = rho.spectrum().unwrap();
        let s2 = linalg::hermitian_spectrum(&pt).unwrap();
        for (a, b) in s1.values().iter().zip(s2.values()) {
            assert!((a - b).abs() < 1e-12);
        }
        let back = partial_transpose_matrix(&pt, &bp).unwrap();
        assert_eq!(&back, rho.matrix());
    }

    #[test]
    fn bell_state_is_npt() {
        let bp = Bipartition::parse(2, "0").unwrap();
        let v = is_ppt(&bell(), &bp, 1e-9).unwrap();
        assert!(!v.ppt);
        assert!((v.min_eigenvalue + 0.5).abs() < 1e-12);
        assert!((negativity(&bell(), &bp).unwrap() - 0.5).abs() < 1e-12);
        let w = pt_witness(&bell(), &bp, &basis(4, 0b01), &basis(4, 0b10), 1e-9).unwrap();
        assert!(w.fires);
    }

    #[test]
    fn diagonal_states_are_ppt() {
        for n in 1..=3 {
            for alpha in [0.0, 0.4, 1.0] {
                let rho = dqc1_state(n, alpha).unwrap();
                for bp in enumerate_bipartitions(n + 1).unwrap() {
                    assert!(is_ppt(&rho, &bp, default_tolerance(rho.dim())).unwrap().ppt);
                    assert_eq!(negativity(&rho, &bp).unwrap(), 0.0);
                }
                let bp = Bipartition::parse(n + 1, "0").unwrap();
                let zero = basis(rho.dim(), 0);
                assert!(!pt_witness(&rho, &bp, &zero, &zero, 1e-9).unwrap().fires);
            }
        }
    }

    #[test]
    fn rotated_pure_input_witness() {
        let bp = Bipartition::parse(2, "0").unwrap();
        for theta in [0.2, PI / 4.0, 1.3] {
            let rho = dqc1_state(1, 0.0).unwrap().evolve(r_theta(theta).matrix()).unwrap();
            let w = pt_witness(&rho, &bp, &basis(4, 0b11), &basis(4, 0b00), 1e-9).unwrap();
            assert!(w.fires);
            assert!((w.cross.re - 0.5 * theta.cos() * theta.sin()).abs() < 1e-12);
            assert!(!is_ppt(&rho, &bp, 1e-9).unwrap().ppt);
        }
    }

    #[test]
    fn trace_distance_examples() {
        let rho = bell();
        assert_eq!(trace_distance(&rho, &rho).unwrap(), 0.0);
        let mixed = DensityMatrix::maximally_mixed(3).unwrap();
        assert!(trace_distance(&rho, &mixed).is_err());
    }

    #[test]
    fn partial_trace_of_product() {
        let ra = ComplexMatrix::from_real_diagonal(&[0.9, 0.1]);
        let rb = ComplexMatrix::from_real_diagonal(&[0.25, 0.75]);
        let rc = ComplexMatrix::from_real_diagonal(&[0.5, 0.5]);
        let m = kron(&kron(&ra, &rb).unwrap(), &rc).unwrap();
        assert!(partial_trace(&m, 3, 0b010).unwrap().max_abs_diff(&rb) < 1e-15);
        let ac = partial_trace(&m, 3, 0b101).unwrap();
        assert!(ac.max_abs_diff(&kron(&ra, &rc).unwrap()) < 1e-15);
    }

    #[test]
    fn orbit_demo_small_cases() {
        let bp = Bipartition::parse(2, "0").unwrap();
        let demo = boundary_orbit_demo(1, &bp, 0.5).unwrap();
        assert!(demo.negativity > 0.0);
        assert!(demo.distance_from_identity < 0.5);
        assert!((demo.distance_from_identity - 0.25).abs() < 1e-9);

        let bp = Bipartition::parse(4, "0,1").unwrap();
        let demo = boundary_orbit_demo(3, &bp, 0.2).unwrap();
        assert_eq!(demo.targets, [0, 2]);
        assert!(demo.negativity > 1e-6);
        assert!(demo.distance_from_identity < 0.2);

        // clean qubit on party B
        let bp = Bipartition::parse(3, "2").unwrap();
        let demo = boundary_orbit_demo(2, &bp, 0.1).unwrap();
        assert_eq!(demo.targets, [0, 2]);
        assert!(demo.negativity > 0.0);
    }

    #[test]
    fn orbit_demo_negativity_vanishes_with_epsilon() {
        let bp = Bipartition::parse(3, "0").unwrap();
        let mut last = f64::INFINITY;
        for eps in [0.8, 0.4, 0.2, 0.1, 0.05] {
            let d = boundary_orbit_demo(2, &bp, eps).unwrap();
            assert!(d.negativity < last);
            last = d.negativity;
        }
        assert!(matches!(
            boundary_orbit_demo(2, &bp, 1e-7),
            Err(Error::EpsilonBelowResolution { .. })
        ));
        assert!(boundary_orbit_demo(2, &bp, 0.0).is_err());
    }
}
