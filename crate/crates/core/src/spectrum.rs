//! Separability and PPT conditions that depend only on the eigenvalues.
//!
//! * [`johnston_sfs`]: the one-qubit-versus-rest condition
//!   `lambda_1 <= lambda_(d-1) + 2 sqrt(lambda_(d-2) lambda_d)`.
//! * [`hildebrand_ppt_from_spectrum`]: PPT for every state with a given
//!   spectrum, decided by positivity of `Lambda + Lambda^T` over all realizable
//!   pairs of orderings of index pairs.
//! * [`degenerate_ppt_condition`]: the closed form of the above when the
//!   extreme eigenvalues are degenerate enough that every `Lambda` coincides.
//!
//! Eigenvalue ranks are 1-based in the formulas and docs (`lambda_1` is the
//! largest) and 0-based in code.

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::DMatrix;
use rand::Rng as _;
use rand_distr::{Exp1, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{SortedSpectrum, EPS_EIG};
use crate::rng;

/// Absolute slack on closed-form spectrum margins.
pub const SPECTRUM_SLACK: f64 = 1e-12;
/// Per-dimension slack on the smallest eigenvalue of `Lambda + Lambda^T`.
pub const LAMBDA_PSD_TOL: f64 = 1e-10;
/// Largest party dimension supported by ordering enumeration.
pub const MAX_ORDERING_DIM: usize = 16;
/// Root seed of the cached ordering sets.
pub const DEFAULT_ORDERING_SEED: u64 = 0x5eed_04d3;

/// Verdict of a spectrum criterion with its signed margin (`holds` iff `margin >= -slack`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumVerdict {
    pub holds: bool,
    pub margin: f64,
}

impl SpectrumVerdict {
    fn from_margin(margin: f64, slack: f64) -> Self {
        Self {
            holds: margin >= -slack,
            margin,
        }
    }
}

fn check_nonnegative(spectrum: &SortedSpectrum) -> Result<()> {
    if spectrum.min() < -EPS_EIG {
        return Err(Error::InvalidSpectrum(format!(
            "negative eigenvalue {}",
            spectrum.min()
        )));
    }
    Ok(())
}

/// Separability from spectrum across any one-qubit cut of a `d = 2^(n+1)` spectrum.
/// Margin is `lambda_(d-1) + 2 sqrt(lambda_(d-2) lambda_d) - lambda_1`.
pub fn johnston_sfs(spectrum: &SortedSpectrum) -> Result<SpectrumVerdict> {
    let d = spectrum.len();
    if d < 4 || !d.is_power_of_two() {
        return Err(Error::InvalidSpectrum(format!(
            "one-qubit cut needs a power-of-two dimension >= 4, got {d}"
        )));
    }
    check_nonnegative(spectrum)?;
    let v = spectrum.values();
    let product = (v[d - 3].max(0.0) * v[d - 1].max(0.0)).sqrt();
    let margin = v[d - 2] + 2.0 * product - v[0];
    Ok(SpectrumVerdict::from_margin(margin, SPECTRUM_SLACK))
}

/// `p (p + 1) / 2`
pub fn plus_count(p: usize) -> usize {
    p * (p + 1) / 2
}

/// `p (p - 1) / 2`
pub fn minus_count(p: usize) -> usize {
    p * (p - 1) / 2
}

/// Row-major slot of the pair `(i, j)`, `i <= j`, among all such pairs.
fn plus_slot(p: usize, i: usize, j: usize) -> usize {
    debug_assert!(i <= j && j < p);
    i * p - i * (i + 1) / 2 + j
}

/// Row-major slot of the pair `(i, j)`, `i < j`, among strict pairs.
fn minus_slot(p: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < p);
    i * p - i * (i + 1) / 2 + (j - i - 1)
}

fn plus_pairs(p: usize) -> Vec<(usize, usize)> {
    (0..p).flat_map(|i| (i..p).map(move |j| (i, j))).collect()
}

/// Pair of linear orderings `(sigma_plus, sigma_minus)` of index pairs of `[p]`.
///
/// Ranks are 1-based: `sigma_plus(i, j) = 1` marks the largest product.
/// Indices passed to accessors are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrderingPair {
    p: usize,
    plus: Vec<u32>,
    minus: Vec<u32>,
}

impl OrderingPair {
    /// Builds `sigma_plus` from pairs listed first-to-last and derives the
    /// consistent `sigma_minus`.
    pub fn from_plus_sequence(p: usize, sequence: &[(usize, usize)]) -> Result<Self> {
        if p < 2 {
            return Err(Error::InvalidArgument(format!("ordering needs p >= 2, got {p}")));
        }
        if sequence.len() != plus_count(p) {
            return Err(Error::InvalidArgument(format!(
                "sigma_plus lists {} pairs, expected {}",
                sequence.len(),
                plus_count(p)
            )));
        }
        let mut plus = vec![0u32; plus_count(p)];
        for (rank, &(i, j)) in sequence.iter().enumerate() {
            if i > j || j >= p {
                return Err(Error::InvalidArgument(format!("({i}, {j}) is not a pair of [{p}]")));
            }
            let slot = plus_slot(p, i, j);
            if plus[slot] != 0 {
                return Err(Error::InvalidArgument(format!("pair ({i}, {j}) listed twice")));
            }
            plus[slot] = rank as u32 + 1;
        }
        let minus = consistent_sigma_minus(p, &plus);
        Ok(Self { p, plus, minus })
    }

    /// Ordering of the products `x_i x_j` from largest to smallest. Equal
    /// products keep row-major pair order.
    pub fn from_vector(x: &[f64]) -> Result<Self> {
        let p = x.len();
        if p < 2 {
            return Err(Error::InvalidArgument("ordering needs at least two entries".into()));
        }
        let mut pairs = plus_pairs(p);
        pairs.sort_by(|&(a, b), &(c, d)| (x[c] * x[d]).total_cmp(&(x[a] * x[b])));
        Self::from_plus_sequence(p, &pairs)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// `sigma_plus(i, j)` for `i <= j`.
    pub fn sigma_plus(&self, i: usize, j: usize) -> u32 {
        self.plus[plus_slot(self.p, i, j)]
    }

    /// `sigma_minus(i, j)` for `i < j`.
    pub fn sigma_minus(&self, i: usize, j: usize) -> u32 {
        self.minus[minus_slot(self.p, i, j)]
    }

    /// Whether `sigma_minus` preserves the relative order `sigma_plus` gives to strict pairs.
    pub fn is_consistent(&self) -> bool {
        let strict: Vec<(usize, usize)> = plus_pairs(self.p).into_iter().filter(|(i, j)| i < j).collect();
        strict.iter().all(|&(a, b)| {
            strict.iter().all(|&(c, d)| {
                self.sigma_plus(a, b) >= self.sigma_plus(c, d) || self.sigma_minus(a, b) < self.sigma_minus(c, d)
            })
        })
    }

    /// Whether the ordering lists the products `x_i x_j` non-increasingly.
    pub fn is_compatible_with(&self, x: &[f64]) -> bool {
        if x.len() != self.p {
            return false;
        }
        let mut by_rank = vec![(0, 0); plus_count(self.p)];
        for (i, j) in plus_pairs(self.p) {
            by_rank[self.sigma_plus(i, j) as usize - 1] = (i, j);
        }
        by_rank.windows(2).all(|w| x[w[0].0] * x[w[0].1] >= x[w[1].0] * x[w[1].1])
    }
}

/// The unique `sigma_minus` consistent with `sigma_plus` (given as ranks in
/// row-major pair order): strict pairs keep their `sigma_plus` order and are
/// renumbered `1..=p(p-1)/2`.
pub fn consistent_sigma_minus(p: usize, sigma_plus: &[u32]) -> Vec<u32> {
    let mut strict: Vec<(u32, usize)> = Vec::with_capacity(minus_count(p));
    for i in 0..p {
        for j in i + 1..p {
            strict.push((sigma_plus[plus_slot(p, i, j)], minus_slot(p, i, j)));
        }
    }
    strict.sort_unstable();
    let mut minus = vec![0u32; minus_count(p)];
    for (rank, &(_, slot)) in strict.iter().enumerate() {
        minus[slot] = rank as u32 + 1;
    }
    minus
}

/// Deduplicated orderings realized by sampled strictly decreasing positive vectors.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrderingSet {
    pub p: usize,
    pub orderings: Vec<OrderingPair>,
    pub samples: usize,
    /// No new ordering appeared in the final 10% of samples.
    pub saturated: bool,
}

impl OrderingSet {
    pub fn len(&self) -> usize {
        self.orderings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orderings.is_empty()
    }
}

/// Default sample counts per party dimension.
pub fn default_ordering_samples(p: usize) -> usize {
    match p {
        0..=3 => 2_000,
        4 => 10_000,
        5..=8 => 200_000,
        _ => 20_000,
    }
}

/// Strictly decreasing positive vector with pairwise-distinct products.
///
/// Even draws are sorted absolute Gaussians; odd draws use exponential
/// log-gaps, which reach orderings with widely spread entries.
fn sample_decreasing(p: usize, draw: usize, rng: &mut rng::Rng) -> Vec<f64> {
    loop {
        let mut x: Vec<f64> = if draw.is_multiple_of(2) {
            let mut v: Vec<f64> = (0..p)
                .map(|_| {
                    let g: f64 = rng.sample(StandardNormal);
                    g.abs()
                })
                .collect();
            v.sort_by(|a, b| b.total_cmp(a));
            v
        } else {
            let spread = 4.0 * rng.random::<f64>() + 0.05;
            let mut y = 0.0_f64;
            (0..p)
                .map(|_| {
                    let v = (-y).exp();
                    let gap: f64 = rng.sample(Exp1);
                    y += spread * gap / p as f64;
                    v
                })
                .collect()
        };
        for v in &mut x {
            *v *= 1.0 + 1e-9 * (rng.random::<f64>() - 0.5);
        }
        let strictly = x.windows(2).all(|w| w[0] > w[1]) && x[p - 1] > 0.0;
        if !strictly {
            continue;
        }
        let mut products: Vec<f64> = plus_pairs(p).iter().map(|&(i, j)| x[i] * x[j]).collect();
        products.sort_by(|a, b| b.total_cmp(a));
        let distinct = products.windows(2).all(|w| w[0] - w[1] > 1e-12 * w[0]);
        if distinct {
            return x;
        }
    }
}

/// Samples `samples` vectors and collects the distinct orderings they realize.
pub fn realizable_orderings(p: usize, samples: usize, seed: u64) -> Result<OrderingSet> {
    if p > MAX_ORDERING_DIM {
        return Err(Error::PartyDimensionTooLarge(p));
    }
    if p < 2 {
        return Err(Error::InvalidArgument(format!("ordering needs p >= 2, got {p}")));
    }
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let mut rng = rng::stream(seed, p as u64);
    let mut seen: HashSet<OrderingPair> = HashSet::new();
    let mut orderings = Vec::new();
    let tail_start = samples - samples / 10;
    let mut new_in_tail = false;
    for draw in 0..samples {
        let x = sample_decreasing(p, draw, &mut rng);
        let ordering = OrderingPair::from_vector(&x)?;
        if seen.insert(ordering.clone()) {
            orderings.push(ordering);
            if draw >= tail_start {
                new_in_tail = true;
            }
        }
    }
    Ok(OrderingSet {
        p,
        orderings,
        samples,
        saturated: !new_in_tail,
    })
}

/// Cached ordering set for `p` with the default sample count and seed.
pub fn default_orderings(p: usize) -> Result<Arc<OrderingSet>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<OrderingSet>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(set) = cache.lock().expect("ordering cache").get(&p) {
        return Ok(Arc::clone(set));
    }
    let set = Arc::new(realizable_orderings(p, default_ordering_samples(p), DEFAULT_ORDERING_SEED)?);
    let mut guard = cache.lock().expect("ordering cache");
    Ok(Arc::clone(guard.entry(p).or_insert(set)))
}

/// The `p x p` matrix with `lambda_(d + 1 - sigma_plus(k, l))` on and above the
/// diagonal and `-lambda_(sigma_minus(l, k))` below it.
pub fn lambda_matrix(spectrum: &SortedSpectrum, ordering: &OrderingPair) -> Result<DMatrix<f64>> {
    let p = ordering.p();
    let d = spectrum.len();
    if d < plus_count(p) {
        return Err(Error::SpectrumTooShort {
            needed: plus_count(p),
            len: d,
        });
    }
    let v = spectrum.values();
    Ok(DMatrix::from_fn(p, p, |k, l| {
        if k <= l {
            v[d - ordering.sigma_plus(k, l) as usize]
        } else {
            -v[ordering.sigma_minus(l, k) as usize - 1]
        }
    }))
}

/// Smallest eigenvalue of `Lambda + Lambda^T`.
pub fn lambda_margin(lambda: &DMatrix<f64>) -> f64 {
    let sym = lambda + lambda.transpose();
    sym.symmetric_eigenvalues().min()
}

/// Result of the ordering-based PPT-from-spectrum test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HildebrandVerdict {
    pub holds: bool,
    /// Smallest eigenvalue of `Lambda + Lambda^T` over all orderings.
    pub margin: f64,
    pub orderings: usize,
    /// Distinct `Lambda` matrices actually tested.
    pub distinct_lambdas: usize,
    pub saturated: bool,
}

/// PPT from spectrum for party dimension `orderings.p` against every ordering in `orderings`.
pub fn hildebrand_with_orderings(spectrum: &SortedSpectrum, orderings: &OrderingSet) -> Result<HildebrandVerdict> {
    check_nonnegative(spectrum)?;
    if orderings.is_empty() {
        return Err(Error::InvalidArgument("empty ordering set".into()));
    }
    let p = orderings.p;
    let d = spectrum.len();
    if d < p * p {
        return Err(Error::SpectrumTooShort { needed: p * p, len: d });
    }
    let v = spectrum.values();
    // Lambda reads the top p(p-1)/2 and bottom p(p+1)/2 eigenvalues only.
    // When both ranges are flat every ordering gives the same matrix.
    let flat = |s: &[f64]| s.iter().all(|&x| x == s[0]);
    let lambdas: Vec<DMatrix<f64>> = if flat(&v[..minus_count(p)]) && flat(&v[d - plus_count(p)..]) {
        vec![lambda_matrix(spectrum, &orderings.orderings[0])?]
    } else {
        // Otherwise deduplicate by which group of equal eigenvalues each entry reads.
        let mut class = vec![0u16; d];
        for r in 1..d {
            class[r] = class[r - 1] + u16::from(v[r] != v[r - 1]);
        }
        let mut distinct: HashSet<Vec<u16>> = HashSet::new();
        let mut out = Vec::new();
        for ordering in &orderings.orderings {
            let key: Vec<u16> = ordering
                .plus
                .iter()
                .map(|&s| class[d - s as usize])
                .chain(ordering.minus.iter().map(|&s| class[s as usize - 1]))
                .collect();
            if distinct.insert(key) {
                out.push(lambda_matrix(spectrum, ordering)?);
            }
        }
        out
    };
    let margin = lambdas
        .par_iter()
        .map(lambda_margin)
        .reduce(|| f64::INFINITY, f64::min);
    Ok(HildebrandVerdict {
        holds: margin >= -LAMBDA_PSD_TOL * p as f64,
        margin,
        orderings: orderings.len(),
        distinct_lambdas: lambdas.len(),
        saturated: orderings.saturated,
    })
}

/// PPT from spectrum for the `{k; total - k}` qubit cuts.
///
/// A true verdict holds for every state with this spectrum on party
/// dimensions `(2^k, 2^(total-k))`, whatever the unitary and whichever
/// qubits form the parties.
pub fn hildebrand_ppt_from_spectrum(spectrum: &SortedSpectrum, k: usize, total: usize) -> Result<HildebrandVerdict> {
    if k == 0 || 2 * k > total {
        return Err(Error::InvalidArgument(format!(
            "cut size k = {k} must satisfy 1 <= k <= total/2 for {total} qubits"
        )));
    }
    let p = 1usize << k;
    if p > MAX_ORDERING_DIM {
        return Err(Error::PartyDimensionTooLarge(p));
    }
    if spectrum.len() != 1usize << total {
        return Err(Error::InvalidSpectrum(format!(
            "{} eigenvalues for a {total}-qubit register",
            spectrum.len()
        )));
    }
    hildebrand_with_orderings(spectrum, &*default_orderings(p)?)
}

/// Largest and smallest eigenvalue of a spectrum whose extremes are highly degenerate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegeneratePair {
    lambda_plus: f64,
    lambda_minus: f64,
}

impl DegeneratePair {
    pub fn new(lambda_plus: f64, lambda_minus: f64) -> Result<Self> {
        if !(lambda_plus >= lambda_minus && lambda_minus >= 0.0) || !lambda_plus.is_finite() {
            return Err(Error::InvalidSpectrum(format!(
                "need lambda_plus >= lambda_minus >= 0, got ({lambda_plus}, {lambda_minus})"
            )));
        }
        Ok(Self {
            lambda_plus,
            lambda_minus,
        })
    }

    pub fn lambda_plus(&self) -> f64 {
        self.lambda_plus
    }

    pub fn lambda_minus(&self) -> f64 {
        self.lambda_minus
    }

    /// Extracts the pair when `spectrum` (of `2^(m + n)` values, `m < n`) has its
    /// top `p(p-1)/2` and bottom `p(p+1)/2` eigenvalues equal, `p = 2^m`.
    /// Only then does [`degenerate_ppt_condition`] decide PPT from spectrum.
    pub fn from_spectrum(spectrum: &SortedSpectrum, m: usize) -> Option<Self> {
        let d = spectrum.len();
        if m == 0 || m >= 32 || !d.is_power_of_two() {
            return None;
        }
        let total = d.trailing_zeros() as usize;
        if 2 * m >= total {
            return None;
        }
        let p = 1usize << m;
        let v = spectrum.values();
        let top = &v[..minus_count(p)];
        let bottom = &v[d - plus_count(p)..];
        let scale = v[0].abs().max(f64::MIN_POSITIVE);
        let flat = |s: &[f64]| s.iter().all(|x| (x - s[0]).abs() <= 1e-12 * scale);
        if !flat(top) || !flat(bottom) {
            return None;
        }
        Self::new(v[0], v[d - 1]).ok()
    }
}

/// `(lambda_+ + lambda_-) - 2^m (lambda_+ - lambda_-) >= 0`, valid for spectra
/// in the degenerate class of [`DegeneratePair::from_spectrum`].
pub fn degenerate_ppt_condition(pair: &DegeneratePair, m: usize) -> Result<SpectrumVerdict> {
    if m == 0 || m > 60 {
        return Err(Error::InvalidArgument(format!("party size m = {m} out of range")));
    }
    let p = (m as f64).exp2();
    let margin = (pair.lambda_plus + pair.lambda_minus) - p * (pair.lambda_plus - pair.lambda_minus);
    Ok(SpectrumVerdict::from_margin(margin, SPECTRUM_SLACK))
}

/// Smallest mixing parameter for which the input state is PPT from spectrum
/// across `{k; n + 1 - k}` cuts: `1 - 2^-k`.
pub fn dqc1_alpha_threshold(k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidArgument("cut size must be at least 1".into()));
    }
    Ok(1.0 - (-(k as f64)).exp2())
}

/// Necessary and sufficient bounds on `alpha` for PPT from spectrum across
/// every cut of `n + 1` qubits: `(1 - 2^-floor(n/2), 1 - 2^-floor((n+1)/2))`.
pub fn dqc1_all_cuts_bounds(n: usize) -> Result<(f64, f64)> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("bounds need n >= 2, got {n}")));
    }
    Ok((dqc1_alpha_threshold(n / 2)?, dqc1_alpha_threshold((n + 1) / 2)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::dqc1_spectrum;

    fn spec(v: &[f64]) -> SortedSpectrum {
        SortedSpectrum::new(v.to_vec()).unwrap()
    }

    #[test]
    fn johnston_uniform_and_tau() {
        assert!(johnston_sfs(&spec(&[0.25; 4])).unwrap().holds);
        let tau = spec(&[1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0, 0.0, 0.0]);
        let v = johnston_sfs(&tau).unwrap();
        assert!(!v.holds);
        assert!((v.margin + 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn johnston_on_input_spectrum_flips_at_one_half_from_three_qubits() {
        for n in 2..=6 {
            for i in 0..=100 {
                let alpha = i as f64 / 100.0;
                let v = johnston_sfs(&dqc1_spectrum(n, alpha).unwrap()).unwrap();
                assert_eq!(v.holds, alpha >= 0.5, "n={n} alpha={alpha} margin={}", v.margin);
            }
        }
    }

    #[test]
    fn johnston_two_qubit_input_flips_below_one_half() {
        // lambda_(d-2) is the top eigenvalue when d = 4, so the threshold solves
        // 2 - 2a = 2 sqrt((2 - a) a), i.e. a = 1 - 1/sqrt(2).
        let threshold = 1.0 - std::f64::consts::FRAC_1_SQRT_2;
        for i in 0..=100 {
            let alpha = i as f64 / 100.0;
            let v = johnston_sfs(&dqc1_spectrum(1, alpha).unwrap()).unwrap();
            assert_eq!(v.holds, alpha >= threshold, "alpha={alpha}");
        }
    }

    #[test]
    fn johnston_rejects_bad_input() {
        assert!(johnston_sfs(&spec(&[0.5, 0.5])).is_err());
        assert!(johnston_sfs(&spec(&[0.4, 0.3, 0.2, 0.1, 0.0, 0.0])).is_err());
        assert!(johnston_sfs(&spec(&[0.6, 0.3, 0.2, -0.1])).is_err());
    }

    #[test]
    fn slots_are_bijective() {
        for p in 2..=6 {
            let plus: Vec<usize> = plus_pairs(p).iter().map(|&(i, j)| plus_slot(p, i, j)).collect();
            assert_eq!(plus, (0..plus_count(p)).collect::<Vec<_>>());
            let minus: Vec<usize> = plus_pairs(p)
                .iter()
                .filter(|(i, j)| i < j)
                .map(|&(i, j)| minus_slot(p, i, j))
                .collect();
            assert_eq!(minus, (0..minus_count(p)).collect::<Vec<_>>());
        }
    }

    #[test]
    fn sigma_minus_examples() {
        let o = OrderingPair::from_plus_sequence(2, &[(0, 0), (0, 1), (1, 1)]).unwrap();
        assert_eq!(o.sigma_minus(0, 1), 1);
        assert!(o.is_consistent());

        // x = (4, 2, 1): 16 > 8 > 4 = 4 > 2 > 1, tie resolved toward (1,3)
        let o = OrderingPair::from_vector(&[4.0, 2.0, 1.0]).unwrap();
        assert_eq!(o.sigma_plus(0, 2), 3);
        assert_eq!(o.sigma_plus(1, 1), 4);
        assert_eq!((o.sigma_minus(0, 1), o.sigma_minus(0, 2), o.sigma_minus(1, 2)), (1, 2, 3));
        assert!(o.is_consistent());
        assert!(o.is_compatible_with(&[4.0, 2.0, 1.0]));
        assert_eq!(consistent_sigma_minus(3, &o.plus), o.minus);
    }

    #[test]
    fn ordering_validation() {
        assert!(OrderingPair::from_plus_sequence(2, &[(0, 0), (0, 1)]).is_err());
        assert!(OrderingPair::from_plus_sequence(2, &[(0, 0), (0, 0), (1, 1)]).is_err());
        assert!(OrderingPair::from_plus_sequence(2, &[(0, 0), (1, 0), (1, 1)]).is_err());
    }

    #[test]
    fn realizable_orderings_small_p() {
        let two = realizable_orderings(2, 500, 1).unwrap();
        assert_eq!(two.len(), 1);
        assert!(two.saturated);
        let three = realizable_orderings(3, 2_000, 1).unwrap();
        assert_eq!(three.len(), 2);
        let a = OrderingPair::from_vector(&[4.0, 3.0, 1.0]).unwrap();
        let b = OrderingPair::from_vector(&[4.0, 1.5, 1.0]).unwrap();
        assert_ne!(a, b);
        assert!(three.orderings.contains(&a) && three.orderings.contains(&b));
        for o in &three.orderings {
            assert!(o.is_consistent());
        }
        assert_eq!(realizable_orderings(17, 10, 1).unwrap_err(), Error::PartyDimensionTooLarge(17));
    }

    #[test]
    fn ordering_sampling_saturates_at_four() {
        for seed in 0..10 {
            let base = realizable_orderings(4, 10_000, seed).unwrap();
            let doubled = realizable_orderings(4, 20_000, seed).unwrap();
            assert!(base.saturated);
            assert_eq!(base.len(), doubled.len(), "seed {seed}");
        }
    }

    #[test]
    fn lambda_matrix_two_by_two() {
        let s = spec(&[0.4, 0.3, 0.2, 0.06, 0.04]);
        let o = OrderingPair::from_plus_sequence(2, &[(0, 0), (0, 1), (1, 1)]).unwrap();
        let l = lambda_matrix(&s, &o).unwrap();
        assert_eq!(l[(0, 0)], 0.04);
        assert_eq!(l[(0, 1)], 0.06);
        assert_eq!(l[(1, 0)], -0.4);
        assert_eq!(l[(1, 1)], 0.2);
        assert!(matches!(lambda_matrix(&spec(&[0.5, 0.5]), &o), Err(Error::SpectrumTooShort { .. })));
    }

    #[test]
    fn lambda_matrix_uniform_and_degenerate() {
        let d = 32;
        let uniform = spec(&vec![1.0 / d as f64; d]);
        let set = realizable_orderings(4, 2_000, 3).unwrap();
        for o in &set.orderings {
            let l = lambda_matrix(&uniform, o).unwrap();
            let sym = &l + l.transpose();
            for k in 0..4 {
                for j in 0..4 {
                    let expected = if k == j { 2.0 / d as f64 } else { 0.0 };
                    assert!((sym[(k, j)] - expected).abs() < 1e-15);
                }
            }
        }
        let s = dqc1_spectrum(4, 0.64).unwrap();
        let (hi, lo) = (s.max(), s.min());
        for o in &set.orderings {
            let l = lambda_matrix(&s, o).unwrap();
            let sym = &l + l.transpose();
            for k in 0..4 {
                for j in 0..4 {
                    let expected = if k == j { 2.0 * lo } else { lo - hi };
                    assert!((sym[(k, j)] - expected).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn degenerate_condition_examples() {
        for m in 1..=5 {
            let flat = DegeneratePair::new(0.1, 0.1).unwrap();
            assert!(degenerate_ppt_condition(&flat, m).unwrap().holds);
            let pure = DegeneratePair::new(0.1, 0.0).unwrap();
            assert!(!degenerate_ppt_condition(&pure, m).unwrap().holds);
        }
        assert!(DegeneratePair::new(0.1, 0.2).is_err());
        assert!(DegeneratePair::new(0.1, -0.01).is_err());
    }

    #[test]
    fn degenerate_membership() {
        let s = dqc1_spectrum(4, 0.3).unwrap();
        assert!(DegeneratePair::from_spectrum(&s, 1).is_some());
        assert!(DegeneratePair::from_spectrum(&s, 2).is_some());
        // 2m must stay below the register size
        assert!(DegeneratePair::from_spectrum(&dqc1_spectrum(2, 0.3).unwrap(), 2).is_none());
        // bottom three eigenvalues differ
        let generic = SortedSpectrum::from_unsorted((1..=16).map(|i| i as f64 / 136.0).collect()).unwrap();
        assert!(DegeneratePair::from_spectrum(&generic, 1).is_none());
    }

    #[test]
    fn thresholds() {
        assert_eq!(dqc1_alpha_threshold(1).unwrap(), 0.5);
        assert_eq!(dqc1_alpha_threshold(2).unwrap(), 0.75);
        assert_eq!(dqc1_alpha_threshold(3).unwrap(), 0.875);
        assert!(dqc1_alpha_threshold(0).is_err());
        assert_eq!(dqc1_all_cuts_bounds(2).unwrap(), (0.5, 0.5));
        assert_eq!(dqc1_all_cuts_bounds(4).unwrap(), (0.75, 0.75));
        assert_eq!(dqc1_all_cuts_bounds(5).unwrap(), (0.75, 0.875));
        assert!(dqc1_all_cuts_bounds(1).is_err());
        for k in 1..10 {
            assert!(dqc1_alpha_threshold(k).unwrap() < dqc1_alpha_threshold(k + 1).unwrap());
        }
    }

    #[test]
    fn hildebrand_uniform_holds() {
        for (k, total) in [(1, 3), (2, 4), (2, 5), (3, 6)] {
            let d = 1usize << total;
            let v = hildebrand_ppt_from_spectrum(&spec(&vec![1.0 / d as f64; d]), k, total).unwrap();
            assert!(v.holds, "k={k} total={total}");
            assert_eq!(v.distinct_lambdas, 1);
        }
        let s = spec(&[0.25; 4]);
        assert!(hildebrand_ppt_from_spectrum(&s, 2, 2).is_err());
        assert!(hildebrand_ppt_from_spectrum(&s, 1, 3).is_err());
    }

    #[test]
    fn hildebrand_input_state_k2() {
        for i in 0..=100 {
            let alpha = i as f64 / 100.0;
            let v = hildebrand_ppt_from_spectrum(&dqc1_spectrum(4, alpha).unwrap(), 2, 5).unwrap();
            assert_eq!(v.holds, alpha >= 0.75, "alpha={alpha}");
        }
    }
}
