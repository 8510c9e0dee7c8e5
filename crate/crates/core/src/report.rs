//! Parameter sweeps and their persisted records.
//!
//! Every record carries a `margin` whose sign agrees with `verdict`
//! (`verdict == (margin >= 0)`). Margins include the tolerance of the
//! underlying test, so a PPT state at tolerance `t` with smallest
//! partial-transpose eigenvalue `m` reports `m + t`.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bipartite::{
    bipartitions_of_size, default_tolerance, enumerate_bipartitions, is_ppt, negativity, pt_witness, Bipartition,
};
use crate::circuits::{cdqc1_unitary, haar_random_unitary, parse_circuit, Unitary};
use crate::discord::{default_discord_tolerance, is_zero_discord};
use crate::error::{Error, Result};
use crate::linalg::{check_register, qubit_bit, SortedSpectrum, ONE, ZERO};
use crate::rng::child_seed;
use crate::spectrum::{
    degenerate_ppt_condition, dqc1_all_cuts_bounds, dqc1_alpha_threshold, hildebrand_ppt_from_spectrum, johnston_sfs,
    DegeneratePair, LAMBDA_PSD_TOL, SPECTRUM_SLACK,
};
use crate::states::dqc1_state;

/// Largest register for which every bipartition may be enumerated.
pub const MAX_FULL_ENUMERATION_QUBITS: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    Ppt,
    Negativity,
    Johnston,
    Hildebrand,
    Degenerate,
    Discord,
    Witness,
}

impl Criterion {
    pub const ALL: [Criterion; 7] = [
        Self::Ppt,
        Self::Negativity,
        Self::Johnston,
        Self::Hildebrand,
        Self::Degenerate,
        Self::Discord,
        Self::Witness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Ppt => "ppt",
            Self::Negativity => "negativity",
            Self::Johnston => "johnston",
            Self::Hildebrand => "hildebrand",
            Self::Degenerate => "degenerate",
            Self::Discord => "discord",
            Self::Witness => "witness",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown criterion '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub run_id: String,
    pub n: usize,
    pub alpha: f64,
    pub bipartition: String,
    pub criterion: Criterion,
    pub verdict: bool,
    pub margin: f64,
    pub seed: u64,
    pub wall_time_ms: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            _ => Err(Error::InvalidArgument(format!("unknown format '{s}'"))),
        }
    }
}

/// Unitary applied to the input state at each grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "text")]
pub enum CircuitSource {
    Identity,
    /// Circuit file contents, parsed for `n + 1` qubits.
    File(String),
    /// Hadamard-then-controlled-V with a Haar-random `V`, seeded per `n`.
    Cdqc1Haar,
    /// Haar-random unitary on all qubits, seeded per `n`.
    Haar,
}

impl CircuitSource {
    pub fn unitary(&self, n: usize, seed: u64) -> Result<Unitary> {
        let total = n + 1;
        check_register(total)?;
        match self {
            Self::Identity => Unitary::identity(total),
            Self::File(text) => Ok(parse_circuit(text, total)?.unitary()),
            Self::Cdqc1Haar => cdqc1_unitary(&haar_random_unitary(n, child_seed(seed, n as u64))?),
            Self::Haar => haar_random_unitary(total, child_seed(seed, n as u64)),
        }
    }
}

fn default_criteria() -> Vec<Criterion> {
    vec![Criterion::Ppt, Criterion::Negativity]
}

fn default_shots() -> u64 {
    100_000
}

fn default_budget() -> usize {
    2_000
}

/// Sweep parameters. Cut sizes default to `1..=floor((n+1)/2)`; every
/// bipartition is visited when `all_bipartitions` is set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub n_range: Vec<usize>,
    pub alpha_grid: Vec<f64>,
    #[serde(default)]
    pub cut_sizes: Vec<usize>,
    #[serde(default)]
    pub all_bipartitions: bool,
    #[serde(default = "default_criteria")]
    pub criteria: Vec<Criterion>,
    #[serde(default = "default_shots")]
    pub shots: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_budget")]
    pub budget: usize,
    #[serde(default)]
    pub output_path: Option<String>,
    #[serde(default)]
    pub format: Format,
}

impl SweepConfig {
    pub fn new(n_range: Vec<usize>, alpha_grid: Vec<f64>) -> Self {
        Self {
            n_range,
            alpha_grid,
            cut_sizes: Vec::new(),
            all_bipartitions: false,
            criteria: default_criteria(),
            shots: default_shots(),
            seed: 0,
            budget: default_budget(),
            output_path: None,
            format: Format::Csv,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_range.is_empty() {
            return Err(Error::InvalidArgument("n_range is empty".into()));
        }
        if self.alpha_grid.is_empty() {
            return Err(Error::InvalidArgument("alpha_grid is empty".into()));
        }
        if self.criteria.is_empty() {
            return Err(Error::InvalidArgument("no criteria requested".into()));
        }
        if let Some(&a) = self.alpha_grid.iter().find(|a| !(0.0..=1.0).contains(*a)) {
            return Err(Error::InvalidMixingParameter(a));
        }
        for &n in &self.n_range {
            if n == 0 {
                return Err(Error::InvalidArgument("n must be at least 1".into()));
            }
            check_register(n + 1)?;
            if self.all_bipartitions && n + 1 > MAX_FULL_ENUMERATION_QUBITS {
                return Err(Error::InvalidArgument(format!(
                    "full bipartition enumeration is limited to {MAX_FULL_ENUMERATION_QUBITS} qubits"
                )));
            }
        }
        if self.cut_sizes.contains(&0) {
            return Err(Error::InvalidArgument("cut sizes must be at least 1".into()));
        }
        let widest = self.n_range.iter().max().map_or(0, |n| n + 1);
        if let Some(&k) = self.cut_sizes.iter().find(|&&k| k >= widest) {
            return Err(Error::InvalidBipartition(format!(
                "cut size {k} leaves party B empty for every n in the range"
            )));
        }
        Ok(())
    }

    /// Bipartitions visited for `n + 1` qubits, in canonical order.
    pub fn bipartitions(&self, n: usize) -> Result<Vec<Bipartition>> {
        let total = n + 1;
        if self.all_bipartitions {
            return enumerate_bipartitions(total);
        }
        let sizes: Vec<usize> = if self.cut_sizes.is_empty() {
            (1..=total / 2).collect()
        } else {
            self.cut_sizes.iter().copied().filter(|&k| 2 * k <= total).collect()
        };
        let mut out = Vec::new();
        for k in sizes {
            out.extend(bipartitions_of_size(total, k)?);
        }
        Ok(out)
    }
}

/// 64-bit FNV-1a hash of the config and circuit, as 16 hex digits.
pub fn run_id(config: &SweepConfig, circuit: &CircuitSource) -> String {
    let mut canonical = config.clone();
    canonical.output_path = None;
    canonical.format = Format::Csv;
    let bytes = serde_json::to_vec(&(canonical, circuit)).expect("config serializes");
    let hash = bytes.iter().fold(0xcbf2_9ce4_8422_2325u64, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
    });
    format!("{hash:016x}")
}

struct Outcome {
    verdict: bool,
    margin: f64,
}

impl Outcome {
    fn new(verdict: bool, margin: f64) -> Self {
        debug_assert!(verdict == (margin >= 0.0) || margin.is_nan(), "{verdict} {margin}");
        Self { verdict, margin }
    }
}

/// Basis vectors `|1..1>` on `targets` (others `|0>`) and `|0...0>`.
fn witness_vectors(total: usize, targets: [usize; 2]) -> (Vec<Complex64>, Vec<Complex64>) {
    let dim = 1usize << total;
    let mut phi = vec![ZERO; dim];
    phi[qubit_bit(targets[0], total) | qubit_bit(targets[1], total)] = ONE;
    let mut psi = vec![ZERO; dim];
    psi[0] = ONE;
    (phi, psi)
}

fn evaluate(
    criterion: Criterion,
    rho: &crate::states::DensityMatrix,
    spectrum: &SortedSpectrum,
    bp: &Bipartition,
) -> Result<Option<Outcome>> {
    let total = rho.qubits();
    let k = bp.cut_size();
    let tol = default_tolerance(rho.dim());
    Ok(Some(match criterion {
        Criterion::Ppt => {
            let v = is_ppt(rho, bp, tol)?;
            Outcome::new(v.ppt, v.min_eigenvalue + tol)
        }
        Criterion::Negativity => {
            let neg = negativity(rho, bp)?;
            Outcome::new(neg == 0.0, -neg)
        }
        Criterion::Johnston => {
            if k != 1 || total < 2 {
                return Ok(None);
            }
            let v = johnston_sfs(spectrum)?;
            Outcome::new(v.holds, v.margin + SPECTRUM_SLACK)
        }
        Criterion::Hildebrand => {
            if (1usize << k) > crate::spectrum::MAX_ORDERING_DIM {
                return Ok(None);
            }
            let v = hildebrand_ppt_from_spectrum(spectrum, k, total)?;
            Outcome::new(v.holds, v.margin + LAMBDA_PSD_TOL * (1usize << k) as f64)
        }
        Criterion::Degenerate => {
            let Some(pair) = DegeneratePair::from_spectrum(spectrum, k) else {
                return Ok(None);
            };
            let v = degenerate_ppt_condition(&pair, k)?;
            Outcome::new(v.holds, v.margin + SPECTRUM_SLACK)
        }
        Criterion::Discord => {
            let tol = default_discord_tolerance(rho.dim());
            let v = is_zero_discord(rho, bp, tol)?;
            Outcome::new(v.zero_discord, tol - v.residual)
        }
        Criterion::Witness => {
            let targets = [bp.party_a()[0], bp.party_b()[0]];
            let (phi, psi) = witness_vectors(total, targets);
            let w = pt_witness(rho, bp, &phi, &psi, tol)?;
            let margin = (tol - w.diagonal.norm()).min(w.cross.norm() - tol);
            Outcome::new(w.fires, margin)
        }
    }))
}

/// Runs the sweep and returns its records in grid-major, bipartition-minor order.
pub fn scan(config: &SweepConfig, circuit: &CircuitSource) -> Result<Vec<CriterionReport>> {
    config.validate()?;
    let id = run_id(config, circuit);
    let mut tasks = Vec::new();
    for &n in &config.n_range {
        let u = circuit.unitary(n, config.seed)?;
        for &alpha in &config.alpha_grid {
            tasks.push((n, alpha, u.clone(), config.bipartitions(n)?));
        }
    }
    let per_point: Vec<Result<Vec<CriterionReport>>> = tasks
        .par_iter()
        .map(|(n, alpha, u, bps)| {
            let rho = dqc1_state(*n, *alpha)?.evolve(u.matrix())?;
            let spectrum = crate::states::dqc1_spectrum(*n, *alpha)?;
            let mut records = Vec::new();
            for bp in bps {
                for &criterion in &config.criteria {
                    let start = Instant::now();
                    let Some(outcome) = evaluate(criterion, &rho, &spectrum, bp)? else {
                        continue;
                    };
                    records.push(CriterionReport {
                        run_id: id.clone(),
                        n: *n,
                        alpha: *alpha,
                        bipartition: bp.to_string(),
                        criterion,
                        verdict: outcome.verdict,
                        margin: outcome.margin,
                        seed: config.seed,
                        wall_time_ms: start.elapsed().as_millis() as u64,
                    });
                }
            }
            Ok(records)
        })
        .collect();
    let mut out = Vec::new();
    for records in per_point {
        out.extend(records?);
    }
    Ok(out)
}

/// Analytic thresholds for one `(n, k)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdRow {
    pub n: usize,
    pub k: usize,
    pub alpha_threshold: f64,
    /// Necessary bound on `alpha` for PPT from spectrum at every cut.
    pub necessary: f64,
    /// Sufficient bound on `alpha` for PPT from spectrum at every cut.
    pub sufficient: f64,
}

pub fn thresholds_table(n_range: &[usize]) -> Result<Vec<ThresholdRow>> {
    if n_range.is_empty() {
        return Err(Error::InvalidArgument("empty n range".into()));
    }
    let mut rows = Vec::new();
    for &n in n_range {
        let (necessary, sufficient) = dqc1_all_cuts_bounds(n)?;
        for k in 1..=(n + 1) / 2 {
            rows.push(ThresholdRow {
                n,
                k,
                alpha_threshold: dqc1_alpha_threshold(k)?,
                necessary,
                sufficient,
            });
        }
    }
    Ok(rows)
}

fn io_error(e: impl fmt::Display) -> Error {
    Error::InvalidArgument(format!("write failed: {e}"))
}

/// Writes serializable rows as CSV (header in field order) or a JSON array.
pub fn write_rows<T: Serialize>(rows: &[T], format: Format, out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for row in rows {
                w.serialize(row).map_err(io_error)?;
            }
            w.flush().map_err(io_error)?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, rows).map_err(io_error)?;
            writeln!(out).map_err(io_error)?;
        }
    }
    Ok(())
}
