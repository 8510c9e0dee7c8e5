use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use dqc1::bipartite::{boundary_orbit_demo, Bipartition};
use dqc1::circuits::{normalized_trace_estimate, parse_circuit, Unitary};
use dqc1::discord::{default_discord_tolerance, discord_depolarization_check, is_zero_discord, DiscordMethod};
use dqc1::linalg::max_register_qubits;
use dqc1::report::{scan, thresholds_table, write_rows, CircuitSource, Criterion, Format, SweepConfig};
use dqc1::search::search_entangling_unitary;
use dqc1::spectrum::{
    degenerate_ppt_condition, hildebrand_ppt_from_spectrum, johnston_sfs, DegeneratePair, MAX_ORDERING_DIM,
};
use dqc1::states::{dqc1_spectrum, dqc1_state};
use dqc1::Error;

const EXIT_USAGE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

#[derive(Parser)]
#[command(name = "dqc1", version, about = "Entanglement and discord analysis of one-clean-qubit circuits")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Write results here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Root seed for every random draw of the run.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Csv => Format::Csv,
            OutputFormat::Json => Format::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Analytic mixing-parameter thresholds per (n, k) and the all-cut bounds.
    Thresholds {
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
    },
    /// Evaluate criteria over a grid of (n, alpha) and bipartitions.
    Scan(ScanArgs),
    /// Estimate tr(V)/2^n from sampled clean-qubit readouts.
    Trace {
        /// Circuit file for V.
        #[arg(long)]
        circuit: PathBuf,
        /// Qubits V acts on; inferred from the largest target when omitted.
        #[arg(long)]
        qubits: Option<usize>,
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        #[arg(long, default_value_t = 100_000)]
        shots: u64,
    },
    /// Entangling rotation within trace distance eps of the identity.
    #[command(name = "demo-lemma1")]
    DemoLemma1 {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        epsilon: f64,
        /// Party-A qubits, e.g. "0" or "0,2".
        #[arg(long, default_value = "0")]
        cut: String,
        /// Write the unitary and its figures as JSON here.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Randomized search for a unitary that entangles the input state.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alpha: f64,
        /// Party-A qubits; defaults to qubit 0.
        #[arg(long, default_value = "0")]
        cut: String,
        #[arg(long, default_value_t = 2000)]
        budget: usize,
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Zero-discord verdicts for a measured party, and their stability under depolarization.
    DiscordCheck {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        /// Measured party-A qubits.
        #[arg(long, default_value = "0")]
        cut: String,
        #[command(flatten)]
        circuit: CircuitArgs,
        /// Mixing parameters for the stability check.
        #[arg(long, value_delimiter = ',', default_value = "0,0.3,0.9")]
        alphas: Vec<f64>,
    },
}

#[derive(Args)]
#[group(multiple = false)]
struct CircuitArgs {
    /// Circuit file applied to the n+1 qubit input.
    #[arg(long)]
    circuit: Option<PathBuf>,
    /// Hadamard then controlled-V with Haar-random V.
    #[arg(long)]
    cdqc1: bool,
    /// Haar-random unitary on all qubits.
    #[arg(long)]
    haar: bool,
}

impl CircuitArgs {
    fn source(&self) -> Result<CircuitSource, CliError> {
        Ok(if let Some(path) = &self.circuit {
            CircuitSource::File(read(path)?)
        } else if self.cdqc1 {
            CircuitSource::Cdqc1Haar
        } else if self.haar {
            CircuitSource::Haar
        } else {
            CircuitSource::Identity
        })
    }
}

#[derive(Args)]
struct ScanArgs {
    /// TOML sweep configuration; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Values of n, e.g. "1,2,3" or "1..4" (inclusive).
    #[arg(long)]
    n: Option<String>,
    /// Mixing parameters, e.g. "0,0.5,1" or "0:1:0.1".
    #[arg(long)]
    alphas: Option<String>,
    #[arg(long, value_delimiter = ',')]
    cut_sizes: Option<Vec<usize>>,
    /// Visit all 2^n - 1 bipartitions (n + 1 <= 9).
    #[arg(long)]
    all_bipartitions: bool,
    #[arg(long, value_delimiter = ',')]
    criteria: Option<Vec<String>>,
    #[command(flatten)]
    circuit: CircuitArgs,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Numeric(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_numeric() {
            CliError::Numeric(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>, CliError> {
    text.split(',')
        .map(|t| t.trim().parse::<T>().map_err(|_| CliError::Usage(format!("bad {what} '{t}'"))))
        .collect()
}

fn parse_n_range(text: &str) -> Result<Vec<usize>, CliError> {
    if let Some((a, b)) = text.split_once("..") {
        let (a, b): (usize, usize) = (
            a.trim().parse().map_err(|_| CliError::Usage(format!("bad range '{text}'")))?,
            b.trim().trim_start_matches('=').parse().map_err(|_| CliError::Usage(format!("bad range '{text}'")))?,
        );
        return Ok((a..=b).collect());
    }
    parse_list(text, "n")
}

fn parse_alphas(text: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() == 3 {
        let nums = parts
            .iter()
            .map(|p| p.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("bad grid '{text}'"))))
            .collect::<Result<Vec<_>, _>>()?;
        let (start, stop, step) = (nums[0], nums[1], nums[2]);
        if !(step > 0.0) || stop < start {
            return Err(CliError::Usage(format!("bad grid '{text}'")));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize;
        // snap to 1e-12 so 0.1 * 3 prints as 0.3
        return Ok((0..=count).map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12).collect());
    }
    parse_list(text, "alpha")
}

fn emit<T: Serialize>(rows: &[T], format: Format, output: Option<&PathBuf>) -> Result<(), CliError> {
    let mut buf = Vec::new();
    write_rows(rows, format, &mut buf)?;
    match output {
        Some(path) => fs::write(path, buf).map_err(|e| CliError::Usage(format!("{}: {e}", path.display()))),
        None => io::stdout()
            .write_all(&buf)
            .map_err(|e| CliError::Usage(format!("stdout: {e}"))),
    }
}

#[derive(Serialize)]
struct Certificate<'a> {
    qubits: usize,
    unitary: &'a Unitary,
    negativity: f64,
    distance_from_identity: f64,
}

fn write_certificate(path: &PathBuf, unitary: &Unitary, negativity: f64) -> Result<(), CliError> {
    let distance = dqc1::linalg::trace_norm(&(unitary.matrix() - &dqc1::ComplexMatrix::identity(unitary.dim())));
    let cert = Certificate {
        qubits: unitary.qubits(),
        unitary,
        negativity,
        distance_from_identity: distance,
    };
    let json = serde_json::to_string_pretty(&cert).expect("certificate serializes");
    fs::write(path, json + "\n").map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// Whether PPT from spectrum is guaranteed for cuts of size `k`.
fn spectrum_guarantee(n: usize, alpha: f64, k: usize) -> Result<Option<&'static str>, CliError> {
    let spectrum = dqc1_spectrum(n, alpha)?;
    let total = n + 1;
    if k == 1 && johnston_sfs(&spectrum)?.holds {
        return Ok(Some("criterion guarantees PPT (one-qubit spectrum condition)"));
    }
    if let Some(pair) = DegeneratePair::from_spectrum(&spectrum, k) {
        if degenerate_ppt_condition(&pair, k)?.holds {
            return Ok(Some("criterion guarantees PPT (degenerate spectrum condition)"));
        }
    }
    if (1usize << k) <= MAX_ORDERING_DIM && 2 * k <= total && hildebrand_ppt_from_spectrum(&spectrum, k, total)?.holds {
        return Ok(Some("criterion guarantees PPT (ordering test)"));
    }
    Ok(None)
}

fn infer_qubits(text: &str) -> Result<usize, CliError> {
    let wide = parse_circuit(text, max_register_qubits())?;
    Ok(wide
        .ops()
        .iter()
        .flat_map(|op| op.targets().iter().copied())
        .max()
        .map_or(1, |q| q + 1))
}

fn run(cli: Cli) -> Result<(), CliError> {
    let format_flag = cli.format.map(Format::from);
    let format = format_flag.unwrap_or_default();
    let seed = cli.seed.unwrap_or(0);
    let output = cli.output.as_ref();
    match cli.command {
        Command::Thresholds { n_min, n_max } => {
            if n_min > n_max {
                return Err(CliError::Usage(format!("empty range {n_min}..={n_max}")));
            }
            let rows = thresholds_table(&(n_min..=n_max).collect::<Vec<_>>())?;
            emit(&rows, format, output)
        }
        Command::Scan(args) => {
            let mut config = match &args.config {
                Some(path) => toml::from_str::<SweepConfig>(&read(path)?)
                    .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?,
                None => SweepConfig::new(Vec::new(), Vec::new()),
            };
            if let Some(n) = &args.n {
                config.n_range = parse_n_range(n)?;
            }
            if let Some(a) = &args.alphas {
                config.alpha_grid = parse_alphas(a)?;
            }
            if let Some(k) = args.cut_sizes {
                config.cut_sizes = k;
            }
            if args.all_bipartitions {
                config.all_bipartitions = true;
            }
            if let Some(c) = &args.criteria {
                config.criteria = c
                    .iter()
                    .map(|s| s.parse::<Criterion>())
                    .collect::<Result<Vec<_>, _>>()?;
            }
            if let Some(s) = cli.seed {
                config.seed = s;
            }
            if let Some(f) = format_flag {
                config.format = f;
            }
            if let Some(p) = output {
                config.output_path = Some(p.display().to_string());
            }
            let records = scan(&config, &args.circuit.source()?)?;
            let out = config.output_path.clone().map(PathBuf::from);
            emit(&records, config.format, out.as_ref())
        }
        Command::Trace {
            circuit,
            qubits,
            alpha,
            shots,
        } => {
            if shots == 0 {
                return Err(CliError::Usage("shots must be at least 1".into()));
            }
            let text = read(&circuit)?;
            let qubits = match qubits {
                Some(q) => q,
                None => infer_qubits(&text)?,
            };
            let v = parse_circuit(&text, qubits)?.unitary();
            let exact = v.normalized_trace();
            let est = normalized_trace_estimate(&v, alpha, shots, seed)?;
            #[derive(Serialize)]
            struct Row {
                qubits: usize,
                alpha: f64,
                exact_re: f64,
                exact_im: f64,
                estimate_re: f64,
                estimate_im: f64,
                std_error_re: f64,
                std_error_im: f64,
                shots: u64,
                seed: u64,
            }
            emit(
                &[Row {
                    qubits,
                    alpha,
                    exact_re: exact.re,
                    exact_im: exact.im,
                    estimate_re: est.estimate.re,
                    estimate_im: est.estimate.im,
                    std_error_re: est.std_error.re,
                    std_error_im: est.std_error.im,
                    shots,
                    seed,
                }],
                format,
                output,
            )
        }
        Command::DemoLemma1 {
            n,
            epsilon,
            cut,
            certificate,
        } => {
            let bp = Bipartition::parse(n + 1, &cut)?;
            let demo = boundary_orbit_demo(n, &bp, epsilon)?;
            if let Some(path) = &certificate {
                write_certificate(path, &demo.unitary, demo.negativity)?;
            }
            #[derive(Serialize)]
            struct Row {
                n: usize,
                bipartition: String,
                epsilon: f64,
                theta: f64,
                target_a: usize,
                target_b: usize,
                distance_from_identity: f64,
                negativity: f64,
            }
            emit(
                &[Row {
                    n,
                    bipartition: bp.to_string(),
                    epsilon,
                    theta: demo.theta,
                    target_a: demo.targets[0],
                    target_b: demo.targets[1],
                    distance_from_identity: demo.distance_from_identity,
                    negativity: demo.negativity,
                }],
                format,
                output,
            )
        }
        Command::Search {
            n,
            alpha,
            cut,
            budget,
            certificate,
        } => {
            let bp = Bipartition::parse(n + 1, &cut)?;
            let out = search_entangling_unitary(n, alpha, &bp, budget, seed)?;
            if let Some(path) = &certificate {
                write_certificate(path, &out.unitary, out.negativity)?;
            }
            let note = match spectrum_guarantee(n, alpha, bp.cut_size())? {
                Some(g) => g.to_string(),
                None if out.found() => "entangling unitary found".to_string(),
                None => "none found; not a separability certificate".to_string(),
            };
            #[derive(Serialize)]
            struct Row {
                n: usize,
                alpha: f64,
                bipartition: String,
                budget: usize,
                seed: u64,
                negativity: f64,
                min_pt_eigenvalue: f64,
                evaluations: usize,
                note: String,
            }
            emit(
                &[Row {
                    n,
                    alpha,
                    bipartition: bp.to_string(),
                    budget,
                    seed,
                    negativity: out.negativity,
                    min_pt_eigenvalue: out.min_pt_eigenvalue,
                    evaluations: out.evaluations,
                    note,
                }],
                format,
                output,
            )
        }
        Command::DiscordCheck {
            n,
            alpha,
            cut,
            circuit,
            alphas,
        } => {
            let bp = Bipartition::parse(n + 1, &cut)?;
            let u = circuit.source()?.unitary(n, seed)?;
            let rho = dqc1_state(n, alpha)?.evolve(u.matrix())?;
            let tol = default_discord_tolerance(rho.dim());
            let verdict = is_zero_discord(&rho, &bp, tol)?;
            let stable = discord_depolarization_check(&rho, &bp, &alphas)?;
            #[derive(Serialize)]
            struct Row {
                n: usize,
                alpha: f64,
                bipartition: String,
                zero_discord: bool,
                method: DiscordMethod,
                residual: f64,
                tolerance: f64,
                stable_under_depolarization: bool,
            }
            emit(
                &[Row {
                    n,
                    alpha,
                    bipartition: bp.to_string(),
                    zero_discord: verdict.zero_discord,
                    method: verdict.method,
                    residual: verdict.residual,
                    tolerance: tol,
                    stable_under_depolarization: stable,
                }],
                format,
                output,
            )
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(CliError::Numeric(msg)) => {
            eprintln!("numeric error: {msg}");
            ExitCode::from(EXIT_NUMERIC)
        }
    }
}
