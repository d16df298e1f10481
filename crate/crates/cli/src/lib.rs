//! Command-line front end. [`run_cli`] parses arguments, runs one
//! subcommand, and maps failures to exit codes: 2 for bad configuration,
//! 3 for runtime or numeric failures.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use udinc::fourier::{decay_fit, EvalMode, Mollifier, RadialTransform, SeriesTable, TransformKind};
use udinc::generators::{
    generate, lenz_cross_distance, read_sequence, write_sequence, Family, GeneratorConfig,
};
use udinc::harness::{
    scaling_sweep, support_sweep, ExperimentConfig, ScalingFit, SupportStatistic, DEFAULT_TOLERANCE,
};
use udinc::incidence::{
    annulus_reports, count_annulus_pairs_checkpoints, discrete_energy, exact_distance_count,
    slab_reports, write_reports_csv, IncidenceReport, MainTermSampling, DEFAULT_ETA,
};
use udinc::numeric::{fmt17, serialize_f64};
use udinc::weyl::{
    adversarial_frequency, default_kmax, estimate_gamma, weyl_profile, FrequencySpec,
    DEFAULT_EPSILON, DEFAULT_SEARCH_BUDGET,
};
use udinc::{Exec, Metric, PointSequence, RegionSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_CONFIG,
            message: message.into(),
        }
    }
}

impl From<udinc::Error> for Failure {
    fn from(e: udinc::Error) -> Self {
        let code = if e.is_configuration() {
            EXIT_CONFIG
        } else {
            EXIT_RUNTIME
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self {
            code: EXIT_RUNTIME,
            message: e.to_string(),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Self {
            code: EXIT_RUNTIME,
            message: e.to_string(),
        }
    }
}

type CliResult<T = ()> = Result<T, Failure>;

#[derive(Parser, Debug)]
#[command(
    name = "udinc",
    version,
    about = "Weyl sums, radial transforms and incidence counts on the torus"
)]
struct Cli {
    /// Run every kernel on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a point sequence.
    Gen(GenArgs),
    /// Tabulate Weyl sums over a frequency box.
    Weyl(WeylArgs),
    /// Estimate γ from the decay of Weyl sums.
    Gamma(WeylArgs),
    /// Count annulus pairs and split off the main term.
    Incidence(IncidenceArgs),
    /// Weighted slab counts between two sequences.
    Slab(SlabArgs),
    /// Remainder scaling sweep over seeds and N.
    Scaling(SweepArgs),
    /// Growth of the number of distinct points.
    Support(SweepArgs),
    /// Growth of the number of distinct differences.
    Diffset(SweepArgs),
    /// Discrete s-energy of a sequence.
    Energy(EnergyArgs),
    /// Decay fits of radial transforms, or the mollifier's series check.
    FourierCheck(FourierArgs),
    /// Search for a frequency aligning a few reals with the integers.
    Adversarial(AdversarialArgs),
    /// Exact-distance counts on the two-circle configuration.
    LenzDemo(LenzArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyName {
    Iid,
    Kronecker,
    Halton,
    Lattice,
    Lenz,
    Clustered,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
struct GeneratorArgs {
    #[arg(long, value_enum, default_value = "iid")]
    family: FamilyName,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Kronecker direction, comma separated.
    #[arg(long, value_delimiter = ',')]
    alpha: Option<Vec<f64>>,
    /// Halton bases, comma separated.
    #[arg(long, value_delimiter = ',')]
    bases: Option<Vec<u64>>,
    #[arg(long, default_value_t = 10)]
    side: usize,
    #[arg(long)]
    per_circle: Option<usize>,
    #[arg(long, default_value_t = 0.25)]
    scale: f64,
    #[arg(long, default_value_t = 4)]
    clusters: usize,
    #[arg(long, default_value_t = 1e-3)]
    radius: f64,
}

impl GeneratorArgs {
    fn config(&self) -> CliResult<GeneratorConfig> {
        let family = match self.family {
            FamilyName::Iid => Family::Iid,
            FamilyName::Kronecker => Family::Kronecker {
                alpha: self.alpha.clone(),
            },
            FamilyName::Halton => Family::Halton {
                bases: self.bases.clone(),
            },
            FamilyName::Lattice => Family::Lattice { side: self.side },
            FamilyName::Lenz => Family::Lenz {
                per_circle: self.per_circle,
                scale: self.scale,
            },
            FamilyName::Clustered => Family::Clustered {
                clusters: self.clusters,
                radius: self.radius,
            },
        };
        let dim = match (self.dim, self.family) {
            (Some(d), _) => d,
            (None, FamilyName::Lenz) => 4,
            (None, _) => return Err(Failure::config("--dim is required")),
        };
        let cfg = GeneratorConfig::new(family, dim, self.seed);
        cfg.validate()?;
        Ok(cfg)
    }
}

/// A sequence read from `--in`, or generated from the generator flags.
#[derive(Args, Debug, Clone)]
struct SourceArgs {
    /// Read the sequence from this file instead of generating it.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[command(flatten)]
    generator: GeneratorArgs,
}

impl SourceArgs {
    fn load(&self, n: usize) -> CliResult<PointSequence> {
        match &self.input {
            Some(path) => read_input(path),
            None => Ok(generate(&self.generator.config()?, n)?),
        }
    }
}

fn read_input(path: &Path) -> CliResult<PointSequence> {
    let file = File::open(path)
        .map_err(|e| Failure::config(format!("cannot open {}: {e}", path.display())))?;
    Ok(read_sequence(BufReader::new(file))?)
}

#[derive(Args, Debug)]
struct GenArgs {
    #[command(flatten)]
    generator: GeneratorArgs,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct WeylArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Largest |k|_∞; defaults by dimension.
    #[arg(long)]
    kmax: Option<u32>,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    eps: f64,
    #[arg(long, value_delimiter = ',', required = true)]
    checkpoints: Vec<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct IncidenceArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long)]
    region: RegionSpec,
    /// Prefix lengths to count at; `--n` is shorthand for one checkpoint.
    #[arg(long, value_delimiter = ',')]
    checkpoints: Option<Vec<usize>>,
    #[arg(long)]
    n: Option<usize>,
    /// Use the O(N²) reference counter instead of the cell grid.
    #[arg(long)]
    brute: bool,
    /// Count `‖v_n - v_m‖ = t` as a thin annulus of half-width `--eta`.
    #[arg(long)]
    exact: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_ETA)]
    eta: f64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SlabArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Second sequence; generated from the partner seed when absent.
    #[arg(long = "in2")]
    input2: Option<PathBuf>,
    #[arg(long)]
    region: RegionSpec,
    #[arg(long, value_delimiter = ',')]
    checkpoints: Option<Vec<usize>>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = MainTermSampling::default().samples)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    mc_seed: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// JSON experiment config; flags given on the command line override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    family: Option<FamilyName>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    side: Option<usize>,
    #[arg(long)]
    region: Option<RegionSpec>,
    #[arg(long, value_delimiter = ',')]
    checkpoints: Option<Vec<usize>>,
    /// A count `K` (seeds 0..K) or a comma-separated list of seeds.
    #[arg(long)]
    seeds: Option<String>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    quantum: Option<f64>,
    /// Per-(seed, N) CSV destination.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Fit JSON destination; standard output when absent.
    #[arg(long)]
    fit_out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args, Debug)]
struct EnergyArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long)]
    s: f64,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_enum, default_value = "torus")]
    metric: MetricName,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MetricName {
    Torus,
    Euclidean,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CheckKind {
    Annulus,
    Ball,
    Sphere,
    Mollifier,
}

#[derive(Args, Debug)]
struct FourierArgs {
    #[arg(long, value_enum)]
    kind: CheckKind,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 0.25)]
    a: f64,
    #[arg(long, default_value_t = 0.30)]
    b: f64,
    #[arg(long, default_value_t = 0.25)]
    r: f64,
    #[arg(long, default_value_t = 4.0)]
    kmin: f64,
    #[arg(long, default_value_t = 128.0)]
    kmax: f64,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    #[arg(long, default_value_t = 400)]
    truncation: usize,
    /// Random evaluation points for the mollifier check.
    #[arg(long, default_value_t = 100)]
    points: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV of the sampled transform values.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct AdversarialArgs {
    /// One-dimensional points; i.i.d. points from `--seed` when absent.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 5)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.05)]
    eps: f64,
    /// Search limit; defaults to ⌈eps^{-n}⌉.
    #[arg(long)]
    qmax: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
    budget: u64,
}

#[derive(Args, Debug)]
struct LenzArgs {
    /// Points per circle, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [5usize, 6, 7])]
    per_circle: Vec<usize>,
    #[arg(long, default_value_t = 0.25)]
    scale: f64,
    #[arg(long, default_value_t = DEFAULT_ETA)]
    eta: f64,
}

/// Parses `argv` (without the program name), runs the subcommand, and
/// returns the process exit code.
pub fn run_cli<S: AsRef<str>>(argv: &[S], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let args = std::iter::once("udinc").chain(argv.iter().map(|s| s.as_ref()));
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_CONFIG
                }
            };
        }
    };
    let exec = if cli.sequential {
        Exec::Sequential
    } else {
        Exec::default()
    };
    match dispatch(cli.command, exec, out, err) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cmd: Command, exec: Exec, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    match cmd {
        Command::Gen(a) => cmd_gen(a, out),
        Command::Weyl(a) => cmd_weyl(a, exec, out),
        Command::Gamma(a) => cmd_gamma(a, exec, out),
        Command::Incidence(a) => cmd_incidence(a, exec, out),
        Command::Slab(a) => cmd_slab(a, exec, out),
        Command::Scaling(a) => cmd_scaling(a, exec, out, err),
        Command::Support(a) => cmd_support(a, SupportStatistic::Support, exec, out, err),
        Command::Diffset(a) => cmd_support(a, SupportStatistic::DifferenceSet, exec, out, err),
        Command::Energy(a) => cmd_energy(a, exec, out),
        Command::FourierCheck(a) => cmd_fourier(a, out),
        Command::Adversarial(a) => cmd_adversarial(a, exec, out),
        Command::LenzDemo(a) => cmd_lenz(a, exec, out),
    }
}

/// Runs `f` against the file at `path`, or against `out` when absent.
fn emit(
    path: Option<&Path>,
    out: &mut dyn Write,
    f: impl FnOnce(&mut dyn Write) -> CliResult,
) -> CliResult {
    match path {
        Some(p) => {
            let file = File::create(p)
                .map_err(|e| Failure::config(format!("cannot create {}: {e}", p.display())))?;
            let mut w = BufWriter::new(file);
            f(&mut w)?;
            w.flush()?;
            Ok(())
        }
        None => f(out),
    }
}

fn write_json<T: Serialize>(value: &T, out: &mut dyn Write) -> CliResult {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn cmd_gen(a: GenArgs, out: &mut dyn Write) -> CliResult {
    let seq = generate(&a.generator.config()?, a.n)?;
    emit(a.out.as_deref(), out, |w| Ok(write_sequence(&seq, w)?))
}

fn profile(a: &WeylArgs, exec: Exec) -> CliResult<udinc::weyl::WeylProfile> {
    let n = *a
        .checkpoints
        .last()
        .ok_or_else(|| Failure::config("--checkpoints is empty"))?;
    let seq = a.source.load(n)?;
    let freq = FrequencySpec::new(seq.dim(), a.kmax.unwrap_or_else(|| default_kmax(seq.dim())))?;
    Ok(weyl_profile(&seq, &freq, &a.checkpoints, a.eps, exec)?)
}

fn cmd_weyl(a: WeylArgs, exec: Exec, out: &mut dyn Write) -> CliResult {
    let p = profile(&a, exec)?;
    emit(a.out.as_deref(), out, |w| Ok(p.write_csv(w)?))
}

fn cmd_gamma(a: WeylArgs, exec: Exec, out: &mut dyn Write) -> CliResult {
    let fit = estimate_gamma(&profile(&a, exec)?)?;
    emit(a.out.as_deref(), out, |w| write_json(&fit, w))
}

fn checkpoint_list(
    checkpoints: Option<Vec<usize>>,
    n: Option<usize>,
    default: Option<usize>,
) -> CliResult<Vec<usize>> {
    match (checkpoints, n.or(default)) {
        (Some(c), _) => Ok(c),
        (None, Some(n)) => Ok(vec![n]),
        (None, None) => Err(Failure::config("give --n or --checkpoints")),
    }
}

fn write_reports(reports: &[IncidenceReport], format: Format, w: &mut dyn Write) -> CliResult {
    match format {
        Format::Csv => Ok(write_reports_csv(reports, w)?),
        Format::Json if reports.len() == 1 => write_json(&reports[0], w),
        Format::Json => write_json(&reports, w),
    }
}

fn cmd_incidence(a: IncidenceArgs, exec: Exec, out: &mut dyn Write) -> CliResult {
    let RegionSpec::Annulus {
        a: lo,
        b: hi,
        metric,
    } = a.region
    else {
        return Err(Failure::config(
            "incidence needs an annulus region; use `slab` for slabs",
        ));
    };
    if metric != Metric::Torus {
        return Err(Failure::config("annulus counts use the torus metric"));
    }
    let known_len = a.source.input.as_ref().map(|p| read_input(p)).transpose()?;
    let cps = checkpoint_list(a.checkpoints, a.n, known_len.as_ref().map(|s| s.len()))?;
    let seq = match known_len {
        Some(s) => s,
        None => a.source.load(*cps.last().unwrap())?,
    };
    if let Some(t) = a.exact {
        let n = *cps.last().unwrap();
        let count = exact_distance_count(&seq, t, n, a.eta, exec)?;
        #[derive(Serialize)]
        struct Exact {
            #[serde(serialize_with = "serialize_f64")]
            t: f64,
            #[serde(serialize_with = "serialize_f64")]
            eta: f64,
            #[serde(rename = "N")]
            n: usize,
            count: u64,
        }
        let rec = Exact {
            t,
            eta: a.eta,
            n,
            count,
        };
        return emit(a.out.as_deref(), out, |w| write_json(&rec, w));
    }
    let mut reports = annulus_reports(&seq, lo, hi, &cps, exec)?;
    if a.brute {
        let counts = count_annulus_pairs_checkpoints(&seq, lo, hi, &cps, exec)?;
        for (r, c) in reports.iter_mut().zip(counts) {
            *r = IncidenceReport::new(r.region, r.n, c as f64, r.main_term, r.main_term_stderr);
        }
    }
    emit(a.out.as_deref(), out, |w| {
        write_reports(&reports, a.format, w)
    })
}

fn cmd_slab(a: SlabArgs, exec: Exec, out: &mut dyn Write) -> CliResult {
    let RegionSpec::Slab { a: lo, b: hi } = a.region else {
        return Err(Failure::config("slab needs a slab region"));
    };
    let v_known = a.source.input.as_ref().map(|p| read_input(p)).transpose()?;
    let cps = checkpoint_list(a.checkpoints, a.n, v_known.as_ref().map(|s| s.len()))?;
    let n = *cps.last().unwrap();
    let v = match v_known {
        Some(s) => s,
        None => a.source.load(n)?,
    };
    let w = match &a.input2 {
        Some(p) => read_input(p)?,
        None => {
            let cfg = a.source.generator.config()?;
            generate(&cfg.with_seed(udinc::harness::partner_seed(cfg.seed)), n)?
        }
    };
    let sampling = MainTermSampling {
        samples: a.samples,
        seed: a.mc_seed,
    };
    let reports = slab_reports(&v, &w, lo, hi, &cps, sampling, exec)?;
    emit(a.out.as_deref(), out, |wr| {
        write_reports(&reports, a.format, wr)
    })
}

fn parse_seeds(text: &str) -> CliResult<Vec<u64>> {
    let bad = || Failure::config(format!("--seeds: expected a count or a list, got `{text}`"));
    if text.contains(',') {
        text.split(',')
            .map(|s| s.trim().parse().map_err(|_| bad()))
            .collect()
    } else {
        let k: u64 = text.trim().parse().map_err(|_| bad())?;
        Ok((0..k).collect())
    }
}

/// Builds the experiment config from `--config` and flag overrides.
fn sweep_config(a: &SweepArgs, default_region: Option<RegionSpec>) -> CliResult<ExperimentConfig> {
    let mut cfg = match &a.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::config(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str::<ExperimentConfig>(&text)
                .map_err(|e| Failure::config(format!("config: {e}")))?
        }
        None => {
            let region = a
                .region
                .or(default_region)
                .ok_or_else(|| Failure::config("--region is required"))?;
            let mut c = ExperimentConfig::new(
                GeneratorConfig::iid(2, 0),
                region,
                udinc::harness::default_checkpoints(),
                vec![0],
            );
            c.tolerance = DEFAULT_TOLERANCE;
            c
        }
    };
    if let Some(f) = a.family {
        let g = GeneratorArgs {
            family: f,
            dim: Some(a.dim.unwrap_or(cfg.generator.dim)),
            seed: 0,
            alpha: None,
            bases: None,
            side: a.side.unwrap_or(10),
            per_circle: None,
            scale: 0.25,
            clusters: 4,
            radius: 1e-3,
        };
        cfg.generator = g.config()?;
    } else if let Some(d) = a.dim {
        cfg.generator.dim = d;
    }
    if let Some(r) = a.region {
        cfg.region = r;
    }
    if let Some(c) = &a.checkpoints {
        cfg.checkpoints = c.clone();
    }
    if let Some(s) = &a.seeds {
        cfg.seeds = parse_seeds(s)?;
    }
    if a.gamma.is_some() {
        cfg.gamma_assumed = a.gamma;
    }
    if let Some(e) = a.eps {
        cfg.epsilon = e;
    }
    if let Some(t) = a.tolerance {
        cfg.tolerance = t;
    }
    if let Some(s) = a.samples {
        cfg.main_term_samples = s;
    }
    if let Some(q) = a.quantum {
        cfg.quantum = q;
    }
    if let Some(p) = &a.out {
        cfg.output.csv = Some(p.display().to_string());
    }
    if let Some(p) = &a.fit_out {
        cfg.output.json = Some(p.display().to_string());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn warn_dropped(fit: &ScalingFit, err: &mut dyn Write) -> CliResult {
    for n in &fit.dropped {
        writeln!(
            err,
            "warning: {} is zero at N = {n}; checkpoint left out of the fit",
            fit.statistic
        )?;
    }
    Ok(())
}

/// Writes the CSV to the configured file and the fit JSON to its file or
/// standard output; `--format csv` sends the CSV to standard output instead.
fn emit_sweep(
    cfg: &ExperimentConfig,
    format: Format,
    fit: &ScalingFit,
    write_csv: &dyn Fn(&mut dyn Write) -> CliResult,
    out: &mut dyn Write,
) -> CliResult {
    if let Some(p) = &cfg.output.csv {
        emit(Some(Path::new(p)), out, write_csv)?;
    }
    if let Some(p) = &cfg.output.json {
        emit(Some(Path::new(p)), out, |w| write_json(fit, w))?;
    }
    match format {
        Format::Csv if cfg.output.csv.is_none() => write_csv(out),
        Format::Json if cfg.output.json.is_none() => write_json(fit, out),
        _ => Ok(()),
    }
}

fn cmd_scaling(a: SweepArgs, exec: Exec, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let cfg = sweep_config(&a, None)?;
    let sweep = scaling_sweep(&cfg, exec)?;
    warn_dropped(&sweep.fit, err)?;
    emit_sweep(
        &cfg,
        a.format,
        &sweep.fit,
        &|w| Ok(sweep.write_csv(w)?),
        out,
    )
}

fn cmd_support(
    a: SweepArgs,
    statistic: SupportStatistic,
    exec: Exec,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult {
    // The region is irrelevant to support counts; any valid one will do.
    let cfg = sweep_config(&a, Some(RegionSpec::annulus(0.25, 0.3)?))?;
    let sweep = support_sweep(&cfg, statistic, exec)?;
    warn_dropped(&sweep.fit, err)?;
    emit_sweep(
        &cfg,
        a.format,
        &sweep.fit,
        &|w| Ok(sweep.write_csv(w)?),
        out,
    )
}

fn cmd_energy(a: EnergyArgs, exec: Exec, out: &mut dyn Write) -> CliResult {
    let known = a.source.input.as_ref().map(|p| read_input(p)).transpose()?;
    let seq = match known {
        Some(s) => s,
        None => a
            .source
            .load(a.n.ok_or_else(|| Failure::config("give --n or --in"))?)?,
    };
    let n = a.n.unwrap_or(seq.len());
    let metric = match a.metric {
        MetricName::Torus => Metric::Torus,
        MetricName::Euclidean => Metric::Euclidean,
    };
    let e = discrete_energy(&seq, a.s, n, metric, exec)?;
    #[derive(Serialize)]
    struct Record {
        #[serde(serialize_with = "serialize_f64")]
        s: f64,
        #[serde(rename = "N")]
        n: usize,
        metric: Metric,
        #[serde(flatten)]
        energy: udinc::incidence::Energy,
    }
    write_json(
        &Record {
            s: a.s,
            n,
            metric,
            energy: e,
        },
        out,
    )
}

fn cmd_fourier(a: FourierArgs, out: &mut dyn Write) -> CliResult {
    if a.kind == CheckKind::Mollifier {
        return mollifier_check(&a, out);
    }
    let kind = match a.kind {
        CheckKind::Annulus => TransformKind::AnnulusIndicator { a: a.a, b: a.b },
        CheckKind::Ball => TransformKind::BallIndicator { r: a.r },
        _ => TransformKind::SphereMeasure { r: a.r },
    };
    let t = RadialTransform::new(kind, a.dim)?;
    let fit = decay_fit(&t, a.kmin, a.kmax)?;
    if let Some(p) = &a.out {
        emit(Some(p), out, |w| Ok(fit.write_csv(w)?))?;
    }
    write_json(&fit, out)
}

fn mollifier_check(a: &FourierArgs, out: &mut dyn Write) -> CliResult {
    use rand::Rng;
    let m = Mollifier::new(a.dim, a.delta)?;
    if a.truncation == 0 {
        return Err(Failure::config("--truncation must be at least 1"));
    }
    let table = SeriesTable::new(&m, a.truncation);
    let mut rng = udinc::rng::seeded_rng(a.seed, 0);
    let mut worst = 0.0f64;
    let mut rows = Vec::with_capacity(a.points);
    for _ in 0..a.points {
        let x: Vec<f64> = (0..a.dim).map(|_| rng.random::<f64>()).collect();
        let p = udinc::Point::new(x)?;
        let spatial = m.value(&p, EvalMode::Spatial)?;
        let series = m.series_with(&table, p.coords());
        worst = worst.max((spatial - series).abs());
        rows.push((p, spatial, series));
    }
    if let Some(path) = &a.out {
        emit(Some(path), out, |w| {
            let header: Vec<String> = (1..=a.dim).map(|i| format!("x_{i}")).collect();
            writeln!(w, "{},spatial,series,abs_diff", header.join(","))?;
            for (p, s, f) in &rows {
                let xs: Vec<String> = p.coords().iter().map(|c| fmt17(*c)).collect();
                writeln!(
                    w,
                    "{},{},{},{}",
                    xs.join(","),
                    fmt17(*s),
                    fmt17(*f),
                    fmt17((s - f).abs())
                )?;
            }
            Ok(())
        })?;
    }
    #[derive(Serialize)]
    struct Summary {
        dim: usize,
        #[serde(serialize_with = "serialize_f64")]
        delta: f64,
        truncation: usize,
        points: usize,
        #[serde(serialize_with = "serialize_f64")]
        max_abs_diff: f64,
        #[serde(serialize_with = "serialize_f64")]
        floor: f64,
    }
    write_json(
        &Summary {
            dim: a.dim,
            delta: a.delta,
            truncation: a.truncation,
            points: a.points,
            max_abs_diff: worst,
            floor: m.floor(),
        },
        out,
    )
}

fn cmd_adversarial(a: AdversarialArgs, exec: Exec, out: &mut dyn Write) -> CliResult {
    let seq = match &a.input {
        Some(p) => read_input(p)?,
        None => generate(&GeneratorConfig::iid(1, a.seed), a.n)?,
    };
    if seq.dim() != 1 {
        return Err(Failure::config(
            "adversarial search needs one-dimensional points",
        ));
    }
    if !(a.eps > 0.0 && a.eps < 1.0) {
        return Err(Failure::config("--eps must lie in (0, 1)"));
    }
    let qmax = a
        .qmax
        .unwrap_or_else(|| a.eps.powi(-(seq.len() as i32)).ceil().min(u64::MAX as f64) as u64);
    let r = adversarial_frequency(seq.flat(), a.eps, qmax, a.budget, exec)?;
    write_json(&r, out)
}

fn cmd_lenz(a: LenzArgs, exec: Exec, out: &mut dyn Write) -> CliResult {
    #[derive(Serialize)]
    struct Row {
        per_circle: usize,
        n: usize,
        #[serde(serialize_with = "serialize_f64")]
        t: f64,
        count: u64,
        half_n_squared: usize,
    }
    let t = lenz_cross_distance(a.scale);
    let rows = a
        .per_circle
        .iter()
        .map(|&m| {
            let cfg = GeneratorConfig::new(
                Family::Lenz {
                    per_circle: Some(m),
                    scale: a.scale,
                },
                4,
                0,
            );
            let seq = generate(&cfg, 2 * m)?;
            Ok(Row {
                per_circle: m,
                n: 2 * m,
                t,
                count: exact_distance_count(&seq, t, 2 * m, a.eta, exec)?,
                half_n_squared: 2 * m * m,
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    write_json(&rows, out)
}
