use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use qfloor::baselines::build_swap_test_circuit;
use qfloor::encoder::{synthesize_encoding, synthesize_entangling};
use qfloor::eval::{
    accuracy_vs_n, complexity_csv, complexity_report, evaluate, match_sample, sweep_csv,
    EvalSettings, Mode,
};
use qfloor::neuron::build_neuron_circuit;
use qfloor::pipeline::{
    build_db, ingest, select_aps, synth, PipelineConfig, SampleSet, SplitConfig,
};
use qfloor::{canonicalize, Circuit, Method, SignVector};

/// Environment variable naming a root directory for relative `--out` paths.
const OUT_ROOT_ENV: &str = "QFLOOR_OUT_ROOT";

#[derive(Parser)]
#[command(name = "qfloor", version, about = "Quantum binary-neuron floor localization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Binarize a survey CSV into a fingerprint database and a test set.
    Ingest(IngestArgs),
    /// Generate a synthetic multi-building survey CSV.
    Synth(SynthArgs),
    /// Print the U_Φ, U_Ψ, neuron or swap-test circuit for sign vectors.
    Encode(EncodeArgs),
    /// Match one online sample against a fingerprint database.
    Match(MatchArgs),
    /// Evaluate methods over a test set and write reports.
    Evaluate(EvaluateArgs),
    /// Print the classical vs quantum cost table.
    Resources(ResourcesArgs),
}

#[derive(Args, Serialize)]
struct IngestArgs {
    /// Survey CSV.
    #[arg(long)]
    data: PathBuf,
    /// `key = value` config file; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Number of access points to keep (power of two).
    #[arg(long, value_parser = parse_power_of_two)]
    n: Option<usize>,
    /// Training fraction in (0, 1).
    #[arg(long)]
    split: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Readings weaker than this count as not heard.
    #[arg(long)]
    threshold: Option<f64>,
    /// Not-detected sentinel value.
    #[arg(long)]
    sentinel: Option<f64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Serialize)]
struct SynthArgs {
    #[arg(long, default_value_t = 4)]
    buildings: usize,
    #[arg(long, default_value_t = 4)]
    floors: usize,
    #[arg(long, default_value_t = 8)]
    aps_per_floor: usize,
    /// Hearability radius in floors.
    #[arg(long, default_value_t = 1)]
    radius: usize,
    /// Probability of flipping each heard/not-heard outcome.
    #[arg(long, default_value_t = 0.05)]
    noise: f64,
    #[arg(long, default_value_t = 60)]
    samples_per_floor: usize,
    #[arg(long, default_value_t = 10)]
    locations_per_floor: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EncodeArgs {
    /// Fingerprint vector, e.g. `1,1,1,-1`.
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<String>,
    /// Online sample vector.
    #[arg(long, allow_hyphen_values = true)]
    psi: Option<String>,
    /// Take Φ from this fingerprint database...
    #[arg(long)]
    db: Option<PathBuf>,
    /// ...at this sample index.
    #[arg(long, requires = "db")]
    index: Option<usize>,
    /// Full neuron circuit (needs both vectors).
    #[arg(long)]
    full: bool,
    /// Swap-test circuit (needs both vectors).
    #[arg(long, conflicts_with = "full")]
    swap_test: bool,
    /// Write to a file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MatchArgs {
    #[arg(long)]
    db: PathBuf,
    /// Online sample as a vector literal.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "test")]
    psi: Option<String>,
    /// Or take the sample from a test file...
    #[arg(long, requires = "index")]
    test: Option<PathBuf>,
    /// ...at this index.
    #[arg(long)]
    index: Option<usize>,
    #[arg(long, default_value = "quantum", value_parser = parse_method)]
    method: Method,
    #[arg(long, default_value = "exact", value_parser = parse_mode)]
    mode: Mode,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long)]
    db: PathBuf,
    #[arg(long)]
    test: PathBuf,
    /// classical, classical-abs, quantum, swap-test, random (repeatable or
    /// comma-separated).
    #[arg(long, value_delimiter = ',', default_value = "quantum", value_parser = parse_method)]
    method: Vec<Method>,
    /// `exact` or `shots:<k>`.
    #[arg(long, default_value = "exact", value_parser = parse_mode)]
    mode: Mode,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all available).
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    out: PathBuf,
    /// Accuracy sweep over these access-point counts; needs `--data`.
    #[arg(long, value_delimiter = ',', value_parser = parse_power_of_two, requires = "data")]
    sweep_n: Vec<usize>,
    /// Survey CSV for `--sweep-n`.
    #[arg(long)]
    data: Option<PathBuf>,
    /// Config used to ingest `--data`.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Also write the cost table for N = 4..1024 at this database's M.
    #[arg(long)]
    resources: bool,
}

#[derive(Args)]
struct ResourcesArgs {
    #[arg(long, value_delimiter = ',', value_parser = parse_power_of_two,
          default_value = "4,8,16,32,64,128,256,512,1024")]
    n: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    m: u64,
    /// Add simulator wall time per evaluation (not quantum runtime).
    #[arg(long)]
    measure: bool,
    /// Write CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_power_of_two(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("`{s}`: {e}"))?;
    if n < 2 || !n.is_power_of_two() {
        return Err(format!("{n} is not a power of two >= 2"));
    }
    Ok(n)
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: qfloor::Error| e.to_string())
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: qfloor::Error| e.to_string())
}

/// Input problems exit with 2, failures while evaluating with 1.
enum CliError {
    Input(String),
    Eval(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Eval(_) => 1,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn input<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

fn failed<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Eval(e.to_string())
}

/// Everything that determines a run's outputs. Written as `manifest.json`
/// next to them; wall-clock data goes to `run.log` instead.
#[derive(Serialize)]
struct RunManifest<'a> {
    tool_version: &'static str,
    command: &'static str,
    dataset: Option<String>,
    synthetic: Option<&'a synth::SynthConfig>,
    config: Option<&'a PipelineConfig>,
    db: Option<String>,
    test: Option<String>,
    methods: Vec<Method>,
    mode: Option<String>,
    seed: Option<u64>,
    sweep_n: Vec<usize>,
    output_dir: String,
}

impl<'a> RunManifest<'a> {
    fn new(command: &'static str, out: &Path) -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION"),
            command,
            dataset: None,
            synthetic: None,
            config: None,
            db: None,
            test: None,
            methods: Vec::new(),
            mode: None,
            seed: None,
            sweep_n: Vec::new(),
            output_dir: out.display().to_string(),
        }
    }
}

fn resolve_out(out: &Path) -> PathBuf {
    match std::env::var_os(OUT_ROOT_ENV) {
        Some(root) if out.is_relative() => Path::new(&root).join(out),
        _ => out.to_path_buf(),
    }
}

fn prepare_dir(out: &Path) -> CliResult<()> {
    fs::create_dir_all(out).map_err(|e| input(format!("{}: {e}", out.display())))
}

fn write(path: &Path, contents: impl AsRef<[u8]>) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| failed(format!("{}: {e}", path.display())))
}

fn finish(out: &Path, manifest: &RunManifest, started: Instant) -> CliResult<()> {
    let json = serde_json::to_string_pretty(manifest).map_err(failed)?;
    write(&out.join("manifest.json"), json + "\n")?;
    let now = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs());
    write(
        &out.join("run.log"),
        format!(
            "finished_unix={now}\nelapsed_s={:.3}\n",
            started.elapsed().as_secs_f64()
        ),
    )
}

fn load_config(path: Option<&Path>) -> CliResult<PipelineConfig> {
    match path {
        Some(p) => PipelineConfig::load(p).map_err(input),
        None => Ok(PipelineConfig::default()),
    }
}

fn cmd_ingest(args: IngestArgs) -> CliResult<()> {
    let started = Instant::now();
    let mut cfg = load_config(args.config.as_deref())?;
    if let Some(n) = args.n {
        cfg.n_target = n;
    }
    if let Some(f) = args.split {
        cfg.train_fraction = f;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(t) = args.threshold {
        cfg.threshold_dbm = Some(t);
    }
    if let Some(s) = args.sentinel {
        cfg.sentinel_value = s;
    }
    cfg.validate().map_err(input)?;

    let records = ingest(&args.data, &cfg).map_err(input)?;
    let aps = select_aps(&records, cfg.n_target).map_err(input)?;
    let split = SplitConfig {
        train_fraction: cfg.train_fraction,
        seed: cfg.seed,
    };
    let built = build_db(&records, &aps, split, cfg.threshold_dbm).map_err(input)?;
    for w in &built.warnings {
        eprintln!("warning: {w}");
    }

    let out = resolve_out(&args.out);
    prepare_dir(&out)?;
    built.db.save(out.join("db.fp")).map_err(failed)?;
    built.test.save(out.join("test.fp")).map_err(failed)?;

    println!("records {}", records.len());
    println!("N {}", built.db.n());
    println!("M {}", built.db.m());
    println!("test {}", built.test.m());
    println!("floor histogram (fingerprints):");
    for (floor, count) in built.db.floor_histogram() {
        println!("  floor {floor}: {count}");
    }

    let mut manifest = RunManifest::new("ingest", &out);
    manifest.dataset = Some(args.data.display().to_string());
    manifest.config = Some(&cfg);
    manifest.seed = Some(cfg.seed);
    finish(&out, &manifest, started)
}

fn cmd_synth(args: SynthArgs) -> CliResult<()> {
    let started = Instant::now();
    let cfg = synth::SynthConfig {
        buildings: args.buildings,
        floors: args.floors,
        aps_per_floor: args.aps_per_floor,
        hearability_radius: args.radius,
        noise_flip_prob: args.noise,
        samples_per_floor: args.samples_per_floor,
        locations_per_floor: args.locations_per_floor,
        seed: args.seed,
    };
    let records = synth::generate(&cfg).map_err(input)?;
    let out = resolve_out(&args.out);
    prepare_dir(&out)?;
    let path = out.join("survey.csv");
    let file = fs::File::create(&path).map_err(|e| failed(format!("{}: {e}", path.display())))?;
    let sentinel = PipelineConfig::default().sentinel_value;
    synth::write_csv(&records, &cfg.ap_names(), sentinel, std::io::BufWriter::new(file))
        .map_err(failed)?;
    println!("{} records, {} access points -> {}", records.len(), cfg.total_aps(), path.display());

    let mut manifest = RunManifest::new("synth", &out);
    manifest.synthetic = Some(&cfg);
    manifest.seed = Some(cfg.seed);
    finish(&out, &manifest, started)
}

fn parse_vector(literal: &str, what: &str) -> CliResult<SignVector> {
    literal
        .parse::<SignVector>()
        .map_err(|e| input(format!("--{what}: {e}")))
}

/// Strips a global -1, reporting it on stderr.
fn canonical(v: SignVector, what: &str) -> SignVector {
    let (v, sign) = canonicalize(&v);
    if sign < 0 {
        eprintln!("note: {what} negated to make its first entry +1 (global sign -1)");
    }
    v
}

fn cmd_encode(args: EncodeArgs) -> CliResult<()> {
    let phi = match (&args.phi, &args.db) {
        (Some(_), Some(_)) => return Err(input("give either --phi or --db, not both")),
        (Some(lit), None) => Some(parse_vector(lit, "phi")?),
        (None, Some(db)) => {
            let db = SampleSet::load(db).map_err(input)?;
            let index = args.index.unwrap_or(0);
            let sample = db
                .samples
                .get(index)
                .ok_or_else(|| input(format!("--index {index} out of range (M = {})", db.m())))?;
            Some(sample.vector.clone())
        }
        (None, None) => None,
    };
    let psi = args.psi.as_deref().map(|l| parse_vector(l, "psi")).transpose()?;
    let phi = phi.map(|v| canonical(v, "phi"));
    let psi = psi.map(|v| canonical(v, "psi"));

    let circuits: Vec<Circuit> = match (phi, psi) {
        (Some(phi), Some(psi)) if args.full => vec![build_neuron_circuit(&phi, &psi).map_err(input)?],
        (Some(phi), Some(psi)) if args.swap_test => {
            vec![build_swap_test_circuit(&phi, &psi).map_err(input)?]
        }
        _ if args.full || args.swap_test => {
            return Err(input("--full and --swap-test need both a fingerprint and --psi"))
        }
        (Some(phi), Some(psi)) => vec![
            synthesize_encoding(&phi).map_err(input)?,
            synthesize_entangling(&psi).map_err(input)?,
        ],
        (Some(phi), None) => vec![synthesize_encoding(&phi).map_err(input)?],
        (None, Some(psi)) => vec![synthesize_entangling(&psi).map_err(input)?],
        (None, None) => return Err(input("nothing to encode: pass --phi, --psi or --db")),
    };
    let text = circuits
        .iter()
        .map(Circuit::to_string)
        .collect::<Vec<_>>()
        .join("\n");
    match args.out {
        Some(path) => write(&resolve_out(&path), text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_match(args: MatchArgs) -> CliResult<()> {
    let db = SampleSet::load(&args.db).map_err(input)?;
    let (psi, true_floor) = match (&args.psi, &args.test) {
        (Some(lit), _) => (parse_vector(lit, "psi")?, None),
        (None, Some(path)) => {
            let test = SampleSet::load(path).map_err(input)?;
            db.check_compatible(&test).map_err(input)?;
            let index = args.index.unwrap_or(0);
            let s = test
                .samples
                .get(index)
                .ok_or_else(|| input(format!("--index {index} out of range (size {})", test.m())))?;
            (s.vector.clone(), Some(s.floor))
        }
        (None, None) => return Err(input("pass --psi or --test with --index")),
    };
    if psi.len() != db.n() {
        return Err(input(format!(
            "sample has {} entries but the database has N = {}",
            psi.len(),
            db.n()
        )));
    }
    let mut result = match_sample(
        &db,
        &psi,
        args.method,
        args.mode,
        args.seed,
        args.index.unwrap_or(0),
    )
    .map_err(failed)?;
    result.true_floor = true_floor;
    println!("{}", serde_json::to_string_pretty(&result).map_err(failed)?);
    Ok(())
}

fn cmd_evaluate(args: EvaluateArgs) -> CliResult<()> {
    let started = Instant::now();
    let db = SampleSet::load(&args.db).map_err(input)?;
    let test = SampleSet::load(&args.test).map_err(input)?;
    db.check_compatible(&test).map_err(input)?;
    if args.jobs == Some(0) {
        return Err(input("--jobs must be at least 1"));
    }
    let sweep_records = match &args.data {
        Some(path) if !args.sweep_n.is_empty() => {
            let cfg = load_config(args.config.as_deref())?;
            Some((ingest(path, &cfg).map_err(input)?, cfg))
        }
        _ => None,
    };

    let out = resolve_out(&args.out);
    prepare_dir(&out)?;
    let mut methods = args.method.clone();
    methods.dedup();
    let mut summary: BTreeMap<&str, f64> = BTreeMap::new();
    for &method in &methods {
        let settings = EvalSettings {
            method,
            mode: args.mode,
            seed: args.seed,
        };
        let report = evaluate(&db, &test, settings, args.jobs).map_err(failed)?;
        let json = serde_json::to_string_pretty(&report).map_err(failed)?;
        write(&out.join(format!("report_{method}.json")), json + "\n")?;
        write(&out.join(format!("cdf_{method}.csv")), report.cdf_csv())?;
        summary.insert(method.name(), report.accuracy);
        println!(
            "{method}: accuracy {:.4} over {} samples (N={}, M={}, qubits {}, gates {})",
            report.accuracy,
            report.test_size,
            report.n,
            report.m,
            report.qubits_used,
            report.total_gate_count
        );

        if let Some((records, cfg)) = &sweep_records {
            let split = SplitConfig {
                train_fraction: cfg.train_fraction,
                seed: cfg.seed,
            };
            let rows = accuracy_vs_n(
                records,
                &args.sweep_n,
                settings,
                split,
                cfg.threshold_dbm,
                args.jobs,
            )
            .map_err(failed)?;
            write(&out.join(format!("sweep_{method}.csv")), sweep_csv(&rows))?;
        }
    }
    if args.resources {
        let ns: Vec<usize> = (2..=10).map(|k| 1usize << k).collect();
        let rows = complexity_report(&ns, db.m() as u64, false).map_err(failed)?;
        write(&out.join("resources.csv"), complexity_csv(&rows))?;
    }

    let mut manifest = RunManifest::new("evaluate", &out);
    manifest.db = Some(args.db.display().to_string());
    manifest.test = Some(args.test.display().to_string());
    manifest.dataset = args.data.as_ref().map(|p| p.display().to_string());
    manifest.methods = methods;
    manifest.mode = Some(args.mode.to_string());
    manifest.seed = Some(args.seed);
    manifest.sweep_n = args.sweep_n.clone();
    let cfg;
    if let Some((_, c)) = &sweep_records {
        cfg = c.clone();
        manifest.config = Some(&cfg);
    }
    finish(&out, &manifest, started)
}

fn cmd_resources(args: ResourcesArgs) -> CliResult<()> {
    let rows = complexity_report(&args.n, args.m, args.measure).map_err(failed)?;
    let csv = complexity_csv(&rows);
    match args.out {
        Some(path) => write(&resolve_out(&path), csv),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Ingest(a) => cmd_ingest(a),
        Command::Synth(a) => cmd_synth(a),
        Command::Encode(a) => cmd_encode(a),
        Command::Match(a) => cmd_match(a),
        Command::Evaluate(a) => cmd_evaluate(a),
        Command::Resources(a) => cmd_resources(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (CliError::Input(msg) | CliError::Eval(msg)) = &e;
            eprintln!("error: {msg}");
            ExitCode::from(e.code())
        }
    }
}
