//! `iqp-forge`: generate X-programs, extract their keys, forge and verify
//! samples, simulate small instances, and benchmark the attack.
//!
//! Exit status: 0 on success or a passing verdict, 1 when verification fails
//! or the attack gives up, 2 on usage, parse, or I/O errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use iqp_forge::bench::{run_bench, time_summaries, BenchConfig, BenchRecord, CSV_HEADER};
use iqp_forge::rng::seeded;
use iqp_forge::xprogram::{deserialize_samples, serialize_samples};
use iqp_forge::{
    baseline_sample, decode_key, deserialize, encode_key, extract_key, forge_samples, generate, quantum_sample,
    serialize, verify, AttackConfig, BitVec, GenerationConfig, SecretKey, VerifierPolicy, XProgram,
};

#[derive(Parser)]
#[command(name = "iqp-forge", version, about = "Break and exercise IQP X-program quantum tests")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an X-program with a planted secret.
    Gen(GenArgs),
    /// Recover the secret vector from an X-program.
    Attack(AttackArgs),
    /// Emit samples with the honest prover's bias using a known key.
    Forge(SampleArgs),
    /// Emit samples from the baseline classical strategy.
    Baseline(SampleArgs),
    /// Emit exact samples of the quantum output distribution (small programs only).
    Simulate(SampleArgs),
    /// Check a sample file against a key.
    Verify(VerifyArgs),
    /// Attack many generated programs and write timing records as CSV.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    q: usize,
    #[arg(long)]
    n: usize,
    /// Decoy rows orthogonal to the secret [default: q]
    #[arg(long)]
    extra_rows: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    key_out: PathBuf,
}

#[derive(Args)]
struct AttackArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    key_out: PathBuf,
    #[arg(long, default_value_t = 64)]
    max_iters: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write one row of statistics per iteration
    #[arg(long)]
    stats_csv: Option<PathBuf>,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Key file (forge only)
    #[arg(long)]
    key: Option<PathBuf>,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    key: PathBuf,
    /// Sample file
    #[arg(long)]
    samples: PathBuf,
    /// Program file; fixes the key length (otherwise taken from the samples)
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long)]
    threshold: Option<f64>,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated code lengths
    #[arg(long, value_delimiter = ',', required = true)]
    q_list: Vec<usize>,
    #[arg(long, default_value_t = 50)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path; stdout when absent
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Columns beyond (q+1)/2
    #[arg(long, default_value_t = 1)]
    extra_cols: usize,
    #[arg(long, default_value_t = 64)]
    max_iters: usize,
}

fn read_program(path: &Path) -> Result<XProgram> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    deserialize(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_key(path: &Path, n: usize) -> Result<SecretKey> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    decode_key(&text, n).with_context(|| format!("decoding key {}", path.display()))
}

fn write_key(path: &Path, key: &SecretKey) -> Result<()> {
    fs::write(path, format!("{}\n", encode_key(key))).with_context(|| format!("writing {}", path.display()))
}

fn write_samples(path: &Path, samples: &[BitVec]) -> Result<()> {
    fs::write(path, serialize_samples(samples)).with_context(|| format!("writing {}", path.display()))
}

fn cmd_gen(args: GenArgs) -> Result<ExitCode> {
    let mut cfg = GenerationConfig::new(args.q, args.n, args.seed);
    if let Some(extra) = args.extra_rows {
        cfg.extra_rows = extra;
    }
    let (prog, key) = generate(&cfg)?;
    fs::write(&args.out, serialize(&prog)).with_context(|| format!("writing {}", args.out.display()))?;
    write_key(&args.key_out, &key)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_attack(args: AttackArgs) -> Result<ExitCode> {
    let prog = read_program(&args.input)?;
    let cfg = AttackConfig {
        max_iterations: args.max_iters,
        seed: args.seed,
        ..AttackConfig::default()
    };
    let report = extract_key(&prog, &cfg);

    if let Some(path) = &args.stats_csv {
        let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
        w.write_record(["iteration", "rank", "kernel_dim", "candidates", "feasible", "d_was_good"])?;
        for (i, s) in report.iterations.iter().enumerate() {
            w.write_record([
                (i + 1).to_string(),
                s.rank_of_m.to_string(),
                s.kernel_dim.to_string(),
                s.candidates_checked.to_string(),
                s.feasible.to_string(),
                s.d_was_good.to_string(),
            ])?;
        }
        w.flush()?;
    }

    let deficit = report
        .winning_iteration()
        .map_or_else(|| "none".to_string(), |s| s.kernel_dim.to_string());
    println!(
        "iterations={} candidates={} rank_deficit={} time={}",
        report.iterations.len(),
        report.total_candidates_checked,
        deficit,
        report.wall_time.as_secs_f64()
    );
    match &report.key {
        Some(key) => {
            if report.ambiguous {
                eprintln!("warning: more than one candidate passed the code test; kept the first");
            }
            write_key(&args.key_out, key)?;
            Ok(ExitCode::SUCCESS)
        }
        None => {
            eprintln!("no key found after {} iterations", report.iterations.len());
            Ok(ExitCode::from(1))
        }
    }
}

enum Sampler {
    Forge,
    Baseline,
    Simulate,
}

fn cmd_samples(args: SampleArgs, sampler: Sampler) -> Result<ExitCode> {
    let prog = read_program(&args.input)?;
    let mut rng = seeded(args.seed);
    let samples = match sampler {
        Sampler::Forge => {
            let Some(key_path) = &args.key else {
                bail!("forge requires --key");
            };
            let key = read_key(key_path, prog.qubits())?;
            forge_samples(&prog, &key, args.samples, &mut rng)?
        }
        Sampler::Baseline => (0..args.samples).map(|_| baseline_sample(&prog, &mut rng)).collect(),
        Sampler::Simulate => quantum_sample(&prog, args.samples, &mut rng)?,
    };
    write_samples(&args.out, &samples)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode> {
    let text = fs::read_to_string(&args.samples).with_context(|| format!("reading {}", args.samples.display()))?;
    let n = match &args.input {
        Some(path) => read_program(path)?.qubits(),
        None => text
            .lines()
            .find(|l| !l.is_empty())
            .map(str::len)
            .context("sample file is empty")?,
    };
    let samples = deserialize_samples(&text, n).with_context(|| format!("parsing {}", args.samples.display()))?;
    let key = read_key(&args.key, n)?;
    let mut policy = VerifierPolicy::default();
    if let Some(t) = args.threshold {
        policy = VerifierPolicy::new(policy.sample_count, t)?;
    }
    let verdict = verify(&key, &samples, &policy)?;
    println!("{verdict}");
    Ok(if verdict.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_bench(args: BenchArgs) -> Result<ExitCode> {
    let cfg = BenchConfig {
        q_list: args.q_list,
        reps: args.reps,
        seed: args.seed,
        extra_cols: args.extra_cols,
        jobs: args.jobs,
        attack: AttackConfig {
            max_iterations: args.max_iters,
            ..AttackConfig::default()
        },
    };
    let outcome = run_bench(&cfg)?;
    for f in &outcome.failures {
        eprintln!("instance q={} rep={} failed: {}", f.q, f.rep, f.reason);
    }

    let out: Box<dyn Write> = match &args.csv {
        Some(path) => Box::new(fs::File::create(path).with_context(|| format!("writing {}", path.display()))?),
        None => Box::new(std::io::stdout()),
    };
    write_records(out, &outcome.records)?;

    let mut summary: Box<dyn Write> = if args.csv.is_some() {
        Box::new(std::io::stdout())
    } else {
        Box::new(std::io::stderr())
    };
    for (q, n, s) in time_summaries(&outcome.records) {
        writeln!(
            summary,
            "q={q} n={n} count={} mean={:.6} q1={:.6} q3={:.6}",
            s.count, s.mean, s.q1, s.q3
        )?;
    }
    Ok(ExitCode::SUCCESS)
}

fn write_records(out: Box<dyn Write>, records: &[BenchRecord]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER.split(','))?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Attack(a) => cmd_attack(a),
        Command::Forge(a) => cmd_samples(a, Sampler::Forge),
        Command::Baseline(a) => cmd_samples(a, Sampler::Baseline),
        Command::Simulate(a) => cmd_samples(a, Sampler::Simulate),
        Command::Verify(a) => cmd_verify(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
