//! `icsaead`: selftest, latency campaigns and file seal/open.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use icsaead::envelope::{self, read_key_file};
use icsaead::harness::{
    build_campaign, environment_probe, peak_memory, run_benchmark_with, BudgetSpec, MonotonicClock, Report,
    RunConfig, DEFAULT_RUNS, DEFAULT_WARMUP,
};
use icsaead::selftest::run_selftest;
use icsaead::{EntropySource, Error, Key256, OsEntropy};

const EXIT_CODES: &str = "\
Exit codes:
  0  success
  1  selftest failure
  2  usage error
  3  malformed sealed message (shorter than 28 bytes)
  4  authentication failure (tag mismatch)
  5  environment error (entropy, unreadable or unwritable file, aborted campaign)
  6  invalid key file (must be exactly 32 bytes)";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Exit {
    Ok = 0,
    SelftestFailed = 1,
    Malformed = 3,
    AuthFailed = 4,
    Environment = 5,
    BadKey = 6,
}

impl From<Exit> for ExitCode {
    fn from(e: Exit) -> Self {
        ExitCode::from(e as u8)
    }
}

#[derive(Parser)]
#[command(name = "icsaead", version, about = "ChaCha20-Poly1305 latency measurement for ICS message budgets", after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check the cipher against embedded known-answer vectors.
    Selftest,
    /// Run timed seal/open campaigns and write one consolidated report.
    Bench {
        /// Payload sizes in bytes.
        #[arg(long, value_delimiter = ',', default_values_t = [28usize, 56, 112, 224])]
        sizes: Vec<usize>,
        /// Timed runs per size.
        #[arg(long, default_value_t = DEFAULT_RUNS)]
        runs: usize,
        /// Untimed warmup runs per size.
        #[arg(long, default_value_t = DEFAULT_WARMUP)]
        warmup: usize,
        /// Latency budget as name=limit_ms; repeatable. Defaults to GOOSE=4,
        /// IEC 60834-1=10 and SCADA=1000.
        #[arg(long = "budget", value_name = "NAME=LIMIT_MS")]
        budgets: Vec<BudgetSpec>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Report path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// 32-byte key file; a random key is used when omitted.
        #[arg(long)]
        key: Option<PathBuf>,
        /// Free-text prefix for campaign labels.
        #[arg(long)]
        label: Option<String>,
        #[arg(long)]
        skip_selftest: bool,
    },
    /// Seal a file into nonce || ciphertext || tag.
    Seal {
        #[arg(long)]
        key: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Authenticate and decrypt a sealed file.
    Open {
        #[arg(long)]
        key: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write 32 random bytes as a key file.
    Keygen {
        #[arg(long)]
        out: PathBuf,
    },
}

fn fail(code: Exit, msg: impl std::fmt::Display) -> Exit {
    eprintln!("icsaead: {msg}");
    code
}

fn error_exit(e: &Error) -> Exit {
    match e {
        Error::MalformedMessage { .. } => Exit::Malformed,
        Error::AuthenticationFailed => Exit::AuthFailed,
        Error::InvalidLength { what: "key", .. } => Exit::BadKey,
        _ => Exit::Environment,
    }
}

fn load_key(path: &Path) -> Result<Key256, Exit> {
    read_key_file(path).map_err(|e| match e {
        Error::InvalidLength { actual, .. } => {
            fail(Exit::BadKey, format!("{}: key file must be 32 bytes, got {actual}", path.display()))
        }
        e => fail(Exit::Environment, format!("{}: {e}", path.display())),
    })
}

fn read_input(path: &Path) -> Result<Vec<u8>, Exit> {
    std::fs::read(path).map_err(|e| fail(Exit::Environment, format!("{}: {e}", path.display())))
}

fn write_output(path: &Path, bytes: &[u8]) -> Result<(), Exit> {
    std::fs::write(path, bytes).map_err(|e| fail(Exit::Environment, format!("{}: {e}", path.display())))
}

fn random_key() -> icsaead::Result<Key256> {
    let mut k = [0u8; 32];
    OsEntropy.fill(&mut k)?;
    Ok(Key256::new(k))
}

fn selftest(verbose: bool) -> Exit {
    let results = run_selftest();
    let mut ok = true;
    for r in &results {
        if r.passed() {
            if verbose {
                println!("PASS  {}", r.name);
            }
            continue;
        }
        ok = false;
        match (&r.first_mismatch, &r.note) {
            (Some(off), _) => println!("FAIL  {} (first differing byte at offset {off})", r.name),
            (None, Some(note)) => println!("FAIL  {} ({note})", r.name),
            (None, None) => unreachable!(),
        }
    }
    if ok {
        if verbose {
            println!("selftest: {} vectors passed", results.len());
        }
        Exit::Ok
    } else {
        Exit::SelftestFailed
    }
}

#[allow(clippy::too_many_arguments)]
fn bench(
    sizes: Vec<usize>,
    runs: usize,
    warmup: usize,
    budgets: Vec<BudgetSpec>,
    format: Format,
    out: Option<PathBuf>,
    key: Option<PathBuf>,
    label: Option<String>,
    skip_selftest: bool,
) -> Exit {
    if sizes.is_empty() {
        return fail(Exit::Environment, "--sizes must list at least one payload size");
    }
    if runs == 0 {
        return fail(Exit::Environment, "--runs must be at least 1");
    }
    let budgets = if budgets.is_empty() { BudgetSpec::defaults() } else { budgets };

    // Open the destination first so an unwritable path fails before any timing.
    let mut sink: Box<dyn Write> = match &out {
        Some(p) => match File::create(p) {
            Ok(f) => Box::new(BufWriter::new(f)),
            Err(e) => return fail(Exit::Environment, format!("{}: {e}", p.display())),
        },
        None => Box::new(BufWriter::new(io::stdout())),
    };

    if !skip_selftest && selftest(false) != Exit::Ok {
        return fail(Exit::SelftestFailed, "selftest failed; refusing to measure a broken cipher");
    }

    let key = match key {
        Some(p) => match load_key(&p) {
            Ok(k) => k,
            Err(code) => return code,
        },
        None => match random_key() {
            Ok(k) => k,
            Err(e) => return fail(Exit::Environment, e),
        },
    };

    let mut report = Report::new(environment_probe());
    let mut stderr = io::stderr();
    let mut outcome = Exit::Ok;
    for size in sizes {
        let mut cfg = RunConfig::new(size).runs(runs).warmup(warmup);
        if let Some(prefix) = &label {
            cfg = cfg.label(format!("{prefix}/{size}B"));
        }
        let mut entropy = OsEntropy;
        match run_benchmark_with(&cfg, &key, &mut entropy, &mut MonotonicClock::new(), &mut stderr) {
            Ok(run) => report.campaigns.push(build_campaign(
                &cfg,
                &run.samples,
                run.nonce_collisions,
                &budgets,
                peak_memory(),
            )),
            Err(aborted) => {
                report.campaigns.push(build_campaign(
                    &cfg,
                    &aborted.samples,
                    aborted.nonce_collisions,
                    &budgets,
                    peak_memory(),
                ));
                report.mark_partial(format!("campaign {}: {}", cfg.label, aborted.error));
                outcome = fail(Exit::Environment, &aborted);
                break;
            }
        }
    }

    let written = match format {
        Format::Json => report.write_json(&mut sink).and_then(|_| writeln!(sink).map_err(Error::from)),
        Format::Csv => report.write_csv(&mut sink),
    }
    .and_then(|_| sink.flush().map_err(Error::from));
    if let Err(e) = written {
        return fail(Exit::Environment, format!("writing report: {e}"));
    }
    outcome
}

fn run(cli: Cli) -> Exit {
    match cli.command {
        Command::Selftest => selftest(true),
        Command::Bench { sizes, runs, warmup, budgets, format, out, key, label, skip_selftest } => {
            bench(sizes, runs, warmup, budgets, format, out, key, label, skip_selftest)
        }
        Command::Seal { key, input, out } => {
            let result = (|| {
                let key = load_key(&key)?;
                let plain = read_input(&input)?;
                let sealed = envelope::seal(&key, &plain, &mut OsEntropy).map_err(|e| fail(error_exit(&e), e))?;
                write_output(&out, &sealed)
            })();
            result.err().unwrap_or(Exit::Ok)
        }
        Command::Open { key, input, out } => {
            let result = (|| {
                let key = load_key(&key)?;
                let sealed = read_input(&input)?;
                let plain = envelope::open(&key, &sealed)
                    .map_err(|e| fail(error_exit(&e), format!("{}: {e}", input.display())))?;
                write_output(&out, &plain)
            })();
            result.err().unwrap_or(Exit::Ok)
        }
        Command::Keygen { out } => {
            match random_key() {
                Ok(k) => write_output(&out, k.as_bytes()).err().unwrap_or(Exit::Ok),
                Err(e) => fail(Exit::Environment, e),
            }
        }
    }
}

fn main() -> ExitCode {
    run(Cli::parse()).into()
}
