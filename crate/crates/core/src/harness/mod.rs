//! Phase-timed latency harness.
//!
//! One timed iteration reads the clock four times:
//!
//! ```text
//! t0  nonce  t1  seal  t2  parse+open  t3
//! random   = t1 - t0
//! encrypt  = t2 - t1
//! decrypt  = t3 - t2
//! functional = t3 - t0
//! ```
//!
//! Nothing is written anywhere between `t0` and `t3`; samples go into a
//! preallocated buffer and progress is only reported once the loop ends.

mod budget;
mod probe;
mod report;
mod stats;

use std::hint::black_box;
use std::io::Write;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::envelope::{generate_nonce, open_message, seal_with_nonce, EntropySource, SealedMessage};
use crate::error::{Error, Result};
use crate::types::{Key256, Nonce96};

pub use budget::{budget_fraction, budget_verdict, BudgetSpec, Statistic, Verdict};
pub use probe::{environment_probe, measure_clock_resolution, peak_memory, EnvironmentReport};
pub use report::{
    build_campaign, CampaignReport, ConfigEcho, Report, BudgetVerdicts, CSV_HEADER,
};
pub use stats::{filter_invalid, nearest_rank, summarize, PhaseStats, StatsSummary};

pub const DEFAULT_RUNS: usize = 100_000;
pub const DEFAULT_WARMUP: usize = 1_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Functional,
    Random,
    Encryption,
    Decryption,
}

impl Phase {
    pub const ALL: [Phase; 4] = [Phase::Functional, Phase::Random, Phase::Encryption, Phase::Decryption];

    pub fn name(self) -> &'static str {
        match self {
            Phase::Functional => "functional",
            Phase::Random => "random",
            Phase::Encryption => "encryption",
            Phase::Decryption => "decryption",
        }
    }
}

impl std::fmt::Display for Phase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Durations of one iteration in nanoseconds. Signed: a misbehaving clock
/// can yield negatives, which are filtered out, never clamped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PhaseSample {
    pub random_ns: i64,
    pub encrypt_ns: i64,
    pub decrypt_ns: i64,
    pub functional_ns: i64,
}

impl PhaseSample {
    pub fn is_valid(&self) -> bool {
        self.random_ns >= 0 && self.encrypt_ns >= 0 && self.decrypt_ns >= 0 && self.functional_ns >= 0
    }

    pub fn get(&self, phase: Phase) -> i64 {
        match phase {
            Phase::Functional => self.functional_ns,
            Phase::Random => self.random_ns,
            Phase::Encryption => self.encrypt_ns,
            Phase::Decryption => self.decrypt_ns,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub payload_size: usize,
    pub runs: usize,
    pub warmup_runs: usize,
    pub label: String,
}

impl RunConfig {
    pub fn new(payload_size: usize) -> Self {
        Self {
            payload_size,
            runs: DEFAULT_RUNS,
            warmup_runs: DEFAULT_WARMUP,
            label: format!("{payload_size}B"),
        }
    }

    pub fn runs(mut self, runs: usize) -> Self {
        self.runs = runs;
        self
    }

    pub fn warmup(mut self, warmup_runs: usize) -> Self {
        self.warmup_runs = warmup_runs;
        self
    }

    pub fn label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::InvalidConfig("runs must be at least 1".into()));
        }
        Ok(())
    }
}

/// Timestamp source in nanoseconds. Must be monotonic for real campaigns.
pub trait Clock {
    fn now_ns(&mut self) -> i64;
}

/// `std::time::Instant`, relative to construction.
#[derive(Debug, Clone, Copy)]
pub struct MonotonicClock {
    origin: Instant,
}

impl MonotonicClock {
    pub fn new() -> Self {
        Self { origin: Instant::now() }
    }
}

impl Default for MonotonicClock {
    fn default() -> Self {
        Self::new()
    }
}

impl Clock for MonotonicClock {
    #[inline(always)]
    fn now_ns(&mut self) -> i64 {
        self.origin.elapsed().as_nanos() as i64
    }
}

/// Outcome of a full campaign.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub samples: Vec<PhaseSample>,
    /// Number of repeated nonces seen across the timed runs.
    pub nonce_collisions: usize,
}

/// A campaign that stopped early. The samples gathered so far are kept so
/// the caller can emit an explicitly partial report.
#[derive(Debug, Clone, thiserror::Error)]
#[error("run aborted after {} timed samples: {error}", samples.len())]
pub struct RunAborted {
    pub samples: Vec<PhaseSample>,
    pub nonce_collisions: usize,
    pub error: Error,
}

fn payload_pattern(size: usize) -> Vec<u8> {
    (0..size).map(|i| (i as u8).wrapping_mul(31).wrapping_add(7)).collect()
}

/// Runs a campaign on the monotonic clock with no progress output.
pub fn run_benchmark<E: EntropySource>(
    config: &RunConfig,
    key: &Key256,
    entropy: &mut E,
) -> std::result::Result<RunOutput, RunAborted> {
    run_benchmark_with(config, key, entropy, &mut MonotonicClock::new(), &mut std::io::sink())
}

/// Runs `warmup_runs` untimed then `runs` timed seal/open cycles.
///
/// `progress` receives one summary line after the timed loop has finished.
pub fn run_benchmark_with<E, C, W>(
    config: &RunConfig,
    key: &Key256,
    entropy: &mut E,
    clock: &mut C,
    progress: &mut W,
) -> std::result::Result<RunOutput, RunAborted>
where
    E: EntropySource,
    C: Clock,
    W: Write + ?Sized,
{
    let abort = |samples, nonce_collisions, error| RunAborted { samples, nonce_collisions, error };
    if let Err(e) = config.validate() {
        return Err(abort(Vec::new(), 0, e));
    }

    let payload = payload_pattern(config.payload_size);
    let mut samples = Vec::with_capacity(config.runs);
    let mut nonces: std::collections::HashSet<Nonce96> = std::collections::HashSet::with_capacity(config.runs);
    let mut collisions = 0;

    for i in 0..config.warmup_runs + config.runs {
        let t0 = clock.now_ns();
        let nonce = match generate_nonce(entropy) {
            Ok(n) => n,
            Err(e) => return Err(abort(samples, collisions, e)),
        };
        let t1 = clock.now_ns();
        let sealed = seal_with_nonce(key, &nonce, black_box(&payload));
        let t2 = clock.now_ns();
        let opened = SealedMessage::parse(&sealed).and_then(|m| open_message(key, m));
        let t3 = clock.now_ns();

        let plaintext = match opened {
            Ok(p) => p,
            Err(e) => return Err(abort(samples, collisions, e)),
        };
        black_box(&plaintext);
        if i < config.warmup_runs {
            continue;
        }
        debug_assert_eq!(plaintext, payload);
        if !nonces.insert(nonce) {
            collisions += 1;
        }
        samples.push(PhaseSample {
            random_ns: t1 - t0,
            encrypt_ns: t2 - t1,
            decrypt_ns: t3 - t2,
            functional_ns: t3 - t0,
        });
    }

    // Progress is best effort; a broken pipe must not lose the samples.
    let _ = writeln!(
        progress,
        "campaign {}: {} timed runs, {} warmup, payload {} B",
        config.label, config.runs, config.warmup_runs, config.payload_size
    );
    Ok(RunOutput { samples, nonce_collisions: collisions })
}
