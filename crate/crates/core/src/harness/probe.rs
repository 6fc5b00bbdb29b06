use std::time::Instant;

use serde::{Deserialize, Serialize};

pub const UNAVAILABLE: &str = "unavailable";

const SCALING_WARNING: &str = "dynamic CPU frequency scaling can make latency distributions bimodal; \
cold or lightly loaded runs may execute at base clock";
const SCALING_ADVICE: &str = "lock the CPU frequency out-of-band (e.g. performance governor) \
or keep the default warmup so the measured state is the steady state";

/// Peak resident set size of this process in bytes, if the platform
/// exposes it.
pub fn peak_memory() -> Option<u64> {
    #[cfg(target_os = "linux")]
    if let Some(b) = vm_hwm() {
        return Some(b);
    }
    max_rss()
}

#[cfg(target_os = "linux")]
fn vm_hwm() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kb: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb * 1024)
}

#[cfg(unix)]
fn max_rss() -> Option<u64> {
    // SAFETY: getrusage only writes into the struct we hand it.
    let usage = unsafe {
        let mut usage: libc::rusage = std::mem::zeroed();
        if libc::getrusage(libc::RUSAGE_SELF, &mut usage) != 0 {
            return None;
        }
        usage
    };
    let raw = u64::try_from(usage.ru_maxrss).ok().filter(|&v| v > 0)?;
    // bytes on Apple platforms, KiB elsewhere
    if cfg!(any(target_os = "macos", target_os = "ios")) {
        Some(raw)
    } else {
        Some(raw * 1024)
    }
}

#[cfg(not(unix))]
fn max_rss() -> Option<u64> {
    None
}

/// Median over `trials` of the smallest observable step of the monotonic
/// clock, in nanoseconds. Never returns zero.
pub fn measure_clock_resolution(trials: usize) -> u64 {
    let mut steps: Vec<u64> = (0..trials.max(1))
        .map(|_| {
            let start = Instant::now();
            loop {
                let d = start.elapsed().as_nanos() as u64;
                if d > 0 {
                    break d;
                }
            }
        })
        .collect();
    steps.sort_unstable();
    steps[steps.len() / 2]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvironmentReport {
    pub clock: String,
    pub clock_resolution_ns: u64,
    /// Frequency-scaling governor/driver, or "unavailable".
    pub frequency_policy: String,
    pub os: String,
    pub arch: String,
    pub warning: String,
    pub advice: String,
    /// The decryption phase opens the sealed buffer from memory; file I/O is
    /// never inside a timed region.
    pub decrypt_phase_source: String,
}

fn read_trimmed(path: &str) -> Option<String> {
    let s = std::fs::read_to_string(path).ok()?;
    let s = s.trim();
    (!s.is_empty()).then(|| s.to_string())
}

fn frequency_policy() -> String {
    if !cfg!(target_os = "linux") {
        return UNAVAILABLE.into();
    }
    let base = "/sys/devices/system/cpu/cpu0/cpufreq";
    let governor = read_trimmed(&format!("{base}/scaling_governor"));
    let driver = read_trimmed(&format!("{base}/scaling_driver"));
    let cur_khz = read_trimmed(&format!("{base}/scaling_cur_freq"));
    match (governor, driver) {
        (None, None) => UNAVAILABLE.into(),
        (g, d) => {
            let mut parts = Vec::new();
            if let Some(g) = g {
                parts.push(format!("governor={g}"));
            }
            if let Some(d) = d {
                parts.push(format!("driver={d}"));
            }
            if let Some(f) = cur_khz {
                parts.push(format!("cur_khz={f}"));
            }
            parts.join(" ")
        }
    }
}

pub fn environment_probe() -> EnvironmentReport {
    EnvironmentReport {
        clock: "monotonic (std::time::Instant)".into(),
        clock_resolution_ns: measure_clock_resolution(101),
        frequency_policy: frequency_policy(),
        os: std::env::consts::OS.into(),
        arch: std::env::consts::ARCH.into(),
        warning: SCALING_WARNING.into(),
        advice: SCALING_ADVICE.into(),
        decrypt_phase_source: "in-memory".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolution_positive() {
        assert!(measure_clock_resolution(11) > 0);
        assert!(environment_probe().clock_resolution_ns > 0);
    }

    #[test]
    fn probe_always_warns() {
        let r = environment_probe();
        assert!(!r.warning.is_empty());
        assert!(!r.advice.is_empty());
        assert!(!r.frequency_policy.is_empty());
    }

    #[test]
    fn monotonic_reads() {
        let start = Instant::now();
        let mut prev = start.elapsed();
        for _ in 0..10_000 {
            let now = start.elapsed();
            assert!(now >= prev);
            prev = now;
        }
    }

    #[test]
    fn peak_memory_positive_and_monotone() {
        if let Some(a) = peak_memory() {
            assert!(a > 0);
            let b = peak_memory().unwrap();
            assert!(b >= a);
        } else if cfg!(target_os = "linux") {
            panic!("linux must report peak RSS");
        }
    }
}
