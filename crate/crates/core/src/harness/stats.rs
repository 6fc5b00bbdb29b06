use serde::{Deserialize, Serialize};

use super::{Phase, PhaseSample};
use crate::error::{Error, Result};

/// Drops every sample with a negative duration. Survivors keep their order.
pub fn filter_invalid(samples: &[PhaseSample]) -> (Vec<PhaseSample>, usize) {
    let valid: Vec<PhaseSample> = samples.iter().copied().filter(PhaseSample::is_valid).collect();
    let dropped = samples.len() - valid.len();
    (valid, dropped)
}

/// Nearest-rank percentile of sorted data: the element at 1-indexed rank
/// `ceil(percent * n / 100)`, with rank at least 1.
pub fn nearest_rank(sorted: &[i64], percent: u32) -> Option<i64> {
    if sorted.is_empty() || percent > 100 {
        return None;
    }
    let n = sorted.len();
    let rank = (percent as usize * n).div_ceil(100).max(1);
    Some(sorted[rank - 1])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseStats {
    pub mean_ns: f64,
    pub p5_ns: i64,
    pub p95_ns: i64,
    pub min_ns: i64,
    pub max_ns: i64,
}

impl PhaseStats {
    fn from_values(mut values: Vec<i64>) -> Self {
        values.sort_unstable();
        // i128 keeps the sum exact for any realistic run length
        let sum: i128 = values.iter().map(|&v| v as i128).sum();
        Self {
            mean_ns: sum as f64 / values.len() as f64,
            p5_ns: nearest_rank(&values, 5).unwrap(),
            p95_ns: nearest_rank(&values, 95).unwrap(),
            min_ns: values[0],
            max_ns: values[values.len() - 1],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsSummary {
    pub functional: PhaseStats,
    pub random: PhaseStats,
    pub encryption: PhaseStats,
    pub decryption: PhaseStats,
    pub n_total: usize,
    pub n_valid: usize,
    pub n_dropped: usize,
}

impl StatsSummary {
    pub fn phase(&self, phase: Phase) -> &PhaseStats {
        match phase {
            Phase::Functional => &self.functional,
            Phase::Random => &self.random,
            Phase::Encryption => &self.encryption,
            Phase::Decryption => &self.decryption,
        }
    }
}

/// Summarizes already-filtered samples. `dropped` is carried through so the
/// summary accounts for every run.
///
/// The mean is over valid samples only.
pub fn summarize(valid: &[PhaseSample], dropped: usize) -> Result<StatsSummary> {
    if valid.is_empty() {
        return Err(Error::EmptySampleSet);
    }
    if let Some(index) = valid.iter().position(|s| !s.is_valid()) {
        return Err(Error::InvalidSample { index });
    }
    let col = |p: Phase| PhaseStats::from_values(valid.iter().map(|s| s.get(p)).collect());
    Ok(StatsSummary {
        functional: col(Phase::Functional),
        random: col(Phase::Random),
        encryption: col(Phase::Encryption),
        decryption: col(Phase::Decryption),
        n_total: valid.len() + dropped,
        n_valid: valid.len(),
        n_dropped: dropped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn functional(values: &[i64]) -> Vec<PhaseSample> {
        values
            .iter()
            .map(|&v| PhaseSample { functional_ns: v, ..Default::default() })
            .collect()
    }

    #[test]
    fn filter_drops_negatives_in_order() {
        let (valid, dropped) = filter_invalid(&functional(&[5, 7, -3, 9]));
        assert_eq!(valid, functional(&[5, 7, 9]));
        assert_eq!(dropped, 1);
    }

    #[test]
    fn filter_identity_on_valid() {
        let input = functional(&[1, 2, 3]);
        assert_eq!(filter_invalid(&input), (input.clone(), 0));
    }

    #[test]
    fn all_negative_then_summarize_fails() {
        let (valid, dropped) = filter_invalid(&functional(&[-1, -2, -3]));
        assert!(valid.is_empty());
        assert_eq!(dropped, 3);
        assert_eq!(summarize(&valid, dropped), Err(Error::EmptySampleSet));
    }

    #[test]
    fn negative_in_any_phase_is_invalid() {
        let s = PhaseSample { random_ns: -1, encrypt_ns: 1, decrypt_ns: 1, functional_ns: 1 };
        assert_eq!(filter_invalid(&[s]).1, 1);
        assert_eq!(summarize(&[s], 0), Err(Error::InvalidSample { index: 0 }));
    }

    #[test]
    fn constant_distribution() {
        let s = summarize(&functional(&[42; 100]), 0).unwrap();
        assert_eq!(s.functional.mean_ns, 42.0);
        assert_eq!((s.functional.p5_ns, s.functional.p95_ns), (42, 42));
    }

    #[test]
    fn one_to_hundred() {
        let values: Vec<i64> = (1..=100).collect();
        let s = summarize(&functional(&values), 2).unwrap();
        assert_eq!(s.functional.mean_ns, 50.5);
        assert_eq!(s.functional.p5_ns, 5);
        assert_eq!(s.functional.p95_ns, 95);
        assert_eq!((s.n_total, s.n_valid, s.n_dropped), (102, 100, 2));
    }

    #[test]
    fn single_sample() {
        let s = summarize(&functional(&[77]), 0).unwrap();
        assert_eq!(s.functional.mean_ns, 77.0);
        assert_eq!((s.functional.p5_ns, s.functional.p95_ns), (77, 77));
    }

    #[test]
    fn nearest_rank_edges() {
        assert_eq!(nearest_rank(&[], 50), None);
        assert_eq!(nearest_rank(&[3], 0), Some(3));
        assert_eq!(nearest_rank(&[1, 2, 3], 100), Some(3));
        // ceil(0.95 * 10) = 10
        let v: Vec<i64> = (1..=10).collect();
        assert_eq!(nearest_rank(&v, 95), Some(10));
        assert_eq!(nearest_rank(&v, 5), Some(1));
    }
}
