use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::{Phase, StatsSummary};
use crate::error::{Error, Result};

/// A protocol latency ceiling. A duration equal to the limit fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetSpec {
    pub name: String,
    #[serde(rename = "limit_ns", with = "duration_ns")]
    pub limit: Duration,
}

mod duration_ns {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(d.as_nanos() as u64)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        Ok(Duration::from_nanos(u64::deserialize(d)?))
    }
}

impl BudgetSpec {
    pub fn new(name: impl Into<String>, limit: Duration) -> Result<Self> {
        let name = name.into();
        if limit.is_zero() {
            return Err(Error::InvalidBudget(format!("{name}: limit must be positive")));
        }
        Ok(Self { name, limit })
    }

    /// IEC 61850 GOOSE, < 4 ms.
    pub fn goose() -> Self {
        Self { name: "GOOSE".into(), limit: Duration::from_millis(4) }
    }

    /// IEC 60834-1 teleprotection inter-tripping, < 10 ms.
    pub fn iec_60834_1() -> Self {
        Self { name: "IEC 60834-1".into(), limit: Duration::from_millis(10) }
    }

    /// SCADA supervisory traffic, < 1 s.
    pub fn scada() -> Self {
        Self { name: "SCADA".into(), limit: Duration::from_secs(1) }
    }

    pub fn defaults() -> Vec<Self> {
        vec![Self::goose(), Self::iec_60834_1(), Self::scada()]
    }

    pub fn limit_ns(&self) -> f64 {
        self.limit.as_nanos() as f64
    }
}

/// Parses `name=limit_ms`, e.g. `GOOSE=4` or `fast=0.5`.
impl FromStr for BudgetSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, ms) = s
            .split_once('=')
            .ok_or_else(|| Error::InvalidBudget(format!("expected name=limit_ms, got {s:?}")))?;
        let name = name.trim();
        if name.is_empty() {
            return Err(Error::InvalidBudget(format!("empty budget name in {s:?}")));
        }
        let ms: f64 = ms
            .trim()
            .parse()
            .map_err(|_| Error::InvalidBudget(format!("bad limit in {s:?}")))?;
        if !ms.is_finite() || ms <= 0.0 {
            return Err(Error::InvalidBudget(format!("{name}: limit must be positive")));
        }
        Self::new(name, Duration::from_secs_f64(ms / 1000.0))
    }
}

/// Percentage of the budget consumed by `duration_ns`.
pub fn budget_fraction(duration_ns: f64, budget: &BudgetSpec) -> f64 {
    100.0 * duration_ns / budget.limit_ns()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistic {
    Mean,
    P95,
}

impl Statistic {
    pub fn of(self, stats: &super::PhaseStats) -> f64 {
        match self {
            Statistic::Mean => stats.mean_ns,
            Statistic::P95 => stats.p95_ns as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub phase: Phase,
    pub statistic: Statistic,
    pub value_ns: f64,
    pub fraction_pct: f64,
    pub pass: bool,
}

pub fn budget_verdict(stats: &StatsSummary, budget: &BudgetSpec, phase: Phase, statistic: Statistic) -> Verdict {
    let value_ns = statistic.of(stats.phase(phase));
    Verdict {
        phase,
        statistic,
        value_ns,
        fraction_pct: budget_fraction(value_ns, budget),
        pass: value_ns < budget.limit_ns(),
    }
}
