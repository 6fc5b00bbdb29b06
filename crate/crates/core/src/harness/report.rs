//! Campaign reports and their CSV/JSON encodings.
//!
//! CSV: optional `#`-prefixed environment lines, then the header
//! [`CSV_HEADER`] and one row per phase per campaign, durations in integer
//! nanoseconds (means rounded to nearest).
//!
//! JSON: a single [`Report`] object; field names are those of the structs
//! below.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{
    budget_verdict, filter_invalid, summarize, BudgetSpec, EnvironmentReport, Phase, PhaseSample, RunConfig,
    Statistic, StatsSummary, Verdict,
};
use crate::error::Result;

pub const CSV_HEADER: &str = "phase,mean_ns,p5_ns,p95_ns,n_valid,n_dropped,payload_bytes,label";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub label: String,
    pub payload_bytes: usize,
    pub runs: usize,
    pub warmup_runs: usize,
}

impl From<&RunConfig> for ConfigEcho {
    fn from(c: &RunConfig) -> Self {
        Self {
            label: c.label.clone(),
            payload_bytes: c.payload_size,
            runs: c.runs,
            warmup_runs: c.warmup_runs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BudgetVerdicts {
    pub budget: BudgetSpec,
    pub verdicts: Vec<Verdict>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub config: ConfigEcho,
    pub n_total: usize,
    pub n_valid: usize,
    pub n_dropped: usize,
    pub nonce_collisions: usize,
    /// `None` only when no sample survived filtering.
    pub summary: Option<StatsSummary>,
    pub peak_memory_bytes: Option<u64>,
    pub budgets: Vec<BudgetVerdicts>,
}

/// Filters, summarizes and judges one campaign's samples against every
/// budget, for every phase and both statistics.
pub fn build_campaign(
    config: &RunConfig,
    samples: &[PhaseSample],
    nonce_collisions: usize,
    budgets: &[BudgetSpec],
    peak_memory_bytes: Option<u64>,
) -> CampaignReport {
    let (valid, dropped) = filter_invalid(samples);
    let summary = summarize(&valid, dropped).ok();
    let budgets = match &summary {
        Some(s) => budgets
            .iter()
            .map(|b| BudgetVerdicts {
                budget: b.clone(),
                verdicts: Phase::ALL
                    .iter()
                    .flat_map(|&p| [Statistic::Mean, Statistic::P95].map(|st| budget_verdict(s, b, p, st)))
                    .collect(),
            })
            .collect(),
        None => budgets
            .iter()
            .map(|b| BudgetVerdicts { budget: b.clone(), verdicts: Vec::new() })
            .collect(),
    };
    CampaignReport {
        config: config.into(),
        n_total: samples.len(),
        n_valid: valid.len(),
        n_dropped: dropped,
        nonce_collisions,
        summary,
        peak_memory_bytes,
        budgets,
    }
}

impl CampaignReport {
    pub fn verdict(&self, budget: &str, phase: Phase, statistic: Statistic) -> Option<&Verdict> {
        self.budgets
            .iter()
            .find(|b| b.budget.name == budget)?
            .verdicts
            .iter()
            .find(|v| v.phase == phase && v.statistic == statistic)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    /// Set when a campaign was aborted; the report then holds only what was
    /// gathered before the abort.
    pub partial: bool,
    pub abort_reason: Option<String>,
    pub environment: EnvironmentReport,
    pub campaigns: Vec<CampaignReport>,
}

impl Report {
    pub fn new(environment: EnvironmentReport) -> Self {
        Self {
            tool: "icsaead".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            partial: false,
            abort_reason: None,
            environment,
            campaigns: Vec::new(),
        }
    }

    pub fn mark_partial(&mut self, reason: impl Into<String>) {
        self.partial = true;
        self.abort_reason = Some(reason.into());
    }

    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer_pretty(out, self).map_err(|e| crate::Error::Io(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let env = &self.environment;
        writeln!(out, "# tool: {} {}", self.tool, self.version)?;
        if self.partial {
            writeln!(out, "# PARTIAL: {}", self.abort_reason.as_deref().unwrap_or("aborted"))?;
        }
        writeln!(out, "# clock: {} resolution_ns={}", env.clock, env.clock_resolution_ns)?;
        writeln!(out, "# frequency_policy: {}", env.frequency_policy)?;
        writeln!(out, "# platform: {}/{}", env.os, env.arch)?;
        writeln!(out, "# warning: {}", env.warning)?;
        writeln!(out, "# advice: {}", env.advice)?;
        for c in &self.campaigns {
            let peak = c.peak_memory_bytes.map_or("unavailable".to_string(), |b| b.to_string());
            writeln!(
                out,
                "# campaign {}: n_total={} nonce_collisions={} peak_memory_bytes={}",
                c.config.label, c.n_total, c.nonce_collisions, peak
            )?;
            for b in &c.budgets {
                for v in b.verdicts.iter().filter(|v| v.phase == Phase::Functional) {
                    writeln!(
                        out,
                        "# verdict {} {} {:?}: {:.3}% {}",
                        c.config.label,
                        b.budget.name,
                        v.statistic,
                        v.fraction_pct,
                        if v.pass { "pass" } else { "FAIL" }
                    )?;
                }
            }
        }

        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| crate::Error::Io(e.to_string());
        w.write_record(CSV_HEADER.split(',')).map_err(io)?;
        for c in &self.campaigns {
            for phase in Phase::ALL {
                let (mean, p5, p95) = match &c.summary {
                    Some(s) => {
                        let p = s.phase(phase);
                        (format!("{}", p.mean_ns.round() as i64), p.p5_ns.to_string(), p.p95_ns.to_string())
                    }
                    None => Default::default(),
                };
                w.write_record([
                    phase.name(),
                    &mean,
                    &p5,
                    &p95,
                    &c.n_valid.to_string(),
                    &c.n_dropped.to_string(),
                    &c.config.payload_bytes.to_string(),
                    &c.config.label,
                ])
                .map_err(io)?;
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("utf-8 report")
    }
}
