//! Trojan coverage of test sets and before/after design comparisons.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netlist::Netlist;
use crate::rareness::{Method, MetricSettings, Metrics, RarenessReport};
use crate::testgen::{Provenance, TestSet};
use crate::trojan::{is_detected, TrojanBundle};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub total_trojans: usize,
    pub detected: usize,
    pub coverage: f64,
    pub per_trojan: Vec<bool>,
    pub vectors: usize,
    pub tests: Provenance,
}

impl CoverageReport {
    pub const CSV_HEADER: &'static str = "algorithm,vectors,total_trojans,detected,coverage";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.tests.algorithm, self.vectors, self.total_trojans, self.detected, self.coverage
        )
    }
}

/// Fraction of the bundle's trojans exposed by some vector of `tests`.
pub fn trojan_coverage(tests: &TestSet, bundle: &TrojanBundle) -> Result<CoverageReport> {
    tests.check_width(&bundle.golden)?;
    let per_trojan: Vec<bool> = bundle
        .trojans
        .par_iter()
        .map(|t| is_detected(&bundle.golden, &t.infected, &tests.vectors))
        .collect::<Result<_>>()?;
    let detected = per_trojan.iter().filter(|&&d| d).count();
    let total = per_trojan.len();
    Ok(CoverageReport {
        total_trojans: total,
        detected,
        coverage: if total == 0 { 0.0 } else { detected as f64 / total as f64 },
        per_trojan,
        vectors: tests.len(),
        tests: tests.provenance.clone(),
    })
}

/// A design together with its rareness analysis.
#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    pub design: String,
    pub gates: usize,
    pub report: RarenessReport,
    pub settings: MetricSettings,
    pub coverage: Option<f64>,
}

impl Analysis {
    pub fn new(netlist: &Netlist, report: RarenessReport, settings: MetricSettings) -> Self {
        Analysis {
            design: netlist.name().to_string(),
            gates: netlist.gate_count(),
            report,
            settings,
            coverage: None,
        }
    }

    pub fn with_coverage(mut self, coverage: f64) -> Self {
        self.coverage = Some(coverage);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignSummary {
    pub design: String,
    pub method: Method,
    pub gates: usize,
    pub metrics: Metrics,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coverage: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Deltas {
    pub area_drop_pct: f64,
    pub rho_drop: i64,
    /// `None` when the baseline has no signal below τ.
    pub rho_drop_pct: Option<f64>,
    pub delta_omega_min: f64,
    pub delta_mu_all: f64,
    #[serde(rename = "delta_mu_topN")]
    pub delta_mu_top_n: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_coverage: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub baseline: DesignSummary,
    pub variant: DesignSummary,
    pub settings: MetricSettings,
    pub deltas: Deltas,
}

fn summarize(a: &Analysis) -> Result<DesignSummary> {
    Ok(DesignSummary {
        design: a.design.clone(),
        method: a.report.method,
        gates: a.gates,
        metrics: a.report.metrics(&a.settings)?,
        coverage: a.coverage,
    })
}

/// Variant relative to baseline. Both analyses must use the same metric
/// settings.
pub fn compare(baseline: &Analysis, variant: &Analysis) -> Result<ComparisonReport> {
    if baseline.settings != variant.settings {
        return Err(Error::InvalidArgument(format!(
            "metric settings differ: {:?} vs {:?}",
            baseline.settings, variant.settings
        )));
    }
    let b = summarize(baseline)?;
    let v = summarize(variant)?;
    let rho_b = b.metrics.rho.count as i64;
    let rho_v = v.metrics.rho.count as i64;
    let deltas = Deltas {
        area_drop_pct: if b.gates == 0 {
            0.0
        } else {
            100.0 * (b.gates as f64 - v.gates as f64) / b.gates as f64
        },
        rho_drop: rho_b - rho_v,
        rho_drop_pct: (rho_b > 0).then(|| 100.0 * (rho_b - rho_v) as f64 / rho_b as f64),
        delta_omega_min: v.metrics.omega_min - b.metrics.omega_min,
        delta_mu_all: v.metrics.mu_all - b.metrics.mu_all,
        delta_mu_top_n: v.metrics.mu_top_n - b.metrics.mu_top_n,
        delta_coverage: match (b.coverage, v.coverage) {
            (Some(x), Some(y)) => Some(y - x),
            _ => None,
        },
    };
    Ok(ComparisonReport {
        baseline: b,
        variant: v,
        settings: baseline.settings,
        deltas,
    })
}

impl ComparisonReport {
    pub const CSV_HEADER: &'static str = "baseline,variant,gates_before,gates_after,area_drop_pct,\
omega_min_before,omega_min_after,mu_all_before,mu_all_after,mu_topN_before,mu_topN_after,\
rho_before,rho_after,rho_drop,delta_mu_all,delta_mu_topN";

    pub fn csv_row(&self, fmt: &dyn Fn(f64) -> String) -> String {
        let (b, v, d) = (&self.baseline, &self.variant, &self.deltas);
        [
            b.design.clone(),
            v.design.clone(),
            b.gates.to_string(),
            v.gates.to_string(),
            fmt(d.area_drop_pct),
            fmt(b.metrics.omega_min),
            fmt(v.metrics.omega_min),
            fmt(b.metrics.mu_all),
            fmt(v.metrics.mu_all),
            fmt(b.metrics.mu_top_n),
            fmt(v.metrics.mu_top_n),
            b.metrics.rho.count.to_string(),
            v.metrics.rho.count.to_string(),
            d.rho_drop.to_string(),
            fmt(d.delta_mu_all),
            fmt(d.delta_mu_top_n),
        ]
        .join(",")
    }
}
