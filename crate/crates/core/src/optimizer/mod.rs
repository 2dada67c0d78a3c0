//! Area optimization: per-output two-level minimization, literal factoring
//! and a shared rebuild, with rareness metrics before and after.

mod cover;
mod factor;

pub use cover::{cone_truth_table, prime_implicants, qm_minimize, Cover, Cube, TruthTable, MAX_CONE_INPUTS, PETRICK_LIMIT};
pub use factor::{factor_common_literal, factor_with, rebuild, AcceptStep, Expr, FactoredForm};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netlist::{Netlist, TestVector};
use crate::rareness::{MetricSettings, RarenessReport};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizeSettings {
    pub tau: f64,
    pub strict: bool,
}

impl Default for OptimizeSettings {
    fn default() -> Self {
        OptimizeSettings { tau: 0.2, strict: true }
    }
}

impl OptimizeSettings {
    fn metric_settings(&self) -> MetricSettings {
        MetricSettings {
            tau: self.tau,
            strict: self.strict,
            ..MetricSettings::default()
        }
    }
}

/// Before/after summary. Rareness fields are computed with uniform-input
/// ITM propagation and are `None` when the signal universe is empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationStats {
    pub area_before: usize,
    pub area_after: usize,
    pub area_drop_pct: f64,
    pub omega_min_before: Option<f64>,
    pub omega_min_after: Option<f64>,
    pub mu_all_before: Option<f64>,
    pub mu_all_after: Option<f64>,
    pub rho_before: usize,
    pub rho_after: usize,
    pub tau: f64,
    pub strict: bool,
}

#[derive(Debug, Clone, Copy)]
struct Snapshot {
    gates: usize,
    omega: Option<f64>,
    mu: Option<f64>,
    rho: usize,
}

fn snapshot(netlist: &Netlist, settings: &MetricSettings) -> Snapshot {
    let report = RarenessReport::itm(netlist);
    let m = report.metrics(settings).ok();
    Snapshot {
        gates: netlist.gate_count(),
        omega: m.as_ref().map(|m| m.omega_min),
        mu: m.as_ref().map(|m| m.mu_all),
        rho: report.count_below(settings.tau, settings.strict),
    }
}

/// Factoring with the rareness guard: a literal is divided out only when
/// the rebuilt gate count drops, the rarest signal does not get rarer and
/// the number of signals below τ does not grow.
pub fn factor_guarded(cover: &Cover, settings: &OptimizeSettings) -> FactoredForm {
    let ms = settings.metric_settings();
    let measure = |e: &Expr| -> Option<Snapshot> {
        let form = FactoredForm {
            inputs: cover.inputs.clone(),
            expr: e.clone(),
        };
        rebuild("step", &cover.inputs, &[("_out".to_string(), form)])
            .ok()
            .map(|n| snapshot(&n, &ms))
    };
    factor_with(cover, &|before, after| {
        if after.gate_count() >= before.gate_count() {
            return false;
        }
        match (measure(before), measure(after)) {
            (Some(b), Some(a)) => {
                let omega_ok = match (b.omega, a.omega) {
                    (Some(ob), Some(oa)) => oa >= ob - 1e-12,
                    _ => true,
                };
                omega_ok && a.rho <= b.rho
            }
            _ => false,
        }
    })
}

/// Per-output minimize → factor → shared rebuild. The original netlist is
/// returned untouched when the rebuild is not strictly smaller or some
/// output is constant.
pub fn optimize_area(netlist: &Netlist, settings: &OptimizeSettings) -> Result<(Netlist, OptimizationStats)> {
    let ms = settings.metric_settings();
    let outputs: Vec<_> = netlist.outputs().to_vec();
    let tables: Vec<TruthTable> = outputs
        .iter()
        .map(|&o| cone_truth_table(netlist, o))
        .collect::<Result<_>>()?;
    let forms: Vec<(String, FactoredForm)> = tables
        .par_iter()
        .zip(outputs.par_iter())
        .map(|(tt, &o)| {
            let cover = qm_minimize(tt);
            (netlist.net_name(o).to_string(), factor_guarded(&cover, settings))
        })
        .collect();

    let before = snapshot(netlist, &ms);
    let inputs: Vec<String> = netlist.input_names().iter().map(|s| s.to_string()).collect();
    let candidate = match rebuild(netlist.name(), &inputs, &forms) {
        Ok(n) => Some(n),
        Err(Error::ConstantOutput(name)) => {
            log::info!("output `{name}` is constant; keeping the original netlist");
            None
        }
        Err(e) => return Err(e),
    };
    let result = match candidate {
        Some(n) if n.gate_count() < netlist.gate_count() => {
            check_equivalent(netlist, &n, &tables)?;
            n
        }
        _ => netlist.clone(),
    };
    let after = snapshot(&result, &ms);
    let area_drop_pct = if before.gates == 0 {
        0.0
    } else {
        100.0 * (before.gates - after.gates) as f64 / before.gates as f64
    };
    let stats = OptimizationStats {
        area_before: before.gates,
        area_after: after.gates,
        area_drop_pct,
        omega_min_before: before.omega,
        omega_min_after: after.omega,
        mu_all_before: before.mu,
        mu_all_after: after.mu,
        rho_before: before.rho,
        rho_after: after.rho,
        tau: settings.tau,
        strict: settings.strict,
    };
    Ok((result, stats))
}

/// Exhaustive per-output comparison over each original cone's inputs,
/// with all other inputs held at 0.
fn check_equivalent(original: &Netlist, rebuilt: &Netlist, tables: &[TruthTable]) -> Result<()> {
    if original.input_names() != rebuilt.input_names() || original.output_names() != rebuilt.output_names() {
        return Err(Error::Internal("rebuilt netlist changed the interface".into()));
    }
    let width = original.inputs().len();
    for (k, tt) in tables.iter().enumerate() {
        let positions: Vec<usize> = tt
            .inputs()
            .iter()
            .map(|n| original.input_names().iter().position(|x| x == n).expect("cone input is a PI"))
            .collect();
        let w = positions.len();
        for m in 0..1usize << w {
            let mut bits = vec![false; width];
            for (j, &p) in positions.iter().enumerate() {
                bits[p] = m >> (w - 1 - j) & 1 == 1;
            }
            let v = TestVector::new(bits);
            let got = rebuilt.evaluate_outputs(&v)?[k];
            if got != tt.bits()[m] {
                return Err(Error::Internal(format!(
                    "optimized output `{}` differs from the original at {v}",
                    original.output_names()[k]
                )));
            }
        }
    }
    Ok(())
}
