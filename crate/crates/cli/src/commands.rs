use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rarenet_core::evaluator::{compare as compare_designs, trojan_coverage, Analysis, ComparisonReport, CoverageReport};
use rarenet_core::netlist::{write_bench, Netlist};
use rarenet_core::optimizer::{optimize_area, OptimizationStats, OptimizeSettings};
use rarenet_core::rareness::{Method, MetricSettings, RarenessReport};
use rarenet_core::testgen::{mero_with_stats, tarmac, MeroConfig, TarmacConfig, TestSet};
use rarenet_core::trojan::{inject as inject_trojans, TrojanBundle, MANIFEST_FILE};
use rarenet_core::{Error, Result};
use serde_json::{json, Value};

use crate::args::*;
use crate::output::*;
use crate::source;

fn resolve_seed(seed: SeedArg) -> u64 {
    match seed {
        SeedArg::Fixed(s) => s,
        SeedArg::Random => {
            let s = rand::random::<u64>();
            eprintln!("seed: {s}");
            s
        }
    }
}

fn check_tau(tau: f64) -> Result<()> {
    if tau > 0.0 && tau <= 0.5 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("tau must lie in (0, 0.5], got {tau}")))
    }
}

fn check_count(what: &str, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument(format!("{what} must be at least 1")));
    }
    Ok(())
}

fn method_of(m: MethodArg) -> Method {
    match m {
        MethodArg::Itm => Method::Itm,
        MethodArg::Exact => Method::Exact,
        MethodArg::Sim => Method::Simulation,
    }
}

fn metric_settings(m: &MetricArgs) -> Result<MetricSettings> {
    check_tau(m.tau)?;
    check_count("--top-n", m.top_n)?;
    Ok(MetricSettings {
        tau: m.tau,
        strict: m.strict,
        top_n: m.top_n,
    })
}

fn estimate(netlist: &Netlist, e: &EstimateArgs, seed: u64) -> Result<RarenessReport> {
    check_count("--vectors", e.vectors)?;
    RarenessReport::compute(netlist, method_of(e.method), e.vectors, seed)
}

fn stamp_for(command: &str, config: &impl serde::Serialize, netlists: &[&Netlist], seed: Option<u64>) -> ToolStamp {
    let digests: Vec<String> = netlists.iter().map(|n| input_digest(&write_bench(n))).collect();
    ToolStamp::new(command, config, json!({ "inputs": digests, "seed": seed }))
}

pub fn analyze(a: &AnalyzeArgs) -> Result<()> {
    let netlist = source::load(&a.source)?;
    let settings = metric_settings(&a.metrics)?;
    let seed = resolve_seed(a.estimate.seed);
    let report = estimate(&netlist, &a.estimate, seed)?;
    let stamp = stamp_for("analyze", a, &[&netlist], Some(seed));
    let doc = report.to_json(&netlist, &settings, None)?;
    let text = match a.out.format {
        Format::Json => json_document(&doc, &stamp, &a.out)?,
        Format::Csv => {
            let f = number_formatter(&a.out);
            let mut s = stamp.comment();
            s.push_str("net,p0,p1,omega,rare_value\n");
            for sig in &doc.signals {
                let _ = writeln!(s, "{},{},{},{},{}", sig.net, f(sig.p0), f(sig.p1), f(sig.omega), sig.rare_value);
            }
            s
        }
        Format::Text => {
            let f = number_formatter(&a.out);
            let m = &doc.metrics;
            let mut s = stamp.comment();
            let _ = writeln!(s, "design     {}", doc.design);
            let _ = writeln!(s, "method     {}", serde_json::to_value(doc.method).map_err(internal)?.as_str().unwrap_or(""));
            let _ = writeln!(s, "signals    {}", doc.signals.len());
            let _ = writeln!(s, "omega_min  {}", f(m.omega_min));
            let _ = writeln!(s, "mu_all     {}", f(m.mu_all));
            let _ = writeln!(s, "mu_top{:<4} {}", m.top_n, f(m.mu_top_n));
            let op = if m.rho.strict { "<" } else { "<=" };
            let _ = writeln!(s, "rho({op}{})  {}", m.rho.tau, m.rho.count);
            s
        }
    };
    write_to(a.out.output.as_deref(), &text)
}

fn stats_text(st: &OptimizationStats, f: &dyn Fn(f64) -> String) -> String {
    let o = |x: Option<f64>| x.map_or_else(|| "-".to_string(), f);
    let mut s = String::new();
    let _ = writeln!(s, "gates      {} -> {} ({}% smaller)", st.area_before, st.area_after, f(st.area_drop_pct));
    let _ = writeln!(s, "omega_min  {} -> {}", o(st.omega_min_before), o(st.omega_min_after));
    let _ = writeln!(s, "mu_all     {} -> {}", o(st.mu_all_before), o(st.mu_all_after));
    let op = if st.strict { "<" } else { "<=" };
    let _ = writeln!(s, "rho({op}{})  {} -> {}", st.tau, st.rho_before, st.rho_after);
    s
}

pub fn optimize(a: &OptimizeArgs) -> Result<()> {
    let netlist = source::load(&a.source)?;
    check_tau(a.metrics.tau)?;
    let settings = OptimizeSettings {
        tau: a.metrics.tau,
        strict: a.metrics.strict,
    };
    let (optimized, stats) = optimize_area(&netlist, &settings)?;
    let stamp = stamp_for("optimize", a, &[&netlist], None);
    if let Some(p) = &a.bench_out {
        write_to(Some(p), &(stamp.comment() + &write_bench(&optimized)))?;
    }
    let f = number_formatter(&a.out);
    let text = match a.out.format {
        Format::Json => json_document(&stats, &stamp, &a.out)?,
        Format::Csv => {
            let o = |x: Option<f64>| x.map_or_else(String::new, &f);
            format!(
                "{}area_before,area_after,area_drop_pct,omega_min_before,omega_min_after,mu_all_before,mu_all_after,rho_before,rho_after,tau,strict\n{},{},{},{},{},{},{},{},{},{},{}\n",
                stamp.comment(),
                stats.area_before,
                stats.area_after,
                f(stats.area_drop_pct),
                o(stats.omega_min_before),
                o(stats.omega_min_after),
                o(stats.mu_all_before),
                o(stats.mu_all_after),
                stats.rho_before,
                stats.rho_after,
                stats.tau,
                stats.strict
            )
        }
        Format::Text => stamp.comment() + &stats_text(&stats, &f),
    };
    write_to(a.out.output.as_deref(), &text)
}

pub fn inject(a: &InjectArgs) -> Result<()> {
    let netlist = source::load(&a.source)?;
    check_tau(a.tau)?;
    check_count("--trojans", a.trojans)?;
    let seed = resolve_seed(a.estimate.seed);
    let report = estimate(&netlist, &a.estimate, seed)?;
    let trojans = inject_trojans(&netlist, &report, a.tau, a.q, a.trojans, seed)?;
    let bundle = TrojanBundle {
        golden: netlist,
        trojans,
    };
    let stamp = stamp_for("inject", a, &[&bundle.golden], Some(seed));
    write_bundle(&a.out_dir, &bundle, &stamp)?;
    TrojanBundle::load(&a.out_dir)?.verify()?;

    let summary = json!({
        "design": bundle.golden.name(),
        "trojans": bundle.trojans.len(),
        "requested": a.trojans,
        "q": a.q,
        "tau": a.tau,
        "seed": seed,
    });
    let text = match a.out.format {
        Format::Json => json_document(&summary, &stamp, &a.out)?,
        Format::Csv => format!(
            "{}design,trojans,requested,q,tau,seed\n{},{},{},{},{},{}\n",
            stamp.comment(),
            bundle.golden.name(),
            bundle.trojans.len(),
            a.trojans,
            a.q,
            a.tau,
            seed
        ),
        Format::Text => format!(
            "{}inserted {} of {} trojans (q={}, tau={}) into {}\n",
            stamp.comment(),
            bundle.trojans.len(),
            a.trojans,
            a.q,
            a.tau,
            bundle.golden.name()
        ),
    };
    write_to(a.out.output.as_deref(), &text)
}

fn write_bundle(dir: &Path, bundle: &TrojanBundle, stamp: &ToolStamp) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    for (name, content) in bundle.files()? {
        let content = if name == MANIFEST_FILE {
            let v: Value = serde_json::from_str(&content).map_err(internal)?;
            stamp_json(v, stamp)?
        } else {
            stamp.comment() + &content
        };
        write_to(Some(&dir.join(&name)), &content)?;
    }
    Ok(())
}

pub fn gentest(a: &GentestArgs) -> Result<()> {
    let netlist = source::load(&a.source)?;
    check_tau(a.tau)?;
    check_count("--vectors", a.vectors)?;
    check_count("--n", a.n)?;
    let seed = resolve_seed(a.seed);
    let tests: TestSet = match a.algo {
        Algo::Mero => {
            let cfg = MeroConfig {
                tau: a.tau,
                n_detect: a.n,
                n_random: a.vectors,
                seed,
            };
            let (t, stats) = mero_with_stats(&netlist, &cfg)?;
            log::info!(
                "mero: {} vectors, {} of {} flips kept",
                t.len(),
                stats.flips_kept,
                stats.flips_tried
            );
            t
        }
        Algo::Tarmac => tarmac(
            &netlist,
            &TarmacConfig {
                tau: a.tau,
                n_random: a.vectors,
                seed,
            },
        )?,
    };
    let stamp = stamp_for("gentest", a, &[&netlist], Some(seed));
    let text = match a.format {
        Format::Json => stamp_json(serde_json::to_value(&tests).map_err(internal)?, &stamp)?,
        Format::Text => stamp.comment() + &tests.to_text(),
        Format::Csv => return Err(Error::InvalidArgument("test sets are written as json or text".into())),
    };
    write_to(a.output.as_deref(), &text)
}

fn load_tests(path: &Path) -> Result<TestSet> {
    let text = source::read_file(path)?;
    if text.trim_start().starts_with('{') {
        TestSet::from_json(&text)
    } else {
        TestSet::from_text(&text)
    }
}

fn coverage_text(c: &CoverageReport, f: &dyn Fn(f64) -> String) -> String {
    let algo = if c.tests.algorithm.is_empty() { "-" } else { &c.tests.algorithm };
    format!(
        "tests      {} ({} vectors)\ndetected   {} of {}\ncoverage   {}\n",
        algo,
        c.vectors,
        c.detected,
        c.total_trojans,
        f(c.coverage)
    )
}

pub fn evaluate(a: &EvaluateArgs) -> Result<()> {
    let tests = load_tests(&a.tests)?;
    let bundle = TrojanBundle::load(&a.bundle)?;
    let report = trojan_coverage(&tests, &bundle)?;
    let stamp = ToolStamp::new(
        "evaluate",
        a,
        json!({ "tests": input_digest(&tests.to_text()), "golden": input_digest(&write_bench(&bundle.golden)) }),
    );
    let f = number_formatter(&a.out);
    let text = match a.out.format {
        Format::Json => json_document(&report, &stamp, &a.out)?,
        Format::Csv => format!("{}{}\n{}\n", stamp.comment(), CoverageReport::CSV_HEADER, report.csv_row()),
        Format::Text => stamp.comment() + &coverage_text(&report, &f),
    };
    write_to(a.out.output.as_deref(), &text)
}

fn comparison_text(r: &ComparisonReport, f: &dyn Fn(f64) -> String) -> String {
    let (b, v, d) = (&r.baseline, &r.variant, &r.deltas);
    let mut s = String::new();
    let _ = writeln!(s, "baseline   {} ({} gates)", b.design, b.gates);
    let _ = writeln!(s, "variant    {} ({} gates)", v.design, v.gates);
    let _ = writeln!(s, "area drop  {}%", f(d.area_drop_pct));
    let _ = writeln!(s, "omega_min  {} -> {}", f(b.metrics.omega_min), f(v.metrics.omega_min));
    let _ = writeln!(s, "mu_all     {} -> {} ({})", f(b.metrics.mu_all), f(v.metrics.mu_all), f(d.delta_mu_all));
    let _ = writeln!(
        s,
        "mu_topN    {} -> {} ({})",
        f(b.metrics.mu_top_n),
        f(v.metrics.mu_top_n),
        f(d.delta_mu_top_n)
    );
    let _ = writeln!(s, "rho        {} -> {}", b.metrics.rho.count, v.metrics.rho.count);
    s
}

pub fn compare(a: &CompareArgs) -> Result<()> {
    let base = source::load_spec(&a.baseline)?;
    let var = source::load_spec(&a.variant)?;
    let settings = metric_settings(&a.metrics)?;
    let seed = resolve_seed(a.estimate.seed);
    let rb = estimate(&base, &a.estimate, seed)?;
    let rv = estimate(&var, &a.estimate, seed)?;
    let report = compare_designs(&Analysis::new(&base, rb, settings), &Analysis::new(&var, rv, settings))?;
    let stamp = stamp_for("compare", a, &[&base, &var], Some(seed));
    let f = number_formatter(&a.out);
    let text = match a.out.format {
        Format::Json => json_document(&report, &stamp, &a.out)?,
        Format::Csv => format!("{}{}\n{}\n", stamp.comment(), ComparisonReport::CSV_HEADER, report.csv_row(&f)),
        Format::Text => stamp.comment() + &comparison_text(&report, &f),
    };
    write_to(a.out.output.as_deref(), &text)
}
