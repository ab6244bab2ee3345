//! Executes a parsed config: builds the network and workload, runs the
//! requested scenario, and writes CSV artifacts plus a `report.json`.
//!
//! Every artifact byte is a pure function of (config, command, seed); the
//! only exceptions are the timestamp and wall-clock fields in the report
//! header. SVG charts are best-effort extras and never affect the outcome.

use std::path::Path;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use anyhow::{anyhow, Context};
use fog2c_core::aoi::optimal_rate_for_aoi;
use fog2c_core::workload::{sample_requests, Dist};
use fog2c_core::{run_scenario, sweep_rate, Strategy, Topology};
use serde_json::{json, Value};

use crate::config::{digest, Config, Scenario};
use crate::plot::{line_chart, Series};

fn opt_num(v: Option<f64>) -> Value {
    match v {
        Some(x) => json!(x),
        None => Value::Null,
    }
}

/// Percent saved by the optimum relative to `other`; `None` when either side
/// is undefined.
fn savings_pct(full: Option<f64>, other: Option<f64>) -> Option<f64> {
    match (full, other) {
        (Some(f), Some(o)) if o > 0.0 => Some(100.0 * (o - f) / o),
        _ => None,
    }
}

fn write_csv(out: &Path, name: &str, header: &str, rows: &[String]) -> anyhow::Result<()> {
    let mut text = String::with_capacity(header.len() + rows.len() * 40 + 2);
    text.push_str(header);
    text.push('\n');
    for r in rows {
        text.push_str(r);
        text.push('\n');
    }
    std::fs::write(out.join(name), text).with_context(|| format!("writing {name}"))
}

fn try_plot(
    out: &Path,
    name: &str,
    title: &str,
    x: &str,
    y: &str,
    series: &[Series],
    artifacts: &mut Vec<String>,
) {
    match line_chart(&out.join(name), title, x, y, series) {
        Ok(()) => artifacts.push(name.to_string()),
        Err(e) => eprintln!("warning: skipped plot {name}: {e}"),
    }
}

fn build_topology(cfg: &Config) -> anyhow::Result<Topology> {
    let t = cfg.topology.as_ref().expect("validated: scenario needs a topology");
    Topology::new(t.nodes.clone(), t.links.clone())
        .map_err(|errs| anyhow!("invalid topology: {}", errs.join("; ")))
}

fn run_a(cfg: &Config, seed: u64, out: &Path, plot: bool) -> anyhow::Result<(Vec<String>, Value)> {
    let topo = build_topology(cfg)?;
    let wl = cfg.workload.as_ref().expect("validated");
    let exp = &cfg.experiment;
    let requests = sample_requests(&wl.dist, wl.count.expect("validated"), seed)?;
    let stats = run_scenario(&requests, &topo, &exp.strategies, exp.scope, seed)?;

    let mut req_rows = Vec::new();
    let mut agg_rows = Vec::new();
    let mut cdf_rows = Vec::new();
    for st in &stats {
        let name = st.strategy.name();
        for a in &st.allocations {
            let (e, l) = match &a.outcome {
                Some(o) => (o.energy.to_string(), o.latency.to_string()),
                None => (String::new(), String::new()),
            };
            req_rows.push(format!("{name},{},{},{e},{l}", a.request_id, a.feasible()));
        }
        agg_rows.push(format!(
            "{name},{},{}",
            st.success_rate,
            st.median_energy.map(|m| m.to_string()).unwrap_or_default()
        ));
        for &(e, f) in &st.cdf {
            cdf_rows.push(format!("{name},{e},{f}"));
        }
    }
    write_csv(out, "requests.csv", "strategy,request_id,feasible,energy_J,latency_s", &req_rows)?;
    write_csv(out, "aggregate.csv", "strategy,success_rate,median_J", &agg_rows)?;
    write_csv(out, "cdf.csv", "strategy,energy_J,cum_fraction", &cdf_rows)?;
    let mut artifacts =
        vec!["requests.csv".to_string(), "aggregate.csv".to_string(), "cdf.csv".to_string()];

    let full = stats.iter().find(|s| s.strategy == Strategy::FullOpt);
    let strategies_json: Vec<Value> = stats
        .iter()
        .map(|st| {
            json!({
                "strategy": st.strategy.name(),
                "requests": st.allocations.len(),
                "success_rate": st.success_rate,
                "median_J": opt_num(st.median_energy),
                "total_feasible_J": st.total_energy,
            })
        })
        .collect();
    let savings_json: Vec<Value> = match full {
        Some(f) => stats
            .iter()
            .filter(|st| st.strategy != Strategy::FullOpt)
            .map(|st| {
                json!({
                    "strategy": st.strategy.name(),
                    "median_pct": opt_num(savings_pct(f.median_energy, st.median_energy)),
                    "total_pct": opt_num(savings_pct(
                        Some(f.total_energy),
                        Some(st.total_energy),
                    )),
                })
            })
            .collect(),
        None => Vec::new(),
    };
    let results = json!({
        "strategies": strategies_json,
        "savings_vs_full_opt_pct": savings_json,
    });

    if plot {
        let series: Vec<Series> = stats
            .iter()
            .map(|st| Series {
                name: st.strategy.name().to_string(),
                points: st.cdf.clone(),
            })
            .collect();
        try_plot(
            out,
            "cdf.svg",
            "Energy per request, empirical CDF",
            "energy (J)",
            "fraction of requests",
            &series,
            &mut artifacts,
        );
    }
    Ok((artifacts, results))
}

fn run_b(cfg: &Config, seed: u64, out: &Path, plot: bool) -> anyhow::Result<(Vec<String>, Value)> {
    let topo = build_topology(cfg)?;
    let wl = cfg.workload.as_ref().expect("validated");
    let exp = &cfg.experiment;

    let mut rows = Vec::new();
    let mut sizes_json = Vec::new();
    let mut by_strategy: Vec<(Strategy, Vec<(f64, f64)>)> =
        exp.strategies.iter().map(|&s| (s, Vec::new())).collect();
    for &size in &exp.size_grid {
        let mut dist = wl.dist.clone();
        dist.size = Dist::Constant(size);
        let requests = sample_requests(&dist, exp.requests_per_size, seed)?;
        let stats = run_scenario(&requests, &topo, &exp.strategies, exp.scope, seed)?;
        let full = stats.iter().find(|s| s.strategy == Strategy::FullOpt);
        for (st, series) in stats.iter().zip(by_strategy.iter_mut()) {
            rows.push(format!(
                "{},{},{},{}",
                size,
                st.strategy.name(),
                st.median_energy.map(|m| m.to_string()).unwrap_or_default(),
                st.success_rate
            ));
            if let Some(m) = st.median_energy {
                series.1.push((size, m));
            }
        }
        sizes_json.push(json!({
            "size_bits": size,
            "strategies": stats.iter().map(|st| json!({
                "strategy": st.strategy.name(),
                "median_J": opt_num(st.median_energy),
                "success_rate": st.success_rate,
            })).collect::<Vec<_>>(),
            "savings_vs_full_opt_pct": match full {
                Some(f) => stats.iter().filter(|st| st.strategy != Strategy::FullOpt).map(|st| json!({
                    "strategy": st.strategy.name(),
                    "median_pct": opt_num(savings_pct(f.median_energy, st.median_energy)),
                })).collect::<Vec<_>>(),
                None => Vec::new(),
            },
        }));
    }
    write_csv(out, "median_vs_size.csv", "size_bits,strategy,median_J,success_rate", &rows)?;
    let mut artifacts = vec!["median_vs_size.csv".to_string()];
    let results = json!({ "sizes": sizes_json });

    if plot {
        let series: Vec<Series> = by_strategy
            .into_iter()
            .map(|(s, points)| Series { name: s.name().to_string(), points })
            .collect();
        try_plot(
            out,
            "median_vs_size.svg",
            "Median energy per request vs request size",
            "request size (b)",
            "median energy (J)",
            &series,
            &mut artifacts,
        );
    }
    Ok((artifacts, results))
}

fn run_c(cfg: &Config, _seed: u64, out: &Path, plot: bool) -> anyhow::Result<(Vec<String>, Value)> {
    let aoi = cfg.experiment.aoi.as_ref().expect("validated");
    let sweep = sweep_rate(&aoi.base, &aoi.rate_grid)?;

    let rows: Vec<String> = sweep
        .iter()
        .map(|(rate, r)| {
            format!(
                "{rate},{},{},{},{},{}",
                r.mean_aoi, r.mean_power, r.tx_utilization, r.cpu_utilization, r.diverged
            )
        })
        .collect();
    write_csv(
        out,
        "rate_sweep.csv",
        "rate_per_s,mean_aoi_s,mean_power_W,tx_util,cpu_util,diverged",
        &rows,
    )?;
    let mut artifacts = vec!["rate_sweep.csv".to_string()];

    let operating_point = match aoi.aoi_max {
        Some(budget) => match optimal_rate_for_aoi(&aoi.base, budget, &aoi.rate_grid)? {
            Some((rate, r)) => json!({
                "aoi_budget_s": budget,
                "rate_per_s": rate,
                "mean_aoi_s": r.mean_aoi,
                "mean_power_W": r.mean_power,
            }),
            None => json!({ "aoi_budget_s": budget, "rate_per_s": Value::Null }),
        },
        None => Value::Null,
    };
    let results = json!({
        "sweep": sweep.iter().map(|(rate, r)| json!({
            "rate_per_s": rate,
            "mean_aoi_s": r.mean_aoi,
            "mean_power_W": r.mean_power,
            "tx_util": r.tx_utilization,
            "cpu_util": r.cpu_utilization,
            "diverged": r.diverged,
        })).collect::<Vec<_>>(),
        "operating_point": operating_point,
    });

    if plot {
        let aoi_series = vec![Series {
            name: "mean age".to_string(),
            points: sweep.iter().map(|&(rate, r)| (rate, r.mean_aoi)).collect(),
        }];
        try_plot(
            out,
            "aoi_vs_rate.svg",
            "Mean age of information vs generation rate",
            "generation rate (1/s)",
            "mean age (s)",
            &aoi_series,
            &mut artifacts,
        );
        let power_series = vec![Series {
            name: "mean power".to_string(),
            points: sweep.iter().map(|&(rate, r)| (rate, r.mean_power)).collect(),
        }];
        try_plot(
            out,
            "power_vs_rate.svg",
            "Mean power vs generation rate",
            "generation rate (1/s)",
            "mean power (W)",
            &power_series,
            &mut artifacts,
        );
    }
    Ok((artifacts, results))
}

/// Runs the scenario of `cfg` and writes all artifacts into `out`.
pub fn execute(cfg: &Config, seed: u64, out: &Path, plot: bool) -> anyhow::Result<()> {
    let t0 = Instant::now();
    std::fs::create_dir_all(out)
        .with_context(|| format!("creating output directory {}", out.display()))?;
    let (artifacts, results) = match cfg.scenario() {
        Scenario::A => run_a(cfg, seed, out, plot)?,
        Scenario::B => run_b(cfg, seed, out, plot)?,
        Scenario::C => run_c(cfg, seed, out, plot)?,
    };
    let report = json!({
        "command": format!("run scenario-{}", cfg.scenario().name()),
        "config_digest": digest(cfg),
        "seed": seed,
        "generated_unix_ms": SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_millis() as u64)
            .unwrap_or(0),
        "wall_clock_s": t0.elapsed().as_secs_f64(),
        "artifacts": artifacts,
        "results": results,
    });
    let mut text = serde_json::to_string_pretty(&report).expect("valid JSON");
    text.push('\n');
    std::fs::write(out.join("report.json"), text).context("writing report.json")?;

    let names: Vec<&str> = report["artifacts"]
        .as_array()
        .unwrap()
        .iter()
        .filter_map(|v| v.as_str())
        .collect();
    println!(
        "scenario-{} done in {:.2}s, wrote {} and report.json under {}",
        cfg.scenario().name(),
        t0.elapsed().as_secs_f64(),
        names.join(", "),
        out.display()
    );
    Ok(())
}
