//! Scenario configuration files: strict UTF-8 JSON with unit-tagged values.
//!
//! Parsing rejects unknown keys, missing units, and model invariant
//! violations, reporting every problem with its key path. A parsed config can
//! be re-emitted in canonical form (SI units, resolved defaults, sorted
//! nodes); the SHA-256 of that emission is the config digest, which changes
//! exactly when the config's meaning changes, not with formatting.

use std::collections::BTreeSet;

use fog2c_core::workload::{Dist, SourceSpec};
use fog2c_core::{
    catalog, AccountingScope, AoiScenario, ComputeModel, LinkModel, LinkSpec, NodeSpec,
    RequestDistribution, Strategy, Tier, Topology,
};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::quantity::Dim;

/// One problem found while parsing or validating a config.
#[derive(Debug, Clone, PartialEq)]
pub struct Issue {
    /// Key path, e.g. `topology.links[2].model.eps`.
    pub path: String,
    pub message: String,
}

impl std::fmt::Display for Issue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    A,
    B,
    C,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::A => "a",
            Scenario::B => "b",
            Scenario::C => "c",
        }
    }

    pub fn parse(s: &str) -> Option<Scenario> {
        match s {
            "a" => Some(Scenario::A),
            "b" => Some(Scenario::B),
            "c" => Some(Scenario::C),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TopologySection {
    pub nodes: Vec<NodeSpec>,
    /// Directed; `"bidirectional": true` on a wired link expands to two.
    pub links: Vec<LinkSpec>,
}

#[derive(Debug, Clone)]
pub struct WorkloadSection {
    /// Number of requests; scenario a only. Scenario b sizes each sweep
    /// point with `experiment.requests_per_size` instead.
    pub count: Option<u64>,
    /// Whether the config spelled out a size distribution; scenario b
    /// forbids it because `experiment.size_grid` drives the size.
    pub size_given: bool,
    /// For scenario b, `size` holds a placeholder the sweep replaces.
    pub dist: RequestDistribution,
}

#[derive(Debug, Clone)]
pub struct AoiSection {
    /// Template scenario; `rate` holds the first grid point and is replaced
    /// per sweep step.
    pub base: AoiScenario,
    pub rate_grid: Vec<f64>,
    /// Age budget for the operating-point search; `None` skips it.
    pub aoi_max: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct ExperimentSection {
    pub scenario: Scenario,
    pub seed: u64,
    pub scope: AccountingScope,
    pub strategies: Vec<Strategy>,
    /// Request sizes swept by scenario b, in bits.
    pub size_grid: Vec<f64>,
    pub requests_per_size: u64,
    pub aoi: Option<AoiSection>,
}

#[derive(Debug, Clone)]
pub struct OutputSection {
    pub directory: Option<String>,
    /// Always contains `csv`; `svg` additionally enables plots.
    pub formats: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct Config {
    pub topology: Option<TopologySection>,
    pub workload: Option<WorkloadSection>,
    pub experiment: ExperimentSection,
    pub output: OutputSection,
}

impl Config {
    pub fn scenario(&self) -> Scenario {
        self.experiment.scenario
    }

    pub fn wants_svg(&self) -> bool {
        self.output.formats.iter().any(|f| f == "svg")
    }
}

struct Ctx {
    issues: Vec<Issue>,
}

impl Ctx {
    fn err(&mut self, path: &str, message: impl Into<String>) {
        self.issues.push(Issue { path: path.to_string(), message: message.into() });
    }
}

fn as_obj<'a>(v: &'a Value, path: &str, ctx: &mut Ctx) -> Option<&'a Map<String, Value>> {
    match v.as_object() {
        Some(m) => Some(m),
        None => {
            ctx.err(path, "expected an object");
            None
        }
    }
}

fn as_array<'a>(v: &'a Value, path: &str, ctx: &mut Ctx) -> Option<&'a Vec<Value>> {
    match v.as_array() {
        Some(a) => Some(a),
        None => {
            ctx.err(path, "expected an array");
            None
        }
    }
}

fn check_keys(map: &Map<String, Value>, allowed: &[&str], path: &str, ctx: &mut Ctx) {
    for key in map.keys() {
        if !allowed.contains(&key.as_str()) {
            ctx.err(
                &format!("{path}.{key}"),
                format!("unknown key (expected one of {})", allowed.join(", ")),
            );
        }
    }
}

fn require<'a>(
    map: &'a Map<String, Value>,
    key: &str,
    path: &str,
    ctx: &mut Ctx,
) -> Option<&'a Value> {
    match map.get(key) {
        Some(v) => Some(v),
        None => {
            ctx.err(path, format!("missing required key \"{key}\""));
            None
        }
    }
}

fn string<'a>(map: &'a Map<String, Value>, key: &str, path: &str, ctx: &mut Ctx) -> Option<&'a str> {
    let v = require(map, key, path, ctx)?;
    match v.as_str() {
        Some(s) => Some(s),
        None => {
            ctx.err(&format!("{path}.{key}"), "expected a string");
            None
        }
    }
}

fn uint(map: &Map<String, Value>, key: &str, path: &str, ctx: &mut Ctx) -> Option<u64> {
    let v = require(map, key, path, ctx)?;
    match v.as_u64() {
        Some(n) => Some(n),
        None => {
            ctx.err(&format!("{path}.{key}"), "expected a non-negative integer");
            None
        }
    }
}

/// Bare dimensionless number (model exponents, efficiencies, weights).
fn number_value(v: &Value, path: &str, ctx: &mut Ctx) -> Option<f64> {
    match v.as_f64() {
        Some(x) if x.is_finite() => Some(x),
        _ => {
            ctx.err(path, "expected a finite dimensionless number");
            None
        }
    }
}

fn number(map: &Map<String, Value>, key: &str, path: &str, ctx: &mut Ctx) -> Option<f64> {
    let v = require(map, key, path, ctx)?;
    number_value(v, &format!("{path}.{key}"), ctx)
}

/// Unit-tagged quantity; a bare JSON number is rejected so units are never
/// guessed.
fn quantity_value(v: &Value, dim: Dim, path: &str, ctx: &mut Ctx) -> Option<f64> {
    match v {
        Value::String(s) => match dim.parse(s) {
            Ok(x) => Some(x),
            Err(msg) => {
                ctx.err(path, msg);
                None
            }
        },
        Value::Number(_) => {
            ctx.err(path, format!("missing unit: write e.g. \"<number> {}\"", dim.si_tag()));
            None
        }
        _ => {
            ctx.err(path, "expected a \"<number> <unit>\" string");
            None
        }
    }
}

fn quantity(
    map: &Map<String, Value>,
    key: &str,
    dim: Dim,
    path: &str,
    ctx: &mut Ctx,
) -> Option<f64> {
    let v = require(map, key, path, ctx)?;
    quantity_value(v, dim, &format!("{path}.{key}"), ctx)
}

fn quantity_or(
    map: &Map<String, Value>,
    key: &str,
    dim: Dim,
    default: f64,
    path: &str,
    ctx: &mut Ctx,
) -> Option<f64> {
    match map.get(key) {
        Some(v) => quantity_value(v, dim, &format!("{path}.{key}"), ctx),
        None => Some(default),
    }
}

fn parse_compute(v: &Value, path: &str, ctx: &mut Ctx) -> Option<ComputeModel> {
    let map = as_obj(v, path, ctx)?;
    check_keys(map, &["f_min", "f_max", "ops_per_cycle", "p_static", "kappa", "alpha"], path, ctx);
    let alpha = number(map, "alpha", path, ctx);
    let f_min = quantity(map, "f_min", Dim::Frequency, path, ctx);
    let f_max = quantity(map, "f_max", Dim::Frequency, path, ctx);
    let ops_per_cycle = number(map, "ops_per_cycle", path, ctx);
    let p_static = quantity(map, "p_static", Dim::Power, path, ctx);
    let kappa = alpha.and_then(|a| quantity(map, "kappa", Dim::Kappa { alpha: a }, path, ctx));
    let model = ComputeModel {
        f_min: f_min?,
        f_max: f_max?,
        ops_per_cycle: ops_per_cycle?,
        p_static: p_static?,
        kappa: kappa?,
        alpha: alpha?,
    };
    for msg in model.violations() {
        ctx.err(path, msg);
    }
    Some(model)
}

fn parse_node(v: &Value, path: &str, ctx: &mut Ctx) -> Option<NodeSpec> {
    let map = as_obj(v, path, ctx)?;
    check_keys(map, &["id", "tier", "compute"], path, ctx);
    let id = string(map, "id", path, ctx)?.to_string();
    let tier_name = string(map, "tier", path, ctx)?;
    let tier = match Tier::parse(tier_name) {
        Some(t) => t,
        None => {
            ctx.err(
                &format!("{path}.tier"),
                format!("unknown tier \"{tier_name}\" (device, access_point, fog, cloud)"),
            );
            return None;
        }
    };
    let compute = match map.get("compute") {
        Some(c) => Some(parse_compute(c, &format!("{path}.compute"), ctx)?),
        None => None,
    };
    Some(NodeSpec { id, tier, compute })
}

fn parse_link_model(v: &Value, path: &str, ctx: &mut Ctx) -> Option<LinkModel> {
    let map = as_obj(v, path, ctx)?;
    let kind = string(map, "type", path, ctx)?;
    let model = match kind {
        "wireless_catalog" => {
            check_keys(
                map,
                &["type", "eps_tx", "eps_rx", "rate", "base_latency", "mac_mean_delay"],
                path,
                ctx,
            );
            LinkModel::WirelessCatalog(fog2c_core::WirelessCatalogModel {
                eps_tx: quantity(map, "eps_tx", Dim::EnergyPerBit, path, ctx)?,
                eps_rx: quantity(map, "eps_rx", Dim::EnergyPerBit, path, ctx)?,
                rate: quantity(map, "rate", Dim::Rate, path, ctx)?,
                base_latency: quantity_or(map, "base_latency", Dim::Time, 0.0, path, ctx)?,
                mac_mean_delay: quantity_or(map, "mac_mean_delay", Dim::Time, 0.0, path, ctx)?,
            })
        }
        "wireless_parametric" => {
            check_keys(
                map,
                &[
                    "type",
                    "bandwidth",
                    "noise_density",
                    "path_loss",
                    "pa_efficiency",
                    "circuit_power_tx",
                    "circuit_power_rx",
                    "rate_max",
                ],
                path,
                ctx,
            );
            LinkModel::WirelessParametric(fog2c_core::WirelessParametricModel {
                bandwidth: quantity(map, "bandwidth", Dim::Frequency, path, ctx)?,
                noise_density: quantity(map, "noise_density", Dim::NoiseDensity, path, ctx)?,
                path_loss_db: quantity(map, "path_loss", Dim::Decibel, path, ctx)?,
                pa_efficiency: number(map, "pa_efficiency", path, ctx)?,
                circuit_power_tx: quantity(map, "circuit_power_tx", Dim::Power, path, ctx)?,
                circuit_power_rx: quantity(map, "circuit_power_rx", Dim::Power, path, ctx)?,
                rate_max: quantity(map, "rate_max", Dim::Rate, path, ctx)?,
            })
        }
        "wired" => {
            check_keys(map, &["type", "eps", "capacity", "prop_delay", "proc_delay"], path, ctx);
            LinkModel::Wired(fog2c_core::WiredHopModel {
                eps: quantity(map, "eps", Dim::EnergyPerBit, path, ctx)?,
                capacity: quantity(map, "capacity", Dim::Rate, path, ctx)?,
                prop_delay: quantity_or(map, "prop_delay", Dim::Time, 0.0, path, ctx)?,
                proc_delay: quantity_or(map, "proc_delay", Dim::Time, 0.0, path, ctx)?,
            })
        }
        "wireless_ref" => {
            check_keys(map, &["type", "name", "mac_mean_delay"], path, ctx);
            let name = string(map, "name", path, ctx)?;
            let entry = catalog::WIRELESS.iter().find(|e| e.name == name);
            match entry {
                Some(e) => {
                    let mut m = e.model;
                    if map.contains_key("mac_mean_delay") {
                        m.mac_mean_delay =
                            quantity(map, "mac_mean_delay", Dim::Time, path, ctx)?;
                    }
                    LinkModel::WirelessCatalog(m)
                }
                None => {
                    let known: Vec<_> = catalog::WIRELESS.iter().map(|e| e.name).collect();
                    ctx.err(
                        &format!("{path}.name"),
                        format!("unknown wireless entry \"{name}\" (have {})", known.join(", ")),
                    );
                    return None;
                }
            }
        }
        "wired_ref" => {
            check_keys(map, &["type", "name", "prop_delay"], path, ctx);
            let name = string(map, "name", path, ctx)?;
            let entry = catalog::WIRED.iter().find(|e| e.name == name);
            match entry {
                Some(e) => {
                    let mut m = e.model;
                    if map.contains_key("prop_delay") {
                        m.prop_delay = quantity(map, "prop_delay", Dim::Time, path, ctx)?;
                    }
                    LinkModel::Wired(m)
                }
                None => {
                    let known: Vec<_> = catalog::WIRED.iter().map(|e| e.name).collect();
                    ctx.err(
                        &format!("{path}.name"),
                        format!("unknown wired entry \"{name}\" (have {})", known.join(", ")),
                    );
                    return None;
                }
            }
        }
        other => {
            ctx.err(
                &format!("{path}.type"),
                format!(
                    "unknown link model \"{other}\" (wireless_catalog, wireless_parametric, \
                     wired, wireless_ref, wired_ref)"
                ),
            );
            return None;
        }
    };
    for msg in model.violations() {
        ctx.err(path, msg);
    }
    Some(model)
}

fn parse_link(v: &Value, path: &str, ctx: &mut Ctx, out: &mut Vec<LinkSpec>) {
    let Some(map) = as_obj(v, path, ctx) else { return };
    check_keys(map, &["from", "to", "model", "bidirectional"], path, ctx);
    let from = string(map, "from", path, ctx).map(str::to_string);
    let to = string(map, "to", path, ctx).map(str::to_string);
    let bidirectional = match map.get("bidirectional") {
        Some(Value::Bool(b)) => *b,
        Some(_) => {
            ctx.err(&format!("{path}.bidirectional"), "expected true or false");
            false
        }
        None => false,
    };
    let model = match require(map, "model", path, ctx) {
        Some(m) => parse_link_model(m, &format!("{path}.model"), ctx),
        None => None,
    };
    let (Some(from), Some(to), Some(model)) = (from, to, model) else { return };
    if bidirectional && model.is_wireless() {
        ctx.err(
            path,
            "wireless links already serve both directions; drop \"bidirectional\"",
        );
        return;
    }
    if bidirectional {
        out.push(LinkSpec { from: from.clone(), to: to.clone(), model });
        out.push(LinkSpec { from: to, to: from, model });
    } else {
        out.push(LinkSpec { from, to, model });
    }
}

fn parse_topology(v: &Value, ctx: &mut Ctx) -> Option<TopologySection> {
    let map = as_obj(v, "topology", ctx)?;
    check_keys(map, &["nodes", "links"], "topology", ctx);
    let mut nodes = Vec::new();
    if let Some(arr) = require(map, "nodes", "topology", ctx)
        .and_then(|v| as_array(v, "topology.nodes", ctx))
    {
        for (i, nv) in arr.iter().enumerate() {
            if let Some(n) = parse_node(nv, &format!("topology.nodes[{i}]"), ctx) {
                nodes.push(n);
            }
        }
    }
    let mut links = Vec::new();
    if let Some(arr) = require(map, "links", "topology", ctx)
        .and_then(|v| as_array(v, "topology.links", ctx))
    {
        for (i, lv) in arr.iter().enumerate() {
            parse_link(lv, &format!("topology.links[{i}]"), ctx, &mut links);
        }
    }
    Some(TopologySection { nodes, links })
}

fn parse_dist(v: &Value, dim: Dim, path: &str, ctx: &mut Ctx) -> Option<Dist> {
    let map = as_obj(v, path, ctx)?;
    check_keys(map, &["constant", "uniform", "lognormal"], path, ctx);
    let given: Vec<_> = ["constant", "uniform", "lognormal"]
        .iter()
        .filter(|k| map.contains_key(**k))
        .collect();
    if given.len() != 1 {
        ctx.err(path, "give exactly one of \"constant\", \"uniform\", \"lognormal\"");
        return None;
    }
    if let Some(c) = map.get("constant") {
        return Some(Dist::Constant(quantity_value(c, dim, &format!("{path}.constant"), ctx)?));
    }
    if let Some(u) = map.get("uniform") {
        let upath = format!("{path}.uniform");
        let arr = as_array(u, &upath, ctx)?;
        if arr.len() != 2 {
            ctx.err(&upath, "expected [low, high]");
            return None;
        }
        let low = quantity_value(&arr[0], dim, &format!("{upath}[0]"), ctx)?;
        let high = quantity_value(&arr[1], dim, &format!("{upath}[1]"), ctx)?;
        return Some(Dist::Uniform { low, high });
    }
    let l = map.get("lognormal").unwrap();
    let lpath = format!("{path}.lognormal");
    let lmap = as_obj(l, &lpath, ctx)?;
    check_keys(lmap, &["mu", "sigma"], &lpath, ctx);
    Some(Dist::LogNormal {
        mu: number(lmap, "mu", &lpath, ctx)?,
        sigma: number(lmap, "sigma", &lpath, ctx)?,
    })
}

fn parse_workload(v: &Value, ctx: &mut Ctx) -> Option<WorkloadSection> {
    let map = as_obj(v, "workload", ctx)?;
    check_keys(
        map,
        &["count", "size", "intensity", "deadline", "result_size", "sources"],
        "workload",
        ctx,
    );
    let count = match map.get("count") {
        Some(_) => uint(map, "count", "workload", ctx).map(Some),
        None => Some(None),
    };
    let size = match map.get("size") {
        Some(v) => parse_dist(v, Dim::Size, "workload.size", ctx).map(Some),
        None => Some(None),
    };
    let intensity = require(map, "intensity", "workload", ctx)
        .and_then(|v| parse_dist(v, Dim::Intensity, "workload.intensity", ctx));
    let deadline = require(map, "deadline", "workload", ctx)
        .and_then(|v| parse_dist(v, Dim::Time, "workload.deadline", ctx));
    let result_size = match map.get("result_size") {
        Some(v) => parse_dist(v, Dim::Size, "workload.result_size", ctx),
        None => Some(Dist::Constant(0.0)),
    };
    let mut sources = Vec::new();
    if let Some(arr) = require(map, "sources", "workload", ctx)
        .and_then(|v| as_array(v, "workload.sources", ctx))
    {
        for (i, sv) in arr.iter().enumerate() {
            let spath = format!("workload.sources[{i}]");
            let Some(smap) = as_obj(sv, &spath, ctx) else { continue };
            check_keys(smap, &["node", "weight", "arrival"], &spath, ctx);
            let node = string(smap, "node", &spath, ctx).map(str::to_string);
            let weight = match smap.get("weight") {
                Some(w) => number_value(w, &format!("{spath}.weight"), ctx),
                None => Some(1.0),
            };
            let arrival = match smap.get("arrival") {
                Some(Value::String(s)) => Some(Some(s.clone())),
                Some(_) => {
                    ctx.err(&format!("{spath}.arrival"), "expected a node id string");
                    None
                }
                None => Some(None),
            };
            if let (Some(node), Some(weight), Some(arrival)) = (node, weight, arrival) {
                sources.push(SourceSpec { node, weight, arrival });
            }
        }
    }
    let size = size?;
    let dist = RequestDistribution {
        size: size.clone().unwrap_or(Dist::Constant(1.0)),
        intensity: intensity?,
        deadline: deadline?,
        result_size: result_size?,
        sources,
    };
    for msg in dist.violations() {
        ctx.err("workload", msg);
    }
    Some(WorkloadSection { count: count?, size_given: size.is_some(), dist })
}

fn parse_aoi(v: &Value, path: &str, ctx: &mut Ctx) -> Option<AoiSection> {
    let map = as_obj(v, path, ctx)?;
    check_keys(
        map,
        &[
            "slot",
            "size",
            "intensity",
            "wireless",
            "wired",
            "compute",
            "horizon",
            "warmup",
            "idle_power",
            "rate_grid",
            "aoi_max",
        ],
        path,
        ctx,
    );
    let slot = quantity(map, "slot", Dim::Time, path, ctx);
    let size = quantity(map, "size", Dim::Size, path, ctx);
    let intensity = quantity(map, "intensity", Dim::Intensity, path, ctx);
    let wireless = require(map, "wireless", path, ctx).and_then(|v| {
        let wpath = format!("{path}.wireless");
        match parse_link_model(v, &wpath, ctx)? {
            LinkModel::WirelessParametric(m) => Some(m),
            _ => {
                ctx.err(&wpath, "the slotted pipeline needs a wireless_parametric link");
                None
            }
        }
    });
    let mut wired = Vec::new();
    let mut wired_ok = true;
    match require(map, "wired", path, ctx) {
        Some(v) => {
            if let Some(arr) = as_array(v, &format!("{path}.wired"), ctx) {
                for (i, hv) in arr.iter().enumerate() {
                    let hpath = format!("{path}.wired[{i}]");
                    match parse_link_model(hv, &hpath, ctx) {
                        Some(LinkModel::Wired(h)) => wired.push(h),
                        Some(_) => {
                            ctx.err(&hpath, "expected a wired hop");
                            wired_ok = false;
                        }
                        None => wired_ok = false,
                    }
                }
            } else {
                wired_ok = false;
            }
        }
        None => wired_ok = false,
    }
    let compute = require(map, "compute", path, ctx)
        .and_then(|v| parse_compute(v, &format!("{path}.compute"), ctx));
    let horizon = quantity(map, "horizon", Dim::Time, path, ctx);
    let warmup = quantity_or(map, "warmup", Dim::Time, 0.0, path, ctx);
    let idle_power = quantity_or(map, "idle_power", Dim::Power, 0.0, path, ctx);
    let mut rate_grid = Vec::new();
    let mut grid_ok = true;
    match require(map, "rate_grid", path, ctx) {
        Some(v) => {
            let gpath = format!("{path}.rate_grid");
            if let Some(arr) = as_array(v, &gpath, ctx) {
                if arr.is_empty() {
                    ctx.err(&gpath, "rate grid must not be empty");
                    grid_ok = false;
                }
                for (i, rv) in arr.iter().enumerate() {
                    match quantity_value(rv, Dim::PerSecond, &format!("{gpath}[{i}]"), ctx) {
                        Some(r) if r > 0.0 && r.is_finite() => rate_grid.push(r),
                        Some(r) => {
                            ctx.err(&format!("{gpath}[{i}]"), format!("rate {r} must be positive"));
                            grid_ok = false;
                        }
                        None => grid_ok = false,
                    }
                }
            } else {
                grid_ok = false;
            }
        }
        None => grid_ok = false,
    }
    let aoi_max = match map.get("aoi_max") {
        Some(v) => match quantity_value(v, Dim::Time, &format!("{path}.aoi_max"), ctx) {
            Some(t) if t > 0.0 && t.is_finite() => Some(Some(t)),
            Some(t) => {
                ctx.err(&format!("{path}.aoi_max"), format!("age budget {t} must be positive"));
                None
            }
            None => None,
        },
        None => Some(None),
    };
    if !(wired_ok && grid_ok) {
        return None;
    }
    let base = AoiScenario {
        rate: *rate_grid.first()?,
        slot: slot?,
        size: size?,
        intensity: intensity?,
        wireless: wireless?,
        wired,
        compute: compute?,
        horizon: horizon?,
        warmup: warmup?,
        idle_power: idle_power?,
    };
    for msg in base.violations() {
        ctx.err(path, msg);
    }
    Some(AoiSection { base, rate_grid, aoi_max: aoi_max? })
}

fn default_strategies(scenario: Scenario) -> Vec<Strategy> {
    match scenario {
        Scenario::A => vec![
            Strategy::FullOpt,
            Strategy::NearestOptFreq,
            Strategy::NearestMaxFreq,
        ],
        Scenario::B => Strategy::ALL.to_vec(),
        Scenario::C => Vec::new(),
    }
}

fn default_scope(scenario: Scenario) -> AccountingScope {
    match scenario {
        Scenario::A => AccountingScope::FOG_CLOUD,
        _ => AccountingScope::ALL,
    }
}

fn parse_experiment(v: &Value, ctx: &mut Ctx) -> Option<ExperimentSection> {
    let map = as_obj(v, "experiment", ctx)?;
    check_keys(
        map,
        &["scenario", "seed", "scope", "strategies", "size_grid", "requests_per_size", "aoi"],
        "experiment",
        ctx,
    );
    let scenario_name = string(map, "scenario", "experiment", ctx)?;
    let scenario = match Scenario::parse(scenario_name) {
        Some(s) => s,
        None => {
            ctx.err(
                "experiment.scenario",
                format!("unknown scenario \"{scenario_name}\" (a, b, c)"),
            );
            return None;
        }
    };
    let seed = match map.get("seed") {
        Some(_) => uint(map, "seed", "experiment", ctx)?,
        None => 0,
    };

    let forbid = |map: &Map<String, Value>, key: &str, why: &str, ctx: &mut Ctx| {
        if map.contains_key(key) {
            ctx.err(&format!("experiment.{key}"), why.to_string());
        }
    };
    match scenario {
        Scenario::A => {
            forbid(map, "size_grid", "only scenario b sweeps request sizes", ctx);
            forbid(map, "requests_per_size", "only scenario b sweeps request sizes", ctx);
            forbid(map, "aoi", "only scenario c runs the slotted pipeline", ctx);
        }
        Scenario::B => {
            forbid(map, "aoi", "only scenario c runs the slotted pipeline", ctx);
        }
        Scenario::C => {
            forbid(map, "size_grid", "only scenario b sweeps request sizes", ctx);
            forbid(map, "requests_per_size", "only scenario b sweeps request sizes", ctx);
            forbid(map, "scope", "scenario c has a fixed device-plus-network pipeline", ctx);
            forbid(map, "strategies", "scenario c does not compare placement strategies", ctx);
        }
    }

    let scope = match map.get("scope") {
        Some(v) if scenario != Scenario::C => {
            let s = v.as_str();
            match s.and_then(AccountingScope::parse) {
                Some(sc) if sc.include_device_energy || sc.include_fog_cloud_energy => sc,
                Some(_) => {
                    ctx.err("experiment.scope", "scope must include at least one tier");
                    default_scope(scenario)
                }
                None => {
                    ctx.err(
                        "experiment.scope",
                        format!(
                            "unknown scope {:?} (all, fog_cloud, device)",
                            s.unwrap_or_default()
                        ),
                    );
                    default_scope(scenario)
                }
            }
        }
        _ => default_scope(scenario),
    };

    let strategies = match map.get("strategies") {
        Some(v) if scenario != Scenario::C => {
            let spath = "experiment.strategies";
            let mut out = Vec::new();
            if let Some(arr) = as_array(v, spath, ctx) {
                if arr.is_empty() {
                    ctx.err(spath, "list at least one strategy");
                }
                for (i, sv) in arr.iter().enumerate() {
                    let ipath = format!("{spath}[{i}]");
                    match sv.as_str().map(|s| (s, Strategy::parse(s))) {
                        Some((_, Some(st))) => {
                            if out.contains(&st) {
                                ctx.err(&ipath, format!("duplicate strategy \"{}\"", st.name()));
                            } else {
                                out.push(st);
                            }
                        }
                        Some((s, None)) => {
                            let known: Vec<_> =
                                Strategy::ALL.iter().map(|s| s.name()).collect();
                            ctx.err(
                                &ipath,
                                format!("unknown strategy \"{s}\" (have {})", known.join(", ")),
                            );
                        }
                        None => ctx.err(&ipath, "expected a strategy name string"),
                    }
                }
            }
            out
        }
        _ => default_strategies(scenario),
    };

    let mut size_grid = Vec::new();
    if scenario == Scenario::B {
        match require(map, "size_grid", "experiment", ctx) {
            Some(v) => {
                let gpath = "experiment.size_grid";
                if let Some(arr) = as_array(v, gpath, ctx) {
                    if arr.is_empty() {
                        ctx.err(gpath, "size grid must not be empty");
                    }
                    for (i, sv) in arr.iter().enumerate() {
                        let ipath = format!("{gpath}[{i}]");
                        if let Some(s) = quantity_value(sv, Dim::Size, &ipath, ctx) {
                            if s > 0.0 && s.is_finite() {
                                size_grid.push(s);
                            } else {
                                ctx.err(&ipath, format!("size {s} must be positive"));
                            }
                        }
                    }
                }
            }
            None => {}
        }
    }
    let requests_per_size = if scenario == Scenario::B {
        match uint(map, "requests_per_size", "experiment", ctx) {
            Some(n) if n > 0 => n,
            Some(_) => {
                ctx.err("experiment.requests_per_size", "must be at least 1");
                1
            }
            None => 1,
        }
    } else {
        0
    };

    let aoi = if scenario == Scenario::C {
        match require(map, "aoi", "experiment", ctx) {
            Some(v) => Some(parse_aoi(v, "experiment.aoi", ctx)?),
            None => return None,
        }
    } else {
        None
    };

    Some(ExperimentSection {
        scenario,
        seed,
        scope,
        strategies,
        size_grid,
        requests_per_size,
        aoi,
    })
}

fn parse_output(v: &Value, ctx: &mut Ctx) -> OutputSection {
    let default = OutputSection { directory: None, formats: vec!["csv".to_string()] };
    let Some(map) = as_obj(v, "output", ctx) else { return default };
    check_keys(map, &["directory", "formats"], "output", ctx);
    let directory = match map.get("directory") {
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => {
            ctx.err("output.directory", "expected a path string");
            None
        }
        None => None,
    };
    let mut formats: BTreeSet<String> = BTreeSet::new();
    formats.insert("csv".to_string());
    if let Some(v) = map.get("formats") {
        if let Some(arr) = as_array(v, "output.formats", ctx) {
            for (i, fv) in arr.iter().enumerate() {
                match fv.as_str() {
                    Some("csv") => {}
                    Some("svg") => {
                        formats.insert("svg".to_string());
                    }
                    Some(other) => ctx.err(
                        &format!("output.formats[{i}]"),
                        format!("unknown format \"{other}\" (csv, svg)"),
                    ),
                    None => ctx.err(&format!("output.formats[{i}]"), "expected a format string"),
                }
            }
        }
    }
    OutputSection { directory, formats: formats.into_iter().collect() }
}

/// Checks everything the sections cannot check alone: graph consistency and
/// that workload sources point at real nodes.
fn cross_validate(cfg: &Config, ctx: &mut Ctx) {
    match cfg.experiment.scenario {
        Scenario::A | Scenario::B => {
            let Some(topo) = &cfg.topology else {
                ctx.err("topology", "scenarios a and b need a topology section");
                return;
            };
            let Some(wl) = &cfg.workload else {
                ctx.err("workload", "scenarios a and b need a workload section");
                return;
            };
            match Topology::new(topo.nodes.clone(), topo.links.clone()) {
                Ok(t) => {
                    for (i, s) in wl.dist.sources.iter().enumerate() {
                        if t.node_index(&s.node).is_none() {
                            ctx.err(
                                &format!("workload.sources[{i}].node"),
                                format!("unknown node \"{}\"", s.node),
                            );
                        }
                        if let Some(ap) = &s.arrival {
                            if t.node_index(ap).is_none() {
                                ctx.err(
                                    &format!("workload.sources[{i}].arrival"),
                                    format!("unknown node \"{ap}\""),
                                );
                            }
                        }
                    }
                }
                Err(errs) => {
                    for msg in errs {
                        ctx.err("topology", msg);
                    }
                }
            }
            match (cfg.experiment.scenario, wl.count) {
                (Scenario::A, None) => ctx.err("workload", "missing required key \"count\""),
                (Scenario::A, Some(0)) => ctx.err("workload.count", "must be at least 1"),
                (Scenario::B, Some(_)) => ctx.err(
                    "workload.count",
                    "scenario b sizes each sweep point with experiment.requests_per_size",
                ),
                _ => {}
            }
            match (cfg.experiment.scenario, wl.size_given) {
                (Scenario::A, false) => ctx.err("workload", "missing required key \"size\""),
                (Scenario::B, true) => ctx.err(
                    "workload.size",
                    "scenario b draws sizes from experiment.size_grid; drop this key",
                ),
                _ => {}
            }
        }
        Scenario::C => {
            if cfg.topology.is_some() {
                ctx.err("topology", "scenario c defines its pipeline under experiment.aoi");
            }
            if cfg.workload.is_some() {
                ctx.err("workload", "scenario c generates its own periodic stream");
            }
        }
    }
}

/// Parses and fully validates a config. All problems are reported at once.
pub fn parse_config(text: &str) -> Result<Config, Vec<Issue>> {
    if text.trim().is_empty() {
        return Err(vec![Issue {
            path: "$".to_string(),
            message: "empty config: missing required sections \"experiment\" (and \
                      \"topology\"/\"workload\" for scenarios a and b)"
                .to_string(),
        }]);
    }
    let value: Value = serde_json::from_str(text).map_err(|e| {
        vec![Issue { path: "$".to_string(), message: format!("invalid JSON: {e}") }]
    })?;
    let mut ctx = Ctx { issues: Vec::new() };
    let Some(root) = as_obj(&value, "$", &mut ctx) else {
        return Err(ctx.issues);
    };
    check_keys(root, &["topology", "workload", "experiment", "output"], "$", &mut ctx);

    let experiment = match root.get("experiment") {
        Some(v) => parse_experiment(v, &mut ctx),
        None => {
            ctx.err("$", "missing required section \"experiment\"");
            None
        }
    };
    let topology = root.get("topology").and_then(|v| parse_topology(v, &mut ctx));
    let workload = root.get("workload").and_then(|v| parse_workload(v, &mut ctx));
    let output = match root.get("output") {
        Some(v) => parse_output(v, &mut ctx),
        None => OutputSection { directory: None, formats: vec!["csv".to_string()] },
    };

    let Some(experiment) = experiment else {
        return Err(ctx.issues);
    };
    let cfg = Config { topology, workload, experiment, output };
    cross_validate(&cfg, &mut ctx);
    if ctx.issues.is_empty() {
        Ok(cfg)
    } else {
        Err(ctx.issues)
    }
}

fn num(x: f64) -> Value {
    Value::Number(serde_json::Number::from_f64(x).expect("finite by validation"))
}

fn qty(x: f64, dim: Dim) -> Value {
    Value::String(dim.emit(x))
}

fn dist_value(d: &Dist, dim: Dim) -> Value {
    let mut m = Map::new();
    match *d {
        Dist::Constant(v) => {
            m.insert("constant".into(), qty(v, dim));
        }
        Dist::Uniform { low, high } => {
            m.insert("uniform".into(), Value::Array(vec![qty(low, dim), qty(high, dim)]));
        }
        Dist::LogNormal { mu, sigma } => {
            let mut p = Map::new();
            p.insert("mu".into(), num(mu));
            p.insert("sigma".into(), num(sigma));
            m.insert("lognormal".into(), Value::Object(p));
        }
    }
    Value::Object(m)
}

fn compute_value(c: &ComputeModel) -> Value {
    let mut m = Map::new();
    m.insert("alpha".into(), num(c.alpha));
    m.insert("f_max".into(), qty(c.f_max, Dim::Frequency));
    m.insert("f_min".into(), qty(c.f_min, Dim::Frequency));
    m.insert("kappa".into(), qty(c.kappa, Dim::Kappa { alpha: c.alpha }));
    m.insert("ops_per_cycle".into(), num(c.ops_per_cycle));
    m.insert("p_static".into(), qty(c.p_static, Dim::Power));
    Value::Object(m)
}

fn link_model_value(model: &LinkModel) -> Value {
    let mut m = Map::new();
    match model {
        LinkModel::WirelessCatalog(w) => {
            m.insert("type".into(), Value::String("wireless_catalog".into()));
            m.insert("eps_tx".into(), qty(w.eps_tx, Dim::EnergyPerBit));
            m.insert("eps_rx".into(), qty(w.eps_rx, Dim::EnergyPerBit));
            m.insert("rate".into(), qty(w.rate, Dim::Rate));
            m.insert("base_latency".into(), qty(w.base_latency, Dim::Time));
            m.insert("mac_mean_delay".into(), qty(w.mac_mean_delay, Dim::Time));
        }
        LinkModel::WirelessParametric(w) => {
            m.insert("type".into(), Value::String("wireless_parametric".into()));
            m.insert("bandwidth".into(), qty(w.bandwidth, Dim::Frequency));
            m.insert("noise_density".into(), qty(w.noise_density, Dim::NoiseDensity));
            m.insert("path_loss".into(), qty(w.path_loss_db, Dim::Decibel));
            m.insert("pa_efficiency".into(), num(w.pa_efficiency));
            m.insert("circuit_power_tx".into(), qty(w.circuit_power_tx, Dim::Power));
            m.insert("circuit_power_rx".into(), qty(w.circuit_power_rx, Dim::Power));
            m.insert("rate_max".into(), qty(w.rate_max, Dim::Rate));
        }
        LinkModel::Wired(w) => {
            m.insert("type".into(), Value::String("wired".into()));
            m.insert("eps".into(), qty(w.eps, Dim::EnergyPerBit));
            m.insert("capacity".into(), qty(w.capacity, Dim::Rate));
            m.insert("prop_delay".into(), qty(w.prop_delay, Dim::Time));
            m.insert("proc_delay".into(), qty(w.proc_delay, Dim::Time));
        }
    }
    Value::Object(m)
}

fn wired_hop_value(h: &fog2c_core::WiredHopModel) -> Value {
    link_model_value(&LinkModel::Wired(*h))
}

/// Canonical JSON form of a parsed config: SI units, defaults resolved,
/// nodes sorted by id, directed links sorted, keys alphabetical. Two configs
/// mean the same experiment exactly when their canonical forms match.
pub fn canonical_value(cfg: &Config) -> Value {
    let mut root = Map::new();

    let exp = &cfg.experiment;
    let mut e = Map::new();
    e.insert("scenario".into(), Value::String(exp.scenario.name().into()));
    e.insert("seed".into(), Value::from(exp.seed));
    match exp.scenario {
        Scenario::A | Scenario::B => {
            e.insert("scope".into(), Value::String(exp.scope.name().into()));
            e.insert(
                "strategies".into(),
                Value::Array(
                    exp.strategies.iter().map(|s| Value::String(s.name().into())).collect(),
                ),
            );
            if exp.scenario == Scenario::B {
                e.insert(
                    "size_grid".into(),
                    Value::Array(exp.size_grid.iter().map(|&s| qty(s, Dim::Size)).collect()),
                );
                e.insert("requests_per_size".into(), Value::from(exp.requests_per_size));
            }
        }
        Scenario::C => {
            let aoi = exp.aoi.as_ref().expect("validated");
            let mut a = Map::new();
            a.insert("slot".into(), qty(aoi.base.slot, Dim::Time));
            a.insert("size".into(), qty(aoi.base.size, Dim::Size));
            a.insert("intensity".into(), qty(aoi.base.intensity, Dim::Intensity));
            a.insert(
                "wireless".into(),
                link_model_value(&LinkModel::WirelessParametric(aoi.base.wireless)),
            );
            a.insert(
                "wired".into(),
                Value::Array(aoi.base.wired.iter().map(wired_hop_value).collect()),
            );
            a.insert("compute".into(), compute_value(&aoi.base.compute));
            a.insert("horizon".into(), qty(aoi.base.horizon, Dim::Time));
            a.insert("warmup".into(), qty(aoi.base.warmup, Dim::Time));
            a.insert("idle_power".into(), qty(aoi.base.idle_power, Dim::Power));
            a.insert(
                "rate_grid".into(),
                Value::Array(aoi.rate_grid.iter().map(|&r| qty(r, Dim::PerSecond)).collect()),
            );
            if let Some(t) = aoi.aoi_max {
                a.insert("aoi_max".into(), qty(t, Dim::Time));
            }
            e.insert("aoi".into(), Value::Object(a));
        }
    }
    root.insert("experiment".into(), Value::Object(e));

    let mut o = Map::new();
    if let Some(d) = &cfg.output.directory {
        o.insert("directory".into(), Value::String(d.clone()));
    }
    o.insert(
        "formats".into(),
        Value::Array(cfg.output.formats.iter().map(|f| Value::String(f.clone())).collect()),
    );
    root.insert("output".into(), Value::Object(o));

    if let Some(topo) = &cfg.topology {
        let mut nodes: Vec<&NodeSpec> = topo.nodes.iter().collect();
        nodes.sort_by(|a, b| a.id.cmp(&b.id));
        let node_vals: Vec<Value> = nodes
            .iter()
            .map(|n| {
                let mut m = Map::new();
                m.insert("id".into(), Value::String(n.id.clone()));
                m.insert("tier".into(), Value::String(n.tier.name().into()));
                if let Some(c) = &n.compute {
                    m.insert("compute".into(), compute_value(c));
                }
                Value::Object(m)
            })
            .collect();
        let mut link_vals: Vec<Value> = topo
            .links
            .iter()
            .map(|l| {
                let mut m = Map::new();
                m.insert("from".into(), Value::String(l.from.clone()));
                m.insert("to".into(), Value::String(l.to.clone()));
                m.insert("model".into(), link_model_value(&l.model));
                Value::Object(m)
            })
            .collect();
        link_vals.sort_by_key(|v| v.to_string());
        let mut t = Map::new();
        t.insert("nodes".into(), Value::Array(node_vals));
        t.insert("links".into(), Value::Array(link_vals));
        root.insert("topology".into(), Value::Object(t));
    }

    if let Some(wl) = &cfg.workload {
        let mut w = Map::new();
        if let Some(count) = wl.count {
            w.insert("count".into(), Value::from(count));
        }
        if wl.size_given {
            w.insert("size".into(), dist_value(&wl.dist.size, Dim::Size));
        }
        w.insert("intensity".into(), dist_value(&wl.dist.intensity, Dim::Intensity));
        w.insert("deadline".into(), dist_value(&wl.dist.deadline, Dim::Time));
        w.insert("result_size".into(), dist_value(&wl.dist.result_size, Dim::Size));
        w.insert(
            "sources".into(),
            Value::Array(
                wl.dist
                    .sources
                    .iter()
                    .map(|s| {
                        let mut m = Map::new();
                        m.insert("node".into(), Value::String(s.node.clone()));
                        m.insert("weight".into(), num(s.weight));
                        if let Some(a) = &s.arrival {
                            m.insert("arrival".into(), Value::String(a.clone()));
                        }
                        Value::Object(m)
                    })
                    .collect(),
            ),
        );
        root.insert("workload".into(), Value::Object(w));
    }

    Value::Object(root)
}

/// Canonical text form; `parse_config(emit_config(c))` succeeds and yields a
/// digest-equal config.
pub fn emit_config(cfg: &Config) -> String {
    let mut s = serde_json::to_string_pretty(&canonical_value(cfg)).expect("valid JSON value");
    s.push('\n');
    s
}

/// Hex SHA-256 of the canonical emission.
pub fn digest(cfg: &Config) -> String {
    let mut h = Sha256::new();
    h.update(emit_config(cfg).as_bytes());
    let out = h.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"{
        "topology": {
            "nodes": [
                {"id": "fog1", "tier": "fog", "compute": {
                    "f_min": "1 MHz", "f_max": "3 GHz", "ops_per_cycle": 4,
                    "p_static": "10 W", "kappa": "1e-27 W/Hz^3", "alpha": 3
                }},
                {"id": "ap1", "tier": "access_point"},
                {"id": "dev1", "tier": "device"}
            ],
            "links": [
                {"from": "dev1", "to": "ap1", "model": {
                    "type": "wireless_catalog", "eps_tx": "4.5e4 pJ/b",
                    "eps_rx": "3.9e4 pJ/b", "rate": "54 Mb/s", "base_latency": "1 ms"
                }},
                {"from": "ap1", "to": "fog1", "bidirectional": true, "model": {
                    "type": "wired", "eps": "1030 pJ/b", "capacity": "1 Gb/s",
                    "prop_delay": "0.1 ms"
                }}
            ]
        },
        "workload": {
            "count": 10,
            "size": {"uniform": ["2 MB", "6 MB"]},
            "intensity": {"constant": "100 op/b"},
            "deadline": {"constant": "0.5 s"},
            "sources": [{"node": "dev1", "weight": 1}]
        },
        "experiment": {"scenario": "a", "seed": 7, "scope": "fog_cloud"},
        "output": {"directory": "out"}
    }"#;

    #[test]
    fn parses_a_complete_config() {
        let cfg = parse_config(SMALL).unwrap();
        assert_eq!(cfg.scenario(), Scenario::A);
        assert_eq!(cfg.experiment.seed, 7);
        assert_eq!(cfg.experiment.strategies.len(), 3);
        let topo = cfg.topology.as_ref().unwrap();
        assert_eq!(topo.nodes.len(), 3);
        assert_eq!(topo.links.len(), 3, "bidirectional wired link expands to two");
        let wl = cfg.workload.as_ref().unwrap();
        assert_eq!(wl.count, Some(10));
        assert_eq!(wl.dist.result_size, Dist::Constant(0.0));
    }

    #[test]
    fn unknown_keys_are_rejected_with_their_path() {
        let bad = SMALL.replace("\"seed\": 7", "\"seed\": 7, \"sede\": 8");
        let errs = parse_config(&bad).unwrap_err();
        assert!(
            errs.iter().any(|e| e.path == "experiment.sede" && e.message.contains("unknown key")),
            "{errs:?}"
        );
    }

    #[test]
    fn missing_units_are_rejected() {
        let bad = SMALL.replace("\"0.5 s\"", "0.5");
        let errs = parse_config(&bad).unwrap_err();
        assert!(
            errs.iter().any(|e| e.path.contains("deadline") && e.message.contains("unit")),
            "{errs:?}"
        );
    }

    #[test]
    fn empty_file_reports_missing_sections() {
        let errs = parse_config("").unwrap_err();
        assert_eq!(errs.len(), 1);
        assert!(errs[0].message.contains("experiment"), "{errs:?}");
        let errs = parse_config("   \n").unwrap_err();
        assert!(errs[0].message.contains("missing"), "{errs:?}");
    }

    #[test]
    fn digest_ignores_formatting_but_tracks_meaning() {
        let cfg = parse_config(SMALL).unwrap();
        let d1 = digest(&cfg);

        let reformatted: Value = serde_json::from_str(SMALL).unwrap();
        let dense = serde_json::to_string(&reformatted).unwrap();
        let d2 = digest(&parse_config(&dense).unwrap());
        assert_eq!(d1, d2, "whitespace and key order must not matter");

        let changed = SMALL.replace("\"0.5 s\"", "\"500 ms\"");
        let d3 = digest(&parse_config(&changed).unwrap());
        assert_eq!(d1, d3, "equal value in different units must not matter");

        let changed = SMALL.replace("\"0.5 s\"", "\"0.6 s\"");
        let d4 = digest(&parse_config(&changed).unwrap());
        assert_ne!(d1, d4, "a semantic change must change the digest");
    }

    #[test]
    fn emit_round_trips_digest_equal() {
        let cfg = parse_config(SMALL).unwrap();
        let emitted = emit_config(&cfg);
        let cfg2 = parse_config(&emitted)
            .unwrap_or_else(|e| panic!("canonical emission must re-parse: {e:?}\n{emitted}"));
        assert_eq!(digest(&cfg), digest(&cfg2));
        assert_eq!(emit_config(&cfg), emit_config(&cfg2));
    }

    #[test]
    fn catalog_refs_resolve_to_inline_models() {
        let cfg_text = SMALL.replace(
            r#""type": "wireless_catalog", "eps_tx": "4.5e4 pJ/b",
                    "eps_rx": "3.9e4 pJ/b", "rate": "54 Mb/s", "base_latency": "1 ms""#,
            r#""type": "wireless_ref", "name": "wifi""#,
        );
        let cfg = parse_config(&cfg_text).unwrap();
        let topo = cfg.topology.as_ref().unwrap();
        let wifi = topo
            .links
            .iter()
            .find_map(|l| match &l.model {
                LinkModel::WirelessCatalog(w) => Some(w),
                _ => None,
            })
            .unwrap();
        assert_eq!(wifi.rate, 54e6);
        assert_eq!(digest(&cfg), digest(&parse_config(SMALL).unwrap()));
    }

    #[test]
    fn topology_errors_carry_section_context() {
        let bad = SMALL.replace("\"node\": \"dev1\"", "\"node\": \"ghost\"");
        let errs = parse_config(&bad).unwrap_err();
        assert!(
            errs.iter().any(|e| e.path.contains("sources[0].node")),
            "{errs:?}"
        );
    }

    #[test]
    fn scenario_b_requires_its_grid() {
        let bad = SMALL.replace("\"scenario\": \"a\"", "\"scenario\": \"b\"");
        let errs = parse_config(&bad).unwrap_err();
        assert!(errs.iter().any(|e| e.message.contains("size_grid")), "{errs:?}");
    }
}
