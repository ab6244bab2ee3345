//! Per-request allocation under a deadline: placement strategies, joint
//! rate and frequency optimization, and per-strategy scenario statistics.

use crate::models::{
    compute_cost, optimal_frequency, parametric_tx_power, sample_mac_delay,
    WirelessParametricModel, FEAS_EPS,
};
use crate::seed;
use crate::topology::{LinkModel, Metric, Tier, Topology};
use crate::workload::Request;
use rand::Rng;
use rayon::prelude::*;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Free choice of access point, compute node, transmission rate, and
    /// clock frequency.
    FullOpt,
    /// The arrival node computes; only the clock frequency is optimized.
    NearestOptFreq,
    /// The arrival node computes at its maximum clock.
    NearestMaxFreq,
    /// The fog node wired directly to the ingress access point computes;
    /// frequency optimized.
    Collocated,
    /// The request never leaves its source device; frequency optimized.
    LocalDevice,
}

impl Strategy {
    pub const ALL: [Strategy; 5] = [
        Strategy::FullOpt,
        Strategy::NearestOptFreq,
        Strategy::NearestMaxFreq,
        Strategy::Collocated,
        Strategy::LocalDevice,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::FullOpt => "full_opt",
            Strategy::NearestOptFreq => "nearest_opt_freq",
            Strategy::NearestMaxFreq => "nearest_max_freq",
            Strategy::Collocated => "collocated",
            Strategy::LocalDevice => "local_device",
        }
    }

    pub fn parse(s: &str) -> Option<Strategy> {
        Strategy::ALL.into_iter().find(|st| st.name() == s)
    }
}

/// Which tiers' energy counts toward the objective and the reported totals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AccountingScope {
    pub include_device_energy: bool,
    pub include_fog_cloud_energy: bool,
}

impl AccountingScope {
    pub const ALL: AccountingScope =
        AccountingScope { include_device_energy: true, include_fog_cloud_energy: true };
    pub const FOG_CLOUD: AccountingScope =
        AccountingScope { include_device_energy: false, include_fog_cloud_energy: true };
    pub const DEVICE: AccountingScope =
        AccountingScope { include_device_energy: true, include_fog_cloud_energy: false };

    pub fn scoped(self, device: f64, infra: f64) -> f64 {
        let mut e = 0.0;
        if self.include_device_energy {
            e += device;
        }
        if self.include_fog_cloud_energy {
            e += infra;
        }
        e
    }

    pub fn name(self) -> &'static str {
        match (self.include_device_energy, self.include_fog_cloud_energy) {
            (true, true) => "all",
            (false, true) => "fog_cloud",
            (true, false) => "device",
            (false, false) => "none",
        }
    }

    pub fn parse(s: &str) -> Option<AccountingScope> {
        match s {
            "all" => Some(AccountingScope::ALL),
            "fog_cloud" => Some(AccountingScope::FOG_CLOUD),
            "device" => Some(AccountingScope::DEVICE),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AllocError {
    #[error("unknown node id \"{0}\"")]
    UnknownNode(String),
    #[error("request {request}: no wireless link from \"{device}\" to \"{ap}\"")]
    NoWirelessLink { request: u64, device: String, ap: String },
    #[error("request {request}: node \"{node}\" is not a device, it cannot arrive over the air at \"{ap}\"")]
    InvalidArrival { request: u64, node: String, ap: String },
    #[error("strategy {strategy} unavailable: {reason}")]
    StrategyUnavailable { strategy: &'static str, reason: String },
    #[error("accounting scope excludes every energy component")]
    EmptyScope,
}

/// The feasible configuration found for a request. Energies are reported
/// both per tier bucket and folded under the accounting scope.
#[derive(Debug, Clone, PartialEq)]
pub struct AllocationOutcome {
    pub chosen_ap: Option<String>,
    pub compute_node: String,
    pub forward_path: Vec<String>,
    pub return_path: Vec<String>,
    pub wireless_rate: Option<f64>,
    pub frequency: f64,
    /// Scoped energy in joules; this is also the optimization objective.
    pub energy: f64,
    pub latency: f64,
    pub energy_device: f64,
    pub energy_infra: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Allocation {
    pub request_id: u64,
    pub strategy: Strategy,
    /// `None` when no feasible configuration exists.
    pub outcome: Option<AllocationOutcome>,
}

impl Allocation {
    pub fn feasible(&self) -> bool {
        self.outcome.is_some()
    }

    pub fn energy(&self) -> Option<f64> {
        self.outcome.as_ref().map(|o| o.energy)
    }
}

/// MAC backoff delays drawn once per link within a single allocation, so
/// every candidate sees the same medium state.
#[derive(Default)]
struct MacTable(HashMap<usize, f64>);

impl MacTable {
    fn delay<R: Rng + ?Sized>(&mut self, link: usize, mean: f64, rng: &mut R) -> f64 {
        if mean <= 0.0 {
            return 0.0;
        }
        *self.0.entry(link).or_insert_with(|| sample_mac_delay(mean, rng))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Candidate {
    /// Wireless access hop as (link index, access point index), if any.
    wireless: Option<(usize, usize)>,
    /// Node where the request enters the wired fabric (or computes locally).
    entry: usize,
    compute: usize,
}

#[derive(Debug, Clone, Copy)]
struct Eval {
    device: f64,
    infra: f64,
    latency: f64,
    rate: Option<f64>,
    frequency: f64,
}

/// Costs one fully specified configuration. `rate` must be given exactly
/// when the candidate's access hop is parametric. Returns `None` when the
/// deadline cannot be met. All strategies funnel through here, which makes
/// inter-strategy energy comparisons exact rather than approximate.
fn evaluate_candidate<R: Rng + ?Sized>(
    topo: &Topology,
    req: &Request,
    cand: Candidate,
    rate: Option<f64>,
    opt_freq: bool,
    mac: &mut MacTable,
    rng: &mut R,
) -> Option<Eval> {
    let mut device = 0.0;
    let mut infra = 0.0;
    let mut latency = 0.0;
    let mut out_rate = None;
    if let Some((li, _)) = cand.wireless {
        match &topo.link(li).model {
            LinkModel::WirelessCatalog(m) => {
                let delay = mac.delay(li, m.mac_mean_delay, rng);
                latency += req.size / m.rate + m.base_latency + delay;
                device += m.eps_tx * req.size;
                infra += m.eps_rx * req.size;
                if req.result_size > 0.0 {
                    latency += req.result_size / m.rate + m.base_latency + delay;
                    infra += m.eps_tx * req.result_size;
                    device += m.eps_rx * req.result_size;
                }
            }
            LinkModel::WirelessParametric(m) => {
                let r = rate?;
                let p = parametric_tx_power(m, r).ok()?;
                let t = req.size / r;
                device += (p / m.pa_efficiency + m.circuit_power_tx) * t;
                infra += m.circuit_power_rx * t;
                latency += t;
                if req.result_size > 0.0 {
                    let t_ret = req.result_size / r;
                    infra += (p / m.pa_efficiency + m.circuit_power_tx) * t_ret;
                    device += m.circuit_power_rx * t_ret;
                    latency += t_ret;
                }
                out_rate = Some(r);
            }
            LinkModel::Wired(_) => return None,
        }
    }
    let fwd = topo.shortest_path_idx(cand.entry, cand.compute, req.size, Metric::Latency)?;
    let (e, t) = topo.path_cost(&fwd, req.size);
    infra += e;
    latency += t;
    if req.result_size > 0.0 && cand.compute != cand.entry {
        let ret =
            topo.shortest_path_idx(cand.compute, cand.entry, req.result_size, Metric::Latency)?;
        let (e, t) = topo.path_cost(&ret, req.result_size);
        infra += e;
        latency += t;
    }
    let node = topo.node(cand.compute);
    let cm = node.compute.as_ref()?;
    let budget = req.deadline - latency;
    if budget <= 0.0 {
        return None;
    }
    let ops = req.ops();
    let (f, e_c, t_c) = if opt_freq {
        optimal_frequency(cm, ops, budget).ok()?
    } else {
        let (t_c, e_c) = compute_cost(cm, ops, cm.f_max).ok()?;
        if latency + t_c > req.deadline * (1.0 + FEAS_EPS) {
            return None;
        }
        (cm.f_max, e_c, t_c)
    };
    latency += t_c;
    if node.tier.is_infrastructure() {
        infra += e_c;
    } else {
        device += e_c;
    }
    Some(Eval { device, infra, latency, rate: out_rate, frequency: f })
}

/// How the request reaches the wired fabric.
enum Arrival {
    Fixed { entry: usize, wireless: Option<(usize, usize)> },
    Choose { options: Vec<(usize, usize)> },
}

fn arrival(topo: &Topology, req: &Request, src: usize) -> Result<Arrival, AllocError> {
    match &req.assigned_ap {
        Some(ap_id) if *ap_id != req.source => {
            let ap = topo
                .node_index(ap_id)
                .ok_or_else(|| AllocError::UnknownNode(ap_id.clone()))?;
            if topo.node(src).tier != Tier::Device {
                return Err(AllocError::InvalidArrival {
                    request: req.id,
                    node: req.source.clone(),
                    ap: ap_id.clone(),
                });
            }
            let li = topo
                .wireless_out_links(src)
                .into_iter()
                .find(|&(_, a)| a == ap)
                .map(|(li, _)| li)
                .ok_or_else(|| AllocError::NoWirelessLink {
                    request: req.id,
                    device: req.source.clone(),
                    ap: ap_id.clone(),
                })?;
            Ok(Arrival::Fixed { entry: ap, wireless: Some((li, ap)) })
        }
        Some(_) => Ok(Arrival::Fixed { entry: src, wireless: None }),
        None => {
            if topo.node(src).tier == Tier::Device {
                Ok(Arrival::Choose { options: topo.wireless_out_links(src) })
            } else {
                Ok(Arrival::Fixed { entry: src, wireless: None })
            }
        }
    }
}

/// Access point with the cheapest deterministic link energy; ties go to the
/// lexicographically smaller id.
fn nearest_ap(topo: &Topology, options: &[(usize, usize)], size: f64) -> Option<(usize, usize)> {
    let mut best: Option<(f64, usize, usize)> = None;
    for &(li, ap) in options {
        let e = topo.link_cost(li, size, Metric::Energy);
        let better = match best {
            None => true,
            Some((be, bap, _)) => match e.total_cmp(&be) {
                std::cmp::Ordering::Less => true,
                std::cmp::Ordering::Greater => false,
                std::cmp::Ordering::Equal => ap < bap,
            },
        };
        if better {
            best = Some((e, ap, li));
        }
    }
    best.map(|(_, ap, li)| (li, ap))
}

/// The entry node itself when it can compute; otherwise the compute node
/// with the smallest path latency (ties to the smaller id).
fn nearest_compute(topo: &Topology, entry: usize, size: f64) -> Option<usize> {
    let n = topo.node(entry);
    if n.compute.is_some() && n.tier.is_infrastructure() {
        return Some(entry);
    }
    let mut best: Option<(f64, usize)> = None;
    for node in topo.compute_node_indices() {
        let Some(p) = topo.shortest_path_idx(entry, node, size, Metric::Latency) else {
            continue;
        };
        let (_, t) = topo.path_cost(&p, size);
        let better = match best {
            None => true,
            Some((bt, bn)) => match t.total_cmp(&bt) {
                std::cmp::Ordering::Less => true,
                std::cmp::Ordering::Greater => false,
                std::cmp::Ordering::Equal => node < bn,
            },
        };
        if better {
            best = Some((t, node));
        }
    }
    best.map(|(_, n)| n)
}

/// Fog node one wired hop from the access point, by smallest link latency
/// (ties to the smaller id).
fn collocated_fog(topo: &Topology, ap: usize, size: f64) -> Option<usize> {
    let mut best: Option<(f64, usize)> = None;
    for &li in topo.out_links(ap) {
        let (_, to) = topo.link_endpoints(li);
        if topo.node(to).tier != Tier::Fog || topo.link(li).model.is_wireless() {
            continue;
        }
        let t = topo.link_cost(li, size, Metric::Latency);
        let better = match best {
            None => true,
            Some((bt, bn)) => match t.total_cmp(&bt) {
                std::cmp::Ordering::Less => true,
                std::cmp::Ordering::Greater => false,
                std::cmp::Ordering::Equal => to < bn,
            },
        };
        if better {
            best = Some((t, to));
        }
    }
    best.map(|(_, n)| n)
}

/// Fixed transmission rate for strategies that do not optimize it: the
/// parametric maximum, or nothing for catalog and wired-only candidates.
fn fixed_rate(topo: &Topology, cand: Candidate) -> Option<f64> {
    cand.wireless.and_then(|(li, _)| match &topo.link(li).model {
        LinkModel::WirelessParametric(m) => Some(m.rate_max),
        _ => None,
    })
}

struct Scored {
    scoped: f64,
    eval: Eval,
    cand: Candidate,
}

/// Candidate ordering: scoped energy, then latency, then compute node id,
/// then access point id. Node indices follow id order.
fn better_candidate(a: &Scored, b: &Scored) -> bool {
    match a.scoped.total_cmp(&b.scoped) {
        std::cmp::Ordering::Less => return true,
        std::cmp::Ordering::Greater => return false,
        std::cmp::Ordering::Equal => {}
    }
    match a.eval.latency.total_cmp(&b.eval.latency) {
        std::cmp::Ordering::Less => return true,
        std::cmp::Ordering::Greater => return false,
        std::cmp::Ordering::Equal => {}
    }
    let ap = |s: &Scored| s.cand.wireless.map(|(_, ap)| ap);
    (a.cand.compute, ap(a)) < (b.cand.compute, ap(b))
}

/// Minimizes scoped energy over the transmission rate of a parametric
/// access hop: a coarse grid bracketing pass followed by golden-section
/// refinement, with the maximum rate always probed exactly so that the
/// result can never fall above a fixed-rate evaluation of the same
/// candidate.
fn optimize_rate<R: Rng + ?Sized>(
    topo: &Topology,
    req: &Request,
    cand: Candidate,
    model: &WirelessParametricModel,
    scope: AccountingScope,
    mac: &mut MacTable,
    rng: &mut R,
) -> Option<(f64, Eval)> {
    const GRID: usize = 64;
    const REFINE: usize = 60;

    let mut best: Option<(f64, f64, Eval)> = None;
    let probe =
        |r: f64, best: &mut Option<(f64, f64, Eval)>, mac: &mut MacTable, rng: &mut R| -> f64 {
            match evaluate_candidate(topo, req, cand, Some(r), true, mac, rng) {
                Some(ev) => {
                    let s = scope.scoped(ev.device, ev.infra);
                    if best.as_ref().map_or(true, |(bs, _, _)| s < *bs) {
                        *best = Some((s, r, ev));
                    }
                    s
                }
                None => f64::INFINITY,
            }
        };

    let r_hi = model.rate_max;
    probe(r_hi, &mut best, mac, rng);
    let total_bits = req.size + req.result_size;
    let r_lo = (total_bits / req.deadline).max(r_hi * 1e-9);
    if r_lo < r_hi {
        let step = (r_hi - r_lo) / (GRID - 1) as f64;
        let mut grid_best = (f64::INFINITY, GRID - 1);
        for i in 0..GRID - 1 {
            let r = r_lo + step * i as f64;
            let s = probe(r, &mut best, mac, rng);
            if s < grid_best.0 {
                grid_best = (s, i);
            }
        }
        let lo = r_lo + step * grid_best.1.saturating_sub(1) as f64;
        let hi = (r_lo + step * (grid_best.1 + 1) as f64).min(r_hi);
        let phi = (5f64.sqrt() - 1.0) / 2.0;
        let (mut a, mut b) = (lo, hi);
        let mut c = b - phi * (b - a);
        let mut d = a + phi * (b - a);
        let mut fc = probe(c, &mut best, mac, rng);
        let mut fd = probe(d, &mut best, mac, rng);
        for _ in 0..REFINE {
            if fc < fd {
                b = d;
                d = c;
                fd = fc;
                c = b - phi * (b - a);
                fc = probe(c, &mut best, mac, rng);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + phi * (b - a);
                fd = probe(d, &mut best, mac, rng);
            }
        }
    }
    best.map(|(s, _, ev)| (s, ev))
}

/// Candidate configurations a strategy is allowed to consider, each with a
/// flag for whether the transmission rate is a free variable.
fn strategy_candidates(
    topo: &Topology,
    req: &Request,
    strategy: Strategy,
    src: usize,
) -> Result<Vec<(Candidate, bool)>, AllocError> {
    let unavailable = |reason: String| AllocError::StrategyUnavailable {
        strategy: strategy.name(),
        reason,
    };
    if strategy == Strategy::LocalDevice {
        if topo.node(src).compute.is_none() {
            return Err(unavailable(format!("source \"{}\" has no compute model", req.source)));
        }
        return Ok(vec![(Candidate { wireless: None, entry: src, compute: src }, false)]);
    }
    let arr = arrival(topo, req, src)?;
    let mut cands = Vec::new();
    match strategy {
        Strategy::FullOpt => {
            let nodes = topo.compute_node_indices();
            match arr {
                Arrival::Fixed { entry, wireless } => {
                    for &node in &nodes {
                        cands.push((Candidate { wireless, entry, compute: node }, true));
                    }
                }
                Arrival::Choose { options } => {
                    for (li, ap) in options {
                        for &node in &nodes {
                            cands.push((
                                Candidate { wireless: Some((li, ap)), entry: ap, compute: node },
                                true,
                            ));
                        }
                    }
                }
            }
            // The no-offload option: compute on the source device itself.
            if topo.node(src).tier == Tier::Device && topo.node(src).compute.is_some() {
                cands.push((Candidate { wireless: None, entry: src, compute: src }, false));
            }
            if cands.is_empty() {
                return Err(unavailable(format!(
                    "source \"{}\" has no wireless access and no local compute",
                    req.source
                )));
            }
        }
        Strategy::NearestOptFreq | Strategy::NearestMaxFreq => {
            let (entry, wireless) = match arr {
                Arrival::Fixed { entry, wireless } => (entry, wireless),
                Arrival::Choose { options } => {
                    let (li, ap) = nearest_ap(topo, &options, req.size).ok_or_else(|| {
                        unavailable(format!(
                            "device \"{}\" has no wireless access point",
                            req.source
                        ))
                    })?;
                    (ap, Some((li, ap)))
                }
            };
            if let Some(node) = nearest_compute(topo, entry, req.size) {
                cands.push((Candidate { wireless, entry, compute: node }, false));
            }
            // No reachable compute node: an empty candidate set falls out as
            // an infeasible allocation rather than a config error.
        }
        Strategy::Collocated => {
            let (entry, wireless) = match arr {
                Arrival::Fixed { entry, wireless } => (entry, wireless),
                Arrival::Choose { options } => {
                    let (li, ap) = nearest_ap(topo, &options, req.size).ok_or_else(|| {
                        unavailable(format!(
                            "device \"{}\" has no wireless access point",
                            req.source
                        ))
                    })?;
                    (ap, Some((li, ap)))
                }
            };
            let node = topo.node(entry);
            let compute = if node.compute.is_some() && node.tier.is_infrastructure() {
                entry
            } else {
                collocated_fog(topo, entry, req.size).ok_or_else(|| {
                    unavailable(format!(
                        "access point \"{}\" has no directly wired fog node",
                        topo.node(entry).id
                    ))
                })?
            };
            // Collocated placement still picks its transmit rate freely; only
            // the compute node is pinned.
            cands.push((Candidate { wireless, entry, compute }, true));
        }
        Strategy::LocalDevice => unreachable!("handled above"),
    }
    Ok(cands)
}

/// Runs one strategy for one request. MAC randomness, when enabled on a
/// catalog link, is drawn from `rng`; everything else is deterministic.
pub fn allocate<R: Rng + ?Sized>(
    req: &Request,
    topo: &Topology,
    strategy: Strategy,
    scope: AccountingScope,
    rng: &mut R,
) -> Result<Allocation, AllocError> {
    if !scope.include_device_energy && !scope.include_fog_cloud_energy {
        return Err(AllocError::EmptyScope);
    }
    let src = topo
        .node_index(&req.source)
        .ok_or_else(|| AllocError::UnknownNode(req.source.clone()))?;
    let candidates = strategy_candidates(topo, req, strategy, src)?;
    let opt_freq = strategy != Strategy::NearestMaxFreq;
    let mut mac = MacTable::default();
    let mut best: Option<Scored> = None;
    for (cand, free_rate) in candidates {
        let scored = match (free_rate, cand.wireless.map(|(li, _)| &topo.link(li).model)) {
            (true, Some(LinkModel::WirelessParametric(m))) => {
                let m = *m;
                optimize_rate(topo, req, cand, &m, scope, &mut mac, rng)
                    .map(|(s, ev)| Scored { scoped: s, eval: ev, cand })
            }
            _ => {
                let rate = fixed_rate(topo, cand);
                evaluate_candidate(topo, req, cand, rate, opt_freq, &mut mac, rng).map(|ev| {
                    Scored { scoped: scope.scoped(ev.device, ev.infra), eval: ev, cand }
                })
            }
        };
        if let Some(s) = scored {
            if best.as_ref().map_or(true, |b| better_candidate(&s, b)) {
                best = Some(s);
            }
        }
    }
    let outcome = best.map(|s| {
        let (forward_path, return_path) = record_paths(topo, req, s.cand);
        AllocationOutcome {
            chosen_ap: s.cand.wireless.map(|(_, ap)| topo.node(ap).id.clone()),
            compute_node: topo.node(s.cand.compute).id.clone(),
            forward_path,
            return_path,
            wireless_rate: s.eval.rate,
            frequency: s.eval.frequency,
            energy: s.scoped,
            latency: s.eval.latency,
            energy_device: s.eval.device,
            energy_infra: s.eval.infra,
        }
    });
    Ok(Allocation { request_id: req.id, strategy, outcome })
}

/// Node-id sequences of the chosen forward and return routes, including the
/// wireless hop. The return route is empty when no result travels back.
fn record_paths(topo: &Topology, req: &Request, cand: Candidate) -> (Vec<String>, Vec<String>) {
    let fwd = topo
        .shortest_path_idx(cand.entry, cand.compute, req.size, Metric::Latency)
        .expect("path existed during evaluation");
    let mut forward = Vec::new();
    if cand.wireless.is_some() {
        forward.push(req.source.clone());
    }
    forward.extend(topo.path_node_ids(&fwd).iter().map(|s| s.to_string()));
    let mut back = Vec::new();
    if req.result_size > 0.0 {
        if cand.compute != cand.entry {
            let ret = topo
                .shortest_path_idx(cand.compute, cand.entry, req.result_size, Metric::Latency)
                .expect("path existed during evaluation");
            back.extend(topo.path_node_ids(&ret).iter().map(|s| s.to_string()));
        } else {
            back.push(topo.node(cand.compute).id.clone());
        }
        if cand.wireless.is_some() {
            back.push(req.source.clone());
        }
    }
    (forward, back)
}

/// Joint optimum over access point, compute node, rate, and frequency.
pub fn optimize_full<R: Rng + ?Sized>(
    req: &Request,
    topo: &Topology,
    scope: AccountingScope,
    rng: &mut R,
) -> Result<Allocation, AllocError> {
    allocate(req, topo, Strategy::FullOpt, scope, rng)
}

/// Median of scoped energies with infeasible requests counted as infinite.
/// Undefined whenever the median position lands on an infeasible request,
/// which happens exactly when at most half the requests succeeded.
pub fn median_energy(allocations: &[Allocation]) -> Option<f64> {
    let n = allocations.len();
    if n == 0 {
        return None;
    }
    let mut vals: Vec<f64> =
        allocations.iter().map(|a| a.energy().unwrap_or(f64::INFINITY)).collect();
    vals.sort_by(f64::total_cmp);
    let m = if n % 2 == 1 { vals[n / 2] } else { 0.5 * (vals[n / 2 - 1] + vals[n / 2]) };
    m.is_finite().then_some(m)
}

/// Empirical CDF over all requests: sorted feasible energies against the
/// cumulative fraction of the whole population, so the curve saturates at
/// the success rate.
pub fn energy_cdf(allocations: &[Allocation]) -> Vec<(f64, f64)> {
    let n = allocations.len();
    if n == 0 {
        return Vec::new();
    }
    let mut es: Vec<f64> = allocations.iter().filter_map(|a| a.energy()).collect();
    es.sort_by(f64::total_cmp);
    es.into_iter().enumerate().map(|(i, e)| (e, (i + 1) as f64 / n as f64)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrategyStats {
    pub strategy: Strategy,
    pub allocations: Vec<Allocation>,
    pub success_rate: f64,
    pub median_energy: Option<f64>,
    /// Sum of scoped energies over feasible requests.
    pub total_energy: f64,
    pub cdf: Vec<(f64, f64)>,
}

/// Applies each strategy to every request. Each (strategy, request) pair
/// draws from its own seed-derived stream, so parallel evaluation is
/// bit-identical to sequential.
pub fn run_scenario(
    requests: &[Request],
    topo: &Topology,
    strategies: &[Strategy],
    scope: AccountingScope,
    master_seed: u64,
) -> Result<Vec<StrategyStats>, AllocError> {
    strategies
        .iter()
        .map(|&strategy| {
            let allocations = requests
                .par_iter()
                .map(|req| {
                    let name = format!("alloc/{}/{}", strategy.name(), req.id);
                    let mut rng = seed::stream(master_seed, &name);
                    allocate(req, topo, strategy, scope, &mut rng)
                })
                .collect::<Result<Vec<_>, _>>()?;
            let n = allocations.len();
            let ok = allocations.iter().filter(|a| a.feasible()).count();
            Ok(StrategyStats {
                strategy,
                success_rate: if n == 0 { 0.0 } else { ok as f64 / n as f64 },
                median_energy: median_energy(&allocations),
                total_energy: allocations.iter().filter_map(|a| a.energy()).sum(),
                cdf: energy_cdf(&allocations),
                allocations,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{ComputeModel, WiredHopModel, WirelessCatalogModel};
    use crate::topology::{LinkSpec, NodeSpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    fn rng() -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(0)
    }

    fn node(id: &str, tier: Tier, compute: Option<ComputeModel>) -> NodeSpec {
        NodeSpec { id: id.to_string(), tier, compute }
    }

    fn wifi() -> LinkModel {
        LinkModel::WirelessCatalog(WirelessCatalogModel {
            eps_tx: 4.5e-8,
            eps_rx: 3.9e-8,
            rate: 54e6,
            base_latency: 1e-3,
            mac_mean_delay: 0.0,
        })
    }

    fn link(from: &str, to: &str, model: LinkModel) -> LinkSpec {
        LinkSpec { from: from.to_string(), to: to.to_string(), model }
    }

    /// Reference instance: two fog nodes joined by one wired hop, request
    /// arriving at the expensive one.
    fn two_fog() -> Topology {
        let cpu1 = ComputeModel {
            f_min: 1e6,
            f_max: 3e9,
            ops_per_cycle: 1.0,
            p_static: 10.0,
            kappa: 1e-27,
            alpha: 3.0,
        };
        let cpu2 = ComputeModel { p_static: 1.0, ..cpu1 };
        let hop = LinkModel::Wired(WiredHopModel {
            eps: 1.03e-9,
            capacity: 1e9,
            prop_delay: 1e-3,
            proc_delay: 0.0,
        });
        let free = LinkModel::Wired(WiredHopModel {
            eps: 0.0,
            capacity: 1e12,
            prop_delay: 0.0,
            proc_delay: 0.0,
        });
        let nodes = vec![
            node("fog1", Tier::Fog, Some(cpu1)),
            node("fog2", Tier::Fog, Some(cpu2)),
            node("dev0", Tier::Device, None),
            node("ap0", Tier::AccessPoint, None),
        ];
        let links = vec![
            link("fog1", "fog2", hop),
            link("fog2", "fog1", hop),
            link("ap0", "fog1", free),
            link("dev0", "ap0", wifi()),
        ];
        Topology::new(nodes, links).unwrap()
    }

    fn two_fog_request() -> Request {
        Request {
            id: 0,
            source: "fog1".into(),
            assigned_ap: None,
            size: 8e6,
            intensity: 100.0,
            deadline: 1.0,
            gen_time: 0.0,
            result_size: 0.0,
        }
    }

    #[test]
    fn two_fog_reference_energies() {
        let topo = two_fog();
        let req = two_fog_request();
        let scope = AccountingScope::FOG_CLOUD;

        let max = allocate(&req, &topo, Strategy::NearestMaxFreq, scope, &mut rng()).unwrap();
        let o = max.outcome.expect("feasible");
        assert!(rel(o.energy, 9.867) < 1e-3, "nearest_max {}", o.energy);
        assert_eq!(o.compute_node, "fog1");

        let opt = allocate(&req, &topo, Strategy::NearestOptFreq, scope, &mut rng()).unwrap();
        let o = opt.outcome.expect("feasible");
        assert!(rel(o.energy, 7.018) < 1e-3, "nearest_opt {}", o.energy);
        assert!(rel(o.frequency, 1.710e9) < 1e-3, "frequency {}", o.frequency);

        let full = optimize_full(&req, &topo, scope, &mut rng()).unwrap();
        let o = full.outcome.expect("feasible");
        assert!(rel(o.energy, 1.521) < 1e-3, "full {}", o.energy);
        assert_eq!(o.compute_node, "fog2");
        assert!(rel(o.frequency, 8.073e8) < 1e-3, "frequency {}", o.frequency);
        assert_eq!(o.forward_path, vec!["fog1", "fog2"]);
        assert!(o.return_path.is_empty());
    }

    #[test]
    fn run_scenario_reproduces_reference_and_orders_strategies() {
        let topo = two_fog();
        let strategies =
            [Strategy::FullOpt, Strategy::NearestOptFreq, Strategy::NearestMaxFreq];
        let stats = run_scenario(
            &[two_fog_request()],
            &topo,
            &strategies,
            AccountingScope::FOG_CLOUD,
            99,
        )
        .unwrap();
        let energies: Vec<f64> = stats.iter().map(|s| s.median_energy.unwrap()).collect();
        assert!(rel(energies[0], 1.521) < 1e-3);
        assert!(rel(energies[1], 7.018) < 1e-3);
        assert!(rel(energies[2], 9.867) < 1e-3);
        assert!(stats.iter().all(|s| s.success_rate == 1.0));
    }

    #[test]
    fn zero_static_power_runs_at_slowest_feasible_clock() {
        let cpu = ComputeModel {
            f_min: 1e6,
            f_max: 3e9,
            ops_per_cycle: 2.0,
            p_static: 0.0,
            kappa: 1e-27,
            alpha: 3.0,
        };
        let nodes = vec![
            node("fog1", Tier::Fog, Some(cpu)),
            node("dev0", Tier::Device, None),
            node("ap0", Tier::AccessPoint, None),
        ];
        let free = LinkModel::Wired(WiredHopModel {
            eps: 0.0,
            capacity: 1e12,
            prop_delay: 0.0,
            proc_delay: 0.0,
        });
        let links = vec![link("ap0", "fog1", free), link("dev0", "ap0", wifi())];
        let topo = Topology::new(nodes, links).unwrap();
        let req = Request { deadline: 10.0, ..two_fog_request() };
        let full = optimize_full(&req, &topo, AccountingScope::FOG_CLOUD, &mut rng()).unwrap();
        let near =
            allocate(&req, &topo, Strategy::NearestOptFreq, AccountingScope::FOG_CLOUD, &mut rng())
                .unwrap();
        let fo = full.outcome.unwrap();
        let no = near.outcome.unwrap();
        assert_eq!(fo.energy, no.energy);
        // N/(c * deadline) = 8e8 / (2 * 10) = 4e7 Hz, above f_min.
        assert!(rel(fo.frequency, 4e7) < 1e-9, "frequency {}", fo.frequency);
    }

    #[test]
    fn impossible_deadline_is_infeasible_not_an_error() {
        let topo = two_fog();
        let req = Request { deadline: 1e-3, ..two_fog_request() };
        for strategy in
            [Strategy::FullOpt, Strategy::NearestOptFreq, Strategy::NearestMaxFreq]
        {
            let a =
                allocate(&req, &topo, strategy, AccountingScope::FOG_CLOUD, &mut rng()).unwrap();
            assert!(!a.feasible(), "{strategy:?}");
        }
    }

    #[test]
    fn dominance_and_nesting_over_deadline_sweep() {
        let topo = two_fog();
        for i in 0..60 {
            let deadline = 0.26 + 0.015 * i as f64;
            let req = Request { deadline, ..two_fog_request() };
            let full =
                optimize_full(&req, &topo, AccountingScope::FOG_CLOUD, &mut rng()).unwrap();
            let opt = allocate(
                &req,
                &topo,
                Strategy::NearestOptFreq,
                AccountingScope::FOG_CLOUD,
                &mut rng(),
            )
            .unwrap();
            let max = allocate(
                &req,
                &topo,
                Strategy::NearestMaxFreq,
                AccountingScope::FOG_CLOUD,
                &mut rng(),
            )
            .unwrap();
            if max.feasible() {
                assert!(opt.feasible(), "nesting violated at deadline {deadline}");
                assert!(opt.energy().unwrap() <= max.energy().unwrap());
            }
            if opt.feasible() {
                assert!(full.feasible(), "nesting violated at deadline {deadline}");
                assert!(full.energy().unwrap() <= opt.energy().unwrap());
            }
        }
    }

    #[test]
    fn median_rules() {
        let mk = |id: u64, e: Option<f64>| Allocation {
            request_id: id,
            strategy: Strategy::FullOpt,
            outcome: e.map(|energy| AllocationOutcome {
                chosen_ap: None,
                compute_node: "x".into(),
                forward_path: vec![],
                return_path: vec![],
                wireless_rate: None,
                frequency: 1e9,
                energy,
                latency: 0.1,
                energy_device: 0.0,
                energy_infra: energy,
            }),
        };
        let a = [mk(0, Some(1.0)), mk(1, Some(2.0)), mk(2, Some(3.0))];
        assert_eq!(median_energy(&a), Some(2.0));
        let b = [mk(0, Some(3.0)), mk(1, Some(5.0)), mk(2, None), mk(3, None)];
        assert_eq!(median_energy(&b), None);
        let c = [mk(0, Some(1.0)), mk(1, None), mk(2, Some(2.0)), mk(3, Some(3.0)), mk(4, None)];
        assert_eq!(median_energy(&c), Some(3.0));
        assert_eq!(median_energy(&[]), None);

        let cdf = energy_cdf(&b);
        assert_eq!(cdf, vec![(3.0, 0.25), (5.0, 0.5)]);
        let cdf = energy_cdf(&a);
        assert_eq!(cdf.last().unwrap().1, 1.0);
        assert!(energy_cdf(&[mk(0, None)]).is_empty());
    }

    #[test]
    fn local_device_requires_compute() {
        let topo = two_fog();
        let req = Request { source: "dev0".into(), ..two_fog_request() };
        let err =
            allocate(&req, &topo, Strategy::LocalDevice, AccountingScope::ALL, &mut rng());
        assert!(matches!(err, Err(AllocError::StrategyUnavailable { .. })));
    }

    #[test]
    fn collocated_requires_direct_fog() {
        // ap1 has no wired fog neighbor.
        let cpu = ComputeModel {
            f_min: 1e6,
            f_max: 3e9,
            ops_per_cycle: 1.0,
            p_static: 1.0,
            kappa: 1e-27,
            alpha: 3.0,
        };
        let nodes = vec![
            node("dev0", Tier::Device, None),
            node("ap1", Tier::AccessPoint, None),
            node("ap2", Tier::AccessPoint, None),
            node("fog1", Tier::Fog, Some(cpu)),
        ];
        let free = LinkModel::Wired(WiredHopModel {
            eps: 0.0,
            capacity: 1e12,
            prop_delay: 0.0,
            proc_delay: 0.0,
        });
        let links = vec![
            link("dev0", "ap1", wifi()),
            link("ap1", "ap2", free),
            link("ap2", "fog1", free),
            link("fog1", "ap2", free),
        ];
        let topo = Topology::new(nodes, links).unwrap();
        let req = Request {
            source: "dev0".into(),
            assigned_ap: Some("ap1".into()),
            ..two_fog_request()
        };
        let err = allocate(&req, &topo, Strategy::Collocated, AccountingScope::ALL, &mut rng());
        assert!(matches!(err, Err(AllocError::StrategyUnavailable { .. })));
        // nearest still works: fog1 is reachable over two wired hops.
        let near =
            allocate(&req, &topo, Strategy::NearestOptFreq, AccountingScope::ALL, &mut rng())
                .unwrap();
        assert_eq!(near.outcome.unwrap().compute_node, "fog1");
    }

    #[test]
    fn empty_scope_rejected() {
        let topo = two_fog();
        let scope =
            AccountingScope { include_device_energy: false, include_fog_cloud_energy: false };
        let err = allocate(&two_fog_request(), &topo, Strategy::FullOpt, scope, &mut rng());
        assert!(matches!(err, Err(AllocError::EmptyScope)));
    }

    #[test]
    fn scope_monotone_for_fixed_allocation() {
        let topo = two_fog();
        let req = two_fog_request();
        let a = optimize_full(&req, &topo, AccountingScope::FOG_CLOUD, &mut rng()).unwrap();
        let o = a.outcome.unwrap();
        assert!(o.energy_device + o.energy_infra >= o.energy);
        assert_eq!(AccountingScope::ALL.scoped(o.energy_device, o.energy_infra),
            o.energy_device + o.energy_infra);
    }

    #[test]
    fn scenario_replay_is_bit_identical_with_mac_randomness() {
        let cpu = ComputeModel {
            f_min: 1e6,
            f_max: 3e9,
            ops_per_cycle: 4.0,
            p_static: 2.0,
            kappa: 1e-27,
            alpha: 3.0,
        };
        let mac_wifi = LinkModel::WirelessCatalog(WirelessCatalogModel {
            eps_tx: 4.5e-8,
            eps_rx: 3.9e-8,
            rate: 54e6,
            base_latency: 1e-3,
            mac_mean_delay: 5e-3,
        });
        let free = LinkModel::Wired(WiredHopModel {
            eps: 1e-10,
            capacity: 1e10,
            prop_delay: 1e-4,
            proc_delay: 0.0,
        });
        let nodes = vec![
            node("dev0", Tier::Device, None),
            node("ap0", Tier::AccessPoint, None),
            node("fog1", Tier::Fog, Some(cpu)),
        ];
        let links = vec![
            link("dev0", "ap0", mac_wifi),
            link("ap0", "fog1", free),
            link("fog1", "ap0", free),
        ];
        let topo = Topology::new(nodes, links).unwrap();
        let reqs: Vec<Request> = (0..20)
            .map(|id| Request {
                id,
                source: "dev0".into(),
                assigned_ap: None,
                size: 2e6,
                intensity: 50.0,
                deadline: 0.8,
                gen_time: 0.0,
                result_size: 1e5,
            })
            .collect();
        let strategies = [Strategy::FullOpt, Strategy::NearestOptFreq];
        let a = run_scenario(&reqs, &topo, &strategies, AccountingScope::ALL, 7).unwrap();
        let b = run_scenario(&reqs, &topo, &strategies, AccountingScope::ALL, 7).unwrap();
        assert_eq!(a, b);
        let c = run_scenario(&reqs, &topo, &strategies, AccountingScope::ALL, 8).unwrap();
        assert_ne!(a, c);
        // MAC delays shift latency between seeds but never below the
        // deterministic floor.
        let floor = 2e6 / 54e6 + 1e-3;
        for s in &a {
            for alloc in &s.allocations {
                if let Some(o) = &alloc.outcome {
                    assert!(o.latency > floor);
                }
            }
        }
    }

    #[test]
    fn full_opt_never_beaten_by_local_or_collocated() {
        // Device with a weak CPU, two APs with collocated fogs.
        let weak = ComputeModel {
            f_min: 1e6,
            f_max: 8e8,
            ops_per_cycle: 2.0,
            p_static: 0.5,
            kappa: 3e-27,
            alpha: 3.0,
        };
        let fog = ComputeModel {
            f_min: 1e6,
            f_max: 3e9,
            ops_per_cycle: 8.0,
            p_static: 6.0,
            kappa: 1e-27,
            alpha: 3.0,
        };
        let par = LinkModel::WirelessParametric(WirelessParametricModel {
            bandwidth: 2e7,
            noise_density: 4e-21,
            path_loss_db: 85.0,
            pa_efficiency: 0.35,
            circuit_power_tx: 0.3,
            circuit_power_rx: 0.2,
            rate_max: 2e8,
        });
        let free = LinkModel::Wired(WiredHopModel {
            eps: 3e-10,
            capacity: 1e9,
            prop_delay: 1e-4,
            proc_delay: 0.0,
        });
        let nodes = vec![
            node("dev0", Tier::Device, Some(weak)),
            node("ap1", Tier::AccessPoint, None),
            node("ap2", Tier::AccessPoint, None),
            node("fogA", Tier::Fog, Some(fog)),
            node("fogB", Tier::Fog, Some(ComputeModel { p_static: 3.0, ..fog })),
        ];
        let links = vec![
            link("dev0", "ap1", par),
            link("dev0", "ap2", par),
            link("ap1", "fogA", free),
            link("fogA", "ap1", free),
            link("ap2", "fogB", free),
            link("fogB", "ap2", free),
        ];
        let topo = Topology::new(nodes, links).unwrap();
        for (size, deadline) in [(2e6, 0.5), (4e6, 0.5), (1e6, 0.2), (6e6, 0.9)] {
            let req = Request {
                id: 0,
                source: "dev0".into(),
                assigned_ap: None,
                size,
                intensity: 100.0,
                deadline,
                gen_time: 0.0,
                result_size: 0.0,
            };
            let full = optimize_full(&req, &topo, AccountingScope::ALL, &mut rng()).unwrap();
            for strategy in [
                Strategy::NearestOptFreq,
                Strategy::NearestMaxFreq,
                Strategy::Collocated,
                Strategy::LocalDevice,
            ] {
                let other =
                    allocate(&req, &topo, strategy, AccountingScope::ALL, &mut rng()).unwrap();
                if let Some(e) = other.energy() {
                    let fe = full.energy().expect("nested feasibility");
                    assert!(
                        fe <= e,
                        "full_opt {fe} beaten by {strategy:?} {e} at size {size}"
                    );
                }
            }
        }
    }

    #[test]
    fn assigned_ap_pins_the_ingress() {
        let cpu = ComputeModel {
            f_min: 1e6,
            f_max: 3e9,
            ops_per_cycle: 4.0,
            p_static: 2.0,
            kappa: 1e-27,
            alpha: 3.0,
        };
        let cheap = LinkModel::WirelessCatalog(WirelessCatalogModel {
            eps_tx: 1e-8,
            eps_rx: 1e-8,
            rate: 54e6,
            base_latency: 1e-3,
            mac_mean_delay: 0.0,
        });
        let free = LinkModel::Wired(WiredHopModel {
            eps: 0.0,
            capacity: 1e12,
            prop_delay: 0.0,
            proc_delay: 0.0,
        });
        let nodes = vec![
            node("dev0", Tier::Device, None),
            node("ap1", Tier::AccessPoint, None),
            node("ap2", Tier::AccessPoint, None),
            node("fog1", Tier::Fog, Some(cpu)),
        ];
        let links = vec![
            link("dev0", "ap1", wifi()),
            link("dev0", "ap2", cheap),
            link("ap1", "fog1", free),
            link("fog1", "ap1", free),
            link("ap2", "fog1", free),
            link("fog1", "ap2", free),
        ];
        let topo = Topology::new(nodes, links).unwrap();
        let mut req = Request { source: "dev0".into(), size: 2e6, ..two_fog_request() };
        // Free choice picks the cheaper ap2 under device-inclusive scope.
        let a = optimize_full(&req, &topo, AccountingScope::ALL, &mut rng()).unwrap();
        assert_eq!(a.outcome.unwrap().chosen_ap.as_deref(), Some("ap2"));
        // Pinning overrides it.
        req.assigned_ap = Some("ap1".into());
        let a = optimize_full(&req, &topo, AccountingScope::ALL, &mut rng()).unwrap();
        assert_eq!(a.outcome.unwrap().chosen_ap.as_deref(), Some("ap1"));
        // Pinning to an access point with no link is an error.
        req.assigned_ap = Some("fog1".into());
        assert!(matches!(
            optimize_full(&req, &topo, AccountingScope::ALL, &mut rng()),
            Err(AllocError::NoWirelessLink { .. })
        ));
    }

    #[test]
    fn empty_request_list_yields_empty_stats() {
        let topo = two_fog();
        let stats =
            run_scenario(&[], &topo, &[Strategy::FullOpt], AccountingScope::FOG_CLOUD, 1)
                .unwrap();
        assert_eq!(stats[0].success_rate, 0.0);
        assert!(stats[0].allocations.is_empty());
        assert_eq!(stats[0].median_energy, None);
        assert!(stats[0].cdf.is_empty());
    }
}
