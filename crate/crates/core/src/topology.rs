//! The fog network graph: tiered nodes, directed links, validation, and
//! least-cost routing with deterministic tie-breaking.

use crate::models::{
    parametric_tx_power, ComputeModel, WiredHopModel, WirelessCatalogModel,
    WirelessParametricModel,
};
use std::collections::{BinaryHeap, HashMap};
use std::sync::RwLock;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tier {
    Device,
    AccessPoint,
    Fog,
    Cloud,
}

impl Tier {
    pub fn name(self) -> &'static str {
        match self {
            Tier::Device => "device",
            Tier::AccessPoint => "access_point",
            Tier::Fog => "fog",
            Tier::Cloud => "cloud",
        }
    }

    pub fn parse(s: &str) -> Option<Tier> {
        match s {
            "device" => Some(Tier::Device),
            "access_point" => Some(Tier::AccessPoint),
            "fog" => Some(Tier::Fog),
            "cloud" => Some(Tier::Cloud),
            _ => None,
        }
    }

    /// Whether energy spent at this tier lands in the fog/cloud bucket.
    pub fn is_infrastructure(self) -> bool {
        !matches!(self, Tier::Device)
    }
}

#[derive(Debug, Clone)]
pub struct NodeSpec {
    pub id: String,
    pub tier: Tier,
    /// CPU of the node. Required on fog and cloud, forbidden on access
    /// points, optional on devices (enables local execution).
    pub compute: Option<ComputeModel>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LinkModel {
    WirelessCatalog(WirelessCatalogModel),
    WirelessParametric(WirelessParametricModel),
    Wired(WiredHopModel),
}

impl LinkModel {
    pub fn is_wireless(&self) -> bool {
        !matches!(self, LinkModel::Wired(_))
    }

    pub fn violations(&self) -> Vec<String> {
        match self {
            LinkModel::WirelessCatalog(m) => m.violations(),
            LinkModel::WirelessParametric(m) => m.violations(),
            LinkModel::Wired(m) => m.violations(),
        }
    }
}

/// A directed link. Undirected media are expressed as two links, which keeps
/// asymmetric transmit/receive energies representable.
#[derive(Debug, Clone)]
pub struct LinkSpec {
    pub from: String,
    pub to: String,
    pub model: LinkModel,
}

/// An ordered walk through the graph: the source node plus the links taken.
/// Empty `links` means source equals destination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    pub src: usize,
    pub links: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    Latency,
    Energy,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TopologyError {
    #[error("unknown node id \"{0}\"")]
    UnknownNode(String),
    #[error("no route from \"{src}\" to \"{dst}\"")]
    Unreachable { src: String, dst: String },
}

/// Immutable, validated network graph. Routing results are memoized per
/// (src, dst, metric, size); the cache is internally synchronized, so the
/// graph can be shared across threads.
pub struct Topology {
    nodes: Vec<NodeSpec>,
    links: Vec<LinkSpec>,
    index: HashMap<String, usize>,
    link_ends: Vec<(usize, usize)>,
    out: Vec<Vec<usize>>,
    cache: RwLock<HashMap<(usize, usize, Metric, u64), Option<Path>>>,
}

/// Checks every structural invariant and returns the full violation list.
pub fn validate(nodes: &[NodeSpec], links: &[LinkSpec]) -> Vec<String> {
    let mut errs = Vec::new();
    if nodes.is_empty() {
        errs.push("no nodes defined".to_string());
        return errs;
    }
    let mut index: HashMap<&str, usize> = HashMap::new();
    for (i, n) in nodes.iter().enumerate() {
        if n.id.is_empty() {
            errs.push(format!("node #{i} has an empty id"));
        }
        if index.insert(n.id.as_str(), i).is_some() {
            errs.push(format!("duplicate node id \"{}\"", n.id));
        }
        match n.tier {
            Tier::Fog | Tier::Cloud => {
                if n.compute.is_none() {
                    errs.push(format!("{} node \"{}\" has no compute model", n.tier.name(), n.id));
                }
            }
            Tier::AccessPoint => {
                if n.compute.is_some() {
                    errs.push(format!("access point \"{}\" must not carry a compute model", n.id));
                }
            }
            Tier::Device => {}
        }
        if let Some(c) = &n.compute {
            for v in c.violations() {
                errs.push(format!("node \"{}\" compute model: {v}", n.id));
            }
        }
    }
    for l in links {
        let ft = index.get(l.from.as_str()).map(|&i| nodes[i].tier);
        let tt = index.get(l.to.as_str()).map(|&i| nodes[i].tier);
        if ft.is_none() {
            errs.push(format!("link \"{}\"->\"{}\": unknown node \"{}\"", l.from, l.to, l.from));
        }
        if tt.is_none() {
            errs.push(format!("link \"{}\"->\"{}\": unknown node \"{}\"", l.from, l.to, l.to));
        }
        if l.from == l.to {
            errs.push(format!("link \"{}\"->\"{}\" is a self-loop", l.from, l.to));
        }
        if let (Some(ft), Some(tt)) = (ft, tt) {
            if l.model.is_wireless() {
                let pair_ok = matches!(
                    (ft, tt),
                    (Tier::Device, Tier::AccessPoint) | (Tier::AccessPoint, Tier::Device)
                );
                if !pair_ok {
                    errs.push(format!(
                        "wireless link \"{}\"->\"{}\" must join a device and an access point, \
                         got {} and {}",
                        l.from,
                        l.to,
                        ft.name(),
                        tt.name()
                    ));
                }
            } else if ft == Tier::Device || tt == Tier::Device {
                errs.push(format!(
                    "wired link \"{}\"->\"{}\" must stay among access points, fog, and cloud",
                    l.from, l.to
                ));
            }
        }
        for v in l.model.violations() {
            errs.push(format!("link \"{}\"->\"{}\": {v}", l.from, l.to));
        }
    }
    // Every fog node must be connected (ignoring direction) to some access
    // point or device, otherwise no request can ever reach it.
    let mut undirected: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    for l in links {
        if let (Some(&a), Some(&b)) = (index.get(l.from.as_str()), index.get(l.to.as_str())) {
            undirected[a].push(b);
            undirected[b].push(a);
        }
    }
    for (i, n) in nodes.iter().enumerate() {
        if n.tier != Tier::Fog {
            continue;
        }
        let mut seen = vec![false; nodes.len()];
        let mut stack = vec![i];
        seen[i] = true;
        let mut reached = false;
        while let Some(v) = stack.pop() {
            if matches!(nodes[v].tier, Tier::AccessPoint | Tier::Device) {
                reached = true;
                break;
            }
            for &w in &undirected[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if !reached {
            errs.push(format!(
                "fog node \"{}\" is not connected to any access point or device",
                n.id
            ));
        }
    }
    errs
}

/// Dijkstra label carrying the tie-breaking state: cost, then hop count,
/// then the lexicographically smallest node sequence. Node indices follow
/// id order, so comparing index sequences compares id sequences.
#[derive(Clone, PartialEq)]
struct Label {
    cost: f64,
    hops: usize,
    nodes: Vec<usize>,
    links: Vec<usize>,
}

impl Label {
    fn better_than(&self, other: &Label) -> bool {
        match self.cost.total_cmp(&other.cost) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Greater => false,
            std::cmp::Ordering::Equal => {
                (self.hops, &self.nodes) < (other.hops, &other.nodes)
            }
        }
    }
}

impl Topology {
    /// Builds a validated topology. Nodes are reordered by id so that all
    /// iteration (and thus every tie-break) is canonical.
    pub fn new(mut nodes: Vec<NodeSpec>, links: Vec<LinkSpec>) -> Result<Topology, Vec<String>> {
        let errs = validate(&nodes, &links);
        if !errs.is_empty() {
            return Err(errs);
        }
        nodes.sort_by(|a, b| a.id.cmp(&b.id));
        let index: HashMap<String, usize> =
            nodes.iter().enumerate().map(|(i, n)| (n.id.clone(), i)).collect();
        let link_ends: Vec<(usize, usize)> =
            links.iter().map(|l| (index[&l.from], index[&l.to])).collect();
        let mut out = vec![Vec::new(); nodes.len()];
        let mut order: Vec<usize> = (0..links.len()).collect();
        order.sort_by_key(|&li| (link_ends[li].0, link_ends[li].1, li));
        for li in order {
            out[link_ends[li].0].push(li);
        }
        Ok(Topology { nodes, links, index, link_ends, out, cache: RwLock::new(HashMap::new()) })
    }

    pub fn nodes(&self) -> &[NodeSpec] {
        &self.nodes
    }

    pub fn links(&self) -> &[LinkSpec] {
        &self.links
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn node(&self, idx: usize) -> &NodeSpec {
        &self.nodes[idx]
    }

    pub fn link(&self, idx: usize) -> &LinkSpec {
        &self.links[idx]
    }

    pub fn link_endpoints(&self, idx: usize) -> (usize, usize) {
        self.link_ends[idx]
    }

    /// Outgoing link indices of a node, ordered by (destination id, index).
    pub fn out_links(&self, node: usize) -> &[usize] {
        &self.out[node]
    }

    /// Indices of all nodes carrying a compute model, in id order.
    pub fn compute_node_indices(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| {
                self.nodes[i].compute.is_some() && self.nodes[i].tier.is_infrastructure()
            })
            .collect()
    }

    /// Wireless out-links of a device as (link index, access point index).
    pub fn wireless_out_links(&self, device: usize) -> Vec<(usize, usize)> {
        self.out[device]
            .iter()
            .filter(|&&li| self.links[li].model.is_wireless())
            .map(|&li| (li, self.link_ends[li].1))
            .collect()
    }

    /// Deterministic cost of one link under a metric. MAC randomness is
    /// excluded; parametric wireless is evaluated at its maximum rate.
    pub fn link_cost(&self, link: usize, size: f64, metric: Metric) -> f64 {
        match (&self.links[link].model, metric) {
            (LinkModel::Wired(h), Metric::Latency) => {
                size / h.capacity + h.prop_delay + h.proc_delay
            }
            (LinkModel::Wired(h), Metric::Energy) => h.eps * size,
            (LinkModel::WirelessCatalog(m), Metric::Latency) => size / m.rate + m.base_latency,
            (LinkModel::WirelessCatalog(m), Metric::Energy) => (m.eps_tx + m.eps_rx) * size,
            (LinkModel::WirelessParametric(m), Metric::Latency) => size / m.rate_max,
            (LinkModel::WirelessParametric(m), Metric::Energy) => {
                if size == 0.0 {
                    return 0.0;
                }
                let p = parametric_tx_power(m, m.rate_max).expect("rate_max is in range");
                (p / m.pa_efficiency + m.circuit_power_tx + m.circuit_power_rx) * size
                    / m.rate_max
            }
        }
    }

    /// Least-cost path under the metric, evaluated for the given payload.
    /// Ties break by fewer hops, then by lexicographic node-id sequence.
    pub fn shortest_path(
        &self,
        src: &str,
        dst: &str,
        size: f64,
        metric: Metric,
    ) -> Result<Path, TopologyError> {
        let s = self
            .node_index(src)
            .ok_or_else(|| TopologyError::UnknownNode(src.to_string()))?;
        let d = self
            .node_index(dst)
            .ok_or_else(|| TopologyError::UnknownNode(dst.to_string()))?;
        self.shortest_path_idx(s, d, size, metric).ok_or_else(|| TopologyError::Unreachable {
            src: src.to_string(),
            dst: dst.to_string(),
        })
    }

    /// Index-based variant of [`Topology::shortest_path`]; `None` when
    /// unreachable.
    pub fn shortest_path_idx(
        &self,
        src: usize,
        dst: usize,
        size: f64,
        metric: Metric,
    ) -> Option<Path> {
        if src == dst {
            return Some(Path { src, links: Vec::new() });
        }
        let key = (src, dst, metric, size.to_bits());
        if let Some(hit) = self.cache.read().expect("routing cache poisoned").get(&key) {
            return hit.clone();
        }
        let result = self.dijkstra(src, dst, size, metric);
        self.cache.write().expect("routing cache poisoned").insert(key, result.clone());
        result
    }

    fn dijkstra(&self, src: usize, dst: usize, size: f64, metric: Metric) -> Option<Path> {
        struct Item(Label);
        impl PartialEq for Item {
            fn eq(&self, other: &Self) -> bool {
                self.0 == other.0
            }
        }
        impl Eq for Item {}
        impl Ord for Item {
            fn cmp(&self, other: &Self) -> std::cmp::Ordering {
                // BinaryHeap is a max-heap; invert so the best label pops first.
                if self.0.better_than(&other.0) {
                    std::cmp::Ordering::Greater
                } else if other.0.better_than(&self.0) {
                    std::cmp::Ordering::Less
                } else {
                    std::cmp::Ordering::Equal
                }
            }
        }
        impl PartialOrd for Item {
            fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
                Some(self.cmp(other))
            }
        }

        let mut best: Vec<Option<Label>> = vec![None; self.nodes.len()];
        let start =
            Label { cost: 0.0, hops: 0, nodes: vec![src], links: Vec::new() };
        best[src] = Some(start.clone());
        let mut heap = BinaryHeap::new();
        heap.push(Item(start));
        while let Some(Item(label)) = heap.pop() {
            let here = *label.nodes.last().expect("non-empty label");
            match &best[here] {
                Some(b) if b.better_than(&label) => continue,
                _ => {}
            }
            if here == dst {
                return Some(Path { src, links: label.links });
            }
            for &li in &self.out[here] {
                let to = self.link_ends[li].1;
                if label.nodes.contains(&to) {
                    continue;
                }
                let mut next = label.clone();
                next.cost += self.link_cost(li, size, metric);
                next.hops += 1;
                next.nodes.push(to);
                next.links.push(li);
                let improved = match &best[to] {
                    Some(b) => next.better_than(b),
                    None => true,
                };
                if improved {
                    best[to] = Some(next.clone());
                    heap.push(Item(next));
                }
            }
        }
        None
    }

    /// Total deterministic (energy, latency) of a path for the payload.
    /// Wireless energy counts both sides; parametric links run at rate_max;
    /// MAC randomness is excluded.
    pub fn path_cost(&self, path: &Path, size: f64) -> (f64, f64) {
        let mut energy = 0.0;
        let mut latency = 0.0;
        for &li in &path.links {
            energy += self.link_cost(li, size, Metric::Energy);
            latency += self.link_cost(li, size, Metric::Latency);
        }
        (energy, latency)
    }

    /// Destination node of a path.
    pub fn path_dst(&self, path: &Path) -> usize {
        path.links.last().map_or(path.src, |&li| self.link_ends[li].1)
    }

    /// Node-id sequence of a path, starting at its source.
    pub fn path_node_ids(&self, path: &Path) -> Vec<&str> {
        let mut ids = vec![self.nodes[path.src].id.as_str()];
        for &li in &path.links {
            ids.push(self.nodes[self.link_ends[li].1].id.as_str());
        }
        ids
    }
}
