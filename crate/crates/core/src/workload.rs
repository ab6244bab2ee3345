//! Request generation: value distributions, weighted sources, and the
//! fixed-rate stream used by the age-of-information study.

use crate::seed;
use rand::distributions::{Distribution as _, WeightedIndex};
use rand::Rng;
use thiserror::Error;

/// One unit of work: `size` input bits requiring `intensity` operations per
/// bit, to be finished within `deadline` seconds of `gen_time`, returning
/// `result_size` bits to the requester.
#[derive(Debug, Clone, PartialEq)]
pub struct Request {
    pub id: u64,
    pub source: String,
    /// Pre-assigned ingress access point. `None` lets the allocation
    /// strategy pick one; equal to `source` means the request originates
    /// inside the infrastructure and needs no wireless hop.
    pub assigned_ap: Option<String>,
    pub size: f64,
    pub intensity: f64,
    pub deadline: f64,
    pub gen_time: f64,
    pub result_size: f64,
}

impl Request {
    /// Total operations demanded by the request.
    pub fn ops(&self) -> f64 {
        self.size * self.intensity
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Dist {
    Constant(f64),
    Uniform { low: f64, high: f64 },
    /// Log-normal given the underlying normal's parameters; mean is
    /// exp(mu + sigma^2 / 2).
    LogNormal { mu: f64, sigma: f64 },
}

impl Dist {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Dist::Constant(v) => v,
            Dist::Uniform { low, high } => {
                if low == high {
                    low
                } else {
                    rng.gen_range(low..high)
                }
            }
            Dist::LogNormal { mu, sigma } => rand_distr::LogNormal::new(mu, sigma)
                .expect("validated parameters")
                .sample(rng),
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            Dist::Constant(v) => v,
            Dist::Uniform { low, high } => 0.5 * (low + high),
            Dist::LogNormal { mu, sigma } => (mu + 0.5 * sigma * sigma).exp(),
        }
    }

    /// Violation messages for a quantity named `what`. Zero values are
    /// tolerated only when `allow_zero` (e.g. an empty result payload).
    pub fn violations(&self, what: &str, allow_zero: bool) -> Vec<String> {
        let mut errs = Vec::new();
        let bound = |v: f64, errs: &mut Vec<String>| {
            if !v.is_finite() {
                errs.push(format!("{what}: value {v} is not finite"));
            } else if v < 0.0 || (v == 0.0 && !allow_zero) {
                errs.push(format!("{what}: value {v} must be positive"));
            }
        };
        match *self {
            Dist::Constant(v) => bound(v, &mut errs),
            Dist::Uniform { low, high } => {
                bound(low, &mut errs);
                bound(high, &mut errs);
                if low > high {
                    errs.push(format!("{what}: uniform low {low} exceeds high {high}"));
                }
            }
            Dist::LogNormal { mu, sigma } => {
                if !mu.is_finite() {
                    errs.push(format!("{what}: log-normal mu {mu} is not finite"));
                }
                if !sigma.is_finite() || sigma < 0.0 {
                    errs.push(format!("{what}: log-normal sigma {sigma} must be >= 0"));
                }
            }
        }
        errs
    }
}

/// A node that emits requests, drawn with probability proportional to
/// `weight`. `arrival` pre-assigns the ingress access point.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceSpec {
    pub node: String,
    pub weight: f64,
    pub arrival: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RequestDistribution {
    pub size: Dist,
    pub intensity: Dist,
    pub deadline: Dist,
    pub result_size: Dist,
    pub sources: Vec<SourceSpec>,
}

impl RequestDistribution {
    pub fn violations(&self) -> Vec<String> {
        let mut errs = Vec::new();
        errs.extend(self.size.violations("size", false));
        errs.extend(self.intensity.violations("intensity", false));
        errs.extend(self.deadline.violations("deadline", false));
        errs.extend(self.result_size.violations("result_size", true));
        if self.sources.is_empty() {
            errs.push("no request sources defined".to_string());
        }
        for s in &self.sources {
            if !(s.weight > 0.0) || !s.weight.is_finite() {
                errs.push(format!("source \"{}\": weight {} must be positive", s.node, s.weight));
            }
        }
        errs
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WorkloadError {
    #[error("invalid workload: {}", .0.join("; "))]
    Invalid(Vec<String>),
}

/// Draws `n` requests from the named stream `"workload"` of `master_seed`.
/// All requests carry `gen_time` 0; arrival processes are modeled separately.
pub fn sample_requests(
    dist: &RequestDistribution,
    n: u64,
    master_seed: u64,
) -> Result<Vec<Request>, WorkloadError> {
    let errs = dist.violations();
    if !errs.is_empty() {
        return Err(WorkloadError::Invalid(errs));
    }
    let mut rng = seed::stream(master_seed, "workload");
    let weights = WeightedIndex::new(dist.sources.iter().map(|s| s.weight))
        .map_err(|e| WorkloadError::Invalid(vec![format!("source weights: {e}")]))?;
    let mut out = Vec::with_capacity(n as usize);
    for id in 0..n {
        let src = &dist.sources[weights.sample(&mut rng)];
        out.push(Request {
            id,
            source: src.node.clone(),
            assigned_ap: src.arrival.clone(),
            size: dist.size.sample(&mut rng),
            intensity: dist.intensity.sample(&mut rng),
            deadline: dist.deadline.sample(&mut rng),
            gen_time: 0.0,
            result_size: dist.result_size.sample(&mut rng),
        });
    }
    Ok(out)
}

/// Generation instants k/rate for k/rate < horizon. The count is
/// ceil(rate * horizon) with a snap to the nearest integer when
/// rate * horizon lands within 1e-9 relative of one, so that e.g. 1000/s
/// over 0.01 s yields exactly 10 instants despite float dust.
pub fn periodic_times(rate: f64, horizon: f64) -> Vec<f64> {
    assert!(rate > 0.0 && rate.is_finite(), "rate must be positive");
    assert!(horizon > 0.0 && horizon.is_finite(), "horizon must be positive");
    let x = rate * horizon;
    let r = x.round();
    let n = if (x - r).abs() < 1e-9 * x.max(1.0) { r as u64 } else { x.ceil() as u64 };
    (0..n.max(1)).map(|k| k as f64 / rate).collect()
}

/// Periodic copies of `template` at the instants of [`periodic_times`].
pub fn periodic_stream(rate: f64, template: &Request, horizon: f64) -> Vec<Request> {
    periodic_times(rate, horizon)
        .into_iter()
        .enumerate()
        .map(|(k, gen_time)| Request { id: k as u64, gen_time, ..template.clone() })
        .collect()
}
