//! Pure cost functions: energy and latency of wireless links, wired hops,
//! and computation, plus the closed-form rate and frequency optimizers.

use crate::units::{db_to_linear, BOLTZMANN};
use rand::Rng;
use rand_distr::{Distribution, Exp};
use thiserror::Error;

/// Relative slack used when testing feasibility limits, so that values that
/// are equal up to float rounding are not rejected.
pub const FEAS_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("temperature must be positive, got {0} K")]
    NonPositiveTemperature(f64),
    #[error("rate {rate:e} b/s exceeds the link maximum {rate_max:e} b/s")]
    RateAboveMax { rate: f64, rate_max: f64 },
    #[error("latency budget needs {required:e} b/s, above the link maximum {rate_max:e} b/s")]
    RateInfeasible { required: f64, rate_max: f64 },
    #[error("frequency {f:e} Hz outside the CPU range [{f_min:e}, {f_max:e}] Hz")]
    FrequencyOutOfRange { f: f64, f_min: f64, f_max: f64 },
    #[error("time budget needs {required:e} Hz, above the CPU maximum {f_max:e} Hz")]
    FrequencyInfeasible { required: f64, f_max: f64 },
}

/// Measured per-bit wireless link: fixed throughput, fixed per-bit energy on
/// each side, and an optional exponential MAC contention delay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WirelessCatalogModel {
    /// Transmitter-side energy per bit (J/b).
    pub eps_tx: f64,
    /// Receiver-side energy per bit (J/b).
    pub eps_rx: f64,
    /// Link throughput (b/s).
    pub rate: f64,
    /// Fixed per-packet latency (s).
    pub base_latency: f64,
    /// Mean of the exponential MAC delay (s); 0 disables the random term.
    pub mac_mean_delay: f64,
}

impl WirelessCatalogModel {
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if !(self.eps_tx >= 0.0) {
            v.push(format!("eps_tx must be >= 0, got {}", self.eps_tx));
        }
        if !(self.eps_rx >= 0.0) {
            v.push(format!("eps_rx must be >= 0, got {}", self.eps_rx));
        }
        if !(self.rate > 0.0) {
            v.push(format!("rate must be > 0, got {}", self.rate));
        }
        if !(self.base_latency >= 0.0) {
            v.push(format!("base_latency must be >= 0, got {}", self.base_latency));
        }
        if !(self.mac_mean_delay >= 0.0) {
            v.push(format!("mac_mean_delay must be >= 0, got {}", self.mac_mean_delay));
        }
        v
    }
}

/// Shannon-based wireless link: transmit power follows from bandwidth, noise
/// density, and path loss; the transmission rate is a free variable up to
/// `rate_max`. PA efficiency and circuit powers let the model interpolate
/// between the theoretical bound and practical radios.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WirelessParametricModel {
    /// Channel bandwidth (Hz).
    pub bandwidth: f64,
    /// One-sided noise power spectral density (W/Hz).
    pub noise_density: f64,
    /// Link attenuation (dB).
    pub path_loss_db: f64,
    /// Power-amplifier drain efficiency, in (0, 1].
    pub pa_efficiency: f64,
    /// Transmitter circuit power while sending (W).
    pub circuit_power_tx: f64,
    /// Receiver circuit power while receiving (W).
    pub circuit_power_rx: f64,
    /// Highest usable transmission rate (b/s).
    pub rate_max: f64,
}

impl WirelessParametricModel {
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if !(self.bandwidth > 0.0) {
            v.push(format!("bandwidth must be > 0, got {}", self.bandwidth));
        }
        if !(self.noise_density > 0.0) {
            v.push(format!("noise_density must be > 0, got {}", self.noise_density));
        }
        if !self.path_loss_db.is_finite() {
            v.push(format!("path_loss_db must be finite, got {}", self.path_loss_db));
        }
        if !(self.pa_efficiency > 0.0 && self.pa_efficiency <= 1.0) {
            v.push(format!("pa_efficiency must be in (0, 1], got {}", self.pa_efficiency));
        }
        if !(self.circuit_power_tx >= 0.0) {
            v.push(format!("circuit_power_tx must be >= 0, got {}", self.circuit_power_tx));
        }
        if !(self.circuit_power_rx >= 0.0) {
            v.push(format!("circuit_power_rx must be >= 0, got {}", self.circuit_power_rx));
        }
        if !(self.rate_max > 0.0) {
            v.push(format!("rate_max must be > 0, got {}", self.rate_max));
        }
        v
    }
}

/// One wired hop: incremental per-bit energy above idle, a serialization
/// capacity, and fixed propagation plus processing delays.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WiredHopModel {
    /// Incremental energy per bit above idle (J/b).
    pub eps: f64,
    /// Serialization capacity (b/s).
    pub capacity: f64,
    /// Propagation delay (s).
    pub prop_delay: f64,
    /// Processing delay (s).
    pub proc_delay: f64,
}

impl WiredHopModel {
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if !(self.eps >= 0.0) {
            v.push(format!("eps must be >= 0, got {}", self.eps));
        }
        if !(self.capacity > 0.0) {
            v.push(format!("capacity must be > 0, got {}", self.capacity));
        }
        if !(self.prop_delay >= 0.0) {
            v.push(format!("prop_delay must be >= 0, got {}", self.prop_delay));
        }
        if !(self.proc_delay >= 0.0) {
            v.push(format!("proc_delay must be >= 0, got {}", self.proc_delay));
        }
        v
    }
}

/// A CPU with DVFS: power is `p_static + kappa * f^alpha` while running, and
/// the clock `f` may be set anywhere in `[f_min, f_max]` per task.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComputeModel {
    /// Lowest configurable clock (Hz).
    pub f_min: f64,
    /// Highest configurable clock (Hz).
    pub f_max: f64,
    /// Operations retired per cycle.
    pub ops_per_cycle: f64,
    /// Load-independent power while running (W).
    pub p_static: f64,
    /// Frequency-dependent power coefficient (W/Hz^alpha).
    pub kappa: f64,
    /// Power-law exponent; 3 models classical CMOS dynamic power.
    pub alpha: f64,
}

impl ComputeModel {
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if !(self.f_min > 0.0) {
            v.push(format!("f_min must be > 0, got {}", self.f_min));
        }
        if !(self.f_max >= self.f_min) {
            v.push(format!(
                "f_max must be >= f_min, got f_max {} < f_min {}",
                self.f_max, self.f_min
            ));
        }
        if !(self.ops_per_cycle > 0.0) {
            v.push(format!("ops_per_cycle must be > 0, got {}", self.ops_per_cycle));
        }
        if !(self.p_static >= 0.0) {
            v.push(format!("p_static must be >= 0, got {}", self.p_static));
        }
        if !(self.kappa >= 0.0) {
            v.push(format!("kappa must be >= 0, got {}", self.kappa));
        }
        if !(self.alpha > 1.0) {
            v.push(format!("alpha must be > 1, got {}", self.alpha));
        }
        v
    }

    /// Unconstrained energy-optimal clock `(p_static / ((alpha-1) kappa))^(1/alpha)`.
    /// Returns `+inf` when `kappa = 0` (then faster is always cheaper).
    pub fn energy_optimal_frequency(&self) -> f64 {
        if self.kappa > 0.0 {
            (self.p_static / ((self.alpha - 1.0) * self.kappa)).powf(1.0 / self.alpha)
        } else {
            f64::INFINITY
        }
    }
}

/// A whole machine characterized by aggregate power and peak performance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComputerSpec {
    pub name: &'static str,
    /// Total power draw (W).
    pub power: f64,
    /// Peak performance (Flop/s).
    pub perf: f64,
}

impl ComputerSpec {
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if !(self.power > 0.0) {
            v.push(format!("power must be > 0, got {}", self.power));
        }
        if !(self.perf > 0.0) {
            v.push(format!("perf must be > 0, got {}", self.perf));
        }
        v
    }
}

/// Which side(s) of a wireless link to count in the energy figure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkSide {
    Tx,
    Rx,
    Both,
}

/// Minimum transmit energy per bit over an infinite-bandwidth channel at the
/// given path loss: `k_B * T * ln2 * 10^(path_loss_db/10)`.
pub fn shannon_min_energy_per_bit(path_loss_db: f64, temperature: f64) -> Result<f64, ModelError> {
    if !(temperature > 0.0) {
        return Err(ModelError::NonPositiveTemperature(temperature));
    }
    Ok(BOLTZMANN * temperature * std::f64::consts::LN_2 * db_to_linear(path_loss_db))
}

/// Energy per bit of running a task with the given arithmetic intensity
/// (operations per byte) on a machine: `(power/perf) * intensity / 8`.
pub fn compute_energy_per_bit(spec: &ComputerSpec, intensity: f64) -> f64 {
    assert!(intensity > 0.0, "intensity must be positive");
    spec.power / spec.perf * intensity / 8.0
}

/// Energy and latency of moving `size` bits over a catalog wireless link.
/// Energy counts the side(s) selected; latency is serialization plus the
/// fixed base plus one exponential MAC delay sample (if enabled).
/// A zero-size transfer costs nothing and takes only the base latency.
pub fn wireless_cost_catalog<R: Rng + ?Sized>(
    model: &WirelessCatalogModel,
    size: f64,
    side: LinkSide,
    rng: &mut R,
) -> (f64, f64) {
    assert!(size >= 0.0, "size must be non-negative");
    if size == 0.0 {
        return (0.0, model.base_latency);
    }
    let eps = match side {
        LinkSide::Tx => model.eps_tx,
        LinkSide::Rx => model.eps_rx,
        LinkSide::Both => model.eps_tx + model.eps_rx,
    };
    let mac = sample_mac_delay(model.mac_mean_delay, rng);
    (eps * size, size / model.rate + model.base_latency + mac)
}

/// Draws one exponential MAC delay; 0 when the mean is 0.
pub fn sample_mac_delay<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> f64 {
    if mean > 0.0 {
        Exp::new(1.0 / mean).expect("positive rate").sample(rng)
    } else {
        0.0
    }
}

/// Radiated power needed to sustain `rate` over the parametric link:
/// `N0 * B * (2^(rate/B) - 1) * 10^(path_loss_db/10)`.
pub fn parametric_tx_power(model: &WirelessParametricModel, rate: f64) -> Result<f64, ModelError> {
    assert!(rate >= 0.0, "rate must be non-negative");
    if rate > model.rate_max {
        return Err(ModelError::RateAboveMax { rate, rate_max: model.rate_max });
    }
    Ok(model.noise_density
        * model.bandwidth
        * ((rate / model.bandwidth).exp2() - 1.0)
        * db_to_linear(model.path_loss_db))
}

/// Energy drawn by each side of a parametric link while `size` bits are in
/// the air at `rate`, and the air time itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParametricLinkCost {
    /// Transmitter side: PA drain plus TX circuits (J).
    pub energy_tx: f64,
    /// Receiver side: RX circuits (J).
    pub energy_rx: f64,
    /// Air time (s).
    pub latency: f64,
}

/// Per-side energy split of a parametric wireless transfer at a fixed rate.
pub fn parametric_link_cost(
    model: &WirelessParametricModel,
    size: f64,
    rate: f64,
) -> Result<ParametricLinkCost, ModelError> {
    assert!(size >= 0.0, "size must be non-negative");
    if size == 0.0 {
        return Ok(ParametricLinkCost { energy_tx: 0.0, energy_rx: 0.0, latency: 0.0 });
    }
    assert!(rate > 0.0, "rate must be positive for a non-empty transfer");
    let p = parametric_tx_power(model, rate)?;
    let t = size / rate;
    Ok(ParametricLinkCost {
        energy_tx: (p / model.pa_efficiency + model.circuit_power_tx) * t,
        energy_rx: model.circuit_power_rx * t,
        latency: t,
    })
}

/// Principal branch of the Lambert W function, `w` such that `w e^w = z`,
/// for `z >= -1/e`. Accurate to about 1e-14 relative.
pub fn lambert_w0(z: f64) -> f64 {
    let branch = -1.0 / std::f64::consts::E;
    assert!(z >= branch - 1e-9, "lambert_w0 domain violation: z = {z}");
    let z = z.max(branch);
    if z == 0.0 {
        return 0.0;
    }
    // Near the branch point the iteration is singular; the series in
    // p = sqrt(2(ez + 1)) is accurate there instead.
    let p = (2.0 * (std::f64::consts::E * z + 1.0)).max(0.0).sqrt();
    if p < 1e-4 {
        return -1.0 + p - p * p / 3.0 + 11.0 * p.powi(3) / 72.0;
    }
    let mut w = if z < -0.25 {
        -1.0 + p - p * p / 3.0
    } else if z < std::f64::consts::E {
        (1.0 + z).ln()
    } else {
        let l1 = z.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    };
    for _ in 0..50 {
        // Halley step on f(w) = w e^w - z.
        let ew = w.exp();
        let f = w * ew - z;
        let denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0);
        let dw = f / denom;
        w -= dw;
        if dw.abs() <= 1e-15 * (1.0 + w.abs()) {
            break;
        }
    }
    w
}

/// Minimizes `(a (2^(r/B) - 1) + c) * size / r` over `r` in `[r_lo, r_hi]`.
/// `a` folds noise, path loss, and PA efficiency; `c` is the rate-independent
/// power. The interior optimum has the closed form
/// `r* = B (1 + W0((c - a)/(a e))) / ln2`; the returned value is the float
/// minimum over the clamped optimum and both interval ends, so callers can
/// rely on it never exceeding the objective at either endpoint.
pub fn minimize_rate_energy(
    bandwidth: f64,
    a: f64,
    c: f64,
    size: f64,
    r_lo: f64,
    r_hi: f64,
) -> (f64, f64) {
    assert!(bandwidth > 0.0 && size > 0.0 && a >= 0.0 && c >= 0.0);
    assert!(r_lo > 0.0 && r_lo <= r_hi);
    let eval = |r: f64| (a * ((r / bandwidth).exp2() - 1.0) + c) * size / r;
    let mut best = (r_lo, eval(r_lo));
    let consider = |r: f64, best: &mut (f64, f64)| {
        let e = eval(r);
        if e < best.1 {
            *best = (r, e);
        }
    };
    if a > 0.0 {
        let u = lambert_w0((c - a) / (a * std::f64::consts::E));
        let interior = bandwidth * (1.0 + u) / std::f64::consts::LN_2;
        if interior.is_finite() && interior > r_lo && interior < r_hi {
            consider(interior, &mut best);
        }
    }
    consider(r_hi, &mut best);
    best
}

/// Energy-optimal transmission rate for `size` bits under a latency budget:
/// minimizes `(tx_power(r)/eta + circuits) * size / r` over
/// `r` in `[size/budget, rate_max]`. Returns `(rate, energy, latency)`.
pub fn optimal_rate(
    model: &WirelessParametricModel,
    size: f64,
    latency_budget: f64,
) -> Result<(f64, f64, f64), ModelError> {
    assert!(size > 0.0, "size must be positive");
    assert!(latency_budget > 0.0, "latency budget must be positive");
    let required = size / latency_budget;
    if required > model.rate_max * (1.0 + FEAS_EPS) {
        return Err(ModelError::RateInfeasible { required, rate_max: model.rate_max });
    }
    let r_lo = required.min(model.rate_max);
    let a = model.noise_density * model.bandwidth * db_to_linear(model.path_loss_db)
        / model.pa_efficiency;
    let c = model.circuit_power_tx + model.circuit_power_rx;
    let (rate, energy) = minimize_rate_energy(model.bandwidth, a, c, size, r_lo, model.rate_max);
    Ok((rate, energy, size / rate))
}

/// Energy and latency of a multi-hop wired transfer: per-bit energies and
/// serialization plus fixed delays, summed over hops.
pub fn wired_path_cost(hops: &[WiredHopModel], size: f64) -> (f64, f64) {
    assert!(size >= 0.0, "size must be non-negative");
    let mut energy = 0.0;
    let mut latency = 0.0;
    for h in hops {
        energy += h.eps * size;
        latency += size / h.capacity + h.prop_delay + h.proc_delay;
    }
    (energy, latency)
}

/// Time and energy of executing `n_ops` operations at clock `f`:
/// `time = n_ops / (ops_per_cycle * f)`, `energy = (p_static + kappa f^alpha) * time`.
pub fn compute_cost(model: &ComputeModel, n_ops: f64, f: f64) -> Result<(f64, f64), ModelError> {
    assert!(n_ops >= 0.0, "operation count must be non-negative");
    if !(f >= model.f_min && f <= model.f_max) {
        return Err(ModelError::FrequencyOutOfRange { f, f_min: model.f_min, f_max: model.f_max });
    }
    let time = n_ops / (model.ops_per_cycle * f);
    let energy = (model.p_static + model.kappa * f.powf(model.alpha)) * time;
    Ok((time, energy))
}

/// Energy-optimal clock for `n_ops` operations under a time budget: the
/// unconstrained optimum clamped into `[max(f_min, deadline clock), f_max]`.
/// Returns `(f, energy, time)`; the energy is the float minimum over the
/// clamped optimum and both interval ends, so it never exceeds the cost at
/// `f_max` or at the deadline-binding clock.
pub fn optimal_frequency(
    model: &ComputeModel,
    n_ops: f64,
    time_budget: f64,
) -> Result<(f64, f64, f64), ModelError> {
    assert!(n_ops > 0.0, "operation count must be positive");
    assert!(time_budget > 0.0, "time budget must be positive");
    let required = n_ops / (model.ops_per_cycle * time_budget);
    if required > model.f_max * (1.0 + FEAS_EPS) {
        return Err(ModelError::FrequencyInfeasible { required, f_max: model.f_max });
    }
    let f_lo = model.f_min.max(required.min(model.f_max));
    let f_e = model.energy_optimal_frequency();
    let mut best: Option<(f64, f64, f64)> = None;
    for f in [f_e.clamp(f_lo, model.f_max), f_lo, model.f_max] {
        let (time, energy) = compute_cost(model, n_ops, f).expect("candidate clock in range");
        if best.map_or(true, |(_, e, _)| energy < e) {
            best = Some((f, energy, time));
        }
    }
    Ok(best.expect("at least one candidate"))
}
