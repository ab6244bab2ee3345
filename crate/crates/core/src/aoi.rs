//! Slotted pipeline simulation for age of information: a periodic source
//! feeding a one-slot-per-request wireless uplink, optional wired hops, and
//! a FIFO CPU, with exact sawtooth integration of the age signal.

use crate::models::{
    compute_cost, parametric_tx_power, wired_path_cost, ComputeModel, WiredHopModel,
    WirelessParametricModel, FEAS_EPS,
};
use crate::workload::periodic_times;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq)]
pub struct AoiScenario {
    /// Request generation rate in 1/s.
    pub rate: f64,
    /// Slot duration in s; each request occupies exactly one slot.
    pub slot: f64,
    /// Request payload in bits.
    pub size: f64,
    /// Operations per bit.
    pub intensity: f64,
    pub wireless: WirelessParametricModel,
    /// Wired hops between the access point and the compute node; empty
    /// means the CPU sits directly behind the wireless receiver.
    pub wired: Vec<WiredHopModel>,
    pub compute: ComputeModel,
    /// Simulated time span in s.
    pub horizon: f64,
    /// Initial span excluded from all statistics.
    pub warmup: f64,
    /// Constant power draw added to the energy account regardless of
    /// activity; 0 models incremental-over-idle costs only.
    pub idle_power: f64,
}

impl AoiScenario {
    pub fn violations(&self) -> Vec<String> {
        let mut errs = Vec::new();
        let pos = |v: f64, what: &str, errs: &mut Vec<String>| {
            if !(v > 0.0) || !v.is_finite() {
                errs.push(format!("{what} must be positive, got {v}"));
            }
        };
        pos(self.rate, "rate", &mut errs);
        pos(self.slot, "slot", &mut errs);
        pos(self.size, "size", &mut errs);
        pos(self.intensity, "intensity", &mut errs);
        pos(self.horizon, "horizon", &mut errs);
        if !(self.warmup >= 0.0) || !self.warmup.is_finite() {
            errs.push(format!("warmup must be >= 0, got {}", self.warmup));
        }
        if self.horizon <= self.warmup {
            errs.push(format!(
                "horizon {} must exceed warmup {}",
                self.horizon, self.warmup
            ));
        }
        if !(self.idle_power >= 0.0) || !self.idle_power.is_finite() {
            errs.push(format!("idle_power must be >= 0, got {}", self.idle_power));
        }
        for v in self.wireless.violations() {
            errs.push(format!("wireless: {v}"));
        }
        for (i, h) in self.wired.iter().enumerate() {
            for v in h.violations() {
                errs.push(format!("wired hop #{i}: {v}"));
            }
        }
        for v in self.compute.violations() {
            errs.push(format!("compute: {v}"));
        }
        errs
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AoiResult {
    pub mean_aoi: f64,
    pub mean_power: f64,
    pub tx_utilization: f64,
    pub cpu_utilization: f64,
    /// The backlog was still growing when the horizon ended.
    pub diverged: bool,
}

/// Per-request event times. Completion equals the compute end; results are
/// consumed at the compute node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AoiSample {
    pub gen_time: f64,
    pub tx_start: f64,
    pub tx_end: f64,
    pub compute_start: f64,
    pub compute_end: f64,
    pub completion: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AoiError {
    #[error("invalid scenario: {}", .0.join("; "))]
    Invalid(Vec<String>),
    #[error(
        "{size} b cannot be delivered within one {slot} s slot: \
         needs {required} b/s but the link tops out at {rate_max} b/s"
    )]
    Undeliverable { size: f64, slot: f64, required: f64, rate_max: f64 },
}

/// CPU clock used for the whole run: the energy-optimal frequency raised to
/// whatever keeps the queue stable at the offered load, clamped to the
/// hardware range.
pub fn operating_frequency(s: &AoiScenario) -> f64 {
    let stable = s.rate * s.size * s.intensity / s.compute.ops_per_cycle;
    let floor = stable.max(s.compute.f_min).min(s.compute.f_max);
    s.compute.energy_optimal_frequency().clamp(floor, s.compute.f_max)
}

pub fn simulate(scenario: &AoiScenario) -> Result<AoiResult, AoiError> {
    simulate_with_trace(scenario).map(|(res, _)| res)
}

pub fn simulate_with_trace(
    s: &AoiScenario,
) -> Result<(AoiResult, Vec<AoiSample>), AoiError> {
    let errs = s.violations();
    if !errs.is_empty() {
        return Err(AoiError::Invalid(errs));
    }
    let slot_rate = s.size / s.slot;
    if slot_rate > s.wireless.rate_max * (1.0 + FEAS_EPS) {
        return Err(AoiError::Undeliverable {
            size: s.size,
            slot: s.slot,
            required: slot_rate,
            rate_max: s.wireless.rate_max,
        });
    }
    let p_rad = parametric_tx_power(&s.wireless, slot_rate.min(s.wireless.rate_max))
        .expect("rate checked against rate_max");
    let p_tx_busy =
        p_rad / s.wireless.pa_efficiency + s.wireless.circuit_power_tx + s.wireless.circuit_power_rx;
    let (e_wired, d_wired) = wired_path_cost(&s.wired, s.size);
    let f_op = operating_frequency(s);
    let (t_compute, e_compute) = compute_cost(&s.compute, s.size * s.intensity, f_op)
        .expect("operating frequency clamped into range");
    let p_cpu_busy = e_compute / t_compute;

    let times = periodic_times(s.rate, s.horizon);
    let mut samples = Vec::with_capacity(times.len());
    let mut next_free_slot: u64 = 0;
    let mut cpu_free = 0.0f64;
    for &g in &times {
        // Fixed slot grid: the first boundary at or after the generation
        // instant, snapping when float dust puts g barely past a boundary.
        let x = g / s.slot;
        let r = x.round();
        let m = if (x - r).abs() < 1e-9 * x.abs().max(1.0) { r } else { x.ceil() };
        let m = (m as u64).max(next_free_slot);
        next_free_slot = m + 1;
        let tx_start = m as f64 * s.slot;
        let tx_end = (m + 1) as f64 * s.slot;
        let ready = tx_end + d_wired;
        let compute_start = ready.max(cpu_free);
        let compute_end = compute_start + t_compute;
        cpu_free = compute_end;
        samples.push(AoiSample {
            gen_time: g,
            tx_start,
            tx_end,
            compute_start,
            compute_end,
            completion: compute_end,
        });
    }

    let window = s.horizon - s.warmup;
    let clip = |a: f64, b: f64| (b.min(s.horizon) - a.max(s.warmup)).max(0.0);
    // Age integral between consecutive completions: the age is t - g where
    // g is the newest completed generation, so each linear segment
    // integrates to (b - a) * ((a + b)/2 - g) inside the window.
    let seg = |a: f64, b: f64, g: f64| {
        let a = a.max(s.warmup);
        let b = b.min(s.horizon);
        if b <= a {
            0.0
        } else {
            (b - a) * (0.5 * (a + b) - g)
        }
    };
    let mut integral = 0.0;
    let mut g_latest = 0.0f64;
    let mut t_prev = 0.0f64;
    for smp in &samples {
        if smp.completion > s.horizon {
            break;
        }
        integral += seg(t_prev, smp.completion, g_latest);
        // FIFO: completions and generation baselines are both monotone.
        g_latest = smp.gen_time;
        t_prev = smp.completion;
    }
    integral += seg(t_prev, s.horizon, g_latest);
    let mean_aoi = integral / window;

    let mut tx_busy = 0.0;
    let mut cpu_busy = 0.0;
    let mut energy = s.idle_power * window;
    for smp in &samples {
        let tx = clip(smp.tx_start, smp.tx_end);
        tx_busy += tx;
        energy += p_tx_busy * tx;
        let cp = clip(smp.compute_start, smp.compute_end);
        cpu_busy += cp;
        energy += p_cpu_busy * cp;
        if !s.wired.is_empty() && smp.tx_end >= s.warmup && smp.tx_end < s.horizon {
            energy += e_wired;
        }
    }

    let backlog = |t: f64| {
        let generated = times.partition_point(|&g| g <= t);
        let completed = samples.partition_point(|smp| smp.completion <= t);
        generated - completed
    };
    let mid = s.warmup.max(0.5 * s.horizon);
    let diverged = backlog(s.horizon) > backlog(mid) + 1;

    Ok((
        AoiResult {
            mean_aoi,
            mean_power: energy / window,
            tx_utilization: tx_busy / window,
            cpu_utilization: cpu_busy / window,
            diverged,
        },
        samples,
    ))
}

/// Independent simulations per rate, returned sorted by rate.
pub fn sweep_rate(
    base: &AoiScenario,
    rates: &[f64],
) -> Result<Vec<(f64, AoiResult)>, AoiError> {
    let mut out = rates
        .par_iter()
        .map(|&rate| simulate(&AoiScenario { rate, ..base.clone() }).map(|res| (rate, res)))
        .collect::<Result<Vec<_>, _>>()?;
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(out)
}

/// Cheapest grid rate whose mean age stays within `aoi_max`; ties go to the
/// smaller rate. `None` when no grid point qualifies.
pub fn optimal_rate_for_aoi(
    base: &AoiScenario,
    aoi_max: f64,
    rates: &[f64],
) -> Result<Option<(f64, AoiResult)>, AoiError> {
    let mut best: Option<(f64, AoiResult)> = None;
    for (rate, res) in sweep_rate(base, rates)? {
        if res.mean_aoi > aoi_max {
            continue;
        }
        let better = match &best {
            None => true,
            Some((br, bres)) => match res.mean_power.total_cmp(&bres.mean_power) {
                std::cmp::Ordering::Less => true,
                std::cmp::Ordering::Greater => false,
                std::cmp::Ordering::Equal => rate < *br,
            },
        };
        if better {
            best = Some((rate, res));
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    /// T = 1 ms, no wired hops, compute exactly 4 ms at the energy-optimal
    /// clock of 1 GHz, so the unqueued pipeline delay is 5 ms.
    fn base() -> AoiScenario {
        AoiScenario {
            rate: 100.0,
            slot: 1e-3,
            size: 1e5,
            intensity: 40.0,
            wireless: WirelessParametricModel {
                bandwidth: 2e7,
                noise_density: 4e-21,
                path_loss_db: 85.0,
                pa_efficiency: 0.35,
                circuit_power_tx: 0.3,
                circuit_power_rx: 0.1,
                rate_max: 2e8,
            },
            wired: Vec::new(),
            compute: ComputeModel {
                f_min: 1e6,
                f_max: 3e9,
                ops_per_cycle: 1.0,
                p_static: 2.0,
                kappa: 1e-27,
                alpha: 3.0,
            },
            horizon: 10.0,
            warmup: 1.0,
            idle_power: 0.0,
        }
    }

    fn pipeline_delay(s: &AoiScenario) -> f64 {
        let (_, d_wired) = wired_path_cost(&s.wired, s.size);
        let f = operating_frequency(s);
        s.slot + d_wired + s.size * s.intensity / (s.compute.ops_per_cycle * f)
    }

    #[test]
    fn operating_frequency_prefers_energy_optimum() {
        let s = base();
        // f_e = (p_static / (2 kappa))^(1/3) = 1e9; the stability floor at
        // 100/s is 4e8, below it.
        assert!(rel(operating_frequency(&s), 1e9) < 1e-12);
        // A higher rate lifts the floor above f_e.
        let fast = AoiScenario { rate: 600.0, ..s };
        assert!(rel(operating_frequency(&fast), 600.0 * 1e5 * 40.0) < 1e-12);
    }

    #[test]
    fn single_request_sawtooth() {
        let mut s = base();
        s.rate = 1.0 / s.horizon; // exactly one request, generated at t = 0
        s.warmup = 0.0;
        let (res, trace) = simulate_with_trace(&s).unwrap();
        assert_eq!(trace.len(), 1);
        assert!(rel(trace[0].completion, 5e-3) < 1e-9, "completion {}", trace[0].completion);
        // One reset at D with the same baseline: the integral is H^2/2.
        assert!(rel(res.mean_aoi, s.horizon / 2.0) < 1e-9, "mean {}", res.mean_aoi);
        assert!(!res.diverged);
    }

    #[test]
    fn light_load_matches_analytic_sawtooth() {
        let s = base();
        let d = pipeline_delay(&s);
        assert!(rel(d, 5e-3) < 1e-12);
        let res = simulate(&s).unwrap();
        // Generations align with slot boundaries and no queue forms, so the
        // sawtooth is exactly periodic: mean = D + 1/(2 rate).
        let expect = d + 0.5 / s.rate;
        assert!(rel(res.mean_aoi, expect) < 1e-9, "mean {} vs {expect}", res.mean_aoi);
        assert!(!res.diverged);
        assert!(rel(res.tx_utilization, s.rate * s.slot) < 1e-9);
    }

    #[test]
    fn aoi_never_below_unqueued_bound() {
        let s = base();
        for rate in [50.0, 100.0, 250.0, 500.0, 800.0, 1000.0] {
            let sc = AoiScenario { rate, ..s.clone() };
            let res = simulate(&sc).unwrap();
            let bound = pipeline_delay(&sc) + 0.5 / rate;
            assert!(
                res.mean_aoi >= bound * (1.0 - 1e-9),
                "rate {rate}: {} < {bound}",
                res.mean_aoi
            );
        }
    }

    #[test]
    fn overload_diverges_and_saturates_power() {
        let mut s = base();
        s.intensity = 10.0; // keep the CPU below capacity; TX is the bottleneck
        s.rate = 1500.0; // capacity is 1/T = 1000/s
        s.horizon = 30.0;
        s.warmup = 3.0;
        let res = simulate(&s).unwrap();
        assert!(res.diverged);
        assert!(res.tx_utilization.max(res.cpu_utilization) > 0.99);

        // Saturation: TX busy every slot, CPU serving 1000/s.
        let p_rad = parametric_tx_power(&s.wireless, s.size / s.slot).unwrap();
        let p_tx = p_rad / s.wireless.pa_efficiency
            + s.wireless.circuit_power_tx
            + s.wireless.circuit_power_rx;
        let f = operating_frequency(&s);
        let n_ops = s.size * s.intensity;
        let t_c = n_ops / (s.compute.ops_per_cycle * f);
        let p_cpu = s.compute.p_static + s.compute.kappa * f.powi(3);
        let capacity = 1.0 / s.slot;
        let expect = p_tx + capacity * t_c * p_cpu;
        assert!(rel(res.mean_power, expect) < 0.01, "power {} vs {expect}", res.mean_power);
    }

    #[test]
    fn conservation_of_requests() {
        let mut s = base();
        s.rate = 950.0;
        s.intensity = 10.0;
        let (_, trace) = simulate_with_trace(&s).unwrap();
        let generated = trace.len();
        let completed = trace.iter().filter(|t| t.completion <= s.horizon).count();
        let in_tx = trace.iter().filter(|t| t.tx_end > s.horizon).count();
        let in_cpu = trace
            .iter()
            .filter(|t| t.tx_end <= s.horizon && t.completion > s.horizon)
            .count();
        assert_eq!(generated, completed + in_tx + in_cpu);
    }

    #[test]
    fn energy_accounting_closes() {
        let mut s = base();
        s.rate = 333.0; // misaligned with the slot grid to exercise clipping
        s.intensity = 10.0;
        s.wired = vec![WiredHopModel {
            eps: 3e-10,
            capacity: 1e9,
            prop_delay: 1e-4,
            proc_delay: 0.0,
        }];
        s.idle_power = 0.25;
        let (res, trace) = simulate_with_trace(&s).unwrap();
        let p_rad = parametric_tx_power(&s.wireless, s.size / s.slot).unwrap();
        let p_tx = p_rad / s.wireless.pa_efficiency
            + s.wireless.circuit_power_tx
            + s.wireless.circuit_power_rx;
        let f = operating_frequency(&s);
        let (t_c, e_c) = compute_cost(&s.compute, s.size * s.intensity, f).unwrap();
        let p_cpu = e_c / t_c;
        let (e_wired, _) = wired_path_cost(&s.wired, s.size);
        let clip = |a: f64, b: f64| (b.min(s.horizon) - a.max(s.warmup)).max(0.0);
        let mut energy = s.idle_power * (s.horizon - s.warmup);
        for t in &trace {
            energy += p_tx * clip(t.tx_start, t.tx_end);
            energy += p_cpu * clip(t.compute_start, t.compute_end);
            if t.tx_end >= s.warmup && t.tx_end < s.horizon {
                energy += e_wired;
            }
        }
        let reported = res.mean_power * (s.horizon - s.warmup);
        assert!(rel(reported, energy) < 1e-9, "{reported} vs {energy}");
    }

    #[test]
    fn fifo_order_preserved() {
        let mut s = base();
        s.rate = 1200.0; // overload: queueing everywhere
        s.horizon = 2.0;
        s.warmup = 0.0;
        let (_, trace) = simulate_with_trace(&s).unwrap();
        for w in trace.windows(2) {
            assert!(w[0].gen_time <= w[1].gen_time);
            assert!(w[0].tx_start < w[1].tx_start);
            assert!(w[0].completion <= w[1].completion);
            assert!(w[0].tx_end <= w[0].compute_start);
            assert!(w[0].compute_start + 0.0 <= w[0].compute_end);
        }
    }

    #[test]
    fn halving_the_slot_matches_its_own_analytic_mean() {
        let coarse = AoiScenario { intensity: 10.0, ..base() };
        let fine = AoiScenario {
            slot: coarse.slot / 2.0,
            size: coarse.size / 2.0,
            ..coarse.clone()
        };
        for s in [&coarse, &fine] {
            let res = simulate(s).unwrap();
            let expect = pipeline_delay(s) + 0.5 / s.rate;
            assert!(rel(res.mean_aoi, expect) < 1e-9, "mean {} vs {expect}", res.mean_aoi);
        }
        // The analytic delta is exactly the pipeline-delay difference.
        let a = simulate(&coarse).unwrap().mean_aoi;
        let b = simulate(&fine).unwrap().mean_aoi;
        let expect_delta = pipeline_delay(&coarse) - pipeline_delay(&fine);
        assert!(rel(a - b, expect_delta) < 1e-6, "delta {} vs {expect_delta}", a - b);
    }

    #[test]
    fn sweep_is_v_shaped_and_power_plateaus() {
        let mut s = base();
        s.intensity = 10.0;
        // Keep the stability floor below the energy-optimal clock across
        // the whole grid, so the beyond-capacity power is exactly flat.
        s.compute.ops_per_cycle = 4.0;
        s.horizon = 20.0;
        s.warmup = 2.0;
        let rates = [100.0, 200.0, 400.0, 625.0, 800.0, 1000.0, 1100.0, 1300.0];
        let sweep = sweep_rate(&s, &rates).unwrap();
        let aois: Vec<f64> = sweep.iter().map(|(_, r)| r.mean_aoi).collect();
        let min_idx = aois
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap();
        assert!(min_idx > 0 && min_idx < aois.len() - 1, "argmin {min_idx} not interior");
        for i in 0..min_idx {
            assert!(aois[i] > aois[i + 1], "not decreasing before the minimum");
        }
        for i in min_idx..aois.len() - 1 {
            assert!(aois[i] < aois[i + 1], "not increasing after the minimum");
        }
        let powers: Vec<f64> = sweep.iter().map(|(_, r)| r.mean_power).collect();
        for w in powers.windows(2) {
            assert!(w[1] >= w[0] * (1.0 - 1e-9), "power not non-decreasing");
        }
        // At and beyond capacity the power settles.
        let last = *powers.last().unwrap();
        for (rate, r) in &sweep {
            if *rate >= 1000.0 {
                assert!(rel(r.mean_power, last) < 0.01);
            }
        }
    }

    #[test]
    fn optimal_rate_selection() {
        let mut s = base();
        s.intensity = 10.0;
        s.horizon = 20.0;
        s.warmup = 2.0;
        let rates = [100.0, 200.0, 400.0, 625.0, 800.0, 1000.0, 1100.0];
        // Unreachable AoI target.
        assert_eq!(optimal_rate_for_aoi(&s, 1e-6, &rates).unwrap(), None);
        // A loose target admits every rate; power dictates the smallest.
        let (r, _) = optimal_rate_for_aoi(&s, 1e3, &rates).unwrap().unwrap();
        assert_eq!(r, 100.0);
        // A tight target keeps only the fast end of the decreasing branch;
        // verify against an exhaustive re-derivation from the sweep.
        let target = 3e-3;
        let sweep = sweep_rate(&s, &rates).unwrap();
        let expect = sweep
            .iter()
            .filter(|(_, res)| res.mean_aoi <= target)
            .min_by(|a, b| {
                a.1.mean_power
                    .total_cmp(&b.1.mean_power)
                    .then(a.0.total_cmp(&b.0))
            })
            .map(|(r, _)| *r)
            .expect("target chosen to be reachable");
        let (r, res) = optimal_rate_for_aoi(&s, target, &rates).unwrap().unwrap();
        assert_eq!(r, expect);
        assert!(res.mean_aoi <= target);
    }

    #[test]
    fn undeliverable_payload_rejected() {
        let mut s = base();
        s.size = 1e9; // needs 1e12 b/s in a 1 ms slot
        assert!(matches!(simulate(&s), Err(AoiError::Undeliverable { .. })));
    }

    #[test]
    fn invalid_scenario_rejected() {
        let mut s = base();
        s.warmup = s.horizon;
        assert!(matches!(simulate(&s), Err(AoiError::Invalid(_))));
        let mut s = base();
        s.rate = 0.0;
        assert!(simulate(&s).is_err());
    }
}
