//! Built-in reference models: measured wireless links, wired equipment, and
//! machines, with the publications the numbers come from.
//!
//! Latency parameters condense measured ranges into single defaults; the
//! `source` strings keep the original ranges and conditions. Scenario
//! configurations may override any field.

use crate::models::{ComputerSpec, WiredHopModel, WirelessCatalogModel};

#[derive(Debug, Clone, Copy)]
pub struct WirelessEntry {
    pub name: &'static str,
    pub model: WirelessCatalogModel,
    pub source: &'static str,
}

#[derive(Debug, Clone, Copy)]
pub struct WiredEntry {
    pub name: &'static str,
    pub model: WiredHopModel,
    /// Active power of the whole device (W); per-bit eps is incremental over idle.
    pub active_power: f64,
    pub source: &'static str,
}

#[derive(Debug, Clone, Copy)]
pub struct ComputerEntry {
    pub spec: ComputerSpec,
    pub cores: u64,
    /// Published efficiency range (pJ/b) over the reference intensity range.
    pub eff_range_pj_per_b: (f64, f64),
    pub source: &'static str,
}

/// Aggregate arithmetic intensity range (Flop per byte) used to derive the
/// per-bit efficiency ranges of [`COMPUTERS`].
pub const INTENSITY_RANGE_FLOP_PER_BYTE: (f64, f64) = (71.0, 220.0);

/// Path loss (dB) assumed by the wireless transceiver measurements below.
pub const REFERENCE_PATH_LOSS_DB: f64 = 83.0;

/// Temperature (K) whose thermal noise floor reproduces the 0.55 pJ/b
/// infinite-bandwidth bound at the reference path loss.
pub const REFERENCE_TEMPERATURE_K: f64 = 290.0;

pub const WIRELESS: &[WirelessEntry] = &[
    WirelessEntry {
        name: "wifi",
        model: WirelessCatalogModel {
            eps_tx: 4.5e-8,
            eps_rx: 3.9e-8,
            rate: 54e6,
            base_latency: 1e-3,
            mac_mean_delay: 0.0,
        },
        source: "802.11 transceiver at 83 dB path loss, 20 MHz (Kryszkiewicz et al., \
                 Sensors 20(17):4704, 2020); MAC delay quasi-exponential, mean 1-1000 ms, \
                 configure via mac_mean_delay",
    },
    WirelessEntry {
        name: "lte_ue_dl",
        model: WirelessCatalogModel {
            eps_tx: 0.0,
            eps_rx: 1.7e-6,
            rate: 75e6,
            base_latency: 1.3e-3,
            mac_mean_delay: 0.0,
        },
        source: "LTE smartphone downlink, 20 MHz (Xu et al., SIGCOMM 2020); \
                 receive side only; mean RTT 2.6 ms stored as 1.3 ms one-way",
    },
    WirelessEntry {
        name: "nr5g_ue_dl",
        model: WirelessCatalogModel {
            eps_tx: 0.0,
            eps_rx: 4e-7,
            rate: 4e8,
            base_latency: 1.1e-3,
            mac_mean_delay: 0.0,
        },
        source: "5G smartphone downlink, 100 MHz (Xu et al., SIGCOMM 2020); \
                 receive side only; mean RTT 2.2 ms stored as 1.1 ms one-way",
    },
    WirelessEntry {
        name: "lte_bs_dl",
        model: WirelessCatalogModel {
            eps_tx: 4.5e-5,
            eps_rx: 0.0,
            rate: 36e6,
            base_latency: 0.0,
            mac_mean_delay: 0.0,
        },
        source: "LTE base station downlink, 10 MHz (Auer et al., IEEE Wireless \
                 Communications 18(5), 2011); transmit side only",
    },
];

pub const WIRED: &[WiredEntry] = &[
    WiredEntry {
        name: "epon_1g",
        model: WiredHopModel { eps: 3e-10, capacity: 1e9, prop_delay: 0.0, proc_delay: 5e-9 },
        active_power: 3.3,
        source: "1G EPON gateway (EU Code of Conduct on broadband equipment v8, 2021); \
                 latency 0.5e-5 to 0.5 ms, low end stored",
    },
    WiredEntry {
        name: "gpon_10g",
        model: WiredHopModel { eps: 2e-10, capacity: 1e10, prop_delay: 0.0, proc_delay: 5e-9 },
        active_power: 5.5,
        source: "10/10G GPON gateway (EU Code of Conduct on broadband equipment v8, 2021); \
                 latency 0.5e-5 to 0.5 ms, low end stored",
    },
    WiredEntry {
        name: "core_router",
        model: WiredHopModel { eps: 1.03e-9, capacity: 640e9, prop_delay: 0.0, proc_delay: 1e-5 },
        active_power: 6572.0,
        source: "Juniper T1600 core router, incremental energy over idle (Van Heddeghem \
                 et al., Photonic Network Communications 24(2), 2012); latency 0.01-27 ms, \
                 low end stored",
    },
];

pub const COMPUTERS: &[ComputerEntry] = &[
    ComputerEntry {
        spec: ComputerSpec { name: "henri", power: 31e3, perf: 2.038e15 },
        cores: 5920,
        eff_range_pj_per_b: (136.0, 422.0),
        source: "Henri supercomputer, #1 Green500 (Green500 list, November 2022)",
    },
    ComputerEntry {
        spec: ComputerSpec { name: "frontier", power: 2.11e7, perf: 1.102e18 },
        cores: 873_011,
        eff_range_pj_per_b: (170.0, 527.0),
        source: "Frontier supercomputer, #1 Top500 (Green500 list, November 2022)",
    },
    ComputerEntry {
        spec: ComputerSpec { name: "expertbook", power: 33.47, perf: 1.48e11 },
        cores: 4,
        eff_range_pj_per_b: (2000.0, 6199.0),
        source: "ASUS Expertbook B9400CEA laptop, Core i7-1165G7 (Prieto et al., \
                 Sustainability 14(19):12829, 2022)",
    },
    ComputerEntry {
        spec: ComputerSpec { name: "cumulus", power: 5.3e5, perf: 2.27138e15 },
        cores: 50_176,
        eff_range_pj_per_b: (2069.0, 6410.0),
        source: "Cumulus supercomputer, #106 Green500 (Green500 list, November 2022)",
    },
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::compute_energy_per_bit;

    #[test]
    fn all_entries_satisfy_invariants() {
        for e in WIRELESS {
            assert!(e.model.violations().is_empty(), "{}: {:?}", e.name, e.model.violations());
        }
        for e in WIRED {
            assert!(e.model.violations().is_empty(), "{}: {:?}", e.name, e.model.violations());
            assert!(e.active_power > 0.0);
        }
        for e in COMPUTERS {
            assert!(e.spec.violations().is_empty(), "{}", e.spec.name);
        }
    }

    #[test]
    fn machine_efficiency_ranges_reproduced() {
        // Both published endpoints of every machine match the power/perf
        // derivation at the reference intensity range within 2%.
        let (lo_i, hi_i) = INTENSITY_RANGE_FLOP_PER_BYTE;
        for e in COMPUTERS {
            let lo = compute_energy_per_bit(&e.spec, lo_i) * 1e12;
            let hi = compute_energy_per_bit(&e.spec, hi_i) * 1e12;
            let (want_lo, want_hi) = e.eff_range_pj_per_b;
            assert!(
                (lo - want_lo).abs() / want_lo < 0.02,
                "{} low endpoint: derived {lo} pJ/b, published {want_lo}",
                e.spec.name
            );
            assert!(
                (hi - want_hi).abs() / want_hi < 0.02,
                "{} high endpoint: derived {hi} pJ/b, published {want_hi}",
                e.spec.name
            );
        }
    }
}
