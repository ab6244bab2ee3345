//! Shared fixtures for the benchmark suite: small but structurally complete
//! inputs for each optimizer and for the age simulator.

use fog2c_core::models::{
    ComputeModel, WiredHopModel, WirelessCatalogModel, WirelessParametricModel,
};
use fog2c_core::topology::{LinkModel, LinkSpec, NodeSpec, Tier, Topology};
use fog2c_core::workload::{sample_requests, Dist, Request, RequestDistribution, SourceSpec};
use fog2c_core::AoiScenario;

pub fn reference_cpu() -> ComputeModel {
    ComputeModel {
        f_min: 1e6,
        f_max: 3e9,
        ops_per_cycle: 1.0,
        p_static: 10.0,
        kappa: 1e-27,
        alpha: 3.0,
    }
}

fn node(id: &str, tier: Tier, compute: Option<ComputeModel>) -> NodeSpec {
    NodeSpec { id: id.to_string(), tier, compute }
}

fn wired(from: &str, to: &str, eps: f64, capacity: f64, prop_delay: f64) -> [LinkSpec; 2] {
    let hop = LinkModel::Wired(WiredHopModel { eps, capacity, prop_delay, proc_delay: 0.0 });
    [
        LinkSpec { from: from.to_string(), to: to.to_string(), model: hop },
        LinkSpec { from: to.to_string(), to: from.to_string(), model: hop },
    ]
}

/// Two wired fog nodes, the request arriving at the expensive one: the
/// placement decision dominates, no transmit-rate search is involved.
pub fn two_fog() -> Topology {
    let cpu1 = reference_cpu();
    let cpu2 = ComputeModel { p_static: 1.0, ..cpu1 };
    let wifi = LinkModel::WirelessCatalog(WirelessCatalogModel {
        eps_tx: 4.5e-8,
        eps_rx: 3.9e-8,
        rate: 54e6,
        base_latency: 1e-3,
        mac_mean_delay: 0.0,
    });
    let mut links = wired("fog1", "fog2", 1.03e-9, 1e9, 1e-3).to_vec();
    links.extend(wired("ap0", "fog1", 0.0, 1e12, 0.0));
    links.push(LinkSpec { from: "dev0".into(), to: "ap0".into(), model: wifi });
    Topology::new(
        vec![
            node("fog1", Tier::Fog, Some(cpu1)),
            node("fog2", Tier::Fog, Some(cpu2)),
            node("dev0", Tier::Device, None),
            node("ap0", Tier::AccessPoint, None),
        ],
        links,
    )
    .expect("fixture is valid")
}

pub fn wired_ingress_request() -> Request {
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

fn access_link(path_loss_db: f64) -> WirelessParametricModel {
    WirelessParametricModel {
        bandwidth: 2e7,
        noise_density: 4e-21,
        path_loss_db,
        pa_efficiency: 0.35,
        circuit_power_tx: 0.3,
        circuit_power_rx: 0.1,
        rate_max: 2e8,
    }
}

/// One device that can reach two access points, each fronting a fog node,
/// with a bigger machine one hop deeper: the optimizer has to search the
/// transmit rate on every arrival option and compare five placements.
pub fn edge_campus() -> Topology {
    let device_cpu = ComputeModel {
        f_min: 1e6,
        f_max: 2e9,
        ops_per_cycle: 2.0,
        p_static: 2.0,
        kappa: 2e-27,
        alpha: 3.0,
    };
    let fog_cpu = ComputeModel {
        f_min: 1e6,
        f_max: 2.5e9,
        ops_per_cycle: 6.0,
        p_static: 8.0,
        kappa: 2e-27,
        alpha: 3.0,
    };
    let big_cpu = ComputeModel {
        f_min: 1e6,
        f_max: 3.5e9,
        ops_per_cycle: 16.0,
        p_static: 60.0,
        kappa: 1e-27,
        alpha: 3.0,
    };
    let mut links = Vec::new();
    for (ap, loss) in [("ap1", 83.0), ("ap2", 89.0)] {
        links.push(LinkSpec {
            from: "dev".into(),
            to: ap.into(),
            model: LinkModel::WirelessParametric(access_link(loss)),
        });
    }
    links.extend(wired("ap1", "fog_a", 3e-10, 1e10, 1e-4));
    links.extend(wired("ap2", "fog_b", 3e-10, 1e10, 1e-4));
    links.extend(wired("fog_a", "fog_big", 1.03e-9, 1e10, 1e-3));
    links.extend(wired("fog_b", "fog_big", 1.03e-9, 1e10, 1e-3));
    Topology::new(
        vec![
            node("dev", Tier::Device, Some(device_cpu)),
            node("ap1", Tier::AccessPoint, None),
            node("ap2", Tier::AccessPoint, None),
            node("fog_a", Tier::Fog, Some(fog_cpu)),
            node("fog_b", Tier::Fog, Some(fog_cpu)),
            node("fog_big", Tier::Fog, Some(big_cpu)),
        ],
        links,
    )
    .expect("fixture is valid")
}

pub fn device_request() -> Request {
    Request {
        id: 0,
        source: "dev".into(),
        assigned_ap: None,
        size: 4e6,
        intensity: 100.0,
        deadline: 0.5,
        gen_time: 0.0,
        result_size: 0.0,
    }
}

/// Batch of requests against [`edge_campus`], sizes spread over 2-6 Mb.
pub fn campus_workload(n: u64) -> Vec<Request> {
    let dist = RequestDistribution {
        size: Dist::Uniform { low: 2e6, high: 6e6 },
        intensity: Dist::Constant(100.0),
        deadline: Dist::Constant(0.5),
        result_size: Dist::Constant(0.0),
        sources: vec![SourceSpec { node: "dev".into(), weight: 1.0, arrival: None }],
    };
    sample_requests(&dist, n, 7).expect("fixture workload is valid")
}

/// Slotted sensing pipeline near its sweet spot: ~28k requests over the
/// 30 s horizon.
pub fn sensing_pipeline(rate: f64) -> AoiScenario {
    AoiScenario {
        rate,
        slot: 1e-3,
        size: 1e5,
        intensity: 10.0,
        wireless: access_link(85.0),
        wired: vec![WiredHopModel {
            eps: 3e-10,
            capacity: 1e9,
            prop_delay: 0.0,
            proc_delay: 5e-9,
        }],
        compute: ComputeModel {
            f_min: 1e8,
            f_max: 3e9,
            ops_per_cycle: 4.0,
            p_static: 10.0,
            kappa: 1e-27,
            alpha: 3.0,
        },
        horizon: 30.0,
        warmup: 3.0,
        idle_power: 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use fog2c_core::{optimize_full, simulate, AccountingScope};

    #[test]
    fn fixtures_are_usable() {
        let mut rng = fog2c_core::seed::stream(0, "bench");
        let a = optimize_full(
            &wired_ingress_request(),
            &two_fog(),
            AccountingScope::FOG_CLOUD,
            &mut rng,
        )
        .unwrap();
        assert!(a.outcome.is_some());
        let a =
            optimize_full(&device_request(), &edge_campus(), AccountingScope::ALL, &mut rng)
                .unwrap();
        assert!(a.outcome.is_some());
        assert_eq!(campus_workload(10).len(), 10);
        assert!(!simulate(&sensing_pipeline(500.0)).unwrap().diverged);
    }
}
