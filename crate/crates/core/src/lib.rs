//! Energy and latency modeling for tiered fog-to-cloud networks.
//!
//! The crate provides pure cost models for wireless links, wired hops, and
//! DVFS-scaled CPUs; a tiered network graph with least-cost routing; request
//! generators; a deadline-constrained task-allocation optimizer with several
//! offloading strategies; and a slotted Age-of-Information simulator for
//! periodic sources.
//!
//! All quantities are strict SI: joules, seconds, hertz, watts, bits.
//! Randomness comes exclusively from named, seed-derived streams (see
//! [`seed`]), so every result is reproducible bit for bit.

pub mod allocator;
pub mod aoi;
pub mod catalog;
pub mod models;
pub mod seed;
pub mod topology;
pub mod units;
pub mod workload;

pub use allocator::{allocate, optimize_full, run_scenario, AccountingScope, Allocation, Strategy};
pub use aoi::{simulate, sweep_rate, AoiResult, AoiScenario};
pub use models::{ComputeModel, WiredHopModel, WirelessCatalogModel, WirelessParametricModel};
pub use topology::{LinkModel, LinkSpec, NodeSpec, Path, Tier, Topology};
pub use workload::{Request, RequestDistribution};
