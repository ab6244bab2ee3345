//! Experiment harness around [`fog2c_core`]: unit-tagged JSON configs,
//! deterministic CSV/JSON artifacts, and optional SVG charts.

pub mod config;
pub mod plot;
pub mod quantity;
pub mod run;

pub use config::{digest, emit_config, parse_config, Config, Issue, Scenario};
