//! Scenario files, the effect report and the glue used by the `qsat` CLI.

pub mod config;
pub mod report;

pub use config::{load_scenario, EffectFlags, EffectGroup, Platform, Scenario};
pub use report::{run_report, EffectEntry, EffectReport};
