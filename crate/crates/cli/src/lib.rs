//! Verification harness for `gramdist`: seeded instance generation and
//! randomized check campaigns.

pub mod campaign;
pub mod error;
pub mod generator;
pub mod instance;
pub mod oracle;
pub mod report;

pub use campaign::{
    combination_methods, replay, replay_trial, run_campaign, CampaignConfig, CampaignResult, CheckId, CheckSummary,
    FailureRecord,
};
pub use error::{HarnessError, Result};
pub use generator::{
    coordinate_conditioning, generate_system, trial_rng, Conditioning, FieldChoice, GeneratedInstance, GeneratorConfig,
    SizeRange,
};
pub use instance::{instance_to_json, load_instance, parse_instance, save_instance, Instance};
pub use report::{emit_report, fmt_num, DistanceReport, Format, HadamardReport, Render};
