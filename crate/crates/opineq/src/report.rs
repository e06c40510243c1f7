//! Versioned report envelope shared by every subcommand.

use opineq_core::engine::{HypothesisPolicy, IsometryMode, SuiteConfig};
use opineq_core::ToleranceConfig;
use serde_json::{json, Map, Value};

use crate::json::{ranges_to_json, tolerance_to_json};

pub const SCHEMA: u64 = 1;
pub const TOOL: &str = "opineq";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const SEED_MIXING: &str = "splitmix64 finalizer over seed, family id and trial index";

/// Standing interpretation notes, echoed in every report.
pub const BANNER: [&str; 2] =
    ["KADISON checks Φ(A)² ≤ Φ(A²).", "kappa(h, p) is K(1, h, p), so K(m, M, p) = kappa(M/m, p)."];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

pub fn policy_name(p: HypothesisPolicy) -> &'static str {
    match p {
        HypothesisPolicy::Enforce => "enforce",
        HypothesisPolicy::Relax => "relax",
    }
}

pub fn mode_name(m: IsometryMode) -> &'static str {
    match m {
        IsometryMode::Constructive => "constructive",
        IsometryMode::Dominance => "dominance",
    }
}

pub fn suite_config_to_json(c: &SuiteConfig) -> Value {
    json!({
        "families": c.families.iter().map(|f| f.name()).collect::<Vec<_>>(),
        "dims": c.dims,
        "trials": c.trials,
        "mode": mode_name(c.mode),
        "policy": policy_name(c.policy),
        "ranges": ranges_to_json(&c.ranges),
    })
}

/// `{schema, tool, version, command, seed, tolerance, seed_mixing, notes, config, result}`.
pub fn envelope(command: &str, seed: u64, tol: &ToleranceConfig, config: Value, result: Value) -> Value {
    let mut obj = Map::new();
    obj.insert("schema".into(), SCHEMA.into());
    obj.insert("tool".into(), TOOL.into());
    obj.insert("version".into(), VERSION.into());
    obj.insert("command".into(), command.into());
    obj.insert("seed".into(), seed.into());
    obj.insert("tolerance".into(), tolerance_to_json(tol));
    obj.insert("seed_mixing".into(), SEED_MIXING.into());
    obj.insert("notes".into(), BANNER.iter().copied().collect());
    obj.insert("config".into(), config);
    obj.insert("result".into(), result);
    Value::Object(obj)
}

pub fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => crate::json::to_string(v),
        Format::Text => crate::json::to_text(v),
    }
}
