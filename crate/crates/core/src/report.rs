//! The JSON record every CLI command emits.

use std::collections::BTreeMap;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::galois_id::GaloisVerdict;
use crate::gate::GateCertificate;
use crate::inertia::{ScanSource, SpecializationCertificate};
use crate::intersective::{IntersectiveCandidate, SexticResolvent};
use crate::reproduce::Check;

pub const SCHEMA_VERSION: u32 = 1;

/// JSON Schema for [`RunReport`].
pub const SCHEMA: &str = include_str!("../schema/run_report.schema.json");

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inputs {
    pub preset: Option<String>,
    /// `f(t, x)` as parsed, in the input grammar.
    pub poly: Option<String>,
    /// Remaining arguments, stringified.
    pub args: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanMeta {
    pub source: ScanSource,
    pub requested: usize,
    pub examined: usize,
    pub warning: Option<String>,
}

/// Excluded from determinism comparisons.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timestamp {
    pub unix_seconds: u64,
    pub wall_time_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub command: String,
    pub inputs: Inputs,
    pub seed: u64,
    pub gate: Option<GateCertificate>,
    pub scan: Option<ScanMeta>,
    pub certificates: Vec<SpecializationCertificate>,
    pub galois: Option<GaloisVerdict>,
    pub groups: Option<serde_json::Value>,
    pub resolvent: Option<SexticResolvent>,
    pub intersective: Option<IntersectiveCandidate>,
    pub verdicts: Vec<Check>,
    pub passed: bool,
    pub timestamp: Timestamp,
}

impl RunReport {
    pub fn new(command: &str, inputs: Inputs, seed: u64) -> Self {
        RunReport {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            inputs,
            seed,
            gate: None,
            scan: None,
            certificates: Vec::new(),
            galois: None,
            groups: None,
            resolvent: None,
            intersective: None,
            verdicts: Vec::new(),
            passed: true,
            timestamp: Timestamp { unix_seconds: 0, wall_time_ms: 0 },
        }
    }

    /// Stamps the start time and elapsed milliseconds.
    pub fn stamp(&mut self, started: SystemTime) {
        let unix_seconds = started.duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        let wall_time_ms = started.elapsed().map_or(0, |d| d.as_millis() as u64);
        self.timestamp = Timestamp { unix_seconds, wall_time_ms };
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}
