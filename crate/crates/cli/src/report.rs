//! JSON report types. Field names follow the core types they wrap.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use hqis_core::access_audit::{HierarchyReport, PersistencyReport};
use hqis_core::protocol::verify::{OracleReport, SuiteReport};
use hqis_core::protocol::{
    Agent, BellOutcome, Correction, HelperBasis, ProtocolTranscript, SecretSpec,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub receiver: Agent,
    /// `None` when every shot draws its own Haar-random secret.
    pub secret: Option<SecretSpec>,
    pub bases: BTreeMap<Agent, HelperBasis>,
    pub dropped: Vec<Agent>,
    pub seed: u64,
    pub shots: u64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub shots: u64,
    pub min_fidelity: f64,
    pub mean_fidelity: f64,
    /// Shots whose fidelity missed 1 by more than the tolerance.
    pub failures: u64,
    pub outcome_histogram: BTreeMap<BellOutcome, u64>,
    /// Pearson statistic of the Bell outcomes against uniform.
    pub chi_square: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: RunConfig,
    pub transcripts: Vec<ProtocolTranscript>,
    pub summary: RunSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub tolerance: f64,
    pub n_secrets: usize,
    pub seed: u64,
    pub suites: Vec<SuiteReport>,
    pub oracles: Vec<OracleReport>,
    pub persistency: PersistencyReport,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub bell: BellOutcome,
    /// Helper outcomes the row is keyed by, e.g. `"01"`, `"diff"` or `"+"`.
    pub key: String,
    pub correction: Correction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableReport {
    pub table: String,
    pub rows: Vec<TableRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    #[serde(flatten)]
    pub hierarchy: HierarchyReport,
    pub violations: Vec<String>,
}
