//! End-to-end reproduction of the two `H_3(1)` bounds.
//!
//! Every algebraic step is recomputed in exact arithmetic and compared with
//! the printed form; every inequality over `(x, y)` is certified by the
//! branch-and-bound engine. Mismatches become audit items, never silent
//! corrections.

mod audit;
mod chain;
mod explore;
mod theorem;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::optimize::DEFAULT_BUDGET;

pub use audit::{audit, audit_exact_identities, audit_exact_identities_with, audit_sign_conditions};
pub use chain::{triangle_majorant, ClassChain, Majorant, TermSpec};
pub use explore::{
    lemma_statistics, random_search, random_search_with, verify_lemmas, GridMargin, H2Tracking, LemmaStats,
    SampleRecord, SearchResult,
};
pub use theorem::{
    assemble_case2, case1_bound, case1_bound_with, case2_bound, case2_bound_with, case_profiles, reproduce_theorem,
    reproduce_theorem_with, Case2Report, CaseProfile, Comparison, DerivedReport, FinalBound, TheoremReport,
};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SAMPLES: usize = 100_000;

/// Marker in the detail of items that failed only for lack of budget.
pub const BUDGET_NOTE: &str = "budget exhausted";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AuditKind {
    ExactIdentity,
    SignCondition,
    Optimization,
    Discrepancy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AuditStatus {
    Pass,
    Fail,
    Info,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditItem {
    pub name: String,
    pub kind: AuditKind,
    pub status: AuditStatus,
    pub detail: String,
}

impl AuditItem {
    pub fn new(name: &str, kind: AuditKind, status: AuditStatus, detail: String) -> Self {
        Self {
            name: name.to_string(),
            kind,
            status,
            detail,
        }
    }

    pub fn check(name: &str, kind: AuditKind, ok: bool, detail: String) -> Self {
        let status = if ok { AuditStatus::Pass } else { AuditStatus::Fail };
        Self::new(name, kind, status, detail)
    }

    pub fn passed(&self) -> bool {
        self.status != AuditStatus::Fail
    }

    /// A failure caused by running out of branch-and-bound budget rather
    /// than by a refutation.
    pub fn inconclusive(&self) -> bool {
        self.status == AuditStatus::Fail && self.detail.contains(BUDGET_NOTE)
    }
}

impl fmt::Display for AuditItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match self.status {
            AuditStatus::Pass => "PASS",
            AuditStatus::Fail => "FAIL",
            AuditStatus::Info => "INFO",
        };
        write!(f, "[{status}] {}: {}", self.name, self.detail)
    }
}

/// Numerical settings shared by the pipeline stages.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineOptions {
    pub tol: f64,
    pub budget: usize,
    /// Branch-and-bound worker threads; 0 is deterministic single-threaded.
    pub threads: usize,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            budget: DEFAULT_BUDGET,
            threads: 0,
        }
    }
}

impl PipelineOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }

    pub(crate) fn bb(&self) -> crate::optimize::BbOptions<f64> {
        crate::optimize::BbOptions::new(self.tol, self.budget).with_threads(self.threads)
    }
}
