use serde::{Deserialize, Serialize};

use super::{DiagnosticsError, DiagnosticsRecord};
use crate::solver::MhdParams;

/// Run metadata stored with a series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesMeta {
    pub params: MhdParams,
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,
    pub dt: f64,
    pub p_ladder: Vec<f64>,
}

/// Why a run stopped early.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureMarker {
    pub t: f64,
    pub blow_up: bool,
    pub message: String,
}

/// Records in strictly increasing time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsSeries {
    pub meta: SeriesMeta,
    records: Vec<DiagnosticsRecord>,
    pub failure: Option<FailureMarker>,
}

impl DiagnosticsSeries {
    pub fn new(meta: SeriesMeta) -> Self {
        Self {
            meta,
            records: Vec::new(),
            failure: None,
        }
    }

    pub fn push(&mut self, record: DiagnosticsRecord) -> Result<(), DiagnosticsError> {
        if record.grad_u_lp.len() != self.meta.p_ladder.len() {
            return Err(DiagnosticsError::LadderMismatch);
        }
        if let Some(last) = self.records.last() {
            if !(record.t > last.t) {
                return Err(DiagnosticsError::TimeOrder {
                    prev: last.t,
                    t: record.t,
                });
            }
        }
        self.records.push(record);
        Ok(())
    }

    pub fn records(&self) -> &[DiagnosticsRecord] {
        &self.records
    }

    pub fn first(&self) -> Option<&DiagnosticsRecord> {
        self.records.first()
    }

    pub fn last(&self) -> Option<&DiagnosticsRecord> {
        self.records.last()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn is_blow_up(&self) -> bool {
        self.failure.as_ref().is_some_and(|f| f.blow_up)
    }
}
