use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{
    bound_monitor, energy_budget_residual, regularity_profile, DiagnosticsError, DiagnosticsRecord,
    DiagnosticsSeries, FailureMarker, Monitor, SeriesMeta,
};

fn ladder_label(p: f64) -> String {
    if p.is_infinite() {
        "inf".to_string()
    } else {
        format!("{p}")
    }
}

/// Column names in CSV order.
pub fn csv_header(meta: &SeriesMeta) -> Vec<String> {
    let mut cols: Vec<String> = DiagnosticsRecord::default()
        .columns()
        .iter()
        .map(|(n, _)| n.to_string())
        .collect();
    for &p in &meta.p_ladder {
        cols.push(format!("grad_u_L{}", ladder_label(p)));
    }
    for &p in &meta.p_ladder {
        cols.push(format!("accum_grad_u_L{}", ladder_label(p)));
    }
    cols
}

/// One header line, then one row per record; floats in shortest
/// round-trip exponent form.
pub fn write_csv(series: &DiagnosticsSeries, mut out: impl Write) -> Result<(), DiagnosticsError> {
    let mut text = csv_header(&series.meta).join(",");
    text.push('\n');
    for r in series.records() {
        let mut row: Vec<String> = r.columns().iter().map(|(_, v)| format!("{v:e}")).collect();
        row.extend(r.grad_u_lp.iter().map(|v| format!("{v:e}")));
        row.extend(r.accum.grad_u_lp.iter().map(|v| format!("{v:e}")));
        text.push_str(&row.join(","));
        text.push('\n');
    }
    out.write_all(text.as_bytes())?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonitorValue {
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unavailable: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularitySummary {
    /// `(p, p^(-1/2) ∫‖∇u‖_p dt)` over the stored ladder.
    pub profile: Vec<(f64, f64)>,
    pub criterion: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub meta: SeriesMeta,
    pub records: usize,
    pub t_final: f64,
    pub failure: Option<FailureMarker>,
    pub energy_budget_residual: f64,
    pub monitors: BTreeMap<String, MonitorValue>,
    pub regularity: Option<RegularitySummary>,
    pub final_record: Option<DiagnosticsRecord>,
}

pub fn summarize(series: &DiagnosticsSeries) -> RunSummary {
    let monitors = Monitor::ALL
        .into_iter()
        .map(|m| {
            let v = match bound_monitor(series, m) {
                Ok(v) => MonitorValue {
                    value: Some(v),
                    unavailable: None,
                },
                Err(e) => MonitorValue {
                    value: None,
                    unavailable: Some(e.to_string()),
                },
            };
            (m.name().to_string(), v)
        })
        .collect();
    let regularity = regularity_profile(series, &series.meta.p_ladder)
        .ok()
        .map(|profile| RegularitySummary {
            criterion: profile.iter().map(|(_, v)| *v).fold(0.0, f64::max),
            profile,
        });
    RunSummary {
        meta: series.meta.clone(),
        records: series.len(),
        t_final: series.last().map_or(0.0, |r| r.t),
        failure: series.failure.clone(),
        energy_budget_residual: energy_budget_residual(series, &series.meta.params),
        monitors,
        regularity,
        final_record: series.last().cloned(),
    }
}

pub fn write_summary(summary: &RunSummary, out: impl Write) -> Result<(), DiagnosticsError> {
    serde_json::to_writer_pretty(out, summary)?;
    Ok(())
}
