use std::fs;
use std::io::BufWriter;
use std::path::PathBuf;

use super::{HarnessError, RunConfig};
use crate::diagnostics::{summarize, write_csv, write_summary, Monitor, RunSummary};
use crate::solver::{run, save_checkpoint};

/// Tolerance on the explicit Grönwall monitor for magnetic-only runs.
pub const PROP33_TOLERANCE: f64 = 1e-3;

pub const CSV_FILE: &str = "diagnostics.csv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const CHECKPOINT_FILE: &str = "checkpoint.mhd2";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success,
    Config,
    Io,
    BlowUp,
    Monitor,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        match self {
            ExitStatus::Success => 0,
            ExitStatus::Config => 1,
            ExitStatus::Io => 2,
            ExitStatus::BlowUp => 3,
            ExitStatus::Monitor => 4,
        }
    }
}

#[derive(Debug)]
pub struct MainRunReport {
    pub status: ExitStatus,
    pub summary: Option<RunSummary>,
    pub message: Option<String>,
    pub files: Vec<PathBuf>,
}

impl MainRunReport {
    fn failed(status: ExitStatus, message: String) -> Self {
        Self {
            status,
            summary: None,
            message: Some(message),
            files: Vec::new(),
        }
    }
}

/// Run, then write the CSV series, the JSON summary and, if configured, a
/// checkpoint of the final state into `config.output_dir`.
///
/// The status is nonzero on configuration problems, I/O failure, blow-up,
/// or when a magnetic-only run exceeds the Grönwall monitor tolerance.
pub fn main_run(config: &RunConfig) -> MainRunReport {
    if let Err(e) = config.validate() {
        return MainRunReport::failed(ExitStatus::Config, e.to_string());
    }
    let dir = &config.output_dir;
    if let Err(e) = fs::create_dir_all(dir) {
        return MainRunReport::failed(ExitStatus::Io, format!("{}: {e}", dir.display()));
    }
    let outcome = match run(config) {
        Ok(o) => o,
        Err(e) => return MainRunReport::failed(ExitStatus::Config, e.to_string()),
    };
    let summary = summarize(&outcome.series);
    let mut files = Vec::new();
    let write_all = |files: &mut Vec<PathBuf>| -> Result<(), HarnessError> {
        let csv = dir.join(CSV_FILE);
        write_csv(&outcome.series, BufWriter::new(fs::File::create(&csv)?))?;
        files.push(csv);
        let json = dir.join(SUMMARY_FILE);
        write_summary(&summary, BufWriter::new(fs::File::create(&json)?))?;
        files.push(json);
        if config.checkpoint {
            let ck = dir.join(CHECKPOINT_FILE);
            save_checkpoint(&ck, &outcome.state)?;
            files.push(ck);
        }
        Ok(())
    };
    if let Err(e) = write_all(&mut files) {
        return MainRunReport {
            status: ExitStatus::Io,
            summary: Some(summary),
            message: Some(e.to_string()),
            files,
        };
    }
    let (status, message) = if let Some(f) = &outcome.series.failure {
        let status = if f.blow_up {
            ExitStatus::BlowUp
        } else {
            ExitStatus::Config
        };
        (status, Some(f.message.clone()))
    } else if config.params.magnetic_only_eta().is_some() {
        match summary
            .monitors
            .get(Monitor::Prop33.name())
            .and_then(|m| m.value)
        {
            Some(v) if v <= 1.0 + PROP33_TOLERANCE => (ExitStatus::Success, None),
            Some(v) => (
                ExitStatus::Monitor,
                Some(format!(
                    "prop33 monitor {v} exceeds 1 + {PROP33_TOLERANCE:e}"
                )),
            ),
            // zero data: the ratio is undefined and nothing is asserted
            None => (ExitStatus::Success, None),
        }
    } else {
        (ExitStatus::Success, None)
    };
    MainRunReport {
        status,
        summary: Some(summary),
        message,
        files,
    }
}
