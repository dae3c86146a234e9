use std::fs;
use std::path::Path;

use crate::control::PumpCommand;
use crate::time::{format_clock, SimTime};
use crate::{Error, Result};

/// One experiment-level property and whether the run satisfied it.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }

    pub fn line(&self) -> String {
        format!(
            "[{}] {}: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

/// One controller sample of the monitored plant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub time: SimTime,
    pub plant_id: usize,
    pub height_cm: f64,
    pub width_cm: f64,
    pub wilt_degree: f64,
    pub gradient_sign: i8,
    pub command: PumpCommand,
    pub liters_to_date: f64,
}

pub const TRACE_HEADER: [&str; 10] = [
    "minute",
    "day",
    "clock",
    "plant",
    "height_cm",
    "width_cm",
    "wilt_degree",
    "gradient_sign",
    "command",
    "liters_to_date",
];

impl TraceRow {
    pub fn record(&self) -> Vec<String> {
        vec![
            self.time.minutes().to_string(),
            self.time.day().to_string(),
            format_clock(self.time.clock()),
            self.plant_id.to_string(),
            format!("{:.4}", self.height_cm),
            format!("{:.4}", self.width_cm),
            format!("{:.6}", self.wilt_degree),
            self.gradient_sign.to_string(),
            self.command.label().to_string(),
            format!("{:.3}", self.liters_to_date),
        ]
    }
}

pub(crate) fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

pub(crate) fn write_csv<I>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_path(path)?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub(crate) fn checks_text(checks: &[Check]) -> String {
    checks.iter().map(|c| c.line() + "\n").collect()
}
