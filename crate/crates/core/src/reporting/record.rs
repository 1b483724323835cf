use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::experiments::{
    BoundCheckReport, FracMomentReport, IbpReport, KernelClass, KsReport, LaplaceReport, ScalingReport, SlopeReport,
    Verdict,
};

/// Version of this library, echoed into every record.
pub const LIBRARY_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Power-kernel classification with the truncated integrals behind it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub alpha: f64,
    /// Exponent `c` of the gauge `h(t) = t^c`.
    pub c: f64,
    /// `cα`; the integral `∫_0^1 t^{-cα} dt` diverges iff this is `>= 1`.
    pub integrand_exponent: f64,
    pub class: KernelClass,
}

/// Experiment-specific payload of a record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type", content = "report")]
pub enum Outcome {
    Laplace(LaplaceReport),
    Cdf(KsReport),
    FracMoment(FracMomentReport),
    Scaling(ScalingReport),
    MomentBound(BoundCheckReport),
    Blowup(SlopeReport),
    Ibp(IbpReport),
    Classify(ClassifyReport),
    /// The experiment stopped with an error; the record still exists.
    Error { message: String },
}

impl Outcome {
    pub fn verdict(&self) -> Verdict {
        match self {
            Outcome::Laplace(r) => r.verdict,
            Outcome::Cdf(r) => r.verdict,
            Outcome::FracMoment(r) => r.verdict,
            Outcome::Scaling(r) => r.verdict,
            Outcome::MomentBound(r) => r.verdict,
            Outcome::Blowup(r) => r.verdict,
            Outcome::Ibp(r) => r.verdict,
            Outcome::Classify(_) => Verdict::Pass,
            Outcome::Error { .. } => Verdict::Fail,
        }
    }
}

/// A named table of numbers, written as one CSV file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Series {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Writes the header and every row, values with 17 significant digits.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let ser = |e: csv::Error| Error::Serialize(e.to_string());
        w.write_record(&self.columns).map_err(ser)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| format!("{v:.16e}"))).map_err(ser)?;
        }
        w.flush().map_err(|e| Error::Serialize(e.to_string()))?;
        Ok(())
    }
}

/// Everything needed to re-run an experiment and every number it produced.
///
/// Wall-clock time is kept out of the serialized record so that two runs of
/// the same config give byte-identical JSON; [`write_record`] stores it in a
/// separate `timing.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub library_version: String,
    pub seed: u64,
    pub config: ExperimentConfig,
    pub verdict: Verdict,
    pub outcome: Outcome,
    pub series: Vec<Series>,
    #[serde(skip)]
    pub wall_clock_seconds: f64,
}

impl ResultRecord {
    pub fn to_json(&self) -> Result<String> {
        to_json(self)
    }
}

pub(crate) fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Serialize(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

pub(crate) fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

pub(crate) fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Writes `<dir>/<series>.csv` for every series in the record.
pub fn emit_plot_data(record: &ResultRecord, dir: &Path) -> Result<Vec<PathBuf>> {
    create_dir(dir)?;
    let mut written = Vec::with_capacity(record.series.len());
    for series in &record.series {
        let path = dir.join(format!("{}.csv", series.name));
        let mut buf = Vec::new();
        series.write_csv(&mut buf)?;
        write_file(&path, &buf)?;
        written.push(path);
    }
    Ok(written)
}

/// Writes `record.json`, `timing.json` and the CSV series into `dir`.
pub fn write_record(record: &ResultRecord, dir: &Path) -> Result<Vec<PathBuf>> {
    create_dir(dir)?;
    let json_path = dir.join("record.json");
    write_file(&json_path, record.to_json()?.as_bytes())?;
    let timing_path = dir.join("timing.json");
    let timing = serde_json::json!({ "wall_clock_seconds": record.wall_clock_seconds });
    write_file(&timing_path, to_json(&timing)?.as_bytes())?;
    let mut written = vec![json_path, timing_path];
    written.extend(emit_plot_data(record, dir)?);
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_header_and_full_precision() {
        let mut s = Series::new("scaling", &["t", "normalized_moment", "std_error"]);
        s.push(vec![0.25, 1.0 / 3.0, 0.01]);
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,normalized_moment,std_error"));
        let row: Vec<f64> = lines.next().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(row, vec![0.25, 1.0 / 3.0, 0.01]);
    }

    #[test]
    fn write_record_reports_unwritable_path() {
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("file");
        fs::write(&blocker, b"x").unwrap();
        let mut config = ExperimentConfig::new(super::super::ExperimentKind::CdfCheck);
        config.n_replicates = 10;
        let record = ResultRecord {
            library_version: LIBRARY_VERSION.into(),
            seed: 1,
            config,
            verdict: Verdict::Fail,
            outcome: Outcome::Error { message: "x".into() },
            series: vec![],
            wall_clock_seconds: 0.0,
        };
        let err = write_record(&record, &blocker.join("sub")).unwrap_err();
        assert!(err.to_string().contains("file"), "{err}");
    }
}
