//! Per-trial records and their CSV form.
//!
//! The first row is `schema_version,<v>`, the second the column header.
//! Floats carry 17 significant digits, so a write/read cycle is exact;
//! `+∞` is written as `inf`.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use crate::error::{HarnessError, Result};

pub const SCHEMA_VERSION: &str = "1";

pub const CSV_HEADER: [&str; 14] = [
    "experiment",
    "profile",
    "n",
    "trial_index",
    "seed_used",
    "oeb_radius",
    "intrinsic_oracle_radius",
    "ambient_oracle_radius",
    "ratio_oeb",
    "ratio_ambient",
    "tau_u",
    "sigma_u_sq",
    "intrinsic_dim_lower",
    "intrinsic_dim_upper",
];

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub experiment: String,
    /// Spectral profile or input distribution tag.
    pub profile: String,
    pub n: usize,
    pub trial_index: usize,
    pub seed_used: u64,
    pub oeb_radius: f64,
    pub intrinsic_oracle_radius: f64,
    pub ambient_oracle_radius: f64,
    pub ratio_oeb: f64,
    pub ratio_ambient: f64,
    pub tau_u: f64,
    pub sigma_u_sq: f64,
    pub intrinsic_dim_lower: f64,
    pub intrinsic_dim_upper: f64,
}

fn format_float(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".to_string()
    } else {
        format!("{x:.16e}")
    }
}

impl TrialRecord {
    fn floats(&self) -> [f64; 9] {
        [
            self.oeb_radius,
            self.intrinsic_oracle_radius,
            self.ambient_oracle_radius,
            self.ratio_oeb,
            self.ratio_ambient,
            self.tau_u,
            self.sigma_u_sq,
            self.intrinsic_dim_lower,
            self.intrinsic_dim_upper,
        ]
    }

    pub fn to_row(&self) -> Vec<String> {
        let mut row = vec![
            self.experiment.clone(),
            self.profile.clone(),
            self.n.to_string(),
            self.trial_index.to_string(),
            self.seed_used.to_string(),
        ];
        row.extend(self.floats().iter().map(|&x| format_float(x)));
        row
    }

    pub fn from_row(row: &csv::StringRecord) -> std::result::Result<Self, String> {
        if row.len() != CSV_HEADER.len() {
            return Err(format!("expected {} fields, got {}", CSV_HEADER.len(), row.len()));
        }
        let int = |i: usize| row[i].parse::<u64>().map_err(|e| format!("{}: {e}", CSV_HEADER[i]));
        let float = |i: usize| {
            let v = row[i]
                .parse::<f64>()
                .map_err(|e| format!("{}: {e}", CSV_HEADER[i]))?;
            if v.is_nan() || v == f64::NEG_INFINITY {
                return Err(format!("{}: {v} is not allowed", CSV_HEADER[i]));
            }
            Ok(v)
        };
        Ok(Self {
            experiment: row[0].to_string(),
            profile: row[1].to_string(),
            n: int(2)? as usize,
            trial_index: int(3)? as usize,
            seed_used: int(4)?,
            oeb_radius: float(5)?,
            intrinsic_oracle_radius: float(6)?,
            ambient_oracle_radius: float(7)?,
            ratio_oeb: float(8)?,
            ratio_ambient: float(9)?,
            tau_u: float(10)?,
            sigma_u_sq: float(11)?,
            intrinsic_dim_lower: float(12)?,
            intrinsic_dim_upper: float(13)?,
        })
    }
}

/// Streaming CSV writer: header on creation, rows flushed per batch.
pub struct CsvSink {
    writer: csv::Writer<BufWriter<File>>,
    path: PathBuf,
}

impl CsvSink {
    pub fn create(path: &Path) -> Result<Self> {
        let file = File::create(path).map_err(|source| HarnessError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let writer = csv::WriterBuilder::new()
            .flexible(true)
            .from_writer(BufWriter::new(file));
        let mut sink = Self {
            writer,
            path: path.to_path_buf(),
        };
        sink.write_raw(&["schema_version", SCHEMA_VERSION])?;
        sink.write_raw(&CSV_HEADER)?;
        sink.flush()?;
        Ok(sink)
    }

    fn csv_err(&self, source: csv::Error) -> HarnessError {
        HarnessError::Csv {
            path: self.path.clone(),
            source,
        }
    }

    fn write_raw<S: AsRef<[u8]>>(&mut self, row: &[S]) -> Result<()> {
        self.writer.write_record(row).map_err(|e| self.csv_err(e))
    }

    pub fn write(&mut self, records: &[TrialRecord]) -> Result<()> {
        for r in records {
            self.write_raw(&r.to_row())?;
        }
        self.flush()
    }

    pub fn flush(&mut self) -> Result<()> {
        self.writer.flush().map_err(|source| HarnessError::Io {
            path: self.path.clone(),
            source,
        })
    }
}

pub fn write_csv(records: &[TrialRecord], path: &Path) -> Result<()> {
    CsvSink::create(path)?.write(records)
}

pub fn read_csv(path: &Path) -> Result<Vec<TrialRecord>> {
    let format = |message: String| HarnessError::Format {
        path: path.to_path_buf(),
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_path(path)
        .map_err(|source| HarnessError::Csv {
            path: path.to_path_buf(),
            source,
        })?;
    let mut rows = reader.records();
    let mut next = || -> Result<Option<csv::StringRecord>> {
        rows.next()
            .transpose()
            .map_err(|source| HarnessError::Csv {
                path: path.to_path_buf(),
                source,
            })
    };
    match next()? {
        Some(r) if r.len() == 2 && &r[0] == "schema_version" => {
            if &r[1] != SCHEMA_VERSION {
                return Err(format(format!(
                    "schema version {} (expected {SCHEMA_VERSION})",
                    &r[1]
                )));
            }
        }
        _ => return Err(format("missing schema_version row".into())),
    }
    match next()? {
        Some(h) if h.iter().eq(CSV_HEADER.iter().copied()) => {}
        _ => return Err(format("column header does not match".into())),
    }
    let mut out = Vec::new();
    let mut line = 3;
    while let Some(r) = next()? {
        out.push(TrialRecord::from_row(&r).map_err(|m| format(format!("line {line}: {m}")))?);
        line += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_has_seventeen_digits() {
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
        assert_eq!(format_float(f64::INFINITY), "inf");
        let x = 0.123_456_789_012_345_67;
        assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
    }
}
