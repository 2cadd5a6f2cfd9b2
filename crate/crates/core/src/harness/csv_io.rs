//! Dataset CSV: one header row and 19 comma-separated columns per sample.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use super::{Dataset, HarnessError};
use crate::regressor::Sample;
use crate::spatial::{ProperAcc, Twist, Vec3, Wrench};

pub const COLUMNS: [&str; 19] = [
    "t", "v_x", "v_y", "v_z", "w_x", "w_y", "w_z", "ag_x", "ag_y", "ag_z", "agw_x", "agw_y", "agw_z", "f_x", "f_y",
    "f_z", "mu_x", "mu_y", "mu_z",
];

pub const UNITS_COMMENT: &str =
    "# units: t [s], v [m/s], w [rad/s], ag [m/s^2], agw [rad/s^2], f [N], mu [N m]; body frame";

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv_to<W: Write>(dataset: &Dataset, out: W) -> Result<(), HarnessError> {
    let mut out = BufWriter::new(out);
    writeln!(out, "{UNITS_COMMENT}")?;
    let mut writer = csv::WriterBuilder::new().from_writer(out);
    writer.write_record(COLUMNS)?;
    for s in &dataset.samples {
        let mut row = Vec::with_capacity(19);
        row.push(fmt(s.t));
        for v in [s.twist.linear, s.twist.angular, s.acc.linear, s.acc.angular, s.wrench.force, s.wrench.moment] {
            row.extend(v.iter().map(|&x| fmt(x)));
        }
        writer.write_record(&row)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn write_csv(dataset: &Dataset, path: &Path) -> Result<(), HarnessError> {
    let file = File::create(path).map_err(|e| HarnessError::io(path, e))?;
    write_csv_to(dataset, file)
}

pub fn read_csv_from<R: Read>(input: R) -> Result<Dataset, HarnessError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let mut records = reader.records();

    let header = match records.next() {
        Some(r) => r?,
        None => return Err(HarnessError::MissingHeader),
    };
    if header.len() != COLUMNS.len() || header.iter().zip(COLUMNS).any(|(a, b)| a != b) {
        return Err(HarnessError::MissingHeader);
    }

    let mut samples = Vec::new();
    for record in records {
        let record = record?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() != COLUMNS.len() {
            return Err(HarnessError::MalformedRow {
                line,
                message: format!("expected {} fields, found {}", COLUMNS.len(), record.len()),
            });
        }
        let mut values = [0.0; 19];
        for (i, field) in record.iter().enumerate() {
            values[i] = field.parse().map_err(|_| HarnessError::MalformedRow {
                line,
                message: format!("column {} is not a number: {field:?}", COLUMNS[i]),
            })?;
        }
        let v3 = |k: usize| Vec3::new(values[k], values[k + 1], values[k + 2]);
        samples.push(Sample {
            t: values[0],
            twist: Twist::new(v3(1), v3(4)),
            acc: ProperAcc::new(v3(7), v3(10)),
            wrench: Wrench::new(v3(13), v3(16)),
        });
    }
    Ok(Dataset { samples, ground_truth: None, metadata: Vec::new() })
}

pub fn read_csv(path: &Path) -> Result<Dataset, HarnessError> {
    let file = File::open(path).map_err(|e| HarnessError::io(path, e))?;
    read_csv_from(file)
}
