//! CSV reading and writing of survival datasets.
//!
//! The layout is a header `time,event,<covariate names…>` followed by one row
//! per subject, with `event` written as 0 or 1.

use std::io::{Read, Write};

use crate::data::{validate_dataset_with, SurvivalDataset, ValidationOptions};
use crate::error::{Error, Result};

/// Reads a dataset. An input without data rows yields [`Error::NoEvents`].
pub fn read_dataset_csv<R: Read>(reader: R, opts: ValidationOptions) -> Result<SurvivalDataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if header.len() < 3 || !header[0].eq_ignore_ascii_case("time") || !header[1].eq_ignore_ascii_case("event") {
            return Err(Error::Parse(format!(
                "header must be time,event,<covariates...>, got {}",
                header.join(",")
            )));
        }
        if rec.len() != header.len() {
            return Err(Error::DimensionMismatch {
                row,
                expected: header.len() - 2,
                found: rec.len().saturating_sub(2),
            });
        }
        let time = parse_f64(&rec[0], row, "time")?;
        let event = match &rec[1] {
            "1" => true,
            "0" => false,
            other => return Err(Error::Parse(format!("row {row}: event must be 0 or 1, got {other:?}"))),
        };
        let covariates = (2..rec.len())
            .map(|i| parse_f64(&rec[i], row, &header[i]))
            .collect::<Result<Vec<_>>>()?;
        rows.push((time, event, covariates));
    }
    if rows.is_empty() {
        return Err(Error::NoEvents);
    }
    validate_dataset_with(rows, opts)?.with_covariate_names(header[2..].to_vec())
}

fn parse_f64(field: &str, row: usize, column: &str) -> Result<f64> {
    field
        .parse()
        .map_err(|_| Error::Parse(format!("row {row}: {column} = {field:?} is not a number")))
}

pub fn read_dataset_file(path: &std::path::Path, opts: ValidationOptions) -> Result<SurvivalDataset> {
    let f = std::fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    read_dataset_csv(std::io::BufReader::new(f), opts)
}

/// Writes a dataset with shortest round-trip float formatting.
pub fn write_dataset_csv<W: Write>(ds: &SurvivalDataset, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["time".to_string(), "event".to_string()];
    header.extend(ds.covariate_names().iter().cloned());
    w.write_record(&header)?;
    for o in ds.observations() {
        let mut rec = vec![o.time.to_string(), if o.event { "1" } else { "0" }.to_string()];
        rec.extend(o.covariates.iter().map(f64::to_string));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Covariate names produced by [`nickel_transform`].
pub const NICKEL_COVARIATES: [&str; 4] = ["log(AFE-10)", "(YFE-1915)/10", "-(YFE-1915)^2/100", "log(EXP+1)"];

/// Reads the nickel-refinery layout `time,event,AFE,YFE,EXP` and returns the
/// transformed covariates `log(AFE−10)`, `(YFE−1915)/10`, `−(YFE−1915)²/100`
/// and `log(EXP+1)`. The result has signed covariates.
pub fn read_nickel_csv<R: Read>(reader: R) -> Result<SurvivalDataset> {
    let opts = ValidationOptions {
        allow_signed_covariates: true,
    };
    let raw = read_dataset_csv(reader, opts)?;
    let names = raw.covariate_names();
    let expect = ["AFE", "YFE", "EXP"];
    if names.len() != 3 || names.iter().zip(expect).any(|(a, b)| !a.eq_ignore_ascii_case(b)) {
        return Err(Error::Parse(format!(
            "expected columns time,event,AFE,YFE,EXP, got time,event,{}",
            names.join(",")
        )));
    }
    let mut rows = Vec::with_capacity(raw.n());
    for (row, o) in raw.observations().iter().enumerate() {
        rows.push((o.time, o.event, nickel_transform(o.covariates[0], o.covariates[1], o.covariates[2], row)?));
    }
    validate_dataset_with(rows, opts)?.with_covariate_names(NICKEL_COVARIATES.iter().map(|s| s.to_string()).collect())
}

pub fn nickel_transform(afe: f64, yfe: f64, exp: f64, row: usize) -> Result<Vec<f64>> {
    if !(afe > 10.0) || !(exp > -1.0) {
        return Err(Error::NonNegativityViolation {
            row,
            what: format!("need AFE > 10 and EXP > -1, got AFE = {afe}, EXP = {exp}"),
        });
    }
    let y = yfe - 1915.0;
    Ok(vec![(afe - 10.0).ln(), y / 10.0, -y * y / 100.0, (exp + 1.0).ln()])
}
