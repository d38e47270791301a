use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::pipeline::{Dataset, Matrix};

fn parse_cell(value: &str, row: usize, column: &str) -> Result<f64> {
    value.trim().parse().map_err(|_| Error::Parse {
        row,
        column: column.to_string(),
        value: value.to_string(),
    })
}

/// Read a labelled CSV. The label column is chosen by name and defaults to
/// the last column; labels become dense ids in order of first appearance.
pub fn load_csv(path: impl AsRef<Path>, label_column: Option<&str>) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv(file, label_column)
}

pub fn read_csv<R: Read>(input: R, label_column: Option<&str>) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(input);
    let header: Vec<String> = reader
        .headers()?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    if header.is_empty() || header.iter().all(String::is_empty) {
        return Err(Error::NoDataRows);
    }
    let label_idx = match label_column {
        Some(name) => header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::UnknownLabelColumn(name.to_string()))?,
        None => header.len() - 1,
    };
    let feature_names: Vec<String> = header
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != label_idx)
        .map(|(_, h)| h.clone())
        .collect();

    let mut x = Matrix::new();
    let mut y = Vec::new();
    let mut class_names: Vec<String> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        // 1-based data row numbers; the header is row 0
        let row = i + 1;
        let label = record.get(label_idx).map(str::trim).unwrap_or("");
        if label.is_empty() {
            return Err(Error::MissingLabel { row });
        }
        let features = record
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != label_idx)
            .map(|(j, v)| parse_cell(v, row, &header[j]))
            .collect::<Result<Vec<_>>>()?;
        let id = match class_names.iter().position(|c| c == label) {
            Some(id) => id,
            None => {
                class_names.push(label.to_string());
                class_names.len() - 1
            }
        };
        x.push(features);
        y.push(id);
    }
    if x.is_empty() {
        return Err(Error::NoDataRows);
    }
    if feature_names.len() < 2 {
        return Err(Error::TooFewFeatures(feature_names.len()));
    }
    Dataset::new(x, y, feature_names, class_names)
}

/// Read unlabelled rows for prediction. When the file has exactly one more
/// column than `features`, the label column (by name, or the last column)
/// is dropped.
pub fn read_feature_rows(
    path: impl AsRef<Path>,
    features: usize,
    label_column: Option<&str>,
) -> Result<Matrix> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(file);
    let header: Vec<String> = reader
        .headers()?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    let skip = if header.len() == features + 1 {
        match label_column {
            Some(name) => Some(
                header
                    .iter()
                    .position(|h| h == name)
                    .ok_or_else(|| Error::UnknownLabelColumn(name.to_string()))?,
            ),
            None => Some(header.len() - 1),
        }
    } else if header.len() == features {
        None
    } else {
        return Err(Error::FeatureMismatch {
            expected: features,
            got: header.len(),
        });
    };
    let mut x = Matrix::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let row = record
            .iter()
            .enumerate()
            .filter(|&(j, _)| Some(j) != skip)
            .map(|(j, v)| parse_cell(v, i + 1, &header[j]))
            .collect::<Result<Vec<_>>>()?;
        x.push(row);
    }
    if x.is_empty() {
        return Err(Error::NoDataRows);
    }
    Ok(x)
}

/// Write `ds` with a trailing `label` column holding class names.
pub fn write_csv<W: Write>(ds: &Dataset, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = ds.feature_names().iter().map(String::as_str).collect();
    header.push("label");
    w.write_record(&header)?;
    for (row, &label) in ds.x().iter().zip(ds.y()) {
        let mut record: Vec<String> = row.iter().map(f64::to_string).collect();
        record.push(ds.class_names()[label].clone());
        w.write_record(&record)?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}
