//! Challenge-format CSV files and dataset manifests.
//!
//! Predictions and ground truth share one layout:
//!
//! ```text
//! image,MEL,NV,BCC,AKIEC,BKL,DF,VASC
//! ISIC_0000000,1.0,0.0,0.0,0.0,0.0,0.0,0.0
//! ```

use std::collections::HashSet;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use crate::class::{DiagnosisVector, LesionClass, NUM_CLASSES};
use crate::error::{Error, Result};

pub const SUBMISSION_HEADER: [&str; NUM_CLASSES + 1] = ["image", "MEL", "NV", "BCC", "AKIEC", "BKL", "DF", "VASC"];

#[derive(Clone, Debug, PartialEq)]
pub struct SubmissionRow {
    pub image_id: String,
    pub confidences: DiagnosisVector,
}

/// Debug formatting keeps a trailing `.0`, giving "1.0" and "0.0" for one-hot rows.
fn format_confidence(v: f64) -> String {
    format!("{v:?}")
}

pub fn write_submission<W: Write>(out: W, rows: &[SubmissionRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SUBMISSION_HEADER)?;
    for row in rows {
        let mut record = Vec::with_capacity(NUM_CLASSES + 1);
        record.push(row.image_id.clone());
        record.extend(row.confidences.as_array().iter().map(|&v| format_confidence(v)));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

fn is_submission_header(header: &csv::StringRecord) -> bool {
    header.len() == SUBMISSION_HEADER.len()
        && header.iter().zip(SUBMISSION_HEADER).all(|(a, b)| a.trim().eq_ignore_ascii_case(b))
}

fn parse_row(record: &csv::StringRecord) -> Result<(String, [f64; NUM_CLASSES])> {
    let id = record.get(0).unwrap_or("").trim().to_owned();
    if id.is_empty() || record.len() != NUM_CLASSES + 1 {
        return Err(Error::Csv(format!("malformed row {:?}", record.iter().collect::<Vec<_>>())));
    }
    let mut values = [0.0; NUM_CLASSES];
    for (slot, field) in values.iter_mut().zip(record.iter().skip(1)) {
        *slot = field
            .trim()
            .parse()
            .map_err(|_| Error::Csv(format!("row {id:?}: bad confidence {field:?}")))?;
    }
    Ok((id, values))
}

fn read_rows<R: Read>(input: R) -> Result<Vec<(String, [f64; NUM_CLASSES])>> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    if !is_submission_header(r.headers()?) {
        return Err(Error::Csv(format!("expected header {:?}", SUBMISSION_HEADER.join(","))));
    }
    let mut seen = HashSet::new();
    let mut rows = Vec::new();
    for record in r.records() {
        let (id, values) = parse_row(&record?)?;
        if !seen.insert(id.clone()) {
            return Err(Error::DuplicateId(id));
        }
        rows.push((id, values));
    }
    Ok(rows)
}

pub fn read_submission<R: Read>(input: R) -> Result<Vec<SubmissionRow>> {
    read_rows(input)?
        .into_iter()
        .map(|(image_id, values)| {
            let confidences = DiagnosisVector::new(values)?;
            Ok(SubmissionRow { image_id, confidences })
        })
        .collect()
}

/// The label of a ground-truth row: the unique column at or above 0.5, with
/// every other column at or below 0.5.
pub fn truth_class(id: &str, values: &[f64; NUM_CLASSES]) -> Result<LesionClass> {
    let ambiguous = || Error::AmbiguousGroundTruth(id.to_owned());
    let (best, &max) = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .ok_or_else(ambiguous)?;
    let others_ok = values.iter().enumerate().all(|(i, &v)| i == best || (v <= 0.5 && v < max));
    if !(0.5..=1.0).contains(&max) || !others_ok || values.iter().any(|v| !(0.0..=1.0).contains(v)) {
        return Err(ambiguous());
    }
    Ok(LesionClass::ALL[best])
}

pub fn read_truth<R: Read>(input: R) -> Result<Vec<(String, LesionClass)>> {
    read_rows(input)?
        .into_iter()
        .map(|(id, values)| {
            let class = truth_class(&id, &values)?;
            Ok((id, class))
        })
        .collect()
}

/// One dataset entry bound to its files.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifestRecord {
    pub image_id: String,
    pub image_path: Option<PathBuf>,
    pub mask_path: Option<PathBuf>,
    pub truth: Option<LesionClass>,
}

/// Reads a manifest in either of two layouts:
///
/// * the challenge ground-truth layout (`image,MEL,...,VASC`), or
/// * `image_id,image_path,mask_path,label` where every column but
///   `image_id` may be missing or empty and `label` is a class code.
///
/// Relative paths are resolved against `base`.
pub fn read_manifest(bytes: &[u8], base: &Path) -> Result<Vec<ManifestRecord>> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).flexible(true).from_reader(bytes);
    let header = r.headers()?.clone();
    if is_submission_header(&header) {
        let mut records = Vec::new();
        let mut seen = HashSet::new();
        for record in r.records() {
            let record = record?;
            let id = record.get(0).unwrap_or("").trim().to_owned();
            if id.is_empty() {
                return Err(Error::Csv("manifest row without image id".into()));
            }
            let (id, values) = parse_row(&record).map_err(|_| Error::MissingLabel(id))?;
            if !seen.insert(id.clone()) {
                return Err(Error::DuplicateId(id));
            }
            let truth = truth_class(&id, &values)?;
            records.push(ManifestRecord { image_id: id, image_path: None, mask_path: None, truth: Some(truth) });
        }
        return Ok(records);
    }
    read_column_manifest(r, &header, base)
}

fn read_column_manifest<R: Read>(
    mut r: csv::Reader<R>,
    header: &csv::StringRecord,
    base: &Path,
) -> Result<Vec<ManifestRecord>> {
    let column = |names: &[&str]| {
        header
            .iter()
            .position(|h| names.iter().any(|n| h.trim().eq_ignore_ascii_case(n)))
    };
    let id_col = column(&["image_id", "image", "id"])
        .ok_or_else(|| Error::Csv("manifest has no image_id column".into()))?;
    let image_col = column(&["image_path"]);
    let mask_col = column(&["mask_path"]);
    let label_col = column(&["label", "truth", "class", "dx"]);

    let field = |record: &csv::StringRecord, col: Option<usize>| -> Option<String> {
        col.and_then(|c| record.get(c)).map(str::trim).filter(|s| !s.is_empty()).map(str::to_owned)
    };
    let resolve = |p: String| {
        let p = PathBuf::from(p);
        if p.is_absolute() {
            p
        } else {
            base.join(p)
        }
    };

    let mut seen = HashSet::new();
    let mut records = Vec::new();
    for record in r.records() {
        let record = record?;
        let image_id = field(&record, Some(id_col)).ok_or_else(|| Error::Csv("manifest row without image id".into()))?;
        if !seen.insert(image_id.clone()) {
            return Err(Error::DuplicateId(image_id));
        }
        let truth = field(&record, label_col).map(|s| LesionClass::from_code(&s)).transpose()?;
        records.push(ManifestRecord {
            image_path: field(&record, image_col).map(resolve),
            mask_path: field(&record, mask_col).map(PathBuf::from),
            truth,
            image_id,
        });
    }
    Ok(records)
}
