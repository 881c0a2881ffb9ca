//! File-level pipeline stages: preprocessing, ground-truth synthesis,
//! diagnosis, evaluation, detection statistics and synthetic fixtures.
//!
//! Per-file work runs on the current rayon pool; results are always
//! reassembled in sorted input order so outputs do not depend on scheduling.

use std::fs;
use std::path::{Path, PathBuf};

use image::imageops::FilterType;
use rayon::prelude::*;

use crate::class::{ClassHistogram, LesionClass};
use crate::submission::{self as csv_io, ManifestRecord, SubmissionRow};
use crate::synth::{self, SynthConfig};
use crate::color_constancy::{correct_rgb_image, NormOrder};
use crate::diagnosis::{batch_decide, Strategy};
use crate::error::{Error, Result};
use crate::evaluation::{detection_census, pixel_totals, AbsentMode, ConfusionMatrix, DetectionCensus, EvaluationReport};
use crate::mask_io::{binarize_mask, decode_mask, encode_mask, load_rgb, synthesize_ground_truth};
use crate::raster::{LabelMask, RgbImage};

const IMAGE_EXTENSIONS: [&str; 6] = ["png", "jpg", "jpeg", "bmp", "tif", "tiff"];

/// Default working resolution for photographs.
pub const DEFAULT_SIZE: (u32, u32) = (500, 375);

fn has_extension(path: &Path, exts: &[&str]) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| exts.iter().any(|x| x.eq_ignore_ascii_case(e)))
}

/// Regular files in `dir` with one of `exts`, sorted by path.
pub fn list_files(dir: &Path, exts: &[&str]) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::from(e).in_file(dir))? {
        let path = entry?.path();
        if path.is_file() && has_extension(&path, exts) {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

fn file_stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

/// Which operation runs first during preprocessing.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum StageOrder {
    #[default]
    CorrectFirst,
    ResizeFirst,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PreprocessOptions {
    pub p: NormOrder,
    pub width: u32,
    pub height: u32,
    pub order: StageOrder,
}

impl Default for PreprocessOptions {
    fn default() -> Self {
        Self { p: NormOrder::default(), width: DEFAULT_SIZE.0, height: DEFAULT_SIZE.1, order: StageOrder::CorrectFirst }
    }
}

#[derive(Debug, Default)]
pub struct PreprocessSummary {
    pub written: Vec<PathBuf>,
    pub failed: Vec<(PathBuf, Error)>,
}

/// Bilinear resize.
pub fn resize_bilinear(img: &RgbImage, width: u32, height: u32) -> RgbImage {
    if img.width() == width && img.height() == height {
        return img.clone();
    }
    let out = image::imageops::resize(&img.to_buffer(), width, height, FilterType::Triangle);
    RgbImage::from_buffer(&out).expect("resize keeps a valid buffer")
}

/// Color-corrects and resizes one image.
pub fn preprocess_image(img: &RgbImage, opts: &PreprocessOptions) -> Result<RgbImage> {
    match opts.order {
        StageOrder::CorrectFirst => Ok(resize_bilinear(&correct_rgb_image(img, opts.p)?, opts.width, opts.height)),
        StageOrder::ResizeFirst => correct_rgb_image(&resize_bilinear(img, opts.width, opts.height), opts.p),
    }
}

/// Processes every image in `input`, writing results under the same file
/// names in `output`. Per-file failures are collected, not fatal.
pub fn preprocess_dir(input: &Path, output: &Path, opts: &PreprocessOptions) -> Result<PreprocessSummary> {
    let files = list_files(input, &IMAGE_EXTENSIONS)?;
    if files.is_empty() {
        return Err(Error::NoInputs { what: "images", dir: input.to_owned() });
    }
    fs::create_dir_all(output)?;
    let results: Vec<_> = files
        .par_iter()
        .map(|path| {
            let target = output.join(path.file_name().expect("listed files have names"));
            let run = || -> Result<()> {
                let img = load_rgb(path)?;
                let out = preprocess_image(&img, opts)?;
                out.to_buffer().save(&target)?;
                Ok(())
            };
            run().map(|()| target)
        })
        .collect();

    let mut summary = PreprocessSummary::default();
    for (path, result) in files.into_iter().zip(results) {
        match result {
            Ok(target) => summary.written.push(target),
            Err(e) => summary.failed.push((path, e)),
        }
    }
    Ok(summary)
}

fn resolve_mask_path(record: &ManifestRecord, masks_dir: &Path) -> Result<PathBuf> {
    let candidates = match &record.mask_path {
        Some(p) if p.is_absolute() => vec![p.clone()],
        Some(p) => vec![masks_dir.join(p)],
        None => vec![
            masks_dir.join(format!("{}_segmentation.png", record.image_id)),
            masks_dir.join(format!("{}.png", record.image_id)),
        ],
    };
    candidates
        .iter()
        .find(|p| p.is_file())
        .cloned()
        .ok_or_else(|| Error::MissingMask { id: record.image_id.clone(), path: candidates[0].clone() })
}

/// Builds one ground-truth label mask: binarize, label, and resize
/// (nearest-neighbor) to the paired image when its size differs.
pub fn ground_truth_for(record: &ManifestRecord, masks_dir: &Path, threshold: u8) -> Result<LabelMask> {
    let truth = record.truth.ok_or_else(|| Error::MissingLabel(record.image_id.clone()))?;
    let mask_path = resolve_mask_path(record, masks_dir)?;
    let binary = binarize_mask(&load_rgb(&mask_path).map_err(|e| e.in_file(&mask_path))?, threshold);
    let labels = synthesize_ground_truth(&binary, truth);
    match &record.image_path {
        Some(image_path) if image_path.is_file() => {
            let (w, h) = image::image_dimensions(image_path).map_err(|e| Error::from(e).in_file(image_path))?;
            if (w, h) != (labels.width(), labels.height()) {
                return labels.resize_nearest(w, h);
            }
            Ok(labels)
        }
        _ => Ok(labels),
    }
}

/// Writes `<output>/<image_id>.png` for every manifest record. Stops at the
/// first failing record.
pub fn make_ground_truth(manifest: &Path, masks_dir: &Path, output: &Path, threshold: u8) -> Result<usize> {
    let bytes = fs::read(manifest).map_err(|e| Error::from(e).in_file(manifest))?;
    let base = manifest.parent().unwrap_or(Path::new("."));
    let records = csv_io::read_manifest(&bytes, base).map_err(|e| e.in_file(manifest))?;
    if let Some(unlabeled) = records.iter().find(|r| r.truth.is_none()) {
        return Err(Error::MissingLabel(unlabeled.image_id.clone()));
    }
    fs::create_dir_all(output)?;
    let results: Vec<Result<()>> = records
        .par_iter()
        .map(|record| {
            let mask = ground_truth_for(record, masks_dir, threshold)?;
            fs::write(output.join(format!("{}.png", record.image_id)), encode_mask(&mask)?)?;
            Ok(())
        })
        .collect();
    for (record, result) in records.iter().zip(results) {
        result.map_err(|e| match e {
            e @ (Error::MissingLabel(_) | Error::MissingMask { .. }) => e,
            e => e.in_record(&record.image_id),
        })?;
    }
    Ok(records.len())
}

/// Decodes every `*.png` in `dir` as a label mask, keyed by file stem and
/// sorted by id.
pub fn load_masks(dir: &Path) -> Result<Vec<(String, LabelMask)>> {
    let files = list_files(dir, &["png"])?;
    if files.is_empty() {
        return Err(Error::NoInputs { what: "masks", dir: dir.to_owned() });
    }
    let decoded: Vec<Result<LabelMask>> = files
        .par_iter()
        .map(|path| {
            let bytes = fs::read(path)?;
            decode_mask(&bytes)
        })
        .collect();
    let mut masks = Vec::with_capacity(files.len());
    for (path, mask) in files.iter().zip(decoded) {
        masks.push((file_stem(path), mask.map_err(|e| e.in_file(path))?));
    }
    masks.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(masks)
}

/// Diagnoses every mask in `dir`; rows are sorted by image id.
pub fn diagnose_dir(dir: &Path, strategy: Strategy) -> Result<Vec<SubmissionRow>> {
    let masks = load_masks(dir)?;
    Ok(batch_decide(&masks, strategy)?
        .into_iter()
        .map(|(image_id, confidences)| SubmissionRow { image_id, confidences })
        .collect())
}

pub fn write_submission_file(path: &Path, rows: &[SubmissionRow]) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    let mut buf = Vec::new();
    csv_io::write_submission(&mut buf, rows)?;
    fs::write(path, buf).map_err(|e| Error::from(e).in_file(path))
}

/// Scores predictions against ground truth, both in challenge CSV layout.
pub fn evaluate_rows(predictions: &[SubmissionRow], truth: &[(String, LesionClass)], absent: AbsentMode) -> Result<EvaluationReport> {
    let truth: std::collections::HashMap<&str, LesionClass> = truth.iter().map(|(id, c)| (id.as_str(), *c)).collect();
    let mut cm = ConfusionMatrix::new();
    for row in predictions {
        let class = *truth
            .get(row.image_id.as_str())
            .ok_or_else(|| Error::UnknownPredictionId(row.image_id.clone()))?;
        cm.accumulate(class, &row.confidences).map_err(|e| e.in_record(&row.image_id))?;
    }
    EvaluationReport::new(&cm, absent)
}

pub fn evaluate_files(predictions: &Path, truth: &Path, absent: AbsentMode) -> Result<EvaluationReport> {
    let open = |p: &Path| fs::File::open(p).map_err(|e| Error::from(e).in_file(p));
    let preds = csv_io::read_submission(open(predictions)?).map_err(|e| e.in_file(predictions))?;
    let truth_rows = csv_io::read_truth(open(truth)?).map_err(|e| e.in_file(truth))?;
    evaluate_rows(&preds, &truth_rows, absent)
}

/// Sibling paths for the text and per-class CSV summaries of a report:
/// `<stem>.txt` and `<stem>_per_class.csv`. The CSV suffix keeps a report
/// named after a submission from overwriting it.
pub fn report_siblings(path: &Path) -> (PathBuf, PathBuf) {
    let stem = path.file_stem().unwrap_or_default().to_string_lossy();
    (path.with_extension("txt"), path.with_file_name(format!("{stem}_per_class.csv")))
}

/// Writes the JSON report to `path` and the summaries from [`report_siblings`].
pub fn write_report(path: &Path, report: &EvaluationReport) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    let mut json = serde_json::to_string_pretty(report)?;
    json.push('\n');
    fs::write(path, json)?;
    let (text, csv) = report_siblings(path);
    fs::write(text, report.to_text())?;
    fs::write(csv, report.to_csv())?;
    Ok(())
}

/// Detection-kind census and per-class pixel totals for a mask directory.
pub fn stats_dir(dir: &Path) -> Result<(DetectionCensus, ClassHistogram)> {
    let masks = load_masks(dir)?;
    let census = detection_census(masks.iter().map(|(_, m)| m));
    let totals = pixel_totals(masks.iter().map(|(_, m)| m));
    Ok((census, totals))
}

/// Writes a synthetic dataset under `output`:
///
/// ```text
/// images/<id>.png                 color-cast photographs
/// lesions/<id>_segmentation.png   binary lesion masks (0 / 255)
/// masks/<id>.png                  indexed label masks (segmenter stand-in)
/// truth.csv                       challenge-format ground truth
/// kinds.csv                       image,kind (single / empty / two-class)
/// manifest.csv                    image_id,image_path,mask_path,label
/// ```
pub fn synth_to_dir(cfg: &SynthConfig, output: &Path) -> Result<Vec<synth::SynthSample>> {
    let samples = synth::generate(cfg);
    for sub in ["images", "lesions", "masks"] {
        fs::create_dir_all(output.join(sub))?;
    }
    samples.par_iter().try_for_each(|s| -> Result<()> {
        s.image.to_buffer().save(output.join("images").join(format!("{}.png", s.image_id)))?;
        let raw = s.lesion.iter().map(|&f| if f { 255 } else { 0 }).collect();
        let gray = image::GrayImage::from_raw(s.labels.width(), s.labels.height(), raw).expect("sized by generator");
        gray.save(output.join("lesions").join(format!("{}_segmentation.png", s.image_id)))?;
        fs::write(output.join("masks").join(format!("{}.png", s.image_id)), encode_mask(&s.labels)?)?;
        Ok(())
    })?;

    let truth: Vec<SubmissionRow> = samples
        .iter()
        .map(|s| SubmissionRow { image_id: s.image_id.clone(), confidences: s.truth_vector() })
        .collect();
    write_submission_file(&output.join("truth.csv"), &truth)?;

    let mut kinds = String::from("image,kind\n");
    let mut manifest = String::from("image_id,image_path,mask_path,label\n");
    for s in &samples {
        kinds.push_str(&format!("{},{}\n", s.image_id, s.kind.name()));
        manifest.push_str(&format!(
            "{id},images/{id}.png,{id}_segmentation.png,{}\n",
            s.truth.code(),
            id = s.image_id
        ));
    }
    fs::write(output.join("kinds.csv"), kinds)?;
    fs::write(output.join("manifest.csv"), manifest)?;
    Ok(samples)
}
