//! Confusion matrices, normalized multi-class (balanced) accuracy and the
//! detection-kind census.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::class::{ClassHistogram, DiagnosisVector, LesionClass, NUM_CLASSES};
use crate::diagnosis::{detection_kind, DetectionKind};
use crate::error::{Error, Result};
use crate::raster::LabelMask;

/// Rows are ground truth, columns are predictions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    cells: [[u64; NUM_CLASSES]; NUM_CLASSES],
}

impl ConfusionMatrix {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_cells(cells: [[u64; NUM_CLASSES]; NUM_CLASSES]) -> Self {
        Self { cells }
    }

    pub fn cells(&self) -> &[[u64; NUM_CLASSES]; NUM_CLASSES] {
        &self.cells
    }

    pub fn cell(&self, truth: LesionClass, pred: LesionClass) -> u64 {
        self.cells[truth.position()][pred.position()]
    }

    pub fn add(&mut self, truth: LesionClass, pred: LesionClass) {
        self.cells[truth.position()][pred.position()] += 1;
    }

    /// Records one scored image. `pred` must be one-hot.
    pub fn accumulate(&mut self, truth: LesionClass, pred: &DiagnosisVector) -> Result<()> {
        let class = pred.one_hot_class().ok_or(Error::NotOneHot)?;
        self.add(truth, class);
        Ok(())
    }

    pub fn row_sum(&self, truth: LesionClass) -> u64 {
        self.cells[truth.position()].iter().sum()
    }

    pub fn total(&self) -> u64 {
        self.cells.iter().flatten().sum()
    }

    pub fn diagonal_sum(&self) -> u64 {
        (0..NUM_CLASSES).map(|i| self.cells[i][i]).sum()
    }

    /// Cell-wise sum, for combining shards.
    pub fn merge(&mut self, other: &ConfusionMatrix) {
        for (row, other_row) in self.cells.iter_mut().zip(&other.cells) {
            for (a, b) in row.iter_mut().zip(other_row) {
                *a += b;
            }
        }
    }
}

/// How classes without ground-truth images enter the mean recall.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AbsentMode {
    /// Left out of the mean.
    #[default]
    Exclude,
    /// Counted as recall 0 over all seven classes.
    Zero,
}

impl fmt::Display for AbsentMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AbsentMode::Exclude => "exclude",
            AbsentMode::Zero => "zero",
        })
    }
}

impl FromStr for AbsentMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exclude" => Ok(AbsentMode::Exclude),
            "zero" => Ok(AbsentMode::Zero),
            _ => Err(format!("unknown absent mode {s:?} (expected exclude or zero)")),
        }
    }
}

/// Recall per class; `None` when the class has no ground-truth images.
pub fn per_class_recall(cm: &ConfusionMatrix) -> [Option<f64>; NUM_CLASSES] {
    LesionClass::ALL.map(|c| {
        let n = cm.row_sum(c);
        (n > 0).then(|| cm.cell(c, c) as f64 / n as f64)
    })
}

/// Mean recall over classes present in the ground truth.
pub fn normalized_multiclass_accuracy(cm: &ConfusionMatrix) -> Result<f64> {
    normalized_multiclass_accuracy_with(cm, AbsentMode::Exclude)
}

pub fn normalized_multiclass_accuracy_with(cm: &ConfusionMatrix, absent: AbsentMode) -> Result<f64> {
    let recalls = per_class_recall(cm);
    let present: Vec<f64> = recalls.iter().flatten().copied().collect();
    if present.is_empty() {
        return Err(Error::EmptyEvaluation);
    }
    let denom = match absent {
        AbsentMode::Exclude => present.len(),
        AbsentMode::Zero => NUM_CLASSES,
    };
    Ok(present.iter().sum::<f64>() / denom as f64)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetectionCensus {
    pub single: u64,
    pub none: u64,
    pub multiple: u64,
}

impl DetectionCensus {
    pub fn record(&mut self, kind: DetectionKind) {
        match kind {
            DetectionKind::Single => self.single += 1,
            DetectionKind::None => self.none += 1,
            DetectionKind::Multiple => self.multiple += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.single + self.none + self.multiple
    }

    pub fn merge(&mut self, other: &DetectionCensus) {
        self.single += other.single;
        self.none += other.none;
        self.multiple += other.multiple;
    }
}

pub fn detection_census<'a, I>(masks: I) -> DetectionCensus
where
    I: IntoIterator<Item = &'a LabelMask>,
{
    let mut census = DetectionCensus::default();
    for mask in masks {
        census.record(detection_kind(&mask.class_histogram()));
    }
    census
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    pub class: LesionClass,
    pub support: u64,
    pub correct: u64,
    pub recall: Option<f64>,
}

/// Everything written by the evaluate stage.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub normalized_multiclass_accuracy: f64,
    pub absent_mode: AbsentMode,
    pub images: u64,
    pub accuracy: f64,
    pub per_class: Vec<ClassReport>,
    pub confusion_matrix: ConfusionMatrix,
}

impl EvaluationReport {
    pub fn new(cm: &ConfusionMatrix, absent: AbsentMode) -> Result<Self> {
        let metric = normalized_multiclass_accuracy_with(cm, absent)?;
        let recalls = per_class_recall(cm);
        let per_class = LesionClass::ALL
            .iter()
            .zip(recalls)
            .map(|(&class, recall)| ClassReport {
                class,
                support: cm.row_sum(class),
                correct: cm.cell(class, class),
                recall,
            })
            .collect();
        Ok(Self {
            normalized_multiclass_accuracy: metric,
            absent_mode: absent,
            images: cm.total(),
            accuracy: cm.diagonal_sum() as f64 / cm.total() as f64,
            per_class,
            confusion_matrix: *cm,
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "normalized multi-class accuracy: {:.4}", self.normalized_multiclass_accuracy);
        let _ = writeln!(s, "plain accuracy: {:.4}", self.accuracy);
        let _ = writeln!(s, "images: {}", self.images);
        let _ = writeln!(s, "absent classes: {}", self.absent_mode);
        let _ = writeln!(s);
        let _ = writeln!(s, "{:<6} {:>8} {:>8} {:>8}", "class", "support", "correct", "recall");
        for row in &self.per_class {
            let recall = row.recall.map_or_else(|| "-".to_owned(), |r| format!("{r:.4}"));
            let _ = writeln!(s, "{:<6} {:>8} {:>8} {:>8}", row.class.code(), row.support, row.correct, recall);
        }
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("class,support,correct,recall\n");
        for row in &self.per_class {
            let recall = row.recall.map_or_else(String::new, |r| format!("{r:.6}"));
            let _ = writeln!(s, "{},{},{},{}", row.class.code(), row.support, row.correct, recall);
        }
        let _ = writeln!(s, "normalized_multiclass_accuracy,{},,{:.6}", self.images, self.normalized_multiclass_accuracy);
        s
    }
}

/// Per-class pixel totals over a set of masks.
pub fn pixel_totals<'a, I>(masks: I) -> ClassHistogram
where
    I: IntoIterator<Item = &'a LabelMask>,
{
    let mut total = ClassHistogram::new();
    for mask in masks {
        total.merge(&mask.class_histogram());
    }
    total
}
