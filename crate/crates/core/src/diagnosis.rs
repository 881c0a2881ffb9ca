//! Turning a segmentation label mask into a one-hot diagnosis.
//!
//! A mask falls into one of three cases. A single detected class is taken at
//! confidence 1.0. An empty mask defaults to nevi. A mask with several classes
//! is resolved by one of three strategies: the class with the most pixels, or
//! the highest-ranked present class under the frequency or malignancy
//! priority table.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::class::{
    frequency_priority_table, malignancy_priority_table, ClassHistogram, DiagnosisVector, LesionClass,
    PriorityTable,
};
use crate::error::{Error, Result};
use crate::raster::LabelMask;

/// Class assigned when nothing is detected.
pub const NO_DETECTION_DEFAULT: LesionClass = LesionClass::Nv;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DetectionKind {
    Single,
    None,
    Multiple,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strategy {
    #[serde(rename = "pixel-majority")]
    PixelMajority,
    #[serde(rename = "freq-priority")]
    FrequencyPriority,
    #[serde(rename = "malignancy-priority")]
    MalignancyPriority,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::PixelMajority, Strategy::FrequencyPriority, Strategy::MalignancyPriority];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::PixelMajority => "pixel-majority",
            Strategy::FrequencyPriority => "freq-priority",
            Strategy::MalignancyPriority => "malignancy-priority",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| format!("unknown strategy {s:?}"))
    }
}

pub fn class_histogram(mask: &LabelMask) -> ClassHistogram {
    mask.class_histogram()
}

pub fn detection_kind(hist: &ClassHistogram) -> DetectionKind {
    match hist.present().count() {
        0 => DetectionKind::None,
        1 => DetectionKind::Single,
        _ => DetectionKind::Multiple,
    }
}

/// Class with the most pixels; equal counts go to the class ranked higher in
/// `tie_break`. `None` for an empty histogram.
pub fn majority_class(hist: &ClassHistogram, tie_break: &PriorityTable) -> Option<LesionClass> {
    let max = hist.present().map(|c| hist.count(c)).max()?;
    tie_break.highest(hist.present().filter(|&c| hist.count(c) == max))
}

pub fn resolve_multiple(hist: &ClassHistogram, strategy: Strategy) -> Result<LesionClass> {
    if detection_kind(hist) != DetectionKind::Multiple {
        return Err(Error::NotMultipleDetection);
    }
    let class = match strategy {
        Strategy::PixelMajority => majority_class(hist, &frequency_priority_table()),
        Strategy::FrequencyPriority => frequency_priority_table().highest(hist.present()),
        Strategy::MalignancyPriority => malignancy_priority_table().highest(hist.present()),
    };
    Ok(class.expect("multiple detection has present classes"))
}

pub fn decide(hist: &ClassHistogram, strategy: Strategy) -> DiagnosisVector {
    let class = match detection_kind(hist) {
        DetectionKind::None => NO_DETECTION_DEFAULT,
        DetectionKind::Single => hist.present().next().expect("single detection"),
        DetectionKind::Multiple => resolve_multiple(hist, strategy).expect("kind checked"),
    };
    DiagnosisVector::one_hot(class)
}

/// Decides every mask, preserving input order. Ids must be unique.
pub fn batch_decide<S>(masks: &[(S, LabelMask)], strategy: Strategy) -> Result<Vec<(S, DiagnosisVector)>>
where
    S: AsRef<str> + Clone + Sync + Send,
{
    let mut seen = HashSet::with_capacity(masks.len());
    for (id, _) in masks {
        if !seen.insert(id.as_ref()) {
            return Err(Error::DuplicateId(id.as_ref().to_owned()));
        }
    }
    Ok(masks
        .par_iter()
        .map(|(id, mask)| (id.clone(), decide(&mask.class_histogram(), strategy)))
        .collect())
}
