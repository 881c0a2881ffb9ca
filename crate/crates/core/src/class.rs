//! Lesion classes and the per-class containers built on them.
//!
//! Label indices follow the column order of the challenge CSV files:
//! `MEL=1, NV=2, BCC=3, AKIEC=4, BKL=5, DF=6, VASC=7`. Index 0 is background
//! and never names a class.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of lesion classes.
pub const NUM_CLASSES: usize = 7;

/// One of the seven diagnosis categories.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum LesionClass {
    Mel,
    Nv,
    Bcc,
    Akiec,
    Bkl,
    Df,
    Vasc,
}

impl LesionClass {
    /// All classes in label-index order.
    pub const ALL: [LesionClass; NUM_CLASSES] = [
        LesionClass::Mel,
        LesionClass::Nv,
        LesionClass::Bcc,
        LesionClass::Akiec,
        LesionClass::Bkl,
        LesionClass::Df,
        LesionClass::Vasc,
    ];

    pub fn code(self) -> &'static str {
        match self {
            LesionClass::Mel => "MEL",
            LesionClass::Nv => "NV",
            LesionClass::Bcc => "BCC",
            LesionClass::Akiec => "AKIEC",
            LesionClass::Bkl => "BKL",
            LesionClass::Df => "DF",
            LesionClass::Vasc => "VASC",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            LesionClass::Mel => "Melanoma",
            LesionClass::Nv => "Nevi",
            LesionClass::Bcc => "Basal Cell Carcinoma",
            LesionClass::Akiec => "Actinic Keratosis",
            LesionClass::Bkl => "Benign Keratosis",
            LesionClass::Df => "Dermatofibroma",
            LesionClass::Vasc => "Vascular Lesion",
        }
    }

    /// Label value used in masks, in `1..=7`.
    pub fn label_index(self) -> u8 {
        self.position() as u8 + 1
    }

    /// Zero-based position in [`LesionClass::ALL`].
    pub fn position(self) -> usize {
        self as usize
    }

    pub fn from_label_index(index: u8) -> Result<Self> {
        match index {
            1..=7 => Ok(Self::ALL[index as usize - 1]),
            _ => Err(Error::UnknownLabelIndex(index)),
        }
    }

    /// Case-insensitive lookup by code (`"mel"`, `"NV"`, ...).
    pub fn from_code(code: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.code().eq_ignore_ascii_case(code.trim()))
            .ok_or_else(|| Error::UnknownClassCode(code.to_owned()))
    }
}

impl fmt::Display for LesionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for LesionClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_code(s)
    }
}

/// Training-image counts per class, used to order the frequency table.
pub const TRAINING_IMAGE_COUNTS: [(LesionClass, u32); NUM_CLASSES] = [
    (LesionClass::Df, 115),
    (LesionClass::Vasc, 142),
    (LesionClass::Akiec, 327),
    (LesionClass::Bcc, 514),
    (LesionClass::Bkl, 1099),
    (LesionClass::Mel, 1113),
    (LesionClass::Nv, 6705),
];

/// A total order over the seven classes, highest priority first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PriorityTable {
    name: &'static str,
    ranking: [LesionClass; NUM_CLASSES],
    // rank_of[class.position()] = 0-based rank
    rank_of: [usize; NUM_CLASSES],
}

impl PriorityTable {
    pub fn new(name: &'static str, ranking: [LesionClass; NUM_CLASSES]) -> Result<Self> {
        let mut rank_of = [usize::MAX; NUM_CLASSES];
        for (rank, class) in ranking.iter().enumerate() {
            if rank_of[class.position()] != usize::MAX {
                return Err(Error::InvalidRanking);
            }
            rank_of[class.position()] = rank;
        }
        Ok(Self { name, ranking, rank_of })
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn ranking(&self) -> &[LesionClass; NUM_CLASSES] {
        &self.ranking
    }

    /// 0-based rank; 0 is the highest priority.
    pub fn rank(&self, class: LesionClass) -> usize {
        self.rank_of[class.position()]
    }

    /// The highest-priority class among `candidates`, if any.
    pub fn highest<I>(&self, candidates: I) -> Option<LesionClass>
    where
        I: IntoIterator<Item = LesionClass>,
    {
        candidates.into_iter().min_by_key(|&c| self.rank(c))
    }
}

/// Rarest class first, by training-set image count.
pub fn frequency_priority_table() -> PriorityTable {
    use LesionClass::*;
    PriorityTable::new("frequency", [Df, Vasc, Akiec, Bcc, Bkl, Mel, Nv]).expect("static permutation")
}

/// Malignant classes first, then by training-set rarity.
///
/// The source ranking assigns actinic keratosis and benign keratosis the same
/// priority; actinic keratosis (malignant potential) is placed ahead of benign
/// keratosis (benign).
pub fn malignancy_priority_table() -> PriorityTable {
    use LesionClass::*;
    PriorityTable::new("malignancy", [Df, Bcc, Mel, Vasc, Akiec, Bkl, Nv]).expect("static permutation")
}

/// Pixel count per lesion class. Background is not tracked.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassHistogram([u64; NUM_CLASSES]);

impl ClassHistogram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_counts(counts: [u64; NUM_CLASSES]) -> Self {
        Self(counts)
    }

    pub fn from_pairs<I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (LesionClass, u64)>,
    {
        let mut hist = Self::new();
        for (class, n) in pairs {
            hist.0[class.position()] += n;
        }
        hist
    }

    pub fn count(&self, class: LesionClass) -> u64 {
        self.0[class.position()]
    }

    pub fn add(&mut self, class: LesionClass, n: u64) {
        self.0[class.position()] += n;
    }

    pub fn counts(&self) -> &[u64; NUM_CLASSES] {
        &self.0
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    /// Classes with a nonzero count, in label-index order.
    pub fn present(&self) -> impl Iterator<Item = LesionClass> + '_ {
        LesionClass::ALL.into_iter().filter(|&c| self.count(c) > 0)
    }

    pub fn merge(&mut self, other: &ClassHistogram) {
        for (a, b) in self.0.iter_mut().zip(other.0) {
            *a += b;
        }
    }
}

/// Per-class confidences in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosisVector([f64; NUM_CLASSES]);

impl DiagnosisVector {
    pub fn new(confidence: [f64; NUM_CLASSES]) -> Result<Self> {
        for (class, &value) in LesionClass::ALL.iter().zip(&confidence) {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::InvalidConfidence { class: class.code(), value });
            }
        }
        Ok(Self(confidence))
    }

    pub fn one_hot(class: LesionClass) -> Self {
        let mut confidence = [0.0; NUM_CLASSES];
        confidence[class.position()] = 1.0;
        Self(confidence)
    }

    pub fn confidence(&self, class: LesionClass) -> f64 {
        self.0[class.position()]
    }

    pub fn as_array(&self) -> &[f64; NUM_CLASSES] {
        &self.0
    }

    /// The class at 1.0 when every other entry is exactly 0.0.
    pub fn one_hot_class(&self) -> Option<LesionClass> {
        let mut hot = None;
        for (class, &value) in LesionClass::ALL.iter().zip(&self.0) {
            if value == 1.0 {
                if hot.is_some() {
                    return None;
                }
                hot = Some(*class);
            } else if value != 0.0 {
                return None;
            }
        }
        hot
    }
}
