//! Building blocks for a segmentation-based skin-lesion diagnosis pipeline.
//!
//! A pixel-wise classifier labels every pixel of a dermoscopic image with one
//! of seven lesion classes or background. This crate covers everything around
//! that network:
//!
//! - [`color_constancy`]: Shades-of-Gray illuminant estimation and correction.
//! - [`mask_io`]: indexed PNG label masks with the Pascal-VOC palette, and
//!   multi-class ground truth built from binary lesion masks.
//! - [`diagnosis`]: one-hot diagnosis from a label mask (single detection,
//!   no detection, or multiple detections resolved by pixel majority or a
//!   priority table).
//! - [`evaluation`]: confusion matrix, normalized multi-class accuracy and
//!   the detection-kind census.
//! - [`pipeline`]: the same stages over directories and challenge-format
//!   CSV files, as driven by the `lesiondx` binary.

pub mod class;
pub mod cli;
pub mod color_constancy;
pub mod diagnosis;
pub mod error;
pub mod evaluation;
pub mod mask_io;
pub mod pipeline;
pub mod raster;
pub mod submission;
pub mod synth;

pub use class::{
    frequency_priority_table, malignancy_priority_table, ClassHistogram, DiagnosisVector, LesionClass, PriorityTable,
};
pub use color_constancy::{apply_shades_of_gray, correct_rgb_image, estimate_illuminant, IlluminantEstimate, NormOrder};
pub use diagnosis::{batch_decide, decide, detection_kind, resolve_multiple, DetectionKind, Strategy};
pub use error::{Error, Result};
pub use evaluation::{
    detection_census, normalized_multiclass_accuracy, per_class_recall, AbsentMode, ConfusionMatrix, DetectionCensus,
};
pub use mask_io::{binarize_mask, decode_mask, encode_mask, synthesize_ground_truth, voc_palette, BinaryMask, VocPalette};
pub use raster::{LabelMask, LinearRgbImage, RgbImage};
