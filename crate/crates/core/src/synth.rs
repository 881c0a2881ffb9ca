//! Seeded generator of synthetic segmentation outputs for offline end-to-end
//! runs.
//!
//! Each sample is an elliptical lesion on a color-cast skin background, its
//! binary lesion mask, and a label mask standing in for segmenter output:
//! one class (single), nothing (empty) or two classes side by side (two-class).

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::class::{DiagnosisVector, LesionClass};
use crate::raster::{LabelMask, RgbImage};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleKind {
    Single,
    Empty,
    TwoClass,
}

impl SampleKind {
    pub fn name(self) -> &'static str {
        match self {
            SampleKind::Single => "single",
            SampleKind::Empty => "empty",
            SampleKind::TwoClass => "two-class",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SynthConfig {
    pub count: usize,
    pub seed: u64,
    pub width: u32,
    pub height: u32,
    pub empty_fraction: f64,
    pub two_class_fraction: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self { count: 200, seed: 0, width: 128, height: 96, empty_fraction: 0.15, two_class_fraction: 0.15 }
    }
}

impl SynthConfig {
    /// Number of (single, empty, two-class) samples.
    pub fn split(&self) -> (usize, usize, usize) {
        let empty = ((self.count as f64 * self.empty_fraction).round() as usize).min(self.count);
        let two = ((self.count as f64 * self.two_class_fraction).round() as usize).min(self.count - empty);
        (self.count - empty - two, empty, two)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SynthSample {
    pub image_id: String,
    pub kind: SampleKind,
    pub truth: LesionClass,
    /// Stand-in segmenter output.
    pub labels: LabelMask,
    /// The true lesion extent, including lesions the segmenter missed.
    pub lesion: Vec<bool>,
    pub image: RgbImage,
}

impl SynthSample {
    pub fn truth_vector(&self) -> DiagnosisVector {
        DiagnosisVector::one_hot(self.truth)
    }
}

struct Ellipse {
    cx: f64,
    cy: f64,
    rx: f64,
    ry: f64,
}

impl Ellipse {
    fn random(rng: &mut ChaCha8Rng, x0: f64, x1: f64, height: f64) -> Self {
        let w = x1 - x0;
        let rx = rng.random_range(0.15..0.4) * w;
        let ry = rng.random_range(0.15..0.35) * height;
        let cx = x0 + rng.random_range(0.4..0.6) * w;
        let cy = rng.random_range(0.35..0.65) * height;
        Ellipse { cx, cy, rx: rx.max(1.0), ry: ry.max(1.0) }
    }

    fn contains(&self, x: u32, y: u32) -> bool {
        // Pixel centers; the pixel containing the center is always inside.
        let dx = (f64::from(x) + 0.5 - self.cx) / self.rx;
        let dy = (f64::from(y) + 0.5 - self.cy) / self.ry;
        dx * dx + dy * dy <= 1.0 || (x == self.cx as u32 && y == self.cy as u32)
    }
}

fn random_class(rng: &mut ChaCha8Rng) -> LesionClass {
    LesionClass::ALL[rng.random_range(0..LesionClass::ALL.len())]
}

fn lesion_tint(class: LesionClass) -> [f64; 3] {
    match class {
        LesionClass::Mel => [70.0, 45.0, 40.0],
        LesionClass::Nv => [140.0, 95.0, 70.0],
        LesionClass::Bcc => [185.0, 120.0, 125.0],
        LesionClass::Akiec => [190.0, 110.0, 95.0],
        LesionClass::Bkl => [150.0, 115.0, 85.0],
        LesionClass::Df => [160.0, 110.0, 100.0],
        LesionClass::Vasc => [170.0, 50.0, 70.0],
    }
}

fn generate_one(rng: &mut ChaCha8Rng, index: usize, kind: SampleKind, cfg: &SynthConfig) -> SynthSample {
    let (w, h) = (cfg.width, cfg.height);
    let truth = random_class(rng);
    let second = loop {
        let c = random_class(rng);
        if c != truth {
            break c;
        }
    };

    // Two-class samples split the frame so both lesions keep their pixels.
    let (blobs, seg_classes): (Vec<Ellipse>, Vec<LesionClass>) = match kind {
        SampleKind::TwoClass => {
            let half = f64::from(w) / 2.0;
            let left = Ellipse::random(rng, 0.0, half, f64::from(h));
            let right = Ellipse::random(rng, half, f64::from(w), f64::from(h));
            if rng.random_bool(0.5) {
                (vec![left, right], vec![truth, second])
            } else {
                (vec![right, left], vec![truth, second])
            }
        }
        _ => (vec![Ellipse::random(rng, 0.0, f64::from(w), f64::from(h))], vec![truth]),
    };

    let cast = [rng.random_range(0.75..1.0), rng.random_range(0.75..1.0), rng.random_range(0.75..1.0)];
    let skin = [225.0, 180.0, 150.0];

    let mut labels = LabelMask::background(w, h).expect("nonzero size");
    let mut lesion = vec![false; w as usize * h as usize];
    let mut pixels = Vec::with_capacity(lesion.len());
    for y in 0..h {
        for x in 0..w {
            let hit = blobs.iter().position(|b| b.contains(x, y));
            let base = match hit {
                Some(i) => {
                    lesion[(y * w + x) as usize] = true;
                    if kind != SampleKind::Empty {
                        labels.set(x, y, seg_classes[i].label_index());
                    }
                    lesion_tint(seg_classes[i])
                }
                None => skin,
            };
            let noise: f64 = rng.random_range(-6.0..6.0);
            pixels.push([0, 1, 2].map(|c| (base[c] * cast[c] + noise).round().clamp(1.0, 255.0) as u8));
        }
    }

    SynthSample {
        image_id: format!("SYN_{index:05}"),
        kind,
        truth,
        labels,
        lesion,
        image: RgbImage::new(w, h, pixels).expect("sized above"),
    }
}

/// Generates `cfg.count` samples. The same config always yields the same
/// samples.
pub fn generate(cfg: &SynthConfig) -> Vec<SynthSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (single, empty, two) = cfg.split();
    let mut kinds: Vec<SampleKind> = std::iter::repeat_n(SampleKind::Single, single)
        .chain(std::iter::repeat_n(SampleKind::Empty, empty))
        .chain(std::iter::repeat_n(SampleKind::TwoClass, two))
        .collect();
    kinds.shuffle(&mut rng);
    kinds
        .into_iter()
        .enumerate()
        .map(|(i, kind)| generate_one(&mut rng, i, kind, cfg))
        .collect()
}
