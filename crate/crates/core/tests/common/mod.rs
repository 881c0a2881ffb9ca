//! Reference implementations shared by the integration and acceptance
//! tests. None of these call into the code paths they check.
#![allow(dead_code)]

use lesiondx::class::{LesionClass, NUM_CLASSES};
use lesiondx::diagnosis::Strategy;

// Priorities as published, keyed by code. Malignancy
// ranks keep the tied 5/5 pair with AKIEC listed first; BKL gets 5.5.
pub const FREQUENCY_RANK: [(&str, f64); 7] =
    [("DF", 1.0), ("VASC", 2.0), ("AKIEC", 3.0), ("BCC", 4.0), ("BKL", 5.0), ("MEL", 6.0), ("NV", 7.0)];
pub const MALIGNANCY_RANK: [(&str, f64); 7] =
    [("DF", 1.0), ("BCC", 2.0), ("MEL", 3.0), ("VASC", 4.0), ("AKIEC", 5.0), ("BKL", 5.5), ("NV", 7.0)];

pub fn rank(table: &[(&str, f64); 7], class: LesionClass) -> f64 {
    table.iter().find(|(code, _)| *code == class.code()).unwrap().1
}

/// Linear scan for the present class with the smallest printed priority.
pub fn min_rank_oracle(table: &[(&str, f64); 7], counts: &[(LesionClass, u64)]) -> LesionClass {
    let mut best: Option<LesionClass> = None;
    for &(c, n) in counts {
        if n == 0 {
            continue;
        }
        if best.is_none_or(|b| rank(table, c) < rank(table, b)) {
            best = Some(c);
        }
    }
    best.unwrap()
}

/// Linear argmax scan; ties go to the smaller frequency priority.
pub fn argmax_oracle(counts: &[(LesionClass, u64)]) -> LesionClass {
    let mut best: Option<(LesionClass, u64)> = None;
    for &(c, n) in counts {
        if n == 0 {
            continue;
        }
        best = match best {
            None => Some((c, n)),
            Some((_, bn)) if n > bn => Some((c, n)),
            Some((b, bn)) if n == bn && rank(&FREQUENCY_RANK, c) < rank(&FREQUENCY_RANK, b) => Some((c, n)),
            keep => keep,
        };
    }
    best.unwrap().0
}

pub fn decision_oracle(strategy: Strategy, counts: &[(LesionClass, u64)]) -> LesionClass {
    if counts.iter().all(|(_, n)| *n == 0) {
        return LesionClass::Nv;
    }
    match strategy {
        Strategy::PixelMajority => argmax_oracle(counts),
        Strategy::FrequencyPriority => min_rank_oracle(&FREQUENCY_RANK, counts),
        Strategy::MalignancyPriority => min_rank_oracle(&MALIGNANCY_RANK, counts),
    }
}

/// The 127 nonempty subsets of the seven classes.
pub fn class_subsets() -> impl Iterator<Item = Vec<LesionClass>> {
    (1u32..128).map(|bits| {
        LesionClass::ALL
            .iter()
            .enumerate()
            .filter(|(i, _)| bits & (1 << i) != 0)
            .map(|(_, &c)| c)
            .collect()
    })
}

/// Gray-World by hand: divide each channel by its arithmetic mean, then
/// rescale by the root-mean-square of the three means.
pub fn gray_world_oracle(pixels: &[[f64; 3]]) -> Vec<[f64; 3]> {
    let n = pixels.len() as f64;
    let mut means = [0.0; 3];
    for px in pixels {
        for c in 0..3 {
            means[c] += px[c];
        }
    }
    for m in &mut means {
        *m /= n;
    }
    let scale = ((means[0].powi(2) + means[1].powi(2) + means[2].powi(2)) / 3.0).sqrt();
    pixels.iter().map(|px| [0, 1, 2].map(|c| px[c] / means[c] * scale)).collect()
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

/// Mean of diag/row over nonempty rows, written out longhand.
pub fn recall_oracle(cells: &[[u64; NUM_CLASSES]; NUM_CLASSES]) -> Option<f64> {
    let mut sum = 0.0;
    let mut n = 0;
    for (i, row) in cells.iter().enumerate() {
        let mut total = 0u64;
        for v in row {
            total += v;
        }
        if total > 0 {
            sum += row[i] as f64 / total as f64;
            n += 1;
        }
    }
    (n > 0).then(|| sum / n as f64)
}
