//! Count single, empty and multi-class masks in a synthetic batch.
//!
//! cargo run --example detection_census

use lesiondx::synth::{generate, SynthConfig};
use lesiondx::{detection_census, evaluation::pixel_totals};

fn main() {
    let samples = generate(&SynthConfig { count: 40, seed: 9, ..Default::default() });
    let masks: Vec<_> = samples.iter().map(|s| &s.labels).collect();
    let census = detection_census(masks.iter().copied());
    println!("single={} none={} multiple={}", census.single, census.none, census.multiple);
    let pixels = pixel_totals(masks.iter().copied());
    for (class, n) in lesiondx::LesionClass::ALL.iter().zip(pixels.counts()) {
        println!("{:<5} {n}", class.code());
    }
}
