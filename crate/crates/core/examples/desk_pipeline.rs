//! Full desk-scale run through the library: synthesize a labelled set,
//! diagnose its masks with every strategy and score each against the truth.
//!
//! cargo run --example desk_pipeline

use std::fs::File;

use lesiondx::pipeline::{diagnose_dir, evaluate_rows, synth_to_dir};
use lesiondx::submission::read_truth;
use lesiondx::synth::{SampleKind, SynthConfig};
use lesiondx::{AbsentMode, Strategy};

fn main() -> lesiondx::Result<()> {
    let dir = tempfile::tempdir()?;
    let samples = synth_to_dir(&SynthConfig::default(), dir.path())?;
    let truth = read_truth(File::open(dir.path().join("truth.csv"))?)?;
    let (single, empty, two) = SynthConfig::default().split();
    println!("{} samples: {single} single, {empty} empty, {two} two-class", samples.len());

    for strategy in Strategy::ALL {
        let rows = diagnose_dir(&dir.path().join("masks"), strategy)?;
        let report = evaluate_rows(&rows, &truth, AbsentMode::Exclude)?;
        let wrong: Vec<_> = samples
            .iter()
            .zip(&rows)
            .filter(|(s, r)| r.confidences.one_hot_class() != Some(s.truth))
            .map(|(s, _)| s.kind)
            .collect();
        let on_two = wrong.iter().filter(|&&k| k == SampleKind::TwoClass).count();
        println!(
            "{strategy:<20} score={:.4} accuracy={:.4} misses={} ({} two-class)",
            report.normalized_multiclass_accuracy,
            report.accuracy,
            wrong.len(),
            on_two
        );
    }
    Ok(())
}
