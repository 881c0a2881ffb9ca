//! Normalized multi-class accuracy against plain accuracy on an imbalanced
//! set, where always answering NV looks good by the plain measure.
//!
//! cargo run --example balanced_accuracy

use lesiondx::evaluation::{normalized_multiclass_accuracy_with, EvaluationReport};
use lesiondx::{AbsentMode, ConfusionMatrix, LesionClass};

fn main() -> lesiondx::Result<()> {
    let support = [(LesionClass::Nv, 90), (LesionClass::Mel, 6), (LesionClass::Bcc, 4)];
    let mut cm = ConfusionMatrix::new();
    for (class, n) in support {
        for _ in 0..n {
            cm.add(class, LesionClass::Nv);
        }
    }
    let report = EvaluationReport::new(&cm, AbsentMode::Exclude)?;
    println!("{}", report.to_text());
    println!("absent rows as 0: {:.4}", normalized_multiclass_accuracy_with(&cm, AbsentMode::Zero)?);
    Ok(())
}
