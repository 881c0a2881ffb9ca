//! Color-correct and resize a directory of images to the working size.
//!
//! cargo run --example preprocess

use lesiondx::pipeline::{preprocess_dir, synth_to_dir, PreprocessOptions};
use lesiondx::synth::SynthConfig;

fn main() -> lesiondx::Result<()> {
    let dir = tempfile::tempdir()?;
    synth_to_dir(&SynthConfig { count: 6, seed: 1, ..Default::default() }, dir.path())?;

    let opts = PreprocessOptions::default();
    let out = dir.path().join("preprocessed");
    let summary = preprocess_dir(&dir.path().join("images"), &out, &opts)?;
    for path in &summary.written {
        let (w, h) = image::image_dimensions(path)?;
        println!("{} {w}x{h}", path.file_name().unwrap().to_string_lossy());
    }
    println!("{} written, {} failed, p={}", summary.written.len(), summary.failed.len(), opts.p);
    Ok(())
}
