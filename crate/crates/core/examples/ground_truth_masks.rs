//! Turn a binary lesion mask into a class-labelled ground-truth mask, write
//! it as an indexed PNG and read it back.
//!
//! cargo run --example ground_truth_masks

use lesiondx::mask_io::DEFAULT_THRESHOLD;
use lesiondx::{binarize_mask, decode_mask, encode_mask, synthesize_ground_truth, voc_palette, LesionClass, RgbImage};

fn main() -> lesiondx::Result<()> {
    // 12x8 segmentation image: white disc on black.
    let px = (0..12 * 8)
        .map(|i| {
            let (x, y) = ((i % 12) as f64 - 5.5, (i / 12) as f64 - 3.5);
            if x * x + y * y <= 9.0 { [255; 3] } else { [0; 3] }
        })
        .collect();
    let lesion = binarize_mask(&RgbImage::new(12, 8, px)?, DEFAULT_THRESHOLD);
    let gt = synthesize_ground_truth(&lesion, LesionClass::Bcc);

    let png = encode_mask(&gt)?;
    assert_eq!(decode_mask(&png)?, gt);
    println!("{} foreground pixels, {} PNG bytes", lesion.foreground_count(), png.len());
    for row in gt.labels().chunks(gt.width() as usize) {
        println!("  {}", row.iter().map(|l| l.to_string()).collect::<String>());
    }
    let label = LesionClass::Bcc.label_index();
    println!("label {label} is drawn as {:?}", voc_palette().get(label));
    Ok(())
}
