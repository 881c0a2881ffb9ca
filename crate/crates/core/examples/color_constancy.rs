//! Shades-of-Gray correction on a color-cast image, for several norm orders.
//!
//! cargo run --example color_constancy

use lesiondx::{correct_rgb_image, estimate_illuminant, NormOrder, RgbImage};

fn main() -> lesiondx::Result<()> {
    // A gray ramp under a warm light.
    let cast = [1.25, 1.0, 0.7];
    let px = (0..64u32)
        .map(|i| {
            let v = 40.0 + 2.5 * i as f64;
            cast.map(|k| (v * k).round().min(255.0) as u8)
        })
        .collect();
    let img = RgbImage::new(8, 8, px)?;

    for p in [NormOrder::Finite(1.0), NormOrder::Finite(6.0), NormOrder::Infinity] {
        let est = estimate_illuminant(&img.to_linear(), p)?;
        let out = correct_rgb_image(&img, p)?;
        println!("p={p:<4} illuminant={:.1?} gains={:.3?} corner={:?}", est.e, est.gains(), out.get(7, 7));
    }
    Ok(())
}
