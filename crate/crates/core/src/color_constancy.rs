//! Shades-of-Gray color constancy.
//!
//! The illuminant is estimated per channel as the Minkowski mean of order `p`
//! of the pixel values. `p = 1` reduces to Gray-World, `p = inf` to max-RGB.
//! Each channel is then divided by its illuminant component and rescaled so
//! that an achromatic illuminant leaves the image unchanged:
//!
//! ```text
//! gain_c = ||e||_2 / (sqrt(3) * e_c)
//! ```

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::raster::{LinearRgbImage, RgbImage};

const CHANNELS: [&str; 3] = ["red", "green", "blue"];

/// Order of the Minkowski mean.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormOrder {
    Finite(f64),
    Infinity,
}

impl NormOrder {
    pub fn finite(p: f64) -> Result<Self> {
        if p.is_finite() && p >= 1.0 {
            Ok(NormOrder::Finite(p))
        } else if p == f64::INFINITY {
            Ok(NormOrder::Infinity)
        } else {
            Err(Error::InvalidNormOrder(p))
        }
    }
}

impl Default for NormOrder {
    fn default() -> Self {
        NormOrder::Finite(6.0)
    }
}

impl fmt::Display for NormOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormOrder::Finite(p) => write!(f, "{p}"),
            NormOrder::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for NormOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
            return Ok(NormOrder::Infinity);
        }
        let p: f64 = s.parse().map_err(|_| Error::InvalidNormOrder(f64::NAN))?;
        NormOrder::finite(p)
    }
}

/// Estimated scene illuminant, one strictly positive component per channel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IlluminantEstimate {
    pub e: [f64; 3],
    pub norm_order: NormOrder,
}

impl IlluminantEstimate {
    /// Per-channel correction gains. Exactly 1.0 for an achromatic estimate.
    pub fn gains(&self) -> [f64; 3] {
        // Dividing by the largest component first keeps an achromatic
        // estimate at u = (1, 1, 1) so the gains come out as exactly 1.0.
        let max = self.e.iter().copied().fold(0.0, f64::max);
        let u = self.e.map(|c| c / max);
        let rms = ((u[0] * u[0] + u[1] * u[1] + u[2] * u[2]) / 3.0).sqrt();
        u.map(|c| rms / c)
    }

    /// The estimate scaled to unit Euclidean length.
    pub fn unit(&self) -> [f64; 3] {
        let norm = self.e.iter().map(|c| c * c).sum::<f64>().sqrt();
        self.e.map(|c| c / norm)
    }
}

pub fn estimate_illuminant(img: &LinearRgbImage, p: NormOrder) -> Result<IlluminantEstimate> {
    let pixels = img.pixels();
    let mut e = [0.0; 3];
    for (c, slot) in e.iter_mut().enumerate() {
        let max = pixels.iter().map(|px| px[c]).fold(0.0, f64::max);
        if max <= 0.0 {
            return Err(Error::DegenerateChannel(CHANNELS[c]));
        }
        *slot = match p {
            NormOrder::Infinity => max,
            NormOrder::Finite(p) => {
                // Normalizing by the channel max keeps x^p in range for large p.
                let mean = pixels.iter().map(|px| (px[c] / max).powf(p)).sum::<f64>() / pixels.len() as f64;
                max * mean.powf(1.0 / p)
            }
        };
    }
    Ok(IlluminantEstimate { e, norm_order: p })
}

/// Corrects a real-valued image. No clipping is applied.
pub fn apply_shades_of_gray(img: &LinearRgbImage, p: NormOrder) -> Result<LinearRgbImage> {
    let estimate = estimate_illuminant(img, p)?;
    Ok(img.scaled(estimate.gains()))
}

/// Corrects an 8-bit image: values are treated as linear, corrected, then
/// rounded half away from zero and clipped to `[0, 255]`.
pub fn correct_rgb_image(img: &RgbImage, p: NormOrder) -> Result<RgbImage> {
    Ok(apply_shades_of_gray(&img.to_linear(), p)?.quantize())
}
