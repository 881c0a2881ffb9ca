//! Row-major rasters: 8-bit RGB images, real-valued RGB working images and
//! label masks.

use crate::class::{ClassHistogram, LesionClass};
use crate::error::{Error, Result};

fn check_dims(width: u32, height: u32, len: usize) -> Result<()> {
    if width == 0 || height == 0 || (width as usize).checked_mul(height as usize) != Some(len) {
        return Err(Error::InvalidDimensions { width, height, len });
    }
    Ok(())
}

/// 8-bit RGB image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RgbImage {
    width: u32,
    height: u32,
    pixels: Vec<[u8; 3]>,
}

impl RgbImage {
    pub fn new(width: u32, height: u32, pixels: Vec<[u8; 3]>) -> Result<Self> {
        check_dims(width, height, pixels.len())?;
        Ok(Self { width, height, pixels })
    }

    pub fn filled(width: u32, height: u32, rgb: [u8; 3]) -> Result<Self> {
        Self::new(width, height, vec![rgb; width as usize * height as usize])
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixels(&self) -> &[[u8; 3]] {
        &self.pixels
    }

    pub fn get(&self, x: u32, y: u32) -> [u8; 3] {
        self.pixels[y as usize * self.width as usize + x as usize]
    }

    pub fn to_linear(&self) -> LinearRgbImage {
        LinearRgbImage {
            width: self.width,
            height: self.height,
            pixels: self.pixels.iter().map(|p| p.map(f64::from)).collect(),
        }
    }

    /// Converts from an `image` buffer.
    pub fn from_buffer(buf: &image::RgbImage) -> Result<Self> {
        let pixels = buf.pixels().map(|p| p.0).collect();
        Self::new(buf.width(), buf.height(), pixels)
    }

    pub fn to_buffer(&self) -> image::RgbImage {
        let raw = self.pixels.iter().flatten().copied().collect();
        image::RgbImage::from_raw(self.width, self.height, raw).expect("dimensions checked at construction")
    }
}

/// Real-valued RGB image used for color arithmetic. Channels are finite and
/// non-negative.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearRgbImage {
    width: u32,
    height: u32,
    pixels: Vec<[f64; 3]>,
}

impl LinearRgbImage {
    pub fn new(width: u32, height: u32, pixels: Vec<[f64; 3]>) -> Result<Self> {
        check_dims(width, height, pixels.len())?;
        for (index, px) in pixels.iter().enumerate() {
            if let Some(&value) = px.iter().find(|v| !v.is_finite() || **v < 0.0) {
                return Err(Error::InvalidChannelValue { value, index });
            }
        }
        Ok(Self { width, height, pixels })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixels(&self) -> &[[f64; 3]] {
        &self.pixels
    }

    /// Multiplies each channel by its gain.
    pub fn scaled(&self, gains: [f64; 3]) -> LinearRgbImage {
        let pixels = self
            .pixels
            .iter()
            .map(|p| [p[0] * gains[0], p[1] * gains[1], p[2] * gains[2]])
            .collect();
        LinearRgbImage { width: self.width, height: self.height, pixels }
    }

    /// Rounds half away from zero and clips to `[0, 255]`.
    pub fn quantize(&self) -> RgbImage {
        let pixels = self
            .pixels
            .iter()
            .map(|p| p.map(|v| v.round().clamp(0.0, 255.0) as u8))
            .collect();
        RgbImage { width: self.width, height: self.height, pixels }
    }
}

/// Per-pixel class indices: 0 is background, `1..=7` are
/// [`LesionClass::label_index`] values.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabelMask {
    width: u32,
    height: u32,
    labels: Vec<u8>,
}

impl LabelMask {
    pub fn new(width: u32, height: u32, labels: Vec<u8>) -> Result<Self> {
        check_dims(width, height, labels.len())?;
        if let Some((index, &label)) = labels.iter().enumerate().find(|(_, &l)| l > 7) {
            return Err(Error::InvalidLabel { label, index });
        }
        Ok(Self { width, height, labels })
    }

    pub fn background(width: u32, height: u32) -> Result<Self> {
        Self::new(width, height, vec![0; width as usize * height as usize])
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn get(&self, x: u32, y: u32) -> u8 {
        self.labels[y as usize * self.width as usize + x as usize]
    }

    pub(crate) fn set(&mut self, x: u32, y: u32, label: u8) {
        debug_assert!(label <= 7);
        let w = self.width as usize;
        self.labels[y as usize * w + x as usize] = label;
    }

    /// Pixel count per lesion class; background pixels are not counted.
    pub fn class_histogram(&self) -> ClassHistogram {
        let mut raw = [0u64; 8];
        for &l in &self.labels {
            raw[l as usize] += 1;
        }
        let mut hist = ClassHistogram::new();
        for class in LesionClass::ALL {
            hist.add(class, raw[class.label_index() as usize]);
        }
        hist
    }

    /// Nearest-neighbor resampling; never invents labels.
    pub fn resize_nearest(&self, width: u32, height: u32) -> Result<LabelMask> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidDimensions { width, height, len: 0 });
        }
        let xs = nearest_indices(self.width, width);
        let ys = nearest_indices(self.height, height);
        let mut labels = Vec::with_capacity(width as usize * height as usize);
        for &sy in &ys {
            for &sx in &xs {
                labels.push(self.get(sx, sy));
            }
        }
        Ok(LabelMask { width, height, labels })
    }
}

/// Source index for each destination index, sampling at pixel centers.
fn nearest_indices(src: u32, dst: u32) -> Vec<u32> {
    (0..dst)
        .map(|d| {
            let s = ((u64::from(d) * 2 + 1) * u64::from(src)) / (u64::from(dst) * 2);
            (s as u32).min(src - 1)
        })
        .collect()
}
