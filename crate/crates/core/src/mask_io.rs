//! Paletted label-mask codec (Pascal-VOC convention) and ground-truth
//! synthesis from binary lesion masks.
//!
//! Masks are stored as indexed-color PNG, bit depth 8, with the 256-entry VOC
//! colormap as palette. Pixel bytes are the label values themselves, so a
//! mask survives any viewer or converter that preserves indices.

use std::io::Cursor;

use crate::class::LesionClass;
use crate::error::{Error, Result};
use crate::raster::{LabelMask, RgbImage};

const PNG_SIGNATURE: [u8; 8] = [0x89, b'P', b'N', b'G', b'\r', b'\n', 0x1a, b'\n'];

/// Highest label a decoded mask may carry.
pub const MAX_LABEL: u8 = 7;

/// Default luminance threshold for [`binarize_mask`].
pub const DEFAULT_THRESHOLD: u8 = 128;

/// The 256-entry VOC colormap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VocPalette {
    entries: [[u8; 3]; 256],
}

impl VocPalette {
    pub fn entries(&self) -> &[[u8; 3]; 256] {
        &self.entries
    }

    pub fn get(&self, index: u8) -> [u8; 3] {
        self.entries[index as usize]
    }

    /// Packed `RGBRGB...` bytes, as stored in a PLTE chunk.
    pub fn to_plte(&self) -> Vec<u8> {
        self.entries.iter().flatten().copied().collect()
    }

    /// Index `<= MAX_LABEL` whose color is exactly `rgb`.
    pub fn label_for_color(&self, rgb: [u8; 3]) -> Option<u8> {
        (0..=MAX_LABEL).find(|&i| self.entries[i as usize] == rgb)
    }
}

/// Spreads the bits of each index over R, G and B, most significant bit
/// first: bit `3k` goes to R bit `7-k`, bit `3k+1` to G, bit `3k+2` to B.
pub fn voc_palette() -> VocPalette {
    let mut entries = [[0u8; 3]; 256];
    for (i, entry) in entries.iter_mut().enumerate() {
        let mut c = i;
        for k in 0..8 {
            for (ch, value) in entry.iter_mut().enumerate() {
                *value |= (((c >> ch) & 1) as u8) << (7 - k);
            }
            c >>= 3;
        }
    }
    VocPalette { entries }
}

/// Foreground/background raster.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryMask {
    width: u32,
    height: u32,
    foreground: Vec<bool>,
}

impl BinaryMask {
    pub fn new(width: u32, height: u32, foreground: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 || width as usize * height as usize != foreground.len() {
            return Err(Error::InvalidDimensions { width, height, len: foreground.len() });
        }
        Ok(Self { width, height, foreground })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn foreground(&self) -> &[bool] {
        &self.foreground
    }

    pub fn foreground_count(&self) -> usize {
        self.foreground.iter().filter(|&&f| f).count()
    }
}

/// Foreground iff the rounded mean of r, g and b is at least `threshold`.
pub fn binarize_mask(img: &RgbImage, threshold: u8) -> BinaryMask {
    let foreground = img
        .pixels()
        .iter()
        .map(|&[r, g, b]| {
            let sum = u32::from(r) + u32::from(g) + u32::from(b);
            // sum / 3 has fractional part 0, 1/3 or 2/3, so this rounds to nearest.
            (sum + 1) / 3 >= u32::from(threshold)
        })
        .collect();
    BinaryMask { width: img.width(), height: img.height(), foreground }
}

/// Foreground pixels get the class label, background stays 0.
pub fn synthesize_ground_truth(mask: &BinaryMask, class: LesionClass) -> LabelMask {
    let label = class.label_index();
    let labels = mask.foreground.iter().map(|&f| if f { label } else { 0 }).collect();
    LabelMask::new(mask.width, mask.height, labels).expect("dimensions checked at construction")
}

pub fn encode_mask(mask: &LabelMask) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    {
        let mut encoder = png::Encoder::new(&mut out, mask.width(), mask.height());
        encoder.set_color(png::ColorType::Indexed);
        encoder.set_depth(png::BitDepth::Eight);
        encoder.set_palette(voc_palette().to_plte());
        let mut writer = encoder.write_header().map_err(|e| Error::Png(e.to_string()))?;
        writer.write_image_data(mask.labels()).map_err(|e| Error::Png(e.to_string()))?;
        writer.finish().map_err(|e| Error::Png(e.to_string()))?;
    }
    Ok(out)
}

/// Decodes an indexed PNG to its index raster. Truecolor and grayscale PNGs
/// are accepted when every pixel is exactly one of the VOC colors for labels
/// `0..=7`.
pub fn decode_mask(bytes: &[u8]) -> Result<LabelMask> {
    if !bytes.starts_with(&PNG_SIGNATURE) {
        return Err(Error::NotPng);
    }
    let mut decoder = png::Decoder::new(Cursor::new(bytes));
    decoder.set_transformations(png::Transformations::IDENTITY);
    let mut reader = decoder.read_info().map_err(|e| Error::Png(e.to_string()))?;
    if reader.info().color_type != png::ColorType::Indexed {
        return decode_truecolor(bytes);
    }
    let size = reader
        .output_buffer_size()
        .ok_or_else(|| Error::Png("image too large".into()))?;
    let mut buf = vec![0; size];
    let frame = reader.next_frame(&mut buf).map_err(|e| Error::Png(e.to_string()))?;
    let (width, height) = (frame.width, frame.height);
    let depth = frame.bit_depth as usize;

    let mut labels = Vec::with_capacity(width as usize * height as usize);
    for (y, row) in buf.chunks(frame.line_size).take(height as usize).enumerate() {
        for x in 0..width as usize {
            let index = match depth {
                8 => row[x],
                1 | 2 | 4 => {
                    let bit = x * depth;
                    let shift = 8 - depth - bit % 8;
                    (row[bit / 8] >> shift) & ((1 << depth) - 1) as u8
                }
                _ => return Err(Error::Png(format!("unsupported palette bit depth {depth}"))),
            };
            if index > MAX_LABEL {
                return Err(Error::LabelOutOfRange { index, x: x as u32, y: y as u32 });
            }
            labels.push(index);
        }
    }
    LabelMask::new(width, height, labels)
}

fn decode_truecolor(bytes: &[u8]) -> Result<LabelMask> {
    let img = image::load_from_memory_with_format(bytes, image::ImageFormat::Png)?.to_rgb8();
    let palette = voc_palette();
    let mut labels = Vec::with_capacity(img.width() as usize * img.height() as usize);
    for (x, y, px) in img.enumerate_pixels() {
        let [r, g, b] = px.0;
        let label = palette
            .label_for_color(px.0)
            .ok_or(Error::UnmappableColor { r, g, b, x, y })?;
        labels.push(label);
    }
    LabelMask::new(img.width(), img.height(), labels)
}

/// Reads an image file of any supported format as 8-bit RGB.
pub fn load_rgb(path: &std::path::Path) -> Result<RgbImage> {
    let img = image::open(path)?.to_rgb8();
    RgbImage::from_buffer(&img)
}
