//! Binary PPM (P6, 8-bit) images as vector fields in G(4,0).

use image::{DynamicImage, ImageFormat};

use gft_core::{BladeIndex, Grid, Multivector, SampledField, Signature};

#[derive(Debug, Clone, PartialEq)]
pub struct PpmError(pub String);

impl std::fmt::Display for PpmError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PPM: {}", self.0)
    }
}

impl std::error::Error for PpmError {}

/// Decoded 8-bit RGB image, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RgbImage {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<[u8; 3]>,
}

pub fn decode(bytes: &[u8]) -> Result<RgbImage, PpmError> {
    if !bytes.starts_with(b"P6") {
        return Err(PpmError("only binary P6 files are supported".into()));
    }
    let img = image::load_from_memory_with_format(bytes, ImageFormat::Pnm).map_err(|e| PpmError(e.to_string()))?;
    let rgb = match img {
        DynamicImage::ImageRgb8(rgb) => rgb,
        _ => return Err(PpmError("expected 8-bit samples (maxval at most 255)".into())),
    };
    let (width, height) = (rgb.width() as usize, rgb.height() as usize);
    let pixels = rgb.pixels().map(|p| p.0).collect();
    Ok(RgbImage { width, height, pixels })
}

pub fn encode(img: &RgbImage) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", img.width, img.height).into_bytes();
    for p in &img.pixels {
        out.extend_from_slice(p);
    }
    out
}

/// Pixel `(r, g, b)` at row `i`, column `j` becomes `(r e1 + g e2 + b e3) / 255`
/// at `x = (i, j)` on a unit grid.
pub fn to_field(img: &RgbImage) -> Result<SampledField, PpmError> {
    let sig = Signature::euclidean(4).expect("G(4,0)");
    let grid =
        Grid::new(vec![img.height, img.width], vec![0.0, 0.0], vec![1.0, 1.0]).map_err(|e| PpmError(e.to_string()))?;
    let data = img
        .pixels
        .iter()
        .map(|px| {
            let mut v = Multivector::zero(sig);
            for (k, &c) in px.iter().enumerate() {
                v.set(BladeIndex::vector(k + 1), f64::from(c) / 255.0);
            }
            v
        })
        .collect();
    SampledField::new(sig, grid, data).map_err(|e| PpmError(e.to_string()))
}
