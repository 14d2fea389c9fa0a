use std::path::Path;

use image::{DynamicImage, GrayImage, ImageFormat, ImageReader, RgbImage};

use crate::error::{Error, Result};
use crate::retinex::PlanarImage;

fn planar_from<P, const C: usize>(
    w: u32,
    h: u32,
    raw: &[P],
    stride: usize,
    scale: f64,
) -> Result<PlanarImage>
where
    P: Copy + Into<f64>,
{
    let (w, h) = (w as usize, h as usize);
    let n = w * h;
    let mut data = vec![0.0; n * C];
    for (k, px) in raw.chunks_exact(stride).enumerate().take(n) {
        for c in 0..C {
            data[c * n + k] = px[c].into() / scale;
        }
    }
    PlanarImage::from_data(h, w, C, data)
}

/// Loads a PNG or binary PPM/PGM. 8-bit samples map to `v / 255`, 16-bit to
/// `v / 65535`; alpha is dropped.
pub fn load_image(path: impl AsRef<Path>) -> Result<PlanarImage> {
    let path = path.as_ref();
    let reader = ImageReader::open(path)?.with_guessed_format()?;
    match reader.format() {
        Some(ImageFormat::Png) | Some(ImageFormat::Pnm) => {}
        other => {
            return Err(Error::UnsupportedFormat {
                path: path.to_path_buf(),
                format: other.map_or_else(|| "unknown".to_string(), |f| format!("{f:?}")),
            })
        }
    }
    let img = reader.decode()?;
    let (w, h) = (img.width(), img.height());
    match img {
        DynamicImage::ImageLuma8(b) => planar_from::<u8, 1>(w, h, b.as_raw(), 1, 255.0),
        DynamicImage::ImageLumaA8(b) => planar_from::<u8, 1>(w, h, b.as_raw(), 2, 255.0),
        DynamicImage::ImageRgb8(b) => planar_from::<u8, 3>(w, h, b.as_raw(), 3, 255.0),
        DynamicImage::ImageRgba8(b) => planar_from::<u8, 3>(w, h, b.as_raw(), 4, 255.0),
        DynamicImage::ImageLuma16(b) => planar_from::<u16, 1>(w, h, b.as_raw(), 1, 65535.0),
        DynamicImage::ImageLumaA16(b) => planar_from::<u16, 1>(w, h, b.as_raw(), 2, 65535.0),
        DynamicImage::ImageRgb16(b) => planar_from::<u16, 3>(w, h, b.as_raw(), 3, 65535.0),
        DynamicImage::ImageRgba16(b) => planar_from::<u16, 3>(w, h, b.as_raw(), 4, 65535.0),
        other => {
            let rgb = other.to_rgb32f();
            planar_from::<f32, 3>(w, h, rgb.as_raw(), 3, 1.0)
        }
    }
}

fn quantize(v: f64) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0).round() as u8
}

/// Writes an 8-bit PNG (gray or RGB).
pub fn save_png(img: &PlanarImage, path: impl AsRef<Path>) -> Result<()> {
    let (w, h) = (img.width() as u32, img.height() as u32);
    let n = img.pixel_count();
    match img.channels() {
        1 => {
            let buf: Vec<u8> = img.data().iter().map(|&v| quantize(v)).collect();
            GrayImage::from_raw(w, h, buf)
                .expect("buffer sized from image")
                .save_with_format(path, ImageFormat::Png)?;
        }
        _ => {
            let mut buf = Vec::with_capacity(3 * n);
            for k in 0..n {
                for c in 0..3 {
                    buf.push(quantize(img.plane(c)[k]));
                }
            }
            RgbImage::from_raw(w, h, buf)
                .expect("buffer sized from image")
                .save_with_format(path, ImageFormat::Png)?;
        }
    }
    Ok(())
}
