//! Lightness-order error and MSE/PSNR.
//!
//! LOE compares the relative lightness order of every pixel pair between an
//! original and an enhanced image. Lightness is the per-pixel channel
//! maximum, both images are first subsampled to about `down_to` columns, and
//! the result is the fraction of ordered pixel pairs `(x, y)` for which
//! `[L(x) >= L(y)]` differs between the two images. A value of 0 means the
//! ordering is fully preserved.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::retinex::{rgb_to_hsv_v, PlanarImage};

pub const DEFAULT_LOE_COLUMNS: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LoeResult {
    pub value: f64,
}

fn check_same_size(a: &PlanarImage, b: &PlanarImage) -> Result<()> {
    if a.height() != b.height() || a.width() != b.width() {
        return Err(Error::InvalidParameter(format!(
            "image sizes differ: {}x{} vs {}x{}",
            a.width(),
            a.height(),
            b.width(),
            b.height()
        )));
    }
    Ok(())
}

/// Nearest-neighbour subsampling of the lightness map to at most `down_to`
/// columns, keeping the aspect ratio.
pub fn subsampled_lightness(img: &PlanarImage, down_to: usize) -> Vec<f64> {
    let light = rgb_to_hsv_v(img);
    let (h, w) = (img.height(), img.width());
    let new_w = w.min(down_to).max(1);
    let new_h = ((h as f64 * new_w as f64 / w as f64).round() as usize).clamp(1, h);
    let mut out = Vec::with_capacity(new_w * new_h);
    for i in 0..new_h {
        let sy = ((i as f64 + 0.5) * h as f64 / new_h as f64) as usize;
        for j in 0..new_w {
            let sx = ((j as f64 + 0.5) * w as f64 / new_w as f64) as usize;
            out.push(light.get(0, sy.min(h - 1), sx.min(w - 1)));
        }
    }
    out
}

/// Fraction of ordered pairs whose `>=` relation differs between `a` and `b`.
pub fn order_error_rate(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let m = a.len();
    if m == 0 {
        return 0.0;
    }
    let flips: usize = (0..m)
        .into_par_iter()
        .map(|x| {
            let (ax, bx) = (a[x], b[x]);
            a.iter()
                .zip(b)
                .filter(|&(&ay, &by)| (ax >= ay) != (bx >= by))
                .count()
        })
        .sum();
    flips as f64 / (m as f64 * m as f64)
}

pub fn loe(original: &PlanarImage, enhanced: &PlanarImage, down_to: usize) -> Result<LoeResult> {
    check_same_size(original, enhanced)?;
    if down_to < 2 {
        return Err(Error::InvalidParameter(format!(
            "down_to must be >= 2, got {down_to}"
        )));
    }
    let a = subsampled_lightness(original, down_to);
    let b = subsampled_lightness(enhanced, down_to);
    Ok(LoeResult {
        value: order_error_rate(&a, &b),
    })
}

/// `(MSE, PSNR)` over all samples for `[0, 1]` data. PSNR is `+∞` when the images match.
pub fn mse_psnr(a: &PlanarImage, b: &PlanarImage) -> Result<(f64, f64)> {
    if !a.same_shape(b) {
        check_same_size(a, b)?;
        return Err(Error::DimensionMismatch {
            context: "mse channels",
            expected: a.channels(),
            found: b.channels(),
        });
    }
    let n = a.data().len();
    if n == 0 {
        return Err(Error::InvalidParameter("empty image".into()));
    }
    let mse = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        / n as f64;
    let psnr = if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (1.0 / mse).log10()
    };
    Ok((mse, psnr))
}

/// No-reference quality metrics known to the report.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QualityMetric {
    Loe,
    /// Minkowski-distance based metric. Not implemented.
    Mdm,
}

impl QualityMetric {
    pub fn from_name(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "loe" => Some(Self::Loe),
            "mdm" => Some(Self::Mdm),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Loe => "loe",
            Self::Mdm => "mdm",
        }
    }

    pub fn evaluate(self, original: &PlanarImage, enhanced: &PlanarImage) -> Result<f64> {
        match self {
            Self::Loe => Ok(loe(original, enhanced, DEFAULT_LOE_COLUMNS)?.value),
            Self::Mdm => Err(Error::MetricUnavailable("mdm")),
        }
    }
}
