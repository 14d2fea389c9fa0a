use crate::error::{Error, Result};
use crate::retinex::PlanarImage;
use crate::rng::SplitMix64;

/// Adds i.i.d. `N(0, sigma²)` noise to every sample and clamps to `[0, 1]`.
///
/// Samples are visited in storage order (channel, row, column) and each takes
/// one deviate from [`SplitMix64::next_gaussian`] seeded with `seed`.
pub fn add_noise(img: &PlanarImage, sigma: f64, seed: u64) -> Result<PlanarImage> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "noise sigma must be >= 0, got {sigma}"
        )));
    }
    if sigma == 0.0 {
        return Ok(img.clone());
    }
    let mut rng = SplitMix64::new(seed);
    let data = img
        .data()
        .iter()
        .map(|v| v + sigma * rng.next_gaussian())
        .collect();
    PlanarImage::from_data(img.height(), img.width(), img.channels(), data)
}
