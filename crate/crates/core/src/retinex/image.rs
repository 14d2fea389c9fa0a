use crate::error::{check_len, Error, Result};

/// Floating-point image with samples in `[0, 1]`.
///
/// Storage is planar: channel `c` occupies `data[c*h*w .. (c+1)*h*w]`, each
/// plane row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanarImage {
    height: usize,
    width: usize,
    channels: usize,
    data: Vec<f64>,
}

impl PlanarImage {
    pub fn new(height: usize, width: usize, channels: usize) -> Result<Self> {
        Self::from_data(
            height,
            width,
            channels,
            vec![0.0; height * width * channels],
        )
    }

    /// Wraps planar data; non-finite samples are rejected, the rest clamped to `[0, 1]`.
    pub fn from_data(height: usize, width: usize, channels: usize, data: Vec<f64>) -> Result<Self> {
        if channels != 1 && channels != 3 {
            return Err(Error::InvalidParameter(format!(
                "images have 1 or 3 channels, got {channels}"
            )));
        }
        check_len("image data", height * width * channels, data.len())?;
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "image contains non-finite samples".into(),
            ));
        }
        let mut img = Self {
            height,
            width,
            channels,
            data,
        };
        img.clamp();
        Ok(img)
    }

    pub fn gray(height: usize, width: usize, data: Vec<f64>) -> Result<Self> {
        Self::from_data(height, width, 1, data)
    }

    pub fn from_fn(
        height: usize,
        width: usize,
        channels: usize,
        f: impl Fn(usize, usize, usize) -> f64,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(height * width * channels);
        for c in 0..channels {
            for y in 0..height {
                for x in 0..width {
                    data.push(f(c, y, x));
                }
            }
        }
        Self::from_data(height, width, channels, data)
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn pixel_count(&self) -> usize {
        self.height * self.width
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn plane(&self, c: usize) -> &[f64] {
        let n = self.pixel_count();
        &self.data[c * n..(c + 1) * n]
    }

    pub fn plane_mut(&mut self, c: usize) -> &mut [f64] {
        let n = self.pixel_count();
        &mut self.data[c * n..(c + 1) * n]
    }

    pub fn get(&self, c: usize, y: usize, x: usize) -> f64 {
        self.data[(c * self.height + y) * self.width + x]
    }

    pub fn set(&mut self, c: usize, y: usize, x: usize, v: f64) {
        self.data[(c * self.height + y) * self.width + x] = v;
    }

    pub fn clamp(&mut self) {
        self.data.iter_mut().for_each(|v| *v = v.clamp(0.0, 1.0));
    }

    /// Top-left `height x width` sub-image.
    pub fn crop(&self, height: usize, width: usize) -> Result<Self> {
        if height > self.height || width > self.width {
            return Err(Error::InvalidParameter(format!(
                "crop {width}x{height} exceeds image {}x{}",
                self.width, self.height
            )));
        }
        Self::from_fn(height, width, self.channels, |c, y, x| self.get(c, y, x))
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.height == other.height && self.width == other.width && self.channels == other.channels
    }
}

/// HSV value channel, `max(R, G, B)`. Single-channel input is returned as is.
pub fn rgb_to_hsv_v(img: &PlanarImage) -> PlanarImage {
    if img.channels == 1 {
        return img.clone();
    }
    let n = img.pixel_count();
    let data = (0..n)
        .map(|i| img.data[i].max(img.data[n + i]).max(img.data[2 * n + i]))
        .collect();
    PlanarImage {
        height: img.height,
        width: img.width,
        channels: 1,
        data,
    }
}

/// Normalized 1D Gaussian taps for offsets `-radius..=radius`, `radius = ceil(3σ)`.
pub fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let radius = (3.0 * sigma).ceil() as i64;
    let taps: Vec<f64> = (-radius..=radius)
        .map(|k| (-((k * k) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = taps.iter().sum();
    taps.into_iter().map(|t| t / sum).collect()
}

/// Separable Gaussian blur with replicated edges, applied to every channel.
pub fn gaussian_blur(img: &PlanarImage, sigma: f64) -> Result<PlanarImage> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "blur sigma must be > 0, got {sigma}"
        )));
    }
    let kernel = gaussian_kernel(sigma);
    let radius = (kernel.len() / 2) as isize;
    let (h, w) = (img.height, img.width);
    let mut out = img.clone();
    let mut tmp = vec![0.0; h * w];

    for c in 0..img.channels {
        let src = img.plane(c);
        for y in 0..h {
            let row = &src[y * w..(y + 1) * w];
            for x in 0..w {
                tmp[y * w + x] = kernel
                    .iter()
                    .enumerate()
                    .map(|(k, t)| {
                        let xx = (x as isize + k as isize - radius).clamp(0, w as isize - 1);
                        t * row[xx as usize]
                    })
                    .sum();
            }
        }
        let dst = out.plane_mut(c);
        for y in 0..h {
            for x in 0..w {
                dst[y * w + x] = kernel
                    .iter()
                    .enumerate()
                    .map(|(k, t)| {
                        let yy = (y as isize + k as isize - radius).clamp(0, h as isize - 1);
                        t * tmp[yy as usize * w + x]
                    })
                    .sum::<f64>()
                    .clamp(0.0, 1.0);
            }
        }
    }
    Ok(out)
}
