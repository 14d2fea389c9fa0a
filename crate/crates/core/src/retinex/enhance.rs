use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::retinex::image::{rgb_to_hsv_v, PlanarImage};
use crate::retinex::params::RetinexParams;
use crate::retinex::patch::{gamma_correct, initialize, PatchSystem};
use crate::retinex::solve::{solve_patch, PatchSolution, SolveRecord};

/// Below this input intensity a pixel's chroma is not trusted and the output
/// is written as neutral gray.
pub const CHROMA_GUARD: f64 = 1e-3;

/// Intensity image cut into non-overlapping `n x n` tiles, with the
/// whole-image initialization already computed.
#[derive(Clone, Debug)]
pub struct PatchGrid {
    n: usize,
    patch_rows: usize,
    patch_cols: usize,
    width: usize,
    y: Vec<f64>,
    l0: Vec<f64>,
    r0: Vec<f64>,
}

/// Result of processing one tile.
#[derive(Clone, Debug, PartialEq)]
pub struct PatchOutcome {
    pub row: usize,
    pub col: usize,
    pub solution: PatchSolution,
    /// Gamma-corrected intensity, row-major within the tile.
    pub enhanced: Vec<f64>,
}

impl PatchGrid {
    pub fn new(intensity: &PlanarImage, params: &RetinexParams) -> Result<Self> {
        params.validate()?;
        let n = params.patch_size;
        let (h, w) = (intensity.height(), intensity.width());
        if h == 0 || w == 0 || h % n != 0 || w % n != 0 {
            return Err(Error::NotDivisible {
                width: w,
                height: h,
                patch: n,
            });
        }
        let (l0, r0) = initialize(intensity, params)?;
        Ok(Self {
            n,
            patch_rows: h / n,
            patch_cols: w / n,
            width: w,
            y: intensity.data().to_vec(),
            l0,
            r0,
        })
    }

    pub fn patch_rows(&self) -> usize {
        self.patch_rows
    }

    pub fn patch_cols(&self) -> usize {
        self.patch_cols
    }

    pub fn patch_count(&self) -> usize {
        self.patch_rows * self.patch_cols
    }

    /// `(row, col)` of every tile in row-major order.
    pub fn tiles(&self) -> Vec<(usize, usize)> {
        (0..self.patch_rows)
            .flat_map(|r| (0..self.patch_cols).map(move |c| (r, c)))
            .collect()
    }

    fn pixel_indices(&self, row: usize, col: usize) -> impl Iterator<Item = usize> + '_ {
        let n = self.n;
        (0..n).flat_map(move |i| (0..n).map(move |j| (row * n + i) * self.width + col * n + j))
    }

    pub fn patch_system(&self, row: usize, col: usize, params: &RetinexParams) -> PatchSystem {
        let pick = |src: &[f64]| self.pixel_indices(row, col).map(|k| src[k]).collect();
        PatchSystem {
            n: self.n,
            y: pick(&self.y),
            l: pick(&self.l0),
            r: pick(&self.r0),
            mu_r: params.mu_r,
            mu_l: params.mu_l,
        }
    }

    /// Decomposes and gamma-corrects one tile. Errors carry the tile coordinates.
    pub fn solve(&self, row: usize, col: usize, params: &RetinexParams) -> Result<PatchOutcome> {
        let wrap = |e: Error| Error::Patch {
            row,
            col,
            source: Box::new(e),
        };
        let ps = self.patch_system(row, col, params);
        let solution = solve_patch(&ps, params).map_err(wrap)?;
        let enhanced = gamma_correct(&solution.l, &solution.r, params.gamma).map_err(wrap)?;
        Ok(PatchOutcome {
            row,
            col,
            solution,
            enhanced,
        })
    }

    /// Writes a tile's values into a full-size plane.
    pub fn scatter(&self, row: usize, col: usize, values: &[f64], plane: &mut [f64]) {
        for (k, v) in self.pixel_indices(row, col).zip(values) {
            plane[k] = *v;
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PatchRecord {
    pub row: usize,
    pub col: usize,
    pub outer_iterations: usize,
    pub converged: bool,
    pub solves: Vec<SolveRecord>,
}

impl PatchRecord {
    pub fn cg_iterations(&self) -> usize {
        self.solves.iter().map(|s| s.report.iterations).sum()
    }
}

impl From<&PatchOutcome> for PatchRecord {
    fn from(o: &PatchOutcome) -> Self {
        Self {
            row: o.row,
            col: o.col,
            outer_iterations: o.solution.outer_iterations,
            converged: o.solution.converged,
            solves: o.solution.solves.clone(),
        }
    }
}

/// Per-tile diagnostics of one [`enhance_image`] call, ordered by tile index.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct EnhanceReport {
    pub patches: Vec<PatchRecord>,
    /// Seconds.
    pub wall_time: f64,
}

/// Mean and max of a set of κ estimates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KappaStats {
    pub count: usize,
    pub mean: f64,
    pub max: f64,
}

impl EnhanceReport {
    pub fn solves(&self) -> impl Iterator<Item = &SolveRecord> {
        self.patches.iter().flat_map(|p| p.solves.iter())
    }

    pub fn total_cg_iterations(&self) -> usize {
        self.patches.iter().map(PatchRecord::cg_iterations).sum()
    }

    pub fn total_solves(&self) -> usize {
        self.patches.iter().map(|p| p.solves.len()).sum()
    }

    pub fn total_outer_iterations(&self) -> usize {
        self.patches.iter().map(|p| p.outer_iterations).sum()
    }

    pub fn unconverged_patches(&self) -> usize {
        self.patches.iter().filter(|p| !p.converged).count()
    }

    fn kappa_stats(&self, pick: impl Fn(&SolveRecord) -> Option<f64>) -> Option<KappaStats> {
        let values: Vec<f64> = self.solves().filter_map(pick).collect();
        if values.is_empty() {
            return None;
        }
        Some(KappaStats {
            count: values.len(),
            mean: values.iter().sum::<f64>() / values.len() as f64,
            max: values.iter().copied().fold(f64::MIN, f64::max),
        })
    }

    pub fn kappa_before(&self) -> Option<KappaStats> {
        self.kappa_stats(|s| s.report.kappa_before)
    }

    pub fn kappa_after(&self) -> Option<KappaStats> {
        self.kappa_stats(|s| s.report.kappa_after)
    }
}

/// Restores color by scaling each input channel with `x_out / x_in`.
pub fn restore_color(
    input: &PlanarImage,
    intensity_in: &[f64],
    intensity_out: &[f64],
) -> Result<PlanarImage> {
    let (h, w) = (input.height(), input.width());
    if input.channels() == 1 {
        return PlanarImage::gray(h, w, intensity_out.to_vec());
    }
    PlanarImage::from_fn(h, w, input.channels(), |c, y, x| {
        let k = y * w + x;
        let (xin, xout) = (intensity_in[k], intensity_out[k]);
        if xin <= CHROMA_GUARD {
            xout
        } else {
            input.get(c, y, x) * xout / xin
        }
    })
}

/// Denoises and brightens an image whose sides are multiples of `patch_size`.
///
/// Tiles run on the current rayon pool; the output does not depend on the
/// order in which they finish.
pub fn enhance_image(
    img: &PlanarImage,
    params: &RetinexParams,
) -> Result<(PlanarImage, EnhanceReport)> {
    let start = Instant::now();
    let intensity = rgb_to_hsv_v(img);
    let grid = PatchGrid::new(&intensity, params)?;

    let outcomes = grid
        .tiles()
        .into_par_iter()
        .map(|(r, c)| grid.solve(r, c, params))
        .collect::<Result<Vec<_>>>()?;

    let mut out = vec![0.0; intensity.pixel_count()];
    for o in &outcomes {
        grid.scatter(o.row, o.col, &o.enhanced, &mut out);
    }
    let image = restore_color(img, intensity.data(), &out)?;
    let report = EnhanceReport {
        patches: outcomes.iter().map(PatchRecord::from).collect(),
        wall_time: start.elapsed().as_secs_f64(),
    };
    Ok((image, report))
}
