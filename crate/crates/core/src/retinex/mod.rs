//! Retinex decomposition `y = l ⊙ r + z` solved patch by patch.
//!
//! The reflectance `r` is regularized with signal-dependent graph Laplacians
//! (favoring piecewise-constant rows and columns), the illumination `l` with
//! gradient-graph Laplacians (favoring piecewise-planar rows and columns).
//! The two quadratic problems are solved alternately with Jacobi-scaled CG and
//! the result is recomposed as `l^γ ⊙ r`.

mod enhance;
mod image;
mod params;
mod patch;
mod solve;

pub use enhance::{
    enhance_image, restore_color, EnhanceReport, KappaStats, PatchGrid, PatchOutcome, PatchRecord,
    CHROMA_GUARD,
};
pub use image::{gaussian_blur, gaussian_kernel, rgb_to_hsv_v, PlanarImage};
pub use params::{RetinexParams, CALIBRATION_NOISE_SIGMA};
pub use patch::{
    assemble_illumination_system, assemble_reflectance_system, col_selection, gamma_correct,
    illumination_gradient, illumination_objective, initialize, reflectance_gradient,
    reflectance_objective, row_selection, LineLaplacians, PatchSystem,
};
pub use solve::{solve_patch, solve_system, PatchSolution, SolveKind, SolveRecord};
