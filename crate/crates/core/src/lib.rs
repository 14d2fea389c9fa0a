//! Joint denoising and contrast enhancement of low-light images.
//!
//! Every `n x n` patch of the intensity channel is split into an illumination
//! and a reflectance component, `y = l ⊙ r + z`. The reflectance is
//! regularized with a signal-dependent graph Laplacian per patch row and
//! column, the illumination with a gradient-graph Laplacian that leaves
//! planar rows and columns unpenalized. Both subproblems are sparse SPD
//! linear systems, solved alternately with Jacobi-scaled conjugate gradient.
//! The enhanced patch is `l^γ ⊙ r`.
//!
//! ```no_run
//! use gsp_retinex::cli::{load_image, save_png};
//! use gsp_retinex::retinex::{enhance_image, RetinexParams};
//!
//! let img = load_image("night.png")?;
//! let img = img.crop(img.height() / 5 * 5, img.width() / 5 * 5)?;
//! let (out, report) = enhance_image(&img, &RetinexParams::default())?;
//! println!("{} CG iterations", report.total_cg_iterations());
//! save_png(&out, "night_enhanced.png")?;
//! # Ok::<(), gsp_retinex::Error>(())
//! ```

pub mod cli;
mod error;
pub mod graphs;
pub mod linalg;
pub mod metrics;
pub mod retinex;
pub mod rng;

pub use error::{Error, Result};
