use crate::error::{Error, Result};
use crate::graphs::GraphParams;

/// Tuning for the alternating decomposition.
///
/// Defaults: `μ_r = 1`, `σ_r = 1`, `μ_l = 0.1`, `σ_l = 0.2`, CG tolerance
/// `1e-6`, 5x5 patches.
#[derive(Clone, Debug, PartialEq)]
pub struct RetinexParams {
    pub mu_r: f64,
    pub mu_l: f64,
    pub sigma_r: f64,
    pub sigma_l: f64,
    pub sigma_c: f64,
    pub neighborhood_radius: usize,
    pub gamma: f64,
    pub patch_size: usize,
    pub outer_iters: usize,
    /// Relative ∞-norm change of both components that ends the alternation.
    pub outer_tol: f64,
    pub cg_tol: f64,
    /// `None` means `10 n`.
    pub cg_max_iter: Option<usize>,
    pub l_floor: f64,
    pub r_floor: f64,
    pub r_cap: f64,
    /// Standard deviation of the blur that seeds the illumination.
    pub init_blur_sigma: f64,
    pub precondition: bool,
    /// Record κ of every system before and after Jacobi scaling (dense eigensolve per solve).
    pub estimate_condition: bool,
}

impl Default for RetinexParams {
    fn default() -> Self {
        Self {
            mu_r: 1.0,
            mu_l: 0.1,
            sigma_r: 1.0,
            sigma_l: 0.2,
            sigma_c: 1.0,
            neighborhood_radius: 2,
            gamma: 0.5,
            patch_size: 5,
            outer_iters: 10,
            outer_tol: 1e-3,
            cg_tol: 1e-6,
            cg_max_iter: None,
            l_floor: 1e-3,
            r_floor: 1e-3,
            r_cap: 10.0,
            init_blur_sigma: 5.0,
            precondition: true,
            estimate_condition: false,
        }
    }
}

/// Noise level the default `μ_r` and `μ_l` are tuned for.
pub const CALIBRATION_NOISE_SIGMA: f64 = 0.001;

impl RetinexParams {
    /// Scales `μ_r` and `μ_l` by `(sigma / 0.001)²`, never below 1.
    ///
    /// The regularization weights play the role of a noise variance in the
    /// fidelity/prior trade-off, so heavier noise calls for proportionally
    /// heavier smoothing. At the calibration level this is the identity.
    pub fn scaled_to_noise(mut self, sigma: f64) -> Self {
        let k = (sigma / CALIBRATION_NOISE_SIGMA).powi(2).max(1.0);
        if k.is_finite() {
            self.mu_r *= k;
            self.mu_l *= k;
        }
        self
    }

    pub fn graph_params(&self) -> GraphParams {
        GraphParams {
            sigma_r: self.sigma_r,
            sigma_l: self.sigma_l,
            sigma_c: self.sigma_c,
            neighborhood_radius: self.neighborhood_radius,
            prune_below: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return bad(format!("gamma must lie in (0, 1), got {}", self.gamma));
        }
        for (name, v) in [("mu_r", self.mu_r), ("mu_l", self.mu_l)] {
            if !(v >= 0.0 && v.is_finite()) {
                return bad(format!("{name} must be >= 0, got {v}"));
            }
        }
        for (name, v) in [
            ("outer_tol", self.outer_tol),
            ("cg_tol", self.cg_tol),
            ("l_floor", self.l_floor),
            ("r_floor", self.r_floor),
            ("init_blur_sigma", self.init_blur_sigma),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("{name} must be > 0, got {v}"));
            }
        }
        if self.l_floor >= 1.0 {
            return bad(format!("l_floor must be < 1, got {}", self.l_floor));
        }
        if self.r_cap.is_nan() || self.r_cap <= self.r_floor {
            return bad(format!(
                "r_cap ({}) must exceed r_floor ({})",
                self.r_cap, self.r_floor
            ));
        }
        if self.patch_size < 3 {
            return bad(format!("patch_size must be >= 3, got {}", self.patch_size));
        }
        if self.outer_iters == 0 {
            return bad("outer_iters must be >= 1".into());
        }
        self.graph_params().validate()
    }
}
