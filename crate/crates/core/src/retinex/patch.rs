//! One patch's linear systems.
//!
//! A patch of side `n` is vectorized row by row. Row `k` occupies indices
//! `k*n .. k*n + n`; column `k` occupies `k, k + n, ..., k + (n-1) n`.
//! Both component solves share the structure
//!
//! ```text
//! (diag(f)^2 + μ Σ_k (H_kᵀ L_k H_k + G_kᵀ M_k G_k)) x = diag(f) y
//! ```
//!
//! with `f = l, x = r` and bilateral Laplacians for the reflectance, and
//! `f = r, x = l` and GNG Laplacians for the illumination.

use crate::error::{check_len, Error, Result};
use crate::graphs::{illumination_gng_laplacian, reflectance_laplacian, GraphParams};
use crate::linalg::{SparseSymMatrix, SymAssembler};
use crate::retinex::image::{gaussian_blur, PlanarImage};
use crate::retinex::params::RetinexParams;

/// State of one `n x n` patch. All vectors have length `n²`.
#[derive(Clone, Debug, PartialEq)]
pub struct PatchSystem {
    pub n: usize,
    /// Observed intensity.
    pub y: Vec<f64>,
    /// Illumination, kept strictly positive.
    pub l: Vec<f64>,
    /// Reflectance, kept strictly positive.
    pub r: Vec<f64>,
    pub mu_r: f64,
    pub mu_l: f64,
}

impl PatchSystem {
    pub fn new(
        n: usize,
        y: Vec<f64>,
        l: Vec<f64>,
        r: Vec<f64>,
        mu_r: f64,
        mu_l: f64,
    ) -> Result<Self> {
        let len = n * n;
        check_len("patch y", len, y.len())?;
        check_len("patch l", len, l.len())?;
        check_len("patch r", len, r.len())?;
        if l.iter().chain(&r).any(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(Error::InvalidParameter(
                "illumination and reflectance must be strictly positive".into(),
            ));
        }
        Ok(Self {
            n,
            y,
            l,
            r,
            mu_r,
            mu_l,
        })
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }
}

/// Indices picked by the row selection `H_k`.
pub fn row_selection(n: usize, k: usize) -> Vec<usize> {
    (k * n..k * n + n).collect()
}

/// Indices picked by the column selection `G_k`.
pub fn col_selection(n: usize, k: usize) -> Vec<usize> {
    (0..n).map(|i| k + i * n).collect()
}

fn gather(x: &[f64], idx: &[usize]) -> Vec<f64> {
    idx.iter().map(|&i| x[i]).collect()
}

/// Per-row and per-column Laplacians of one patch.
#[derive(Clone, Debug, PartialEq)]
pub struct LineLaplacians {
    pub rows: Vec<SparseSymMatrix>,
    pub cols: Vec<SparseSymMatrix>,
}

impl LineLaplacians {
    fn build(
        x: &[f64],
        n: usize,
        params: &GraphParams,
        f: fn(&[f64], &GraphParams) -> Result<SparseSymMatrix>,
    ) -> Result<Self> {
        check_len("patch signal", n * n, x.len())?;
        let rows = (0..n)
            .map(|k| f(&gather(x, &row_selection(n, k)), params))
            .collect::<Result<_>>()?;
        let cols = (0..n)
            .map(|k| f(&gather(x, &col_selection(n, k)), params))
            .collect::<Result<_>>()?;
        Ok(Self { rows, cols })
    }

    /// Bilateral reflectance Laplacians from the current reflectance.
    pub fn reflectance(r: &[f64], n: usize, params: &GraphParams) -> Result<Self> {
        Self::build(r, n, params, reflectance_laplacian)
    }

    /// GNG Laplacians from the gradients of the current illumination.
    pub fn illumination(l: &[f64], n: usize, params: &GraphParams) -> Result<Self> {
        Self::build(l, n, params, illumination_gng_laplacian)
    }

    fn check(&self, n: usize) -> Result<()> {
        check_len("row Laplacian count", n, self.rows.len())?;
        check_len("column Laplacian count", n, self.cols.len())?;
        for m in self.rows.iter().chain(&self.cols) {
            check_len("line Laplacian size", n, m.dim())?;
        }
        Ok(())
    }
}

fn assemble(
    n: usize,
    fidelity: &[f64],
    y: &[f64],
    mu: f64,
    laps: &LineLaplacians,
) -> Result<(SparseSymMatrix, Vec<f64>)> {
    laps.check(n)?;
    check_len("fidelity weights", n * n, fidelity.len())?;
    check_len("observation", n * n, y.len())?;
    let mut asm = SymAssembler::new(n * n);
    for (i, f) in fidelity.iter().enumerate() {
        asm.add(i, i, f * f);
    }
    if mu != 0.0 {
        for k in 0..n {
            asm.add_embedded(&laps.rows[k], &row_selection(n, k), mu);
            asm.add_embedded(&laps.cols[k], &col_selection(n, k), mu);
        }
    }
    let rhs = fidelity.iter().zip(y).map(|(f, y)| f * y).collect();
    Ok((asm.finish(), rhs))
}

/// `(diag²(l) + μ_r Σ (H_kᵀ L_{r,k} H_k + G_kᵀ L_{c,k} G_k)) r = diag(l) y`.
pub fn assemble_reflectance_system(
    ps: &PatchSystem,
    laps: &LineLaplacians,
) -> Result<(SparseSymMatrix, Vec<f64>)> {
    assemble(ps.n, &ps.l, &ps.y, ps.mu_r, laps)
}

/// `(diag²(r) + μ_l Σ (H_kᵀ 𝓛_{r,k} H_k + G_kᵀ 𝓛_{c,k} G_k)) l = diag(r) y`.
pub fn assemble_illumination_system(
    ps: &PatchSystem,
    gng: &LineLaplacians,
) -> Result<(SparseSymMatrix, Vec<f64>)> {
    assemble(ps.n, &ps.r, &ps.y, ps.mu_l, gng)
}

/// `‖y - f ⊙ x‖² + μ Σ_k (x_row_kᵀ L x_row_k + x_col_kᵀ M x_col_k)`, evaluated term by term.
fn explicit_objective(
    n: usize,
    fidelity: &[f64],
    y: &[f64],
    mu: f64,
    laps: &LineLaplacians,
    x: &[f64],
) -> Result<f64> {
    laps.check(n)?;
    check_len("objective argument", n * n, x.len())?;
    let data: f64 = y
        .iter()
        .zip(fidelity)
        .zip(x)
        .map(|((y, f), x)| (y - f * x).powi(2))
        .sum();
    let mut reg = 0.0;
    for k in 0..n {
        reg += laps.rows[k].quadratic_form(&gather(x, &row_selection(n, k)))?;
        reg += laps.cols[k].quadratic_form(&gather(x, &col_selection(n, k)))?;
    }
    Ok(data + mu * reg)
}

/// Reflectance objective at `r` with the graphs held fixed.
pub fn reflectance_objective(ps: &PatchSystem, laps: &LineLaplacians, r: &[f64]) -> Result<f64> {
    explicit_objective(ps.n, &ps.l, &ps.y, ps.mu_r, laps, r)
}

/// Illumination objective at `l` with the graphs held fixed.
pub fn illumination_objective(ps: &PatchSystem, gng: &LineLaplacians, l: &[f64]) -> Result<f64> {
    explicit_objective(ps.n, &ps.r, &ps.y, ps.mu_l, gng, l)
}

fn system_gradient(a: &SparseSymMatrix, b: &[f64], x: &[f64]) -> Result<Vec<f64>> {
    let ax = a.matvec(x)?;
    Ok(ax.iter().zip(b).map(|(ax, b)| 2.0 * (ax - b)).collect())
}

/// Analytic gradient of the reflectance objective, `2 (A r - diag(l) y)`.
pub fn reflectance_gradient(
    ps: &PatchSystem,
    laps: &LineLaplacians,
    r: &[f64],
) -> Result<Vec<f64>> {
    let (a, b) = assemble_reflectance_system(ps, laps)?;
    system_gradient(&a, &b, r)
}

/// Analytic gradient of the illumination objective, `2 (A l - diag(r) y)`.
pub fn illumination_gradient(
    ps: &PatchSystem,
    gng: &LineLaplacians,
    l: &[f64],
) -> Result<Vec<f64>> {
    let (a, b) = assemble_illumination_system(ps, gng)?;
    system_gradient(&a, &b, l)
}

/// Initial illumination and reflectance for a whole intensity image.
///
/// `l0 = max(blur(y), l_floor)`, `r0 = clamp(y / l0, r_floor, r_cap)`.
pub fn initialize(y: &PlanarImage, params: &RetinexParams) -> Result<(Vec<f64>, Vec<f64>)> {
    if y.channels() != 1 {
        return Err(Error::InvalidParameter(
            "initialization expects a single intensity channel".into(),
        ));
    }
    let blurred = gaussian_blur(y, params.init_blur_sigma)?;
    let l0: Vec<f64> = blurred
        .data()
        .iter()
        .map(|v| v.max(params.l_floor))
        .collect();
    let r0 = y
        .data()
        .iter()
        .zip(&l0)
        .map(|(y, l)| (y / l).clamp(params.r_floor, params.r_cap))
        .collect();
    Ok((l0, r0))
}

/// `x = l^γ ⊙ r`, clamped to `[0, 1]`.
pub fn gamma_correct(l: &[f64], r: &[f64], gamma: f64) -> Result<Vec<f64>> {
    check_len("gamma correction", l.len(), r.len())?;
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "gamma must lie in (0, 1), got {gamma}"
        )));
    }
    Ok(l.iter()
        .zip(r)
        .map(|(l, r)| (l.powf(gamma) * r).clamp(0.0, 1.0))
        .collect())
}
