//! Line graphs over one patch row or column, their combinatorial Laplacians,
//! the first-difference operator and gradient-induced nodal graph Laplacians.
//!
//! Each row (column) of a patch gets its own graph. Nodes `i` and `j` are
//! joined when `1 <= |i - j| <= neighborhood_radius`, with a bilateral weight
//!
//! ```text
//! w_ij = exp(-(v_i - v_j)^2 / σ_v^2 - (i - j)^2 / σ_c^2)
//! ```
//!
//! where `v` is either the reflectance (`σ_v = σ_r`) or the first differences
//! of the illumination (`σ_v = σ_l`). The off-axis coordinate of a row/column
//! graph is constant, so only the in-line index difference enters the
//! domain term.

use crate::error::{check_len, Error, Result};
use crate::linalg::{SparseSymMatrix, SymAssembler};

#[derive(Clone, Debug, PartialEq)]
pub struct GraphParams {
    /// Range bandwidth for reflectance graphs (intensity units).
    pub sigma_r: f64,
    /// Range bandwidth for gradient graphs (intensity units).
    pub sigma_l: f64,
    /// Domain bandwidth (pixels).
    pub sigma_c: f64,
    /// Maximum hop distance of an edge inside a row/column.
    pub neighborhood_radius: usize,
    /// Drop edges lighter than this. Off by default so the quadratic form is exact.
    pub prune_below: Option<f64>,
}

impl Default for GraphParams {
    fn default() -> Self {
        Self {
            sigma_r: 1.0,
            sigma_l: 0.2,
            sigma_c: 1.0,
            neighborhood_radius: 2,
            prune_below: None,
        }
    }
}

impl GraphParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("sigma_r", self.sigma_r),
            ("sigma_l", self.sigma_l),
            ("sigma_c", self.sigma_c),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be > 0, got {v}"
                )));
            }
        }
        if self.neighborhood_radius == 0 {
            return Err(Error::InvalidParameter(
                "neighborhood_radius must be >= 1".into(),
            ));
        }
        Ok(())
    }

    fn range_sigma(&self, bandwidth: Bandwidth) -> f64 {
        match bandwidth {
            Bandwidth::Reflectance => self.sigma_r,
            Bandwidth::Gradient => self.sigma_l,
        }
    }
}

/// Which range bandwidth a graph uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bandwidth {
    Reflectance,
    Gradient,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub w: f64,
}

/// Weighted undirected graph over the nodes of one row or column.
#[derive(Clone, Debug, PartialEq)]
pub struct LineGraph {
    n: usize,
    neighborhood_radius: usize,
    edges: Vec<Edge>,
}

impl LineGraph {
    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn neighborhood_radius(&self) -> usize {
        self.neighborhood_radius
    }

    /// Edges with `i < j`, ordered by `(i, j)`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }
}

/// Bilateral edge weight between two pixels with 2D coordinates `(row, col)`.
pub fn bilateral_weight(
    v_i: f64,
    v_j: f64,
    pos_i: (f64, f64),
    pos_j: (f64, f64),
    sigma_v: f64,
    sigma_c: f64,
) -> f64 {
    let dv = v_i - v_j;
    let dr = pos_i.0 - pos_j.0;
    let dc = pos_i.1 - pos_j.1;
    (-(dv * dv) / (sigma_v * sigma_v) - (dr * dr + dc * dc) / (sigma_c * sigma_c)).exp()
}

pub fn build_line_graph(
    values: &[f64],
    params: &GraphParams,
    bandwidth: Bandwidth,
) -> Result<LineGraph> {
    params.validate()?;
    let n = values.len();
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "a line graph needs at least 2 nodes, got {n}"
        )));
    }
    let sigma_v = params.range_sigma(bandwidth);
    let radius = params.neighborhood_radius;
    let mut edges = Vec::with_capacity(n * radius);
    for i in 0..n {
        for j in i + 1..=(i + radius).min(n - 1) {
            let w = bilateral_weight(
                values[i],
                values[j],
                (0.0, i as f64),
                (0.0, j as f64),
                sigma_v,
                params.sigma_c,
            );
            if params.prune_below.is_some_and(|t| w < t) {
                continue;
            }
            edges.push(Edge { i, j, w });
        }
    }
    Ok(LineGraph {
        n,
        neighborhood_radius: radius,
        edges,
    })
}

/// Combinatorial Laplacian `diag(W 1) - W`.
pub fn laplacian(g: &LineGraph) -> SparseSymMatrix {
    let mut asm = SymAssembler::new(g.n);
    for i in 0..g.n {
        asm.add(i, i, 0.0);
    }
    for e in &g.edges {
        asm.add(e.i, e.i, e.w);
        asm.add(e.j, e.j, e.w);
        asm.add(e.i, e.j, -e.w);
    }
    asm.finish()
}

/// First-difference operator `F` of shape `(n - 1) x n`, `(F x)_i = x_{i+1} - x_i`.
///
/// `F 1 = 0` and `F` has full row rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GradientOperator {
    n: usize,
}

impl GradientOperator {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "gradient operator needs n >= 2, got {n}"
            )));
        }
        Ok(Self { n })
    }

    pub fn input_len(&self) -> usize {
        self.n
    }

    pub fn output_len(&self) -> usize {
        self.n - 1
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len("gradient input", self.n, x.len())?;
        Ok(x.windows(2).map(|w| w[1] - w[0]).collect())
    }

    /// `Fᵀ g`.
    pub fn apply_transpose(&self, g: &[f64]) -> Result<Vec<f64>> {
        check_len("gradient adjoint input", self.n - 1, g.len())?;
        let mut out = vec![0.0; self.n];
        for (i, &gi) in g.iter().enumerate() {
            out[i] -= gi;
            out[i + 1] += gi;
        }
        Ok(out)
    }
}

pub fn apply_gradient(values: &[f64]) -> Result<Vec<f64>> {
    GradientOperator::new(values.len())?.apply(values)
}

/// `Fᵀ L̄ F` for a gradient-graph Laplacian `L̄` of size `(n - 1) x (n - 1)`.
///
/// The result is the Laplacian of a signed graph over the `n` pixels. It is
/// PSD whenever `L̄` is, and it annihilates both constants and linear ramps.
pub fn gng_laplacian(gradient_laplacian: &SparseSymMatrix, n: usize) -> Result<SparseSymMatrix> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "GNG Laplacian needs n >= 2, got {n}"
        )));
    }
    check_len("GNG Laplacian", n - 1, gradient_laplacian.dim())?;
    // row a of F is e_{a+1} - e_a, so every entry of L̄ spreads onto a 2x2 block
    let mut asm = SymAssembler::new(n);
    for a in 0..n - 1 {
        for (b, v) in gradient_laplacian.row(a) {
            for (i, si) in [(a, -1.0), (a + 1, 1.0)] {
                for (j, sj) in [(b, -1.0), (b + 1, 1.0)] {
                    if i <= j {
                        asm.add(i, j, si * sj * v);
                    }
                }
            }
        }
    }
    Ok(asm.finish())
}

/// Laplacian of the bilateral graph built on `values` (reflectance graph).
pub fn reflectance_laplacian(values: &[f64], params: &GraphParams) -> Result<SparseSymMatrix> {
    Ok(laplacian(&build_line_graph(
        values,
        params,
        Bandwidth::Reflectance,
    )?))
}

/// GNG Laplacian built from the gradients of `values` (illumination graph).
pub fn illumination_gng_laplacian(values: &[f64], params: &GraphParams) -> Result<SparseSymMatrix> {
    let g = apply_gradient(values)?;
    let lbar = laplacian(&build_line_graph(&g, params, Bandwidth::Gradient)?);
    gng_laplacian(&lbar, values.len())
}
