use crate::error::{Error, Result};
use crate::linalg::dense::{symmetric_eigenvalues, DenseMatrix, DENSE_CAP};
use crate::linalg::SparseSymMatrix;
use crate::rng::SplitMix64;

/// Eigenvalues below this fraction of `λ_max` count as zero.
pub const PD_RELATIVE_FLOOR: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConditionMethod {
    /// Full spectrum through the dense Jacobi eigensolver. Exact up to rounding.
    DenseEig,
    /// Extreme Ritz values from Lanczos with full reorthogonalization.
    /// `λ_min` is over-estimated, so κ is a lower bound unless the Krylov
    /// space spans the whole matrix.
    Lanczos { steps: usize },
}

impl ConditionMethod {
    /// Dense for matrices up to the dense cap, Lanczos above it.
    pub fn auto(n: usize) -> Self {
        if n <= DENSE_CAP {
            Self::DenseEig
        } else {
            Self::Lanczos { steps: 200 }
        }
    }
}

/// `(λ_min, λ_max)` of a symmetric matrix.
pub fn extreme_eigenvalues(a: &SparseSymMatrix, method: ConditionMethod) -> Result<(f64, f64)> {
    let n = a.dim();
    if n == 0 {
        return Err(Error::InvalidParameter("empty matrix".into()));
    }
    let eig = match method {
        ConditionMethod::DenseEig => {
            if n > DENSE_CAP {
                return Err(Error::TooLarge { n, cap: DENSE_CAP });
            }
            symmetric_eigenvalues(&a.to_dense())?
        }
        ConditionMethod::Lanczos { steps } => lanczos_ritz_values(a, steps.max(1))?,
    };
    Ok((eig[0], eig[eig.len() - 1]))
}

/// `κ(A) = λ_max / λ_min`; errors when `A` is not numerically positive definite.
pub fn estimate_condition_number(a: &SparseSymMatrix, method: ConditionMethod) -> Result<f64> {
    let (lo, hi) = extreme_eigenvalues(a, method)?;
    if hi.is_nan() || hi <= 0.0 || lo <= PD_RELATIVE_FLOOR * hi {
        return Err(Error::NotPositiveDefinite(format!(
            "λ_min = {lo:e}, λ_max = {hi:e}"
        )));
    }
    Ok(hi / lo)
}

fn lanczos_ritz_values(a: &SparseSymMatrix, steps: usize) -> Result<Vec<f64>> {
    let n = a.dim();
    let k_max = steps.min(n);
    let mut rng = SplitMix64::new(0x5EED_1A2C_0500_0001);
    let mut v: Vec<f64> = (0..n).map(|_| rng.next_f64() - 0.5).collect();
    normalize(&mut v);

    let scale = a.norm_inf().max(f64::MIN_POSITIVE);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(k_max);
    let mut alphas = Vec::with_capacity(k_max);
    let mut betas: Vec<f64> = Vec::with_capacity(k_max);
    let mut w = vec![0.0; n];

    for _ in 0..k_max {
        a.matvec_into(&v, &mut w);
        let alpha: f64 = w.iter().zip(&v).map(|(x, y)| x * y).sum();
        alphas.push(alpha);
        basis.push(v.clone());
        // two passes of classical Gram-Schmidt against the whole basis
        for _ in 0..2 {
            for q in &basis {
                let c: f64 = w.iter().zip(q).map(|(x, y)| x * y).sum();
                w.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
            }
        }
        let beta = norm(&w);
        if !beta.is_finite() {
            return Err(Error::NonFinite {
                iteration: alphas.len(),
            });
        }
        if beta <= 1e-12 * scale || basis.len() == k_max {
            break;
        }
        betas.push(beta);
        v.iter_mut().zip(&w).for_each(|(x, y)| *x = y / beta);
    }

    let k = alphas.len();
    let t = DenseMatrix::from_fn(k, k, |i, j| {
        if i == j {
            alphas[i]
        } else if i + 1 == j {
            betas[i]
        } else if j + 1 == i {
            betas[j]
        } else {
            0.0
        }
    });
    symmetric_eigenvalues(&t)
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn normalize(v: &mut [f64]) {
    let n = norm(v);
    v.iter_mut().for_each(|x| *x /= n);
}
