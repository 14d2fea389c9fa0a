use std::time::Instant;

use crate::error::{check_len, Error, Result};
use crate::linalg::{DiagPreconditioner, SparseSymMatrix};

/// Diagnostics for one linear solve.
#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    pub iterations: usize,
    /// Relative residual of the system CG actually iterated on (the scaled
    /// system when a preconditioner is supplied).
    pub final_relative_residual: f64,
    pub converged: bool,
    pub kappa_before: Option<f64>,
    pub kappa_after: Option<f64>,
    /// Seconds.
    pub wall_time: f64,
}

/// Iteration cap used when the caller has no opinion: `10 n`.
pub fn default_max_iter(n: usize) -> usize {
    10 * n.max(1)
}

/// Conjugate gradient for a symmetric positive-definite `A`.
///
/// With a preconditioner, CG runs on `diag(p) A diag(p) x̂ = diag(p) b` and
/// the returned solution is `diag(p) x̂`. Convergence is declared when the
/// true relative residual of the iterated system drops to `tol`.
///
/// Running out of iterations is not an error: the best iterate is returned
/// with `converged == false`.
pub fn cg_solve(
    a: &SparseSymMatrix,
    b: &[f64],
    tol: f64,
    max_iter: usize,
    precond: Option<&DiagPreconditioner>,
) -> Result<(Vec<f64>, SolveReport)> {
    check_len("cg rhs", a.dim(), b.len())?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "CG tolerance must be > 0, got {tol}"
        )));
    }
    if b.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { iteration: 0 });
    }
    let start = Instant::now();

    let (x, iterations, residual, converged) = match precond {
        Some(p) => {
            check_len("cg preconditioner", a.dim(), p.dim())?;
            let a_hat = p.precondition(a)?;
            let b_hat = p.apply(b)?;
            let (x_hat, it, res, conv) = plain_cg(&a_hat, &b_hat, tol, max_iter)?;
            (p.apply(&x_hat)?, it, res, conv)
        }
        None => plain_cg(a, b, tol, max_iter)?,
    };

    Ok((
        x,
        SolveReport {
            iterations,
            final_relative_residual: residual,
            converged,
            kappa_before: None,
            kappa_after: None,
            wall_time: start.elapsed().as_secs_f64(),
        },
    ))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn true_residual(a: &SparseSymMatrix, x: &[f64], b: &[f64], r: &mut [f64]) -> f64 {
    a.matvec_into(x, r);
    for (ri, bi) in r.iter_mut().zip(b) {
        *ri = bi - *ri;
    }
    dot(r, r).sqrt()
}

fn plain_cg(
    a: &SparseSymMatrix,
    b: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, usize, f64, bool)> {
    let n = a.dim();
    let b_norm = dot(b, b).sqrt();
    if b_norm == 0.0 {
        return Ok((vec![0.0; n], 0, 0.0, true));
    }

    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut ap = vec![0.0; n];
    let mut rs = dot(&r, &r);

    let mut best_x = x.clone();
    let mut best_res = 1.0;

    let mut iterations = 0;
    loop {
        let rel = rs.sqrt() / b_norm;
        if rel <= tol {
            // the recurrence drifts; confirm against the true residual
            let true_rel = true_residual(a, &x, b, &mut r) / b_norm;
            if true_rel <= tol {
                return Ok((x, iterations, true_rel, true));
            }
            rs = dot(&r, &r);
            p.copy_from_slice(&r);
        }
        if iterations >= max_iter {
            break;
        }

        a.matvec_into(&p, &mut ap);
        let pap = dot(&p, &ap);
        if !pap.is_finite() {
            return Err(Error::NonFinite {
                iteration: iterations,
            });
        }
        if pap <= 0.0 {
            return Err(Error::NotPositiveDefinite(format!(
                "pᵀAp = {pap:e} at CG iteration {iterations}"
            )));
        }
        let alpha = rs / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rs_new = dot(&r, &r);
        if !rs_new.is_finite() || !alpha.is_finite() {
            return Err(Error::NonFinite {
                iteration: iterations,
            });
        }
        iterations += 1;

        let rel_new = rs_new.sqrt() / b_norm;
        if rel_new < best_res {
            best_res = rel_new;
            best_x.copy_from_slice(&x);
        }

        let beta = rs_new / rs;
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
        rs = rs_new;
    }

    let res = true_residual(a, &best_x, b, &mut r) / b_norm;
    Ok((best_x, iterations, res, false))
}
