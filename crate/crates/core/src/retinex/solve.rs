use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{
    build_jacobi, cg_solve, default_max_iter, estimate_condition_number, ConditionMethod,
    SolveReport, SparseSymMatrix,
};
use crate::retinex::params::RetinexParams;
use crate::retinex::patch::{
    assemble_illumination_system, assemble_reflectance_system, LineLaplacians, PatchSystem,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveKind {
    Reflectance,
    Illumination,
}

impl fmt::Display for SolveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveKind::Reflectance => "reflectance",
            SolveKind::Illumination => "illumination",
        })
    }
}

/// One inner solve inside the alternation.
#[derive(Clone, Debug, PartialEq)]
pub struct SolveRecord {
    /// Zero-based outer iteration.
    pub outer: usize,
    pub kind: SolveKind,
    pub report: SolveReport,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PatchSolution {
    pub l: Vec<f64>,
    pub r: Vec<f64>,
    pub solves: Vec<SolveRecord>,
    pub outer_iterations: usize,
    /// Whether the outer loop met `outer_tol` before running out of iterations.
    pub converged: bool,
}

/// Solves `A x = b` the way the alternation does: Jacobi-scaled CG when
/// `params.precondition`, optional κ diagnostics.
pub fn solve_system(
    a: &SparseSymMatrix,
    b: &[f64],
    params: &RetinexParams,
) -> Result<(Vec<f64>, SolveReport)> {
    let max_iter = params
        .cg_max_iter
        .unwrap_or_else(|| default_max_iter(a.dim()));
    let jacobi = if params.precondition || params.estimate_condition {
        Some(build_jacobi(a)?)
    } else {
        None
    };
    let pre = if params.precondition {
        jacobi.as_ref()
    } else {
        None
    };
    let (x, mut report) = cg_solve(a, b, params.cg_tol, max_iter, pre)?;
    if !report.converged {
        return Err(Error::NotConverged {
            iterations: report.iterations,
            residual: report.final_relative_residual,
        });
    }
    if params.estimate_condition {
        let method = ConditionMethod::auto(a.dim());
        report.kappa_before = estimate_condition_number(a, method).ok();
        if let Some(p) = &jacobi {
            report.kappa_after = p
                .precondition(a)
                .and_then(|pap| estimate_condition_number(&pap, method))
                .ok();
        }
    }
    Ok((x, report))
}

fn rel_change(new: &[f64], old: &[f64]) -> f64 {
    let diff = new
        .iter()
        .zip(old)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    let scale = old.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    diff / scale.max(f64::MIN_POSITIVE)
}

/// Alternating minimization on one patch, reflectance first.
///
/// Each outer iteration rebuilds the bilateral graphs from the current
/// reflectance, solves for `r` and clamps it to `[r_floor, r_cap]`; then
/// rebuilds the gradient graphs from the current illumination, solves for
/// `l` and clamps it to `[l_floor, 1]`. Stops once neither component moves by
/// more than `outer_tol` (relative ∞-norm) or after `outer_iters` rounds.
pub fn solve_patch(ps: &PatchSystem, params: &RetinexParams) -> Result<PatchSolution> {
    params.validate()?;
    let n = ps.n;
    let graph_params = params.graph_params();
    let mut state = ps.clone();
    let mut solves = Vec::with_capacity(2 * params.outer_iters);
    let mut converged = false;
    let mut outer_iterations = 0;

    for outer in 0..params.outer_iters {
        let l_old = state.l.clone();
        let r_old = state.r.clone();

        let laps = LineLaplacians::reflectance(&state.r, n, &graph_params)?;
        let (a, b) = assemble_reflectance_system(&state, &laps)?;
        let (r, report) = solve_system(&a, &b, params)?;
        state.r = r
            .into_iter()
            .map(|v| v.clamp(params.r_floor, params.r_cap))
            .collect();
        solves.push(SolveRecord {
            outer,
            kind: SolveKind::Reflectance,
            report,
        });

        let gng = LineLaplacians::illumination(&state.l, n, &graph_params)?;
        let (a, b) = assemble_illumination_system(&state, &gng)?;
        let (l, report) = solve_system(&a, &b, params)?;
        state.l = l
            .into_iter()
            .map(|v| v.clamp(params.l_floor, 1.0))
            .collect();
        solves.push(SolveRecord {
            outer,
            kind: SolveKind::Illumination,
            report,
        });

        outer_iterations = outer + 1;
        let change = rel_change(&state.l, &l_old).max(rel_change(&state.r, &r_old));
        if change <= params.outer_tol {
            converged = true;
            break;
        }
    }

    Ok(PatchSolution {
        l: state.l,
        r: state.r,
        solves,
        outer_iterations,
        converged,
    })
}
