use crate::error::{check_len, Error, Result};
use crate::linalg::SparseSymMatrix;

/// Symmetric diagonal (Jacobi) scaling `P = diag(p)` with `p_i = A_ii^{-1/2}`.
///
/// `P A P` has a unit diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagPreconditioner {
    p: Vec<f64>,
}

impl DiagPreconditioner {
    pub fn scales(&self) -> &[f64] {
        &self.p
    }

    pub fn dim(&self) -> usize {
        self.p.len()
    }

    /// `diag(p) v`.
    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        check_len("preconditioner apply", self.p.len(), v.len())?;
        Ok(self.p.iter().zip(v).map(|(p, x)| p * x).collect())
    }

    /// The explicitly scaled matrix `diag(p) A diag(p)`.
    pub fn precondition(&self, a: &SparseSymMatrix) -> Result<SparseSymMatrix> {
        a.scaled_symmetric(&self.p)
    }
}

pub fn build_jacobi(a: &SparseSymMatrix) -> Result<DiagPreconditioner> {
    let p = a
        .diagonal()
        .into_iter()
        .enumerate()
        .map(|(index, d)| {
            if d > 0.0 && d.is_finite() {
                Ok(d.sqrt().recip())
            } else {
                Err(Error::NonPositiveDiagonal { index, value: d })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DiagPreconditioner { p })
}
