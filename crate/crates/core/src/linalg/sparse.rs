use crate::error::{check_len, Result};
use crate::linalg::dense::DenseMatrix;

/// Symmetric sparse matrix in compressed-row form.
///
/// Both triangles are stored. Every off-diagonal pair `(i, j)` / `(j, i)` is
/// written from a single accumulated value, so the stored pattern and values
/// are exactly symmetric. Column indices are strictly increasing within a row.
/// Generated entries are kept even when they evaluate to zero.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseSymMatrix {
    n: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseSymMatrix {
    pub fn identity(n: usize) -> Self {
        Self::from_diagonal(&vec![1.0; n])
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self {
            n,
            row_offsets: (0..=n).collect(),
            col_indices: (0..n).collect(),
            values: diag.to_vec(),
        }
    }

    /// Builds a matrix from a dense symmetric array, keeping entries whose
    /// magnitude is nonzero. Only the upper triangle is read.
    pub fn from_dense_upper(a: &DenseMatrix) -> Self {
        let n = a.rows();
        let mut asm = SymAssembler::new(n);
        for i in 0..n {
            for j in i..n {
                let v = a[(i, j)];
                if v != 0.0 || i == j {
                    asm.add(i, j, v);
                }
            }
        }
        asm.finish()
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.col_indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Iterates `(column, value)` pairs of row `i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_offsets[i]..self.row_offsets[i + 1];
        self.col_indices[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let span = self.row_offsets[i]..self.row_offsets[i + 1];
        match self.col_indices[span.clone()].binary_search(&j) {
            Ok(k) => self.values[span.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// Computes `A x`.
    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len("matvec", self.n, x.len())?;
        let mut out = vec![0.0; self.n];
        self.matvec_into(x, &mut out);
        Ok(out)
    }

    pub(crate) fn matvec_into(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n);
        debug_assert_eq!(out.len(), self.n);
        for (i, o) in out.iter_mut().enumerate() {
            let span = self.row_offsets[i]..self.row_offsets[i + 1];
            *o = self.col_indices[span.clone()]
                .iter()
                .zip(&self.values[span])
                .map(|(&j, &v)| v * x[j])
                .sum();
        }
    }

    /// `xᵀ A x`.
    pub fn quadratic_form(&self, x: &[f64]) -> Result<f64> {
        let ax = self.matvec(x)?;
        Ok(ax.iter().zip(x).map(|(a, b)| a * b).sum())
    }

    /// Returns `diag(p) A diag(p)` with the same sparsity pattern.
    pub fn scaled_symmetric(&self, p: &[f64]) -> Result<Self> {
        check_len("symmetric scaling", self.n, p.len())?;
        let mut values = self.values.clone();
        for (i, w) in self.row_offsets.windows(2).enumerate() {
            let row = w[0]..w[1];
            for (v, &j) in values[row.clone()].iter_mut().zip(&self.col_indices[row]) {
                // same association order for (i, j) and (j, i)
                let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
                *v = p[lo] * *v * p[hi];
            }
        }
        Ok(Self {
            n: self.n,
            row_offsets: self.row_offsets.clone(),
            col_indices: self.col_indices.clone(),
            values,
        })
    }

    /// `A_ii >= sum_{j != i} |A_ij|` for every row, with a relative slack of `rel_tol`.
    pub fn is_diagonally_dominant(&self, rel_tol: f64) -> bool {
        (0..self.n).all(|i| {
            let mut diag = 0.0;
            let mut off = 0.0;
            for (j, v) in self.row(i) {
                if j == i {
                    diag = v;
                } else {
                    off += v.abs();
                }
            }
            diag >= off - rel_tol * diag.abs().max(off)
        })
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                d[(i, j)] = v;
            }
        }
        d
    }

    /// Largest absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).map(|(_, v)| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

/// Accumulates symmetric contributions and emits a [`SparseSymMatrix`].
///
/// Contributions to `(i, j)` and `(j, i)` land in the same slot.
#[derive(Clone, Debug)]
pub struct SymAssembler {
    n: usize,
    // upper triangle including the diagonal, unsorted
    upper: Vec<Vec<(usize, f64)>>,
}

impl SymAssembler {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            upper: vec![Vec::new(); n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Adds `v` to entry `(i, j)` (and, implicitly, `(j, i)`).
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        assert!(i < self.n && j < self.n, "index ({i}, {j}) out of range");
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        let row = &mut self.upper[lo];
        match row.iter_mut().find(|(c, _)| *c == hi) {
            Some((_, acc)) => *acc += v,
            None => row.push((hi, v)),
        }
    }

    /// Adds `scale * M` where `M` is symmetric, scattering local index `a`
    /// to global index `map[a]`.
    pub fn add_embedded(&mut self, local: &SparseSymMatrix, map: &[usize], scale: f64) {
        assert_eq!(local.dim(), map.len());
        for a in 0..local.dim() {
            for (b, v) in local.row(a) {
                if b >= a {
                    self.add(map[a], map[b], scale * v);
                }
            }
        }
    }

    pub fn finish(self) -> SparseSymMatrix {
        let n = self.n;
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for (i, entries) in self.upper.into_iter().enumerate() {
            for (j, v) in entries {
                rows[i].push((j, v));
                if j != i {
                    rows[j].push((i, v));
                }
            }
        }
        let mut row_offsets = Vec::with_capacity(n + 1);
        let mut col_indices = Vec::new();
        let mut values = Vec::new();
        row_offsets.push(0);
        for mut r in rows {
            r.sort_unstable_by_key(|&(c, _)| c);
            for (c, v) in r {
                col_indices.push(c);
                values.push(v);
            }
            row_offsets.push(col_indices.len());
        }
        SparseSymMatrix {
            n,
            row_offsets,
            col_indices,
            values,
        }
    }
}
