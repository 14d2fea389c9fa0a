#![allow(dead_code)]

use gsp_retinex::graphs::GraphParams;
use gsp_retinex::linalg::DenseMatrix;
use gsp_retinex::retinex::PatchSystem;
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn uniform_vec(rng: &mut StdRng, len: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..len).map(|_| rng.random_range(lo..hi)).collect()
}

pub fn random_patch(
    rng: &mut StdRng,
    n: usize,
    l_range: (f64, f64),
    mu_r: f64,
    mu_l: f64,
) -> PatchSystem {
    let l = uniform_vec(rng, n * n, l_range.0, l_range.1);
    let r = uniform_vec(rng, n * n, 0.01, 1.0);
    let y = l
        .iter()
        .zip(&r)
        .map(|(l, r)| l * r + 0.01 * rng.random_range(-1.0..1.0))
        .collect();
    PatchSystem::new(n, y, l, r, mu_r, mu_l).unwrap()
}

pub fn rel_inf_err(x: &[f64], reference: &[f64]) -> f64 {
    let diff = x
        .iter()
        .zip(reference)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    let scale = reference.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    diff / scale.max(f64::MIN_POSITIVE)
}

// Independent dense construction straight from the definitions: weights,
// adjacency, combinatorial Laplacian, selection matrices, first differences.

fn weight(vi: f64, vj: f64, i: usize, j: usize, sv: f64, sc: f64) -> f64 {
    let d = i as f64 - j as f64;
    (-(vi - vj).powi(2) / (sv * sv) - d * d / (sc * sc)).exp()
}

pub fn dense_line_laplacian(x: &[f64], sigma_v: f64, sigma_c: f64, radius: usize) -> DenseMatrix {
    let m = x.len();
    let w = |i: usize, j: usize| {
        if i != j && i.abs_diff(j) <= radius {
            weight(x[i], x[j], i, j, sigma_v, sigma_c)
        } else {
            0.0
        }
    };
    DenseMatrix::from_fn(m, m, |i, j| {
        if i == j {
            (0..m).map(|k| w(i, k)).sum()
        } else {
            -w(i, j)
        }
    })
}

pub fn first_difference(m: usize) -> DenseMatrix {
    DenseMatrix::from_fn(m - 1, m, |i, j| {
        if j == i + 1 {
            1.0
        } else if j == i {
            -1.0
        } else {
            0.0
        }
    })
}

pub fn dense_gng(x: &[f64], gp: &GraphParams) -> DenseMatrix {
    let f = first_difference(x.len());
    let g = f.matvec(x).unwrap();
    let lbar = dense_line_laplacian(&g, gp.sigma_l, gp.sigma_c, gp.neighborhood_radius);
    f.transpose().matmul(&lbar).unwrap().matmul(&f).unwrap()
}

fn selection(n: usize, idx: &[usize]) -> DenseMatrix {
    DenseMatrix::from_fn(idx.len(), n * n, |a, b| if idx[a] == b { 1.0 } else { 0.0 })
}

fn dense_system(
    n: usize,
    fidelity: &[f64],
    y: &[f64],
    mu: f64,
    signal: &[f64],
    line: impl Fn(&[f64]) -> DenseMatrix,
) -> (DenseMatrix, Vec<f64>) {
    let nn = n * n;
    let mut a: Vec<Vec<f64>> = (0..nn)
        .map(|i| {
            (0..nn)
                .map(|j| if i == j { fidelity[i].powi(2) } else { 0.0 })
                .collect()
        })
        .collect();
    for k in 0..n {
        let rows: Vec<usize> = (0..n).map(|i| k * n + i).collect();
        let cols: Vec<usize> = (0..n).map(|i| i * n + k).collect();
        for idx in [rows, cols] {
            let s = selection(n, &idx);
            let sig: Vec<f64> = idx.iter().map(|&i| signal[i]).collect();
            let term = s
                .transpose()
                .matmul(&line(&sig))
                .unwrap()
                .matmul(&s)
                .unwrap();
            for i in 0..nn {
                for j in 0..nn {
                    a[i][j] += mu * term[(i, j)];
                }
            }
        }
    }
    let b = fidelity.iter().zip(y).map(|(f, y)| f * y).collect();
    (DenseMatrix::from_fn(nn, nn, |i, j| a[i][j]), b)
}

/// Reflectance system built densely with graphs from `ps.r`.
pub fn dense_reflectance_system(ps: &PatchSystem, gp: &GraphParams) -> (DenseMatrix, Vec<f64>) {
    dense_system(ps.n, &ps.l, &ps.y, ps.mu_r, &ps.r, |x| {
        dense_line_laplacian(x, gp.sigma_r, gp.sigma_c, gp.neighborhood_radius)
    })
}

/// Illumination system built densely with gradient graphs from `ps.l`.
pub fn dense_illumination_system(ps: &PatchSystem, gp: &GraphParams) -> (DenseMatrix, Vec<f64>) {
    dense_system(ps.n, &ps.r, &ps.y, ps.mu_l, &ps.l, |x| dense_gng(x, gp))
}

pub fn max_abs_diff(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    let mut m = 0.0f64;
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            m = m.max((a[(i, j)] - b[(i, j)]).abs());
        }
    }
    m
}
