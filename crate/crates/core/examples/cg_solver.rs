//! Solve a small SPD system with and without Jacobi scaling and compare
//! against a dense LU solve.
//!
//!     cargo run --example cg_solver

use gsp_retinex::linalg::{
    build_jacobi, cg_solve, dense_solve_oracle, estimate_condition_number, ConditionMethod,
    SymAssembler,
};

fn main() -> gsp_retinex::Result<()> {
    // Path-graph Laplacian plus a badly scaled diagonal.
    let n = 40;
    let mut asm = SymAssembler::new(n);
    for i in 0..n {
        asm.add(i, i, 1e-4 * (1 + i % 5) as f64);
        if i + 1 < n {
            let w = if i % 10 == 9 { 0.01 } else { 1.0 };
            asm.add(i, i, w);
            asm.add(i + 1, i + 1, w);
            asm.add(i, i + 1, -w);
        }
    }
    let a = asm.finish();
    let b: Vec<f64> = (0..n).map(|i| (i as f64 / 7.0).sin()).collect();

    let jacobi = build_jacobi(&a)?;
    let scaled = jacobi.precondition(&a)?;
    let exact = dense_solve_oracle(&a.to_dense(), &b)?;

    println!("n = {n}, nnz = {}", a.nnz());
    println!(
        "kappa(A) = {:.3e}, kappa(PAP) = {:.3e}",
        estimate_condition_number(&a, ConditionMethod::DenseEig)?,
        estimate_condition_number(&scaled, ConditionMethod::DenseEig)?
    );
    for (label, pre) in [("plain", None), ("jacobi", Some(&jacobi))] {
        let (x, rep) = cg_solve(&a, &b, 1e-10, 10 * n, pre)?;
        let err = x
            .iter()
            .zip(&exact)
            .fold(0.0f64, |m, (p, q)| m.max((p - q).abs()));
        println!(
            "{label:>6}: {} iterations, residual {:.1e}, max error vs LU {:.1e}",
            rep.iterations, rep.final_relative_residual, err
        );
    }
    Ok(())
}
