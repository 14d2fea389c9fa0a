//! Condition numbers of reflectance systems on dim patches, before and after
//! Jacobi scaling, and the CG iterations each needs.
//!
//!     cargo run --release --example preconditioner_study

use gsp_retinex::cli::add_noise;
use gsp_retinex::linalg::{build_jacobi, cg_solve, estimate_condition_number, ConditionMethod};
use gsp_retinex::retinex::{
    assemble_reflectance_system, LineLaplacians, PatchSystem, PlanarImage, RetinexParams,
};

fn main() -> gsp_retinex::Result<()> {
    let params = RetinexParams::default();
    let gp = params.graph_params();
    let mut rows = Vec::new();
    for (k, level) in [0.002, 0.005, 0.01, 0.05, 0.2, 0.8].into_iter().enumerate() {
        let light = PlanarImage::from_fn(5, 5, 1, |_, y, x| level * (1.0 + 0.1 * (x + y) as f64))?;
        let l = add_noise(&light, 0.1 * level, k as u64)?
            .data()
            .iter()
            .map(|v| v.max(1e-4))
            .collect::<Vec<_>>();
        let r: Vec<f64> = (0..25).map(|i| if i % 5 < 3 { 0.4 } else { 0.9 }).collect();
        let y: Vec<f64> = l.iter().zip(&r).map(|(l, r)| l * r).collect();
        let ps = PatchSystem::new(5, y, l, r, params.mu_r, params.mu_l)?;
        let laps = LineLaplacians::reflectance(&ps.r, 5, &gp)?;
        let (a, b) = assemble_reflectance_system(&ps, &laps)?;
        let p = build_jacobi(&a)?;
        let before = estimate_condition_number(&a, ConditionMethod::DenseEig)?;
        let after = estimate_condition_number(&p.precondition(&a)?, ConditionMethod::DenseEig)?;
        let (_, plain) = cg_solve(&a, &b, 1e-6, 250, None)?;
        let (_, pre) = cg_solve(&a, &b, 1e-6, 250, Some(&p))?;
        rows.push((level, before, after, plain.iterations, pre.iterations));
    }
    println!(
        "{:>8} {:>12} {:>12} {:>9} {:>6} {:>6}",
        "light", "kappa(A)", "kappa(PAP)", "change", "plain", "jacobi"
    );
    for (level, before, after, plain, pre) in rows {
        println!(
            "{level:>8} {before:>12.3e} {after:>12.3e} {:>8.1}% {plain:>6} {pre:>6}",
            100.0 * (after / before - 1.0)
        );
    }
    Ok(())
}
