//! Alternating illumination/reflectance solve on a single 5x5 patch.
//!
//!     cargo run --example patch_decomposition

use gsp_retinex::retinex::{gamma_correct, solve_patch, PatchSystem, RetinexParams};

fn print_grid(name: &str, v: &[f64]) {
    println!("{name}:");
    for row in v.chunks(5) {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:6.3}")).collect();
        println!("  {}", cells.join(" "));
    }
}

fn main() -> gsp_retinex::Result<()> {
    // Dim ramp of light over two materials.
    let light: Vec<f64> = (0..25)
        .map(|k| 0.05 + 0.01 * (k % 5 + k / 5) as f64)
        .collect();
    let material: Vec<f64> = (0..25).map(|k| if k % 5 < 2 { 0.3 } else { 0.9 }).collect();
    let y: Vec<f64> = light.iter().zip(&material).map(|(l, r)| l * r).collect();

    let params = RetinexParams {
        estimate_condition: true,
        ..RetinexParams::default()
    };
    let mean = y.iter().sum::<f64>() / 25.0;
    let ps = PatchSystem::new(
        5,
        y.clone(),
        vec![mean; 25],
        y.iter().map(|v| v / mean).collect(),
        params.mu_r,
        params.mu_l,
    )?;
    let sol = solve_patch(&ps, &params)?;

    for s in &sol.solves {
        println!(
            "outer {} {:<12} {:>3} CG iterations, kappa {:.2e} -> {:.2e}",
            s.outer,
            s.kind,
            s.report.iterations,
            s.report.kappa_before.unwrap_or(f64::NAN),
            s.report.kappa_after.unwrap_or(f64::NAN)
        );
    }
    println!(
        "outer iterations: {}, converged: {}",
        sol.outer_iterations, sol.converged
    );
    print_grid("observed", &y);
    print_grid("illumination", &sol.l);
    print_grid("reflectance", &sol.r);
    print_grid("enhanced", &gamma_correct(&sol.l, &sol.r, params.gamma)?);
    Ok(())
}
