//! Signal-dependent line graphs: bilateral weights across a step, and the
//! gradient-graph regularizer that ignores planar ramps.
//!
//!     cargo run --example line_graphs

use gsp_retinex::graphs::{
    build_line_graph, illumination_gng_laplacian, laplacian, Bandwidth, GraphParams,
};

fn main() -> gsp_retinex::Result<()> {
    let params = GraphParams {
        sigma_r: 0.1,
        ..GraphParams::default()
    };
    let step = [0.2, 0.21, 0.19, 0.8, 0.79, 0.81];
    let g = build_line_graph(&step, &params, Bandwidth::Reflectance)?;
    println!("bilateral edges on {step:?}:");
    for e in g.edges() {
        println!("  ({}, {}) w = {:.3e}", e.i, e.j, e.w);
    }
    let l = laplacian(&g);
    println!("GLR of the step itself: {:.3e}", l.quadratic_form(&step)?);

    let gp = GraphParams::default();
    let ramp: Vec<f64> = (0..8).map(|i| 0.1 + 0.05 * i as f64).collect();
    let bent: Vec<f64> = (0..8)
        .map(|i| 0.1 + 0.05 * (i as f64 - 3.5).abs())
        .collect();
    for (name, x) in [("ramp", &ramp), ("bent", &bent)] {
        let gng = illumination_gng_laplacian(x, &gp)?;
        println!("GGLR of {name}: {:.3e}", gng.quadratic_form(x)?);
    }
    Ok(())
}
