//! Lightness order error on a few hand-made cases.
//!
//!     cargo run --example lightness_order

use gsp_retinex::metrics::{loe, QualityMetric};
use gsp_retinex::retinex::PlanarImage;

fn main() -> gsp_retinex::Result<()> {
    let gradient = PlanarImage::from_fn(40, 60, 3, |c, y, x| {
        (x + y) as f64 / 100.0 * [1.0, 0.5, 0.2][c]
    })?;
    let brightened = PlanarImage::from_fn(40, 60, 3, |c, y, x| gradient.get(c, y, x).powf(0.4))?;
    let flipped = PlanarImage::from_fn(40, 60, 3, |c, y, x| 1.0 - gradient.get(c, y, x))?;

    println!(
        "identical:        {:.4}",
        loe(&gradient, &gradient, 50)?.value
    );
    println!(
        "gamma 0.4:        {:.4}",
        loe(&gradient, &brightened, 50)?.value
    );
    println!(
        "inverted:         {:.4}",
        loe(&gradient, &flipped, 50)?.value
    );

    let a = PlanarImage::gray(1, 2, vec![0.2, 0.8])?;
    let b = PlanarImage::gray(1, 2, vec![0.8, 0.2])?;
    println!("two swapped pixels: {:.4}", loe(&a, &b, 50)?.value);

    match QualityMetric::Mdm.evaluate(&gradient, &brightened) {
        Ok(v) => println!("mdm: {v}"),
        Err(e) => println!("mdm: {e}"),
    }
    Ok(())
}
