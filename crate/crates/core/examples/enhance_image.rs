//! Enhance an image file, or a generated dim scene when no path is given.
//!
//!     cargo run --release --example enhance_image -- [input.png] [output.png]
//!
//! The output defaults to `enhanced.png` in the system temp directory.

use gsp_retinex::cli::{add_noise, load_image, save_png};
use gsp_retinex::metrics::{loe, DEFAULT_LOE_COLUMNS};
use gsp_retinex::retinex::{enhance_image, PlanarImage, RetinexParams};

fn main() -> gsp_retinex::Result<()> {
    let mut args = std::env::args().skip(1);
    let input = match args.next() {
        Some(path) => load_image(path)?,
        None => PlanarImage::from_fn(120, 160, 3, |c, y, x| {
            let light = 0.03 + 0.12 * x as f64 / 160.0;
            let stripe = if (x / 20 + y / 30) % 2 == 0 { 0.9 } else { 0.4 };
            light * stripe * [1.0, 0.9, 0.75][c]
        })?,
    };
    let output = args
        .next()
        .map(std::path::PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("enhanced.png"));

    let params = RetinexParams::default();
    let n = params.patch_size;
    let input = input.crop(input.height() / n * n, input.width() / n * n)?;
    let noisy = add_noise(&input, 0.001, 1)?;
    let (out, report) = enhance_image(&noisy, &params)?;
    save_png(&out, &output)?;

    println!(
        "{}x{} -> {}: {} patches, {} CG iterations, {:.2} s, LOE {:.4}",
        input.width(),
        input.height(),
        output.display(),
        report.patches.len(),
        report.total_cg_iterations(),
        report.wall_time,
        loe(&input, &out, DEFAULT_LOE_COLUMNS)?.value
    );
    Ok(())
}
