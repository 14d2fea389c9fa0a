//! Timing table over a directory of images, as the `bench` subcommand prints.
//! Without an argument a few generated scenes of growing size are used.
//!
//!     cargo run --release --example batch_bench -- [dir]

use gsp_retinex::cli::{bench, bench_table, save_png};
use gsp_retinex::retinex::{PlanarImage, RetinexParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let scratch;
    let dir = match std::env::args().nth(1) {
        Some(d) => std::path::PathBuf::from(d),
        None => {
            scratch = std::env::temp_dir().join("gsp-retinex-bench");
            std::fs::create_dir_all(&scratch)?;
            for side in [50, 100, 150, 200] {
                let img = PlanarImage::from_fn(side, side, 3, |c, y, x| {
                    let light = 0.03 + 0.1 * y as f64 / side as f64;
                    light * (0.5 + 0.4 * (((x / 9) ^ (y / 13)) % 2) as f64) * [1.0, 0.9, 0.8][c]
                })?;
                save_png(&img, scratch.join(format!("scene_{side:03}.png")))?;
            }
            scratch.clone()
        }
    };
    let rows = bench(&dir, &RetinexParams::default(), 0.001, 7, None)?;
    print!("{}", bench_table(&rows));
    Ok(())
}
