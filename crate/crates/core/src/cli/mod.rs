//! Command-line front end: image I/O, noise injection, `enhance` and `bench`.

mod io;
mod noise;
mod report;

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::metrics::{loe, mse_psnr, DEFAULT_LOE_COLUMNS};
use crate::retinex::{enhance_image, PlanarImage, RetinexParams};

pub use io::{load_image, save_png};
pub use noise::add_noise;
pub use report::{bench_table, BenchRow, RunReport};

pub const DEFAULT_NOISE_SIGMA: f64 = 0.001;
pub const DEFAULT_SEED: u64 = 0x5EED;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, ValueEnum)]
pub enum ResizePolicy {
    /// Drop bottom rows and right columns down to a multiple of the patch size.
    #[default]
    Crop,
    /// Refuse images whose sides are not multiples of the patch size.
    Error,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub input_path: PathBuf,
    pub output_path: PathBuf,
    pub params: RetinexParams,
    pub noise_sigma: f64,
    pub seed: u64,
    pub report_path: Option<PathBuf>,
    /// Clean image for MSE/PSNR, same size as the input.
    pub reference_path: Option<PathBuf>,
    pub resize_policy: ResizePolicy,
    /// Worker threads for patches; `None` uses all cores.
    pub threads: Option<usize>,
}

impl RunConfig {
    pub fn new(input: impl Into<PathBuf>, output: impl Into<PathBuf>) -> Self {
        Self {
            input_path: input.into(),
            output_path: output.into(),
            params: RetinexParams::default(),
            noise_sigma: DEFAULT_NOISE_SIGMA,
            seed: DEFAULT_SEED,
            report_path: None,
            reference_path: None,
            resize_policy: ResizePolicy::Crop,
            threads: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Config,
    Input,
    Enhance,
    Output,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Config => "config error",
            Stage::Input => "input error",
            Stage::Enhance => "enhance error",
            Stage::Output => "output error",
        })
    }
}

#[derive(Debug)]
pub struct RunError {
    pub stage: Stage,
    pub source: Error,
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.stage, self.source)
    }
}

impl std::error::Error for RunError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.source)
    }
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self.stage {
            Stage::Config => 2,
            Stage::Input => 3,
            Stage::Enhance => 4,
            Stage::Output => 5,
        }
    }
}

trait AtStage<T> {
    fn at(self, stage: Stage) -> Result<T, RunError>;
}

impl<T> AtStage<T> for Result<T> {
    fn at(self, stage: Stage) -> Result<T, RunError> {
        self.map_err(|source| RunError { stage, source })
    }
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn fit_to_patches(img: PlanarImage, n: usize, policy: ResizePolicy) -> Result<PlanarImage> {
    let (h, w) = (img.height() / n * n, img.width() / n * n);
    if h == img.height() && w == img.width() {
        return Ok(img);
    }
    match policy {
        ResizePolicy::Crop if h > 0 && w > 0 => img.crop(h, w),
        _ => Err(Error::NotDivisible {
            width: img.width(),
            height: img.height(),
            patch: n,
        }),
    }
}

/// Everything `run` produced, for callers that want more than the files.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub input: PlanarImage,
    pub noisy: PlanarImage,
    pub output: PlanarImage,
    pub report: RunReport,
}

/// Load, fit, add noise, enhance, write. Errors are tagged with the failing stage.
pub fn run(config: &RunConfig) -> Result<RunOutcome, RunError> {
    let start = Instant::now();
    config.params.validate().at(Stage::Config)?;
    if config.input_path.as_os_str().is_empty() || config.output_path.as_os_str().is_empty() {
        return Err(Error::InvalidParameter(
            "input and output paths are required".into(),
        ))
        .at(Stage::Config);
    }
    if !(config.noise_sigma >= 0.0 && config.noise_sigma.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "noise_sigma must be >= 0, got {}",
            config.noise_sigma
        )))
        .at(Stage::Config);
    }

    let loaded = load_image(&config.input_path).at(Stage::Input)?;
    let n = config.params.patch_size;
    let input = fit_to_patches(loaded, n, config.resize_policy).at(Stage::Input)?;
    let reference = match &config.reference_path {
        Some(p) => {
            let r = load_image(p).at(Stage::Input)?;
            Some(fit_to_patches(r, n, config.resize_policy).at(Stage::Input)?)
        }
        None => None,
    };
    let noisy = add_noise(&input, config.noise_sigma, config.seed).at(Stage::Input)?;

    let (output, enhance) = with_threads(config.threads, || enhance_image(&noisy, &config.params))
        .and_then(|r| r)
        .at(Stage::Enhance)?;

    save_png(&output, &config.output_path).at(Stage::Output)?;

    let loe_value = loe(&input, &output, DEFAULT_LOE_COLUMNS)
        .at(Stage::Output)?
        .value;
    let reference = reference
        .map(|r| mse_psnr(&r, &output))
        .transpose()
        .at(Stage::Output)?;

    let mut report = RunReport {
        input: config.input_path.display().to_string(),
        output: config.output_path.display().to_string(),
        width: input.width(),
        height: input.height(),
        channels: input.channels(),
        noise_sigma: config.noise_sigma,
        seed: config.seed,
        params: config.params.clone(),
        enhance,
        loe: Some(loe_value),
        reference,
        wall_time: 0.0,
    };
    report.wall_time = start.elapsed().as_secs_f64();
    if let Some(path) = &config.report_path {
        std::fs::write(path, report.to_text())
            .map_err(Error::from)
            .at(Stage::Output)?;
    }

    Ok(RunOutcome {
        input,
        noisy,
        output,
        report,
    })
}

fn is_image_file(p: &Path) -> bool {
    p.extension()
        .and_then(|e| e.to_str())
        .map(|e| {
            matches!(
                e.to_ascii_lowercase().as_str(),
                "png" | "ppm" | "pgm" | "pnm"
            )
        })
        .unwrap_or(false)
}

/// Runs every PNG/PNM image of a directory (sorted by name) and returns one
/// table row per image. Enhanced images are not written.
pub fn bench(
    input_dir: &Path,
    params: &RetinexParams,
    noise_sigma: f64,
    seed: u64,
    threads: Option<usize>,
) -> Result<Vec<BenchRow>, RunError> {
    params.validate().at(Stage::Config)?;
    let mut files: Vec<PathBuf> = std::fs::read_dir(input_dir)
        .map_err(Error::from)
        .at(Stage::Input)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| is_image_file(p))
        .collect();
    files.sort();

    let mut rows = Vec::with_capacity(files.len());
    for path in files {
        let img = load_image(&path).at(Stage::Input)?;
        let img = fit_to_patches(img, params.patch_size, ResizePolicy::Crop).at(Stage::Input)?;
        let noisy = add_noise(&img, noise_sigma, seed).at(Stage::Input)?;
        let start = Instant::now();
        let (out, rep) = with_threads(threads, || enhance_image(&noisy, params))
            .and_then(|r| r)
            .at(Stage::Enhance)?;
        let seconds = start.elapsed().as_secs_f64();
        rows.push(BenchRow {
            name: path
                .file_name()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default(),
            width: img.width(),
            height: img.height(),
            seconds,
            cg_iterations: rep.total_cg_iterations(),
            loe: loe(&img, &out, DEFAULT_LOE_COLUMNS)
                .at(Stage::Output)?
                .value,
        });
    }
    Ok(rows)
}

#[derive(Debug, Parser)]
#[command(
    name = "gsp-retinex",
    version,
    about = "Low-light enhancement and denoising with graph regularized Retinex"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enhance one image.
    Enhance(EnhanceArgs),
    /// Enhance every image in a directory and print a timing table.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct EnhanceArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Clean image to compute MSE/PSNR against.
    #[arg(long)]
    pub reference: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ResizePolicy::Crop)]
    pub resize: ResizePolicy,
    #[command(flatten)]
    pub tuning: TuningArgs,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub input_dir: PathBuf,
    #[arg(long)]
    pub report: PathBuf,
    #[command(flatten)]
    pub tuning: TuningArgs,
}

#[derive(Debug, Args)]
pub struct TuningArgs {
    #[arg(long, default_value_t = 0.5)]
    pub gamma: f64,
    #[arg(long, default_value_t = 1.0)]
    pub mu_r: f64,
    #[arg(long, default_value_t = 0.1)]
    pub mu_l: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma_r: f64,
    #[arg(long, default_value_t = 0.2)]
    pub sigma_l: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma_c: f64,
    #[arg(long, default_value_t = DEFAULT_NOISE_SIGMA)]
    pub noise_sigma: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = 5)]
    pub patch_size: usize,
    #[arg(long, default_value_t = 10)]
    pub outer_iters: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub cg_tol: f64,
    #[arg(long)]
    pub no_precondition: bool,
    /// Multiply mu_r and mu_l by (noise_sigma / 0.001)^2.
    #[arg(long)]
    pub scale_mu_to_noise: bool,
    /// Record condition numbers of every system (slower).
    #[arg(long)]
    pub estimate_kappa: bool,
    #[arg(long)]
    pub threads: Option<usize>,
}

impl TuningArgs {
    pub fn params(&self) -> RetinexParams {
        let p = RetinexParams {
            gamma: self.gamma,
            mu_r: self.mu_r,
            mu_l: self.mu_l,
            sigma_r: self.sigma_r,
            sigma_l: self.sigma_l,
            sigma_c: self.sigma_c,
            patch_size: self.patch_size,
            outer_iters: self.outer_iters,
            cg_tol: self.cg_tol,
            precondition: !self.no_precondition,
            estimate_condition: self.estimate_kappa,
            ..RetinexParams::default()
        };
        if self.scale_mu_to_noise {
            p.scaled_to_noise(self.noise_sigma)
        } else {
            p
        }
    }
}

impl EnhanceArgs {
    pub fn config(&self) -> RunConfig {
        RunConfig {
            input_path: self.input.clone(),
            output_path: self.output.clone(),
            params: self.tuning.params(),
            noise_sigma: self.tuning.noise_sigma,
            seed: self.tuning.seed,
            report_path: self.report.clone(),
            reference_path: self.reference.clone(),
            resize_policy: self.resize,
            threads: self.tuning.threads,
        }
    }
}

/// Parses arguments, executes the subcommand and maps failures to exit codes.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Enhance(args) => run(&args.config()).map(|o| {
            let r = &o.report;
            println!(
                "enhanced {}x{} in {:.3} s: {} patches, {} CG iterations, LOE {:.4}",
                r.width,
                r.height,
                r.wall_time,
                r.enhance.patches.len(),
                r.enhance.total_cg_iterations(),
                r.loe.unwrap_or(f64::NAN)
            );
        }),
        Command::Bench(args) => {
            let t = &args.tuning;
            bench(
                &args.input_dir,
                &t.params(),
                t.noise_sigma,
                t.seed,
                t.threads,
            )
            .and_then(|rows| {
                let table = bench_table(&rows);
                print!("{table}");
                std::fs::write(&args.report, table)
                    .map_err(Error::from)
                    .at(Stage::Output)
            })
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
