//! Plain-text run report.
//!
//! ```text
//! # gsp-retinex report v1
//! config key=value ...
//! patch row=R col=C outer_iterations=N converged=B cg_iterations=N
//! solve row=R col=C outer=K kind=reflectance|illumination iterations=N residual=F converged=B kappa_before=F|na kappa_after=F|na wall_time=F
//! ...
//! summary {
//!   key = value
//!   ...
//! }
//! ```
//!
//! Every `patch` line is followed by its `solve` lines; patches appear in
//! row-major tile order. Keys ending in `wall_time` are the only fields that vary
//! between identical runs. Missing values are written as `na`.

use std::fmt::Write as _;

use crate::retinex::{EnhanceReport, KappaStats, RetinexParams};

#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub input: String,
    pub output: String,
    pub width: usize,
    pub height: usize,
    pub channels: usize,
    pub noise_sigma: f64,
    pub seed: u64,
    pub params: RetinexParams,
    pub enhance: EnhanceReport,
    pub loe: Option<f64>,
    /// `(MSE, PSNR)` against a clean reference, when one was given.
    pub reference: Option<(f64, f64)>,
    /// Seconds, whole run including I/O.
    pub wall_time: f64,
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "na".to_string(), |v| v.to_string())
}

impl RunReport {
    /// Key/value pairs of the summary block, in output order.
    pub fn summary_fields(&self) -> Vec<(&'static str, String)> {
        let e = &self.enhance;
        let kb = e.kappa_before();
        let ka = e.kappa_after();
        let mean = |k: Option<KappaStats>| opt(k.map(|k| k.mean));
        let max = |k: Option<KappaStats>| opt(k.map(|k| k.max));
        vec![
            ("patches", e.patches.len().to_string()),
            ("solves", e.total_solves().to_string()),
            ("cg_iterations", e.total_cg_iterations().to_string()),
            ("outer_iterations", e.total_outer_iterations().to_string()),
            ("unconverged_patches", e.unconverged_patches().to_string()),
            ("kappa_before_mean", mean(kb)),
            ("kappa_before_max", max(kb)),
            ("kappa_after_mean", mean(ka)),
            ("kappa_after_max", max(ka)),
            ("loe", opt(self.loe)),
            ("mse", opt(self.reference.map(|r| r.0))),
            ("psnr", opt(self.reference.map(|r| r.1))),
            ("enhance_wall_time", e.wall_time.to_string()),
            ("wall_time", self.wall_time.to_string()),
        ]
    }

    pub fn to_text(&self) -> String {
        let p = &self.params;
        let mut s = String::from("# gsp-retinex report v1\n");
        let _ = writeln!(
            s,
            "config input={} output={} width={} height={} channels={} noise_sigma={} seed={} \
             gamma={} mu_r={} mu_l={} sigma_r={} sigma_l={} sigma_c={} radius={} patch_size={} \
             outer_iters={} outer_tol={} cg_tol={} precondition={}",
            self.input,
            self.output,
            self.width,
            self.height,
            self.channels,
            self.noise_sigma,
            self.seed,
            p.gamma,
            p.mu_r,
            p.mu_l,
            p.sigma_r,
            p.sigma_l,
            p.sigma_c,
            p.neighborhood_radius,
            p.patch_size,
            p.outer_iters,
            p.outer_tol,
            p.cg_tol,
            p.precondition
        );
        for patch in &self.enhance.patches {
            let _ = writeln!(
                s,
                "patch row={} col={} outer_iterations={} converged={} cg_iterations={}",
                patch.row,
                patch.col,
                patch.outer_iterations,
                patch.converged,
                patch.cg_iterations()
            );
            for solve in &patch.solves {
                let r = &solve.report;
                let _ = writeln!(
                    s,
                    "solve row={} col={} outer={} kind={} iterations={} residual={:e} \
                     converged={} kappa_before={} kappa_after={} wall_time={}",
                    patch.row,
                    patch.col,
                    solve.outer,
                    solve.kind,
                    r.iterations,
                    r.final_relative_residual,
                    r.converged,
                    opt(r.kappa_before),
                    opt(r.kappa_after),
                    r.wall_time
                );
            }
        }
        s.push_str("summary {\n");
        for (k, v) in self.summary_fields() {
            let _ = writeln!(s, "  {k} = {v}");
        }
        s.push_str("}\n");
        s
    }
}

/// One row of the benchmark table.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub name: String,
    pub width: usize,
    pub height: usize,
    pub seconds: f64,
    pub cg_iterations: usize,
    pub loe: f64,
}

/// Fixed-width timing table with an average row.
pub fn bench_table(rows: &[BenchRow]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<24} {:>12} {:>10} {:>12} {:>8}",
        "Image", "Resolution", "Time (s)", "CG iters", "LOE"
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{:<24} {:>12} {:>10.2} {:>12} {:>8.4}",
            r.name,
            format!("{}x{}", r.width, r.height),
            r.seconds,
            r.cg_iterations,
            r.loe
        );
    }
    if !rows.is_empty() {
        let n = rows.len() as f64;
        let _ = writeln!(
            s,
            "{:<24} {:>12} {:>10.2} {:>12.0} {:>8.4}",
            "Average",
            "",
            rows.iter().map(|r| r.seconds).sum::<f64>() / n,
            rows.iter().map(|r| r.cg_iterations as f64).sum::<f64>() / n,
            rows.iter().map(|r| r.loe).sum::<f64>() / n
        );
    }
    s
}
