//! Acceptance suite. Runs every criterion in sequence (timings in AC8 must not
//! compete with other tests) and prints one PASS/FAIL line per criterion.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::*;
use gsp_retinex::cli::{add_noise, run, save_png, RunConfig};
use gsp_retinex::graphs::{
    build_line_graph, illumination_gng_laplacian, laplacian, Bandwidth, GraphParams,
};
use gsp_retinex::linalg::{
    build_jacobi, cg_solve, dense_solve_oracle, symmetric_eigenvalues, SparseSymMatrix,
};
use gsp_retinex::metrics::{loe, mse_psnr, DEFAULT_LOE_COLUMNS};
use gsp_retinex::retinex::{
    assemble_illumination_system, assemble_reflectance_system, enhance_image,
    illumination_gradient, illumination_objective, reflectance_gradient, reflectance_objective,
    LineLaplacians, PatchSystem, PlanarImage, RetinexParams,
};
use rand::RngExt;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn reflectance_system(ps: &PatchSystem, gp: &GraphParams) -> (SparseSymMatrix, Vec<f64>) {
    let laps = LineLaplacians::reflectance(&ps.r, ps.n, gp).unwrap();
    assemble_reflectance_system(ps, &laps).unwrap()
}

fn illumination_system(ps: &PatchSystem, gp: &GraphParams) -> (SparseSymMatrix, Vec<f64>) {
    let laps = LineLaplacians::illumination(&ps.l, ps.n, gp).unwrap();
    assemble_illumination_system(ps, &laps).unwrap()
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(|a, b| a.total_cmp(b));
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    sorted[((sorted.len() - 1) as f64 * q).round() as usize]
}

fn ac1_solver_correctness() -> Outcome {
    let params = RetinexParams::default();
    let gp = params.graph_params();
    let mut rng = rng(1);
    let mut worst = 0.0f64;
    let mut worst_assembly = 0.0f64;
    let mut count = 0;
    for i in 0..200 {
        let ps = random_patch(&mut rng, 5, (0.01, 1.0), params.mu_r, params.mu_l);
        for (kind, (a, b), (da, db)) in [
            (
                "reflectance",
                reflectance_system(&ps, &gp),
                dense_reflectance_system(&ps, &gp),
            ),
            (
                "illumination",
                illumination_system(&ps, &gp),
                dense_illumination_system(&ps, &gp),
            ),
        ] {
            let diff = max_abs_diff(&a.to_dense(), &da);
            worst_assembly = worst_assembly.max(diff);
            ensure(diff <= 1e-12 && b == db, || {
                format!("{kind} instance {i}: sparse assembly differs from dense build by {diff:e}")
            })?;
            let oracle = dense_solve_oracle(&da, &db).map_err(|e| e.to_string())?;
            for pre in [None, Some(build_jacobi(&a).unwrap())] {
                let (x, rep) =
                    cg_solve(&a, &b, 1e-10, 1000, pre.as_ref()).map_err(|e| e.to_string())?;
                let err = rel_inf_err(&x, &oracle);
                worst = worst.max(err);
                count += 1;
                ensure(rep.converged && err <= 1e-8, || {
                    format!(
                        "{kind} instance {i} (preconditioned={}): rel err {err:e}, converged={}",
                        pre.is_some(),
                        rep.converged
                    )
                })?;
            }
        }
    }
    Ok(format!(
        "{count} CG solves vs dense LU, max rel inf-norm err {worst:.2e}; sparse vs dense assembly max diff {worst_assembly:.1e}"
    ))
}

fn ac2_positive_definite() -> Outcome {
    let params = RetinexParams::default();
    let gp = params.graph_params();
    let mut rng = rng(2);
    let mut min_refl = f64::INFINITY;
    let mut min_illum = f64::INFINITY;
    for i in 0..100 {
        let ps = random_patch(&mut rng, 5, (0.01, 1.0), params.mu_r, params.mu_l);
        let (a, _) = reflectance_system(&ps, &gp);
        let dense = a.to_dense();
        for r in 0..a.dim() {
            let off: f64 = (0..a.dim())
                .filter(|&c| c != r)
                .map(|c| dense[(r, c)].abs())
                .sum();
            ensure(dense[(r, r)] >= off, || {
                format!(
                    "reflectance instance {i}, row {r}: A_ii {} < off-diagonal sum {off}",
                    dense[(r, r)]
                )
            })?;
        }
        let lmin = symmetric_eigenvalues(&dense).unwrap()[0];
        min_refl = min_refl.min(lmin);
        ensure(lmin > 0.0, || {
            format!("reflectance instance {i}: lambda_min {lmin:e}")
        })?;

        let (a, _) = illumination_system(&ps, &gp);
        let lmin = symmetric_eigenvalues(&a.to_dense()).unwrap()[0];
        min_illum = min_illum.min(lmin);
        ensure(lmin > 0.0, || {
            format!("illumination instance {i}: lambda_min {lmin:e}")
        })?;
    }
    Ok(format!(
        "100 + 100 systems; reflectance all diagonally dominant, min lambda_min {min_refl:.2e}; illumination min lambda_min {min_illum:.2e}"
    ))
}

fn kappa(a: &SparseSymMatrix) -> f64 {
    let ev = symmetric_eigenvalues(&a.to_dense()).unwrap();
    ev[ev.len() - 1] / ev[0]
}

fn ac3_preconditioner() -> Outcome {
    let params = RetinexParams::default();
    let gp = params.graph_params();
    let mut rng = rng(3);
    let mut reductions = Vec::new();
    let mut kappas = Vec::new();
    let mut iters_plain = Vec::new();
    let mut iters_pre = Vec::new();
    let mut improved = 0;
    let mut worst_diag = 0.0f64;
    let mut rejected = 0;
    while reductions.len() < 100 {
        let ps = random_patch(&mut rng, 5, (0.001, 0.01), params.mu_r, params.mu_l);
        let (a, b) = reflectance_system(&ps, &gp);
        let k_a = kappa(&a);
        if k_a < 1e3 {
            rejected += 1;
            ensure(rejected < 1000, || {
                "could not generate ill-conditioned instances".into()
            })?;
            continue;
        }
        let p = build_jacobi(&a).unwrap();
        let pap = p.precondition(&a).unwrap();
        for d in pap.diagonal() {
            worst_diag = worst_diag.max((d - 1.0).abs());
        }
        let k_p = kappa(&pap);
        if k_p < k_a {
            improved += 1;
        }
        reductions.push(1.0 - k_p / k_a);
        kappas.push(k_a);
        let max_iter = 10_000;
        let (_, plain) = cg_solve(&a, &b, 1e-6, max_iter, None).unwrap();
        let (_, pre) = cg_solve(&a, &b, 1e-6, max_iter, Some(&p)).unwrap();
        ensure(plain.converged && pre.converged, || {
            "CG did not converge".into()
        })?;
        iters_plain.push(plain.iterations as f64);
        iters_pre.push(pre.iterations as f64);
    }
    ensure(worst_diag <= 1e-12, || {
        format!("preconditioned diagonal off by {worst_diag:e}")
    })?;
    ensure(improved >= 95, || {
        format!("kappa reduced in only {improved}/100 instances")
    })?;
    let med_plain = median(&mut iters_plain);
    let med_pre = median(&mut iters_pre);
    ensure(med_pre <= med_plain, || {
        format!("median iterations {med_pre} preconditioned vs {med_plain} plain")
    })?;

    // Reduction on the most ill-conditioned quarter.
    let mut pairs: Vec<(f64, f64)> = kappas
        .iter()
        .copied()
        .zip(reductions.iter().copied())
        .collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut top: Vec<f64> = pairs[..25].iter().map(|p| p.1).collect();
    let top_median = median(&mut top);
    reductions.sort_by(|a, b| a.total_cmp(b));
    kappas.sort_by(|a, b| a.total_cmp(b));
    Ok(format!(
        "kappa(A) in [{:.2e}, {:.2e}]; reduced in {improved}/100; reduction quantiles 5/25/50/75/95% = {:.0}/{:.0}/{:.0}/{:.0}/{:.0}%; top-quartile median {:.0}%; median CG iters {med_pre} vs {med_plain}; unit diag err {worst_diag:.0e}",
        kappas[0],
        kappas[99],
        100.0 * quantile(&reductions, 0.05),
        100.0 * quantile(&reductions, 0.25),
        100.0 * quantile(&reductions, 0.5),
        100.0 * quantile(&reductions, 0.75),
        100.0 * quantile(&reductions, 0.95),
        100.0 * top_median
    ))
}

fn ac4_gglr_nullspace() -> Outcome {
    let gp = GraphParams::default();
    let mut rng = rng(4);
    let mut worst_ratio = 0.0f64;
    let mut smallest_positive = f64::INFINITY;
    for i in 0..1000 {
        let m = rng.random_range(5..=64);
        let a = rng.random_range(-1.0..1.0);
        let b = rng.random_range(-0.05..0.05);
        let x: Vec<f64> = (0..m).map(|k| a + b * k as f64).collect();
        let lap = illumination_gng_laplacian(&x, &gp).unwrap();
        let value = lap.quadratic_form(&x).unwrap();
        let scale = x.iter().map(|v| v * v).sum::<f64>() * lap.norm_inf().max(1.0);
        worst_ratio = worst_ratio.max(value.abs() / scale);
        ensure(value.abs() <= 1e-12 * scale, || {
            format!("affine signal {i} (len {m}): GGLR {value:e}, scale {scale:e}")
        })?;
    }
    for i in 0..1000 {
        let m = rng.random_range(5..=64);
        let a = rng.random_range(-1.0..1.0);
        let b = rng.random_range(-0.05..0.05);
        let amp = rng.random_range(0.01..0.2);
        let x: Vec<f64> = (0..m)
            .map(|k| a + b * k as f64 + amp * rng.random_range(-1.0..1.0))
            .collect();
        let value = illumination_gng_laplacian(&x, &gp)
            .unwrap()
            .quadratic_form(&x)
            .unwrap();
        smallest_positive = smallest_positive.min(value);
        ensure(value > 0.0, || {
            format!("non-affine signal {i} (len {m}): GGLR {value:e}")
        })?;
    }
    Ok(format!(
        "affine: max |GGLR|/scale {worst_ratio:.1e}; non-affine: min GGLR {smallest_positive:.2e}"
    ))
}

fn ac5_glr_edge_sum() -> Outcome {
    let mut rng = rng(5);
    let mut worst = 0.0f64;
    for i in 0..1000 {
        let m = rng.random_range(2..=64);
        let gp = GraphParams {
            sigma_r: rng.random_range(0.05..2.0),
            sigma_c: rng.random_range(0.5..3.0),
            neighborhood_radius: rng.random_range(1..=4),
            ..GraphParams::default()
        };
        let values = uniform_vec(&mut rng, m, 0.0, 1.0);
        let g = build_line_graph(&values, &gp, Bandwidth::Reflectance).unwrap();
        let x = uniform_vec(&mut rng, m, -1.0, 1.0);
        let quad = laplacian(&g).quadratic_form(&x).unwrap();
        let edges: f64 = g
            .edges()
            .iter()
            .map(|e| e.w * (x[e.i] - x[e.j]).powi(2))
            .sum();
        let rel = (quad - edges).abs() / edges.abs().max(f64::MIN_POSITIVE);
        worst = worst.max(rel);
        ensure(rel <= 1e-10, || {
            format!("pair {i}: x'Lx {quad} vs edge sum {edges}")
        })?;
    }
    Ok(format!("1000 pairs, max rel diff {worst:.1e}"))
}

/// Piecewise-constant reflectance (nearest of a few random seeds) under a
/// dim planar illumination ramp.
fn synthetic_scene(h: usize, w: usize, seed: u64) -> (PlanarImage, PlanarImage, f64) {
    let mut rng = rng(seed);
    let seeds: Vec<(f64, f64, f64)> = (0..10)
        .map(|_| {
            (
                rng.random_range(0.0..h as f64),
                rng.random_range(0.0..w as f64),
                rng.random_range(0.2..1.0),
            )
        })
        .collect();
    let refl = |y: usize, x: usize| {
        seeds
            .iter()
            .min_by(|a, b| {
                let da = (a.0 - y as f64).powi(2) + (a.1 - x as f64).powi(2);
                let db = (b.0 - y as f64).powi(2) + (b.1 - x as f64).powi(2);
                da.total_cmp(&db)
            })
            .unwrap()
            .2
    };
    let illum = |y: usize, x: usize| 0.04 + 0.2 * (x + y) as f64 / (h + w) as f64;
    let gamma = 0.5;
    let clean = PlanarImage::from_fn(h, w, 1, |_, y, x| illum(y, x) * refl(y, x)).unwrap();
    let reference =
        PlanarImage::from_fn(h, w, 1, |_, y, x| illum(y, x).powf(gamma) * refl(y, x)).unwrap();
    (clean, reference, gamma)
}

fn ac6_denoising() -> Outcome {
    let start = Instant::now();
    let sigma = 0.01;
    let l = |a: &PlanarImage, b: &PlanarImage| loe(a, b, DEFAULT_LOE_COLUMNS).unwrap().value;
    let (clean, reference, gamma) = synthetic_scene(100, 100, 6);
    let noisy = add_noise(&clean, sigma, 66).unwrap();
    // Weights follow the noise level; the defaults are tuned for sigma = 0.001.
    let params = RetinexParams {
        gamma,
        ..RetinexParams::default()
    }
    .scaled_to_noise(sigma);
    let (out, _) = enhance_image(&noisy, &params).map_err(|e| e.to_string())?;
    let (mse_out, psnr_out) = mse_psnr(&out, &reference).unwrap();
    let (mse_noisy, psnr_noisy) = mse_psnr(&noisy, &reference).unwrap();
    let loe_out = l(&clean, &out);
    let loe_noisy = l(&clean, &noisy);
    let secs = start.elapsed().as_secs_f64();

    // Not gating: the same scene with unscaled weights.
    let defaults = RetinexParams {
        gamma,
        ..RetinexParams::default()
    };
    let (out_default, _) = enhance_image(&noisy, &defaults).map_err(|e| e.to_string())?;
    let loe_default = l(&clean, &out_default);
    let mse_default = mse_psnr(&out_default, &reference).unwrap().0;

    ensure(mse_out < mse_noisy, || {
        format!("MSE output {mse_out:e} vs noisy {mse_noisy:e}")
    })?;
    ensure(loe_out <= loe_noisy, || {
        format!("LOE output {loe_out} vs noisy {loe_noisy}")
    })?;
    ensure(secs < 60.0, || format!("took {secs:.1} s"))?;
    Ok(format!(
        "mu_r={} mu_l={}: MSE vs reference {mse_out:.2e} ({psnr_out:.1} dB) vs noisy {mse_noisy:.2e} ({psnr_noisy:.1} dB); LOE {loe_out:.4} vs noisy {loe_noisy:.4}; {secs:.1} s. Unscaled defaults: MSE {mse_default:.2e}, LOE {loe_default:.4}",
        params.mu_r, params.mu_l
    ))
}

fn ac7_fixed_point() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for (k, level) in [13u8, 64, 128, 230].into_iter().enumerate() {
        let v = level as f64 / 255.0;
        for channels in [1, 3] {
            let img = PlanarImage::from_fn(20, 25, channels, |_, _, _| v).unwrap();
            let input = dir.path().join(format!("const{k}_{channels}.png"));
            save_png(&img, &input).unwrap();
            let mut cfg = RunConfig::new(&input, dir.path().join("out.png"));
            cfg.noise_sigma = 0.0;
            let outcome = run(&cfg).map_err(|e| e.to_string())?;
            let expected = v.powf(cfg.params.gamma);
            for s in outcome.output.data() {
                worst = worst.max((s - expected).abs());
            }
        }
    }
    ensure(worst <= 1e-3, || format!("max deviation {worst:e}"))?;
    Ok(format!(
        "gray and RGB constants at 4 levels, max |out - v^gamma| {worst:.1e}"
    ))
}

fn textured(h: usize, w: usize) -> PlanarImage {
    PlanarImage::from_fn(h, w, 3, |c, y, x| {
        let base = 0.05 + 0.1 * (((x / 7 + y / 11) % 3) as f64) / 2.0;
        let ramp = 0.5 + 0.5 * (x as f64 / w as f64);
        base * ramp * [1.0, 0.8, 0.6][c]
    })
    .unwrap()
}

fn ac8_scaling() -> Outcome {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .map_err(|e| e.to_string())?;
    let params = RetinexParams::default();
    let small = add_noise(&textured(100, 100), 0.001, 8).unwrap();
    let large = add_noise(&textured(200, 200), 0.001, 8).unwrap();
    let time = |img: &PlanarImage| {
        pool.install(|| {
            let t = Instant::now();
            let (_, rep) = enhance_image(img, &params).unwrap();
            (t.elapsed().as_secs_f64(), rep)
        })
    };
    let mut ratios = Vec::new();
    let (mut per_patch_small, mut per_patch_large) = (0.0, 0.0);
    for _ in 0..3 {
        let (ts, rs) = time(&small);
        let (tl, rl) = time(&large);
        ratios.push(tl / ts);
        per_patch_small = rs.total_cg_iterations() as f64 / rs.patches.len() as f64;
        per_patch_large = rl.total_cg_iterations() as f64 / rl.patches.len() as f64;
    }
    let ratio = median(&mut ratios);
    let cost_ratio = per_patch_large / per_patch_small;
    ensure(ratio <= 5.0, || format!("median time ratio {ratio:.2}"))?;
    ensure((0.5..=2.0).contains(&cost_ratio), || {
        format!("per-patch CG iterations {per_patch_large:.1} vs {per_patch_small:.1}")
    })?;
    Ok(format!(
        "median time(200x200)/time(100x100) = {ratio:.2} over 3 runs; CG iterations per patch {per_patch_large:.1} vs {per_patch_small:.1}"
    ))
}

fn fd_check(f: impl Fn(&[f64]) -> f64, grad: &[f64], x: &[f64]) -> f64 {
    let mut fd = vec![0.0; x.len()];
    for i in 0..x.len() {
        let h = 1e-5 * x[i].abs().max(1e-2);
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[i] += h;
        xm[i] -= h;
        fd[i] = (f(&xp) - f(&xm)) / (2.0 * h);
    }
    rel_inf_err(&fd, grad)
}

fn ac9_gradient_check() -> Outcome {
    let params = RetinexParams::default();
    let gp = params.graph_params();
    let mut rng = rng(9);
    let (mut worst_r, mut worst_l) = (0.0f64, 0.0f64);
    for i in 0..50 {
        let ps = random_patch(&mut rng, 5, (0.01, 1.0), params.mu_r, params.mu_l);
        let x = uniform_vec(&mut rng, 25, 0.01, 1.0);

        let laps = LineLaplacians::reflectance(&ps.r, 5, &gp).unwrap();
        let g = reflectance_gradient(&ps, &laps, &x).unwrap();
        let err = fd_check(|v| reflectance_objective(&ps, &laps, v).unwrap(), &g, &x);
        worst_r = worst_r.max(err);
        ensure(err <= 1e-5, || {
            format!("reflectance instance {i}: rel err {err:e}")
        })?;

        let gng = LineLaplacians::illumination(&ps.l, 5, &gp).unwrap();
        let g = illumination_gradient(&ps, &gng, &x).unwrap();
        let err = fd_check(|v| illumination_objective(&ps, &gng, v).unwrap(), &g, &x);
        worst_l = worst_l.max(err);
        ensure(err <= 1e-5, || {
            format!("illumination instance {i}: rel err {err:e}")
        })?;
    }
    Ok(format!(
        "50 instances each; max rel err reflectance {worst_r:.1e}, illumination {worst_l:.1e}"
    ))
}

fn strip_timings(report: &str) -> String {
    report
        .lines()
        .map(|line| {
            line.split(' ')
                .filter(|tok| !tok.starts_with("wall_time="))
                .collect::<Vec<_>>()
                .join(" ")
        })
        .filter(|line| {
            !line.trim_start().starts_with("wall_time")
                && !line.trim_start().starts_with("enhance_wall_time")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn ac10_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let input = dir.path().join("in.png");
    save_png(&textured(60, 80), &input).unwrap();
    let mut reports = Vec::new();
    let mut images = Vec::new();
    for (k, threads) in [Some(1), Some(4), None].into_iter().enumerate() {
        let mut cfg = RunConfig::new(&input, dir.path().join(format!("out{k}.png")));
        cfg.report_path = Some(dir.path().join(format!("report{k}.txt")));
        cfg.seed = 10;
        cfg.threads = threads;
        let outcome = run(&cfg).map_err(|e| e.to_string())?;
        let text = std::fs::read_to_string(cfg.report_path.as_ref().unwrap()).unwrap();
        let file = std::fs::read(&cfg.output_path).unwrap();
        reports.push(strip_timings(&text).replace(&format!("out{k}.png"), "out.png"));
        images.push((outcome.output, file));
    }
    for k in 1..reports.len() {
        ensure(images[k] == images[0], || format!("run {k} output differs"))?;
        ensure(reports[k] == reports[0], || {
            format!("run {k} report differs")
        })?;
    }
    Ok(format!(
        "3 runs (1, 4, default threads): identical output samples, PNG bytes and {} report lines",
        reports[0].lines().count()
    ))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("AC1 solver correctness", ac1_solver_correctness),
        ("AC2 positive definiteness", ac2_positive_definite),
        ("AC3 preconditioner effect", ac3_preconditioner),
        ("AC4 GGLR nullspace", ac4_gglr_nullspace),
        ("AC5 GLR edge-sum", ac5_glr_edge_sum),
        ("AC6 denoising efficacy", ac6_denoising),
        ("AC7 fixed point", ac7_fixed_point),
        ("AC8 scaling", ac8_scaling),
        ("AC9 gradient check", ac9_gradient_check),
        ("AC10 determinism", ac10_determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let t = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = t.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {name} [{secs:.1}s]: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name} [{secs:.1}s]: {detail}");
            }
        }
    }
    println!("{} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
