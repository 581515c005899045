//! facelab — batch verification runs with machine-readable output.
//!
//! Every command prints one JSON document (or CSV where noted) whose
//! header echoes the fully resolved configuration, and exits 0 exactly
//! when every requested check passed.

mod config;

use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use config::{resolve_out_path, GlobalOpts, RunConfig};
use facelab::error::Error;
use facelab::finite::{
    build_example_matrices, coisometry_split, convex_hull, expected_moment, fock_moments,
    m4_face_analysis, numerical_range_boundary, row_contraction_check, RowTuple,
};
use facelab::io::{FaceDescriptionJson, FaceProblemJson, StateValueJson};
use facelab::poly::Poly;
use facelab::rkhs::{
    alpha_endpoint, extension_consistency, p0_matrix, pick_multiplier_psd_check,
    rank_one_identity_check, sot_sum_kernel_residuals, state_delta, state_psi,
    tau_face_coordinates, SElement,
};
use facelab::series::{b_sum_identity_residuals, coeffs_a, pick_check, CoefficientSequence};

#[derive(Parser)]
#[command(name = "facelab", version, about = "Numerical verification runs for kernel-space operator systems")]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check positivity of the inverted kernel coefficients up to the depth.
    Pick,
    /// Run the operator-identity battery: rank-one formula, PSD forms,
    /// and the boundary convergence sweeps.
    Lemmas,
    /// Report the extension face: kernel-space endpoints by default, the
    /// built-in 4×4 example with --builtin m4, or a constraint file.
    Face {
        /// Built-in matrix example ("m4").
        #[arg(long)]
        builtin: Option<String>,
        /// Constraint-system JSON file.
        #[arg(long)]
        constraints: Option<PathBuf>,
        /// Map this extension value of the rank-one projection to its
        /// barycentric coordinate in the face interval.
        #[arg(long)]
        tau_p0: Option<f64>,
    },
    /// Emit numerical-range boundary points (CSV columns theta,alpha,beta).
    Numrange {
        /// Built-in matrix example ("m4").
        #[arg(long, default_value = "m4")]
        builtin: String,
    },
    /// Finite free-semigroup checks on the truncated model.
    Cuntz {
        #[command(subcommand)]
        action: CuntzAction,
    },
    /// Run the full verification battery for the configured space.
    VerifyAll,
}

#[derive(Subcommand)]
enum CuntzAction {
    /// Word moments of the fixed-vector state (JSON map word → value).
    Moments {
        /// Number of generators (2..=9).
        #[arg(long, default_value_t = 2)]
        d: usize,
    },
    /// Split a scalar row contraction into two co-isometries.
    Split {
        /// Comma-separated real entries of the row.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        lambda: Vec<f64>,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => {}
        Ok(false) => std::process::exit(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(1);
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    let (name, cfg, body, passed, failing) = match &cli.command {
        Command::Pick => cmd_pick(&cli.opts)?,
        Command::Lemmas => cmd_lemmas(&cli.opts)?,
        Command::Face {
            builtin,
            constraints,
            tau_p0,
        } => cmd_face(&cli.opts, builtin.as_deref(), constraints.as_deref(), *tau_p0)?,
        Command::Numrange { builtin } => {
            return cmd_numrange(&cli.opts, builtin);
        }
        Command::Cuntz { action } => cmd_cuntz(&cli.opts, action)?,
        Command::VerifyAll => cmd_verify_all(&cli.opts)?,
    };

    let document = envelope(name, &cfg, body, passed);
    emit(&document, &cli.opts)?;
    if !passed {
        eprintln!("failed checks: {}", failing.join(", "));
    }
    Ok(passed)
}

fn envelope(command: &str, cfg: &RunConfig, body: Value, passed: bool) -> String {
    let doc = json!({
        "header": {
            "tool": "facelab",
            "version": env!("CARGO_PKG_VERSION"),
            "command": command,
            "config": cfg,
        },
        "result": body,
        "passed": passed,
    });
    serde_json::to_string_pretty(&doc).expect("serializing output")
}

fn emit(text: &str, opts: &GlobalOpts) -> Result<()> {
    match &opts.out {
        Some(path) => {
            let target = resolve_out_path(path);
            if let Some(parent) = target.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent)?;
                }
            }
            std::fs::write(&target, text)
                .with_context(|| format!("writing {}", target.display()))?;
            eprintln!("wrote {}", target.display());
        }
        None => {
            use std::io::Write;
            // a closed pipe (e.g. piping into head) is not an error
            if let Err(e) = writeln!(std::io::stdout(), "{text}") {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    return Err(e.into());
                }
            }
        }
    }
    Ok(())
}

type CommandOutput = (&'static str, RunConfig, Value, bool, Vec<String>);

fn cmd_pick(opts: &GlobalOpts) -> Result<CommandOutput> {
    let cfg = RunConfig::resolve(opts, 200)?;
    let a = coeffs_a(&cfg.space()?)?;
    let report = pick_check(&a);
    let tol = cfg.tol.unwrap_or(1e-12);
    let passed = report.min_b >= -tol;
    let body = json!({
        "is_pick_up_to_depth": passed,
        "min_b": report.min_b,
        "first_negative_index": report.first_negative_index,
        "depth": a.depth(),
        "tolerance": tol,
    });
    let failing = if passed { vec![] } else { vec!["pick-positivity".into()] };
    Ok(("pick", cfg, body, passed, failing))
}

fn check(name: &str, status: &str, detail: Value) -> Value {
    json!({"check": name, "status": status, "detail": detail})
}

/// The identity battery shared by `lemmas` and `verify-all`.
fn lemma_checks(
    a: &CoefficientSequence,
    seed: u64,
    tol_exact: f64,
) -> Result<(Vec<Value>, Vec<String>)> {
    let mut results = Vec::new();
    let mut failing = Vec::new();
    let depth = a.depth();

    // rank-one identity on seeded random instances
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let poly_deg = 5.min(depth / 3).max(1);
    let f_deg = 10.min(depth - poly_deg);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let p = Poly::random(&mut rng, poly_deg, 0.5);
        let q = Poly::random(&mut rng, poly_deg, 0.5);
        let f: Vec<Complex64> = (0..=f_deg)
            .map(|_| Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)))
            .collect();
        worst = worst.max(rank_one_identity_check(&p, &q, &f, a)?);
    }
    let ok = worst <= tol_exact;
    if !ok {
        failing.push("rank-one-identity".into());
    }
    results.push(check(
        "rank-one-identity",
        if ok { "pass" } else { "fail" },
        json!({"max_residual": worst, "instances": 20, "tolerance": tol_exact}),
    ));

    // restricted PSD forms
    let m = 40.min(depth / 6).max(1);
    let n = 200.min(depth - m);
    let (lam_sigma, lam_p0) = pick_multiplier_psd_check(a, m, n)?;
    let ok = lam_sigma >= -1e-10 && lam_p0 >= -1e-10;
    if !ok {
        failing.push("psd-forms".into());
    }
    results.push(check(
        "psd-forms",
        if ok { "pass" } else { "fail" },
        json!({"lambda_min_sigma": lam_sigma, "lambda_min_sigma_p0": lam_p0, "m": m, "n": n}),
    ));

    // interior kernel-sum identity
    let half = Complex64::new(0.5, 0.0);
    let interior = sot_sum_kernel_residuals(a, half, half, &[depth / 2, depth])?;
    let ok = interior.last().copied().unwrap_or(f64::INFINITY) <= 1e-9;
    if !ok {
        failing.push("sot-interior".into());
    }
    results.push(check(
        "sot-interior",
        if ok { "pass" } else { "fail" },
        json!({"residuals": interior, "depths": [depth / 2, depth]}),
    ));

    // boundary sweeps need a certified tail
    if a.tail_bound().is_some() {
        let sweep: Vec<usize> = [depth / 8, depth / 4, depth / 2, depth]
            .iter()
            .copied()
            .filter(|&d| d >= 1)
            .collect();
        let one = Complex64::new(1.0, 0.0);
        let sot = sot_sum_kernel_residuals(a, one, one, &sweep)?;
        let decreasing = sot.windows(2).all(|w| w[1] < w[0]);
        let ok = decreasing && sot.last().copied().unwrap_or(f64::INFINITY) < 1e-3;
        if !ok {
            failing.push("sot-boundary".into());
        }
        results.push(check(
            "sot-boundary",
            if ok { "pass" } else { "fail" },
            json!({"residuals": sot, "depths": sweep, "decreasing": decreasing}),
        ));

        let bsum = b_sum_identity_residuals(a, &sweep)?;
        let decreasing = bsum.windows(2).all(|w| w[1] < w[0]);
        let ok = decreasing && bsum.last().copied().unwrap_or(f64::INFINITY) < 1e-3;
        if !ok {
            failing.push("b-sum-identity".into());
        }
        results.push(check(
            "b-sum-identity",
            if ok { "pass" } else { "fail" },
            json!({"residuals": bsum, "depths": sweep, "decreasing": decreasing}),
        ));
    } else {
        results.push(check("sot-boundary", "skipped-unbounded-kernel", Value::Null));
        results.push(check("b-sum-identity", "skipped-unbounded-kernel", Value::Null));
    }

    Ok((results, failing))
}

fn cmd_lemmas(opts: &GlobalOpts) -> Result<CommandOutput> {
    let cfg = RunConfig::resolve(opts, 2000)?;
    let a = coeffs_a(&cfg.space()?)?;
    let (results, failing) = lemma_checks(&a, cfg.seed, cfg.tol.unwrap_or(1e-12))?;
    let passed = failing.is_empty();
    Ok(("lemmas", cfg, json!({"checks": results}), passed, failing))
}

fn cmd_face(
    opts: &GlobalOpts,
    builtin: Option<&str>,
    constraints: Option<&std::path::Path>,
    tau_p0: Option<f64>,
) -> Result<CommandOutput> {
    let cfg = RunConfig::resolve(opts, 5000)?;
    match (builtin, constraints) {
        (Some("m4"), _) => {
            let report = m4_face_analysis()?;
            let beta_pinned =
                report.beta_range.min.abs() <= 1e-9 && report.beta_range.max.abs() <= 1e-9;
            let geometry_ok = report.face.affine_dimension == 3 && beta_pinned;
            let body = json!({
                "face": FaceDescriptionJson::from(&report.face),
                "alpha_range": range_json(&report.alpha_range),
                "beta_range": range_json(&report.beta_range),
            });
            let failing = if geometry_ok { vec![] } else { vec!["m4-face-geometry".into()] };
            Ok(("face", cfg, body, geometry_ok, failing))
        }
        (Some(other), _) => bail!("unknown builtin \"{other}\" (available: m4)"),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let problem: FaceProblemJson = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", path.display()))?;
            let (constraints, objective) = problem.parse()?;
            match facelab::face::face_dimension(&constraints, problem.n) {
                Ok(face) => {
                    let mut body = json!({"face": FaceDescriptionJson::from(&face)});
                    if let Some(h) = objective {
                        let range = facelab::face::functional_range(&constraints, &h, problem.n)?;
                        body["objective_range"] = range_json(&range);
                    }
                    Ok(("face", cfg, body, true, vec![]))
                }
                Err(e @ (Error::EmptyFace | Error::Infeasible(_))) => {
                    let body = json!({"error": e.to_string()});
                    Ok(("face", cfg, body, false, vec!["face-resolution".into()]))
                }
                Err(e) => Err(e.into()),
            }
        }
        (None, None) => {
            let a = coeffs_a(&cfg.space()?)?;
            if a.tail_bound().is_none() {
                let body = json!({
                    "error": "the face interval needs a bounded kernel (certified tail); \
                              power-law scales require s < -1"
                });
                return Ok(("face", cfg, body, false, vec!["face-endpoints".into()]));
            }
            let (alpha, alpha_err) = alpha_endpoint(&a)?;
            let psi_p0 = state_psi(&p0_matrix(0, 0), &a)?;
            let delta_p0 = state_delta(&SElement::Compact(p0_matrix(0, 0)))?;
            let mut body = json!({
                "alpha": {"value": alpha, "error_bound": alpha_err},
                "endpoints": {
                    "psi_p0": StateValueJson::from(&psi_p0),
                    "delta_p0": StateValueJson::from(&delta_p0),
                },
                "interval": "extensions are the segment t*psi + (1-t)*delta, 0 <= t <= 1",
            });
            let mut passed = true;
            let mut failing = vec![];
            if let Some(value) = tau_p0 {
                match tau_face_coordinates(value, &a) {
                    Ok(t) => {
                        body["tau_p0"] = json!(value);
                        body["t"] = json!(t);
                    }
                    Err(e @ Error::OutOfFace { .. }) => {
                        body["tau_p0"] = json!(value);
                        body["error"] = json!(e.to_string());
                        passed = false;
                        failing.push("tau-in-face".into());
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            Ok(("face", cfg, body, passed, failing))
        }
    }
}

fn range_json(r: &facelab::face::FunctionalRange) -> Value {
    json!({"min": r.min, "max": r.max, "tier": r.tier.name(), "certified": r.certified})
}

fn cmd_numrange(opts: &GlobalOpts, builtin: &str) -> Result<bool> {
    let cfg = RunConfig::resolve_with_format(opts, 200, config::OutputFormat::Csv)?;
    if builtin != "m4" {
        bail!("unknown builtin \"{builtin}\" (available: m4)");
    }
    let (a, b) = build_example_matrices();
    let pts = numerical_range_boundary(&a, &b, cfg.grid)?;
    let alpha_ok = pts.iter().all(|p| p.alpha >= -1e-10 && p.alpha <= 1.0 + 1e-10);

    let text = if cfg.format == "json" {
        let points: Vec<Value> = pts
            .iter()
            .map(|p| json!({"theta": p.theta, "alpha": p.alpha, "beta": p.beta, "degenerate": p.degenerate}))
            .collect();
        let hull = convex_hull(&pts.iter().map(|p| (p.alpha, p.beta)).collect::<Vec<_>>());
        let hull_json: Vec<Value> = hull.iter().map(|v| json!([v.0, v.1])).collect();
        envelope(
            "numrange",
            &cfg,
            json!({"points": points, "hull": hull_json, "alpha_in_unit_interval": alpha_ok}),
            alpha_ok,
        )
    } else {
        let mut out = String::new();
        out.push_str(&format!(
            "# facelab numrange builtin={builtin} grid={} seed={} version={}\n",
            cfg.grid,
            cfg.seed,
            env!("CARGO_PKG_VERSION")
        ));
        out.push_str("theta,alpha,beta\n");
        for p in &pts {
            out.push_str(&format!("{},{},{}\n", p.theta, p.alpha, p.beta));
        }
        out
    };
    emit(&text, opts)?;
    if !alpha_ok {
        eprintln!("failed checks: alpha-range");
    }
    Ok(alpha_ok)
}

fn cmd_cuntz(opts: &GlobalOpts, action: &CuntzAction) -> Result<CommandOutput> {
    match action {
        CuntzAction::Moments { d } => {
            let cfg = RunConfig::resolve(opts, 6)?;
            let report = fock_moments(*d, cfg.depth)?;
            let mut moments = BTreeMap::new();
            let mut pattern_ok = true;
            for m in &report.moments {
                let word: String = m.word.iter().map(|l| (b'0' + l) as char).collect();
                pattern_ok &= (m.value.re - expected_moment(&m.word)).abs() <= 1e-15
                    && m.value.im.abs() <= 1e-15;
                moments.insert(word, m.value.re);
            }
            let wandering_ok = report.wandering_max_abs <= 1e-12;
            let passed = pattern_ok && wandering_ok;
            let body = json!({
                "d": d,
                "depth": cfg.depth,
                "moments": moments,
                "pattern_ok": pattern_ok,
                "wandering_max_abs": report.wandering_max_abs,
                "wandering_checked": report.wandering_checked,
            });
            let mut failing = vec![];
            if !pattern_ok {
                failing.push("moment-pattern".into());
            }
            if !wandering_ok {
                failing.push("wandering-vectors".into());
            }
            Ok(("cuntz-moments", cfg, body, passed, failing))
        }
        CuntzAction::Split { lambda } => {
            let cfg = RunConfig::resolve(opts, 6)?;
            let entries: Vec<Complex64> =
                lambda.iter().map(|&v| Complex64::new(v, 0.0)).collect();
            let x = RowTuple::scalar(&entries)?;
            match coisometry_split(&x) {
                Ok((y, z)) => {
                    let to_pairs = |t: &RowTuple| -> Vec<Value> {
                        t.blocks()
                            .iter()
                            .map(|b| json!([b[(0, 0)].re, b[(0, 0)].im]))
                            .collect()
                    };
                    let avg_residual = {
                        let avg = (y.row_matrix() + z.row_matrix())
                            .map(|e| e * Complex64::new(0.5, 0.0));
                        (avg - x.row_matrix()).norm()
                    };
                    let y_report = row_contraction_check(&y);
                    let z_report = row_contraction_check(&z);
                    let passed = y_report.is_coisometry
                        && z_report.is_coisometry
                        && avg_residual <= 1e-10;
                    let body = json!({
                        "input": lambda,
                        "y": to_pairs(&y),
                        "z": to_pairs(&z),
                        "reconstruction_residual": avg_residual,
                        "y_defect_norm": y_report.defect_norm,
                        "z_defect_norm": z_report.defect_norm,
                    });
                    let failing = if passed { vec![] } else { vec!["coisometry-split".into()] };
                    Ok(("cuntz-split", cfg, body, passed, failing))
                }
                Err(e @ (Error::AlreadyExtreme | Error::RankDeficient)) => {
                    let body = json!({"input": lambda, "error": e.to_string()});
                    Ok(("cuntz-split", cfg, body, false, vec!["coisometry-split".into()]))
                }
                Err(e) => Err(e.into()),
            }
        }
    }
}

fn cmd_verify_all(opts: &GlobalOpts) -> Result<CommandOutput> {
    let cfg = RunConfig::resolve(opts, 2000)?;
    let mut results = Vec::new();
    let mut failing = Vec::new();

    // positivity at the pick depth
    let pick_depth = opts.depth.unwrap_or(200);
    let spec = RunConfig {
        depth: pick_depth,
        ..cfg.clone()
    }
    .space()?;
    let a_pick = coeffs_a(&spec)?;
    let report = pick_check(&a_pick);
    let ok = report.is_pick_up_to_depth;
    if !ok {
        failing.push("pick-positivity".into());
    }
    results.push(check(
        "pick-positivity",
        if ok { "pass" } else { "fail" },
        json!({"min_b": report.min_b, "depth": pick_depth}),
    ));

    // identity battery at the working depth
    let a = coeffs_a(&cfg.space()?)?;
    let (lemma_results, lemma_failing) = lemma_checks(&a, cfg.seed, cfg.tol.unwrap_or(1e-12))?;
    results.extend(lemma_results);
    failing.extend(lemma_failing);

    if a.tail_bound().is_some() {
        // face endpoints at a depth deep enough for the zeta-level target
        let face_depth = opts.depth.unwrap_or(5000);
        let a_face = coeffs_a(&RunConfig { depth: face_depth, ..cfg.clone() }.space()?)?;
        let (alpha, alpha_err) = alpha_endpoint(&a_face)?;
        let psi_p0 = state_psi(&p0_matrix(0, 0), &a_face)?;
        let delta_p0 = state_delta(&SElement::Compact(p0_matrix(0, 0)))?;
        let gap = (psi_p0.value - delta_p0.value).norm();
        let ok = (psi_p0.value.re - alpha).abs() <= psi_p0.error_bound + alpha_err && gap > 0.0;
        if !ok {
            failing.push("face-endpoints".into());
        }
        results.push(check(
            "face-endpoints",
            if ok { "pass" } else { "fail" },
            json!({
                "alpha": alpha,
                "alpha_error_bound": alpha_err,
                "psi_p0": StateValueJson::from(&psi_p0),
                "delta_p0": StateValueJson::from(&delta_p0),
                "interval_length": gap,
            }),
        ));

        // extension consistency on seeded products
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut all_within = true;
        let mut worst: f64 = 0.0;
        for _ in 0..50 {
            let dp = rng.gen_range(0..=5);
            let dq = rng.gen_range(0..=5);
            let p = Poly::random(&mut rng, dp, 0.5);
            let q = Poly::random(&mut rng, dq, 0.5);
            let window = 80.min(a.depth());
            let r = extension_consistency(&p, &q, &a, window)?;
            all_within &= r.within_bounds;
            worst = worst.max(r.max_deviation);
        }
        if !all_within {
            failing.push("extension-consistency".into());
        }
        results.push(check(
            "extension-consistency",
            if all_within { "pass" } else { "fail" },
            json!({"instances": 50, "max_deviation": worst}),
        ));
    } else {
        results.push(check("face-endpoints", "skipped-unbounded-kernel", Value::Null));
        results.push(check(
            "extension-consistency",
            "skipped-unbounded-kernel",
            Value::Null,
        ));
    }

    let passed = failing.is_empty();
    Ok(("verify-all", cfg, json!({"checks": results}), passed, failing))
}
