//! Command implementations.

use std::path::Path;
use std::process::ExitCode;

use serde_json::json;

use mspi_core::alist::export_alist;
use mspi_core::code::{preset, preset_names, TwoBlockCssCode};
use mspi_core::code_spec::load_code_spec;
use mspi_core::decoder::{decode, DecoderConfig, DecoderVariant, PiAssignment};
use mspi_core::gf2::BitVector;
use mspi_core::monte_carlo::{classify, run_sweep, Side, TrialOutcome};
use mspi_core::recursion::{
    classify_convergence, first_stable_iteration, ms_eigen_spectrum, ms_one_color_trajectory,
    ms_two_color_trajectory, mspi_one_color_trajectory, mspi_two_color_trajectory, PiSide,
    StabilizerParams, CLASSIFY_WINDOW,
};
use mspi_core::tanner::TannerGraph;

use crate::manifest::RunManifest;
use crate::{
    CodeAction, CodeArgs, DecodeArgs, DecoderFlags, EigenArgs, PiBlockArg, RecursionArgs, SimArgs,
    SideArg, VariantArg,
};

/// Resolve a `--code` argument: preset name first, then spec file path.
fn load_code(arg: &str) -> Result<TwoBlockCssCode, String> {
    if preset_names().contains(&arg) {
        return preset(arg).map_err(|e| e.to_string());
    }
    let path = Path::new(arg);
    if path.exists() {
        return load_code_spec(path).map_err(|e| e.to_string());
    }
    Err(format!(
        "`{arg}` is neither a preset ({}) nor an existing spec file",
        preset_names().join(", ")
    ))
}

fn build_decoder_config(flags: &DecoderFlags, alpha: f64) -> Result<DecoderConfig, String> {
    let variant = match flags.variant {
        VariantArg::Ms => DecoderVariant::Ms,
        VariantArg::Nms => DecoderVariant::Nms,
        VariantArg::Dms => DecoderVariant::Dms,
        VariantArg::MsPi => DecoderVariant::MsPi,
    };
    let beta = flags.beta.unwrap_or(match variant {
        DecoderVariant::Ms => 1.0,
        _ => 0.875,
    });
    let config = DecoderConfig::new(variant, beta, flags.iters, alpha).map_err(|e| e.to_string())?;
    match flags.pi_block {
        None => Ok(config),
        Some(PiBlockArg::Yellow) => config
            .with_pi_assignment(PiAssignment::YellowOnly)
            .map_err(|e| e.to_string()),
        Some(PiBlockArg::Green) => config
            .with_pi_assignment(PiAssignment::GreenOnly)
            .map_err(|e| e.to_string()),
    }
}

fn decoder_config_json(config: &DecoderConfig) -> serde_json::Value {
    json!({
        "variant": config.variant().to_string(),
        "beta": config.beta(),
        "max_iters": config.max_iters(),
        "pi_assignment": config.pi_assignment().to_string(),
    })
}

// ---------------------------------------------------------------------------
// code
// ---------------------------------------------------------------------------

pub fn run_code(args: CodeArgs) -> Result<ExitCode, String> {
    let code = load_code(&args.code)?;
    // assemble() has already enforced commutation and CSS orthogonality;
    // restate the invariants here so `validate` means what it says.
    if !code.h_x().multiply(&code.h_z().transpose()).is_zero() {
        return Err("H_X * H_Z^T != 0".into());
    }
    if code.k() != code.n() - code.h_x().rank() - code.h_z().rank() {
        return Err("rank identity violated".into());
    }
    let w_a = code.block_a().row_weight(0);
    let w_b = code.block_b().row_weight(0);
    println!("n={} k={}", code.n(), code.k());
    println!("block weights: w_A={w_a} w_B={w_b}");
    if let Some(d) = code.claimed_distance() {
        println!("claimed distance: {d} (not verified)");
    }

    if matches!(args.action, CodeAction::Build | CodeAction::Export) {
        let dir = Path::new(&args.out_dir);
        std::fs::create_dir_all(dir).map_err(|e| format!("cannot create `{}`: {e}", args.out_dir))?;
        let stem = code.name().unwrap_or("code").to_string();
        let hx_path = dir.join(format!("{stem}.hx.alist"));
        let hz_path = dir.join(format!("{stem}.hz.alist"));
        std::fs::write(&hx_path, export_alist(code.h_x()))
            .map_err(|e| format!("cannot write `{}`: {e}", hx_path.display()))?;
        std::fs::write(&hz_path, export_alist(code.h_z()))
            .map_err(|e| format!("cannot write `{}`: {e}", hz_path.display()))?;
        let outputs = vec![
            hx_path.display().to_string(),
            hz_path.display().to_string(),
        ];
        let manifest = RunManifest::new(
            "code",
            json!({
                "code": args.code,
                "n": code.n(),
                "k": code.k(),
                "block_weights": [w_a, w_b],
            }),
        )
        .with_outputs(outputs.clone());
        manifest.write_alongside(&dir.join(stem).display().to_string())?;
        for out in outputs {
            println!("wrote {out}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// sim
// ---------------------------------------------------------------------------

pub fn run_sim(args: SimArgs) -> Result<ExitCode, String> {
    let code = load_code(&args.code)?;
    if args.alphas.is_empty() {
        return Err("at least one alpha is required".into());
    }
    // The per-alpha prior is set inside the sweep; any valid alpha works
    // here for config validation.
    let config = build_decoder_config(&args.decoder, args.alphas[0])?;
    let side = match args.side {
        SideArg::X => Side::X,
        SideArg::Z => Side::Z,
    };
    let result = run_sweep(
        &code,
        side,
        &config,
        &args.alphas,
        args.trials,
        args.seed,
        args.workers,
    )
    .map_err(|e| e.to_string())?;

    let csv = result.to_csv();
    std::fs::write(&args.out, &csv).map_err(|e| format!("cannot write `{}`: {e}", args.out))?;
    let json_path = format!("{}.json", args.out.trim_end_matches(".csv"));
    std::fs::write(&json_path, result.to_json() + "\n")
        .map_err(|e| format!("cannot write `{json_path}`: {e}"))?;

    let manifest = RunManifest::new(
        "sim",
        json!({
            "code": args.code,
            "n": code.n(),
            "k": code.k(),
            "side": side.to_string(),
            "decoder": decoder_config_json(&config),
            "alphas": args.alphas,
            "trials": args.trials,
            "workers_hint": args.workers,
        }),
    )
    .with_seed(args.seed)
    .with_outputs(vec![args.out.clone(), json_path.clone()]);
    manifest.write_alongside(&args.out)?;

    for row in &result.rows {
        println!(
            "alpha={} ler={:.6e} ci=[{:.3e}, {:.3e}] mean_iters={:.2}",
            row.alpha, row.ler, row.ci_low, row.ci_high, row.mean_iters
        );
    }
    println!("wrote {} and {json_path}", args.out);
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

pub fn run_recursion(args: RecursionArgs) -> Result<ExitCode, String> {
    let (params, swapped) =
        StabilizerParams::canonical(args.w, args.f, args.g).map_err(|e| e.to_string())?;
    let params = params
        .with_lambda(args.lambda)
        .map_err(|e| e.to_string())?
        .with_beta(args.beta)
        .map_err(|e| e.to_string())?
        .with_iterations(args.iters)
        .with_init(args.init);
    let requested_side = match args.pi_block {
        None | Some(PiBlockArg::Yellow) => PiSide::Yellow,
        Some(PiBlockArg::Green) => PiSide::Green,
    };
    // A color swap to the canonical split also swaps the rule side.
    let side = match (swapped, requested_side) {
        (false, s) => s,
        (true, PiSide::Yellow) => PiSide::Green,
        (true, PiSide::Green) => PiSide::Yellow,
    };
    if swapped {
        println!(
            "# note: canonicalized split to (f={}, g={}) by swapping colors",
            params.f(),
            params.g()
        );
    }

    let traj = match (args.rule, params.g()) {
        (crate::RuleArg::Ms, 0) => ms_one_color_trajectory(&params),
        (crate::RuleArg::Ms, _) => ms_two_color_trajectory(&params),
        (crate::RuleArg::MsPi, 0) => mspi_one_color_trajectory(&params, side),
        (crate::RuleArg::MsPi, _) => mspi_two_color_trajectory(&params, side),
    }
    .map_err(|e| e.to_string())?;

    let classification = if traj.estimates.len() > CLASSIFY_WINDOW {
        classify_convergence(&traj, CLASSIFY_WINDOW).to_string()
    } else {
        "Inconclusive".to_string()
    };
    let stable = first_stable_iteration(&traj)
        .map(|l| l.to_string())
        .unwrap_or_else(|| "-".to_string());
    let class_line = format!("# classification={classification} stable_from={stable}\n");

    let mut csv = traj.to_csv();
    csv.push_str(&class_line);
    match &args.out {
        Some(path) => {
            std::fs::write(path, &csv).map_err(|e| format!("cannot write `{path}`: {e}"))?;
            let manifest = RunManifest::new(
                "analyze-recursion",
                json!({
                    "w": args.w,
                    "f": params.f(),
                    "g": params.g(),
                    "rule": match args.rule { crate::RuleArg::Ms => "ms", crate::RuleArg::MsPi => "ms-pi" },
                    "pi_side": match side { PiSide::Yellow => "yellow", PiSide::Green => "green" },
                    "lambda": args.lambda,
                    "beta": args.beta,
                    "init": args.init,
                    "iterations": args.iters,
                }),
            )
            .with_outputs(vec![path.clone()]);
            manifest.write_alongside(path)?;
            println!("wrote {path}");
        }
        None => print!("{csv}"),
    }
    println!("classification: {classification} (stable from iteration {stable})");
    Ok(ExitCode::SUCCESS)
}

pub fn run_eigen(args: EigenArgs) -> Result<ExitCode, String> {
    let spectrum = ms_eigen_spectrum(args.w).map_err(|e| e.to_string())?;
    let fmt_value = |re: f64, im: f64| -> String {
        let trim = |x: f64| {
            let s = format!("{x:.7}");
            let s = s.trim_end_matches('0').trim_end_matches('.');
            s.to_string()
        };
        if im == 0.0 {
            trim(re)
        } else {
            format!("{}{}i", if im > 0.0 { "+" } else { "-" }, trim(im.abs()))
        }
    };
    let rendered: Vec<String> = spectrum.values.iter().map(|z| fmt_value(z.re, z.im)).collect();
    println!("{}", rendered.join(", "));
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// decode
// ---------------------------------------------------------------------------

fn read_bits(path: &str, expected_len: usize, what: &str) -> Result<BitVector, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read `{path}`: {e}"))?;
    let mut bits = Vec::new();
    for ch in text.chars() {
        match ch {
            '0' => bits.push(0u8),
            '1' => bits.push(1u8),
            c if c.is_whitespace() => {}
            c => return Err(format!("`{path}`: invalid character `{c}` in {what} file")),
        }
    }
    if bits.len() != expected_len {
        return Err(format!(
            "`{path}`: {what} has {} bits, expected {expected_len}",
            bits.len()
        ));
    }
    Ok(BitVector::from_bits(&bits))
}

pub fn run_decode(args: DecodeArgs) -> Result<ExitCode, String> {
    let code = load_code(&args.code)?;
    let config = build_decoder_config(&args.decoder, args.alpha)?;
    let (h_dec, h_stab) = match args.side {
        SideArg::X => (code.h_z(), code.h_x()),
        SideArg::Z => (code.h_x(), code.h_z()),
    };
    let graph = TannerGraph::from_matrix(h_dec, code.block_size()).map_err(|e| e.to_string())?;

    let (syndrome, true_error) = match (&args.syndrome_file, &args.error_file) {
        (Some(path), None) => (read_bits(path, h_dec.rows(), "syndrome")?, None),
        (None, Some(path)) => {
            let e = read_bits(path, code.n(), "error")?;
            (h_dec.mul_vec_t(&e), Some(e))
        }
        (None, None) => return Err("one of --syndrome-file or --error-file is required".into()),
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    };

    let outcome = decode(&graph, &syndrome, &config);
    println!("matched: {}", outcome.matched);
    println!("iterations: {}", outcome.iterations_used);
    println!("estimate_weight: {}", outcome.e_hat.weight());
    let support: Vec<String> = outcome.e_hat.ones().map(|i| i.to_string()).collect();
    println!("estimate_support: {}", support.join(" "));

    let mut failed = !outcome.matched;
    if let Some(e) = true_error {
        let classification = classify(&e, &outcome.e_hat, outcome.matched, h_stab);
        let label = match classification {
            TrialOutcome::DegenerateSuccess => "DegenerateSuccess",
            TrialOutcome::LogicalError => "LogicalError",
            TrialOutcome::NonConvergence => "NonConvergence",
        };
        println!("classification: {label}");
        failed = classification != TrialOutcome::DegenerateSuccess;
    }

    if args.strict && failed {
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}
