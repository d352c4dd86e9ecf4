//! Command-line front end: certify a model, simulate it, verify the
//! stability envelope, search translation numbers, compare the continuous
//! and discrete scales, and materialize the bundled three-patch benchmark.
//!
//! Exit codes: 0 = pass, 2 = a condition or verdict failed, 1 = error.

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use nicholson_ts_cli::config::{GridSpec, InitialSpec, ModelSpec, RunConfig, RunParams, ScaleSpec};
use nicholson_ts::analysis::{
    ap_closure_diagnostic, compare_scales, translation_numbers, verify_envelope, CompareVerdict,
};
use nicholson_ts::certifier::{certify, decay_rate, Certificate};
use nicholson_ts::model::InitialCondition;
use nicholson_ts::preset;
use nicholson_ts::simulator::{simulate, simulation_window, Trajectory};
use nicholson_ts::timescale::{build_grid, Grid, ScaleFamily};
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "nicholson-ts", version, about = "Delayed blowfly patch models on time scales: simulation and stability certification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Path to the JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides the config).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Dense-segment step bound (overrides the config).
    #[arg(long)]
    max_step: Option<f64>,
    /// Seed for the randomized property diagnostics.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct PresetArgs {
    /// Directory receiving the generated configs.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the existence/stability conditions and write a certificate.
    Certify(RunArgs),
    /// Integrate the system and write the trajectory CSV.
    Simulate(RunArgs),
    /// Check the exponential stability envelope on a pair of runs.
    Envelope(RunArgs),
    /// Search translation numbers of the simulated trajectory.
    Translate(RunArgs),
    /// Run the model on R and on Z and compare the outcomes.
    Compare(RunArgs),
    /// Write the bundled three-patch benchmark configs.
    #[command(name = "preset-example51")]
    PresetExample51(PresetArgs),
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            std::process::exit(1);
        }
    };
    let outcome = match cli.command {
        Command::Certify(args) => cmd_certify(&args),
        Command::Simulate(args) => cmd_simulate(&args),
        Command::Envelope(args) => cmd_envelope(&args),
        Command::Translate(args) => cmd_translate(&args),
        Command::Compare(args) => cmd_compare(&args),
        Command::PresetExample51(args) => cmd_preset(&args),
    };
    match outcome {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {:#}", e);
            std::process::exit(1);
        }
    }
}

struct Prepared {
    cfg: RunConfig,
    fam: ScaleFamily<f64>,
    model: nicholson_ts::model::NicholsonModel<f64>,
    ic: InitialCondition<f64>,
    grid: Grid<f64>,
    out_dir: PathBuf,
    max_step: f64,
}

fn prepare(args: &RunArgs) -> anyhow::Result<Prepared> {
    let cfg = RunConfig::from_file(&args.config)?;
    let fam = cfg.scale_family()?;
    let model = cfg.model()?;
    let ic = cfg.initial_condition();
    let max_step = args.max_step.unwrap_or(cfg.grid.max_step);
    if max_step <= 0.0 {
        bail!("max_step must be positive");
    }
    let window = match cfg.grid.window {
        Some([lo, hi]) => (lo, hi),
        None => {
            let theta = model.theta()?;
            simulation_window(&fam, ic.t0, theta, cfg.run.t_end, max_step)
        }
    };
    let grid = build_grid(&fam, window, max_step)?;
    let out_dir = args
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(&cfg.output_dir));
    std::fs::create_dir_all(&out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;
    Ok(Prepared {
        cfg,
        fam,
        model,
        ic,
        grid,
        out_dir,
        max_step,
    })
}

fn write_json<V: serde::Serialize>(path: &Path, value: &V) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn write_trajectory_csv(path: &Path, traj: &Trajectory<f64>) -> anyhow::Result<()> {
    let mut f = std::io::BufWriter::new(
        std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?,
    );
    write!(f, "t")?;
    for i in 1..=traj.n() {
        write!(f, ",x{}", i)?;
    }
    writeln!(f)?;
    for (k, t) in traj.times().iter().enumerate() {
        write!(f, "{}", t)?;
        for v in &traj.states()[k] {
            write!(f, ",{}", v)?;
        }
        writeln!(f)?;
    }
    Ok(())
}

fn print_certificate(cert: &Certificate<f64>) {
    for c in &cert.conditions {
        println!(
            "{}: {} (margin {:.6})",
            c.name,
            if c.holds { "PASS" } else { "FAIL" },
            c.margin
        );
    }
    if let Some(th) = cert.a2_threshold {
        println!("A2 threshold: {:.6}", th);
    }
    if let (Some(lo), Some(hi)) = (cert.a1_lo, cert.a1_hi) {
        println!("A1 interval: [{:.6}, {:.6})", lo, hi);
    }
    if let Some(alpha) = cert.alpha {
        println!("decay rate alpha: {:.6}", alpha);
    }
    if let Some(m) = cert.m {
        println!("stability constant M: {:.6}", m);
    }
    if !cert.divergences.is_empty() {
        println!("divergences from the supplied bounds table:");
        for d in &cert.divergences {
            println!(
                "  {}: listed {} vs recomputed {}",
                d.name, d.listed, d.recomputed
            );
        }
    }
    println!("overall: {}", if cert.overall { "PASS" } else { "FAIL" });
}

fn cmd_certify(args: &RunArgs) -> anyhow::Result<i32> {
    let p = prepare(args)?;
    let cert = certify(
        &p.model,
        &p.fam,
        &p.grid,
        p.cfg.run.a1,
        p.cfg.run.a2,
        p.cfg.listed_bounds.as_ref(),
        p.cfg.run.bounds_horizon,
        p.cfg.run.bounds_samples,
    )?;
    print_certificate(&cert);
    write_json(&p.out_dir.join("certificate.json"), &cert)?;
    Ok(if cert.overall { 0 } else { 2 })
}

fn cmd_simulate(args: &RunArgs) -> anyhow::Result<i32> {
    let p = prepare(args)?;
    let traj = simulate(&p.model, &p.fam, &p.grid, &p.ic, p.cfg.run.t_end)?;
    write_trajectory_csv(&p.out_dir.join("trajectory.csv"), &traj)?;
    let (a1, a2) = (p.cfg.run.a1, p.cfg.run.a2);
    let mut all_in = true;
    for i in 0..traj.n() {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (k, t) in traj.times().iter().enumerate() {
            if *t < p.ic.t0 {
                continue;
            }
            lo = lo.min(traj.states()[k][i]);
            hi = hi.max(traj.states()[k][i]);
        }
        let inside = lo >= a1 - 1e-6 && hi <= a2 + 1e-6;
        all_in &= inside;
        println!(
            "x{}: range [{:.6}, {:.6}] {} [{}, {}]",
            i + 1,
            lo,
            hi,
            if inside { "inside" } else { "outside" },
            a1,
            a2
        );
    }
    println!(
        "invariant region compliance: {}",
        if all_in { "yes" } else { "no" }
    );
    Ok(0)
}

fn cmd_envelope(args: &RunArgs) -> anyhow::Result<i32> {
    let p = prepare(args)?;
    let ic2_values = p
        .cfg
        .run
        .ic2
        .clone()
        .ok_or_else(|| anyhow::anyhow!("envelope requires run.ic2 (second initial state)"))?;
    let ic2 = InitialCondition::constant(p.ic.t0, ic2_values);
    let rate = decay_rate(
        &p.model,
        &p.grid,
        p.cfg.run.bounds_horizon,
        p.cfg.run.bounds_samples,
    )?;
    let a = simulate(&p.model, &p.fam, &p.grid, &p.ic, p.cfg.run.t_end)?;
    let b = simulate(&p.model, &p.fam, &p.grid, &ic2, p.cfg.run.t_end)?;
    let rep = verify_envelope(&a, &b, rate.alpha, rate.m)?;
    println!(
        "alpha = {:.6}, M = {:.6}, ic distance = {:.6}",
        rate.alpha, rate.m, rep.ic_distance
    );
    println!(
        "violations = {}, worst ratio = {:.6}, fitted decay = {:?}",
        rep.violations, rep.worst_ratio, rep.fitted_rate
    );
    let mut f = std::io::BufWriter::new(std::fs::File::create(
        p.out_dir.join("envelope.csv"),
    )?);
    writeln!(f, "t,deviation,envelope")?;
    for (t, d, e) in &rep.series {
        writeln!(f, "{},{},{}", t, d, e)?;
    }
    drop(f);
    write_json(&p.out_dir.join("envelope.json"), &rep)?;
    Ok(if rep.violations == 0 { 0 } else { 2 })
}

fn cmd_translate(args: &RunArgs) -> anyhow::Result<i32> {
    let p = prepare(args)?;
    if p.cfg.run.translation_candidates.is_empty() {
        bail!("translate requires run.translation_candidates");
    }
    let traj = simulate(&p.model, &p.fam, &p.grid, &p.ic, p.cfg.run.t_end)?;
    // drop the transient before searching
    let skip_until = p.ic.t0 + p.cfg.run.translate_skip;
    let mut tail = Trajectory::new(skip_until, traj.n(), "translate tail".into());
    for k in 0..traj.len() {
        if traj.times()[k] >= skip_until {
            tail.push(
                traj.times()[k],
                traj.states()[k].clone(),
                traj.scattered_flags()[k],
            );
        }
    }
    let rep = translation_numbers(&tail, p.cfg.run.eps, &p.cfg.run.translation_candidates)?;
    println!(
        "accepted {} of {} candidates; inclusion length {:?}",
        rep.accepted.len(),
        p.cfg.run.translation_candidates.len(),
        rep.inclusion_length
    );
    let closure = ap_closure_diagnostic::<f64>(args.seed, p.cfg.run.eps.max(0.05), 4);
    #[derive(serde::Serialize)]
    struct TranslateOutput<'a> {
        report: &'a nicholson_ts::analysis::TranslationReport<f64>,
        closure_diagnostic: &'a nicholson_ts::analysis::ClosureDiagnostic<f64>,
    }
    write_json(
        &p.out_dir.join("translation.json"),
        &TranslateOutput {
            report: &rep,
            closure_diagnostic: &closure,
        },
    )?;
    Ok(if rep.accepted.is_empty() { 2 } else { 0 })
}

fn cmd_compare(args: &RunArgs) -> anyhow::Result<i32> {
    let p = prepare(args)?;
    let ic_z_values = p.cfg.run.ic_integers.clone().unwrap_or_else(|| {
        p.cfg
            .initial
            .values
            .clone()
            .unwrap_or_else(|| vec![1.2; p.model.n()])
    });
    let ic_z = InitialCondition::constant(p.ic.t0, ic_z_values);
    let summary = compare_scales(
        &p.model,
        &p.ic,
        &ic_z,
        p.cfg.run.t_end - p.ic.t0,
        p.cfg.run.a1,
        p.cfg.run.a2,
        p.max_step,
        p.cfg.run.bounds_horizon,
        p.cfg.run.bounds_samples,
    )?;
    println!(
        "reals: certified = {}, compliant = {}, fitted rate = {:?}",
        summary.reals.certified, summary.reals.compliant, summary.reals.fitted_rate
    );
    println!(
        "integers: certified = {}, compliant = {}, fitted rate = {:?}",
        summary.integers.certified, summary.integers.compliant, summary.integers.fitted_rate
    );
    println!("verdict: {:?}", summary.verdict);
    write_json(&p.out_dir.join("compare.json"), &summary)?;
    Ok(if summary.verdict == CompareVerdict::SameQualitativeBehavior {
        0
    } else {
        2
    })
}

fn benchmark_model_spec() -> ModelSpec {
    let model = preset::blowfly3::<f64>();
    let n = model.n();
    ModelSpec {
        n,
        c: (0..n).map(|i| model.c(i).clone()).collect(),
        b: (0..n)
            .map(|i| (0..n).map(|k| model.b(i, k).cloned()).collect())
            .collect(),
        beta: (0..n)
            .map(|i| (0..n).map(|j| model.beta(i, j).clone()).collect())
            .collect(),
        alpha: (0..n)
            .map(|i| (0..n).map(|j| model.alpha(i, j).clone()).collect())
            .collect(),
        tau: (0..n)
            .map(|i| (0..n).map(|j| model.tau(i, j).clone()).collect())
            .collect(),
    }
}

fn cmd_preset(args: &PresetArgs) -> anyhow::Result<i32> {
    std::fs::create_dir_all(&args.out)?;
    let (a1, a2) = preset::box_bounds::<f64>();
    let run = RunParams {
        t_end: 200.0,
        a1,
        a2,
        eps: 0.05,
        translation_candidates: (1..=40).map(|k| 2.0 * k as f64).collect(),
        translate_skip: 60.0,
        ic2: Some(vec![1.71, 1.3, 2.0]),
        ic_integers: Some(vec![1.2, 1.2, 2.3]),
        bounds_horizon: 500.0,
        bounds_samples: 200_000,
    };
    let reals = RunConfig {
        scale: ScaleSpec::Reals,
        grid: GridSpec {
            max_step: 0.05,
            window: None,
        },
        model: benchmark_model_spec(),
        initial: InitialSpec {
            t0: 0.0,
            values: Some(vec![1.3, 1.3, 1.5]),
            exprs: None,
        },
        run: run.clone(),
        listed_bounds: Some(preset::listed_bounds::<f64>()),
        output_dir: "out".into(),
    };
    let mut integers = reals.clone();
    integers.scale = ScaleSpec::Integers;
    integers.grid.max_step = 0.5;
    integers.initial.values = Some(vec![1.2, 1.2, 2.3]);
    integers.run.ic2 = Some(vec![1.7, 1.2, 1.8]);

    let path_r = args.out.join("example51-reals.json");
    let path_z = args.out.join("example51-integers.json");
    write_json(&path_r, &reals)?;
    write_json(&path_z, &integers)?;
    println!("{}", path_r.display());
    println!("{}", path_z.display());
    Ok(0)
}
