use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nsk_lab::verify::{run_battery, VerifyOptions};
use nsk_lab::{io, pipeline, sweep, LabError, RunConfig, OUT_ENV};

const DEFAULT_OUT: &str = "nsk-out";

#[derive(Debug, Parser)]
#[command(name = "nsk-lab", version, about = "Shock profiles and their stability for the Navier-Stokes-Korteweg system")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// TOML config file; defaults apply to every missing key.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory [default: `output` in the config, then $NSK_LAB_OUT, then ./nsk-out].
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override one config key, e.g. `--set grid.dx=0.5`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    set: Vec<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve for the shock profile and write profile.csv, profile.json, profile_report.json.
    Profile {
        #[arg(long)]
        v_plus: Option<f64>,
        #[arg(long)]
        v_minus: Option<f64>,
        #[arg(long)]
        delta_s: Option<f64>,
        #[arg(long)]
        gamma: Option<f64>,
    },
    /// Integrate a perturbed profile and write diagnostics, snapshots and a manifest.
    Simulate,
    /// Run the property battery and write verify_report.json.
    Verify {
        /// Negative control: evaluate the G1 kernel with the sign of C_* flipped.
        #[arg(long)]
        flip_c_star: bool,
    },
    /// Run one configuration per value of a key and aggregate the summaries.
    Sweep {
        /// Dotted config key, e.g. end_states.delta_s.
        #[arg(long)]
        param: String,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        values: Vec<String>,
        /// Also integrate each configuration.
        #[arg(long)]
        simulate: bool,
    },
}

fn out_dir(global: &Global, cfg: &RunConfig) -> PathBuf {
    if let Some(o) = &global.out {
        return o.clone();
    }
    if let Some(o) = &cfg.output {
        return o.clone();
    }
    std::env::var_os(OUT_ENV).filter(|s| !s.is_empty()).map_or_else(|| PathBuf::from(DEFAULT_OUT), PathBuf::from)
}

fn overrides(global: &Global) -> Vec<String> {
    let mut ov = global.set.clone();
    if let Some(s) = global.seed {
        ov.push(format!("seed={s}"));
    }
    ov
}

fn load(global: &Global, extra: &[String]) -> Result<RunConfig, LabError> {
    let mut ov = overrides(global);
    ov.extend_from_slice(extra);
    Ok(RunConfig::load(global.config.as_deref(), &ov)?)
}

fn run(cli: Cli) -> Result<(), LabError> {
    let g = &cli.global;
    match cli.command {
        Command::Profile { v_plus, v_minus, delta_s, gamma } => {
            let mut extra = Vec::new();
            for (k, v) in [("end_states.v_plus", v_plus), ("end_states.v_minus", v_minus), ("end_states.delta_s", delta_s), ("law.gamma", gamma)] {
                if let Some(v) = v {
                    extra.push(format!("{k}={v:?}"));
                }
            }
            let cfg = load(g, &extra)?;
            let out = out_dir(g, &cfg);
            let (profile, rep) = pipeline::run_profile(&cfg, &out)?;
            let es = profile.end_states;
            println!(
                "profile: delta_s={} v_-={:.6} v_+={} sigma={:.6} points={} residual={:.3e} {}",
                es.delta_s,
                es.v_minus,
                es.v_plus,
                es.sigma,
                profile.len(),
                profile.residual,
                if rep.oscillatory { "OSCILLATORY (v' changes sign)" } else { "monotone" },
            );
            println!("wrote {}", out.display());
        }
        Command::Simulate => {
            let cfg = load(g, &[])?;
            let out = out_dir(g, &cfg);
            let result = pipeline::run_simulate(&cfg, &out);
            match &result {
                Ok(sim) => {
                    let last = sim.result.records.last().copied().unwrap_or_default();
                    println!(
                        "simulate: t={} steps={} X={:.6e} sup_perturbation={:.3e}",
                        last.t, sim.result.steps, last.x_shift, last.sup_perturbation
                    );
                    if let Some(d) = &sim.decay {
                        println!(
                            "decay: sup_ratio={:?} entropy_decrease_fraction={:.3} xdot_final_over_max={:?} sublinear={}",
                            d.sup_ratio, d.entropy_decrease_fraction, d.xdot_final_over_max, d.sublinear
                        );
                    }
                }
                Err(LabError::BlowUp(_)) => eprintln!("diagnostics up to the abort are in {}", out.display()),
                Err(_) => {}
            }
            result?;
            println!("wrote {}", out.display());
        }
        Command::Verify { flip_c_star } => {
            let cfg = load(g, &[])?;
            let out = out_dir(g, &cfg);
            let report = run_battery(&cfg, &VerifyOptions { flip_c_star }).map_err(LabError::Config)?;
            std::fs::create_dir_all(&out)?;
            io::write_json(&out.join("verify_report.json"), &report)?;
            for c in &report.checks {
                println!("{} {} value={:e} ({})", if c.passed { "PASS" } else { "FAIL" }, c.name, c.value, c.criterion);
            }
            if !report.passed {
                return Err(LabError::Verify(report.failing));
            }
        }
        Command::Sweep { param, mut values, simulate } => {
            values.retain(|v| !v.trim().is_empty());
            if values.is_empty() {
                return Err(LabError::Usage("sweep: --values needs at least one value".into()));
            }
            let ov = overrides(g);
            let cfg = RunConfig::load(g.config.as_deref(), &ov)?;
            let out = out_dir(g, &cfg);
            let outcome = sweep::run_sweep(g.config.as_deref(), &ov, &param, &values, simulate, &out)?;
            for r in &outcome.rows {
                println!("{}={} {} {}", r.param, r.value, r.status, r.error);
            }
            for f in &outcome.fits {
                println!("fit {} vs {}: slope={:.4} r2={:.6}", f.quantity, f.against, f.slope, f.r2);
            }
            println!("wrote {}", out.join("sweep.csv").display());
        }
    }
    Ok(())
}

const USAGE: &str = "usage: nsk-lab [--config <file>] [--out <dir>] [--seed <u64>] [--set key=value]... <profile|simulate|verify|sweep>";

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, LabError::ConfigFile(_) | LabError::Usage(_)) {
                eprintln!("{USAGE}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
