use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use d2d_underlay_cli::config::{parse_config, parse_sweep_spec};
use d2d_underlay_cli::exit_code;
use d2d_underlay_cli::manifest::render_manifest;
use d2d_underlay_cli::sweep::{render_csv, run_sweep};

/// Link-level simulator for D2D underlay of machine-type communication.
#[derive(Debug, Parser)]
#[command(name = "d2d-sim", version)]
struct Args {
    /// Configuration file (key = value lines); defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Output CSV path; the manifest is written next to it as
    /// `<output>.manifest`.
    #[arg(long, default_value = "results.csv")]
    output: PathBuf,

    /// Override the configured random seed.
    #[arg(long)]
    seed: Option<u64>,

    /// Worker threads (defaults to the number of logical CPUs).
    #[arg(long)]
    workers: Option<usize>,

    /// Sweep one numeric config key: "key=v1,v2,...". Overrides the
    /// config file's sweep.
    #[arg(long)]
    sweep: Option<String>,
}

fn fail(msg: impl std::fmt::Display, code: u8) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let args = Args::parse();

    let text = match &args.config {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => return fail(format_args!("cannot read {}: {e}", path.display()), 1),
        },
        None => String::new(),
    };
    let mut spec = match parse_config(&text) {
        Ok(s) => s,
        Err(e) => return fail(e, 1),
    };
    if let Some(seed) = args.seed {
        spec.base.seed = seed;
    }
    if let Some(sweep) = &args.sweep {
        spec.sweep = match parse_sweep_spec(sweep) {
            Ok(s) => Some(s),
            Err(e) => return fail(e, 1),
        };
    }
    if let Some(workers) = args.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
        {
            return fail(e, 1);
        }
    }

    let started = Instant::now();
    let rows = match run_sweep(&spec) {
        Ok(rows) => rows,
        Err(e) => return fail(&e, exit_code(&e) as u8),
    };
    let duration = started.elapsed().as_secs_f64();

    if let Err(e) = std::fs::write(&args.output, render_csv(&rows)) {
        return fail(
            format_args!("cannot write {}: {e}", args.output.display()),
            1,
        );
    }
    let manifest_path = {
        let mut os = args.output.clone().into_os_string();
        os.push(".manifest");
        PathBuf::from(os)
    };
    let manifest = match render_manifest(&spec, &rows, duration) {
        Ok(m) => m,
        Err(e) => return fail(&e, exit_code(&e) as u8),
    };
    if let Err(e) = std::fs::write(&manifest_path, manifest) {
        return fail(
            format_args!("cannot write {}: {e}", manifest_path.display()),
            1,
        );
    }

    println!(
        "{} rows -> {} ({}s); manifest {}",
        rows.len(),
        args.output.display(),
        duration.round(),
        manifest_path.display()
    );
    ExitCode::SUCCESS
}
