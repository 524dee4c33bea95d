use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use log::info;
use vkg_core::driver::report::{fit_archive, parse_window, write_report};
use vkg_core::driver::{run, run_check, ArchiveWriter, RunArchive, RunConfig, RunOptions, SUITES};
use vkg_core::Error;

#[derive(Parser)]
#[command(name = "vkg", version, about = "Vlasov-Klein-Gordon laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write its archive.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run an invariant suite (or `all`) and print pass/fail CSV.
    Check { suite: String },
    /// Fit a power-law decay exponent to an archived norm series.
    Fit {
        #[arg(long)]
        archive: PathBuf,
        #[arg(long)]
        quantity: String,
        #[arg(long)]
        norm: String,
        /// `t0:t1`
        #[arg(long)]
        window: String,
        /// Output CSV (default `<archive>/fits/<quantity>_<norm>.csv`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the bootstrap ledger and plot-ready CSVs to `<archive>/report/`.
    Report {
        #[arg(long)]
        archive: PathBuf,
    },
}

enum Failure {
    Check,
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::Lookup(_) => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

fn execute(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Run { config, out } => {
            let c = RunConfig::load(&config).map_err(|e| Failure::Usage(format!("{}: {e}", config.display())))?;
            let start = Instant::now();
            let mut writer = ArchiveWriter::create(&out, &c)?;
            let output = run(&c, RunOptions { keep_history: false, record_norms: true }, &mut [&mut writer])?;
            info!("{} steps in {:.1}s", c.steps(), start.elapsed().as_secs_f64());
            println!(
                "archive {} t = {} steps = {} mass = {:e} config = {}",
                out.display(),
                output.state.time(),
                c.steps(),
                output.dist.mass(),
                c.hash()
            );
        }
        Command::Check { suite } => {
            let suites: Vec<&str> = if suite == "all" {
                SUITES.to_vec()
            } else if SUITES.contains(&suite.as_str()) {
                vec![suite.as_str()]
            } else {
                return Err(Failure::Usage(format!(
                    "unknown suite '{suite}' (expected one of {}, all)",
                    SUITES.join(", ")
                )));
            };
            let mut ok = true;
            println!("suite,item,value,condition,status");
            for s in suites {
                let report = run_check(s)?;
                for line in report.to_csv().lines().skip(1) {
                    println!("{line}");
                }
                info!("{s}: {:.1}s", report.seconds);
                ok &= report.passed();
            }
            if !ok {
                return Err(Failure::Check);
            }
        }
        Command::Fit { archive, quantity, norm, window, out } => {
            let window = parse_window(&window)?;
            let a = RunArchive::open(&archive)?;
            let fit = fit_archive(&a, &quantity, &norm, window)?;
            let path = match out {
                Some(p) => p,
                None => {
                    let dir = archive.join("fits");
                    std::fs::create_dir_all(&dir).map_err(Error::from)?;
                    dir.join(format!("{quantity}_{norm}.csv"))
                }
            };
            fit.write_csv(&path)?;
            println!(
                "{quantity} {norm} [{}, {}]: exponent {:.6} residual {:.3e} samples {} period_averaged {} -> {}",
                fit.window.0,
                fit.window.1,
                fit.exponent,
                fit.residual,
                fit.samples,
                fit.period_averaged,
                path.display()
            );
        }
        Command::Report { archive } => {
            let a = RunArchive::open(&archive)?;
            let summary = write_report(&a)?;
            println!(
                "report {}: {} ledger rows ({} skipped), {} fits",
                summary.dir.display(),
                summary.ledger.rows.len(),
                summary.ledger.skipped(),
                summary.fits.len()
            );
            for f in &summary.fits {
                println!("  {} {}: exponent {:.4}", f.quantity, f.norm, f.exponent);
            }
            let within = summary.series.iter().filter(|r| r.passed()).count();
            println!("  resolvent series: {within}/{} kernels within the tail bound", summary.series.len());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}
