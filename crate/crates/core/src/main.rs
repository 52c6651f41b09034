use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use coexsim::chart::{render_svg, ChartSpec, Metric};
use coexsim::output::{point_report, read_csv, write_csv};
use coexsim::sweep::{
    evaluate_point, fold_alpha, load_config_with_overrides, peak_summary, run_sweep, ScenarioConfig,
};
use coexsim::Error;

#[derive(Parser)]
#[command(
    name = "coexsim",
    version,
    about = "LEO-to-terrestrial downlink interference simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the full link-budget breakdown for one (slant, α) point.
    Point {
        #[arg(long)]
        slant_km: f64,
        #[arg(long)]
        alpha_deg: f64,
        /// Scenario file (key = value). Defaults reproduce the reference scenario.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Override one config key, e.g. `--set noise_figure_db=9`. Repeatable.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Run the slant × α sweep and write it as CSV.
    Sweep {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Render one metric of a sweep CSV as an SVG line chart.
    Plot {
        #[arg(long)]
        csv: PathBuf,
        /// One of tx_eirp_dbw, pl_total_db, rx_power_dbw, sinr_db, degradation_db.
        #[arg(long)]
        metric: String,
        #[arg(long)]
        out: PathBuf,
    },
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn scenario(path: Option<&Path>, overrides: &[String]) -> Result<ScenarioConfig, Failure> {
    let text = match path {
        Some(p) => fs::read_to_string(p)
            .map_err(|e| Failure::Runtime(format!("cannot read {}: {e}", p.display())))?,
        None => String::new(),
    };
    Ok(load_config_with_overrides(&text, overrides)?)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Point {
            slant_km,
            alpha_deg,
            config,
            overrides,
        } => {
            let config = scenario(config.as_deref(), &overrides)?;
            if !alpha_deg.is_finite() {
                return Err(Failure::Runtime("alpha_deg: not finite".into()));
            }
            let folded = fold_alpha(alpha_deg);
            let report = evaluate_point(&config, slant_km, folded)?;
            let note = (folded != alpha_deg).then_some(alpha_deg);
            print!("{}", point_report(&report, note));
        }
        Command::Sweep {
            config,
            out,
            overrides,
        } => {
            let config = scenario(config.as_deref(), &overrides)?;
            let started = Instant::now();
            let rows = run_sweep(&config)?;
            let file = fs::File::create(&out)
                .map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", out.display())))?;
            write_csv(&rows, std::io::BufWriter::new(file))?;
            log::info!("{} rows in {:?}", rows.len(), started.elapsed());
            for peak in peak_summary(&rows)? {
                eprintln!(
                    "alpha {:>6}°: peak rx {:.3} dBW at slant {:.2} km{}",
                    peak.alpha_deg,
                    peak.peak_rx_power_dbw,
                    peak.slant_km,
                    if peak.interior {
                        ""
                    } else {
                        " (range endpoint)"
                    }
                );
            }
        }
        Command::Plot { csv, metric, out } => {
            let metric: Metric = metric
                .parse()
                .map_err(|e: Error| Failure::Usage(e.to_string()))?;
            let file = fs::File::open(&csv)
                .map_err(|e| Failure::Runtime(format!("cannot read {}: {e}", csv.display())))?;
            let rows = read_csv(file)?;
            let svg = render_svg(&ChartSpec::from_rows(metric, &rows)?);
            fs::write(&out, svg)
                .map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", out.display())))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}
