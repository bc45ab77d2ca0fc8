//! Command-line front end: `run` executes one scenario config and writes a
//! JSON report (plus a CSV table when the kind produces one), `sweep` runs a
//! parameter scan into a CSV and a two-column plot file, `presets list`
//! shows the built-in configs. Exit status: 0 success, 2 invalid input,
//! 3 unconverged or budget exhausted, 4 I/O.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fluxtrap::scenario::{self, ScenarioConfig};
use fluxtrap::Error;

#[derive(Parser)]
#[command(name = "fluxtrap", version, about = "Spectral toolkit for the planar Pauli operator with anomalous moment g > 2")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write its report.
    Run {
        /// Path to a JSON config, or the name of a built-in preset.
        config: String,
        /// Override a config entry, e.g. --override numerics.n=256 or
        /// --override field.b0=8.0; repeatable.
        #[arg(long = "override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        /// Output directory (default: the config's `output.dir`, else `.`).
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Sweep the config's parameter range into a CSV and a plot file.
    Sweep {
        config: String,
        #[arg(long = "override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Inspect the built-in preset configs.
    Presets {
        #[command(subcommand)]
        command: PresetsCommand,
    },
}

#[derive(Subcommand)]
enum PresetsCommand {
    /// List preset names with their descriptions.
    List,
}

fn load_config(name: &str, overrides: &[String]) -> Result<ScenarioConfig, Error> {
    let text: String = if Path::new(name).is_file() {
        std::fs::read_to_string(name).map_err(|e| Error::Io(format!("{name}: {e}")))?
    } else if let Some(p) = scenario::find_preset(name) {
        p.json.to_string()
    } else {
        return Err(Error::Io(format!(
            "no config file or built-in preset named `{name}` (try `fluxtrap presets list`)"
        )));
    };
    let mut doc: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Error::Validation(format!("config: {e}")))?;
    for assignment in overrides {
        scenario::apply_override(&mut doc, assignment)?;
    }
    ScenarioConfig::from_value(doc)
}

fn out_dir(flag: &Option<PathBuf>, cfg: &ScenarioConfig) -> Result<PathBuf, Error> {
    let dir = flag
        .clone()
        .or_else(|| {
            cfg.output
                .as_ref()
                .and_then(|o| o.dir.as_ref())
                .map(PathBuf::from)
        })
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    Ok(dir)
}

fn write_text(path: &Path, text: &str) -> Result<(), Error> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn cmd_run(config: &str, overrides: &[String], out: &Option<PathBuf>) -> Result<ExitCode, Error> {
    let cfg = load_config(config, overrides)?;
    let report = scenario::run_scenario(&cfg)?;
    let dir = out_dir(out, &report.config)?;
    let names = report.config.output.clone().unwrap_or_default();
    let report_path = dir.join(names.report.as_deref().unwrap_or("report.json"));
    report.write(&report_path)?;
    println!("fluxtrap {} | kind = {}", fluxtrap::VERSION, report.config.kind);
    for d in &report.diagnostics {
        println!("  {d}");
    }
    println!("report: {}", report_path.display());
    if let Some(table) = scenario::tabular_view(&report) {
        let table_path = dir.join(names.table.as_deref().unwrap_or("table.csv"));
        write_text(&table_path, &table.to_csv())?;
        println!("table:  {}", table_path.display());
    }
    println!(
        "converged: {} ({:.1} s)",
        report.converged, report.wall_time_seconds
    );
    if report.converged {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("error: convergence: some results did not converge; see the report diagnostics");
        Ok(ExitCode::from(3))
    }
}

fn cmd_sweep(config: &str, overrides: &[String], out: &Option<PathBuf>) -> Result<ExitCode, Error> {
    let cfg = load_config(config, overrides)?;
    let table = scenario::run_sweep(&cfg)?;
    let dir = out_dir(out, &cfg)?;
    let names = cfg.output.clone().unwrap_or_default();
    let table_path = dir.join(names.table.as_deref().unwrap_or("sweep.csv"));
    write_text(&table_path, &table.to_csv())?;
    let plot_path = dir.join(names.plot.as_deref().unwrap_or("plot.dat"));
    write_text(&plot_path, &table.to_plot())?;
    let noted = table
        .rows
        .iter()
        .filter(|r| !r.last().map(String::is_empty).unwrap_or(true))
        .count();
    println!(
        "fluxtrap {} | swept {} rows ({} with notes)",
        fluxtrap::VERSION,
        table.rows.len(),
        noted
    );
    println!("table: {}", table_path.display());
    println!("plot:  {}", plot_path.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_presets_list() -> Result<ExitCode, Error> {
    for p in scenario::PRESETS {
        let cfg = ScenarioConfig::from_json(p.json)?;
        println!(
            "{:<28} {}",
            p.name,
            cfg.description.as_deref().unwrap_or("")
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Run {
            config,
            overrides,
            out,
        } => cmd_run(config, overrides, out),
        Command::Sweep {
            config,
            overrides,
            out,
        } => cmd_sweep(config, overrides, out),
        Command::Presets {
            command: PresetsCommand::List,
        } => cmd_presets_list(),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Validation(_) => 2,
                Error::Convergence(_) => 3,
                Error::Io(_) => 4,
            })
        }
    }
}
