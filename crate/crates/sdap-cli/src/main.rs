//! `sdapsim`: run SDAP user-plane scenarios, execute the functional
//! validation checklist, and poke at the SDAP header codec.
//!
//! Exit codes are a stable contract for CI: 0 success, 1 validation
//! failure, 2 usage or configuration error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use sdap_core::scenario::ScenarioConfig;
use sdap_core::sim::{all_passed, run_scenario, ScenarioReport};
use sdap_core::{Dc, Qfi, SdapHeader};

#[derive(Parser)]
#[command(
    name = "sdapsim",
    version,
    about = "SDAP user-plane simulator: QFI tagging, header processing, QFI-to-DRB mapping, and per-flow latency accounting"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write events.log, stats.csv, and summary.txt
    Run {
        /// Scenario file (INI format)
        #[arg(long)]
        scenario: PathBuf,
        /// Output directory (created if missing)
        #[arg(long)]
        out: PathBuf,
        /// Override the scenario's seed
        #[arg(long)]
        seed: Option<u64>,
        /// Disable SDAP processing (overrides sdapEnabled)
        #[arg(long)]
        no_sdap: bool,
    },
    /// Run a scenario and report the functional validation checklist
    Validate {
        /// Scenario file (INI format)
        #[arg(long)]
        scenario: PathBuf,
        /// Optionally write run artifacts to this directory as well
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the scenario's seed
        #[arg(long)]
        seed: Option<u64>,
        /// Disable SDAP processing (overrides sdapEnabled)
        #[arg(long)]
        no_sdap: bool,
    },
    /// Decode an SDAP header byte (e.g. 0x85) or encode a Dc,rqi,qfi triple
    /// (e.g. Data,false,5)
    Codec { input: String },
    /// Print version information
    Version,
}

const EXIT_VALIDATION_FAILED: u8 = 1;
const EXIT_CONFIG_ERROR: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            scenario,
            out,
            seed,
            no_sdap,
        } => cmd_run(&scenario, &out, seed, no_sdap),
        Command::Validate {
            scenario,
            out,
            seed,
            no_sdap,
        } => cmd_validate(&scenario, out.as_deref(), seed, no_sdap),
        Command::Codec { input } => cmd_codec(&input),
        Command::Version => {
            println!("sdapsim {}", env!("CARGO_PKG_VERSION"));
            ExitCode::SUCCESS
        }
    }
}

fn load_config(
    scenario: &Path,
    seed: Option<u64>,
    no_sdap: bool,
) -> Result<ScenarioConfig, ExitCode> {
    let mut config = match ScenarioConfig::from_ini_file(scenario) {
        Ok(config) => config,
        Err(err) => {
            eprintln!("error: {}: {err}", scenario.display());
            return Err(ExitCode::from(EXIT_CONFIG_ERROR));
        }
    };
    if let Some(seed) = seed {
        config.seed = seed;
    }
    if no_sdap {
        config.sdap_enabled = false;
    }
    Ok(config)
}

fn execute(config: &ScenarioConfig, scenario: &Path) -> Result<ScenarioReport, ExitCode> {
    run_scenario(config).map_err(|err| {
        eprintln!("error: {}: {err}", scenario.display());
        ExitCode::from(EXIT_CONFIG_ERROR)
    })
}

fn write_artifacts(report: &ScenarioReport, out: &Path) -> Result<(), ExitCode> {
    let do_write = || -> std::io::Result<()> {
        std::fs::create_dir_all(out)?;
        std::fs::write(out.join("events.log"), &report.event_log)?;
        std::fs::write(out.join("stats.csv"), report.stats_csv())?;
        std::fs::write(out.join("summary.txt"), summary_text(report))?;
        Ok(())
    };
    do_write().map_err(|err| {
        eprintln!("error: cannot write to {}: {err}", out.display());
        ExitCode::from(EXIT_CONFIG_ERROR)
    })
}

fn summary_text(report: &ScenarioReport) -> String {
    let mut out = String::from("sdapsim run summary\n\n");
    out.push_str("configuration in effect:\n");
    out.push_str(&report.config_echo);
    out.push('\n');
    if report.warnings.is_empty() {
        out.push_str("warnings: none\n");
    } else {
        for warning in &report.warnings {
            let _ = writeln!(out, "warning: {warning}");
        }
    }
    out.push_str("\nper-flow statistics:\n");
    out.push_str(&report.stats_csv());
    out
}

fn cmd_run(scenario: &Path, out: &Path, seed: Option<u64>, no_sdap: bool) -> ExitCode {
    let config = match load_config(scenario, seed, no_sdap) {
        Ok(config) => config,
        Err(code) => return code,
    };
    let report = match execute(&config, scenario) {
        Ok(report) => report,
        Err(code) => return code,
    };
    if let Err(code) = write_artifacts(&report, out) {
        return code;
    }
    for warning in &report.warnings {
        eprintln!("warning: {warning}");
    }
    print!("{}", report.stats_csv());
    println!("artifacts written to {}", out.display());
    ExitCode::SUCCESS
}

fn cmd_validate(
    scenario: &Path,
    out: Option<&Path>,
    seed: Option<u64>,
    no_sdap: bool,
) -> ExitCode {
    let config = match load_config(scenario, seed, no_sdap) {
        Ok(config) => config,
        Err(code) => return code,
    };
    let report = match execute(&config, scenario) {
        Ok(report) => report,
        Err(code) => return code,
    };
    if let Some(out) = out {
        if let Err(code) = write_artifacts(&report, out) {
            return code;
        }
    }

    let rows = report.checklist();
    println!("SDAP functional validation checklist ({})", scenario.display());
    for (idx, row) in rows.iter().enumerate() {
        println!("  [{}] {:<46} {}", idx + 1, row.name, row.status);
    }
    let passed = rows.iter().filter(|r| r.status.passed()).count();
    println!("checklist: {passed}/{} passed", rows.len());

    if all_passed(&rows) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VALIDATION_FAILED)
    }
}

fn cmd_codec(input: &str) -> ExitCode {
    match codec_convert(input) {
        Ok(output) => {
            println!("{output}");
            ExitCode::SUCCESS
        }
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_CONFIG_ERROR)
        }
    }
}

/// `0x85` (or `85`) decodes to field values; `Data,false,5` encodes to a byte.
fn codec_convert(input: &str) -> Result<String, String> {
    let input = input.trim();
    if input.contains(',') {
        let parts: Vec<&str> = input.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(format!("expected <dc>,<rqi>,<qfi>, got {input:?}"));
        }
        let dc = match parts[0] {
            "Data" | "data" => Dc::Data,
            "Control" | "control" => Dc::Control,
            other => return Err(format!("dc must be Data or Control, got {other:?}")),
        };
        let rqi: bool = parts[1]
            .parse()
            .map_err(|_| format!("rqi must be true or false, got {:?}", parts[1]))?;
        let value: u8 = parts[2]
            .parse()
            .map_err(|_| format!("qfi must be an integer, got {:?}", parts[2]))?;
        let qfi = Qfi::new(value).map_err(|e| e.to_string())?;
        let header = SdapHeader { dc, rqi, qfi };
        Ok(format!("0x{:02X}", header.to_byte()))
    } else {
        let digits = input
            .strip_prefix("0x")
            .or_else(|| input.strip_prefix("0X"))
            .unwrap_or(input);
        if digits.is_empty() || digits.len() > 2 {
            return Err(format!("expected a 2-hex-digit byte, got {input:?}"));
        }
        let byte = u8::from_str_radix(digits, 16)
            .map_err(|_| format!("expected a 2-hex-digit byte, got {input:?}"))?;
        let header = SdapHeader::from_byte(byte);
        Ok(format!(
            "dc={} rqi={} qfi={}",
            header.dc, header.rqi, header.qfi
        ))
    }
}
