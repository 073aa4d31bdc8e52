//! Command line front end: describe an algebra instance, list the
//! verification suites, or run them and emit a JSON-lines report.
//!
//! Settings resolve in three layers: command line flags, then a JSON
//! config file with the same field names (the file wins where both are
//! given), then the `PROP_HECKE_CAP_*` environment variables for the
//! enumeration caps.

use clap::{Parser, Subcommand};
use prop_hecke::error::{Error, Result};
use prop_hecke::root::Preset;
use prop_hecke::suites::{
    describe, has_failures, report_lines, run_suites, SuiteConfig, SUITES,
};
use serde::Deserialize;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "prop-hecke", version, about = "exact mod-p checks for pro-p Iwahori-Hecke algebras at small rank")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the structure of one algebra instance as JSON
    Describe {
        /// Preset name: SL2, PGL2, GL2, or SL3
        #[arg(long)]
        preset: String,
        /// Residue characteristic; defaults to the preset's standard choice
        #[arg(long)]
        p: Option<u32>,
        /// Residue field degree
        #[arg(long)]
        f: Option<u32>,
    },
    /// Run verification suites and write a JSON-lines report
    Check {
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        p: Option<u32>,
        #[arg(long)]
        f: Option<u32>,
        /// Suite id, or `all`; repeat the flag to pick several
        #[arg(long = "suite")]
        suite: Vec<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// Report file; stdout when omitted
        #[arg(long)]
        out: Option<String>,
        /// JSON config file with the same fields as the flags
        #[arg(long)]
        config: Option<String>,
        /// Record per-instance wall-clock milliseconds in the report
        #[arg(long)]
        timings: bool,
        #[arg(long)]
        cap_length: Option<i64>,
        #[arg(long)]
        cap_orbit: Option<i64>,
        #[arg(long)]
        cap_dimension: Option<usize>,
    },
    /// List the known suite ids in canonical order
    ListSuites,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    preset: Option<String>,
    p: Option<u32>,
    f: Option<u32>,
    suites: Option<Vec<String>>,
    seed: Option<u64>,
    caps: Option<FileCaps>,
    output: Option<String>,
    timings: Option<bool>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FileCaps {
    length: Option<i64>,
    orbit: Option<i64>,
    dimension: Option<usize>,
}

fn env_cap<T: std::str::FromStr>(name: &str) -> Result<Option<T>> {
    match std::env::var(name) {
        Ok(v) => v
            .parse::<T>()
            .map(Some)
            .map_err(|_| Error::Config(format!("cannot parse {name}={v}"))),
        Err(_) => Ok(None),
    }
}

#[allow(clippy::too_many_arguments)]
fn resolve_check(
    preset: Option<String>,
    p: Option<u32>,
    f: Option<u32>,
    suite: Vec<String>,
    seed: Option<u64>,
    out: Option<String>,
    config: Option<String>,
    timings: bool,
    cap_length: Option<i64>,
    cap_orbit: Option<i64>,
    cap_dimension: Option<usize>,
) -> Result<SuiteConfig> {
    let file: FileConfig = match config {
        Some(path) => serde_json::from_str(&std::fs::read_to_string(path)?)?,
        None => FileConfig::default(),
    };
    let preset_name = file
        .preset
        .or(preset)
        .ok_or_else(|| Error::Config("a preset is required (flag or config file)".into()))?;
    let (dp, df) = Preset::parse(&preset_name)?.default_field();
    let mut cfg = SuiteConfig::new(&preset_name, file.p.or(p).unwrap_or(dp), file.f.or(f).unwrap_or(df));
    cfg.suites = file
        .suites
        .or(if suite.is_empty() { None } else { Some(suite) })
        .unwrap_or_else(|| vec!["all".to_string()]);
    cfg.seed = file.seed.or(seed).unwrap_or(0);
    cfg.output = file.output.or(out);
    cfg.timings = file.timings.unwrap_or(timings);
    if let Some(c) = cap_length {
        cfg.caps.length = c;
    }
    if let Some(c) = cap_orbit {
        cfg.caps.orbit = c;
    }
    if let Some(c) = cap_dimension {
        cfg.caps.dimension = c;
    }
    if let Some(fc) = file.caps {
        if let Some(c) = fc.length {
            cfg.caps.length = c;
        }
        if let Some(c) = fc.orbit {
            cfg.caps.orbit = c;
        }
        if let Some(c) = fc.dimension {
            cfg.caps.dimension = c;
        }
    }
    if let Some(c) = env_cap::<i64>("PROP_HECKE_CAP_LENGTH")? {
        cfg.caps.length = c;
    }
    if let Some(c) = env_cap::<i64>("PROP_HECKE_CAP_ORBIT")? {
        cfg.caps.orbit = c;
    }
    if let Some(c) = env_cap::<usize>("PROP_HECKE_CAP_DIMENSION")? {
        cfg.caps.dimension = c;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Describe { preset, p, f } => {
            let (dp, df) = Preset::parse(&preset)?.default_field();
            let doc = describe(&preset, p.unwrap_or(dp), f.unwrap_or(df))?;
            println!("{}", serde_json::to_string_pretty(&doc)?);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::ListSuites => {
            for s in SUITES {
                println!("{s}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Check {
            preset,
            p,
            f,
            suite,
            seed,
            out,
            config,
            timings,
            cap_length,
            cap_orbit,
            cap_dimension,
        } => {
            let cfg = resolve_check(
                preset, p, f, suite, seed, out, config, timings, cap_length, cap_orbit,
                cap_dimension,
            )?;
            let reports = run_suites(&cfg)?;
            let lines = report_lines(&reports)?;
            match &cfg.output {
                Some(path) => std::fs::write(path, lines)?,
                None => print!("{lines}"),
            }
            if has_failures(&reports) {
                Ok(ExitCode::FAILURE)
            } else {
                Ok(ExitCode::SUCCESS)
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
