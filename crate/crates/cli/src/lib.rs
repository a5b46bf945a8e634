//! Front end for the `farey-index` binary.

pub mod args;
pub mod commands;
pub mod config;
pub mod report;
pub mod suites;

use args::{Cli, Command};
use clap::error::ErrorKind;
use clap::Parser;
use commands::CliError;
use config::RunConfig;
use report::{emit_report, Format, Table};
use std::ffi::OsString;
use std::io::{self, Write};
use std::path::Path;
use std::sync::OnceLock;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

pub use farey_core;

/// Environment variable selecting the worker thread count.
pub const THREADS_ENV: &str = "FAREY_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_COMPUTE: i32 = 2;

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(argv, &mut io::stdout().lock(), &mut io::stderr().lock())
}

/// Like [`run`], with explicit output streams.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let shown = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let sink: &mut dyn Write = if shown { out } else { err };
            let _ = write!(sink, "{}", e.render());
            return if shown { EXIT_OK } else { EXIT_USAGE };
        }
    };
    match execute(&cli, &argv, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.exit_code()
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    static INIT: OnceLock<Result<(), String>> = OnceLock::new();
    INIT.get_or_init(|| {
        let Ok(raw) = std::env::var(THREADS_ENV) else { return Ok(()) };
        let n: usize = raw.trim().parse().map_err(|_| format!("{THREADS_ENV} must be a positive integer, got '{raw}'"))?;
        if n == 0 {
            return Err(format!("{THREADS_ENV} must be a positive integer"));
        }
        // An already-initialized global pool is kept.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        Ok(())
    })
    .clone()
    .map_err(CliError::Usage)
}

fn execute(cli: &Cli, argv: &[OsString], out: &mut dyn Write) -> Result<i32, CliError> {
    configure_threads()?;
    let file = match &cli.config {
        Some(path) => RunConfig::load(path).map_err(CliError::Usage)?,
        None => RunConfig::default(),
    };
    let cfg = cli.flags().over(file);
    let start = Instant::now();
    let (table, passed) = match &cli.command {
        Command::Farey(_) => (commands::farey(&cfg)?, true),
        Command::Moments(_) => (commands::moments(&cfg)?, true),
        Command::Asympt(_) => (commands::asympt(&cfg)?, true),
        Command::Corr(_) => (commands::corr(&cfg)?, true),
        Command::Constant(_) => (commands::constant(&cfg)?, true),
        Command::Verify(_) => commands::verify(&cfg)?,
    };
    let format = cfg.format.unwrap_or_default();
    let io_err = |e: io::Error| CliError::Compute(format!("writing report: {e}"));
    match &cfg.output {
        Some(path) => {
            let mut f = io::BufWriter::new(std::fs::File::create(path).map_err(io_err)?);
            emit_report(&table, format, &mut f).map_err(io_err)?;
            f.flush().map_err(io_err)?;
            write_sidecar(path, cli.command.name(), argv, format, &table, start).map_err(io_err)?;
        }
        None => emit_report(&table, format, out).map_err(io_err)?,
    }
    Ok(if passed { EXIT_OK } else { EXIT_COMPUTE })
}

/// Path of the metadata file written next to a report.
pub fn sidecar_path(report: &Path) -> std::path::PathBuf {
    let mut name = report.as_os_str().to_owned();
    name.push(".meta.json");
    name.into()
}

fn write_sidecar(path: &Path, command: &str, argv: &[OsString], format: Format, table: &Table, start: Instant) -> io::Result<()> {
    let unix = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let meta = serde_json::json!({
        "command": command,
        "arguments": argv.iter().map(|a| a.to_string_lossy().into_owned()).collect::<Vec<_>>(),
        "version": env!("CARGO_PKG_VERSION"),
        "threads": rayon::current_num_threads(),
        "format": match format { Format::Csv => "csv", Format::Json => "json" },
        "rows": table.rows.len(),
        "finished_unix_seconds": unix,
        "elapsed_seconds": start.elapsed().as_secs_f64(),
    });
    let mut f = std::fs::File::create(sidecar_path(path))?;
    serde_json::to_writer_pretty(&mut f, &meta)?;
    f.write_all(b"\n")
}
