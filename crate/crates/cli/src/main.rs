use std::fs;
use std::io::Write;
use std::process::ExitCode;

use antikz::{acceptance, commands, Args, CliError, Command, RunConfig};
use clap::Parser;

fn write_file(path: &std::path::Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io { path: path.display().to_string(), source: e })
}

fn run(args: &Args) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(args)?;
    if cfg.command == Command::Selftest {
        let outcomes = acceptance::run_all(cfg.fast);
        let failed = outcomes.iter().filter(|o| !o.passed).count();
        println!("# selftest: {} run, {} failed", outcomes.len(), failed);
        return if failed == 0 { Ok(()) } else { Err(CliError::SelftestFailed { failed }) };
    }
    let table = commands::run_sweep(&cfg)?;
    let csv = table.to_csv();
    match &cfg.out {
        Some(path) => write_file(path, &csv)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(csv.as_bytes()).map_err(|e| CliError::Io { path: "stdout".into(), source: e })?;
        }
    }
    if let (Some(script), Some(out)) = (&cfg.plot_script, &cfg.out) {
        write_file(script, &table.gnuplot_script(&out.display().to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("antikz: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
