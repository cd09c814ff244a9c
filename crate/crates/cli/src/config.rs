//! Run configuration: flags over a `key=value` file over built-in defaults.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};

use crate::error::CliError;
use crate::grid::{parse_grid, parse_window};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    LzProb,
    IsingDefect,
    Vopt,
    Selftest,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::LzProb => "lz-prob",
            Command::IsingDefect => "ising-defect",
            Command::Vopt => "vopt",
            Command::Selftest => "selftest",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "antikz", version, about = "Noise-averaged Landau-Zener and Ising sweep tables")]
pub struct Args {
    pub command: Command,
    /// κ = J²/v grid: `1,10,100` or `log:lo:hi:n`.
    #[arg(long)]
    pub kappa: Option<String>,
    /// Noise strength λ grid.
    #[arg(long)]
    pub lambda: Option<String>,
    #[arg(long)]
    pub n_spins: Option<usize>,
    /// Sweep window `τ_i,τ_f`.
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    #[arg(long)]
    pub rtol: Option<f64>,
    #[arg(long)]
    pub atol: Option<f64>,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// `key=value` file; keys are the long flag names.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output CSV; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Result cache directory.
    #[arg(long)]
    pub cache: Option<PathBuf>,
    /// Also write a gnuplot script plotting the CSV (needs --out).
    #[arg(long)]
    pub plot_script: Option<PathBuf>,
    /// Selftest: run only the quick criteria.
    #[arg(long)]
    pub fast: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub kappa_grid: String,
    pub kappa: Vec<f64>,
    pub lambda_grid: String,
    pub lambda: Vec<f64>,
    pub n_spins: usize,
    pub window: (f64, f64),
    pub rtol: f64,
    pub atol: f64,
    pub threads: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub cache: Option<PathBuf>,
    pub plot_script: Option<PathBuf>,
    pub fast: bool,
}

const KEYS: [&str; 11] =
    ["kappa", "lambda", "n-spins", "window", "rtol", "atol", "threads", "seed", "out", "cache", "plot-script"];

fn defaults(command: Command) -> BTreeMap<&'static str, String> {
    let (kappa, lambda, rtol, atol) = match command {
        Command::LzProb => ("1,10,100", "1e-3", "1e-10", "1e-12"),
        Command::IsingDefect => ("log:1:100:20", "1e-3", "1e-9", "1e-10"),
        Command::Vopt => ("1", "log:3e-4:3e-3:5", "1e-9", "1e-10"),
        Command::Selftest => ("1", "1e-3", "1e-9", "1e-10"),
    };
    BTreeMap::from([
        ("kappa", kappa.to_string()),
        ("lambda", lambda.to_string()),
        ("n-spins", "100".to_string()),
        ("window", "-200,200".to_string()),
        ("rtol", rtol.to_string()),
        ("atol", atol.to_string()),
        ("threads", "0".to_string()),
        ("seed", "42".to_string()),
    ])
}

/// Parses a `key=value` file. Blank lines and `#` comments are skipped.
pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::Config(format!("{}:{}: expected key=value", path.display(), lineno + 1)));
        };
        let k = k.trim().replace('_', "-");
        if !KEYS.contains(&k.as_str()) {
            return Err(CliError::Config(format!("{}:{}: unknown key `{k}`", path.display(), lineno + 1)));
        }
        map.insert(k, v.trim().to_string());
    }
    Ok(map)
}

impl RunConfig {
    pub fn resolve(args: &Args) -> Result<Self, CliError> {
        let mut map: BTreeMap<String, String> =
            defaults(args.command).into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        if let Some(path) = &args.config {
            map.extend(read_config_file(path)?);
        }
        let flags = [
            ("kappa", args.kappa.clone()),
            ("lambda", args.lambda.clone()),
            ("n-spins", args.n_spins.map(|v| v.to_string())),
            ("window", args.window.clone()),
            ("rtol", args.rtol.map(|v| v.to_string())),
            ("atol", args.atol.map(|v| v.to_string())),
            ("threads", args.threads.map(|v| v.to_string())),
            ("seed", args.seed.map(|v| v.to_string())),
            ("out", args.out.as_ref().map(|p| p.display().to_string())),
            ("cache", args.cache.as_ref().map(|p| p.display().to_string())),
            ("plot-script", args.plot_script.as_ref().map(|p| p.display().to_string())),
        ];
        for (k, v) in flags {
            if let Some(v) = v {
                map.insert(k.to_string(), v);
            }
        }
        Self::from_map(args.command, &map, args.fast)
    }

    pub fn from_map(command: Command, map: &BTreeMap<String, String>, fast: bool) -> Result<Self, CliError> {
        let get = |k: &str| map.get(k).map(String::as_str).unwrap_or("");
        let num = |k: &str| -> Result<f64, CliError> {
            get(k).trim().parse::<f64>().map_err(|_| CliError::Config(format!("{k} = `{}` is not a number", get(k))))
        };
        let int = |k: &str| -> Result<u64, CliError> {
            get(k).trim().parse::<u64>().map_err(|_| CliError::Config(format!("{k} = `{}` is not an integer", get(k))))
        };
        let path = |k: &str| map.get(k).filter(|v| !v.is_empty()).map(PathBuf::from);

        let cfg = RunConfig {
            command,
            kappa_grid: get("kappa").to_string(),
            kappa: parse_grid(get("kappa"))?,
            lambda_grid: get("lambda").to_string(),
            lambda: parse_grid(get("lambda"))?,
            n_spins: int("n-spins")? as usize,
            window: parse_window(get("window"))?,
            rtol: num("rtol")?,
            atol: num("atol")?,
            threads: int("threads")? as usize,
            seed: int("seed")?,
            out: path("out"),
            cache: path("cache"),
            plot_script: path("plot-script"),
            fast,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let err = |m: String| Err(CliError::Config(m));
        if !(self.rtol > 0.0 && self.rtol.is_finite() && self.atol > 0.0 && self.atol.is_finite()) {
            return err(format!("tolerances must be > 0 (rtol={}, atol={})", self.rtol, self.atol));
        }
        if self.n_spins < 2 || self.n_spins % 2 != 0 {
            return err(format!("n-spins = {} must be even and >= 2", self.n_spins));
        }
        if self.kappa.iter().any(|&k| k <= 0.0) {
            return err("kappa values must be > 0".into());
        }
        if self.lambda.iter().any(|&l| l < 0.0) {
            return err("lambda values must be >= 0".into());
        }
        if self.command == Command::Vopt && self.lambda.iter().any(|&l| !(1e-4..=1e-2).contains(&l)) {
            return err("vopt needs lambda within [1e-4, 1e-2]".into());
        }
        if self.plot_script.is_some() && self.out.is_none() {
            return err("--plot-script needs --out".into());
        }
        Ok(())
    }

    /// Resolved settings that determine the numbers in the output. Thread
    /// count and file paths are left out so they cannot change the CSV bytes.
    pub fn metadata(&self) -> Vec<(String, String)> {
        let mut m = vec![
            ("command".to_string(), self.command.name().to_string()),
            ("version".to_string(), crate::CODE_VERSION.to_string()),
            ("units".to_string(), "J=1, kappa=J^2/v".to_string()),
        ];
        let mut push = |k: &str, v: String| m.push((k.to_string(), v));
        if self.command != Command::Vopt {
            push("kappa", self.kappa_grid.clone());
        }
        push("lambda", self.lambda_grid.clone());
        if matches!(self.command, Command::IsingDefect | Command::Vopt) {
            push("n-spins", self.n_spins.to_string());
            push("mode-shift", "off".to_string());
        }
        push("window", format!("{},{}", self.window.0, self.window.1));
        push("rtol", format!("{:e}", self.rtol));
        push("atol", format!("{:e}", self.atol));
        push("seed", self.seed.to_string());
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn args(extra: &[&str]) -> Args {
        let mut v = vec!["antikz", "ising-defect"];
        v.extend_from_slice(extra);
        Args::parse_from(v)
    }

    #[test]
    fn defaults_are_explicit() {
        let c = RunConfig::resolve(&args(&[])).unwrap();
        assert_eq!(c.kappa.len(), 20);
        assert_eq!(c.n_spins, 100);
        assert_eq!(c.window, (-200.0, 200.0));
        let meta = c.metadata();
        for key in ["kappa", "lambda", "n-spins", "window", "rtol", "atol", "seed", "version"] {
            assert!(meta.iter().any(|(k, _)| k == key), "{key}");
        }
        assert!(!meta.iter().any(|(k, _)| k == "threads"));
    }

    #[test]
    fn flags_override_file_override_defaults() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "# sweep\nkappa = 2,3\nn_spins=10\nrtol=1e-7").unwrap();
        let c = RunConfig::resolve(&args(&["--config", f.path().to_str().unwrap(), "--rtol", "1e-8"])).unwrap();
        assert_eq!(c.kappa, vec![2.0, 3.0]);
        assert_eq!(c.n_spins, 10);
        assert_eq!(c.rtol, 1e-8);
        assert_eq!(c.atol, 1e-10);
    }

    #[test]
    fn bad_settings_are_config_errors() {
        for extra in [
            &["--kappa", "log:1:2"][..],
            &["--n-spins", "7"],
            &["--rtol", "0"],
            &["--window", "5,1"],
            &["--lambda=-1"],
            &["--config", "/nonexistent/antikz.cfg"],
        ] {
            let e = RunConfig::resolve(&args(extra)).unwrap_err();
            assert_eq!(e.exit_code(), 2, "{extra:?}");
        }
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "colour=blue").unwrap();
        assert!(RunConfig::resolve(&args(&["--config", f.path().to_str().unwrap()])).is_err());
        let v = Args::parse_from(["antikz", "vopt", "--lambda", "0.5"]);
        assert!(RunConfig::resolve(&v).is_err());
    }
}
