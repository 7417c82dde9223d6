use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dsrqi_core::bosonic::{UnruhWeight, DEFAULT_TAIL_TOL};
use dsrqi_core::channels::DEFAULT_SERIES_TOL;
use dsrqi_core::Alpha;

use crate::config::Config;
use crate::error::CliError;
use crate::sweep::{Grid, SweepSpec};

pub const JOBS_ENV: &str = "DSRQI_JOBS";

#[derive(Debug, Parser)]
#[command(name = "dsrqi", version, about = "Entanglement and channel capacities of de Sitter alpha-vacua")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Alice-Rob negativity over a sweep.
    Negativity {
        #[arg(long, value_enum)]
        field: Option<Field>,
        /// `auto` uses the closed form when q_r = 1.
        #[arg(long, value_enum)]
        method: Option<Method>,
        #[command(flatten)]
        common: Common,
    },
    /// Unruh or Grassmann channel capacity over a sweep.
    Capacity {
        #[arg(long, value_enum)]
        channel: Option<Channel>,
        #[arg(long, value_enum)]
        kind: Option<Kind>,
        /// Channel input dimension.
        #[arg(long)]
        d: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Maximal CHSH violation of the fermionic Alice-Rob state.
    Chsh {
        #[command(flatten)]
        common: Common,
    },
    /// Convergence point x_c and the zero of the Grassmann quantum capacity.
    Hc {
        #[command(flatten)]
        common: Common,
    },
    /// Write the datasets, manifest and gnuplot script of one figure.
    Reproduce {
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=7))]
        figure: u8,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// Vacuum parameter alpha < 0, or -inf; repeatable.
    #[arg(long = "alpha", allow_hyphen_values = true, value_parser = parse_alpha)]
    pub alpha: Vec<Alpha>,
    /// Unruh weight q_R in [0, 1]; repeatable.
    #[arg(long = "qr")]
    pub qr: Vec<f64>,
    /// var:min:max:steps[:lin|log|logx] with var in x, H, r, r_tilde.
    #[arg(long)]
    pub sweep: Option<SweepSpec>,
    /// Rindler frequency label |k| used with H.
    #[arg(long)]
    pub k: Option<f64>,
    /// Explicit Hubble scales instead of a sweep; 0 is flat space.
    #[arg(long)]
    pub hubble: Vec<f64>,
    /// Fixed Fock cutoff (adaptive by default).
    #[arg(long)]
    pub nmax: Option<usize>,
    #[arg(long = "tail-tol")]
    pub tail_tol: Option<f64>,
    #[arg(long = "series-tol")]
    pub series_tol: Option<f64>,
    /// Worker threads; overrides DSRQI_JOBS.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Output file (directory for `reproduce`); stdout otherwise.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// One row per point, one column per curve.
    #[arg(long)]
    pub wide: bool,
    /// key = value file, or a run manifest; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Field {
    Boson,
    Fermion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Auto,
    Analytic,
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Channel {
    Unruh,
    Grassmann,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Quantum,
    Classical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Lower-case name of a value-enum variant.
pub fn enum_name<T: ValueEnum>(v: &T) -> String {
    v.to_possible_value().expect("no skipped variants").get_name().to_string()
}

pub fn parse_alpha(s: &str) -> Result<Alpha, String> {
    match s.trim() {
        "-inf" | "-infinity" => Ok(Alpha::BunchDavies),
        t => {
            let a: f64 = t.parse().map_err(|_| format!("alpha '{t}' is not a number or -inf"))?;
            Alpha::new(a).map_err(|e| e.to_string())
        }
    }
}

fn from_config<T: ValueEnum>(cfg: &Config, key: &str) -> Result<Option<T>, CliError> {
    cfg.get(key)
        .map(|s| T::from_str(s, false).map_err(|e| CliError::Usage(format!("config {key} = {s}: {e}"))))
        .transpose()
}

/// Flag value, else config value.
pub fn pick<T: ValueEnum>(flag: Option<T>, cfg: &Config, key: &str) -> Result<Option<T>, CliError> {
    match flag {
        Some(v) => Ok(Some(v)),
        None => from_config(cfg, key),
    }
}

pub fn load_config(common: &Common) -> Result<Config, CliError> {
    common.config.as_deref().map_or(Ok(Config::default()), Config::load)
}

/// Fully resolved run settings.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub alphas: Vec<Alpha>,
    pub qrs: Vec<f64>,
    pub grid: Option<Grid>,
    pub k: f64,
    pub nmax: Option<usize>,
    pub tail_tol: f64,
    pub series_tol: f64,
    pub jobs: usize,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub wide: bool,
}

fn positive(name: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::Usage(format!("--{name} must be positive and finite, got {v}")))
    }
}

fn resolve_jobs(flag: Option<usize>, env: Option<String>, cfg: &Config) -> Result<usize, CliError> {
    let jobs = match (flag, env) {
        (Some(j), _) => j,
        (None, Some(e)) => e
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{JOBS_ENV}='{e}' is not a positive integer")))?,
        (None, None) => match cfg.value::<usize>("jobs")? {
            Some(j) => j,
            None => std::thread::available_parallelism().map_or(1, |n| n.get()),
        },
    };
    if jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    Ok(jobs)
}

impl Settings {
    /// Flags, then `DSRQI_JOBS` for the worker count, then the config file,
    /// then defaults.
    pub fn resolve(common: &Common, cfg: &Config) -> Result<Settings, CliError> {
        let alphas = if common.alpha.is_empty() {
            cfg.list("alpha")
                .iter()
                .map(|s| parse_alpha(s).map_err(|e| CliError::Usage(format!("config alpha: {e}"))))
                .collect::<Result<_, _>>()?
        } else {
            common.alpha.clone()
        };

        let mut qrs = if common.qr.is_empty() { cfg.values("qr")? } else { common.qr.clone() };
        if qrs.is_empty() {
            qrs.push(1.0);
        }
        for &q in &qrs {
            UnruhWeight::new(q).map_err(CliError::usage)?;
        }

        let grid = match (&common.sweep, common.hubble.is_empty()) {
            (Some(_), false) => return Err(CliError::Usage("--sweep and --hubble are exclusive".into())),
            (Some(s), true) => Some(Grid::Sweep(*s)),
            (None, false) => Some(Grid::Hubble(common.hubble.clone())),
            (None, true) => match (cfg.get("sweep"), cfg.list("hubble").is_empty()) {
                (Some(s), _) => Some(Grid::Sweep(s.parse().map_err(|e| CliError::Usage(format!("config sweep: {e}")))?)),
                (None, false) => Some(Grid::Hubble(cfg.values("hubble")?)),
                (None, true) => None,
            },
        };

        let k = positive("k", common.k.or(cfg.value("k")?).unwrap_or(1.0))?;
        let nmax = common.nmax.or(cfg.value("nmax")?);
        if nmax == Some(0) {
            return Err(CliError::Usage("--nmax must be at least 1".into()));
        }
        let tail_tol = positive("tail-tol", common.tail_tol.or(cfg.value("tail-tol")?).unwrap_or(DEFAULT_TAIL_TOL))?;
        let series_tol =
            positive("series-tol", common.series_tol.or(cfg.value("series-tol")?).unwrap_or(DEFAULT_SERIES_TOL))?;
        let jobs = resolve_jobs(common.jobs, std::env::var(JOBS_ENV).ok(), cfg)?;

        Ok(Settings {
            alphas,
            qrs,
            grid,
            k,
            nmax,
            tail_tol,
            series_tol,
            jobs,
            out: common.out.clone(),
            format: pick(common.format, cfg, "format")?.unwrap_or(Format::Csv),
            wide: common.wide || cfg.value::<bool>("wide")?.unwrap_or(false),
        })
    }

    pub fn require_alphas(&self) -> Result<(), CliError> {
        if self.alphas.is_empty() {
            return Err(CliError::Usage("at least one --alpha is required".into()));
        }
        Ok(())
    }

    pub fn require_grid(&self) -> Result<&Grid, CliError> {
        self.grid
            .as_ref()
            .ok_or_else(|| CliError::Usage("give --sweep var:min:max:steps or --hubble".into()))
    }

    /// The settings as config-file entries, so a manifest can be fed back
    /// through `--config`.
    pub fn parameters(&self) -> BTreeMap<String, String> {
        let join = |v: Vec<String>| v.join(",");
        let mut m = BTreeMap::new();
        m.insert("alpha".into(), join(self.alphas.iter().map(|a| a.to_string()).collect()));
        m.insert("qr".into(), join(self.qrs.iter().map(|q| q.to_string()).collect()));
        match &self.grid {
            Some(Grid::Sweep(s)) => {
                m.insert("sweep".into(), s.to_string());
            }
            Some(Grid::Hubble(h)) => {
                m.insert("hubble".into(), join(h.iter().map(|x| x.to_string()).collect()));
            }
            None => {}
        }
        m.insert("k".into(), self.k.to_string());
        if let Some(n) = self.nmax {
            m.insert("nmax".into(), n.to_string());
        }
        m.insert("tail-tol".into(), format!("{:e}", self.tail_tol));
        m.insert("series-tol".into(), format!("{:e}", self.series_tol));
        m.insert("format".into(), enum_name(&self.format));
        m.insert("wide".into(), self.wide.to_string());
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn common(args: &[&str]) -> Common {
        let mut full = vec!["dsrqi", "chsh"];
        full.extend_from_slice(args);
        match Cli::try_parse_from(full).unwrap().command {
            Command::Chsh { common } => common,
            _ => unreachable!(),
        }
    }

    #[test]
    fn alpha_tokens() {
        assert_eq!(parse_alpha("-inf").unwrap(), Alpha::BunchDavies);
        assert_eq!(parse_alpha("-1.5").unwrap(), Alpha::new(-1.5).unwrap());
        assert!(parse_alpha("0").is_err());
        assert!(parse_alpha("abc").is_err());
        let c = common(&["--alpha", "-6", "--alpha", "-inf"]);
        assert_eq!(c.alpha, vec![Alpha::new(-6.0).unwrap(), Alpha::BunchDavies]);
    }

    #[test]
    fn flags_override_config() {
        let cfg = Config::parse("alpha = -3\nqr = 0.9, 0.8\nnmax = 20\nsweep = x:1:2:3\nformat = json").unwrap();
        let s = Settings::resolve(&common(&["--alpha", "-6", "--nmax", "30", "--jobs", "2"]), &cfg).unwrap();
        assert_eq!(s.alphas, vec![Alpha::new(-6.0).unwrap()]);
        assert_eq!(s.qrs, vec![0.9, 0.8]);
        assert_eq!(s.nmax, Some(30));
        assert_eq!(s.format, Format::Json);
        assert!(matches!(s.grid, Some(Grid::Sweep(_))));
        assert_eq!(s.jobs, 2);
    }

    #[test]
    fn jobs_precedence() {
        let cfg = Config::parse("jobs = 3").unwrap();
        assert_eq!(resolve_jobs(Some(5), Some("4".into()), &cfg).unwrap(), 5);
        assert_eq!(resolve_jobs(None, Some("4".into()), &cfg).unwrap(), 4);
        assert_eq!(resolve_jobs(None, None, &cfg).unwrap(), 3);
        assert!(resolve_jobs(None, Some("many".into()), &cfg).is_err());
        assert!(resolve_jobs(Some(0), None, &cfg).is_err());
    }

    #[test]
    fn parameters_round_trip_through_config() {
        let s = Settings::resolve(
            &common(&["--alpha", "-inf", "--alpha", "-1.5", "--qr", "0.7", "--sweep", "r:0.1:2:9:logx", "--jobs", "1"]),
            &Config::default(),
        )
        .unwrap();
        let text: String = s.parameters().iter().map(|(k, v)| format!("{k} = {v}\n")).collect();
        let back = Settings::resolve(&common(&["--jobs", "1"]), &Config::parse(&text).unwrap()).unwrap();
        assert_eq!(back, s);
    }
}
