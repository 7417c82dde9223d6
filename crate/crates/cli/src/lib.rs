pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod figures;
pub mod manifest;
pub mod sweep;
pub mod table;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;


use args::{enum_name, load_config, pick, Command, Common, Field, Kind, Method, Settings};
use commands::RunOutput;
pub use args::Cli;
pub use error::CliError;
use manifest::RunManifest;

fn in_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {jobs} workers: {e}")))?;
    Ok(pool.install(f))
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    out.with_file_name(name)
}

/// What a successful run wrote and what it wants the user warned about.
#[derive(Debug, Default)]
pub struct Report {
    pub written: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

/// Writes the table to `--out` (plus a manifest next to it) or stdout.
fn emit(
    command: &str,
    s: &Settings,
    extra: &[(&str, String)],
    out: RunOutput,
    start: Instant,
) -> Result<Report, CliError> {
    let text = out.render(s.wide, s.format);
    let warnings = out.warnings(s.tail_tol);
    match &s.out {
        Some(path) => {
            fs::write(path, &text).map_err(|e| CliError::io(path, e))?;
            let mp = manifest_path(path);
            let mut m = RunManifest::new(command, s, extra);
            m.outputs = vec![path.display().to_string()];
            m.warnings = warnings.clone();
            m.diagnostics = out.diagnostics;
            m.wall_time_s = start.elapsed().as_secs_f64();
            m.write(&mp)?;
            Ok(Report { written: vec![path.clone(), mp], warnings })
        }
        None => {
            std::io::stdout()
                .lock()
                .write_all(text.as_bytes())
                .map_err(|e| CliError::io(Path::new("<stdout>"), e))?;
            Ok(Report { written: Vec::new(), warnings })
        }
    }
}

fn settings(common: &Common) -> Result<(Settings, config::Config), CliError> {
    let cfg = load_config(common)?;
    Ok((Settings::resolve(common, &cfg)?, cfg))
}

/// Runs a parsed command line.
pub fn run(cli: Cli) -> Result<Report, CliError> {
    let start = Instant::now();
    match cli.command {
        Command::Negativity { field, method, common } => {
            let (s, cfg) = settings(&common)?;
            let field = pick(field, &cfg, "field")?.unwrap_or(Field::Boson);
            let method = pick(method, &cfg, "method")?.unwrap_or(Method::Auto);
            let out = in_pool(s.jobs, || commands::negativity(&s, field, method))??;
            let extra = [("field", enum_name(&field)), ("method", enum_name(&method))];
            emit("negativity", &s, &extra, out, start)
        }
        Command::Capacity { channel, kind, d, common } => {
            let (s, cfg) = settings(&common)?;
            let channel = pick(channel, &cfg, "channel")?
                .ok_or_else(|| CliError::Usage("capacity needs --channel unruh|grassmann".into()))?;
            let kind = pick(kind, &cfg, "kind")?.unwrap_or(Kind::Quantum);
            let d = match d {
                Some(d) => d,
                None => cfg.value("d")?.unwrap_or(2),
            };
            let out = in_pool(s.jobs, || commands::capacity(&s, channel, kind, d))??;
            let extra = [("channel", enum_name(&channel)), ("kind", enum_name(&kind)), ("d", d.to_string())];
            emit("capacity", &s, &extra, out, start)
        }
        Command::Chsh { common } => {
            let (s, _) = settings(&common)?;
            let out = in_pool(s.jobs, || commands::chsh(&s))??;
            emit("chsh", &s, &[], out, start)
        }
        Command::Hc { common } => {
            let (s, _) = settings(&common)?;
            let out = in_pool(s.jobs, || commands::hc(&s))??;
            emit("hc", &s, &[], out, start)
        }
        Command::Reproduce { figure, common } => {
            let (s, _) = settings(&common)?;
            if !s.alphas.is_empty() || s.grid.is_some() || !common.qr.is_empty() {
                return Err(CliError::Usage(
                    "reproduce uses the figure's own alpha, q_r and grid; drop --alpha/--qr/--sweep/--hubble".into(),
                ));
            }
            let dir = s.out.clone().unwrap_or_else(|| PathBuf::from("."));
            let (written, warnings) = in_pool(s.jobs, || figures::reproduce(figure, &s, &dir))??;
            Ok(Report { written, warnings })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_sits_next_to_output() {
        assert_eq!(manifest_path(Path::new("/tmp/run/a.csv")), PathBuf::from("/tmp/run/a.csv.manifest.json"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), 1);
        let n = CliError::Numerical {
            point: "p".into(),
            source: dsrqi_core::Error::ZeroVector,
        };
        assert_eq!(n.exit_code(), 2);
    }
}
