use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use dsrqi_core::params::critical_point;
use dsrqi_core::Alpha;

use crate::args::{enum_name, Channel, Field, Format, Kind, Method, Settings};
use crate::commands::{self, RunOutput};
use crate::error::CliError;
use crate::manifest::RunManifest;
use crate::sweep::{Grid, Spacing, SweepSpec, SweepVar};
use crate::table::Table;

pub const GRID_POINTS: usize = 400;

type Extra = Vec<(&'static str, String)>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Quantity {
    Negativity(Field),
    Chsh,
    Capacity(Channel, Kind),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Figure {
    pub number: u8,
    pub quantity: Quantity,
    /// Caption order, top curve first.
    pub alphas: &'static [f64],
    pub qrs: &'static [f64],
    pub sweep: SweepSpec,
    pub ylabel: &'static str,
}

fn bosonic_grid() -> SweepSpec {
    SweepSpec {
        var: SweepVar::R,
        min: 0.01,
        max: 3.0,
        steps: GRID_POINTS,
        spacing: Spacing::LogX,
    }
}

fn fermionic_grid() -> SweepSpec {
    SweepSpec {
        var: SweepVar::RTilde,
        min: 0.01,
        max: std::f64::consts::FRAC_PI_4 - 0.01,
        steps: GRID_POINTS,
        spacing: Spacing::LogX,
    }
}

const Q_WEIGHTS: &[f64] = &[1.0, 0.9, 0.8, 0.7];

pub fn figure(number: u8) -> Option<Figure> {
    let (quantity, alphas, qrs, sweep, ylabel): (Quantity, &'static [f64], &'static [f64], SweepSpec, &'static str) =
        match number {
            2 => (Quantity::Negativity(Field::Boson), &[-6.0, -3.0], Q_WEIGHTS, bosonic_grid(), "N"),
            3 => (Quantity::Negativity(Field::Fermion), &[-6.0, -1.5], Q_WEIGHTS, fermionic_grid(), "N"),
            4 => (Quantity::Chsh, &[-6.0, -2.0, -1.5, -1.0], &[1.0], fermionic_grid(), "B_max"),
            5 => (
                Quantity::Capacity(Channel::Unruh, Kind::Quantum),
                &[-6.0, -2.0, -1.5, -1.0],
                &[1.0],
                bosonic_grid(),
                "Q(U_2)",
            ),
            6 => (
                Quantity::Capacity(Channel::Grassmann, Kind::Quantum),
                &[-6.0, -2.0, -1.5, -1.0],
                &[1.0],
                fermionic_grid(),
                "Q(G_2)",
            ),
            7 => (
                Quantity::Capacity(Channel::Grassmann, Kind::Classical),
                &[-6.0, -1.5, -1.0, -0.5],
                &[1.0],
                fermionic_grid(),
                "C(G_2)",
            ),
            _ => return None,
        };
    Some(Figure {
        number,
        quantity,
        alphas,
        qrs,
        sweep,
        ylabel,
    })
}

impl Figure {
    fn settings(&self, base: &Settings) -> Settings {
        Settings {
            alphas: self.alphas.iter().map(|&a| Alpha::new(a).expect("negative alpha")).collect(),
            qrs: self.qrs.to_vec(),
            grid: Some(Grid::Sweep(self.sweep)),
            ..base.clone()
        }
    }

    /// Output, command name and the command-specific manifest parameters.
    fn run(&self, s: &Settings) -> Result<(RunOutput, &'static str, Extra), CliError> {
        Ok(match self.quantity {
            Quantity::Negativity(field) => (
                commands::negativity(s, field, Method::Auto)?,
                "negativity",
                vec![("field", enum_name(&field)), ("method", "auto".into())],
            ),
            Quantity::Chsh => (commands::chsh(s)?, "chsh", Vec::new()),
            Quantity::Capacity(channel, kind) => (
                commands::capacity(s, channel, kind, 2)?,
                "capacity",
                vec![("channel", enum_name(&channel)), ("kind", enum_name(&kind)), ("d", "2".into())],
            ),
        })
    }

    fn stem(&self) -> String {
        let n = self.number;
        match self.quantity {
            Quantity::Negativity(Field::Boson) => format!("fig{n}_boson_negativity"),
            Quantity::Negativity(Field::Fermion) => format!("fig{n}_fermion_negativity"),
            Quantity::Chsh => format!("fig{n}_chsh"),
            Quantity::Capacity(Channel::Unruh, _) => format!("fig{n}_unruh_quantum_capacity"),
            Quantity::Capacity(Channel::Grassmann, Kind::Quantum) => format!("fig{n}_grassmann_quantum_capacity"),
            Quantity::Capacity(Channel::Grassmann, Kind::Classical) => format!("fig{n}_grassmann_classical_capacity"),
        }
    }

    /// Per-α files for the Grassmann quantum capacity, one long file otherwise.
    fn split_per_alpha(&self) -> bool {
        self.quantity == Quantity::Capacity(Channel::Grassmann, Kind::Quantum)
    }
}

/// File name of the per-α Grassmann quantum capacity dataset.
pub fn grassmann_q_file(alpha: f64, ext: &str) -> String {
    format!("grassmann_q_alpha{alpha}.{ext}")
}

fn value_column(t: &Table) -> usize {
    // the first numeric result column after the curve coordinates
    let name = ["negativity", "b_max_numeric", "capacity_bits"]
        .into_iter()
        .find(|n| t.columns.iter().any(|c| c == n))
        .expect("known table");
    t.columns.iter().position(|c| c == name).expect("column") + 1
}

fn gnuplot(fig: &Figure, files: &[(String, Option<String>)], value_col: usize) -> String {
    let mut g = String::new();
    let xlabel = fig.sweep.var.name();
    let _ = writeln!(g, "set datafile separator ','");
    let _ = writeln!(g, "set terminal pngcairo size 800,560");
    let _ = writeln!(g, "set output 'fig{}.png'", fig.number);
    let _ = writeln!(g, "set xlabel '{xlabel}'");
    let _ = writeln!(g, "set ylabel '{}'", fig.ylabel);
    let _ = writeln!(g, "set key outside right");
    if matches!(fig.quantity, Quantity::Chsh | Quantity::Capacity(Channel::Grassmann, Kind::Quantum) | Quantity::Negativity(Field::Fermion)) {
        for &a in fig.alphas {
            if let Some(cp) = critical_point(Alpha::new(a).expect("negative alpha")) {
                let _ = writeln!(g, "set arrow from {0},graph 0 to {0},graph 1 nohead dt 2 lc rgb 'gray'", cp.r_tilde_c);
            }
        }
    }
    let entries: Vec<String> = files
        .iter()
        .map(|(file, curve)| match curve {
            Some(label) => format!(
                "'{file}' skip 1 using 2:(strcol(1) eq \"{label}\" ? column({value_col}) : NaN) with lines title \"{label}\""
            ),
            None => format!("'{file}' skip 1 using 2:{value_col} with lines title '{}'", file.trim_end_matches(".csv")),
        })
        .collect();
    let _ = writeln!(g, "plot \\\n    {}", entries.join(", \\\n    "));
    g
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Writes the figure's dataset(s), manifest and gnuplot script into `dir`.
/// Returns the written paths and any accuracy warnings.
pub fn reproduce(number: u8, base: &Settings, dir: &Path) -> Result<(Vec<PathBuf>, Vec<String>), CliError> {
    let fig = figure(number).ok_or_else(|| CliError::Usage(format!("no figure {number}")))?;
    let start = Instant::now();
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let s = fig.settings(base);
    let (out, command, extra) = fig.run(&s)?;
    let ext = s.format.extension();

    let mut written = Vec::new();
    let mut plot_files = Vec::new();
    let value_col = value_column(&out.table);
    if fig.split_per_alpha() {
        for (&a, alpha) in fig.alphas.iter().zip(&s.alphas) {
            let label_prefix = format!("alpha={alpha} ");
            let mut part = out.clone();
            part.table.rows.retain(|r| matches!(&r[0], crate::table::Cell::Text(c) if c.starts_with(&label_prefix)));
            let name = grassmann_q_file(a, ext);
            write(&dir.join(&name), &part.render(s.wide, s.format))?;
            plot_files.push((name.clone(), None));
            written.push(dir.join(name));
        }
    } else {
        let name = format!("{}.{ext}", fig.stem());
        write(&dir.join(&name), &out.render(s.wide, s.format))?;
        let mut labels: Vec<String> = Vec::new();
        for r in &out.table.rows {
            if let crate::table::Cell::Text(c) = &r[0] {
                if !labels.contains(c) {
                    labels.push(c.clone());
                }
            }
        }
        plot_files.extend(labels.into_iter().map(|l| (name.clone(), Some(l))));
        written.push(dir.join(name));
    }

    if s.format == Format::Csv && !s.wide {
        let gp = dir.join(format!("fig{number}.gp"));
        write(&gp, &gnuplot(&fig, &plot_files, value_col))?;
        written.push(gp);
    }

    let mut extra = extra;
    extra.push(("figure", number.to_string()));
    let mut manifest = RunManifest::new(command, &s, &extra);
    manifest.outputs = written
        .iter()
        .map(|p| p.file_name().expect("file").to_string_lossy().into_owned())
        .collect();
    manifest.warnings = out.warnings(s.tail_tol);
    let warnings = manifest.warnings.iter().map(|w| format!("figure {number}: {w}")).collect();
    manifest.diagnostics = out.diagnostics;
    manifest.wall_time_s = start.elapsed().as_secs_f64();
    let mp = dir.join(format!("fig{number}_manifest.json"));
    manifest.write(&mp)?;
    written.push(mp);
    Ok((written, warnings))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure_table() {
        for n in 2..=7 {
            let f = figure(n).unwrap();
            assert_eq!(f.sweep.steps, GRID_POINTS);
            assert!(f.sweep.validate().is_ok());
        }
        assert!(figure(1).is_none() && figure(8).is_none());
        assert_eq!(figure(2).unwrap().alphas.len() * figure(2).unwrap().qrs.len(), 8);
        assert_eq!(grassmann_q_file(-1.5, "csv"), "grassmann_q_alpha-1.5.csv");
        assert_eq!(grassmann_q_file(-6.0, "csv"), "grassmann_q_alpha-6.csv");
    }
}
