use std::fmt;
use std::str::FromStr;

use dsrqi_core::Scale;

pub const MAX_STEPS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    X,
    Hubble,
    R,
    RTilde,
}

impl SweepVar {
    pub fn name(self) -> &'static str {
        match self {
            SweepVar::X => "x",
            SweepVar::Hubble => "H",
            SweepVar::R => "r",
            SweepVar::RTilde => "r_tilde",
        }
    }

    /// Maps a value of this variable to the mode scale.
    pub fn scale(self, value: f64, k: f64) -> dsrqi_core::Result<Scale> {
        match self {
            SweepVar::X => Scale::from_x(value),
            SweepVar::Hubble => Scale::from_hubble(k, value),
            SweepVar::R => Scale::from_r(value),
            SweepVar::RTilde => Scale::from_r_tilde(value),
        }
    }

    /// Inverse of `scale` for a finite positive `x`.
    fn value_at(self, x: f64, k: f64) -> f64 {
        match self {
            SweepVar::X => x,
            SweepVar::Hubble => std::f64::consts::PI * k / x,
            SweepVar::R => (-x).exp().atanh(),
            SweepVar::RTilde => (-x).exp().atan(),
        }
    }
}

impl FromStr for SweepVar {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "x" => Ok(SweepVar::X),
            "H" => Ok(SweepVar::Hubble),
            "r" => Ok(SweepVar::R),
            "r_tilde" => Ok(SweepVar::RTilde),
            other => Err(format!("unknown sweep variable '{other}' (expected x, H, r or r_tilde)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    /// Geometric in the sweep variable.
    Log,
    /// Geometric in `x`, reported in the sweep variable.
    LogX,
}

impl Spacing {
    fn name(self) -> &'static str {
        match self {
            Spacing::Linear => "lin",
            Spacing::Log => "log",
            Spacing::LogX => "logx",
        }
    }
}

/// `var:min:max:steps[:lin|log|logx]`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub var: SweepVar,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
    pub spacing: Spacing,
}

impl FromStr for SweepSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if !(4..=5).contains(&parts.len()) {
            return Err(format!("sweep '{s}' is not of the form var:min:max:steps[:lin|log|logx]"));
        }
        let num = |t: &str, what: &str| -> Result<f64, String> {
            t.trim().parse::<f64>().map_err(|_| format!("sweep {what} '{t}' is not a number"))
        };
        let spec = SweepSpec {
            var: parts[0].trim().parse()?,
            min: num(parts[1], "min")?,
            max: num(parts[2], "max")?,
            steps: parts[3]
                .trim()
                .parse()
                .map_err(|_| format!("sweep steps '{}' is not a non-negative integer", parts[3]))?,
            spacing: match parts.get(4).map(|t| t.trim()) {
                None | Some("lin") => Spacing::Linear,
                Some("log") => Spacing::Log,
                Some("logx") => Spacing::LogX,
                Some(other) => return Err(format!("unknown sweep spacing '{other}'")),
            },
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl fmt::Display for SweepSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{}:{}:{}",
            self.var.name(),
            self.min,
            self.max,
            self.steps,
            self.spacing.name()
        )
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err("sweep bounds must be finite".into());
        }
        if !(self.min < self.max) {
            return Err(format!("sweep needs min < max, got {} and {}", self.min, self.max));
        }
        if self.steps < 2 || self.steps > MAX_STEPS {
            return Err(format!("sweep steps must lie in 2..={MAX_STEPS}, got {}", self.steps));
        }
        if self.spacing != Spacing::Linear && self.min <= 0.0 {
            return Err("logarithmic sweeps need min > 0".into());
        }
        Ok(())
    }

    /// Sweep values from `min` to `max`, endpoints exact.
    pub fn values(&self, k: f64) -> dsrqi_core::Result<Vec<f64>> {
        let n = self.steps;
        let last = (n - 1) as f64;
        let mut out = Vec::with_capacity(n);
        match self.spacing {
            Spacing::Linear => {
                for i in 0..n {
                    out.push(self.min + (self.max - self.min) * i as f64 / last);
                }
            }
            Spacing::Log => {
                let (a, b) = (self.min.ln(), self.max.ln());
                for i in 0..n {
                    out.push((a + (b - a) * i as f64 / last).exp());
                }
            }
            Spacing::LogX => {
                let (xa, xb) = (self.var.scale(self.min, k)?.x(), self.var.scale(self.max, k)?.x());
                if !(xa.is_finite() && xb.is_finite() && xa > 0.0 && xb > 0.0) {
                    return Err(dsrqi_core::Error::Domain(
                        "logx sweep endpoints must map to finite positive x".into(),
                    ));
                }
                let (a, b) = (xa.ln(), xb.ln());
                for i in 0..n {
                    out.push(self.var.value_at((a + (b - a) * i as f64 / last).exp(), k));
                }
            }
        }
        out[0] = self.min;
        out[n - 1] = self.max;
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub value: f64,
    pub scale: Scale,
}

/// The abscissae of a run: a sweep or an explicit list of Hubble scales.
#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    Sweep(SweepSpec),
    Hubble(Vec<f64>),
}

impl Grid {
    pub fn var(&self) -> SweepVar {
        match self {
            Grid::Sweep(s) => s.var,
            Grid::Hubble(_) => SweepVar::Hubble,
        }
    }

    pub fn points(&self, k: f64) -> dsrqi_core::Result<Vec<Point>> {
        let var = self.var();
        let values = match self {
            Grid::Sweep(s) => s.values(k)?,
            Grid::Hubble(h) => h.clone(),
        };
        values
            .into_iter()
            .map(|value| Ok(Point { value, scale: var.scale(value, k)? }))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_round_trips() {
        let s: SweepSpec = "r_tilde:0.01:0.5:5:logx".parse().unwrap();
        assert_eq!(s.var, SweepVar::RTilde);
        assert_eq!(s.spacing, Spacing::LogX);
        assert_eq!(s.to_string().parse::<SweepSpec>().unwrap(), s);
        let lin: SweepSpec = "x:1:2:3".parse().unwrap();
        assert_eq!(lin.values(1.0).unwrap(), vec![1.0, 1.5, 2.0]);
    }

    #[test]
    fn rejects_bad_specs() {
        for bad in ["x:1:2", "y:1:2:3", "x:2:1:3", "x:1:2:1", "x:1:2:100001", "x:0:1:3:log", "x:a:1:3", "x:1:2:3:cubic"] {
            assert!(bad.parse::<SweepSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn logx_is_geometric_in_x() {
        let s: SweepSpec = "r:0.01:3:7:logx".parse().unwrap();
        let xs: Vec<f64> = s
            .values(1.0)
            .unwrap()
            .iter()
            .map(|&r| SweepVar::R.scale(r, 1.0).unwrap().x())
            .collect();
        let ratio = xs[1] / xs[0];
        for w in xs.windows(2) {
            assert!((w[1] / w[0] - ratio).abs() < 1e-9);
        }
    }

    #[test]
    fn hubble_grid_uses_k() {
        let g = Grid::Hubble(vec![std::f64::consts::PI, 0.0]);
        let p = g.points(2.0).unwrap();
        assert!((p[0].scale.x() - 2.0).abs() < 1e-15);
        assert_eq!(p[1].scale, Scale::Flat);
    }
}
