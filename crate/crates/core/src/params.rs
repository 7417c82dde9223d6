//! Scalar mode parameters and the closed-form quantities derived from them.
//!
//! Every observable in the crate depends on two numbers: the vacuum label
//! `α < 0` and the dimensionless scale `x = π|k|/H`. Both have a limit that
//! is kept symbolic so it can be evaluated exactly: `α = −∞` is the
//! Bunch–Davies vacuum, `x = ∞` is flat space (`H → 0`) and `x = 0⁺` is the
//! infinite-curvature limit (`H → ∞`).

use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt;

use crate::error::{domain, Result};

/// Smallest magnitude accepted for a finite `α`.
pub const ALPHA_MAX: f64 = -1e-12;

/// Superselection label of the α-vacuum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Alpha {
    /// `α = −∞`.
    BunchDavies,
    Finite(f64),
}

impl Alpha {
    /// Accepts any `α ≤ −1e−12`; `f64::NEG_INFINITY` maps to Bunch–Davies.
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha == f64::NEG_INFINITY {
            Ok(Alpha::BunchDavies)
        } else if alpha.is_finite() && alpha <= ALPHA_MAX {
            Ok(Alpha::Finite(alpha))
        } else {
            domain(format!("alpha must be negative, got {alpha}"))
        }
    }

    /// `e^α`, exactly zero for Bunch–Davies.
    pub fn exp(self) -> f64 {
        match self {
            Alpha::BunchDavies => 0.0,
            Alpha::Finite(a) => a.exp(),
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Alpha::BunchDavies => f64::NEG_INFINITY,
            Alpha::Finite(a) => a,
        }
    }

    pub fn is_bunch_davies(self) -> bool {
        matches!(self, Alpha::BunchDavies)
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alpha::BunchDavies => write!(f, "-inf"),
            Alpha::Finite(a) => write!(f, "{a}"),
        }
    }
}

/// Dimensionless scale `x = π|k|/H`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scale {
    /// `x → ∞` (`H → 0`).
    Flat,
    Finite(f64),
    /// `x → 0⁺` (`H → ∞`).
    InfiniteCurvature,
}

impl Scale {
    pub fn from_x(x: f64) -> Result<Self> {
        if x == f64::INFINITY {
            Ok(Scale::Flat)
        } else if x.is_finite() && x > 0.0 {
            Ok(Scale::Finite(x))
        } else {
            domain(format!("x = pi|k|/H must be positive, got {x}"))
        }
    }

    /// From a Rindler frequency label `|k|` and Hubble scale `H`.
    pub fn from_hubble(k: f64, hubble: f64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return domain(format!("|k| must be positive, got {k}"));
        }
        if hubble == 0.0 {
            return Ok(Scale::Flat);
        }
        if hubble == f64::INFINITY {
            return Ok(Scale::InfiniteCurvature);
        }
        if !(hubble > 0.0) {
            return domain(format!("H must be positive, got {hubble}"));
        }
        Scale::from_x(PI * k / hubble)
    }

    /// From the bosonic squeezing `r` with `tanh r = e^{−x}`.
    pub fn from_r(r: f64) -> Result<Self> {
        if r == 0.0 {
            return Ok(Scale::Flat);
        }
        if r == f64::INFINITY {
            return Ok(Scale::InfiniteCurvature);
        }
        if !(r > 0.0) {
            return domain(format!("r must be positive, got {r}"));
        }
        Scale::from_x(-r.tanh().ln())
    }

    /// From the fermionic squeezing `r̃ ∈ (0, π/4)` with `tan r̃ = e^{−x}`.
    pub fn from_r_tilde(r_tilde: f64) -> Result<Self> {
        if r_tilde == 0.0 {
            return Ok(Scale::Flat);
        }
        if r_tilde == FRAC_PI_4 {
            return Ok(Scale::InfiniteCurvature);
        }
        if !(r_tilde > 0.0 && r_tilde < FRAC_PI_4) {
            return domain(format!("r_tilde must lie in (0, pi/4), got {r_tilde}"));
        }
        Scale::from_x(-r_tilde.tan().ln())
    }

    /// `x`, with the limits mapped to `∞` and `0`.
    pub fn x(self) -> f64 {
        match self {
            Scale::Flat => f64::INFINITY,
            Scale::Finite(x) => x,
            Scale::InfiniteCurvature => 0.0,
        }
    }

    /// `e^{−x}`: `tanh r` for bosons and `tan r̃` for fermions.
    pub fn exp_neg(self) -> f64 {
        match self {
            Scale::Flat => 0.0,
            Scale::Finite(x) => (-x).exp(),
            Scale::InfiniteCurvature => 1.0,
        }
    }

    /// `H/|k|`, i.e. `π/x`.
    pub fn hubble_over_k(self) -> f64 {
        PI / self.x()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeParams {
    pub alpha: Alpha,
    pub scale: Scale,
}

impl ModeParams {
    pub fn new(alpha: Alpha, scale: Scale) -> Self {
        ModeParams { alpha, scale }
    }

    /// Convenience constructor from raw numbers; `alpha = −∞` and
    /// `x = ∞` select the symbolic limits.
    pub fn from_values(alpha: f64, x: f64) -> Result<Self> {
        Ok(ModeParams {
            alpha: Alpha::new(alpha)?,
            scale: Scale::from_x(x)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BosonSqueeze {
    pub r: f64,
    /// `Δ ≥ 1`; infinite in the flat limit at finite α.
    pub delta: f64,
    /// `tanh r · Δ = (tanh r + e^α)/(1 + e^α tanh r)`.
    pub t_eff: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FermionSqueeze {
    pub r_tilde: f64,
    pub delta_tilde: f64,
    /// `tan r̃ · Δ̃ = s/c`.
    pub t_eff: f64,
    pub c: f64,
    pub s: f64,
}

pub fn boson_squeeze(p: ModeParams) -> Result<BosonSqueeze> {
    if p.scale == Scale::InfiniteCurvature {
        return domain("bosonic squeezing diverges at x = 0");
    }
    let th = p.scale.exp_neg();
    let e = p.alpha.exp();
    let t_eff = (th + e) / (1.0 + e * th);
    let delta = if th == 0.0 {
        if e == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        t_eff / th
    };
    Ok(BosonSqueeze {
        r: th.atanh(),
        delta,
        t_eff,
    })
}

pub fn fermion_squeeze(p: ModeParams) -> Result<FermionSqueeze> {
    let tn = p.scale.exp_neg();
    let e = p.alpha.exp();
    let r_tilde = tn.atan();
    let n_tilde = 1.0 / (1.0 + e * e).sqrt();
    let (sin, cos) = r_tilde.sin_cos();
    let c = n_tilde * (cos - e * sin);
    let s = n_tilde * (sin + e * cos);
    // e^{α−x} < 1 for α < 0, so the denominator stays positive
    let t_eff = (tn + e) / (1.0 - e * tn);
    let delta_tilde = if tn == 0.0 {
        if e == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        t_eff / tn
    };
    Ok(FermionSqueeze {
        r_tilde,
        delta_tilde,
        t_eff,
        c,
        s,
    })
}

/// Mean static-frame occupation of a bosonic α-vacuum mode, hyperbolic form.
pub fn occupation_boson(p: ModeParams) -> Result<f64> {
    let sq = boson_squeeze(p)?;
    let e = p.alpha.exp();
    let (sinh, cosh) = (sq.r.sinh(), sq.r.cosh());
    Ok((sinh + e * cosh).powi(2) / (1.0 - e * e))
}

/// Same quantity written as a Planck factor times the α correction.
pub fn occupation_boson_thermal_form(p: ModeParams) -> Result<f64> {
    let x = match p.scale {
        Scale::InfiniteCurvature => return domain("bosonic occupation diverges at x = 0"),
        Scale::Flat => {
            let e = p.alpha.exp();
            return Ok(e * e / (1.0 - e * e));
        }
        Scale::Finite(x) => x,
    };
    let correction = match p.alpha {
        Alpha::BunchDavies => 1.0,
        Alpha::Finite(a) => (1.0 + (a + x).exp()).powi(2) / (1.0 - (2.0 * a).exp()),
    };
    Ok(correction / (2.0 * x).exp_m1())
}

/// Mean static-frame occupation of a fermionic α-vacuum mode.
pub fn occupation_fermion(p: ModeParams) -> Result<f64> {
    let sq = fermion_squeeze(p)?;
    let e = p.alpha.exp();
    let (sin, cos) = sq.r_tilde.sin_cos();
    Ok((sin + e * cos).powi(2) / (1.0 + e * e))
}

pub fn occupation_fermion_thermal_form(p: ModeParams) -> Result<f64> {
    let x = p.scale.x();
    if x == f64::INFINITY {
        let e = p.alpha.exp();
        return Ok(e * e / (1.0 + e * e));
    }
    let correction = match p.alpha {
        Alpha::BunchDavies => 1.0,
        Alpha::Finite(a) => (1.0 + (a + x).exp()).powi(2) / (1.0 + (2.0 * a).exp()),
    };
    Ok(correction / ((2.0 * x).exp() + 1.0))
}

/// Vacuum label estimated from `e^α ∼ H/Λ`.
pub fn alpha_from_cutoff(hubble: f64, cutoff: f64) -> Result<f64> {
    if !(hubble > 0.0 && cutoff > 0.0) {
        return domain("H and Lambda must be positive");
    }
    if hubble >= cutoff {
        return domain(format!("H = {hubble} must lie below the cutoff {cutoff}"));
    }
    Ok((hubble / cutoff).ln())
}

/// Fermionic convergence point, where `tan r̃ · Δ̃ = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint {
    pub x_c: f64,
    pub r_tilde_c: f64,
    /// `H_c/|k| = π/x_c`.
    pub hc_over_k: f64,
}

/// `None` for Bunch–Davies, where `H_c = ∞`.
pub fn critical_point(alpha: Alpha) -> Option<CriticalPoint> {
    let e = match alpha {
        Alpha::BunchDavies => return None,
        Alpha::Finite(a) => a.exp(),
    };
    // ln((1+e)/(1−e)) = 2 artanh(e)
    let x_c = 2.0 * e.atanh();
    Some(CriticalPoint {
        x_c,
        r_tilde_c: ((1.0 - e) / (1.0 + e)).atan(),
        hc_over_k: PI / x_c,
    })
}

/// `H_c` for a mode with Rindler frequency label `|k|`; `+∞` for Bunch–Davies.
pub fn hc_fermionic(alpha: Alpha, k: f64) -> Result<f64> {
    if !(k > 0.0) {
        return domain(format!("|k| must be positive, got {k}"));
    }
    Ok(critical_point(alpha).map_or(f64::INFINITY, |cp| k * cp.hc_over_k))
}
