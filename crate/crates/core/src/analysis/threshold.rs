//! Disentanglement and nonlocality-loss times, closed-form and numeric.

use crate::dynamics::{ModelSpec, Rk4};
use crate::error::{Error, Result};
use crate::measures::{bell_max, concurrence_witness};
use crate::states::{check_unit_interval, DensityMatrix};

/// Outcome of a threshold-time search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Crossing {
    /// The quantity reaches its threshold at this time and stays there.
    At(f64),
    /// Already at or past the threshold at `t = 0` (e.g. separable initially).
    Initially,
    /// Provably never reached in finite time.
    Never,
    /// Not reached within the searched horizon.
    NotWithin(f64),
}

impl Crossing {
    pub fn time(&self) -> Option<f64> {
        match *self {
            Crossing::At(t) => Some(t),
            _ => None,
        }
    }

    pub fn note(&self) -> Option<&'static str> {
        match self {
            Crossing::At(_) => None,
            Crossing::Initially => Some("already below threshold at t=0"),
            Crossing::Never => Some("never"),
            Crossing::NotWithin(_) => Some("not within t_max"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Analytic,
    Bisection,
}

impl Method {
    pub const fn label(self) -> &'static str {
        match self {
            Method::Analytic => "analytic",
            Method::Bisection => "bisection",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdResult {
    /// Disentanglement time.
    pub t_c: Crossing,
    /// Time after which the CHSH inequality is no longer violated.
    pub t_c_bell: Crossing,
    pub method: Method,
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange { name: "gamma", value: gamma })
    }
}

/// `-ln(x) / rate`, where `x >= 1` means the threshold is already crossed.
fn log_threshold(x: f64, rate: f64) -> Crossing {
    if x > 1.0 + 1e-12 {
        Crossing::Initially
    } else if x >= 1.0 - 1e-12 {
        // on the boundary up to round-off
        Crossing::At(0.0)
    } else {
        Crossing::At((-libm::log(x) / rate).max(0.0))
    }
}

/// Closed-form disentanglement time of the dephasing `|Phi+->` Werner family,
/// `-(1/2gamma) ln((1-r)/(2r))`.
pub fn t_c_analytic(r: f64, gamma: f64) -> Result<Crossing> {
    check_unit_interval("r", r)?;
    check_gamma(gamma)?;
    if r == 1.0 {
        return Ok(Crossing::Never);
    }
    if r == 0.0 {
        return Ok(Crossing::Initially);
    }
    Ok(log_threshold((1.0 - r) / (2.0 * r), 2.0 * gamma))
}

/// Closed-form CHSH-violation loss time of the same family,
/// `-(1/4gamma) ln((1-r^2)/r^2)`.
pub fn t_c_bell_analytic(r: f64, gamma: f64) -> Result<Crossing> {
    check_unit_interval("r", r)?;
    check_gamma(gamma)?;
    if r == 1.0 {
        return Ok(Crossing::Never);
    }
    if r == 0.0 {
        return Ok(Crossing::Initially);
    }
    let r2 = r * r;
    Ok(log_threshold((1.0 - r2) / r2, 4.0 * gamma))
}

/// Parameters of the numeric threshold search. Times are in units of `1/gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    /// The quantity must stay below threshold for this long to count.
    pub window: f64,
    /// Bisection stops once the bracket is this narrow.
    pub resolution: f64,
    /// After the window the quantity must sit at least this far below the
    /// threshold; separates a genuine crossing from an asymptotic approach.
    pub margin: f64,
    /// RK4 step; `None` uses the model default.
    pub dt: Option<f64>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { window: 1.0, resolution: 1e-4, margin: 1e-6, dt: None }
    }
}

/// Level below which the concurrence counts as zero.
pub const CONCURRENCE_ZERO: f64 = 1e-10;
/// Classical CHSH bound.
pub const CHSH_BOUND: f64 = 2.0;

/// First time `t* <= t_max` after which `probe` stays below `level` for the
/// confirmation window, refined by bisection.
fn sustained_crossing(
    model: &ModelSpec,
    rho0: &DensityMatrix,
    t_max: f64,
    opts: &SearchOptions,
    level: f64,
    probe: impl Fn(&DensityMatrix) -> Result<f64>,
) -> Result<Crossing> {
    if !(t_max > 0.0) {
        return Err(Error::ParameterOutOfRange { name: "t_max", value: t_max });
    }
    let dt = opts.dt.unwrap_or_else(|| model.default_dt());
    let mut rk = Rk4::new(*model, dt)?;
    let gamma = model.gamma;
    let window = opts.window / gamma;
    let resolution = opts.resolution / gamma;
    let sample = (0.01 / model.max_rate()).min(window / 4.0);

    // (last time above, state there, first time below)
    let mut bracket: Option<(f64, DensityMatrix, f64)> = None;
    let mut t = 0.0;
    let mut rho = *rho0;
    let mut value = probe(&rho)?;
    if value < level {
        bracket = Some((0.0, rho, 0.0));
    }
    let horizon = t_max + window;
    let mut k = 0u64;
    while t < horizon {
        k += 1;
        let t_next = k as f64 * sample;
        let next = rk.advance(&rho, t, t_next);
        let v = probe(&next)?;
        if v < level {
            if bracket.is_none() && t_next - sample <= t_max {
                bracket = Some((t, rho, t_next));
            }
        } else {
            bracket = None;
        }
        t = t_next;
        rho = next;
        value = v;
        if let Some((lo, rho_lo, hi)) = bracket {
            if t >= hi + window && value <= level - opts.margin {
                if hi == 0.0 {
                    return Ok(Crossing::Initially);
                }
                return refine(model, dt, &rho_lo, lo, hi, resolution, level, &probe).map(Crossing::At);
            }
        }
    }
    Ok(Crossing::NotWithin(t_max))
}

#[allow(clippy::too_many_arguments)]
fn refine(
    model: &ModelSpec,
    dt: f64,
    rho_lo: &DensityMatrix,
    t_lo: f64,
    t_hi: f64,
    resolution: f64,
    level: f64,
    probe: &impl Fn(&DensityMatrix) -> Result<f64>,
) -> Result<f64> {
    let (mut lo, mut hi) = (t_lo, t_hi);
    while hi - lo > resolution {
        let mid = 0.5 * (lo + hi);
        let mut rk = Rk4::new(*model, dt)?;
        let rho_mid = rk.advance(rho_lo, t_lo, mid);
        if probe(&rho_mid)? < level {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Numeric disentanglement time: the first time the concurrence drops below
/// [`CONCURRENCE_ZERO`] and stays there for `1/gamma`.
pub fn find_disentanglement_time(model: &ModelSpec, rho0: &DensityMatrix, t_max: f64) -> Result<Crossing> {
    find_disentanglement_time_with(model, rho0, t_max, &SearchOptions::default())
}

pub fn find_disentanglement_time_with(
    model: &ModelSpec,
    rho0: &DensityMatrix,
    t_max: f64,
    opts: &SearchOptions,
) -> Result<Crossing> {
    sustained_crossing(model, rho0, t_max, opts, CONCURRENCE_ZERO, concurrence_witness)
}

/// Numeric CHSH-violation loss time: the first time `bell_max` drops to 2 or
/// below and stays there for `1/gamma`.
pub fn find_nonlocality_loss_time(model: &ModelSpec, rho0: &DensityMatrix, t_max: f64) -> Result<Crossing> {
    // `bell_max <= 2` is "not violating"; shift the level by one ulp-scale step.
    sustained_crossing(model, rho0, t_max, &SearchOptions::default(), CHSH_BOUND + 1e-12, bell_max)
}

/// Both thresholds found by integration and bisection.
pub fn numeric_thresholds(model: &ModelSpec, rho0: &DensityMatrix, t_max: f64) -> Result<ThresholdResult> {
    Ok(ThresholdResult {
        t_c: find_disentanglement_time(model, rho0, t_max)?,
        t_c_bell: find_nonlocality_loss_time(model, rho0, t_max)?,
        method: Method::Bisection,
    })
}

/// Both thresholds of the dephasing `|Phi+->` Werner family in closed form.
pub fn analytic_thresholds(r: f64, gamma: f64) -> Result<ThresholdResult> {
    Ok(ThresholdResult {
        t_c: t_c_analytic(r, gamma)?,
        t_c_bell: t_c_bell_analytic(r, gamma)?,
        method: Method::Analytic,
    })
}
