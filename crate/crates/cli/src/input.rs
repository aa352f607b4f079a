//! Initial states and models from run settings.

use std::path::PathBuf;

use dephaselab_core::dynamics::{ModelSpec, Variant};
use dephaselab_core::{bell_state, werner, BellKind, DensityMatrix, WernerSpec};

use crate::config::Settings;
use crate::error::{CliError, Result};
use crate::format::parse_raw_matrix;

/// `werner:<family>:<r>`, `bell:<kind>` or `file:<path>`.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    Werner(WernerSpec),
    Bell(BellKind),
    File(PathBuf),
}

fn family(s: &str) -> Result<BellKind> {
    BellKind::from_label(s)
        .ok_or_else(|| CliError::invalid(format!("unknown Bell family `{s}` (expected psi-, psi+, phi+ or phi-)")))
}

impl InitialState {
    pub fn parse(spec: &str) -> Result<Self> {
        let (kind, rest) =
            spec.split_once(':').ok_or_else(|| CliError::invalid(format!("state `{spec}`: expected kind:args")))?;
        match kind {
            "werner" => {
                let (fam, r) = rest
                    .split_once(':')
                    .ok_or_else(|| CliError::invalid(format!("state `{spec}`: expected werner:<family>:<r>")))?;
                let r: f64 = r.parse().map_err(|_| CliError::invalid(format!("state `{spec}`: bad r `{r}`")))?;
                Ok(InitialState::Werner(WernerSpec::new(family(fam)?, r)?))
            }
            "bell" => Ok(InitialState::Bell(family(rest)?)),
            "file" if !rest.is_empty() => Ok(InitialState::File(rest.into())),
            _ => Err(CliError::invalid(format!("state `{spec}`: expected werner:, bell: or file:"))),
        }
    }

    pub fn density(&self) -> Result<DensityMatrix> {
        match self {
            InitialState::Werner(w) => Ok(werner(*w)?),
            InitialState::Bell(k) => Ok(bell_state(*k)),
            InitialState::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
                Ok(DensityMatrix::new(parse_raw_matrix(&text)?)?)
            }
        }
    }

    /// Family and weight when the state is Werner-like (a Bell state has `r = 1`).
    pub fn werner_params(&self) -> Option<(BellKind, f64)> {
        match self {
            InitialState::Werner(w) => Some((w.family, w.r)),
            InitialState::Bell(k) => Some((*k, 1.0)),
            InitialState::File(_) => None,
        }
    }
}

pub fn initial_state(s: &Settings) -> Result<InitialState> {
    InitialState::parse(s.str("state").ok_or_else(|| CliError::invalid("missing --state"))?)
}

/// Angle setting in degrees, checked to lie in `[0, 90]`, returned in radians.
pub fn theta(s: &Settings, default_deg: f64) -> Result<f64> {
    let deg = s.get_or("theta-deg", default_deg)?;
    if !(0.0..=90.0).contains(&deg) {
        return Err(CliError::invalid(format!("theta-deg must lie in [0, 90], got {deg}")));
    }
    Ok(deg.to_radians())
}

pub fn model(s: &Settings) -> Result<ModelSpec> {
    let label = s.str("model").unwrap_or("pure-dephasing");
    let variant = Variant::from_label(label).ok_or_else(|| {
        CliError::invalid(format!(
            "unknown model `{label}` (expected pure-dephasing, sym-drive, asym-drive, step-drive or rotated-dephasing)"
        ))
    })?;
    let gamma = s.get_or("gamma", 1.0)?;
    let omega: Option<f64> = s.get("omega")?;
    let omega1 = s.get("omega1")?.or(omega).unwrap_or(0.0);
    let omega2 = s.get("omega2")?.or(omega).unwrap_or(0.0);
    Ok(match variant {
        Variant::PureDephasing => ModelSpec::pure_dephasing(gamma)?,
        Variant::SymmetricDrive => {
            if omega1 != omega2 {
                return Err(CliError::invalid("sym-drive needs omega1 = omega2; use --omega"));
            }
            ModelSpec::symmetric_drive(gamma, omega1)?
        }
        Variant::AsymmetricDrive => ModelSpec::asymmetric_drive(gamma, omega1, omega2)?,
        Variant::StepDrive => ModelSpec::step_drive(gamma, s.get_or("zeta1", 0.0)?, s.get_or("t-off", 0.0)?)?,
        Variant::RotatedDephasing => ModelSpec::rotated_dephasing(gamma, theta(s, 0.0)?)?,
    })
}
