//! Threshold times, Werner classification, stationary states and the
//! parameter sweeps behind each figure and table.

mod sweep;
mod threshold;

pub use sweep::*;
pub use threshold::*;

use crate::dynamics::{dephase_projection, evolve_sampled, ModelSpec, Variant};
use crate::error::{Error, Result};
use crate::states::{check_unit_interval, DensityMatrix};

/// Entanglement / nonlocality class of a Werner-like state at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WernerClass {
    /// `r = 0`
    MaximallyMixed,
    /// `0 < r <= 1/3`
    Separable,
    /// `1/3 < r <= 1/sqrt 2`: entangled, no CHSH violation.
    EntangledLocal,
    /// `1/sqrt 2 < r <= 1`: entangled and CHSH-violating.
    NonlocalFragile,
}

pub fn classify_werner(r: f64) -> Result<WernerClass> {
    check_unit_interval("r", r)?;
    Ok(if r == 0.0 {
        WernerClass::MaximallyMixed
    } else if r <= 1.0 / 3.0 {
        WernerClass::Separable
    } else if r <= core::f64::consts::FRAC_1_SQRT_2 {
        WernerClass::EntangledLocal
    } else {
        WernerClass::NonlocalFragile
    })
}

/// Long-time state of `model` started from `rho0`.
///
/// Dephasing-only models project onto the `J` eigenspaces directly; the step
/// drive is integrated up to `t_off` and projected from there. Always-on drives
/// are rejected.
pub fn stationary_state(model: &ModelSpec, rho0: &DensityMatrix) -> Result<DensityMatrix> {
    stationary_state_with(model, rho0, None)
}

pub fn stationary_state_with(model: &ModelSpec, rho0: &DensityMatrix, dt: Option<f64>) -> Result<DensityMatrix> {
    model.validate()?;
    match model.variant {
        Variant::PureDephasing => Ok(dephase_projection(rho0, 0.0)),
        Variant::RotatedDephasing => Ok(dephase_projection(rho0, model.theta)),
        Variant::StepDrive => {
            let driven = if model.t_off > 0.0 {
                let tr = evolve_sampled(model, rho0, &[0.0, model.t_off], dt.unwrap_or_else(|| model.default_dt()))?;
                tr.states[1]
            } else {
                *rho0
            };
            Ok(dephase_projection(&driven, 0.0))
        }
        Variant::SymmetricDrive | Variant::AsymmetricDrive => Err(Error::UnsupportedVariant),
    }
}
