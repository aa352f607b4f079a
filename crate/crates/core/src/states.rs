//! Bell states, Werner and Werner-like states, and density-matrix validation.
//!
//! Basis order is fixed throughout the crate as `(|11>, |10>, |01>, |00>)`,
//! with qubit 1 the left tensor factor.

use core::fmt;

use crate::error::{Error, Result};
use crate::qmat::{herm_eigen, CMat4, C64};

/// Tolerance for the density-matrix invariants (Hermitian, unit trace, PSD).
pub const STATE_TOL: f64 = 1e-9;

/// A validated two-qubit density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix(CMat4);

/// Invariant defects of a candidate density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    /// `||m - m^dagger||_F`
    pub hermiticity_defect: f64,
    /// `|Tr m - 1|`
    pub trace_defect: f64,
    /// Smallest eigenvalue of the Hermitian part of `m`.
    pub min_eigenvalue: f64,
}

impl Diagnostics {
    pub fn within(&self, tol: f64) -> bool {
        self.hermiticity_defect <= tol && self.trace_defect <= tol && self.min_eigenvalue >= -tol
    }
}

/// Reports how far `m` is from being a density matrix. Never fails.
pub fn validate(m: &CMat4) -> Diagnostics {
    let tr = m.trace();
    let min_eigenvalue = herm_eigen(&m.hermitian_part()).map(|e| e.min_value()).unwrap_or(f64::NAN);
    Diagnostics {
        hermiticity_defect: m.hermiticity_defect(),
        trace_defect: (tr - C64::new(1.0, 0.0)).norm(),
        min_eigenvalue,
    }
}

impl DensityMatrix {
    /// Validates `m` against the density-matrix invariants at [`STATE_TOL`].
    pub fn new(m: CMat4) -> Result<Self> {
        Self::with_tolerance(m, STATE_TOL)
    }

    pub fn with_tolerance(m: CMat4, tol: f64) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::InvalidState { reason: "non-finite entry" });
        }
        let d = validate(&m);
        if d.hermiticity_defect > tol {
            return Err(Error::InvalidState { reason: "not Hermitian" });
        }
        if d.trace_defect > tol {
            return Err(Error::InvalidState { reason: "trace is not 1" });
        }
        if !(d.min_eigenvalue >= -tol) {
            return Err(Error::InvalidState { reason: "not positive semidefinite" });
        }
        Ok(DensityMatrix(m))
    }

    /// Wraps a matrix the caller has already shown to be a state.
    pub(crate) const fn from_trusted(m: CMat4) -> Self {
        DensityMatrix(m)
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix(CMat4::from_real_diag([0.25; 4]))
    }

    pub fn matrix(&self) -> &CMat4 {
        &self.0
    }

    pub fn into_matrix(self) -> CMat4 {
        self.0
    }

    pub fn diagnostics(&self) -> Diagnostics {
        validate(&self.0)
    }

    /// `Tr(rho^2)`
    pub fn purity(&self) -> f64 {
        self.0 .0.iter().flatten().map(|x| x.norm_sqr()).sum()
    }
}

/// The four Bell states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellKind {
    /// `(|10> - |01>)/sqrt 2`, the singlet.
    PsiMinus,
    /// `(|10> + |01>)/sqrt 2`
    PsiPlus,
    /// `(|11> + |00>)/sqrt 2`
    PhiPlus,
    /// `(|11> - |00>)/sqrt 2`
    PhiMinus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [BellKind::PsiMinus, BellKind::PsiPlus, BellKind::PhiPlus, BellKind::PhiMinus];

    /// Short label used on the command line and in CSV headers.
    pub const fn label(self) -> &'static str {
        match self {
            BellKind::PsiMinus => "psi-",
            BellKind::PsiPlus => "psi+",
            BellKind::PhiPlus => "phi+",
            BellKind::PhiMinus => "phi-",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.label() == s)
    }

    /// Amplitude vector; unnormalized entries are `+-1`, to be scaled by `1/sqrt 2`.
    fn signs(self) -> [f64; 4] {
        match self {
            BellKind::PsiMinus => [0.0, 1.0, -1.0, 0.0],
            BellKind::PsiPlus => [0.0, 1.0, 1.0, 0.0],
            BellKind::PhiPlus => [1.0, 0.0, 0.0, 1.0],
            BellKind::PhiMinus => [1.0, 0.0, 0.0, -1.0],
        }
    }

    pub fn vector(self) -> [C64; 4] {
        self.signs().map(|x| C64::new(x * core::f64::consts::FRAC_1_SQRT_2, 0.0))
    }
}

impl fmt::Display for BellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Parameters of `r |M><M| + (1 - r)/4 I`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WernerSpec {
    pub family: BellKind,
    pub r: f64,
}

impl WernerSpec {
    pub fn new(family: BellKind, r: f64) -> Result<Self> {
        check_unit_interval("r", r)?;
        Ok(WernerSpec { family, r })
    }
}

pub(crate) fn check_unit_interval(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange { name, value })
    }
}

/// Projector onto a Bell state. Entries are exactly `0` or `+-1/2`.
pub fn bell_state(kind: BellKind) -> DensityMatrix {
    let s = kind.signs();
    let mut m = CMat4::zero();
    for i in 0..4 {
        for j in 0..4 {
            m.0[i][j] = C64::new(0.5 * s[i] * s[j], 0.0);
        }
    }
    DensityMatrix(m)
}

/// `r |M><M| + (1 - r)/4 I (x) I` with `|M>` the Bell state of `spec.family`.
pub fn werner(spec: WernerSpec) -> Result<DensityMatrix> {
    check_unit_interval("r", spec.r)?;
    let bell = bell_state(spec.family).into_matrix();
    let mixed = CMat4::from_real_diag([(1.0 - spec.r) / 4.0; 4]);
    Ok(DensityMatrix(bell.scale(spec.r) + mixed))
}

/// Shorthand for `werner(WernerSpec::new(family, r)?)`.
pub fn werner_state(family: BellKind, r: f64) -> Result<DensityMatrix> {
    werner(WernerSpec::new(family, r)?)
}
