//! State functionals: concurrence, maximal CHSH violation, mixedness, purity
//! and Uhlmann-Jozsa fidelity, together with the closed forms they take on the
//! dephasing `|Phi+->` Werner family.

use crate::error::{Error, Result};
use crate::qmat::{check_psd, herm_eigen, kron2, psd_sqrt, sym3_eigen, CMat2, CMat4, RMat3};
use crate::states::{check_unit_interval, DensityMatrix};

/// Largest imaginary part tolerated in a correlation `Tr(rho s_n x s_m)`.
pub const CORRELATION_IM_TOL: f64 = 1e-10;
/// Radicands in `[-RADICAND_CLAMP, 0)` are clamped to zero.
pub const RADICAND_CLAMP: f64 = 1e-12;

/// `sigma_y (x) sigma_y`
pub fn sigma_yy() -> CMat4 {
    kron2(&CMat2::sigma_y(), &CMat2::sigma_y())
}

/// `(sigma_y (x) sigma_y) rho^* (sigma_y (x) sigma_y)` with the conjugate taken
/// entrywise in the standard basis.
pub fn spin_flip(rho: &DensityMatrix) -> CMat4 {
    let yy = sigma_yy();
    yy * rho.matrix().conj() * yy
}

/// The Wootters values `lambda_1 >= ... >= lambda_4`, square roots of the
/// eigenvalues of `rho rho~`, obtained from the Hermitian form
/// `sqrt(rho) rho~ sqrt(rho)`.
pub fn wootters_lambdas(rho: &DensityMatrix) -> Result<[f64; 4]> {
    let s = psd_sqrt(rho.matrix())?;
    let sandwich = (s * spin_flip(rho) * s).hermitian_part();
    let eig = herm_eigen(&sandwich)?;
    check_psd(&eig, sandwich.frobenius_norm())?;
    let v = eig.values;
    Ok([v[3], v[2], v[1], v[0]].map(|x| libm::sqrt(x.max(0.0))))
}

/// `lambda_1 - lambda_2 - lambda_3 - lambda_4`; negative once the state is separable.
pub fn concurrence_witness(rho: &DensityMatrix) -> Result<f64> {
    let l = wootters_lambdas(rho)?;
    Ok(l[0] - l[1] - l[2] - l[3])
}

/// Wootters concurrence.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    Ok(concurrence_witness(rho)?.max(0.0))
}

/// Concurrence of `r |Phi+-><Phi+-| + (1-r)/4 I` after collective dephasing for `gamma t`.
pub fn concurrence_phi_analytic(r: f64, gamma_t: f64) -> Result<f64> {
    check_unit_interval("r", r)?;
    check_gamma_t(gamma_t)?;
    Ok((0.5 * (r - 1.0) + r * libm::exp(-2.0 * gamma_t)).max(0.0))
}

fn check_gamma_t(gamma_t: f64) -> Result<()> {
    if gamma_t >= 0.0 {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange { name: "gamma_t", value: gamma_t })
    }
}

/// Correlation matrix `T_nm = Tr(rho sigma_n (x) sigma_m)`.
pub fn bell_t_matrix(rho: &DensityMatrix) -> Result<RMat3> {
    let paulis = [CMat2::sigma_x(), CMat2::sigma_y(), CMat2::sigma_z()];
    let mut t = RMat3::zero();
    for (n, a) in paulis.iter().enumerate() {
        for (m, b) in paulis.iter().enumerate() {
            let c = (*rho.matrix() * kron2(a, b)).trace();
            if c.im.abs() > CORRELATION_IM_TOL {
                return Err(Error::NonRealCorrelation { residue: c.im.abs() });
            }
            t.0[n][m] = c.re;
        }
    }
    Ok(t)
}

/// Maximal CHSH expectation `2 sqrt(lambda + lambda~)` over the two largest
/// eigenvalues of `T^T T`. Values above 2 witness a violation.
pub fn bell_max(rho: &DensityMatrix) -> Result<f64> {
    let t = bell_t_matrix(rho)?;
    let e = sym3_eigen(&(t.transpose() * t))?;
    Ok(2.0 * libm::sqrt((e[0] + e[1]).max(0.0)))
}

/// `bell_max` of the dephasing `|Phi+->` Werner family.
pub fn bell_phi_analytic(r: f64, gamma_t: f64) -> Result<f64> {
    check_unit_interval("r", r)?;
    check_gamma_t(gamma_t)?;
    Ok(2.0 * libm::sqrt(r * r * (1.0 + libm::exp(-4.0 * gamma_t))))
}

/// `Tr(rho^2)`
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.purity()
}

/// Normalized linear entropy `4/3 (1 - Tr rho^2)`.
pub fn mixedness(rho: &DensityMatrix) -> f64 {
    4.0 / 3.0 * (1.0 - purity(rho))
}

/// Uhlmann-Jozsa fidelity `[Tr sqrt(sqrt(rho_i) rho_f sqrt(rho_i))]^2`.
pub fn fidelity(rho_i: &DensityMatrix, rho_f: &DensityMatrix) -> Result<f64> {
    if rho_i == rho_f {
        return Ok(1.0);
    }
    let s = psd_sqrt(rho_i.matrix())?;
    let sandwich = (s * *rho_f.matrix() * s).hermitian_part();
    let eig = herm_eigen(&sandwich)?;
    check_psd(&eig, sandwich.frobenius_norm())?;
    let tr: f64 = eig.values.iter().map(|x| libm::sqrt(x.max(0.0))).sum();
    Ok(tr * tr)
}

fn clamped_sqrt(x: f64) -> Result<f64> {
    if x < -RADICAND_CLAMP {
        return Err(Error::NegativeRadicand(x));
    }
    Ok(libm::sqrt(x.max(0.0)))
}

/// Fidelity between `r |Phi+-><Phi+-| + (1-r)/4 I` and its collective
/// dephasing image after `gamma t`.
pub fn fidelity_w_analytic(r: f64, gamma_t: f64) -> Result<f64> {
    check_unit_interval("r", r)?;
    check_gamma_t(gamma_t)?;
    let e = libm::exp(-2.0 * gamma_t);
    let a = clamped_sqrt((1.0 + 3.0 * r) * (1.0 + r + 2.0 * r * e))?;
    let b = clamped_sqrt((1.0 - r) * (1.0 + r * (1.0 - 2.0 * e)))?;
    let sum = 2.0 * (1.0 - r) + a + b;
    Ok(sum * sum / 16.0)
}

/// All state functionals at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureReport {
    pub concurrence: f64,
    pub bell_max: f64,
    pub mixedness: f64,
    pub purity: f64,
    pub fidelity: Option<f64>,
}

impl MeasureReport {
    pub fn of(rho: &DensityMatrix, reference: Option<&DensityMatrix>) -> Result<Self> {
        let purity = purity(rho);
        Ok(MeasureReport {
            concurrence: concurrence(rho)?,
            bell_max: bell_max(rho)?,
            mixedness: 4.0 / 3.0 * (1.0 - purity),
            purity,
            fidelity: reference.map(|r| fidelity(r, rho)).transpose()?,
        })
    }
}
