//! Collective-dephasing master equations, a fixed-step RK4 integrator, and the
//! exact dephasing propagator.
//!
//! All variants share the generator
//!
//! ```text
//! d rho/dt = -(i/2) [H(t), rho] + (gamma/2) (2 J rho J - J^2 rho - rho J^2)
//! ```
//!
//! where `J` is the collective spin along z (or along the tilted axis
//! `cos 2theta z + sin 2theta x`) and `H(t)` is a local sigma_x drive.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::qmat::{herm_eigen, kron2, CMat2, CMat4, C64};
use crate::states::DensityMatrix;

/// Which master equation to integrate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Collective dephasing along z, no drive.
    PureDephasing,
    /// Equal sigma_x drive on both qubits.
    SymmetricDrive,
    /// Independent sigma_x drive strengths on each qubit.
    AsymmetricDrive,
    /// sigma_x drive on qubit 1 only, switched off after `t_off`.
    StepDrive,
    /// Collective dephasing along the axis tilted by `theta`.
    RotatedDephasing,
}

impl Variant {
    pub const fn label(self) -> &'static str {
        match self {
            Variant::PureDephasing => "pure-dephasing",
            Variant::SymmetricDrive => "sym-drive",
            Variant::AsymmetricDrive => "asym-drive",
            Variant::StepDrive => "step-drive",
            Variant::RotatedDephasing => "rotated-dephasing",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        [
            Variant::PureDephasing,
            Variant::SymmetricDrive,
            Variant::AsymmetricDrive,
            Variant::StepDrive,
            Variant::RotatedDephasing,
        ]
        .into_iter()
        .find(|v| v.label() == s)
    }
}

/// A master-equation variant together with its physical parameters.
///
/// Rates are in inverse time units, `t_off` in time units and `theta` in radians.
/// Parameters a variant does not use are zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelSpec {
    pub variant: Variant,
    pub gamma: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub zeta1: f64,
    pub t_off: f64,
    pub theta: f64,
}

impl ModelSpec {
    const fn base(variant: Variant, gamma: f64) -> Self {
        ModelSpec { variant, gamma, omega1: 0.0, omega2: 0.0, zeta1: 0.0, t_off: 0.0, theta: 0.0 }
    }

    pub fn pure_dephasing(gamma: f64) -> Result<Self> {
        Self::base(Variant::PureDephasing, gamma).validated()
    }

    pub fn symmetric_drive(gamma: f64, omega: f64) -> Result<Self> {
        ModelSpec { omega1: omega, omega2: omega, ..Self::base(Variant::SymmetricDrive, gamma) }.validated()
    }

    pub fn asymmetric_drive(gamma: f64, omega1: f64, omega2: f64) -> Result<Self> {
        ModelSpec { omega1, omega2, ..Self::base(Variant::AsymmetricDrive, gamma) }.validated()
    }

    pub fn step_drive(gamma: f64, zeta1: f64, t_off: f64) -> Result<Self> {
        ModelSpec { zeta1, t_off, ..Self::base(Variant::StepDrive, gamma) }.validated()
    }

    pub fn rotated_dephasing(gamma: f64, theta: f64) -> Result<Self> {
        ModelSpec { theta, ..Self::base(Variant::RotatedDephasing, gamma) }.validated()
    }

    fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |name, value| Err(Error::ParameterOutOfRange { name, value });
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return bad("gamma", self.gamma);
        }
        for (name, v) in
            [("omega1", self.omega1), ("omega2", self.omega2), ("zeta1", self.zeta1), ("t_off", self.t_off)]
        {
            if !(v >= 0.0 && v.is_finite()) {
                return bad(name, v);
            }
        }
        if !(0.0..=core::f64::consts::FRAC_PI_2).contains(&self.theta) {
            return bad("theta", self.theta);
        }
        if self.variant == Variant::SymmetricDrive && self.omega1 != self.omega2 {
            return bad("omega2", self.omega2);
        }
        Ok(())
    }

    /// Largest rate in the model; sets the time scale of the integrator.
    pub fn max_rate(&self) -> f64 {
        self.gamma.max(self.omega1).max(self.omega2).max(self.zeta1)
    }

    /// Largest accepted RK4 step, `0.05 / max_rate`.
    pub fn max_dt(&self) -> f64 {
        0.05 / self.max_rate()
    }

    /// Default RK4 step, `1e-3 / max(1, max_rate)`.
    pub fn default_dt(&self) -> f64 {
        1e-3 / self.max_rate().max(1.0)
    }

    fn dephasing_axis(&self) -> f64 {
        match self.variant {
            Variant::RotatedDephasing => self.theta,
            _ => 0.0,
        }
    }

    /// Drive Hamiltonian in effect at time `t`, if any.
    fn drive_at(&self, t: f64) -> Option<CMat4> {
        let x = CMat2::sigma_x();
        let id = CMat2::identity();
        match self.variant {
            Variant::SymmetricDrive | Variant::AsymmetricDrive => {
                if self.omega1 == 0.0 && self.omega2 == 0.0 {
                    None
                } else {
                    Some(kron2(&x.scale(self.omega1), &id) + kron2(&id, &x.scale(self.omega2)))
                }
            }
            // The unit step is 1 at t == t_off.
            Variant::StepDrive if t <= self.t_off && self.zeta1 != 0.0 => Some(kron2(&x.scale(self.zeta1), &id)),
            _ => None,
        }
    }

    /// The generator in effect at time `t`.
    pub fn generator_at(&self, t: f64) -> Generator {
        Generator::new(self.gamma, collective_jtheta(self.dephasing_axis()), self.drive_at(t))
    }
}

/// A time-independent Lindblad generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Generator {
    gamma: f64,
    j: CMat4,
    j2: CMat4,
    drive: Option<CMat4>,
}

impl Generator {
    pub fn new(gamma: f64, j: CMat4, drive: Option<CMat4>) -> Self {
        Generator { gamma, j, j2: j * j, drive }
    }

    pub fn apply(&self, rho: &CMat4) -> CMat4 {
        let j = self.j;
        let dissipator = (j * *rho * j).scale(2.0) - self.j2 * *rho - *rho * self.j2;
        let mut out = dissipator.scale(0.5 * self.gamma);
        if let Some(h) = &self.drive {
            out += h.commutator(rho).scale_c(C64::new(0.0, -0.5));
        }
        out
    }
}

/// `J_z = (sigma_z (x) I + I (x) sigma_z)/2 = diag(1, 0, 0, -1)`.
pub fn collective_jz() -> CMat4 {
    collective_jtheta(0.0)
}

/// Collective spin along `sigma_theta = cos 2theta sigma_z + sin 2theta sigma_x`.
pub fn collective_jtheta(theta: f64) -> CMat4 {
    let (s2, c2) = libm::sincos(2.0 * theta);
    let sigma = CMat2::sigma_z().scale(c2) + CMat2::sigma_x().scale(s2);
    let id = CMat2::identity();
    (kron2(&sigma, &id) + kron2(&id, &sigma)).scale(0.5)
}

/// Single-qubit rotation `exp(-i theta sigma_y)` applied to both qubits.
///
/// Conjugation by it maps `J_z` to `J_theta`.
pub fn local_rotation(theta: f64) -> CMat4 {
    let (s, c) = libm::sincos(theta);
    let u = CMat2::new([[C64::new(c, 0.0), C64::new(-s, 0.0)], [C64::new(s, 0.0), C64::new(c, 0.0)]]);
    kron2(&u, &u)
}

/// `d rho / dt` for `model` at time `t`.
pub fn liouvillian_apply(model: &ModelSpec, rho: &DensityMatrix, t: f64) -> Result<CMat4> {
    if !(t >= 0.0) {
        return Err(Error::InvalidTime(t));
    }
    Ok(model.generator_at(t).apply(rho.matrix()))
}

/// Worst drift observed over an integration, measured before each step's
/// re-symmetrization and trace renormalization.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Drift {
    pub max_trace_defect: f64,
    pub max_hermiticity_defect: f64,
    /// Smallest eigenvalue seen over the stored samples.
    pub min_eigenvalue: f64,
}

/// Time-ordered states from one integration run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    pub model: ModelSpec,
    pub drift: Drift,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<(f64, &DensityMatrix)> {
        self.times.last().copied().zip(self.states.last())
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &DensityMatrix)> {
        self.times.iter().copied().zip(self.states.iter())
    }
}

/// Smallest eigenvalue tolerated at a stored sample.
pub const POSITIVITY_TOL: f64 = 1e-6;
/// Trace defects at or below this are left alone.
const RENORMALIZE_TOL: f64 = 1e-12;

/// Fixed-step RK4 stepper that never lets a step straddle the drive cutoff.
#[derive(Debug, Clone)]
pub struct Rk4 {
    model: ModelSpec,
    dt_max: f64,
    drift: Drift,
}

impl Rk4 {
    pub fn new(model: ModelSpec, dt_max: f64) -> Result<Self> {
        model.validate()?;
        if !(dt_max > 0.0) {
            return Err(Error::ParameterOutOfRange { name: "dt", value: dt_max });
        }
        let limit = model.max_dt();
        if dt_max > limit {
            return Err(Error::StepTooLarge { dt: dt_max, limit });
        }
        Ok(Rk4 { model, dt_max, drift: Drift::default() })
    }

    pub fn drift(&self) -> Drift {
        self.drift
    }

    /// Integrates `rho` from `t0` to `t1` in equal steps no longer than `dt_max`.
    pub fn advance(&mut self, rho: &DensityMatrix, t0: f64, t1: f64) -> DensityMatrix {
        let mut m = *rho.matrix();
        let cut = self.model.t_off;
        if self.model.variant == Variant::StepDrive && t0 < cut && cut < t1 {
            m = self.segment(m, t0, cut);
            m = self.segment(m, cut, t1);
        } else {
            m = self.segment(m, t0, t1);
        }
        DensityMatrix::from_trusted(m)
    }

    fn segment(&mut self, mut m: CMat4, t0: f64, t1: f64) -> CMat4 {
        let span = t1 - t0;
        if span <= 0.0 {
            return m;
        }
        let n = libm::ceil(span / self.dt_max - 1e-9).max(1.0) as usize;
        let h = span / n as f64;
        // The generator is piecewise constant; pick the piece by the midpoint.
        let g = self.model.generator_at(0.5 * (t0 + t1));
        for _ in 0..n {
            m = self.step(&g, &m, h);
        }
        m
    }

    fn step(&mut self, g: &Generator, m: &CMat4, h: f64) -> CMat4 {
        let k1 = g.apply(m);
        let k2 = g.apply(&(*m + k1.scale(0.5 * h)));
        let k3 = g.apply(&(*m + k2.scale(0.5 * h)));
        let k4 = g.apply(&(*m + k3.scale(h)));
        let next = *m + (k1 + k2.scale(2.0) + k3.scale(2.0) + k4).scale(h / 6.0);

        let herm = next.hermiticity_defect();
        let tr = next.trace();
        let trace_defect = (tr - C64::new(1.0, 0.0)).norm();
        self.drift.max_hermiticity_defect = self.drift.max_hermiticity_defect.max(herm);
        self.drift.max_trace_defect = self.drift.max_trace_defect.max(trace_defect);

        let mut next = next.hermitian_part();
        if trace_defect > RENORMALIZE_TOL {
            next = next.scale(1.0 / tr.re);
        }
        next
    }

    /// Records the smallest eigenvalue of a sample and rejects lost positivity.
    fn check_sample(&mut self, t: f64, rho: &DensityMatrix) -> Result<()> {
        let min = herm_eigen(rho.matrix())?.min_value();
        self.drift.min_eigenvalue = self.drift.min_eigenvalue.min(min);
        if min < -POSITIVITY_TOL {
            return Err(Error::PositivityLost { t, min_eigenvalue: min });
        }
        Ok(())
    }

    /// Integrates from `times[0]` (the time of `rho0`) landing exactly on every
    /// entry of `times`, which must be strictly increasing and non-negative.
    pub fn sample(mut self, rho0: &DensityMatrix, times: &[f64]) -> Result<Trajectory> {
        if let Some(&t) = times.iter().find(|t| !(**t >= 0.0) || !t.is_finite()) {
            return Err(Error::InvalidTime(t));
        }
        if let Some(w) = times.windows(2).find(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidTime(w[1]));
        }
        let mut states = Vec::with_capacity(times.len());
        let mut rho = *rho0;
        self.drift.min_eigenvalue = f64::INFINITY;
        for (k, &t) in times.iter().enumerate() {
            if k > 0 {
                rho = self.advance(&rho, times[k - 1], t);
            }
            self.check_sample(t, &rho)?;
            states.push(rho);
        }
        Ok(Trajectory { times: times.to_vec(), states, model: self.model, drift: self.drift })
    }
}

/// Uniform grid `0, dt, 2dt, ...` ending exactly at `t_end`, with `extra`
/// inserted when it falls strictly inside.
fn step_grid(t_end: f64, dt: f64, extra: Option<f64>) -> Vec<f64> {
    let n = libm::floor(t_end / dt + 1e-9) as usize;
    let mut times: Vec<f64> = (0..=n).map(|k| k as f64 * dt).filter(|&t| t < t_end).collect();
    if times.is_empty() {
        times.push(0.0);
    }
    if t_end > 0.0 {
        times.push(t_end);
    }
    if let Some(x) = extra {
        if x > 0.0 && x < t_end {
            let pos = times.partition_point(|&t| t < x);
            if (times[pos] - x).abs() > 1e-12 * dt {
                times.insert(pos, x);
            } else {
                times[pos] = x;
            }
        }
    }
    times
}

/// Classic RK4 from `t = 0` to `t_end`, storing every step.
///
/// For the step drive the grid gains a node at `t_off`.
pub fn evolve_rk4(model: &ModelSpec, rho0: &DensityMatrix, t_end: f64, dt: f64) -> Result<Trajectory> {
    if !(t_end >= 0.0) {
        return Err(Error::InvalidTime(t_end));
    }
    let stepper = Rk4::new(*model, dt)?;
    let extra = (model.variant == Variant::StepDrive).then_some(model.t_off);
    stepper.sample(rho0, &step_grid(t_end, dt, extra))
}

/// Like [`evolve_rk4`] but stores only the requested sample times (starting at 0).
pub fn evolve_sampled(model: &ModelSpec, rho0: &DensityMatrix, times: &[f64], dt_max: f64) -> Result<Trajectory> {
    if times.first() != Some(&0.0) {
        return Err(Error::InvalidTime(times.first().copied().unwrap_or(f64::NAN)));
    }
    Rk4::new(*model, dt_max)?.sample(rho0, times)
}

/// Spectral projectors of `J_theta` for `m = 1, 0, -1`.
pub fn jtheta_projectors(theta: f64) -> [CMat4; 3] {
    let w = local_rotation(theta);
    let wd = w.adjoint();
    [[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]].map(|d| w * CMat4::from_real_diag(d) * wd)
}

const EIGEN_M: [f64; 3] = [1.0, 0.0, -1.0];

/// Exact solution of collective dephasing along `theta`: in the eigenbasis of
/// `J_theta`, the coherence between `m_i` and `m_j` decays by
/// `exp(-gamma (m_i - m_j)^2 t / 2)`.
pub fn analytic_dephase(rho0: &DensityMatrix, gamma: f64, t: f64, theta: f64) -> Result<DensityMatrix> {
    if !(t >= 0.0) {
        return Err(Error::InvalidTime(t));
    }
    if t == 0.0 {
        return Ok(*rho0);
    }
    let p = jtheta_projectors(theta);
    let rho = rho0.matrix();
    let mut out = CMat4::zero();
    for (a, ma) in p.iter().zip(EIGEN_M) {
        for (b, mb) in p.iter().zip(EIGEN_M) {
            let decay = libm::exp(-0.5 * gamma * (ma - mb) * (ma - mb) * t);
            out += (*a * *rho * *b).scale(decay);
        }
    }
    Ok(DensityMatrix::from_trusted(out.hermitian_part()))
}

/// Infinite-time limit of collective dephasing: `sum_m P_m rho P_m`.
pub fn dephase_projection(rho: &DensityMatrix, theta: f64) -> DensityMatrix {
    let m = rho.matrix();
    let mut out = CMat4::zero();
    for p in jtheta_projectors(theta) {
        out += p * *m * p;
    }
    DensityMatrix::from_trusted(out.hermitian_part())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{bell_state, werner_state, BellKind};

    #[test]
    fn jz_and_jtheta() {
        assert_eq!(collective_jz(), CMat4::from_real_diag([1.0, 0.0, 0.0, -1.0]));
        assert_eq!(collective_jtheta(0.0), collective_jz());
        let jt = collective_jtheta(17f64.to_radians());
        assert!(jt.hermiticity_defect() < 1e-15);
    }

    #[test]
    fn rotation_maps_jz_to_jtheta() {
        for deg in [0.0, 17.0, 30.0, 45.0, 90.0] {
            let th = f64::to_radians(deg);
            let w = local_rotation(th);
            let diff = w * collective_jz() * w.adjoint() - collective_jtheta(th);
            assert!(diff.frobenius_norm() < 1e-15, "{deg}");
        }
    }

    #[test]
    fn model_validation() {
        assert!(ModelSpec::pure_dephasing(0.0).is_err());
        assert!(ModelSpec::pure_dephasing(-1.0).is_err());
        assert!(ModelSpec::symmetric_drive(1.0, -1.0).is_err());
        assert!(ModelSpec::step_drive(1.0, 1.0, f64::NAN).is_err());
        assert!(ModelSpec::rotated_dephasing(1.0, 2.0).is_err());
        assert!(ModelSpec::rotated_dephasing(1.0, 17f64.to_radians()).is_ok());
    }

    #[test]
    fn liouvillian_rejects_negative_time() {
        let m = ModelSpec::pure_dephasing(1.0).unwrap();
        let rho = DensityMatrix::maximally_mixed();
        assert_eq!(liouvillian_apply(&m, &rho, -1.0), Err(Error::InvalidTime(-1.0)));
    }

    #[test]
    fn singlet_werner_is_stationary() {
        let m = ModelSpec::pure_dephasing(1.0).unwrap();
        for r in [0.0, 0.3, 1.0] {
            let rho = werner_state(BellKind::PsiMinus, r).unwrap();
            for t in [0.0, 1.0, 7.5] {
                assert_eq!(liouvillian_apply(&m, &rho, t).unwrap().max_abs(), 0.0);
            }
        }
    }

    #[test]
    fn phi_plus_coherence_decays_at_twice_gamma() {
        let gamma = 0.7;
        let m = ModelSpec::pure_dephasing(gamma).unwrap();
        let rho = bell_state(BellKind::PhiPlus);
        let d = liouvillian_apply(&m, &rho, 0.0).unwrap();
        // Hand-applied dissipator: diag entries vanish, (0,3) gains -(gamma/2)(1+1) * 2 * 0.5.
        let mut expect = CMat4::zero();
        expect.0[0][3] = C64::new(-2.0 * gamma * 0.5, 0.0);
        expect.0[3][0] = expect.0[0][3];
        assert!((d - expect).frobenius_norm() < 1e-15);
    }

    #[test]
    fn undriven_symmetric_model_matches_pure_dephasing() {
        let a = ModelSpec::symmetric_drive(1.3, 0.0).unwrap();
        let b = ModelSpec::pure_dephasing(1.3).unwrap();
        let rho = werner_state(BellKind::PhiMinus, 0.6).unwrap();
        assert_eq!(liouvillian_apply(&a, &rho, 0.4).unwrap(), liouvillian_apply(&b, &rho, 0.4).unwrap());
    }

    #[test]
    fn step_drive_is_on_through_t_off() {
        let m = ModelSpec::step_drive(1.0, 2.0, 0.5).unwrap();
        let rho = bell_state(BellKind::PhiPlus);
        let pure = liouvillian_apply(&ModelSpec::pure_dephasing(1.0).unwrap(), &rho, 0.0).unwrap();
        assert_ne!(liouvillian_apply(&m, &rho, 0.5).unwrap(), pure);
        assert_eq!(liouvillian_apply(&m, &rho, 0.5 + 1e-12).unwrap(), pure);
    }

    #[test]
    fn evolve_zero_length_and_step_limit() {
        let m = ModelSpec::pure_dephasing(1.0).unwrap();
        let rho = bell_state(BellKind::PhiPlus);
        let tr = evolve_rk4(&m, &rho, 0.0, 1e-3).unwrap();
        assert_eq!(tr.times, [0.0]);
        assert_eq!(tr.states, [rho]);
        assert!(matches!(evolve_rk4(&m, &rho, 1.0, 0.06), Err(Error::StepTooLarge { .. })));
        assert!(matches!(evolve_rk4(&m, &rho, -1.0, 1e-3), Err(Error::InvalidTime(_))));
    }

    #[test]
    fn step_grid_lands_on_t_end_and_t_off() {
        let g = step_grid(1.0, 0.3, Some(0.45));
        assert_eq!(g.len(), 6);
        assert_eq!(g[2], 0.45);
        assert_eq!(*g.last().unwrap(), 1.0);
        let g = step_grid(1.0, 0.25, None);
        assert_eq!(g, [0.0, 0.25, 0.5, 0.75, 1.0]);
        // t_off on a grid node is not duplicated
        let g = step_grid(1.0, 0.25, Some(0.5));
        assert_eq!(g.len(), 5);
    }

    #[test]
    fn analytic_dephase_phi_plus() {
        let rho = bell_state(BellKind::PhiPlus);
        let out = analytic_dephase(&rho, 1.5, 0.4, 0.0).unwrap();
        let f = (-2.0f64 * 1.5 * 0.4).exp();
        let m = out.matrix();
        assert!((m.0[0][3].re - 0.5 * f).abs() < 1e-15);
        assert!((m.0[0][0].re - 0.5).abs() < 1e-15);
        assert!((m.0[3][3].re - 0.5).abs() < 1e-15);
        assert_eq!(analytic_dephase(&rho, 1.0, 0.0, 0.3).unwrap(), rho);
    }

    #[test]
    fn projection_cases() {
        let psi = bell_state(BellKind::PsiPlus);
        assert!((*dephase_projection(&psi, 0.0).matrix() - *psi.matrix()).frobenius_norm() < 1e-15);
        let phi = dephase_projection(&bell_state(BellKind::PhiPlus), 0.0);
        assert!((*phi.matrix() - CMat4::from_real_diag([0.5, 0.0, 0.0, 0.5])).frobenius_norm() < 1e-15);
    }
}
