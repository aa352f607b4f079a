//! Parameter sweeps and the datasets behind each figure and table.
//!
//! All sweeps use `gamma = 1`, so every time axis reads directly as `gamma t`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::threshold::{t_c_analytic, t_c_bell_analytic, Crossing};
use crate::dynamics::{analytic_dephase, dephase_projection, evolve_sampled, ModelSpec};
use crate::error::{Error, Result};
use crate::measures::{bell_max, concurrence, fidelity};
use crate::states::{bell_state, werner_state, BellKind, DensityMatrix};

/// Runs independent grid-point jobs and returns results in index order.
pub trait Executor {
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// Runs every job on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..n).map(f).collect()
    }
}

fn try_map<E: Executor, T: Send>(exec: &E, n: usize, f: impl Fn(usize) -> Result<T> + Sync + Send) -> Result<Vec<T>> {
    exec.map(n, f).into_iter().collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub values: Vec<f64>,
}

/// A swept axis with derived-scalar columns over it.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub axis: String,
    pub grid: Vec<f64>,
    pub columns: Vec<Column>,
    /// Free-form `(key, value)` pairs describing how the data were produced.
    pub provenance: Vec<(String, String)>,
}

impl SweepResult {
    pub fn new(axis: &str, grid: Vec<f64>) -> Self {
        SweepResult { axis: axis.into(), grid, columns: Vec::new(), provenance: Vec::new() }
    }

    /// Appends a column; panics if its length differs from the grid.
    pub fn push_column(&mut self, name: impl Into<String>, values: Vec<f64>) {
        assert_eq!(values.len(), self.grid.len(), "column length must match the grid");
        self.columns.push(Column { name: name.into(), values });
    }

    pub fn note(&mut self, key: &str, value: impl ToString) {
        self.provenance.push((key.into(), value.to_string()));
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns.iter().find(|c| c.name == name).map(|c| c.values.as_slice())
    }
}

/// `start, start + step, ..., stop` built from integer multiples of `step`.
pub fn linear_grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let n = libm::round((stop - start) / step) as usize;
    (0..=n).map(|i| start + i as f64 * step).collect()
}

/// Knobs of the figure datasets. Defaults are the published settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigureParams {
    /// Step-drive strength in units of gamma.
    pub zeta_over_gamma: f64,
    /// Werner weight of the fidelity-vs-time curves.
    pub r: f64,
    /// Tilt of the dephasing axis, radians.
    pub theta: f64,
    /// RK4 step; `None` uses the model default.
    pub dt: Option<f64>,
}

impl Default for FigureParams {
    fn default() -> Self {
        FigureParams { zeta_over_gamma: 41.25, r: 0.99, theta: 17f64.to_radians(), dt: None }
    }
}

/// Default Werner weights for the fidelity table.
pub const TABLE1_R: [f64; 5] = [0.2, 0.4, 0.6, 0.8, 0.99];

/// Werner families of the fidelity table columns `F1..F4`.
pub const TABLE1_FAMILIES: [BellKind; 4] =
    [BellKind::PhiPlus, BellKind::PhiMinus, BellKind::PsiPlus, BellKind::PsiMinus];

/// Families plotted in the fidelity figures.
const FIDELITY_FAMILIES: [BellKind; 3] = [BellKind::PhiPlus, BellKind::PhiMinus, BellKind::PsiPlus];

fn fidelity_to_stationary(family: BellKind, r: f64, theta: f64) -> Result<f64> {
    let rho = werner_state(family, r)?;
    fidelity(&rho, &dephase_projection(&rho, theta))
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::ParameterOutOfRange { name: "grid", value: f64::NAN });
    }
    if let Some(&x) = grid.iter().find(|x| !(**x >= 0.0)) {
        return Err(Error::ParameterOutOfRange { name: "grid", value: x });
    }
    if let Some(w) = grid.windows(2).find(|w| !(w[1] > w[0])) {
        return Err(Error::ParameterOutOfRange { name: "grid", value: w[1] });
    }
    Ok(())
}

/// Fidelity of each Werner family with its stationary state under dephasing
/// along `theta`, one row per `r`.
pub fn fidelity_table1<E: Executor>(r_values: &[f64], theta: f64, exec: &E) -> Result<SweepResult> {
    for &r in r_values {
        crate::states::check_unit_interval("r", r)?;
    }
    let rows = try_map(exec, r_values.len(), |i| {
        let mut row = [0.0; 4];
        for (slot, family) in row.iter_mut().zip(TABLE1_FAMILIES) {
            *slot = fidelity_to_stationary(family, r_values[i], theta)?;
        }
        Ok(row)
    })?;
    let mut out = SweepResult::new("r", r_values.to_vec());
    for (k, family) in TABLE1_FAMILIES.iter().enumerate() {
        out.push_column(format!("F{}_{}", k + 1, family), rows.iter().map(|row| row[k]).collect());
    }
    out.note("table", 1);
    out.note("theta_deg", theta.to_degrees());
    out.note("reference", "dephase_projection");
    Ok(out)
}

/// Stationary concurrence and CHSH value of `|Phi+>` under a step drive of
/// strength `zeta_over_gamma` switched off at each `gamma T` of the grid.
///
/// The driven segment is shared by all grid points, so one trajectory is
/// integrated and projected at every grid time.
pub fn stationary_sweep_fig4(zeta_over_gamma: f64, gamma_t_grid: &[f64], dt: Option<f64>) -> Result<SweepResult> {
    check_grid(gamma_t_grid)?;
    let last = *gamma_t_grid.last().unwrap_or(&0.0);
    let model = ModelSpec::step_drive(1.0, zeta_over_gamma, last)?;
    let dt = dt.unwrap_or_else(|| model.default_dt());
    let mut times = Vec::with_capacity(gamma_t_grid.len() + 1);
    if gamma_t_grid[0] > 0.0 {
        times.push(0.0);
    }
    times.extend_from_slice(gamma_t_grid);
    let tr = evolve_sampled(&model, &bell_state(BellKind::PhiPlus), &times, dt)?;
    let skip = times.len() - gamma_t_grid.len();

    let mut cs = Vec::with_capacity(gamma_t_grid.len());
    let mut bs = Vec::with_capacity(gamma_t_grid.len());
    for driven in &tr.states[skip..] {
        let s = dephase_projection(driven, 0.0);
        cs.push(concurrence(&s)?);
        bs.push(bell_max(&s)?);
    }
    let mut out = SweepResult::new("gammaT", gamma_t_grid.to_vec());
    out.push_column("C_s", cs);
    out.push_column("B_s", bs);
    out.note("model", "step-drive");
    out.note("initial", "bell:phi+");
    out.note("zeta_over_gamma", zeta_over_gamma);
    out.note("dt", dt);
    out.note("max_trace_drift", tr.drift.max_trace_defect);
    Ok(out)
}

fn concurrence_curve(model: &ModelSpec, rho0: &DensityMatrix, grid: &[f64], dt: Option<f64>) -> Result<Vec<f64>> {
    let tr = evolve_sampled(model, rho0, grid, dt.unwrap_or_else(|| model.default_dt()))?;
    tr.states.iter().map(concurrence).collect()
}

fn crossing_or_nan(c: Crossing) -> f64 {
    c.time().unwrap_or(f64::NAN)
}

/// The dataset behind figure `id` (1 through 6).
pub fn figure_sweeps<E: Executor>(id: u32, params: &FigureParams, exec: &E) -> Result<SweepResult> {
    let dt = params.dt;
    let mut out = match id {
        1 => {
            let grid = linear_grid(0.34, 0.99, 0.01);
            let tc = grid.iter().map(|&r| t_c_analytic(r, 1.0).map(crossing_or_nan)).collect::<Result<_>>()?;
            // The CHSH threshold exists only above r = 1/sqrt 2; its grid starts at 0.71.
            let tb = grid
                .iter()
                .map(|&r| if r < 0.705 { Ok(f64::NAN) } else { t_c_bell_analytic(r, 1.0).map(crossing_or_nan) })
                .collect::<Result<_>>()?;
            let mut s = SweepResult::new("r", grid);
            s.push_column("gamma_t_c", tc);
            s.push_column("gamma_t_c_bell", tb);
            s.note("method", "analytic");
            s
        }
        2 => {
            let grid = linear_grid(0.0, 5.0, 0.01);
            let omegas = [1.0, 2.0, 3.0];
            let kinds = [BellKind::PhiMinus, BellKind::PhiPlus, BellKind::PsiPlus];
            let curves = try_map(exec, omegas.len() * kinds.len(), |i| {
                let model = ModelSpec::symmetric_drive(1.0, omegas[i / kinds.len()])?;
                concurrence_curve(&model, &bell_state(kinds[i % kinds.len()]), &grid, dt)
            })?;
            let mut s = SweepResult::new("gamma_t", grid);
            for (i, c) in curves.into_iter().enumerate() {
                s.push_column(format!("C_{}_omega{}", kinds[i % kinds.len()], omegas[i / kinds.len()]), c);
            }
            s.note("model", "sym-drive");
            s
        }
        3 => {
            let grid = linear_grid(0.0, 5.0, 0.01);
            let kinds = [BellKind::PhiPlus, BellKind::PhiMinus, BellKind::PsiPlus, BellKind::PsiMinus];
            let mut curves = try_map(exec, kinds.len() + 1, |i| {
                if i < kinds.len() {
                    let model = ModelSpec::asymmetric_drive(1.0, 1.0, 0.0)?;
                    concurrence_curve(&model, &bell_state(kinds[i]), &grid, dt)
                } else {
                    let model = ModelSpec::pure_dephasing(1.0)?;
                    concurrence_curve(&model, &bell_state(BellKind::PhiPlus), &grid, dt)
                }
            })?;
            let reference = curves.pop().unwrap_or_default();
            let mut s = SweepResult::new("gamma_t", grid);
            for (k, c) in kinds.iter().zip(curves) {
                s.push_column(format!("C_{k}"), c);
            }
            s.push_column("C_phi_pure_dephasing", reference);
            s.note("model", "asym-drive omega1=1 omega2=0");
            s
        }
        4 => stationary_sweep_fig4(params.zeta_over_gamma, &linear_grid(0.0, 3.0, 0.005), dt)?,
        5 => {
            let grid = linear_grid(0.0, 1.0, 0.01);
            let rows = try_map(exec, grid.len(), |i| {
                FIDELITY_FAMILIES
                    .map(|k| fidelity_to_stationary(k, grid[i], params.theta))
                    .into_iter()
                    .collect::<Result<Vec<_>>>()
            })?;
            let mut s = SweepResult::new("r", grid);
            for (k, family) in FIDELITY_FAMILIES.iter().enumerate() {
                s.push_column(format!("F_{family}"), rows.iter().map(|row| row[k]).collect());
            }
            s.note("theta_deg", params.theta.to_degrees());
            s
        }
        6 => {
            let grid = linear_grid(0.0, 6.0, 0.01);
            let curves = try_map(exec, FIDELITY_FAMILIES.len(), |k| {
                let rho = werner_state(FIDELITY_FAMILIES[k], params.r)?;
                grid.iter()
                    .map(|&t| fidelity(&rho, &analytic_dephase(&rho, 1.0, t, params.theta)?))
                    .collect::<Result<Vec<_>>>()
            })?;
            let mut s = SweepResult::new("gamma_t", grid);
            for (family, c) in FIDELITY_FAMILIES.iter().zip(curves) {
                s.push_column(format!("F_{family}"), c);
            }
            s.note("r", params.r);
            s.note("theta_deg", params.theta.to_degrees());
            s.note("method", "analytic propagator");
            s
        }
        other => return Err(Error::UnknownFigure(other)),
    };
    out.provenance.insert(0, ("figure".into(), id.to_string()));
    out.note("gamma", 1.0);
    if matches!(id, 2 | 3) {
        match dt {
            Some(dt) => out.note("dt", dt),
            None => out.note("dt", "1e-3/max(1, rates)"),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints() {
        let g = linear_grid(0.34, 0.99, 0.01);
        assert_eq!(g.len(), 66);
        assert!((g[65] - 0.99).abs() < 1e-12);
        assert_eq!(linear_grid(0.0, 3.0, 0.005).len(), 601);
    }

    #[test]
    fn unknown_figure() {
        assert_eq!(figure_sweeps(7, &FigureParams::default(), &Sequential), Err(Error::UnknownFigure(7)));
        assert_eq!(figure_sweeps(0, &FigureParams::default(), &Sequential), Err(Error::UnknownFigure(0)));
    }

    #[test]
    fn figure1_row_at_r_08() {
        let s = figure_sweeps(1, &FigureParams::default(), &Sequential).unwrap();
        let i = s.grid.iter().position(|&r| (r - 0.8).abs() < 1e-9).unwrap();
        assert!((s.column("gamma_t_c").unwrap()[i] - 1.0397).abs() < 1e-4);
        assert!((s.column("gamma_t_c_bell").unwrap()[i] - 0.143841).abs() < 1e-6);
        assert!(s.column("gamma_t_c_bell").unwrap()[0].is_nan());
    }

    #[test]
    fn table_rejects_bad_r() {
        assert!(fidelity_table1(&[0.5, 1.5], 0.3, &Sequential).is_err());
    }

    #[test]
    fn table_at_zero_r_is_all_ones() {
        let t = fidelity_table1(&[0.0], 17f64.to_radians(), &Sequential).unwrap();
        for c in &t.columns {
            assert!((c.values[0] - 1.0).abs() < 1e-12, "{}", c.name);
        }
    }

    #[test]
    fn fig4_grid_validation() {
        assert!(stationary_sweep_fig4(41.25, &[], None).is_err());
        assert!(stationary_sweep_fig4(41.25, &[0.2, 0.1], None).is_err());
    }
}
