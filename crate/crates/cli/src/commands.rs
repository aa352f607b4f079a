//! The subcommands, each rendering its full output before anything is written.

use dephaselab_core::analysis::{
    analytic_thresholds, fidelity_table1, figure_sweeps, numeric_thresholds, Crossing, Executor, FigureParams,
    ThresholdResult, TABLE1_R,
};
use dephaselab_core::dynamics::{evolve_sampled, Variant};
use dephaselab_core::measures::MeasureReport;
use dephaselab_core::BellKind;
use serde_json::json;

use crate::config::Settings;
use crate::error::{CliError, Result};
use crate::format::{state_columns, sweep_csv, Csv};
use crate::input::{initial_state, model, theta};

fn positive(s: &Settings, key: &str) -> Result<Option<f64>> {
    match s.get::<f64>(key)? {
        Some(x) if !(x > 0.0 && x.is_finite()) => Err(CliError::invalid(format!("{key} must be positive, got {x}"))),
        v => Ok(v),
    }
}

pub fn figure<E: Executor>(id: u32, s: &Settings, exec: &E) -> Result<String> {
    if !(1..=6).contains(&id) {
        return Err(CliError::invalid(format!("unknown figure {id} (expected 1 to 6)")));
    }
    let d = FigureParams::default();
    let params = FigureParams {
        zeta_over_gamma: s.get_or("zeta-over-gamma", d.zeta_over_gamma)?,
        r: s.get_or("r", d.r)?,
        theta: theta(s, d.theta.to_degrees())?,
        dt: positive(s, "dt")?,
    };
    Ok(sweep_csv(&figure_sweeps(id, &params, exec)?))
}

pub fn table<E: Executor>(id: u32, s: &Settings, exec: &E) -> Result<String> {
    if id != 1 {
        return Err(CliError::invalid(format!("unknown table {id} (only table 1 exists)")));
    }
    let r = s.list("r")?.unwrap_or_else(|| TABLE1_R.to_vec());
    Ok(sweep_csv(&fidelity_table1(&r, theta(s, 17.0)?, exec)?))
}

/// Sample times `0, h, 2h, ...` ending exactly at `t_end`.
fn sample_times(t_end: f64, h: f64) -> Vec<f64> {
    let mut times: Vec<f64> = (0..).map(|k| k as f64 * h).take_while(|&t| t < t_end - 1e-9 * h).collect();
    if times.is_empty() || t_end > 0.0 {
        times.push(t_end);
    }
    times
}

pub fn evolve(s: &Settings) -> Result<String> {
    let model = model(s)?;
    let rho0 = initial_state(s)?.density()?;
    let t_end: f64 = s.get_or("t-end", 1.0)?;
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(CliError::invalid(format!("t-end must be non-negative, got {t_end}")));
    }
    let dt = positive(s, "dt")?.unwrap_or_else(|| model.default_dt());
    let stride: usize = s.get_or("stride", 1)?;
    if stride == 0 {
        return Err(CliError::invalid("stride must be at least 1"));
    }
    let full = s.flag("full-state")?;
    let with_fidelity = s.flag("fidelity")?;

    let tr = evolve_sampled(&model, &rho0, &sample_times(t_end, dt * stride as f64), dt)?;

    let mut csv = Csv::default();
    let mut names: Vec<String> = ["t", "C", "B", "M", "purity"].map(String::from).to_vec();
    if with_fidelity {
        names.push("F".into());
    }
    if full {
        names.extend(state_columns());
    }
    csv.header(names);
    for (t, rho) in tr.iter() {
        let m = MeasureReport::of(rho, with_fidelity.then_some(&rho0))?;
        let mut row = vec![t, m.concurrence, m.bell_max, m.mixedness, m.purity];
        row.extend(m.fidelity);
        if full {
            row.extend(rho.matrix().to_interleaved());
        }
        csv.row(row);
    }
    Ok(csv.finish())
}

fn crossing_json(c: Crossing) -> serde_json::Value {
    c.time().map_or(serde_json::Value::Null, |t| json!(t))
}

fn note(r: &ThresholdResult) -> Option<String> {
    match (r.t_c.note(), r.t_c_bell.note()) {
        (None, None) => None,
        (Some(a), Some(b)) if a == b => Some(a.into()),
        (a, b) => {
            let parts: Vec<String> =
                [("t_c", a), ("t_c_bell", b)].into_iter().filter_map(|(k, n)| n.map(|n| format!("{k}: {n}"))).collect();
            Some(parts.join("; "))
        }
    }
}

/// Closed forms for dephasing `Phi+-` Werner states, integration and bisection otherwise.
pub fn threshold(s: &Settings) -> Result<String> {
    let model = model(s)?;
    let state = initial_state(s)?;
    let rho0 = state.density()?;
    let t_max = positive(s, "t-max")?.unwrap_or(10.0 / model.gamma);
    let result = match state.werner_params() {
        Some((BellKind::PhiPlus | BellKind::PhiMinus, r)) if model.variant == Variant::PureDephasing => {
            analytic_thresholds(r, model.gamma)?
        }
        _ => numeric_thresholds(&model, &rho0, t_max)?,
    };
    let out = json!({
        "t_c": crossing_json(result.t_c),
        "t_c_bell": crossing_json(result.t_c_bell),
        "method": result.method.label(),
        "note": note(&result),
    });
    Ok(format!("{out}\n"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_grid() {
        assert_eq!(sample_times(0.0, 0.1), vec![0.0]);
        let g = sample_times(1.0, 0.25);
        assert_eq!(g, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let g = sample_times(1.0, 0.3);
        assert_eq!(g.len(), 5);
        assert_eq!(*g.last().unwrap(), 1.0);
    }
}
