//! CSV and JSON serialization of simulation artifacts.
//!
//! Numbers are written with 17 significant digits (`{:.16e}`), enough for
//! exact f64 round-trips, so identical runs produce byte-identical files.
//!
//! Snapshot CSV columns (one row per node):
//! `x, eps_11, eps_22, eps_33, eps_23, eps_13, eps_12, v_1, v_2, v_3,
//! omega_23, omega_13, omega_12, disloc_velocity_norm`
//!
//! Record CSV columns (one row per recorded time):
//! `t, energy, diss_rate, cum_diss, max_residual`
//!
//! Mode-table CSV columns (one row per mode):
//! `p, frequency, residual, label`

use serde_json::{json, Value};

use crate::dynamics::SimRecord;
use crate::grid::{constraint_residual_field, FieldState, Grid1D};
use crate::spectral::ModeSet;
use crate::tensor::Material;

/// Full round-trip precision formatting used in every CSV cell.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Per-node snapshot table of a state.
pub fn snapshot_csv(grid: &Grid1D, state: &FieldState, material: &Material) -> String {
    let residual = constraint_residual_field(state, material);
    let mut out = String::from(
        "x,eps_11,eps_22,eps_33,eps_23,eps_13,eps_12,v_1,v_2,v_3,omega_23,omega_13,omega_12,disloc_velocity_norm\n",
    );
    for j in 0..grid.n_nodes {
        let e = &state.eps[j].0;
        let v = &state.v[j];
        let w = &state.omega[j].0;
        let cells = [
            grid.x(j),
            e[0],
            e[1],
            e[2],
            e[3],
            e[4],
            e[5],
            v[0],
            v[1],
            v[2],
            w[1][2],
            w[0][2],
            w[0][1],
            residual[j],
        ];
        let row: Vec<String> = cells.iter().map(|c| fmt_f64(*c)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Snapshot as a JSON document. Arrays are indexed by node; `eps` rows use
/// the packed order (11, 22, 33, 23, 13, 12) and `omega` rows hold the
/// independent components (23, 13, 12).
pub fn snapshot_json(grid: &Grid1D, state: &FieldState, material: &Material) -> Value {
    let residual = constraint_residual_field(state, material);
    let x: Vec<f64> = (0..grid.n_nodes).map(|j| grid.x(j)).collect();
    let eps: Vec<Vec<f64>> = state.eps.iter().map(|e| e.0.to_vec()).collect();
    let v: Vec<Vec<f64>> = state.v.iter().map(|v| v.to_vec()).collect();
    let omega: Vec<Vec<f64>> = state
        .omega
        .iter()
        .map(|w| vec![w.0[1][2], w.0[0][2], w.0[0][1]])
        .collect();
    json!({
        "t": state.t,
        "x": x,
        "eps": eps,
        "v": v,
        "omega": omega,
        "disloc_velocity_norm": residual,
    })
}

/// Monitor time series as CSV.
pub fn record_csv(record: &SimRecord) -> String {
    let mut out = String::from("t,energy,diss_rate,cum_diss,max_residual\n");
    for k in 0..record.len() {
        let cells = [
            record.times[k],
            record.energy[k],
            record.diss_rate[k],
            record.cum_diss[k],
            record.max_residual[k],
        ];
        let row: Vec<String> = cells.iter().map(|c| fmt_f64(*c)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Monitor time series plus summary figures as JSON.
pub fn record_json(record: &SimRecord) -> Value {
    let n = record.len();
    json!({
        "times": record.times,
        "energy": record.energy,
        "diss_rate": record.diss_rate,
        "cum_diss": record.cum_diss,
        "max_residual": record.max_residual,
        "summary": {
            "samples": n,
            "energy_initial": record.energy.first().copied().unwrap_or(0.0),
            "energy_final": record.energy.last().copied().unwrap_or(0.0),
            "cumulative_dissipation": record.cum_diss.last().copied().unwrap_or(0.0),
            "max_constraint_residual": record
                .max_residual
                .iter()
                .fold(0.0f64, |a, b| a.max(*b)),
        },
    })
}

/// Mode table as CSV.
pub fn modes_csv(modes: &ModeSet) -> String {
    let mut out = String::from("p,frequency,residual,label\n");
    for p in 0..modes.len() {
        let residual = modes.residuals.get(p).copied().unwrap_or(f64::NAN);
        let label = modes
            .labels
            .get(p)
            .map(|l| l.to_string())
            .unwrap_or_else(|| "unclassified".to_string());
        out.push_str(&format!(
            "{},{},{},{}\n",
            p,
            fmt_f64(modes.frequencies[p]),
            fmt_f64(residual),
            label
        ));
    }
    out
}

/// Mode table as JSON, with the repeated-eigenvalue flag surfaced.
pub fn modes_json(modes: &ModeSet) -> Value {
    let rows: Vec<Value> = (0..modes.len())
        .map(|p| {
            json!({
                "p": p,
                "frequency": modes.frequencies[p],
                "residual": modes.residuals.get(p).copied(),
                "label": modes.labels.get(p).map(|l| l.to_string()),
            })
        })
        .collect();
    json!({
        "repeated_eigenvalue": modes.repeated_eigenvalue,
        "modes": rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::FieldState;
    use crate::tensor::Material;

    #[test]
    fn formatting_round_trips_f64() {
        for x in [0.0, 1.0, -3.25, 1.0 / 3.0, 2.0f64.powi(-40), 1e300, -7e-200] {
            let s = fmt_f64(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, x, "{s}");
        }
    }

    #[test]
    fn snapshot_tables_have_expected_shape() {
        let grid = Grid1D::new(0.0, 1.0, 5).unwrap();
        let material = Material::isotropic(1.0, 0.0, 0.5).unwrap();
        let state = FieldState::zero(grid.n_nodes);
        let csv = snapshot_csv(&grid, &state, &material);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 6);
        assert_eq!(lines[0].split(',').count(), 14);
        let doc = snapshot_json(&grid, &state, &material);
        assert_eq!(doc["x"].as_array().unwrap().len(), 5);
        assert_eq!(doc["eps"][0].as_array().unwrap().len(), 6);
    }

    #[test]
    fn identical_states_serialize_identically() {
        let grid = Grid1D::new(0.0, 2.0, 7).unwrap();
        let material = Material::isotropic(1.0, 2.0, 3.0).unwrap();
        let mut state = FieldState::zero(grid.n_nodes);
        state.eps[3].0[4] = 0.1234567890123456;
        let a = snapshot_csv(&grid, &state, &material);
        let b = snapshot_csv(&grid, &state, &material);
        assert_eq!(a, b);
    }
}
