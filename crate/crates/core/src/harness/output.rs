//! CSV, JSON and legacy VTK writers.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::dg::{Discretization, StateField};
use crate::error::Result;
use crate::law::LawKind;
use crate::sensor::cell_sensor;
use crate::stabilization::{sensed_component, viscosity_parameter, Stabilization};

use super::run::{RunReport, Simulation};
use super::study::EocRow;

pub fn component_names(disc: &Discretization) -> Vec<&'static str> {
    match (disc.law.kind, disc.mesh.dim) {
        (LawKind::Euler { .. }, 1) => vec!["rho", "mx", "E"],
        (LawKind::Euler { .. }, _) => vec!["rho", "mx", "my", "E"],
        _ => vec!["u"],
    }
}

/// One row per Lagrange node: cell id, coordinates, component values.
pub fn solution_csv(disc: &Discretization, field: &StateField) -> String {
    let dim = disc.mesh.dim;
    let mut s = String::from("cell_id,x");
    if dim == 2 {
        s.push_str(",y");
    }
    for name in component_names(disc) {
        s.push(',');
        s.push_str(name);
    }
    s.push('\n');
    let nb = field.n_basis;
    for e in 0..field.n_cells {
        for (j, xi) in disc.elem.nodes.iter().enumerate() {
            let x = disc.mesh.map_to_physical(e, xi);
            let _ = write!(s, "{e},{:.17e}", x[0]);
            if dim == 2 {
                let _ = write!(s, ",{:.17e}", x[1]);
            }
            let block = field.block(e);
            for c in 0..field.n_vars {
                let _ = write!(s, ",{:.17e}", block[c * nb + j]);
            }
            s.push('\n');
        }
    }
    s
}

/// Per-cell sensor dump: γ_e, ν_e and the candidate smoothness values.
pub fn sensor_csv(disc: &Discretization, field: &StateField, stab: &Stabilization) -> Result<String> {
    let comp = sensed_component(&disc.law);
    let mut s = String::from("cell_id,gamma,nu,beta\n");
    for e in 0..field.n_cells {
        let nu = viscosity_parameter(disc, field, e)?;
        let (gamma, beta) = match stab {
            Stabilization::None => (0.0, vec![]),
            Stabilization::LowOrder => (1.0, vec![]),
            Stabilization::Fixed(g) => (*g, vec![]),
            Stabilization::Adaptive(cfg) => {
                let out = cell_sensor(disc, field, comp, e, cfg);
                (out.gamma, out.candidates.beta)
            }
        };
        let beta: Vec<String> = beta.iter().map(|b| format!("{b:.6e}")).collect();
        let _ = writeln!(s, "{e},{gamma:.10e},{nu:.10e},{}", beta.join(";"));
    }
    Ok(s)
}

/// Legacy ASCII VTK unstructured grid of a 2D field. Each cell is split into
/// p x p quads over its own (duplicated) Lagrange nodes.
pub fn solution_vtk(disc: &Discretization, field: &StateField, title: &str) -> String {
    let p = disc.degree().max(1);
    let n1 = disc.degree() + 1;
    let nb = field.n_basis;
    let n_points = field.n_cells * nb;
    let mut s = format!("# vtk DataFile Version 3.0\n{title}\nASCII\nDATASET UNSTRUCTURED_GRID\nPOINTS {n_points} double\n");
    for e in 0..field.n_cells {
        for xi in &disc.elem.nodes {
            let x = disc.mesh.map_to_physical(e, xi);
            let _ = writeln!(s, "{:.12e} {:.12e} 0", x[0], x[1]);
        }
    }
    let sub = if disc.degree() == 0 { 0 } else { p * p };
    let n_cells = field.n_cells * sub;
    let _ = writeln!(s, "CELLS {n_cells} {}", n_cells * 5);
    for e in 0..field.n_cells {
        let base = e * nb;
        for j in 0..disc.degree() {
            for i in 0..disc.degree() {
                let a = base + j * n1 + i;
                let _ = writeln!(s, "4 {} {} {} {}", a, a + 1, a + n1 + 1, a + n1);
            }
        }
    }
    let _ = writeln!(s, "CELL_TYPES {n_cells}");
    for _ in 0..n_cells {
        s.push_str("9\n");
    }
    let _ = writeln!(s, "POINT_DATA {n_points}");
    for (c, name) in component_names(disc).iter().enumerate() {
        let _ = writeln!(s, "SCALARS {name} double 1\nLOOKUP_TABLE default");
        for e in 0..field.n_cells {
            for v in field.component(e, c) {
                let _ = writeln!(s, "{v:.12e}");
            }
        }
    }
    s
}

pub fn eoc_csv(rows: &[EocRow]) -> String {
    let mut s = String::from("scheme,p,E_h,h,error,eoc\n");
    for r in rows {
        let eoc = r.eoc.map(|v| format!("{v:.4}")).unwrap_or_else(|| "--".into());
        let _ = writeln!(s, "{},{},{},{:.10e},{:.6e},{eoc}", r.scheme, r.p, r.cells, r.h, r.error);
    }
    s
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| crate::error::Error::Io(e.to_string()))?;
    fs::write(path, text + "\n")?;
    Ok(())
}

/// solution.csv, metrics.json, optional sensor.csv and (2D) solution.vtk.
pub fn write_run(dir: &Path, sim: &Simulation, report: &RunReport, dump_sensor: bool) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("solution.csv"), solution_csv(&sim.disc, &sim.field))?;
    write_json(&dir.join("metrics.json"), report)?;
    if dump_sensor {
        fs::write(dir.join("sensor.csv"), sensor_csv(&sim.disc, &sim.field, &sim.stabilization)?)?;
    }
    if sim.disc.mesh.dim == 2 {
        let title = format!("{} {} p={} t={}", report.problem, report.scheme, report.p, report.time);
        fs::write(dir.join("solution.vtk"), solution_vtk(&sim.disc, &sim.field, &title))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::RunConfig;

    #[test]
    fn csv_and_vtk_shapes() {
        let mut c = RunConfig::new("kpp");
        c.mesh = Some(vec![3, 2]);
        let sim = Simulation::from_config(&c).unwrap();
        let csv = solution_csv(&sim.disc, &sim.field);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "cell_id,x,y,u");
        assert_eq!(lines.len(), 1 + 6 * 9);
        let vtk = solution_vtk(&sim.disc, &sim.field, "kpp");
        assert!(vtk.contains("POINTS 54 double"));
        assert!(vtk.contains("CELLS 24 120"));
        assert!(vtk.contains("CELL_TYPES 24"));
        assert!(vtk.contains("SCALARS u double 1"));
        let sensor = sensor_csv(&sim.disc, &sim.field, &sim.stabilization).unwrap();
        assert_eq!(sensor.lines().count(), 7);
    }
}
