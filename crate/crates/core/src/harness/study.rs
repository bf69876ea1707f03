//! Grid convergence studies and the sensor comparison on Sod's problem.

use std::fmt::Write as _;
use std::fs;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::time::SspScheme;

use super::config::{RunConfig, Scheme, SensorKind};
use super::output;
use super::run::{run_simulation, RunReport};

/// log(E_2/E_1) / log(h_2/h_1) for consecutive pairs of (h, E).
pub fn compute_eoc(data: &[(f64, f64)]) -> Result<Vec<f64>> {
    if data.len() < 2 {
        return Err(Error::Config("EOC needs at least two (h, error) pairs".into()));
    }
    if data.iter().any(|(h, e)| !(*h > 0.0) || !(*e > 0.0)) {
        return Err(Error::Config("EOC needs positive mesh sizes and errors".into()));
    }
    if data.windows(2).any(|w| w[1].0 >= w[0].0) {
        return Err(Error::Config("mesh sizes must be strictly decreasing".into()));
    }
    Ok(data
        .windows(2)
        .map(|w| (w[1].1 / w[0].1).ln() / (w[1].0 / w[0].0).ln())
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EocRow {
    pub scheme: String,
    pub p: usize,
    pub cells: usize,
    pub h: f64,
    pub error: f64,
    pub eoc: Option<f64>,
}

/// Runs `base` on meshes with `meshes[i]` cells per axis for every scheme and
/// tabulates the L1 error of the first component. Unless the config names an
/// integrator, the SSP scheme of order p + 1 is used.
pub fn convergence_study(base: &RunConfig, meshes: &[usize], schemes: &[Scheme]) -> Result<Vec<EocRow>> {
    let mut rows = Vec::new();
    for &scheme in schemes {
        let mut data = Vec::new();
        for &n in meshes {
            let mut c = base.clone();
            c.scheme = scheme;
            c.out = None;
            let dim = c.resolve()?.problem.dim();
            c.mesh = Some(vec![n; dim]);
            if c.integrator.is_none() {
                c.integrator = Some(SspScheme::of_order((c.p + 1).clamp(2, 4))?);
            }
            let report = run_simulation(&c)?;
            if let Some(f) = report.failure {
                return Err(Error::InvalidState {
                    cell: f.cell,
                    reason: format!("{} run on {n} cells failed: {}", scheme.label(), f.message),
                });
            }
            let err = report
                .l1_error
                .ok_or_else(|| Error::ExactUnavailable(base.problem.clone()))?[0];
            let resolved = c.resolve()?;
            let (lo, hi) = resolved.problem.bounds[0];
            data.push((n, (hi - lo) / n as f64, err));
        }
        let eocs = if data.len() >= 2 {
            compute_eoc(&data.iter().map(|d| (d.1, d.2)).collect::<Vec<_>>())?
        } else {
            vec![]
        };
        for (i, (n, h, err)) in data.into_iter().enumerate() {
            rows.push(EocRow {
                scheme: scheme.label().to_string(),
                p: base.p,
                cells: n,
                h,
                error: err,
                eoc: if i == 0 { None } else { eocs.get(i - 1).copied() },
            });
        }
    }
    if let Some(dir) = &base.out {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("eoc.csv"), output::eoc_csv(&rows))?;
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SensorChoice {
    pub kind: SensorKind,
    pub b: f64,
    pub theta: f64,
}

impl SensorChoice {
    pub fn label(&self) -> String {
        match self.kind {
            SensorKind::Zhao => format!("gamma_zhao_theta{}", self.theta),
            SensorKind::Relative if self.b > 0.0 => format!("gamma_b{}", self.b),
            SensorKind::Relative => "gamma".to_string(),
        }
    }

    /// γ, γ^{b=0.1}, γ^{b=0.2} and γ^Z with θ = 1.
    pub fn standard_set() -> Vec<SensorChoice> {
        vec![
            SensorChoice { kind: SensorKind::Zhao, b: 0.0, theta: 1.0 },
            SensorChoice { kind: SensorKind::Relative, b: 0.0, theta: 1.0 },
            SensorChoice { kind: SensorKind::Relative, b: 0.1, theta: 1.0 },
            SensorChoice { kind: SensorKind::Relative, b: 0.2, theta: 1.0 },
        ]
    }
}

#[derive(Debug, Clone)]
pub struct SensorRun {
    pub label: String,
    pub report: RunReport,
    /// (x, first component) at every Lagrange node.
    pub profile: Vec<(f64, f64)>,
}

/// One WENO run per sensor; writes `sensors.csv` with the overlaid profiles.
pub fn compare_sensors(base: &RunConfig, sensors: &[SensorChoice]) -> Result<Vec<SensorRun>> {
    let mut runs = Vec::new();
    for s in sensors {
        let mut c = base.clone();
        c.scheme = Scheme::Weno;
        c.sensor = s.kind;
        c.b = s.b;
        c.theta = s.theta;
        c.out = base.out.as_ref().map(|d| d.join(s.label()));
        let resolved = c.resolve()?;
        if resolved.problem.dim() != 1 {
            return Err(Error::Config("sensor comparison is defined for 1D problems".into()));
        }
        let report = run_simulation(&c)?;
        let mesh = crate::mesh::build_structured_mesh(&resolved.problem.bounds, &resolved.counts, resolved.problem.boundary)?;
        let elem = crate::basis::ReferenceElement::new(1, c.p);
        let mut profile = Vec::new();
        for e in 0..mesh.n_cells() {
            for (j, xi) in elem.nodes.iter().enumerate() {
                profile.push((mesh.map_to_physical(e, xi)[0], report.field.component(e, 0)[j]));
            }
        }
        runs.push(SensorRun { label: s.label(), report, profile });
    }
    if let Some(dir) = &base.out {
        fs::create_dir_all(dir)?;
        let mut s = String::from("x");
        for r in &runs {
            let _ = write!(s, ",{}", r.label);
        }
        s.push('\n');
        if let Some(first) = runs.first() {
            for (i, (x, _)) in first.profile.iter().enumerate() {
                let _ = write!(s, "{x:.12e}");
                for r in &runs {
                    let _ = write!(s, ",{:.12e}", r.profile[i].1);
                }
                s.push('\n');
            }
        }
        fs::write(dir.join("sensors.csv"), s)?;
        let summary: Vec<_> = runs.iter().map(|r| (&r.label, &r.report)).collect();
        output::write_json(&dir.join("sensors.json"), &summary)?;
    }
    Ok(runs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eoc_examples() {
        let e = compute_eoc(&[(0.1, 4e-2), (0.05, 1e-2)]).unwrap();
        assert!((e[0] - 2.0).abs() < 1e-14);
        let e = compute_eoc(&[(1.0 / 16.0, 7.28e-3), (1.0 / 32.0, 1.67e-3)]).unwrap();
        assert!((e[0] - 2.12).abs() < 0.01);
        assert_eq!(compute_eoc(&[(0.2, 3e-3), (0.1, 3e-3)]).unwrap()[0], 0.0);
        assert!(compute_eoc(&[(0.2, 3e-3)]).is_err());
        assert!(compute_eoc(&[(0.2, 3e-3), (0.1, 0.0)]).is_err());
        assert!(compute_eoc(&[(0.1, 3e-3), (0.2, 1e-3)]).is_err());
    }

    #[test]
    fn small_study() {
        let mut c = RunConfig::new("advect_smooth");
        c.p = 1;
        let rows = convergence_study(&c, &[16, 32], &[Scheme::Dg, Scheme::Lo]).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows[0].eoc.is_none());
        assert!((rows[1].eoc.unwrap() - 2.0).abs() < 0.3);
        assert!(rows[3].error > rows[1].error);
    }
}
