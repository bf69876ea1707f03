//! Time stepping of one benchmark run and its report.

use std::time::Instant;

use serde::Serialize;

use crate::basis::gauss_rule;
use crate::dg::{Discretization, StateField};
use crate::error::{Error, Result};
use crate::law::MAX_VARS;
use crate::mesh::build_structured_mesh;
use crate::problems::{exact_solution, initial_condition, BenchmarkProblem};
use crate::stabilization::{Stabilization, ViscosityReport};
use crate::time::{ssp_step, stable_timestep, TimeStepConfig};

use super::config::{ResolvedRun, RunConfig};
use super::output;

/// Where and why a run stopped early.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub step: usize,
    pub time: f64,
    pub cell: Option<usize>,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub problem: String,
    pub scheme: String,
    pub p: usize,
    pub mesh: Vec<usize>,
    pub t_final: f64,
    pub time: f64,
    pub steps: usize,
    pub wall_time: f64,
    /// [min, max] of each component over all nodal values.
    pub ranges: Vec<[f64; 2]>,
    pub l1_error: Option<Vec<f64>>,
    /// Σ_steps Σ_e γ_e ν_e at the first stage of every step.
    pub total_dissipation: f64,
    pub failure: Option<Failure>,
    #[serde(skip)]
    pub field: StateField,
}

impl RunReport {
    pub fn succeeded(&self) -> bool {
        self.failure.is_none()
    }
}

/// A discretized benchmark together with its current state.
pub struct Simulation {
    pub problem: BenchmarkProblem,
    pub disc: Discretization,
    pub field: StateField,
    pub stabilization: Stabilization,
    pub timestep: TimeStepConfig,
    pub time: f64,
    pub steps: usize,
    pub total_dissipation: f64,
}

impl Simulation {
    pub fn new(run: ResolvedRun) -> Result<Self> {
        let problem = run.problem;
        let mesh = build_structured_mesh(&problem.bounds, &run.counts, problem.boundary)?;
        let disc = Discretization::new(mesh, run.p, problem.law, run.flux, problem.ghosts.clone())?;
        let field = initial_condition(&problem, &disc.mesh, &disc.elem, run.initial_data);
        Ok(Simulation {
            problem,
            disc,
            field,
            stabilization: run.stabilization,
            timestep: run.timestep,
            time: 0.0,
            steps: 0,
            total_dissipation: 0.0,
        })
    }

    pub fn from_config(config: &RunConfig) -> Result<Self> {
        Self::new(config.resolve()?)
    }

    pub fn remaining(&self) -> f64 {
        (self.timestep.t_final - self.time).max(0.0)
    }

    pub fn next_dt(&self) -> Result<f64> {
        let remaining = self.remaining();
        match self.timestep.fixed_dt {
            Some(dt) => Ok(dt.min(remaining)),
            None => stable_timestep(&self.disc, &self.field, self.timestep.cfl, remaining),
        }
    }

    /// Advances one step; returns the step size taken.
    pub fn step(&mut self) -> Result<f64> {
        let dt = self.next_dt()?;
        let (disc, stab) = (&self.disc, &self.stabilization);
        let template = &self.field;
        let mut first: Option<ViscosityReport> = None;
        let rhs = |u: &[f64], t: f64, out: &mut [f64]| -> Result<()> {
            let f = StateField::from_coeffs(template.n_cells, template.n_vars, template.n_basis, u.to_vec())?;
            let report = disc.time_derivative(&f, stab, t, out)?;
            if first.is_none() {
                first = report;
            }
            Ok(())
        };
        let next = ssp_step(self.timestep.scheme, rhs, &self.field.coeffs, self.time, dt)?;
        if let Some(r) = first {
            self.total_dissipation += r.total_dissipation();
        }
        self.field.coeffs = next;
        check_nodal_states(&self.disc, &self.field)?;
        self.time = if self.remaining() - dt <= 1e-14 * self.timestep.t_final.max(1.0) {
            self.timestep.t_final
        } else {
            self.time + dt
        };
        self.steps += 1;
        Ok(dt)
    }

    /// Steps to the final time. On a numerical failure the state of the last
    /// successful step is kept and the failure returned.
    pub fn run(&mut self) -> std::result::Result<(), Failure> {
        while self.time < self.timestep.t_final {
            if let Err(err) = self.step() {
                let cell = match &err {
                    Error::InvalidState { cell, .. } => *cell,
                    _ => None,
                };
                return Err(Failure {
                    step: self.steps + 1,
                    time: self.time,
                    cell,
                    message: err.to_string(),
                });
            }
        }
        Ok(())
    }

    pub fn ranges(&self) -> Vec<[f64; 2]> {
        nodal_ranges(&self.field)
    }

    pub fn l1_error(&self) -> Result<Vec<f64>> {
        l1_error(&self.disc, &self.field, &self.problem, self.time)
    }
}

/// Rejects non-finite values and inadmissible nodal states.
pub fn check_nodal_states(disc: &Discretization, field: &StateField) -> Result<()> {
    let (m, nb) = (field.n_vars, field.n_basis);
    for e in 0..field.n_cells {
        let block = field.block(e);
        for j in 0..nb {
            let mut u = [0.0; MAX_VARS];
            for c in 0..m {
                u[c] = block[c * nb + j];
            }
            if u.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidState {
                    cell: Some(e),
                    reason: "non-finite value".into(),
                });
            }
            disc.law.validate(&u).map_err(|err| err.in_cell(e))?;
        }
    }
    Ok(())
}

pub fn nodal_ranges(field: &StateField) -> Vec<[f64; 2]> {
    let mut out = vec![[f64::INFINITY, f64::NEG_INFINITY]; field.n_vars];
    for e in 0..field.n_cells {
        for (c, r) in out.iter_mut().enumerate() {
            for v in field.component(e, c) {
                r[0] = r[0].min(*v);
                r[1] = r[1].max(*v);
            }
        }
    }
    out
}

/// Σ_e ∫_{K_e} |u_h - u_exact| per component, with (p+3) Gauss points per axis.
pub fn l1_error(disc: &Discretization, field: &StateField, problem: &BenchmarkProblem, t: f64) -> Result<Vec<f64>> {
    let elem = &disc.elem;
    let rule = gauss_rule(disc.mesh.dim, elem.degree + 3);
    let tables: Vec<Vec<f64>> = rule.points.iter().map(|x| elem.eval(x).0).collect();
    let mut err = vec![0.0; field.n_vars];
    for e in 0..field.n_cells {
        let vol = disc.mesh.cells[e].volume;
        for (q, x) in rule.points.iter().enumerate() {
            let exact = exact_solution(problem, &disc.mesh.map_to_physical(e, x), t)?;
            for (c, ec) in err.iter_mut().enumerate() {
                let uh: f64 = tables[q].iter().zip(field.component(e, c)).map(|(a, b)| a * b).sum();
                *ec += rule.weights[q] * vol * (uh - exact[c]).abs();
            }
        }
    }
    Ok(err)
}

/// Runs a configuration to its final time, writing outputs if `out` is set.
///
/// Configuration problems are errors; numerical breakdown is reported in
/// [`RunReport::failure`].
pub fn run_simulation(config: &RunConfig) -> Result<RunReport> {
    let resolved = config.resolve()?;
    let counts = resolved.counts.clone();
    let mut sim = Simulation::new(resolved)?;
    let start = Instant::now();
    let failure = sim.run().err();
    let wall_time = start.elapsed().as_secs_f64();
    let l1 = if failure.is_none() && sim.problem.exact.is_some() {
        Some(sim.l1_error()?)
    } else {
        None
    };
    let report = RunReport {
        problem: sim.problem.name.clone(),
        scheme: config.scheme.label().to_string(),
        p: config.p,
        mesh: counts,
        t_final: sim.timestep.t_final,
        time: sim.time,
        steps: sim.steps,
        wall_time,
        ranges: sim.ranges(),
        l1_error: l1,
        total_dissipation: sim.total_dissipation,
        failure,
        field: sim.field.clone(),
    };
    if let Some(dir) = &config.out {
        output::write_run(dir, &sim, &report, config.dump_sensor)?;
    }
    Ok(report)
}
