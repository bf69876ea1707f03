//! Explicit SSP Runge-Kutta schemes in Shu-Osher form and the CFL rule.

use serde::{Deserialize, Serialize};

use crate::dg::{Discretization, StateField};
use crate::error::{Error, Result};
use crate::stabilization::cell_wavespeed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SspScheme {
    #[serde(rename = "ssprk22")]
    Ssprk22,
    #[serde(rename = "ssprk33")]
    Ssprk33,
    #[serde(rename = "ssprk54")]
    Ssprk54,
}

impl SspScheme {
    pub fn of_order(order: usize) -> Result<Self> {
        match order {
            2 => Ok(SspScheme::Ssprk22),
            3 => Ok(SspScheme::Ssprk33),
            4 => Ok(SspScheme::Ssprk54),
            _ => Err(Error::Unsupported(format!("no SSP Runge-Kutta scheme of order {order}"))),
        }
    }

    pub fn order(self) -> usize {
        match self {
            SspScheme::Ssprk22 => 2,
            SspScheme::Ssprk33 => 3,
            SspScheme::Ssprk54 => 4,
        }
    }

    /// Shu-Osher coefficients: stage i >= 1 is
    /// `u_i = Σ_{k<i} (alpha[i][k] u_k + dt beta[i][k] L(u_k))`, with u_0 = u^n
    /// and the last stage equal to u^{n+1}.
    pub fn tableau(self) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
        match self {
            SspScheme::Ssprk22 => (
                vec![vec![], vec![1.0], vec![0.5, 0.5]],
                vec![vec![], vec![1.0], vec![0.0, 0.5]],
            ),
            SspScheme::Ssprk33 => (
                vec![vec![], vec![1.0], vec![0.75, 0.25], vec![1.0 / 3.0, 0.0, 2.0 / 3.0]],
                vec![vec![], vec![1.0], vec![0.0, 0.25], vec![0.0, 0.0, 2.0 / 3.0]],
            ),
            SspScheme::Ssprk54 => (
                vec![
                    vec![],
                    vec![1.0],
                    vec![0.444370493651235, 0.555629506348765],
                    vec![0.620101851488403, 0.0, 0.379898148511597],
                    vec![0.178079954393132, 0.0, 0.0, 0.821920045606868],
                    vec![0.0, 0.0, 0.517231671970585, 0.096059710526147, 0.386708617503269],
                ],
                vec![
                    vec![],
                    vec![0.391752226571890],
                    vec![0.0, 0.368410593050371],
                    vec![0.0, 0.0, 0.251891774271694],
                    vec![0.0, 0.0, 0.0, 0.544974750228521],
                    vec![0.0, 0.0, 0.0, 0.063692468666290, 0.226007483236906],
                ],
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeStepConfig {
    pub cfl: f64,
    pub t_final: f64,
    pub scheme: SspScheme,
    /// Overrides the CFL rule when set.
    pub fixed_dt: Option<f64>,
}

impl TimeStepConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0) {
            return Err(Error::Config(format!("cfl = {} must be positive", self.cfl)));
        }
        if !(self.t_final >= 0.0) {
            return Err(Error::Config(format!("t_final = {} must be >= 0", self.t_final)));
        }
        if let Some(dt) = self.fixed_dt {
            if !(dt > 0.0) {
                return Err(Error::Config(format!("fixed dt = {dt} must be positive")));
            }
        }
        Ok(())
    }
}

fn tag_stage(err: Error, stage: usize) -> Error {
    match err {
        Error::InvalidState { cell, reason } => Error::InvalidState {
            cell,
            reason: format!("RK stage {stage}: {reason}"),
        },
        other => other,
    }
}

/// One step of `scheme` for du/dt = L(u, t). `rhs(u, t, out)` writes L(u, t).
pub fn ssp_step<F>(scheme: SspScheme, mut rhs: F, u: &[f64], t: f64, dt: f64) -> Result<Vec<f64>>
where
    F: FnMut(&[f64], f64, &mut [f64]) -> Result<()>,
{
    if !(dt > 0.0) {
        return Err(Error::Config(format!("time step {dt} must be positive")));
    }
    let (alpha, beta) = scheme.tableau();
    let n_stages = alpha.len() - 1;
    let mut stages: Vec<Vec<f64>> = vec![u.to_vec()];
    let mut derivs: Vec<Option<Vec<f64>>> = Vec::with_capacity(n_stages);
    let mut times = vec![t];
    for i in 1..=n_stages {
        let k = i - 1;
        if beta[i..].iter().any(|row| row.get(k).is_some_and(|b| *b != 0.0)) {
            let mut l = vec![0.0; u.len()];
            rhs(&stages[k], times[k], &mut l).map_err(|e| tag_stage(e, k + 1))?;
            derivs.push(Some(l));
        } else {
            derivs.push(None);
        }
        let mut next = vec![0.0; u.len()];
        let mut ti = 0.0;
        for k in 0..i {
            let (a, b) = (alpha[i][k], beta[i][k]);
            if a != 0.0 {
                for (n, s) in next.iter_mut().zip(&stages[k]) {
                    *n += a * s;
                }
            }
            if b != 0.0 {
                let l = derivs[k].as_ref().expect("derivative of a used stage");
                for (n, d) in next.iter_mut().zip(l) {
                    *n += b * dt * d;
                }
            }
            ti += a * (times[k] - t) + b * dt;
        }
        stages.push(next);
        times.push(t + ti);
    }
    Ok(stages.pop().expect("at least one stage"))
}

/// Optimal three-stage third-order SSP step.
pub fn ssp_rk3_step<F>(rhs: F, u: &[f64], t: f64, dt: f64) -> Result<Vec<f64>>
where
    F: FnMut(&[f64], f64, &mut [f64]) -> Result<()>,
{
    ssp_step(SspScheme::Ssprk33, rhs, u, t, dt)
}

pub fn ssp_step_of_order<F>(order: usize, rhs: F, u: &[f64], t: f64, dt: f64) -> Result<Vec<f64>>
where
    F: FnMut(&[f64], f64, &mut [f64]) -> Result<()>,
{
    ssp_step(SspScheme::of_order(order)?, rhs, u, t, dt)
}

/// dt = cfl min_e h_e / (λ_e (2p+1)), never larger than `remaining`.
pub fn stable_timestep(disc: &Discretization, field: &StateField, cfl: f64, remaining: f64) -> Result<f64> {
    let p = disc.degree() as f64;
    let mut dt = f64::INFINITY;
    for e in 0..field.n_cells {
        let lambda = cell_wavespeed(disc, field, e)?;
        if lambda > 0.0 {
            dt = dt.min(cfl * disc.mesh.cells[e].h / (lambda * (2.0 * p + 1.0)));
        }
    }
    Ok(dt.min(remaining))
}
