//! Low-order artificial viscosity and its sensor-weighted version.
//!
//! The stabilization term of cell e is
//! `s_i = γ_e ν_e ∫_{K_e} ∇φ_i · ∇U_h dx` with `ν_e = λ_e h_e / (2p)`,
//! applied to every component. It is subtracted from the DG residual.

use rayon::prelude::*;

use crate::dg::{Discretization, StateField};
use crate::error::{Error, Result};
use crate::law::{ConservationLaw, LawKind};
use crate::sensor::{self, SensorConfig};

/// Which γ_e to use in the stabilization term.
#[derive(Debug, Clone, PartialEq)]
pub enum Stabilization {
    /// γ ≡ 0 (plain DG).
    None,
    /// γ ≡ 1 (low-order scheme).
    LowOrder,
    /// γ from the WENO smoothness sensor.
    Adaptive(SensorConfig),
    /// γ fixed to a constant in [0, 1].
    Fixed(f64),
}

/// Per-cell viscosity data of one residual evaluation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ViscosityReport {
    pub nu: Vec<f64>,
    pub gamma: Vec<f64>,
    pub lambda: Vec<f64>,
}

impl ViscosityReport {
    /// Σ_e γ_e ν_e.
    pub fn total_dissipation(&self) -> f64 {
        self.gamma.iter().zip(&self.nu).map(|(g, n)| g * n).sum()
    }
}

/// Maximum wave speed over the volume quadrature points of cell `e`.
pub fn cell_wavespeed(disc: &Discretization, field: &StateField, e: usize) -> Result<f64> {
    if let LawKind::Kpp = disc.law.kind {
        return Ok(1.0);
    }
    let mut lam: f64 = 0.0;
    for (q, u) in disc.quad_states(field, e).iter().enumerate() {
        let x = disc.mesh.map_to_physical(e, &disc.elem.quad.points[q]);
        lam = lam.max(disc.law.local_wavespeed(u, &x).map_err(|err| err.in_cell(e))?);
    }
    Ok(lam)
}

/// ν = λ h / (2p).
pub fn viscosity_from(lambda: f64, h: f64, p: usize) -> Result<f64> {
    if p == 0 {
        return Err(Error::Unsupported("artificial viscosity needs degree p >= 1".into()));
    }
    Ok(lambda * h / (2.0 * p as f64))
}

/// ν_e for cell `e` of `field`.
pub fn viscosity_parameter(disc: &Discretization, field: &StateField, e: usize) -> Result<f64> {
    let lambda = cell_wavespeed(disc, field, e)?;
    viscosity_from(lambda, disc.mesh.cells[e].h, disc.degree())
}

/// Component whose smoothness drives the sensor: the scalar itself or the density.
pub fn sensed_component(_law: &ConservationLaw) -> usize {
    0
}

pub fn viscosity_report(
    disc: &Discretization,
    field: &StateField,
    stab: &Stabilization,
) -> Result<ViscosityReport> {
    let n = field.n_cells;
    let rows: Vec<(f64, f64, f64)> = (0..n)
        .into_par_iter()
        .map(|e| -> Result<(f64, f64, f64)> {
            let gamma = match stab {
                Stabilization::None => 0.0,
                Stabilization::LowOrder => 1.0,
                Stabilization::Fixed(g) => *g,
                Stabilization::Adaptive(cfg) => {
                    sensor::cell_gamma(disc, field, sensed_component(&disc.law), e, cfg)
                }
            };
            let lambda = cell_wavespeed(disc, field, e)?;
            let nu = viscosity_from(lambda, disc.mesh.cells[e].h, disc.degree())?;
            Ok((nu, gamma, lambda))
        })
        .collect::<Result<_>>()?;
    let mut report = ViscosityReport::default();
    for (nu, gamma, lambda) in rows {
        report.nu.push(nu);
        report.gamma.push(gamma);
        report.lambda.push(lambda);
    }
    Ok(report)
}

/// Stabilization contributions of cell `e` for all components:
/// `coef * K u_c` with K the cell stiffness matrix and coef = γ_e ν_e.
pub fn stabilization_term(stiffness: &[f64], field: &StateField, e: usize, coef: f64) -> Vec<f64> {
    let mut s = vec![0.0; field.block_len()];
    subtract_stabilization(stiffness, field, e, -coef, &mut s);
    s
}

pub(crate) fn subtract_stabilization(
    stiffness: &[f64],
    field: &StateField,
    e: usize,
    coef: f64,
    r: &mut [f64],
) {
    let nb = field.n_basis;
    for c in 0..field.n_vars {
        let u = field.component(e, c);
        let rc = &mut r[c * nb..(c + 1) * nb];
        for i in 0..nb {
            let row = &stiffness[i * nb..(i + 1) * nb];
            let ku: f64 = row.iter().zip(u).map(|(a, b)| a * b).sum();
            rc[i] -= coef * ku;
        }
    }
}
