//! Hermite-WENO reconstruction and the smoothness sensors built on it.
//!
//! For a cell `e` with face neighbours `l = 1..m_e`, candidate 0 is the cell's
//! own polynomial and candidate `l` is the degree-p polynomial on `K_e` that
//! keeps the cell average of `U_e` and fits, in the least-squares sense, the
//! values and first derivatives of the neighbour polynomial `U_l` at the
//! neighbour's Gauss points. Derivatives are compared in reference units
//! (scaled by the cell size), so values and slopes carry the same weight on
//! any mesh.
//!
//! On uniform Cartesian meshes every candidate is a fixed linear map of the
//! data: `c_l = A_f mean(U_e) + B_f U_l` for the local face `f` that leads to
//! `l`. Those maps and the scaled Sobolev semi-norm are precomputed once in
//! [`HwenoOperators`].

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::basis::ReferenceElement;
use crate::dg::{dot, Discretization, StateField};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SensorVariant {
    Relative,
    Zhao { theta: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SensorConfig {
    /// Sensitivity exponent, q >= 1.
    pub q: f64,
    /// Activation threshold in [0, 1]; 0 disables thresholding.
    pub b: f64,
    pub variant: SensorVariant,
    /// ε = epsilon * ||U_e||_e^2 in the nonlinear weights (relative, so the
    /// sensor is invariant under scaling of the data).
    pub epsilon: f64,
    /// Linear weight of each neighbour candidate; the central candidate gets
    /// the remainder.
    pub neighbor_weight: f64,
}

impl Default for SensorConfig {
    fn default() -> Self {
        SensorConfig {
            q: 1.0,
            b: 0.0,
            variant: SensorVariant::Relative,
            epsilon: 1e-12,
            neighbor_weight: 0.001,
        }
    }
}

impl SensorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.q >= 1.0) {
            return Err(Error::Config(format!("sensor exponent q = {} must be >= 1", self.q)));
        }
        if !(0.0..=1.0).contains(&self.b) {
            return Err(Error::Config(format!("threshold b = {} must lie in [0, 1]", self.b)));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::Config("sensor regularizer must be positive".into()));
        }
        if !(self.neighbor_weight > 0.0 && self.neighbor_weight < 0.25) {
            return Err(Error::Config(format!(
                "neighbour linear weight {} must lie in (0, 0.25)",
                self.neighbor_weight
            )));
        }
        if let SensorVariant::Zhao { theta } = self.variant {
            if !(theta > 0.0) {
                return Err(Error::Config(format!("theta = {theta} must be positive")));
            }
        }
        Ok(())
    }

    /// Linear weights (central first) for a cell with `m` neighbours.
    pub fn linear_weights(&self, m: usize) -> Vec<f64> {
        let mut w = vec![self.neighbor_weight; m + 1];
        w[0] = 1.0 - self.neighbor_weight * m as f64;
        w
    }
}

/// Precomputed candidate maps and semi-norm Gram matrix for one mesh/degree.
#[derive(Debug, Clone)]
pub struct HwenoOperators {
    n_basis: usize,
    /// Per local face: candidate = mean_map[f] * mean(U_e) + neighbor_map[f] U_l.
    mean_map: Vec<Vec<f64>>,
    neighbor_map: Vec<Vec<f64>>,
    /// Weighted derivative operator D with ||v||_e = |D v| (row-major).
    seminorm_rows: Vec<f64>,
    /// Reference basis integrals (mean = w·u).
    basis_integrals: Vec<f64>,
    /// R mean_map[f] and R neighbor_map[f], with R the square semi-norm factor.
    r_mean_map: Vec<Vec<f64>>,
    r_neighbor_map: Vec<Vec<f64>>,
}

impl HwenoOperators {
    pub fn new(elem: &ReferenceElement, spacing: [f64; 2], h: f64) -> Result<Self> {
        let nb = elem.n_basis();
        let dim = elem.dim;
        let w = elem.basis_integrals();
        let nq = elem.n_quad();
        let rows = nq * (1 + dim);

        let mut mean_map: Vec<Vec<f64>> = Vec::new();
        let mut neighbor_map: Vec<Vec<f64>> = Vec::new();
        for local in 0..2 * dim {
            let axis = local / 2;
            let shift = if local % 2 == 1 { 1.0 } else { -1.0 };
            // A: central basis extrapolated to the neighbour's Gauss points.
            // B: neighbour basis at its own Gauss points.
            let mut a = DMatrix::<f64>::zeros(rows, nb);
            let mut b = DMatrix::<f64>::zeros(rows, nb);
            for q in 0..nq {
                let mut x = elem.quad.points[q];
                x[axis] += shift;
                let (v, g) = elem.eval(&x);
                for j in 0..nb {
                    a[(q, j)] = v[j];
                    b[(q, j)] = elem.values[q * nb + j];
                    for d in 0..dim {
                        a[(nq * (1 + d) + q, j)] = g[j][d];
                        b[(nq * (1 + d) + q, j)] = elem.grads[q * nb + j][d];
                    }
                }
            }
            // min |A c - B u_l| s.t. w·c = mean(U_e). Write c = c_p m + P z with
            // c_p = w/|w|^2 and P the projector onto w^⊥, then solve for z
            // with the pseudo-inverse of A P. Avoids squaring cond(A).
            let wv = DVector::from_column_slice(&w);
            let wsq = wv.norm_squared();
            let c_p = &wv / wsq;
            let proj = DMatrix::<f64>::identity(nb, nb) - &wv * wv.transpose() / wsq;
            let svd = (&a * &proj).svd(true, true);
            let smax = svd.singular_values.max();
            // exactly one singular value (along w) is zero
            let rank = svd.singular_values.iter().filter(|&&v| v > 1e-10 * smax).count();
            if rank + 1 != nb {
                return Err(Error::Singular(format!("HWENO fit for face {local}: rank {rank}")));
            }
            let pinv = svd
                .pseudo_inverse(1e-10 * smax)
                .map_err(|e| Error::Singular(format!("HWENO fit for face {local}: {e}")))?;
            let solve = &proj * pinv;
            let x = &solve * &b;
            let mean_col = &c_p - &solve * (&a * &c_p);
            mean_map.push(mean_col.iter().copied().collect());
            neighbor_map.push((0..nb * nb).map(|k| x[(k / nb, k % nb)]).collect());
        }

        // ‖D v‖ = ‖R v‖ for D = QR; R is square, D is tall
        let d = seminorm_operator(elem, spacing, h);
        let rows = d.len() / nb;
        let seminorm_rows: Vec<f64> = if rows > nb {
            let r = DMatrix::from_row_slice(rows, nb, &d).qr().r();
            (0..nb).flat_map(|i| (0..nb).map(move |j| (i, j))).map(|(i, j)| r[(i, j)]).collect()
        } else {
            d
        };
        let rn = seminorm_rows.len() / nb;
        let r = DMatrix::from_row_slice(rn, nb, &seminorm_rows);
        let r_mean_map = mean_map
            .iter()
            .map(|a| (&r * DMatrix::from_column_slice(nb, 1, a)).iter().copied().collect())
            .collect();
        let r_neighbor_map = neighbor_map
            .iter()
            .map(|b| {
                let m = &r * DMatrix::from_row_slice(nb, nb, b);
                (0..rn * nb).map(|k| m[(k / nb, k % nb)]).collect()
            })
            .collect();
        Ok(HwenoOperators {
            n_basis: nb,
            mean_map,
            neighbor_map,
            seminorm_rows,
            basis_integrals: w,
            r_mean_map,
            r_neighbor_map,
        })
    }

    pub fn n_basis(&self) -> usize {
        self.n_basis
    }

    /// Squared scaled Sobolev semi-norm of a polynomial given by nodal values.
    pub fn seminorm_squared(&self, v: &[f64]) -> f64 {
        self.seminorm_rows
            .chunks_exact(self.n_basis)
            .map(|row| dot(row, v).powi(2))
            .sum()
    }

    pub fn seminorm(&self, v: &[f64]) -> f64 {
        self.seminorm_squared(v).sqrt()
    }

    /// Cell average of a nodal polynomial.
    pub fn mean(&self, v: &[f64]) -> f64 {
        dot(&self.basis_integrals, v)
    }

    /// Candidate built from the neighbour across local face `local`.
    pub fn candidate(&self, local: usize, center: &[f64], neighbor: &[f64]) -> Vec<f64> {
        let nb = self.n_basis;
        let mean = self.mean(center);
        let a = &self.mean_map[local];
        let b = &self.neighbor_map[local];
        (0..nb)
            .map(|i| a[i] * mean + dot(&b[i * nb..(i + 1) * nb], neighbor))
            .collect()
    }
}

/// Rows of sqrt(w_q h^{2|k|-d} |K|) D^k φ_j at the volume Gauss points, so
/// that `Σ_{1<=|k|<=p} h^{2|k|-d} ∫_K |D^k v|^2 = |D v|^2`. Working with D
/// rather than its Gram matrix keeps constants at (near) exact zero.
fn seminorm_operator(elem: &ReferenceElement, spacing: [f64; 2], h: f64) -> Vec<f64> {
    let nb = elem.n_basis();
    let dim = elem.dim;
    let vol: f64 = spacing[..dim].iter().product();
    let mut rows = Vec::new();
    for k in elem.derivative_multi_indices() {
        let order = k[0] + k[1];
        let jac = spacing[0].powi(-(k[0] as i32)) * spacing[1].powi(-(k[1] as i32));
        let scale = h.powi(2 * order as i32 - dim as i32) * vol;
        for (q, x) in elem.quad.points.iter().enumerate() {
            let w = (elem.quad.weights[q] * scale).sqrt() * jac;
            rows.extend((0..nb).map(|j| w * elem.eval_derivative(j, k, x)));
        }
    }
    rows
}

/// Candidate polynomials of one cell with smoothness values and weights.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSet {
    /// Nodal coefficients on K_e; index 0 is the cell's own polynomial.
    pub candidates: Vec<Vec<f64>>,
    /// Local face that produced each neighbour candidate (None for the centre).
    pub faces: Vec<Option<usize>>,
    /// β_l = ||U_{h,l}||_e^2.
    pub beta: Vec<f64>,
    /// Linear (ideal) weights.
    pub linear: Vec<f64>,
    /// Nonlinear weights ω_l; empty until [`nonlinear_weights`] runs.
    pub weights: Vec<f64>,
}

impl CandidateSet {
    pub fn n_neighbors(&self) -> usize {
        self.candidates.len() - 1
    }
}

/// Builds the Hermite candidates of cell `e` for component `comp`.
pub fn hermite_candidates(
    disc: &Discretization,
    field: &StateField,
    comp: usize,
    e: usize,
    config: &SensorConfig,
) -> CandidateSet {
    let ops = &disc.hweno;
    let center = field.component(e, comp);
    let mut candidates = vec![center.to_vec()];
    let mut faces = vec![None];
    for local in 0..disc.mesh.faces_per_cell() {
        if let Some(nbr) = disc.mesh.neighbor(e, local) {
            candidates.push(ops.candidate(local, center, field.component(nbr, comp)));
            faces.push(Some(local));
        }
    }
    let beta = candidates.iter().map(|c| ops.seminorm_squared(c)).collect();
    let linear = config.linear_weights(candidates.len() - 1);
    CandidateSet {
        candidates,
        faces,
        beta,
        linear,
        weights: vec![],
    }
}

/// ω_l = α_l / Σ α_k with α_l = λ̃_l / (ε + β_l)^2, ε = epsilon ||U_e||_e^2.
pub fn nonlinear_weights(set: &mut CandidateSet, center_seminorm_sq: f64, config: &SensorConfig) {
    let mut w = vec![0.0; set.beta.len()];
    weights_into(&set.beta, &set.linear, center_seminorm_sq, config, &mut w);
    set.weights = w;
}

fn weights_into(beta: &[f64], linear: &[f64], center_seminorm_sq: f64, config: &SensorConfig, out: &mut [f64]) {
    let eps = (config.epsilon * center_seminorm_sq).max(f64::MIN_POSITIVE);
    // scale by the smallest denominator so α stays in range
    let smallest = beta.iter().fold(f64::INFINITY, |m, b| m.min(eps + b));
    let mut total = 0.0;
    for ((o, l), b) in out.iter_mut().zip(linear).zip(beta) {
        *o = l * (smallest / (eps + b)).powi(2);
        total += *o;
    }
    for o in out.iter_mut() {
        *o /= total;
    }
}

/// U*_e = Σ ω_l U_{h,l}.
pub fn weno_reconstruct(set: &CandidateSet) -> Vec<f64> {
    let nb = set.candidates[0].len();
    let mut out = vec![0.0; nb];
    for (w, c) in set.weights.iter().zip(&set.candidates) {
        for (o, v) in out.iter_mut().zip(c) {
            *o += w * v;
        }
    }
    out
}

/// γ = min(1, r)^q with r = ||U - U*||_e / ||U||_e, zeroed when r < b.
///
/// Cell-wise constant polynomials give γ = 0. A semi-norm below `1e-12`
/// times the stencil magnitude counts as zero.
pub fn relative_gamma(numerator: f64, denominator: f64, stencil_scale: f64, config: &SensorConfig) -> (f64, f64) {
    if denominator <= 1e-12 * stencil_scale {
        return (0.0, 0.0);
    }
    let ratio = numerator / denominator;
    if ratio == 0.0 || ratio < config.b {
        return (0.0, ratio);
    }
    (ratio.min(1.0).powf(config.q), ratio)
}

/// Zhao's sensor from nonlinear and ideal weights.
pub fn zhao_gamma(set: &CandidateSet, theta: f64) -> f64 {
    zhao_from_weights(&set.weights, &set.linear, theta)
}

fn zhao_from_weights(weights: &[f64], linear: &[f64], theta: f64) -> f64 {
    let m = weights.len() - 1;
    if m == 0 {
        return 0.0;
    }
    let num: f64 = weights
        .iter()
        .zip(linear)
        .map(|(w, l)| (w / l - 1.0).abs().powf(theta))
        .sum();
    let min_linear = linear.iter().copied().fold(f64::INFINITY, f64::min);
    let den = (1.0 / min_linear - 1.0).abs().powf(theta) + m as f64;
    (num / den).clamp(0.0, 1.0)
}

/// Full sensor evaluation for one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SensorOutcome {
    pub gamma: f64,
    /// Relative difference r (0 for flat cells).
    pub ratio: f64,
    pub candidates: CandidateSet,
    pub reconstruction: Vec<f64>,
}

pub fn cell_sensor(
    disc: &Discretization,
    field: &StateField,
    comp: usize,
    e: usize,
    config: &SensorConfig,
) -> SensorOutcome {
    let ops = &disc.hweno;
    let mut set = hermite_candidates(disc, field, comp, e, config);
    let center_sq = set.beta[0];
    nonlinear_weights(&mut set, center_sq, config);
    let recon = weno_reconstruct(&set);
    let diff: Vec<f64> = field
        .component(e, comp)
        .iter()
        .zip(&recon)
        .map(|(a, b)| a - b)
        .collect();
    let numerator = ops.seminorm(&diff);
    let denominator = center_sq.sqrt();
    let mut scale: f64 = field.component(e, comp).iter().fold(0.0, |m, v| m.max(v.abs()));
    for local in 0..disc.mesh.faces_per_cell() {
        if let Some(nbr) = disc.mesh.neighbor(e, local) {
            scale = field.component(nbr, comp).iter().fold(scale, |m, v| m.max(v.abs()));
        }
    }
    let (relative, ratio) = relative_gamma(numerator, denominator, scale, config);
    let gamma = match config.variant {
        SensorVariant::Relative => relative,
        SensorVariant::Zhao { theta } => zhao_gamma(&set, theta),
    };
    SensorOutcome {
        gamma,
        ratio,
        candidates: set,
        reconstruction: recon,
    }
}

const MAX_BASIS: usize = 16;
const MAX_CANDIDATES: usize = 5;

/// γ_e alone, without forming the candidate polynomials. Works on R c_l,
/// which is all the semi-norms need; agrees with [`cell_sensor`] to roundoff.
pub fn cell_gamma(disc: &Discretization, field: &StateField, comp: usize, e: usize, config: &SensorConfig) -> f64 {
    let ops = &disc.hweno;
    let nb = ops.n_basis;
    let rn = ops.seminorm_rows.len() / nb;
    debug_assert!(rn <= MAX_BASIS && nb <= MAX_BASIS);
    let center = field.component(e, comp);
    let mean = ops.mean(center);
    let mut y = [[0.0; MAX_BASIS]; MAX_CANDIDATES];
    let mut beta = [0.0; MAX_CANDIDATES];
    for (i, row) in ops.seminorm_rows.chunks_exact(nb).enumerate() {
        y[0][i] = dot(row, center);
    }
    let mut scale: f64 = center.iter().fold(0.0, |m, v| m.max(v.abs()));
    let mut n = 1;
    for local in 0..disc.mesh.faces_per_cell() {
        if let Some(nbr) = disc.mesh.neighbor(e, local) {
            let u = field.component(nbr, comp);
            scale = u.iter().fold(scale, |m, v| m.max(v.abs()));
            let (a, b) = (&ops.r_mean_map[local], &ops.r_neighbor_map[local]);
            for i in 0..rn {
                y[n][i] = a[i] * mean + dot(&b[i * nb..(i + 1) * nb], u);
            }
            n += 1;
        }
    }
    for l in 0..n {
        beta[l] = y[l][..rn].iter().map(|v| v * v).sum();
    }
    let mut linear = [config.neighbor_weight; MAX_CANDIDATES];
    linear[0] = 1.0 - config.neighbor_weight * (n - 1) as f64;
    let mut w = [0.0; MAX_CANDIDATES];
    weights_into(&beta[..n], &linear[..n], beta[0], config, &mut w[..n]);
    match config.variant {
        SensorVariant::Relative => {
            let mut num = 0.0;
            for i in 0..rn {
                let rec: f64 = (0..n).map(|l| w[l] * y[l][i]).sum();
                num += (y[0][i] - rec).powi(2);
            }
            relative_gamma(num.sqrt(), beta[0].sqrt(), scale, config).0
        }
        SensorVariant::Zhao { theta } => zhao_from_weights(&w[..n], &linear[..n], theta),
    }
}

/// γ_e of the relative sensor for cell `e` (thresholded by `config.b`).
pub fn smoothness_gamma(disc: &Discretization, field: &StateField, comp: usize, e: usize, config: &SensorConfig) -> f64 {
    let cfg = SensorConfig {
        variant: SensorVariant::Relative,
        ..config.clone()
    };
    cell_sensor(disc, field, comp, e, &cfg).gamma
}

/// Scaled Sobolev semi-norm of a nodal polynomial on a cell of `disc`.
pub fn scaled_sobolev_seminorm(disc: &Discretization, v: &[f64]) -> f64 {
    disc.hweno.seminorm(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dg::GhostPolicy;
    use crate::law::{ConservationLaw, LawKind, NumericalFlux};
    use crate::mesh::{build_structured_mesh, BoundarySpec, BoundaryTag};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn disc1(n: usize, p: usize, len: f64) -> Discretization {
        let mesh = build_structured_mesh(&[(0.0, len)], &[n], BoundarySpec::periodic()).unwrap();
        let law = ConservationLaw::new(1, LawKind::Burgers).unwrap();
        Discretization::new(mesh, p, law, NumericalFlux::Llf, GhostPolicy::standard()).unwrap()
    }

    fn disc2(n: usize, p: usize, spec: BoundarySpec) -> Discretization {
        let mesh = build_structured_mesh(&[(0.0, 1.0), (0.0, 0.8)], &[n, n], spec).unwrap();
        let law = ConservationLaw::new(2, LawKind::Kpp).unwrap();
        Discretization::new(mesh, p, law, NumericalFlux::Llf, GhostPolicy::standard()).unwrap()
    }

    fn interpolate(d: &Discretization, f: impl Fn(f64, f64) -> f64) -> StateField {
        let mut field = d.zero_field();
        for e in 0..field.n_cells {
            for (j, xi) in d.elem.nodes.iter().enumerate() {
                let x = d.mesh.map_to_physical(e, xi);
                field.block_mut(e)[j] = f(x[0], x[1]);
            }
        }
        field
    }

    #[test]
    fn seminorm_examples() {
        // one cell (0, h)
        let h = 0.3;
        let d = disc1(1, 2, h);
        assert!(scaled_sobolev_seminorm(&d, &[5.0, 5.0, 5.0]) < 1e-13);
        // v = x
        let v: Vec<f64> = d.elem.nodes.iter().map(|n| n[0] * h).collect();
        assert!((scaled_sobolev_seminorm(&d, &v) - h).abs() < 1e-14);
        // v = x^2: h*(4h^3/3) + h^3*(4h) => 4h^4/3 + 4h^4
        let v: Vec<f64> = d.elem.nodes.iter().map(|n| (n[0] * h).powi(2)).collect();
        let oracle = (h * 4.0 * h.powi(3) / 3.0 + h.powi(3) * 4.0 * h).sqrt();
        assert!((scaled_sobolev_seminorm(&d, &v) - oracle).abs() < 1e-14);
        assert!((oracle - 4.0 * h * h / 3f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn candidates_reproduce_polynomials() {
        let cfg = SensorConfig::default();
        for p in 1..=3 {
            let d = disc1(8, p, 1.0);
            // global polynomial on a non-periodic stretch: use interior cells only
            let field = interpolate(&d, |x, _| 0.3 - 1.2 * x + 0.8 * x.powi(p as i32));
            for e in 1..7 {
                let set = hermite_candidates(&d, &field, 0, e, &cfg);
                for c in &set.candidates {
                    for (a, b) in c.iter().zip(field.component(e, 0)) {
                        assert!((a - b).abs() < 1e-11, "p={p} e={e}");
                    }
                }
                let out = cell_sensor(&d, &field, 0, e, &cfg);
                assert!(out.gamma < 1e-9);
            }
        }
        let d = disc2(5, 2, BoundarySpec::uniform(BoundaryTag::Outflow));
        let field = interpolate(&d, |x, y| 1.0 + x * y - 2.0 * y * y + x * x);
        for e in 0..d.mesh.n_cells() {
            let set = hermite_candidates(&d, &field, 0, e, &cfg);
            for c in &set.candidates {
                for (a, b) in c.iter().zip(field.component(e, 0)) {
                    assert!((a - b).abs() < 1e-11);
                }
            }
            assert!(cell_sensor(&d, &field, 0, e, &cfg).gamma < 1e-9);
        }
    }

    #[test]
    fn constant_field() {
        let cfg = SensorConfig::default();
        let d = disc2(4, 2, BoundarySpec::periodic());
        let field = interpolate(&d, |_, _| 2.5);
        let out = cell_sensor(&d, &field, 0, 5, &cfg);
        assert_eq!(out.candidates.candidates.len(), 5);
        for c in &out.candidates.candidates {
            for v in c {
                assert!((v - 2.5).abs() < 1e-11);
            }
        }
        assert_eq!(out.gamma, 0.0);
        for v in &out.reconstruction {
            assert!((v - 2.5).abs() < 1e-11);
        }
    }

    #[test]
    fn step_candidates_hand_oracle() {
        // u = 1 on cell 0, u = 0 on cells 1 and 2, p = 1; centre is cell 1
        let d = disc1(3, 1, 3.0);
        let mut field = d.zero_field();
        field.block_mut(0).copy_from_slice(&[1.0, 1.0]);
        let cfg = SensorConfig::default();
        let set = hermite_candidates(&d, &field, 0, 1, &cfg);
        // constrained fit c(ξ) = a (ξ - 1/2) with mean 0; data at the left
        // neighbour's Gauss points t = ξ_q - 1 - 1/2: values 1, slopes 0.
        // normal equation: a (Σt² + 2) = Σt
        let g = 0.5 / 3f64.sqrt();
        let t = [0.5 - g - 1.5, 0.5 + g - 1.5];
        let a = (t[0] + t[1]) / (t[0] * t[0] + t[1] * t[1] + 2.0);
        let left = &set.candidates[1];
        assert_eq!(set.faces[1], Some(0));
        assert!((left[0] - (-0.5 * a)).abs() < 1e-13);
        assert!((left[1] - 0.5 * a).abs() < 1e-13);
        let right = &set.candidates[2];
        assert!(right.iter().all(|v| v.abs() < 1e-14));
        assert!(set.beta[1] > set.beta[2]);
        // β_left = h^{2-1} ∫ (a/h)^2 = a^2 for h = 1
        assert!((set.beta[1] - a * a).abs() < 1e-13);
    }

    #[test]
    fn weights_examples() {
        let cfg = SensorConfig::default();
        let mut set = CandidateSet {
            candidates: vec![vec![0.0]; 3],
            faces: vec![None, Some(0), Some(1)],
            beta: vec![0.4, 0.4, 0.4],
            linear: cfg.linear_weights(2),
            weights: vec![],
        };
        nonlinear_weights(&mut set, 0.4, &cfg);
        for (w, l) in set.weights.iter().zip(&set.linear) {
            assert!((w - l).abs() < 1e-15);
        }
        assert!(zhao_gamma(&set, 1.0).abs() < 1e-12);

        set.beta = vec![1e6, 1e-3, 2e-3];
        nonlinear_weights(&mut set, 1e6, &cfg);
        assert!(set.weights[0] < 1e-9);
        assert!((set.weights.iter().sum::<f64>() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn zhao_dominant_centre() {
        // ω = (1, 0, 0), ω̃ = (0.998, 0.001, 0.001), θ = 1
        let cfg = SensorConfig::default();
        let set = CandidateSet {
            candidates: vec![vec![0.0]; 3],
            faces: vec![None, Some(0), Some(1)],
            beta: vec![0.0; 3],
            linear: cfg.linear_weights(2),
            weights: vec![1.0, 0.0, 0.0],
        };
        let num = (1.0 / 0.998 - 1.0) + 1.0 + 1.0;
        let den = (1.0 / 0.001 - 1.0) + 2.0;
        let g = zhao_gamma(&set, 1.0);
        assert!((g - num / den).abs() < 1e-12);
        assert!(g < 1.0);
    }

    #[test]
    fn relative_gamma_rules() {
        let cfg = SensorConfig::default();
        assert_eq!(relative_gamma(0.0, 1.0, 1.0, &cfg).0, 0.0);
        assert_eq!(relative_gamma(2.0, 1.0, 1.0, &cfg).0, 1.0);
        assert_eq!(relative_gamma(0.0, 0.0, 1.0, &cfg).0, 0.0);
        assert_eq!(relative_gamma(0.1, 0.0, 1.0, &cfg).0, 0.0);
        assert_eq!(relative_gamma(0.1, 1e-14, 1.0, &cfg).0, 0.0);
        let thr = SensorConfig { b: 0.2, ..cfg.clone() };
        assert_eq!(relative_gamma(0.1, 1.0, 1.0, &thr).0, 0.0);
        assert!((relative_gamma(0.3, 1.0, 1.0, &thr).0 - 0.3).abs() < 1e-15);
        let q2 = SensorConfig { q: 2.0, ..cfg };
        assert!((relative_gamma(0.5, 1.0, 1.0, &q2).0 - 0.25).abs() < 1e-15);
    }

    #[test]
    fn random_fields_range_mean_scale() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let cfg = SensorConfig::default();
        let zhao = SensorConfig { variant: SensorVariant::Zhao { theta: 1.0 }, ..cfg.clone() };
        for d in [disc1(9, 2, 1.0), disc2(4, 1, BoundarySpec::uniform(BoundaryTag::Outflow))] {
            let mut field = d.zero_field();
            for v in field.coeffs.iter_mut() {
                *v = rng.gen_range(-1.0..1.0);
            }
            let mut scaled = field.clone();
            for v in scaled.coeffs.iter_mut() {
                *v *= -3.7;
            }
            for e in 0..field.n_cells {
                let out = cell_sensor(&d, &field, 0, e, &cfg);
                assert!((0.0..=1.0).contains(&out.gamma));
                let z = cell_sensor(&d, &field, 0, e, &zhao);
                assert!((0.0..=1.0).contains(&z.gamma));
                let w: f64 = out.candidates.weights.iter().sum();
                assert!((w - 1.0).abs() < 1e-13);
                assert!(out.candidates.weights.iter().all(|w| *w >= 0.0));
                let m0 = d.hweno.mean(field.component(e, 0));
                let m1 = d.hweno.mean(&out.reconstruction);
                assert!((m0 - m1).abs() < 1e-12);
                let s = cell_sensor(&d, &scaled, 0, e, &cfg);
                assert!((s.gamma - out.gamma).abs() < 1e-12, "{} {} {:?}", s.gamma, out.gamma, out.candidates.beta);
            }
        }
    }

    #[test]
    fn fast_gamma_matches_full_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let configs = [
            SensorConfig::default(),
            SensorConfig { q: 2.0, b: 0.05, ..SensorConfig::default() },
            SensorConfig { variant: SensorVariant::Zhao { theta: 1.0 }, ..SensorConfig::default() },
        ];
        let discs = [
            disc1(7, 1, 1.0),
            disc1(7, 3, 1.0),
            disc2(3, 2, BoundarySpec::periodic()),
            disc2(3, 3, BoundarySpec::uniform(BoundaryTag::Outflow)),
        ];
        for d in discs {
            let mut field = d.zero_field();
            for v in field.coeffs.iter_mut() {
                *v = rng.gen_range(-1.0..1.0);
            }
            for cfg in &configs {
                for e in 0..field.n_cells {
                    let full = cell_sensor(&d, &field, 0, e, cfg).gamma;
                    let fast = cell_gamma(&d, &field, 0, e, cfg);
                    assert!((full - fast).abs() < 1e-12, "{full} {fast}");
                }
            }
        }
    }

    fn step_field(d: &Discretization, at: f64) -> StateField {
        interpolate(d, |x, _| {
            if (x - at).abs() < 1e-12 {
                0.5
            } else if x < at {
                1.0
            } else {
                0.0
            }
        })
    }

    #[test]
    fn discontinuity_response() {
        let cfg = SensorConfig::default();
        for p in 2..=3 {
            let mesh = build_structured_mesh(&[(0.0, 1.0)], &[10], BoundarySpec::uniform(BoundaryTag::Outflow)).unwrap();
            let law = ConservationLaw::new(1, LawKind::Burgers).unwrap();
            let d = Discretization::new(mesh, p, law, NumericalFlux::Llf, GhostPolicy::standard()).unwrap();
            let f = step_field(&d, 0.5);
            for e in [4, 5] {
                assert!(cell_sensor(&d, &f, 0, e, &cfg).gamma > 0.5, "p={p} e={e}");
            }
            for e in [0, 1, 2, 7, 8, 9] {
                assert_eq!(cell_sensor(&d, &f, 0, e, &cfg).gamma, 0.0);
            }
        }
        // 2D, step along x = 0.6 in a 5 x 5 mesh of the unit-by-0.8 box
        let d = disc2(5, 2, BoundarySpec::uniform(BoundaryTag::Outflow));
        let f = step_field(&d, 0.6);
        for e in 0..25 {
            let g = cell_sensor(&d, &f, 0, e, &cfg).gamma;
            let i = d.mesh.cells[e].index[0];
            if i == 2 || i == 3 {
                assert!(g > 0.5, "cell {e}: {g}");
            }
        }
    }

    #[test]
    fn linear_elements_respond_weaker() {
        // with the strongly central-biased linear weights the p = 1 response
        // to the same step is noticeably smaller
        let cfg = SensorConfig::default();
        let mesh = build_structured_mesh(&[(0.0, 1.0)], &[10], BoundarySpec::uniform(BoundaryTag::Outflow)).unwrap();
        let law = ConservationLaw::new(1, LawKind::Burgers).unwrap();
        let d = Discretization::new(mesh, 1, law, NumericalFlux::Llf, GhostPolicy::standard()).unwrap();
        let f = step_field(&d, 0.5);
        let g = cell_sensor(&d, &f, 0, 4, &cfg).gamma;
        assert!(g > 0.1 && g < 0.5, "{g}");
    }
}
