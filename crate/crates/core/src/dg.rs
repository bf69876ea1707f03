//! Semi-discrete DG operator: block mass matrix, boundary ghost states and
//! the residual R(U) of the weak form, optionally with artificial viscosity.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::basis::ReferenceElement;
use crate::error::{Error, Result};
use crate::law::{ConservationLaw, LawKind, NumericalFlux, State, MAX_VARS};
use crate::mesh::{BoundaryTag, Mesh, Side};
use crate::sensor::HwenoOperators;
use crate::stabilization::{self, Stabilization, ViscosityReport};

/// Nodal coefficients of a DG field, laid out as `[cell][component][node]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateField {
    pub n_cells: usize,
    pub n_vars: usize,
    pub n_basis: usize,
    pub coeffs: Vec<f64>,
}

impl StateField {
    pub fn zeros(n_cells: usize, n_vars: usize, n_basis: usize) -> Self {
        StateField {
            n_cells,
            n_vars,
            n_basis,
            coeffs: vec![0.0; n_cells * n_vars * n_basis],
        }
    }

    pub fn from_coeffs(n_cells: usize, n_vars: usize, n_basis: usize, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != n_cells * n_vars * n_basis {
            return Err(Error::Config(format!(
                "coefficient vector has length {}, expected {}",
                coeffs.len(),
                n_cells * n_vars * n_basis
            )));
        }
        Ok(StateField { n_cells, n_vars, n_basis, coeffs })
    }

    pub fn block_len(&self) -> usize {
        self.n_vars * self.n_basis
    }

    pub fn block(&self, e: usize) -> &[f64] {
        let b = self.block_len();
        &self.coeffs[e * b..(e + 1) * b]
    }

    pub fn block_mut(&mut self, e: usize) -> &mut [f64] {
        let b = self.block_len();
        &mut self.coeffs[e * b..(e + 1) * b]
    }

    /// Nodal values of component `c` in cell `e`.
    pub fn component(&self, e: usize, c: usize) -> &[f64] {
        let start = e * self.block_len() + c * self.n_basis;
        &self.coeffs[start..start + self.n_basis]
    }
}

/// Block-diagonal mass operator. All cells of a uniform mesh share one
/// reference block scaled by the cell volume.
#[derive(Debug, Clone)]
pub struct BlockMass {
    n_basis: usize,
    reference: Vec<f64>,
    reference_inverse: Vec<f64>,
    volumes: Vec<f64>,
}

/// Assembles the block mass operator and its inverse.
pub fn assemble_mass(mesh: &Mesh, elem: &ReferenceElement) -> Result<BlockMass> {
    if elem.dim != mesh.dim {
        return Err(Error::Config(format!(
            "reference element is {}D but the mesh is {}D",
            elem.dim, mesh.dim
        )));
    }
    let nb = elem.n_basis();
    let reference = elem.reference_mass();
    let m = DMatrix::from_row_slice(nb, nb, &reference);
    let inv = m
        .cholesky()
        .ok_or_else(|| Error::Singular("reference mass matrix".into()))?
        .inverse();
    let reference_inverse = (0..nb * nb).map(|k| inv[(k / nb, k % nb)]).collect();
    let volumes: Vec<f64> = mesh.cells.iter().map(|c| c.volume).collect();
    if let Some(c) = volumes.iter().position(|v| !(*v > 0.0)) {
        return Err(Error::Singular(format!("mass block of cell {c}")));
    }
    Ok(BlockMass {
        n_basis: nb,
        reference,
        reference_inverse,
        volumes,
    })
}

impl BlockMass {
    pub fn block(&self, e: usize) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.n_basis, self.n_basis, &self.reference) * self.volumes[e]
    }

    fn apply_with(&self, matrix: &[f64], scale: impl Fn(f64) -> f64, x: &[f64], y: &mut [f64]) {
        let nb = self.n_basis;
        for (e, (xs, ys)) in x
            .chunks(x.len() / self.volumes.len())
            .zip(y.chunks_mut(x.len() / self.volumes.len()))
            .enumerate()
        {
            let s = scale(self.volumes[e]);
            for (xc, yc) in xs.chunks(nb).zip(ys.chunks_mut(nb)) {
                for i in 0..nb {
                    let row = &matrix[i * nb..(i + 1) * nb];
                    yc[i] = s * row.iter().zip(xc).map(|(a, b)| a * b).sum::<f64>();
                }
            }
        }
    }

    /// y = M x for a full coefficient vector (any number of components).
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.apply_with(&self.reference, |v| v, x, y);
    }

    /// y = M^{-1} x.
    pub fn apply_inverse(&self, x: &[f64], y: &mut [f64]) {
        self.apply_with(&self.reference_inverse, |v| 1.0 / v, x, y);
    }

    pub fn apply_inverse_in_place(&self, x: &mut [f64]) {
        let tmp = x.to_vec();
        self.apply_inverse(&tmp, x);
    }
}

pub type PrescribedFn = Arc<dyn Fn(&[f64; 2], f64) -> State + Send + Sync>;
pub type CustomFn = Arc<dyn Fn(&State, &[f64; 2], &[f64; 2], f64) -> State + Send + Sync>;

/// Rule producing the exterior trace on a boundary face.
#[derive(Clone)]
pub enum GhostRule {
    /// Zero-gradient extrapolation.
    Copy,
    /// Reflect the normal momentum (Euler); identical to `Copy` for scalars.
    Mirror,
    /// Exterior state given as a function of position and time.
    Prescribed(PrescribedFn),
    /// Arbitrary rule of (interior state, normal, position, time).
    Custom(CustomFn),
}

impl fmt::Debug for GhostRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GhostRule::Copy => write!(f, "Copy"),
            GhostRule::Mirror => write!(f, "Mirror"),
            GhostRule::Prescribed(_) => write!(f, "Prescribed(..)"),
            GhostRule::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct GhostPolicy {
    rules: Vec<(BoundaryTag, GhostRule)>,
}

impl GhostPolicy {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers (or replaces) the rule for `tag`.
    pub fn with(mut self, tag: BoundaryTag, rule: GhostRule) -> Self {
        self.rules.retain(|(t, _)| *t != tag);
        self.rules.push((tag, rule));
        self
    }

    pub fn rule(&self, tag: BoundaryTag) -> Option<&GhostRule> {
        self.rules.iter().find(|(t, _)| *t == tag).map(|(_, r)| r)
    }

    /// Outflow copies, walls mirror; everything else must be registered.
    pub fn standard() -> Self {
        GhostPolicy::new()
            .with(BoundaryTag::Outflow, GhostRule::Copy)
            .with(BoundaryTag::ReflectingWall, GhostRule::Mirror)
    }

    pub fn ghost_state(
        &self,
        law: &ConservationLaw,
        tag: BoundaryTag,
        u_in: &State,
        n: &[f64; 2],
        x: &[f64; 2],
        t: f64,
    ) -> Result<State> {
        let rule = self.rule(tag).ok_or(Error::MissingGhostRule(tag))?;
        Ok(match rule {
            GhostRule::Copy => *u_in,
            GhostRule::Mirror => mirror_state(law, u_in, n),
            GhostRule::Prescribed(f) => f(x, t),
            GhostRule::Custom(f) => f(u_in, n, x, t),
        })
    }
}

/// Reflects the normal momentum component of an Euler state.
pub fn mirror_state(law: &ConservationLaw, u: &State, n: &[f64; 2]) -> State {
    let mut out = *u;
    if let LawKind::Euler { .. } = law.kind {
        let d = law.dim;
        let mn: f64 = (0..d).map(|k| u[1 + k] * n[k]).sum();
        for k in 0..d {
            out[1 + k] = u[1 + k] - 2.0 * mn * n[k];
        }
    }
    out
}

/// Precomputed operators for one (mesh, degree, law) combination.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub mesh: Mesh,
    pub elem: ReferenceElement,
    pub law: ConservationLaw,
    pub flux: NumericalFlux,
    pub ghosts: GhostPolicy,
    pub mass: BlockMass,
    /// Physical stiffness matrix, shared by all cells (row-major).
    pub stiffness: Vec<f64>,
    pub hweno: HwenoOperators,
}

impl Discretization {
    pub fn new(
        mesh: Mesh,
        p: usize,
        law: ConservationLaw,
        flux: NumericalFlux,
        ghosts: GhostPolicy,
    ) -> Result<Self> {
        if law.dim != mesh.dim {
            return Err(Error::Config(format!(
                "law is {}D but the mesh is {}D",
                law.dim, mesh.dim
            )));
        }
        if flux == NumericalFlux::Hll && law.gamma().is_none() {
            return Err(Error::Config("HLL flux requires the Euler equations".into()));
        }
        for local in 0..mesh.faces_per_cell() {
            let tag = mesh.boundary.tag(Side::from_local(local));
            if tag != BoundaryTag::Periodic && ghosts.rule(tag).is_none() {
                return Err(Error::MissingGhostRule(tag));
            }
        }
        let elem = ReferenceElement::new(mesh.dim, p);
        let mass = assemble_mass(&mesh, &elem)?;
        let stiffness = physical_stiffness(&elem, &mesh);
        let hweno = HwenoOperators::new(&elem, mesh.spacing, mesh.cells[0].h)?;
        Ok(Discretization {
            mesh,
            elem,
            law,
            flux,
            ghosts,
            mass,
            stiffness,
            hweno,
        })
    }

    pub fn degree(&self) -> usize {
        self.elem.degree
    }

    pub fn n_vars(&self) -> usize {
        self.law.n_vars()
    }

    pub fn zero_field(&self) -> StateField {
        StateField::zeros(self.mesh.n_cells(), self.n_vars(), self.elem.n_basis())
    }

    /// Solution values at the volume quadrature points of cell `e`.
    pub fn quad_states(&self, field: &StateField, e: usize) -> Vec<State> {
        let nb = self.elem.n_basis();
        (0..self.elem.n_quad())
            .map(|q| {
                let phi = &self.elem.values[q * nb..(q + 1) * nb];
                let mut u = [0.0; MAX_VARS];
                for (c, uc) in u.iter_mut().enumerate().take(field.n_vars) {
                    *uc = dot(phi, field.component(e, c));
                }
                u
            })
            .collect()
    }

    fn trace(&self, field: &StateField, e: usize, local: usize, qf: usize) -> State {
        let nb = self.elem.n_basis();
        let phi = &self.elem.face_values[local][qf * nb..(qf + 1) * nb];
        let mut u = [0.0; MAX_VARS];
        for (c, uc) in u.iter_mut().enumerate().take(field.n_vars) {
            *uc = dot(phi, field.component(e, c));
        }
        u
    }

    /// Residual R(U) minus the stabilization term, for the viscosities in
    /// `report` (γ_e ν_e per cell). `out` must have the field's length.
    pub fn residual(
        &self,
        field: &StateField,
        t: f64,
        report: Option<&ViscosityReport>,
        out: &mut [f64],
    ) -> Result<()> {
        let block = field.block_len();
        out.par_chunks_mut(block)
            .enumerate()
            .try_for_each(|(e, r)| {
                self.cell_residual(field, e, t, r).map_err(|err| err.in_cell(e))?;
                if let Some(rep) = report {
                    let coef = rep.gamma[e] * rep.nu[e];
                    if coef != 0.0 {
                        stabilization::subtract_stabilization(&self.stiffness, field, e, coef, r);
                    }
                }
                Ok(())
            })
    }

    /// Bare DG residual of one cell: volume flux integral minus surface flux integral.
    fn cell_residual(&self, field: &StateField, e: usize, t: f64, r: &mut [f64]) -> Result<()> {
        let elem = &self.elem;
        let mesh = &self.mesh;
        let nb = elem.n_basis();
        let m = field.n_vars;
        let dim = mesh.dim;
        let vol = mesh.cells[e].volume;
        let inv_h = [1.0 / mesh.spacing[0], 1.0 / mesh.spacing[1]];
        r.fill(0.0);

        for q in 0..elem.n_quad() {
            let phi = &elem.values[q * nb..(q + 1) * nb];
            let grads = &elem.grads[q * nb..(q + 1) * nb];
            let mut u = [0.0; MAX_VARS];
            for c in 0..m {
                u[c] = dot(phi, field.component(e, c));
            }
            let x = mesh.map_to_physical(e, &elem.quad.points[q]);
            let f = self.law.physical_flux(&u, &x)?;
            let w = elem.quad.weights[q] * vol;
            for c in 0..m {
                let rc = &mut r[c * nb..(c + 1) * nb];
                for j in 0..nb {
                    let mut s = 0.0;
                    for d in 0..dim {
                        s += grads[j][d] * inv_h[d] * f[c][d];
                    }
                    rc[j] += w * s;
                }
            }
        }

        for local in 0..2 * dim {
            let n = Mesh::local_normal(local);
            let measure = mesh.local_face_measure(local);
            let neighbor = mesh.neighbor(e, local);
            let opposite = Side::opposite_local(local);
            for qf in 0..elem.n_face_quad() {
                let u_in = self.trace(field, e, local, qf);
                let x = mesh.map_to_physical(e, &elem.face_points[local][qf]);
                let u_out = match neighbor {
                    Some(nbr) => self.trace(field, nbr, opposite, qf),
                    None => {
                        let tag = mesh.boundary.tag(Side::from_local(local));
                        self.ghosts.ghost_state(&self.law, tag, &u_in, &n, &x, t)?
                    }
                };
                let h = self.law.numerical_flux(self.flux, &u_in, &u_out, &n, &x)?;
                let w = elem.face_quad.weights[qf] * measure;
                let phi = &elem.face_values[local][qf * nb..(qf + 1) * nb];
                for c in 0..m {
                    let rc = &mut r[c * nb..(c + 1) * nb];
                    for j in 0..nb {
                        rc[j] -= w * phi[j] * h[c];
                    }
                }
            }
        }
        Ok(())
    }

    /// Viscosity report for the requested stabilization.
    pub fn viscosity(&self, field: &StateField, stab: &Stabilization) -> Result<ViscosityReport> {
        stabilization::viscosity_report(self, field, stab)
    }

    /// R(U) - s(U), where s is the stabilization term selected by `stab`.
    pub fn dg_rhs(&self, field: &StateField, stab: &Stabilization, t: f64) -> Result<Vec<f64>> {
        let mut out = vec![0.0; field.coeffs.len()];
        match stab {
            Stabilization::None => self.residual(field, t, None, &mut out)?,
            _ => {
                let report = self.viscosity(field, stab)?;
                self.residual(field, t, Some(&report), &mut out)?;
            }
        }
        Ok(out)
    }

    /// dU/dt = M^{-1} (R(U) - s(U)); returns the report used.
    pub fn time_derivative(
        &self,
        field: &StateField,
        stab: &Stabilization,
        t: f64,
        out: &mut [f64],
    ) -> Result<Option<ViscosityReport>> {
        let report = match stab {
            Stabilization::None => None,
            _ => Some(self.viscosity(field, stab)?),
        };
        self.residual(field, t, report.as_ref(), out)?;
        self.mass.apply_inverse_in_place(out);
        Ok(report)
    }

    /// Integral of each component over the domain.
    pub fn total_integral(&self, field: &StateField) -> Vec<f64> {
        let w = self.elem.basis_integrals();
        let mut s = vec![0.0; field.n_vars];
        for e in 0..field.n_cells {
            let vol = self.mesh.cells[e].volume;
            for (c, sc) in s.iter_mut().enumerate() {
                *sc += vol * dot(&w, field.component(e, c));
            }
        }
        s
    }

    /// Cell average of component `c` in cell `e`.
    pub fn cell_average(&self, field: &StateField, e: usize, c: usize) -> f64 {
        dot(&self.elem.basis_integrals(), field.component(e, c))
    }
}

fn physical_stiffness(elem: &ReferenceElement, mesh: &Mesh) -> Vec<f64> {
    let nb = elem.n_basis();
    let vol = mesh.cells[0].volume;
    let inv_h = [1.0 / mesh.spacing[0], 1.0 / mesh.spacing[1]];
    let mut k = vec![0.0; nb * nb];
    for q in 0..elem.n_quad() {
        let g = &elem.grads[q * nb..(q + 1) * nb];
        let w = elem.quad.weights[q] * vol;
        for i in 0..nb {
            for j in 0..nb {
                let mut s = 0.0;
                for d in 0..mesh.dim {
                    s += g[i][d] * g[j][d] * inv_h[d] * inv_h[d];
                }
                k[i * nb + j] += w * s;
            }
        }
    }
    k
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::law::{euler_conserved, Velocity};
    use crate::mesh::{build_structured_mesh, BoundarySpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn advection_disc(n: usize, p: usize) -> Discretization {
        let mesh = build_structured_mesh(&[(0.0, 1.0)], &[n], BoundarySpec::periodic()).unwrap();
        let law = ConservationLaw::new(1, LawKind::LinearAdvection(Velocity::Constant([1.0, 0.0]))).unwrap();
        Discretization::new(mesh, p, law, NumericalFlux::Llf, GhostPolicy::standard()).unwrap()
    }

    fn random_field(d: &Discretization, rng: &mut ChaCha8Rng) -> StateField {
        let mut f = d.zero_field();
        for v in f.coeffs.iter_mut() {
            *v = rng.gen_range(-1.0..1.0);
        }
        f
    }

    #[test]
    fn mass_blocks() {
        let d = advection_disc(2, 1);
        let b = d.mass.block(0);
        assert!((b[(0, 0)] - 0.5 / 3.0).abs() < 1e-15);
        assert!((b[(0, 1)] - 0.5 / 6.0).abs() < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (dim, p) in [(1, 3), (2, 2)] {
            let bounds: Vec<(f64, f64)> = (0..dim).map(|_| (0.0, 1.3)).collect();
            let counts = vec![5; dim];
            let mesh = build_structured_mesh(&bounds, &counts, BoundarySpec::periodic()).unwrap();
            let elem = ReferenceElement::new(dim, p);
            let mass = assemble_mass(&mesh, &elem).unwrap();
            let n = mesh.n_cells() * elem.n_basis();
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let mut y = vec![0.0; n];
            let mut z = vec![0.0; n];
            mass.apply(&x, &mut y);
            mass.apply_inverse(&y, &mut z);
            for (a, b) in x.iter().zip(&z) {
                assert!((a - b).abs() < 1e-12);
            }
            let ones = vec![1.0; n];
            mass.apply(&ones, &mut y);
            let total: f64 = y.iter().sum();
            assert!((total - mesh.domain_measure()).abs() < 1e-12);
        }
    }

    #[test]
    fn ghost_rules() {
        let law = ConservationLaw::new(1, LawKind::Euler { gamma: 1.4 }).unwrap();
        let g = GhostPolicy::standard();
        let u = [1.0, 0.75, 2.78, 0.0];
        let w = g.ghost_state(&law, BoundaryTag::ReflectingWall, &u, &[1.0, 0.0], &[1.0, 0.0], 0.0).unwrap();
        assert_eq!(w, [1.0, -0.75, 2.78, 0.0]);
        let o = g.ghost_state(&law, BoundaryTag::Outflow, &u, &[1.0, 0.0], &[1.0, 0.0], 0.0).unwrap();
        assert_eq!(o, u);
        assert!(matches!(
            g.ghost_state(&law, BoundaryTag::Inflow, &u, &[1.0, 0.0], &[0.0, 0.0], 0.0),
            Err(Error::MissingGhostRule(BoundaryTag::Inflow))
        ));

        // 2D wall keeps density, energy and tangential momentum
        let law2 = ConservationLaw::new(2, LawKind::Euler { gamma: 1.4 }).unwrap();
        let u = euler_conserved(1.3, [0.4, -0.9], 2.0, 1.4, 2);
        let n = [0.6, 0.8];
        let w = mirror_state(&law2, &u, &n);
        assert_eq!(w[0], u[0]);
        assert_eq!(w[3], u[3]);
        let tang = |s: &State| s[1] * -n[1] + s[2] * n[0];
        let norm = |s: &State| s[1] * n[0] + s[2] * n[1];
        assert!((tang(&w) - tang(&u)).abs() < 1e-15);
        assert!((norm(&w) + norm(&u)).abs() < 1e-15);
    }

    #[test]
    fn free_stream_preserved() {
        let c = euler_conserved(0.8, [0.3, -0.2], 1.7, 1.4, 2);
        let const_rule = GhostRule::Prescribed(Arc::new(move |_, _| c));
        for spec in [
            BoundarySpec::periodic(),
            BoundarySpec::uniform(BoundaryTag::Outflow),
            BoundarySpec::uniform(BoundaryTag::Inflow),
        ] {
            let mesh = build_structured_mesh(&[(0.0, 1.0), (0.0, 2.0)], &[4, 3], spec).unwrap();
            let law = ConservationLaw::new(2, LawKind::Euler { gamma: 1.4 }).unwrap();
            let ghosts = GhostPolicy::standard().with(BoundaryTag::Inflow, const_rule.clone());
            for flux in [NumericalFlux::Llf, NumericalFlux::Hll] {
                let d = Discretization::new(mesh.clone(), 2, law, flux, ghosts.clone()).unwrap();
                let mut f = d.zero_field();
                for e in 0..f.n_cells {
                    for k in 0..4 {
                        let nb = f.n_basis;
                        for j in 0..nb {
                            f.block_mut(e)[k * nb + j] = c[k];
                        }
                    }
                }
                for stab in [Stabilization::None, Stabilization::LowOrder] {
                    let r = d.dg_rhs(&f, &stab, 0.0).unwrap();
                    assert!(r.iter().all(|v| v.abs() < 1e-12), "{spec:?} {flux:?}");
                }
            }
        }
    }

    #[test]
    fn conservation_and_linearity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let d = advection_disc(12, 2);
        let u = random_field(&d, &mut rng);
        let v = random_field(&d, &mut rng);
        let ru = d.dg_rhs(&u, &Stabilization::None, 0.0).unwrap();
        let rv = d.dg_rhs(&v, &Stabilization::None, 0.0).unwrap();
        assert!(ru.iter().sum::<f64>().abs() < 1e-12);
        let (a, b) = (0.7, -1.9);
        let mut w = u.clone();
        for (k, x) in w.coeffs.iter_mut().enumerate() {
            *x = a * u.coeffs[k] + b * v.coeffs[k];
        }
        let rw = d.dg_rhs(&w, &Stabilization::None, 0.0).unwrap();
        for k in 0..rw.len() {
            assert!((rw[k] - a * ru[k] - b * rv[k]).abs() < 1e-12);
        }
        // L2 dissipation of the upwind scheme
        let energy: f64 = u.coeffs.iter().zip(&ru).map(|(a, b)| a * b).sum();
        assert!(energy <= 1e-12);
    }

    #[test]
    fn invalid_state_reports_cell() {
        let mesh = build_structured_mesh(&[(0.0, 1.0)], &[4], BoundarySpec::periodic()).unwrap();
        let law = ConservationLaw::new(1, LawKind::Euler { gamma: 1.4 }).unwrap();
        let d = Discretization::new(mesh, 1, law, NumericalFlux::Hll, GhostPolicy::standard()).unwrap();
        let mut f = d.zero_field();
        for e in 0..4 {
            let b = f.block_mut(e);
            b[..2].fill(1.0);
            b[4..6].fill(2.5);
        }
        f.block_mut(2)[0] = -1.0;
        let err = d.dg_rhs(&f, &Stabilization::None, 0.0).unwrap_err();
        assert!(matches!(err, Error::InvalidState { cell: Some(_), .. }), "{err}");
    }

    #[test]
    fn rejects_incompatible_flux_and_missing_rules() {
        let mesh = build_structured_mesh(&[(0.0, 1.0)], &[4], BoundarySpec::uniform(BoundaryTag::Inflow)).unwrap();
        let law = ConservationLaw::new(1, LawKind::Burgers).unwrap();
        assert!(Discretization::new(mesh.clone(), 1, law, NumericalFlux::Hll, GhostPolicy::standard()).is_err());
        assert!(matches!(
            Discretization::new(mesh, 1, law, NumericalFlux::Llf, GhostPolicy::standard()),
            Err(Error::MissingGhostRule(BoundaryTag::Inflow))
        ));
    }
}
