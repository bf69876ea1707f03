//! Benchmark problems: domains, initial data, boundary treatment, final
//! times and exact solutions where one is known.

pub mod riemann;

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::basis::ReferenceElement;
use crate::dg::{mirror_state, GhostPolicy, GhostRule, StateField};
use crate::error::{Error, Result};
use crate::law::{euler_conserved, ConservationLaw, LawKind, State, Velocity, MAX_VARS};
use crate::mesh::{BoundarySpec, BoundaryTag, Mesh};

use riemann::{Primitive, RiemannSolution};

pub type InitialFn = Arc<dyn Fn(&[f64; 2]) -> State + Send + Sync>;

pub const BENCHMARKS: [&str; 11] = [
    "advect_smooth",
    "advect_composite",
    "burgers_sine",
    "solid_body_rotation",
    "kpp",
    "sod",
    "sod_modified",
    "lax",
    "shu_osher",
    "blast_wave",
    "double_mach",
];

const GAMMA: f64 = 1.4;

/// Initialization of the DG coefficients from pointwise data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitialData {
    /// Nodal interpolation; keeps discontinuous data within its bounds.
    Interpolate,
    /// L² projection; used for the smooth convergence problems.
    Project,
}

/// How the exact solution of a benchmark is obtained.
#[derive(Debug, Clone, Copy)]
pub enum ExactKind {
    /// Transport of the initial data along the (periodic) velocity field.
    Transport(Velocity),
    /// Burgers characteristics u = u0(x - u t), valid before shocks form.
    BurgersCharacteristics { t_critical: f64 },
    /// Self-similar Riemann solution with the discontinuity at `x0`.
    Riemann { left: Primitive, right: Primitive, x0: f64 },
}

#[derive(Clone)]
pub struct BenchmarkProblem {
    pub name: String,
    pub law: ConservationLaw,
    pub bounds: Vec<(f64, f64)>,
    pub counts: Vec<usize>,
    pub boundary: BoundarySpec,
    pub ghosts: GhostPolicy,
    pub t_final: f64,
    pub initial: InitialFn,
    pub exact: Option<ExactKind>,
    /// Default way of putting the initial data into the finite element space.
    pub initial_data: InitialData,
}

impl fmt::Debug for BenchmarkProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BenchmarkProblem")
            .field("name", &self.name)
            .field("law", &self.law)
            .field("bounds", &self.bounds)
            .field("counts", &self.counts)
            .field("boundary", &self.boundary)
            .field("t_final", &self.t_final)
            .field("exact", &self.exact)
            .field("initial_data", &self.initial_data)
            .finish()
    }
}

impl BenchmarkProblem {
    pub fn dim(&self) -> usize {
        self.law.dim
    }

    pub fn initial_state(&self, x: &[f64; 2]) -> State {
        (self.initial)(x)
    }
}

fn scalar(v: f64) -> State {
    let mut s = [0.0; MAX_VARS];
    s[0] = v;
    s
}

fn euler1(p: Primitive) -> State {
    euler_conserved(p.rho, [p.u, 0.0], p.p, GAMMA, 1)
}

fn constant_rule(state: State) -> GhostRule {
    GhostRule::Prescribed(Arc::new(move |_, _| state))
}

pub fn advect_composite_profile(x: f64) -> f64 {
    if (0.15..=0.45).contains(&x) {
        1.0
    } else if x > 0.55 && x < 0.85 {
        (10.0 * PI / 3.0 * (x - 0.7)).cos().powi(2)
    } else {
        0.0
    }
}

pub fn solid_body_profile(x: f64, y: f64) -> f64 {
    let r = |cx: f64, cy: f64| ((x - cx).powi(2) + (y - cy).powi(2)).sqrt();
    let hump = r(0.25, 0.5);
    let cone = r(0.5, 0.25);
    let cylinder = r(0.5, 0.75);
    if hump <= 0.15 {
        0.25 + 0.25 * (PI * hump / 0.15).cos()
    } else if cone <= 0.15 {
        1.0 - cone / 0.15
    } else if cylinder <= 0.15 && ((x - 0.5).abs() >= 0.025 || y >= 0.85) {
        1.0
    } else {
        0.0
    }
}

fn riemann_tube(
    name: &str,
    left: Primitive,
    right: Primitive,
    x0: f64,
    bounds: (f64, f64),
    counts: usize,
    boundary: BoundarySpec,
    ghosts: GhostPolicy,
    t_final: f64,
) -> BenchmarkProblem {
    BenchmarkProblem {
        name: name.into(),
        law: ConservationLaw::new(1, LawKind::Euler { gamma: GAMMA }).expect("1D Euler"),
        bounds: vec![bounds],
        counts: vec![counts],
        boundary,
        ghosts,
        t_final,
        initial: Arc::new(move |x| if x[0] < x0 { euler1(left) } else { euler1(right) }),
        exact: Some(ExactKind::Riemann { left, right, x0 }),
        initial_data: InitialData::Interpolate,
    }
}

/// Double Mach reflection: position of the incident shock at height y and time t.
pub fn double_mach_shock_x(y: f64, t: f64) -> f64 {
    1.0 / 6.0 + (y + 20.0 * t) / 3f64.sqrt()
}

pub fn double_mach_states() -> (State, State) {
    let angle = PI / 6.0;
    let post = euler_conserved(8.0, [8.25 * angle.cos(), -8.25 * angle.sin()], 116.5, GAMMA, 2);
    let pre = euler_conserved(1.4, [0.0, 0.0], 1.0, GAMMA, 2);
    (post, pre)
}

pub fn get_benchmark(name: &str) -> Result<BenchmarkProblem> {
    let periodic1 = |law: LawKind, t_final: f64, counts: usize, init: InitialFn, exact: Option<ExactKind>| {
        BenchmarkProblem {
            name: name.into(),
            law: ConservationLaw::new(1, law).expect("1D law"),
            bounds: vec![(0.0, 1.0)],
            counts: vec![counts],
            boundary: BoundarySpec::periodic(),
            ghosts: GhostPolicy::standard(),
            t_final,
            initial: init,
            exact,
            initial_data: if matches!(name, "advect_smooth" | "burgers_sine") { InitialData::Project } else { InitialData::Interpolate },
        }
    };
    let unit = Velocity::Constant([1.0, 0.0]);
    let walls = BoundarySpec::uniform(BoundaryTag::ReflectingWall);
    Ok(match name {
        "advect_smooth" => periodic1(
            LawKind::LinearAdvection(unit),
            1.0,
            64,
            Arc::new(|x| scalar((2.0 * PI * (x[0] - 0.5)).cos())),
            Some(ExactKind::Transport(unit)),
        ),
        "advect_composite" => periodic1(
            LawKind::LinearAdvection(unit),
            1.0,
            128,
            Arc::new(|x| scalar(advect_composite_profile(x[0]))),
            Some(ExactKind::Transport(unit)),
        ),
        "burgers_sine" => periodic1(
            LawKind::Burgers,
            0.1,
            64,
            Arc::new(|x| scalar((2.0 * PI * x[0]).sin())),
            Some(ExactKind::BurgersCharacteristics { t_critical: 1.0 / (2.0 * PI) }),
        ),
        "solid_body_rotation" => {
            let v = Velocity::Rotation { center: [0.5, 0.5], omega: 2.0 * PI };
            BenchmarkProblem {
                name: name.into(),
                law: ConservationLaw::new(2, LawKind::LinearAdvection(v))?,
                bounds: vec![(0.0, 1.0), (0.0, 1.0)],
                counts: vec![128, 128],
                boundary: BoundarySpec::uniform(BoundaryTag::Inflow),
                ghosts: GhostPolicy::standard().with(BoundaryTag::Inflow, constant_rule(scalar(0.0))),
                t_final: 1.0,
                initial: Arc::new(|x| scalar(solid_body_profile(x[0], x[1]))),
                exact: Some(ExactKind::Transport(v)),
                initial_data: InitialData::Interpolate,
            }
        }
        "kpp" => BenchmarkProblem {
            name: name.into(),
            law: ConservationLaw::new(2, LawKind::Kpp)?,
            bounds: vec![(-2.0, 2.0), (-2.5, 1.5)],
            counts: vec![128, 128],
            boundary: BoundarySpec::uniform(BoundaryTag::Inflow),
            ghosts: GhostPolicy::standard().with(BoundaryTag::Inflow, constant_rule(scalar(PI / 4.0))),
            t_final: 1.0,
            initial: Arc::new(|x| {
                scalar(if (x[0] * x[0] + x[1] * x[1]).sqrt() <= 1.0 { 3.5 * PI } else { PI / 4.0 })
            }),
            exact: None,
            initial_data: InitialData::Interpolate,
        },
        "sod" => riemann_tube(
            name,
            Primitive::new(1.0, 0.0, 1.0),
            Primitive::new(0.125, 0.0, 0.1),
            0.5,
            (0.0, 1.0),
            128,
            walls,
            GhostPolicy::standard(),
            0.231,
        ),
        "sod_modified" => {
            let left = Primitive::new(1.0, 0.75, 1.0);
            riemann_tube(
                name,
                left,
                Primitive::new(0.125, 0.0, 0.1),
                0.5,
                (0.0, 1.0),
                128,
                BoundarySpec([BoundaryTag::Inflow, BoundaryTag::Outflow, BoundaryTag::Outflow, BoundaryTag::Outflow]),
                GhostPolicy::standard().with(BoundaryTag::Inflow, constant_rule(euler1(left))),
                0.2,
            )
        }
        "lax" => riemann_tube(
            name,
            Primitive::new(0.445, 0.698, 3.528),
            Primitive::new(0.5, 0.0, 0.571),
            1.0,
            (0.0, 2.0),
            512,
            BoundarySpec::uniform(BoundaryTag::Outflow),
            GhostPolicy::standard(),
            0.14,
        ),
        "shu_osher" => {
            let left = Primitive::new(3.857143, 2.629369, 10.3333);
            BenchmarkProblem {
                name: name.into(),
                law: ConservationLaw::new(1, LawKind::Euler { gamma: GAMMA })?,
                bounds: vec![(-5.0, 5.0)],
                counts: vec![512],
                boundary: BoundarySpec([
                    BoundaryTag::Inflow,
                    BoundaryTag::ReflectingWall,
                    BoundaryTag::Outflow,
                    BoundaryTag::Outflow,
                ]),
                ghosts: GhostPolicy::standard().with(BoundaryTag::Inflow, constant_rule(euler1(left))),
                t_final: 1.8,
                initial: Arc::new(move |x| {
                    if x[0] < -4.0 {
                        euler1(left)
                    } else {
                        euler1(Primitive::new(1.0 + 0.2 * (5.0 * x[0]).sin(), 0.0, 1.0))
                    }
                }),
                exact: None,
                initial_data: InitialData::Interpolate,
            }
        }
        "blast_wave" => BenchmarkProblem {
            name: name.into(),
            law: ConservationLaw::new(1, LawKind::Euler { gamma: GAMMA })?,
            bounds: vec![(0.0, 1.0)],
            counts: vec![512],
            boundary: walls,
            ghosts: GhostPolicy::standard(),
            t_final: 0.038,
            initial: Arc::new(|x| {
                let p = if x[0] < 0.1 {
                    1000.0
                } else if x[0] < 0.9 {
                    0.1
                } else {
                    100.0
                };
                euler1(Primitive::new(1.0, 0.0, p))
            }),
            exact: None,
            initial_data: InitialData::Interpolate,
        },
        "double_mach" => {
            let (post, pre) = double_mach_states();
            let law = ConservationLaw::new(2, LawKind::Euler { gamma: GAMMA })?;
            let dirichlet = GhostRule::Prescribed(Arc::new(move |x, t| {
                if x[0] < double_mach_shock_x(1.0, t) {
                    post
                } else {
                    pre
                }
            }));
            // bottom: post-shock ahead of the wedge, reflecting wall from x = 1/6 on
            let bottom = GhostRule::Custom(Arc::new(move |u, n, x, _| {
                if x[0] < 1.0 / 6.0 {
                    post
                } else {
                    mirror_state(&law, u, n)
                }
            }));
            BenchmarkProblem {
                name: name.into(),
                law,
                bounds: vec![(0.0, 4.0), (0.0, 1.0)],
                counts: vec![192, 48],
                boundary: BoundarySpec([
                    BoundaryTag::TimeDependentDirichlet,
                    BoundaryTag::Outflow,
                    BoundaryTag::ReflectingWall,
                    BoundaryTag::TimeDependentDirichlet,
                ]),
                ghosts: GhostPolicy::standard()
                    .with(BoundaryTag::TimeDependentDirichlet, dirichlet)
                    .with(BoundaryTag::ReflectingWall, bottom),
                t_final: 0.2,
                initial: Arc::new(move |x| if x[0] < double_mach_shock_x(x[1], 0.0) { post } else { pre }),
                exact: None,
                initial_data: InitialData::Interpolate,
            }
        }
        other => return Err(Error::UnknownBenchmark(other.to_string())),
    })
}

/// Initial coefficients by the requested method.
pub fn initial_condition(problem: &BenchmarkProblem, mesh: &Mesh, elem: &ReferenceElement, how: InitialData) -> StateField {
    match how {
        InitialData::Interpolate => interpolate_initial_condition(problem, mesh, elem),
        InitialData::Project => project_initial_condition(problem, mesh, elem),
    }
}

/// Nodal interpolation of the initial data at the Lagrange nodes of each cell.
pub fn interpolate_initial_condition(problem: &BenchmarkProblem, mesh: &Mesh, elem: &ReferenceElement) -> StateField {
    let m = problem.law.n_vars();
    let nb = elem.n_basis();
    let mut field = StateField::zeros(mesh.n_cells(), m, nb);
    for e in 0..mesh.n_cells() {
        let block = field.block_mut(e);
        for (j, xi) in elem.nodes.iter().enumerate() {
            let u = problem.initial_state(&mesh.map_to_physical(e, xi));
            for c in 0..m {
                block[c * nb + j] = u[c];
            }
        }
    }
    field
}

/// L² projection of the initial data onto Q_p, with (p+3) Gauss points per axis.
pub fn project_initial_condition(problem: &BenchmarkProblem, mesh: &Mesh, elem: &ReferenceElement) -> StateField {
    let m = problem.law.n_vars();
    let nb = elem.n_basis();
    let rule = crate::basis::gauss_rule(mesh.dim, elem.degree + 3);
    let tables: Vec<Vec<f64>> = rule.points.iter().map(|x| elem.eval(x).0).collect();
    let mass = nalgebra::DMatrix::from_row_slice(nb, nb, &elem.reference_mass());
    let lu = mass.lu();
    let mut field = StateField::zeros(mesh.n_cells(), m, nb);
    for e in 0..mesh.n_cells() {
        let mut rhs = nalgebra::DMatrix::<f64>::zeros(nb, m);
        for (q, xi) in rule.points.iter().enumerate() {
            let u = problem.initial_state(&mesh.map_to_physical(e, xi));
            for j in 0..nb {
                for c in 0..m {
                    rhs[(j, c)] += rule.weights[q] * tables[q][j] * u[c];
                }
            }
        }
        let sol = lu.solve(&rhs).expect("reference mass matrix is SPD");
        let block = field.block_mut(e);
        for c in 0..m {
            for j in 0..nb {
                block[c * nb + j] = sol[(j, c)];
            }
        }
    }
    field
}

fn wrap(x: f64, lo: f64, hi: f64) -> f64 {
    let len = hi - lo;
    lo + (x - lo).rem_euclid(len)
}

/// Solves u = sin(2π(x - u t)) by Newton's method safeguarded with bisection.
pub fn burgers_sine_exact(x: f64, t: f64) -> Result<f64> {
    let tc = 1.0 / (2.0 * PI);
    if t >= tc {
        return Err(Error::ExactUnavailable(format!("Burgers solution at t = {t} >= t_c = {tc}")));
    }
    let k = 2.0 * PI;
    let g = |u: f64| u - (k * (x - u * t)).sin();
    let dg = |u: f64| 1.0 + k * t * (k * (x - u * t)).cos();
    let (mut lo, mut hi) = (-1.0, 1.0);
    let mut u = (k * x).sin();
    for _ in 0..200 {
        let r = g(u);
        if r.abs() < 1e-14 {
            return Ok(u);
        }
        if r > 0.0 {
            hi = u;
        } else {
            lo = u;
        }
        let mut next = u - r / dg(u);
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - u).abs() < 1e-16 {
            return Ok(next);
        }
        u = next;
    }
    if g(u).abs() < 1e-12 {
        Ok(u)
    } else {
        Err(Error::NoConvergence(format!("Burgers characteristics at x = {x}, t = {t}")))
    }
}

/// Exact state at (x, t), or `ExactUnavailable`.
pub fn exact_solution(problem: &BenchmarkProblem, x: &[f64; 2], t: f64) -> Result<State> {
    match problem.exact {
        None => Err(Error::ExactUnavailable(format!("no closed form for {}", problem.name))),
        Some(ExactKind::Transport(Velocity::Constant(v))) => {
            let mut y = *x;
            for (d, b) in problem.bounds.iter().enumerate() {
                y[d] = wrap(x[d] - v[d] * t, b.0, b.1);
            }
            Ok(problem.initial_state(&y))
        }
        Some(ExactKind::Transport(Velocity::Rotation { center, omega })) => {
            let (s, c) = (-omega * t).sin_cos();
            let (dx, dy) = (x[0] - center[0], x[1] - center[1]);
            Ok(problem.initial_state(&[center[0] + c * dx - s * dy, center[1] + s * dx + c * dy]))
        }
        Some(ExactKind::BurgersCharacteristics { .. }) => {
            let xw = wrap(x[0], problem.bounds[0].0, problem.bounds[0].1);
            Ok(scalar(burgers_sine_exact(xw, t)?))
        }
        Some(ExactKind::Riemann { left, right, x0 }) => {
            let p = if t <= 0.0 {
                if x[0] < x0 {
                    left
                } else {
                    right
                }
            } else {
                RiemannSolution::solve(left, right, GAMMA)?.sample((x[0] - x0) / t)
            };
            Ok(euler1(p))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::build_structured_mesh;

    #[test]
    fn catalog_is_complete() {
        for name in BENCHMARKS {
            let b = get_benchmark(name).unwrap();
            assert_eq!(b.name, name);
            assert!(b.t_final > 0.0);
            assert_eq!(b.bounds.len(), b.dim());
            // initial data finite on a grid over the closed domain
            let n = 13;
            for i in 0..=n {
                for j in 0..=(if b.dim() == 2 { n } else { 0 }) {
                    let mut x = [0.0; 2];
                    x[0] = b.bounds[0].0 + (b.bounds[0].1 - b.bounds[0].0) * i as f64 / n as f64;
                    if b.dim() == 2 {
                        x[1] = b.bounds[1].0 + (b.bounds[1].1 - b.bounds[1].0) * j as f64 / n as f64;
                    }
                    let u = b.initial_state(&x);
                    assert!(u.iter().all(|v| v.is_finite()));
                    if let LawKind::Euler { .. } = b.law.kind {
                        b.law.validate(&u).unwrap();
                    }
                }
            }
            let mesh = build_structured_mesh(&b.bounds, &[4, 4][..b.dim()], b.boundary).unwrap();
            crate::dg::Discretization::new(mesh, 1, b.law, b.law.default_flux(), b.ghosts.clone()).unwrap();
        }
        assert!(matches!(get_benchmark("nope"), Err(Error::UnknownBenchmark(_))));
    }

    #[test]
    fn paper_setup_values() {
        assert_eq!(get_benchmark("sod").unwrap().t_final, 0.231);
        let kpp = get_benchmark("kpp").unwrap();
        assert!((kpp.initial_state(&[0.0, 0.0])[0] - 10.9956).abs() < 1e-4);
        assert!((kpp.initial_state(&[1.5, 0.0])[0] - PI / 4.0).abs() < 1e-15);
        let blast = get_benchmark("blast_wave").unwrap();
        let u = blast.initial_state(&[0.05, 0.0]);
        assert!((crate::law::pressure(&u[..3], 1.4).unwrap() - 1000.0).abs() < 1e-9);
        let dmr = get_benchmark("double_mach").unwrap();
        let mesh = build_structured_mesh(&dmr.bounds, &[192, 48], dmr.boundary).unwrap();
        assert!((mesh.cells[0].volume - 4.0 / (192.0 * 48.0)).abs() < 1e-15);
    }

    #[test]
    fn double_mach_boundaries() {
        let dmr = get_benchmark("double_mach").unwrap();
        let (post, pre) = double_mach_states();
        let t = 0.05;
        let xs = double_mach_shock_x(1.0, t);
        let u = pre;
        let top = [0.0, 1.0];
        let g = |x: f64| dmr.ghosts.ghost_state(&dmr.law, BoundaryTag::TimeDependentDirichlet, &u, &top, &[x, 1.0], t).unwrap();
        assert_eq!(g(xs - 1e-9), post);
        assert_eq!(g(xs + 1e-9), pre);
        let down = [0.0, -1.0];
        let b = |x: f64, u: &State| dmr.ghosts.ghost_state(&dmr.law, BoundaryTag::ReflectingWall, u, &down, &[x, 0.0], t).unwrap();
        assert_eq!(b(0.1, &pre), post);
        let inside = euler_conserved(2.0, [0.3, -0.4], 3.0, 1.4, 2);
        let m = b(1.0, &inside);
        assert_eq!(m[0], inside[0]);
        assert_eq!(m[1], inside[1]);
        assert_eq!(m[2], -inside[2]);
        assert_eq!(m[3], inside[3]);
    }

    #[test]
    fn projection() {
        let b = get_benchmark("sod").unwrap();
        let mesh = build_structured_mesh(&[(0.0, 0.4)], &[5], BoundarySpec::periodic()).unwrap();
        let elem = ReferenceElement::new(1, 2);
        let f = project_initial_condition(&b, &mesh, &elem);
        assert!(f.coeffs.chunks(3).all(|c| c.iter().all(|v| (v - c[0]).abs() < 1e-13)));

        // cell averages of the smooth profile against the antiderivative
        let b = get_benchmark("advect_smooth").unwrap();
        let mesh = build_structured_mesh(&[(0.0, 1.0)], &[16], BoundarySpec::periodic()).unwrap();
        let h = 1.0 / 16.0;
        let anti = |x: f64| (2.0 * PI * (x - 0.5)).sin() / (2.0 * PI);
        for p in 1..=3 {
            let elem = ReferenceElement::new(1, p);
            let w = elem.basis_integrals();
            let f = project_initial_condition(&b, &mesh, &elem);
            for e in 0..16 {
                let avg: f64 = w.iter().zip(f.component(e, 0)).map(|(a, b)| a * b).sum();
                let exact = (anti((e + 1) as f64 * h) - anti(e as f64 * h)) / h;
                // (p+3)-point Gauss is exact to degree 2p+5
                assert!((avg - exact).abs() < 1e-9, "p={p} e={e}");
            }
        }

        // nodal interpolation hits the data at the nodes
        let kpp = get_benchmark("kpp").unwrap();
        let mesh = build_structured_mesh(&kpp.bounds, &[8, 8], kpp.boundary).unwrap();
        let elem = ReferenceElement::new(2, 1);
        let f = interpolate_initial_condition(&kpp, &mesh, &elem);
        for e in 0..mesh.n_cells() {
            for (j, xi) in elem.nodes.iter().enumerate() {
                let x = mesh.map_to_physical(e, xi);
                assert_eq!(f.component(e, 0)[j], kpp.initial_state(&x)[0]);
            }
        }
    }

    #[test]
    fn projection_reproduces_polynomials() {
        // a Q_2 polynomial is its own projection
        let mut b = get_benchmark("kpp").unwrap();
        let poly = |x: &[f64; 2]| 1.0 + x[0] - 2.0 * x[1] + 0.5 * x[0] * x[0] * x[1] * x[1];
        b.initial = Arc::new(move |x| {
            let mut s = [0.0; MAX_VARS];
            s[0] = poly(x);
            s
        });
        let mesh = build_structured_mesh(&b.bounds, &[3, 4], b.boundary).unwrap();
        let elem = ReferenceElement::new(2, 2);
        let f = project_initial_condition(&b, &mesh, &elem);
        for e in 0..mesh.n_cells() {
            for (j, xi) in elem.nodes.iter().enumerate() {
                let x = mesh.map_to_physical(e, xi);
                assert!((f.component(e, 0)[j] - poly(&x)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn exact_solutions() {
        let b = get_benchmark("advect_smooth").unwrap();
        for x in [0.0, 0.13, 0.5, 0.99] {
            let e = exact_solution(&b, &[x, 0.0], 1.0).unwrap()[0];
            assert!((e - b.initial_state(&[x, 0.0])[0]).abs() < 1e-12);
        }
        let sbr = get_benchmark("solid_body_rotation").unwrap();
        for p in [[0.25, 0.5], [0.3, 0.42], [0.5, 0.8]] {
            let e = exact_solution(&sbr, &p, 1.0).unwrap()[0];
            assert!((e - solid_body_profile(p[0], p[1])).abs() < 1e-12);
        }
        // quarter turn moves the hump centre (0.25, 0.5) to (0.5, 0.25)
        assert!((exact_solution(&sbr, &[0.5, 0.25], 0.25).unwrap()[0] - 0.5).abs() < 1e-12);

        let bu = get_benchmark("burgers_sine").unwrap();
        assert!(exact_solution(&bu, &[0.5, 0.0], 0.1).unwrap()[0].abs() < 1e-14);
        for x in [0.0, 0.1, 0.37, 0.49, 0.51, 0.8] {
            let u = burgers_sine_exact(x, 0.15).unwrap();
            assert!((u - (2.0 * PI * (x - u * 0.15)).sin()).abs() < 1e-12);
        }
        assert!(matches!(burgers_sine_exact(0.3, 0.2), Err(Error::ExactUnavailable(_))));

        let sod = get_benchmark("sod").unwrap();
        let far = exact_solution(&sod, &[0.01, 0.0], 0.1).unwrap();
        assert_eq!(far[0], 1.0);
        assert!(matches!(exact_solution(&get_benchmark("kpp").unwrap(), &[0.0; 2], 0.1), Err(Error::ExactUnavailable(_))));
    }
}
