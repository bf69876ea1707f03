//! Nodal Lagrange bases on [0,1]^dim and Gauss-Legendre quadrature.
//!
//! Basis functions are tensor products of 1D Lagrange polynomials through
//! equispaced nodes. Node `j` of a 2D element sits at
//! `(nodes[j % (p+1)], nodes[j / (p+1)])`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::mesh::Mesh;

#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub points: Vec<[f64; 2]>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let pk = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = pk;
            }
            // p1 = P_n(z), p0 = P_{n-1}(z)
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// `n`-point Gauss rule on [0,1].
pub fn gauss_rule_1d(n: usize) -> QuadratureRule {
    assert!(n >= 1, "quadrature needs at least one point");
    let (x, w) = gauss_legendre(n);
    QuadratureRule {
        points: x.iter().map(|&t| [0.5 * (t + 1.0), 0.0]).collect(),
        weights: w.iter().map(|&v| 0.5 * v).collect(),
    }
}

/// Tensor-product Gauss rule on [0,1]^dim with `n` points per axis; exact for
/// polynomials of degree `2n - 1` in each variable.
pub fn gauss_rule(dim: usize, n: usize) -> QuadratureRule {
    let line = gauss_rule_1d(n);
    match dim {
        1 => line,
        2 => {
            let mut points = Vec::with_capacity(n * n);
            let mut weights = Vec::with_capacity(n * n);
            for iy in 0..n {
                for ix in 0..n {
                    points.push([line.points[ix][0], line.points[iy][0]]);
                    weights.push(line.weights[ix] * line.weights[iy]);
                }
            }
            QuadratureRule { points, weights }
        }
        _ => panic!("dimension {dim} not supported"),
    }
}

/// Lagrange polynomials through equispaced nodes on [0,1], stored in monomial form.
#[derive(Debug, Clone)]
pub struct Lagrange1d {
    pub nodes: Vec<f64>,
    coeffs: Vec<Vec<f64>>,
}

impl Lagrange1d {
    pub fn equispaced(p: usize) -> Self {
        let nodes: Vec<f64> = if p == 0 {
            vec![0.5]
        } else {
            (0..=p).map(|i| i as f64 / p as f64).collect()
        };
        let coeffs = (0..=p)
            .map(|j| {
                let mut c = vec![1.0];
                let mut denom = 1.0;
                for m in 0..=p {
                    if m == j {
                        continue;
                    }
                    // multiply by (x - x_m)
                    let mut next = vec![0.0; c.len() + 1];
                    for (k, &ck) in c.iter().enumerate() {
                        next[k + 1] += ck;
                        next[k] -= nodes[m] * ck;
                    }
                    c = next;
                    denom *= nodes[j] - nodes[m];
                }
                c.iter().map(|v| v / denom).collect()
            })
            .collect();
        Lagrange1d { nodes, coeffs }
    }

    pub fn degree(&self) -> usize {
        self.nodes.len() - 1
    }

    /// `order`-th derivative of basis function `j` at `x`.
    pub fn derivative(&self, j: usize, order: usize, x: f64) -> f64 {
        let c = &self.coeffs[j];
        let mut acc = 0.0;
        for k in (order..c.len()).rev() {
            let mut factor = 1.0;
            for r in 0..order {
                factor *= (k - r) as f64;
            }
            acc = acc * x + factor * c[k];
        }
        acc
    }

    pub fn value(&self, j: usize, x: f64) -> f64 {
        self.derivative(j, 0, x)
    }
}

/// Degree-p tensor-product Lagrange element on [0,1]^dim with tabulated
/// values at the (p+1)^dim Gauss points and at face Gauss points.
#[derive(Debug, Clone)]
pub struct ReferenceElement {
    pub dim: usize,
    pub degree: usize,
    pub line: Lagrange1d,
    pub nodes: Vec<[f64; 2]>,
    pub quad: QuadratureRule,
    /// values[q * n_basis + j] = phi_j(x_q)
    pub values: Vec<f64>,
    /// grads[q * n_basis + j] = reference gradient of phi_j at x_q
    pub grads: Vec<[f64; 2]>,
    /// Gauss rule along a face (a single point of weight 1 in 1D).
    pub face_quad: QuadratureRule,
    /// face_values[f][qf * n_basis + j]: phi_j at face point qf of local face f
    pub face_values: Vec<Vec<f64>>,
    /// Reference coordinates of the face points, per local face.
    pub face_points: Vec<Vec<[f64; 2]>>,
}

impl ReferenceElement {
    /// Element of degree `p` with the default (p+1)-point Gauss rule.
    pub fn new(dim: usize, p: usize) -> Self {
        Self::with_quadrature(dim, p, p + 1)
    }

    pub fn with_quadrature(dim: usize, p: usize, nq: usize) -> Self {
        assert!((1..=2).contains(&dim), "dimension {dim} not supported");
        let line = Lagrange1d::equispaced(p);
        let n1 = p + 1;
        let nodes: Vec<[f64; 2]> = if dim == 1 {
            line.nodes.iter().map(|&x| [x, 0.0]).collect()
        } else {
            (0..n1 * n1)
                .map(|j| [line.nodes[j % n1], line.nodes[j / n1]])
                .collect()
        };
        let quad = gauss_rule(dim, nq);
        let nb = nodes.len();
        let mut values = Vec::with_capacity(quad.len() * nb);
        let mut grads = Vec::with_capacity(quad.len() * nb);
        let mut elem = ReferenceElement {
            dim,
            degree: p,
            line,
            nodes,
            quad: quad.clone(),
            values: vec![],
            grads: vec![],
            face_quad: QuadratureRule { points: vec![], weights: vec![] },
            face_values: vec![],
            face_points: vec![],
        };
        for x in &quad.points {
            let (v, g) = elem.eval(x);
            values.extend(v);
            grads.extend(g);
        }
        elem.values = values;
        elem.grads = grads;

        let face_quad = if dim == 1 {
            QuadratureRule { points: vec![[0.0, 0.0]], weights: vec![1.0] }
        } else {
            gauss_rule_1d(nq)
        };
        for local in 0..2 * dim {
            let pts: Vec<[f64; 2]> = face_quad
                .points
                .iter()
                .map(|s| face_point(dim, local, s[0]))
                .collect();
            let mut fv = Vec::with_capacity(pts.len() * nb);
            for x in &pts {
                fv.extend(elem.eval(x).0);
            }
            elem.face_values.push(fv);
            elem.face_points.push(pts);
        }
        elem.face_quad = face_quad;
        elem
    }

    pub fn n_basis(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_quad(&self) -> usize {
        self.quad.len()
    }

    pub fn n_face_quad(&self) -> usize {
        self.face_quad.len()
    }

    /// Basis values and reference gradients at any point (no range check,
    /// used for extrapolation onto neighbouring cells).
    pub fn eval(&self, x: &[f64; 2]) -> (Vec<f64>, Vec<[f64; 2]>) {
        let n1 = self.degree + 1;
        if self.dim == 1 {
            let v = (0..n1).map(|j| self.line.value(j, x[0])).collect();
            let g = (0..n1).map(|j| [self.line.derivative(j, 1, x[0]), 0.0]).collect();
            (v, g)
        } else {
            let mut v = Vec::with_capacity(n1 * n1);
            let mut g = Vec::with_capacity(n1 * n1);
            for j in 0..n1 * n1 {
                let (a, b) = (j % n1, j / n1);
                let (la, lb) = (self.line.value(a, x[0]), self.line.value(b, x[1]));
                v.push(la * lb);
                g.push([
                    self.line.derivative(a, 1, x[0]) * lb,
                    la * self.line.derivative(b, 1, x[1]),
                ]);
            }
            (v, g)
        }
    }

    /// Mixed reference derivative D^k phi_j at `x`, with k = (kx, ky).
    pub fn eval_derivative(&self, j: usize, k: [usize; 2], x: &[f64; 2]) -> f64 {
        let n1 = self.degree + 1;
        if self.dim == 1 {
            if k[1] > 0 {
                return 0.0;
            }
            self.line.derivative(j, k[0], x[0])
        } else {
            self.line.derivative(j % n1, k[0], x[0]) * self.line.derivative(j / n1, k[1], x[1])
        }
    }

    /// Multi-indices k with 1 <= |k| <= p.
    pub fn derivative_multi_indices(&self) -> Vec<[usize; 2]> {
        let p = self.degree;
        let mut out = Vec::new();
        for total in 1..=p {
            if self.dim == 1 {
                out.push([total, 0]);
            } else {
                for kx in (0..=total).rev() {
                    out.push([kx, total - kx]);
                }
            }
        }
        out
    }

    /// Mass matrix on the reference element (row-major, n_basis^2).
    pub fn reference_mass(&self) -> Vec<f64> {
        let nb = self.n_basis();
        let mut m = vec![0.0; nb * nb];
        for (q, w) in self.quad.weights.iter().enumerate() {
            let v = &self.values[q * nb..(q + 1) * nb];
            for i in 0..nb {
                for j in 0..nb {
                    m[i * nb + j] += w * v[i] * v[j];
                }
            }
        }
        m
    }

    /// Integrals of the basis functions over the reference element.
    pub fn basis_integrals(&self) -> Vec<f64> {
        let nb = self.n_basis();
        let mut s = vec![0.0; nb];
        for (q, w) in self.quad.weights.iter().enumerate() {
            for j in 0..nb {
                s[j] += w * self.values[q * nb + j];
            }
        }
        s
    }

    /// Evaluates the polynomial with nodal coefficients `coeffs` at `x`.
    pub fn evaluate(&self, coeffs: &[f64], x: &[f64; 2]) -> f64 {
        self.eval(x).0.iter().zip(coeffs).map(|(a, b)| a * b).sum()
    }
}

/// Reference coordinates of the point at parameter `s` on local face `local`.
pub fn face_point(dim: usize, local: usize, s: f64) -> [f64; 2] {
    if dim == 1 {
        return [if local == 0 { 0.0 } else { 1.0 }, 0.0];
    }
    match local {
        0 => [0.0, s],
        1 => [1.0, s],
        2 => [s, 0.0],
        3 => [s, 1.0],
        _ => panic!("local face index {local} out of range"),
    }
}

/// Basis values and reference gradients at a point of the closed reference element.
pub fn reference_basis(elem: &ReferenceElement, point: &[f64]) -> Result<(Vec<f64>, Vec<[f64; 2]>)> {
    let tol = 1e-14;
    if point.len() != elem.dim || point.iter().any(|&c| !(c >= -tol && c <= 1.0 + tol)) {
        return Err(Error::OutsideReference(point.to_vec()));
    }
    let x = if elem.dim == 1 { [point[0], 0.0] } else { [point[0], point[1]] };
    Ok(elem.eval(&x))
}

/// Mass matrix of one Cartesian cell: the reference mass scaled by the volume.
pub fn local_mass_matrix(elem: &ReferenceElement, mesh: &Mesh, cell: usize) -> Result<DMatrix<f64>> {
    let vol = mesh.cells[cell].volume;
    if !(vol > 0.0) {
        return Err(Error::Mesh(format!("cell {cell} has non-positive volume {vol}")));
    }
    let nb = elem.n_basis();
    Ok(DMatrix::from_row_slice(nb, nb, &elem.reference_mass()) * vol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_structured_mesh, BoundarySpec};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gauss_rules() {
        let r = gauss_rule(1, 1);
        assert_eq!(r.points[0][0], 0.5);
        assert_eq!(r.weights[0], 1.0);

        let r = gauss_rule(1, 2);
        let i: f64 = r.points.iter().zip(&r.weights).map(|(x, w)| w * x[0].powi(3)).sum();
        assert!((i - 0.25).abs() < 1e-15);

        let r = gauss_rule(2, 3);
        let s: f64 = r.weights.iter().sum();
        assert!((s - 1.0).abs() < 1e-15);
        assert!(r.weights.iter().all(|&w| w > 0.0));
    }

    #[test]
    fn gauss_exactness_up_to_degree() {
        for n in 1..=8 {
            let r = gauss_rule_1d(n);
            for d in 0..2 * n {
                let i: f64 = r.points.iter().zip(&r.weights).map(|(x, w)| w * x[0].powi(d as i32)).sum();
                assert!((i - 1.0 / (d + 1) as f64).abs() < 1e-14, "n={n} d={d}");
            }
        }
    }

    #[test]
    fn linear_hats() {
        let e = ReferenceElement::new(1, 1);
        let (v, g) = reference_basis(&e, &[0.5]).unwrap();
        assert_relative_eq!(v[0], 0.5);
        assert_relative_eq!(v[1], 0.5);
        assert_relative_eq!(g[0][0], -1.0);
        assert_relative_eq!(g[1][0], 1.0);

        let e2 = ReferenceElement::new(1, 2);
        let (v, _) = reference_basis(&e2, &[0.0]).unwrap();
        assert_eq!(v.len(), 3);
        assert_relative_eq!(v[0], 1.0);
        assert!(v[1].abs() < 1e-15 && v[2].abs() < 1e-15);

        let q = ReferenceElement::new(2, 1);
        let (v, _) = reference_basis(&q, &[0.5, 0.5]).unwrap();
        assert_eq!(v.len(), 4);
        for x in v {
            assert_relative_eq!(x, 0.25, epsilon = 1e-15);
        }

        assert!(reference_basis(&e, &[1.5]).is_err());
        assert!(reference_basis(&q, &[0.5, -0.1]).is_err());
    }

    #[test]
    fn partition_of_unity_and_kronecker() {
        for dim in 1..=2 {
            for p in 1..=3 {
                let e = ReferenceElement::new(dim, p);
                let nb = e.n_basis();
                assert_eq!(nb, (p + 1).pow(dim as u32));
                for q in 0..e.n_quad() {
                    let s: f64 = e.values[q * nb..(q + 1) * nb].iter().sum();
                    assert!((s - 1.0).abs() < 1e-13);
                    let g: [f64; 2] = e.grads[q * nb..(q + 1) * nb]
                        .iter()
                        .fold([0.0, 0.0], |a, b| [a[0] + b[0], a[1] + b[1]]);
                    assert!(g[0].abs() < 1e-12 && g[1].abs() < 1e-12);
                }
                for (i, x) in e.nodes.iter().enumerate() {
                    let (v, _) = e.eval(x);
                    for (j, vj) in v.iter().enumerate() {
                        let delta = if i == j { 1.0 } else { 0.0 };
                        assert!((vj - delta).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn mass_matrices() {
        let mesh = build_structured_mesh(&[(0.0, 1.0)], &[1], BoundarySpec::periodic()).unwrap();
        let e = ReferenceElement::new(1, 1);
        let m = local_mass_matrix(&e, &mesh, 0).unwrap();
        assert_relative_eq!(m[(0, 0)], 1.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(m[(0, 1)], 1.0 / 6.0, epsilon = 1e-15);
        assert_relative_eq!(m[(1, 1)], 1.0 / 3.0, epsilon = 1e-15);

        let h = 0.37;
        let mesh = build_structured_mesh(&[(0.0, h)], &[1], BoundarySpec::periodic()).unwrap();
        let m = local_mass_matrix(&e, &mesh, 0).unwrap();
        assert_relative_eq!(m[(0, 1)], h / 6.0, epsilon = 1e-15);

        let e2 = ReferenceElement::new(1, 2);
        let m = local_mass_matrix(&e2, &mesh, 0).unwrap();
        let expect = [1.0 / 6.0, 4.0 / 6.0, 1.0 / 6.0];
        for i in 0..3 {
            let row: f64 = (0..3).map(|j| m[(i, j)]).sum();
            assert_relative_eq!(row, expect[i] * h, epsilon = 1e-15);
        }

        for dim in 1..=2 {
            for p in 1..=3 {
                let e = ReferenceElement::new(dim, p);
                let nb = e.n_basis();
                let m = DMatrix::from_row_slice(nb, nb, &e.reference_mass());
                assert!((&m - m.transpose()).amax() < 1e-15);
                assert!(m.cholesky().is_some(), "dim={dim} p={p}");
            }
        }
    }

    #[test]
    fn quadrature_and_interpolation_exactness() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for dim in 1..=2usize {
            for p in 1..=3usize {
                let e = ReferenceElement::new(dim, p);
                for _ in 0..10 {
                    // random polynomial in Q_p: sum c_ab x^a y^b
                    let n1 = p + 1;
                    let ny = if dim == 2 { n1 } else { 1 };
                    let c: Vec<f64> = (0..n1 * ny).map(|_| rng.gen_range(-1.0..1.0)).collect();
                    let f = |x: &[f64; 2]| {
                        let mut s = 0.0;
                        for b in 0..ny {
                            for a in 0..n1 {
                                s += c[a + n1 * b] * x[0].powi(a as i32) * x[1].powi(b as i32);
                            }
                        }
                        s
                    };
                    let mut exact = 0.0;
                    for b in 0..ny {
                        for a in 0..n1 {
                            exact += c[a + n1 * b] / ((a + 1) * (b + 1)) as f64;
                        }
                    }
                    let quad: f64 = e.quad.points.iter().zip(&e.quad.weights).map(|(x, w)| w * f(x)).sum();
                    assert!((quad - exact).abs() < 1e-12);

                    let coeffs: Vec<f64> = e.nodes.iter().map(f).collect();
                    for _ in 0..50 {
                        let x = [rng.gen::<f64>(), if dim == 2 { rng.gen::<f64>() } else { 0.0 }];
                        assert!((e.evaluate(&coeffs, &x) - f(&x)).abs() < 1e-11);
                    }
                }
            }
        }
    }

    #[test]
    fn higher_derivatives() {
        let l = Lagrange1d::equispaced(3);
        // sum_j x_j^3 phi_j(x) = x^3, so third derivative is 6
        let s: f64 = (0..4).map(|j| l.nodes[j].powi(3) * l.derivative(j, 3, 0.3)).sum();
        assert_relative_eq!(s, 6.0, epsilon = 1e-11);
        let s: f64 = (0..4).map(|j| l.nodes[j].powi(3) * l.derivative(j, 2, 0.3)).sum();
        assert_relative_eq!(s, 1.8, epsilon = 1e-11);
    }
}
