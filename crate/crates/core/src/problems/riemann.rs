//! Exact solution of the 1D Riemann problem for the ideal-gas Euler equations
//! (Newton iteration on the star pressure, sampled along rays x/t).

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Primitive {
    pub rho: f64,
    pub u: f64,
    pub p: f64,
}

impl Primitive {
    pub fn new(rho: f64, u: f64, p: f64) -> Self {
        Primitive { rho, u, p }
    }

    pub fn sound_speed(&self, gamma: f64) -> f64 {
        (gamma * self.p / self.rho).sqrt()
    }

    /// Conserved (rho, rho u, rho E).
    pub fn conserved(&self, gamma: f64) -> [f64; 3] {
        [
            self.rho,
            self.rho * self.u,
            self.p / (gamma - 1.0) + 0.5 * self.rho * self.u * self.u,
        ]
    }

    /// Physical flux (rho u, rho u^2 + p, (rho E + p) u).
    pub fn flux(&self, gamma: f64) -> [f64; 3] {
        let energy = self.conserved(gamma)[2];
        [
            self.rho * self.u,
            self.rho * self.u * self.u + self.p,
            (energy + self.p) * self.u,
        ]
    }
}

/// f_K(p) and its derivative for one side of the Riemann problem.
pub fn pressure_function(p: f64, side: &Primitive, gamma: f64) -> (f64, f64) {
    let a = side.sound_speed(gamma);
    if p > side.p {
        let ak = 2.0 / ((gamma + 1.0) * side.rho);
        let bk = (gamma - 1.0) / (gamma + 1.0) * side.p;
        let root = (ak / (p + bk)).sqrt();
        let f = (p - side.p) * root;
        (f, root * (1.0 - 0.5 * (p - side.p) / (p + bk)))
    } else {
        let z = (gamma - 1.0) / (2.0 * gamma);
        let ratio = p / side.p;
        let f = 2.0 * a / (gamma - 1.0) * (ratio.powf(z) - 1.0);
        (f, ratio.powf(-(gamma + 1.0) / (2.0 * gamma)) / (side.rho * a))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiemannSolution {
    pub left: Primitive,
    pub right: Primitive,
    pub gamma: f64,
    pub p_star: f64,
    pub u_star: f64,
    pub rho_star_left: f64,
    pub rho_star_right: f64,
    pub iterations: usize,
}

impl RiemannSolution {
    pub const TOLERANCE: f64 = 1e-12;
    pub const MAX_ITERATIONS: usize = 100;

    pub fn solve(left: Primitive, right: Primitive, gamma: f64) -> Result<Self> {
        for s in [&left, &right] {
            if !(s.rho > 0.0 && s.p > 0.0) || !s.u.is_finite() {
                return Err(Error::invalid(format!("Riemann data {s:?} is not admissible")));
            }
        }
        let (al, ar) = (left.sound_speed(gamma), right.sound_speed(gamma));
        let du = right.u - left.u;
        if 2.0 * (al + ar) / (gamma - 1.0) <= du {
            return Err(Error::Unsupported("Riemann data generate a vacuum".into()));
        }
        let z = (gamma - 1.0) / (2.0 * gamma);
        let guess = ((al + ar - 0.5 * (gamma - 1.0) * du) / (al / left.p.powf(z) + ar / right.p.powf(z))).powf(1.0 / z);
        let mut p = guess.max(Self::TOLERANCE);
        let mut iterations = 0;
        loop {
            iterations += 1;
            let (fl, dl) = pressure_function(p, &left, gamma);
            let (fr, dr) = pressure_function(p, &right, gamma);
            let next = (p - (fl + fr + du) / (dl + dr)).max(Self::TOLERANCE);
            let change = 2.0 * (next - p).abs() / (next + p);
            p = next;
            if change < Self::TOLERANCE {
                break;
            }
            if iterations >= Self::MAX_ITERATIONS {
                return Err(Error::NoConvergence(format!(
                    "star pressure after {iterations} Newton steps (last change {change:e})"
                )));
            }
        }
        let (fl, _) = pressure_function(p, &left, gamma);
        let (fr, _) = pressure_function(p, &right, gamma);
        let u_star = 0.5 * (left.u + right.u) + 0.5 * (fr - fl);
        let star_density = |s: &Primitive| {
            let ratio = p / s.p;
            if p > s.p {
                let g = (gamma - 1.0) / (gamma + 1.0);
                s.rho * (ratio + g) / (g * ratio + 1.0)
            } else {
                s.rho * ratio.powf(1.0 / gamma)
            }
        };
        Ok(RiemannSolution {
            left,
            right,
            gamma,
            p_star: p,
            u_star,
            rho_star_left: star_density(&left),
            rho_star_right: star_density(&right),
            iterations,
        })
    }

    /// Shock speed on the left (`right == false`) or right side, if that wave is a shock.
    pub fn shock_speed(&self, right: bool) -> Option<f64> {
        let g = self.gamma;
        let (s, sign) = if right { (&self.right, 1.0) } else { (&self.left, -1.0) };
        if self.p_star <= s.p {
            return None;
        }
        let a = s.sound_speed(g);
        let m = ((g + 1.0) / (2.0 * g) * self.p_star / s.p + (g - 1.0) / (2.0 * g)).sqrt();
        Some(s.u + sign * a * m)
    }

    /// Solution on the ray x/t = xi.
    pub fn sample(&self, xi: f64) -> Primitive {
        let g = self.gamma;
        if xi <= self.u_star {
            self.sample_side(xi, &self.left, self.rho_star_left, -1.0, g)
        } else {
            self.sample_side(xi, &self.right, self.rho_star_right, 1.0, g)
        }
    }

    /// Samples the left (sign = -1) or right (sign = +1) wave family.
    fn sample_side(&self, xi: f64, s: &Primitive, rho_star: f64, sign: f64, g: f64) -> Primitive {
        let star = Primitive::new(rho_star, self.u_star, self.p_star);
        let a = s.sound_speed(g);
        // distance from the undisturbed side, measured outwards
        let outside = |speed: f64| sign * (xi - speed) >= 0.0;
        if self.p_star > s.p {
            let speed = self.shock_speed(sign > 0.0).expect("shock");
            if outside(speed) {
                *s
            } else {
                star
            }
        } else {
            let head = s.u + sign * a;
            let a_star = a * (self.p_star / s.p).powf((g - 1.0) / (2.0 * g));
            let tail = self.u_star + sign * a_star;
            if outside(head) {
                *s
            } else if !outside(tail) {
                star
            } else {
                // inside the fan
                let c = 2.0 / (g + 1.0) - sign * (g - 1.0) / ((g + 1.0) * a) * (s.u - xi);
                let c = c.max(0.0);
                let rho = s.rho * c.powf(2.0 / (g - 1.0));
                let u = 2.0 / (g + 1.0) * (-sign * a + 0.5 * (g - 1.0) * s.u + xi);
                let p = s.p * c.powf(2.0 * g / (g - 1.0));
                Primitive::new(rho, u, p)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const G: f64 = 1.4;

    fn sod() -> (Primitive, Primitive) {
        (Primitive::new(1.0, 0.0, 1.0), Primitive::new(0.125, 0.0, 0.1))
    }

    /// Star pressure by bisection on an independently coded pressure function.
    fn bisection_star_pressure(l: Primitive, r: Primitive) -> f64 {
        let f = |p: f64, s: &Primitive| {
            let a = (G * s.p / s.rho).sqrt();
            if p > s.p {
                let big_a = 2.0 / ((G + 1.0) * s.rho);
                let big_b = (G - 1.0) / (G + 1.0) * s.p;
                (p - s.p) * (big_a / (p + big_b)).sqrt()
            } else {
                2.0 * a / (G - 1.0) * ((p / s.p).powf((G - 1.0) / (2.0 * G)) - 1.0)
            }
        };
        let total = |p: f64| f(p, &l) + f(p, &r) + r.u - l.u;
        let (mut lo, mut hi) = (1e-10, 1e4);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if total(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn sod_star_state() {
        let (l, r) = sod();
        let s = RiemannSolution::solve(l, r, G).unwrap();
        assert!((s.p_star - 0.30313).abs() < 1e-5);
        assert!((s.u_star - 0.92745).abs() < 1e-5);
        assert!((s.p_star - bisection_star_pressure(l, r)).abs() < 1e-10);
        assert!(s.iterations < 10);
    }

    #[test]
    fn other_tubes_against_bisection() {
        let cases = [
            (Primitive::new(1.0, 0.75, 1.0), Primitive::new(0.125, 0.0, 0.1)),
            (Primitive::new(0.445, 0.698, 3.528), Primitive::new(0.5, 0.0, 0.571)),
            (Primitive::new(1.0, 0.0, 1000.0), Primitive::new(1.0, 0.0, 0.01)),
            (Primitive::new(1.0, -2.0, 0.4), Primitive::new(1.0, 2.0, 0.4)),
        ];
        for (l, r) in cases {
            let s = RiemannSolution::solve(l, r, G).unwrap();
            let b = bisection_star_pressure(l, r);
            assert!((s.p_star - b).abs() < 1e-9 * b.max(1.0), "{l:?} {r:?}");
        }
    }

    #[test]
    fn far_field_and_degenerate() {
        let (l, r) = sod();
        let s = RiemannSolution::solve(l, r, G).unwrap();
        assert_eq!(s.sample(-1e6), l);
        assert_eq!(s.sample(1e6), r);
        let c = Primitive::new(0.7, 0.3, 2.0);
        let d = RiemannSolution::solve(c, c, G).unwrap();
        for xi in [-5.0, -0.3, 0.0, 0.3, 0.31, 5.0] {
            let v = d.sample(xi);
            assert!((v.rho - c.rho).abs() < 1e-12 && (v.u - c.u).abs() < 1e-12 && (v.p - c.p).abs() < 1e-12);
        }
    }

    #[test]
    fn rankine_hugoniot_across_sod_shock() {
        let (l, r) = sod();
        let s = RiemannSolution::solve(l, r, G).unwrap();
        let speed = s.shock_speed(true).unwrap();
        let ahead = s.sample(speed + 1e-9);
        let behind = s.sample(speed - 1e-9);
        assert_eq!(ahead, r);
        assert!((behind.rho - s.rho_star_right).abs() < 1e-15);
        let (fa, fb) = (ahead.flux(G), behind.flux(G));
        let (ua, ub) = (ahead.conserved(G), behind.conserved(G));
        for k in 0..3 {
            let jump = fa[k] - fb[k] - speed * (ua[k] - ub[k]);
            assert!(jump.abs() < 1e-10, "component {k}: {jump}");
        }
        assert!(s.shock_speed(false).is_none());
    }

    #[test]
    fn fan_is_continuous() {
        // modified Sod: sonic rarefaction
        let s = RiemannSolution::solve(Primitive::new(1.0, 0.75, 1.0), Primitive::new(0.125, 0.0, 0.1), G).unwrap();
        let a = s.left.sound_speed(G);
        let head = s.left.u - a;
        let a_star = a * (s.p_star / s.left.p).powf((G - 1.0) / (2.0 * G));
        let tail = s.u_star - a_star;
        assert!(head < 0.0 && tail > 0.0);
        for xi in [head, tail] {
            let (lo, hi) = (s.sample(xi - 1e-9), s.sample(xi + 1e-9));
            assert!((lo.rho - hi.rho).abs() < 1e-7 && (lo.p - hi.p).abs() < 1e-7);
        }
        // the fan is isentropic with u - ... Riemann invariant u + 2a/(γ-1) constant
        let mid = s.sample(0.5 * (head + tail));
        let inv = |v: Primitive| v.u + 2.0 * v.sound_speed(G) / (G - 1.0);
        assert!((inv(mid) - inv(s.left)).abs() < 1e-12);
        assert!((mid.p / mid.rho.powf(G) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bad_data() {
        assert!(RiemannSolution::solve(Primitive::new(-1.0, 0.0, 1.0), Primitive::new(1.0, 0.0, 1.0), G).is_err());
        assert!(matches!(
            RiemannSolution::solve(Primitive::new(1.0, -20.0, 0.1), Primitive::new(1.0, 20.0, 0.1), G),
            Err(Error::Unsupported(_))
        ));
    }
}
