//! First-order jets: value plus the four first partials (x, y, z, t) of each
//! field component at a spacetime point. Jets are the canonical
//! differentiable representation; analytic providers sample into jets and
//! all residuals (Maxwell, continuity, Poynting divergence) read off them.

use num_complex::Complex64 as C64;

use crate::constants::Constants;
use crate::linalg::{c64, CVec3};

/// Spacetime point (x, y, z, t). Components may be complex after transforms
/// into limit frames; physical inputs are real.
pub type Point = [C64; 4];

pub fn real_point(x: f64, y: f64, z: f64, t: f64) -> Point {
    [c64(x, 0.0), c64(y, 0.0), c64(z, 0.0), c64(t, 0.0)]
}

/// Value and first partial derivatives with respect to (x, y, z, t).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet1 {
    pub value: C64,
    pub grad: [C64; 4],
}

impl Jet1 {
    pub fn constant(value: C64) -> Self {
        Jet1 { value, grad: [c64(0.0, 0.0); 4] }
    }

    pub fn zero() -> Self {
        Jet1::constant(c64(0.0, 0.0))
    }

    pub fn new(value: C64, grad: [C64; 4]) -> Self {
        Jet1 { value, grad }
    }

    /// First-order Taylor evaluation `value + grad . (p - p0)`.
    pub fn eval(&self, p0: &Point, p: &Point) -> C64 {
        let mut v = self.value;
        for k in 0..4 {
            v += self.grad[k] * (p[k] - p0[k]);
        }
        v
    }

    pub fn scale(&self, s: C64) -> Jet1 {
        Jet1 {
            value: self.value * s,
            grad: [self.grad[0] * s, self.grad[1] * s, self.grad[2] * s, self.grad[3] * s],
        }
    }

    pub fn add(&self, other: &Jet1) -> Jet1 {
        let mut g = self.grad;
        for k in 0..4 {
            g[k] += other.grad[k];
        }
        Jet1 { value: self.value + other.value, grad: g }
    }

    pub fn sub(&self, other: &Jet1) -> Jet1 {
        self.add(&other.scale(c64(-1.0, 0.0)))
    }

    /// Product rule: first-order jet of a product of two jets.
    pub fn mul(&self, other: &Jet1) -> Jet1 {
        let mut g = [c64(0.0, 0.0); 4];
        for k in 0..4 {
            g[k] = self.grad[k] * other.value + self.value * other.grad[k];
        }
        Jet1 { value: self.value * other.value, grad: g }
    }
}

/// Jet of the full electromagnetic state: (E, B) plus the source pair (rho, J).
#[derive(Debug, Clone, PartialEq)]
pub struct FieldJet {
    pub point: Point,
    pub e: [Jet1; 3],
    pub b: [Jet1; 3],
    pub rho: Jet1,
    pub j: [Jet1; 3],
}

impl FieldJet {
    pub fn zero_at(point: Point) -> Self {
        FieldJet {
            point,
            e: [Jet1::zero(); 3],
            b: [Jet1::zero(); 3],
            rho: Jet1::zero(),
            j: [Jet1::zero(); 3],
        }
    }

    pub fn e_value(&self) -> CVec3 {
        CVec3::new(self.e[0].value, self.e[1].value, self.e[2].value)
    }

    pub fn b_value(&self) -> CVec3 {
        CVec3::new(self.b[0].value, self.b[1].value, self.b[2].value)
    }

    pub fn j_value(&self) -> CVec3 {
        CVec3::new(self.j[0].value, self.j[1].value, self.j[2].value)
    }

    /// The eight Maxwell residuals at the jet point, in SI form:
    /// Gauss, Faraday (3), no-monopole, Ampere (3). All zero iff the jet
    /// satisfies Maxwell's equations at the point.
    pub fn maxwell_residual(&self, k: &Constants) -> [C64; 8] {
        let e = &self.e;
        let b = &self.b;
        let me = k.mu0 * k.eps0;
        let mut r = [c64(0.0, 0.0); 8];
        // div E - rho/eps0
        r[0] = e[0].grad[0] + e[1].grad[1] + e[2].grad[2] - self.rho.value / c64(k.eps0, 0.0);
        // curl E + dB/dt
        r[1] = e[2].grad[1] - e[1].grad[2] + b[0].grad[3];
        r[2] = e[0].grad[2] - e[2].grad[0] + b[1].grad[3];
        r[3] = e[1].grad[0] - e[0].grad[1] + b[2].grad[3];
        // div B
        r[4] = b[0].grad[0] + b[1].grad[1] + b[2].grad[2];
        // curl B - mu0 J - mu0 eps0 dE/dt
        r[5] = b[2].grad[1] - b[1].grad[2] - c64(k.mu0, 0.0) * self.j[0].value - c64(me, 0.0) * e[0].grad[3];
        r[6] = b[0].grad[2] - b[2].grad[0] - c64(k.mu0, 0.0) * self.j[1].value - c64(me, 0.0) * e[1].grad[3];
        r[7] = b[1].grad[0] - b[0].grad[1] - c64(k.mu0, 0.0) * self.j[2].value - c64(me, 0.0) * e[2].grad[3];
        r
    }

    pub fn max_maxwell_residual(&self, k: &Constants) -> f64 {
        self.maxwell_residual(k).iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// d rho/dt + div J.
    pub fn continuity_residual(&self) -> C64 {
        self.rho.grad[3] + self.j[0].grad[0] + self.j[1].grad[1] + self.j[2].grad[2]
    }

    /// Jet of the i-th component of E x B (product rule on the stored jets).
    pub fn poynting_component(&self, i: usize) -> Jet1 {
        let (a, b) = match i {
            0 => (1, 2),
            1 => (2, 0),
            2 => (0, 1),
            _ => panic!("component index out of range"),
        };
        self.e[a].mul(&self.b[b]).sub(&self.e[b].mul(&self.b[a]))
    }

    /// div(E x B) at the jet point.
    pub fn poynting_divergence(&self) -> C64 {
        (0..3).map(|i| self.poynting_component(i).grad[i]).sum()
    }

    /// Evaluate the first-order field polynomials at another point.
    pub fn evaluate(&self, p: &Point) -> (CVec3, CVec3, C64, CVec3) {
        let ev = CVec3::new(
            self.e[0].eval(&self.point, p),
            self.e[1].eval(&self.point, p),
            self.e[2].eval(&self.point, p),
        );
        let bv = CVec3::new(
            self.b[0].eval(&self.point, p),
            self.b[1].eval(&self.point, p),
            self.b[2].eval(&self.point, p),
        );
        let rho = self.rho.eval(&self.point, p);
        let jv = CVec3::new(
            self.j[0].eval(&self.point, p),
            self.j[1].eval(&self.point, p),
            self.j[2].eval(&self.point, p),
        );
        (ev, bv, rho, jv)
    }
}
