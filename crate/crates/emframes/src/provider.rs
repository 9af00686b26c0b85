//! Field providers: deterministic evaluators (x, y, z, t) -> (E, B, rho, J)
//! with exact first-order jets. Built-ins cover constant fields, plane waves
//! and first-order polynomial fields; wrappers add time reversal and frame
//! transforms.

use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::constants::Constants;
use crate::jet::{FieldJet, Jet1, Point};
use crate::linalg::{c64, CVec3};

/// Field values at a point.
#[derive(Debug, Clone, Copy)]
pub struct FieldSample {
    pub e: CVec3,
    pub b: CVec3,
    pub rho: C64,
    pub j: CVec3,
}

impl FieldSample {
    pub fn vacuum(e: CVec3, b: CVec3) -> Self {
        FieldSample { e, b, rho: c64(0.0, 0.0), j: CVec3::zero() }
    }
}

/// A deterministic field evaluator. Implementations must be pure: the same
/// point always yields the same sample, and concurrent calls are safe.
pub trait FieldProvider: Send + Sync {
    fn sample(&self, p: &Point) -> FieldSample;

    /// Exact first-order jet at a point. Built-ins override this with
    /// analytic derivatives; the default uses central differences with
    /// h = 1e-4 * coordinate scale.
    fn jet(&self, p: &Point) -> FieldJet {
        let scale = p.iter().map(|c| c.norm()).fold(1.0, f64::max);
        let h = 1e-4 * scale;
        let mut jet = FieldJet::zero_at(*p);
        let s0 = self.sample(p);
        let mut grads: Vec<[C64; 4]> = vec![[c64(0.0, 0.0); 4]; 10];
        for axis in 0..4 {
            let mut pp = *p;
            let mut pm = *p;
            pp[axis] += c64(h, 0.0);
            pm[axis] -= c64(h, 0.0);
            let sp = self.sample(&pp);
            let sm = self.sample(&pm);
            let two_h = c64(2.0 * h, 0.0);
            for comp in 0..3 {
                grads[comp][axis] = (sp.e.comp(comp) - sm.e.comp(comp)) / two_h;
                grads[3 + comp][axis] = (sp.b.comp(comp) - sm.b.comp(comp)) / two_h;
                grads[7 + comp][axis] = (sp.j.comp(comp) - sm.j.comp(comp)) / two_h;
            }
            grads[6][axis] = (sp.rho - sm.rho) / two_h;
        }
        for comp in 0..3 {
            jet.e[comp] = Jet1::new(s0.e.comp(comp), grads[comp]);
            jet.b[comp] = Jet1::new(s0.b.comp(comp), grads[3 + comp]);
            jet.j[comp] = Jet1::new(s0.j.comp(comp), grads[7 + comp]);
        }
        jet.rho = Jet1::new(s0.rho, grads[6]);
        jet
    }
}

/// Constant (E, B) everywhere, no sources.
#[derive(Debug, Clone)]
pub struct ConstantField {
    pub e: CVec3,
    pub b: CVec3,
}

impl FieldProvider for ConstantField {
    fn sample(&self, _p: &Point) -> FieldSample {
        FieldSample::vacuum(self.e, self.b)
    }

    fn jet(&self, p: &Point) -> FieldJet {
        let mut jet = FieldJet::zero_at(*p);
        for comp in 0..3 {
            jet.e[comp] = Jet1::constant(self.e.comp(comp));
            jet.b[comp] = Jet1::constant(self.b.comp(comp));
        }
        jet
    }
}

/// Crossed constant fields E = E0 e1, B = B0 e2.
pub fn crossed_fields(e_amplitude: f64, b_amplitude: f64) -> ConstantField {
    ConstantField {
        e: CVec3::from_real(e_amplitude, 0.0, 0.0),
        b: CVec3::from_real(0.0, b_amplitude, 0.0),
    }
}

/// Vacuum plane wave: E = A cos(k.x - w t + phase) pol, B = khat x E / c,
/// with w = c |k| and pol orthogonal to k.
#[derive(Debug, Clone)]
pub struct PlaneWave {
    pub amplitude: f64,
    pub wave_vector: [f64; 3],
    pub polarization: [f64; 3],
    pub phase: f64,
    pub c: f64,
}

impl PlaneWave {
    pub fn new(amplitude: f64, wave_vector: [f64; 3], polarization: [f64; 3], phase: f64, k: &Constants) -> crate::Result<Self> {
        let kv = CVec3::from_real(wave_vector[0], wave_vector[1], wave_vector[2]);
        let pol = CVec3::from_real(polarization[0], polarization[1], polarization[2]);
        let kn = kv.norm();
        let pn = pol.norm();
        if kn == 0.0 || pn == 0.0 {
            return Err(crate::Error::Config("plane wave needs nonzero k and polarization".into()));
        }
        let dot = kv.cdot(&pol).norm();
        if dot > 1e-10 * kn * pn {
            return Err(crate::Error::Config("polarization must be orthogonal to the wave vector".into()));
        }
        let p = pol.scale(c64(1.0 / pn, 0.0));
        Ok(PlaneWave {
            amplitude,
            wave_vector,
            polarization: [p.x.re, p.y.re, p.z.re],
            phase,
            c: k.c,
        })
    }

    fn argument(&self, p: &Point) -> C64 {
        let kv = &self.wave_vector;
        let omega = self.c * (kv[0] * kv[0] + kv[1] * kv[1] + kv[2] * kv[2]).sqrt();
        p[0] * c64(kv[0], 0.0) + p[1] * c64(kv[1], 0.0) + p[2] * c64(kv[2], 0.0)
            - p[3] * c64(omega, 0.0)
            + c64(self.phase, 0.0)
    }

    fn directions(&self) -> (CVec3, CVec3) {
        let kv = CVec3::from_real(self.wave_vector[0], self.wave_vector[1], self.wave_vector[2]);
        let khat = kv.scale(c64(1.0 / kv.norm(), 0.0));
        let pol = CVec3::from_real(self.polarization[0], self.polarization[1], self.polarization[2]);
        (khat, pol)
    }
}

impl FieldProvider for PlaneWave {
    fn sample(&self, p: &Point) -> FieldSample {
        let (khat, pol) = self.directions();
        let arg = self.argument(p);
        let amp = c64(self.amplitude, 0.0) * arg.cos();
        let e = pol.scale(amp);
        let b = khat.cross(&pol).scale(amp / c64(self.c, 0.0));
        FieldSample::vacuum(e, b)
    }

    fn jet(&self, p: &Point) -> FieldJet {
        let (khat, pol) = self.directions();
        let kv = &self.wave_vector;
        let omega = self.c * (kv[0] * kv[0] + kv[1] * kv[1] + kv[2] * kv[2]).sqrt();
        let arg = self.argument(p);
        let amp = c64(self.amplitude, 0.0) * arg.cos();
        let damp = -c64(self.amplitude, 0.0) * arg.sin();
        let darg = [c64(kv[0], 0.0), c64(kv[1], 0.0), c64(kv[2], 0.0), c64(-omega, 0.0)];
        let bdir = khat.cross(&pol);
        let mut jet = FieldJet::zero_at(*p);
        for comp in 0..3 {
            let mut eg = [c64(0.0, 0.0); 4];
            let mut bg = [c64(0.0, 0.0); 4];
            for axis in 0..4 {
                eg[axis] = pol.comp(comp) * damp * darg[axis];
                bg[axis] = bdir.comp(comp) * damp * darg[axis] / c64(self.c, 0.0);
            }
            jet.e[comp] = Jet1::new(pol.comp(comp) * amp, eg);
            jet.b[comp] = Jet1::new(bdir.comp(comp) * amp / c64(self.c, 0.0), bg);
        }
        jet
    }
}

/// Fields that are first-order polynomials in (x - x0, ..., t - t0), defined
/// by a jet. The jet of this provider is exact everywhere.
#[derive(Debug, Clone)]
pub struct PolynomialField {
    pub jet: FieldJet,
}

impl FieldProvider for PolynomialField {
    fn sample(&self, p: &Point) -> FieldSample {
        let (e, b, rho, j) = self.jet.evaluate(p);
        FieldSample { e, b, rho, j }
    }

    fn jet(&self, p: &Point) -> FieldJet {
        let (e, b, rho, j) = self.jet.evaluate(p);
        let mut out = self.jet.clone();
        out.point = *p;
        for comp in 0..3 {
            out.e[comp].value = e.comp(comp);
            out.b[comp].value = b.comp(comp);
            out.j[comp].value = j.comp(comp);
        }
        out.rho.value = rho;
        out
    }
}

/// Time-reversed process on (0, t0):
/// rho'(x,t) = rho(x, t0-t), J' = -J, E' = E, B' = -B at the mirrored time.
pub struct ReversedProvider {
    pub inner: Arc<dyn FieldProvider>,
    pub t0: f64,
}

impl ReversedProvider {
    fn mirror(&self, p: &Point) -> Point {
        [p[0], p[1], p[2], c64(self.t0, 0.0) - p[3]]
    }
}

impl FieldProvider for ReversedProvider {
    fn sample(&self, p: &Point) -> FieldSample {
        let s = self.inner.sample(&self.mirror(p));
        FieldSample { e: s.e, b: s.b.neg(), rho: s.rho, j: s.j.neg() }
    }

    fn jet(&self, p: &Point) -> FieldJet {
        let inner = self.inner.jet(&self.mirror(p));
        let mut out = FieldJet::zero_at(*p);
        // chain rule: d/dt f(t0 - t) = -(df/dt)(t0 - t)
        let flip_time = |j: &Jet1| -> Jet1 {
            let mut g = j.grad;
            g[3] = -g[3];
            Jet1::new(j.value, g)
        };
        for comp in 0..3 {
            out.e[comp] = flip_time(&inner.e[comp]);
            out.b[comp] = flip_time(&inner.b[comp]).scale(c64(-1.0, 0.0));
            out.j[comp] = flip_time(&inner.j[comp]).scale(c64(-1.0, 0.0));
        }
        out.rho = flip_time(&inner.rho);
        out
    }
}
