//! Poynting-flux diagnostics: radial flux scans with a divergence-theorem
//! self-check (volume integral of div(E x B) against the surface integral of
//! (E x B).n), the time-reversed process, parallel-field extraction and
//! decay-at-infinity checks.

use std::sync::Arc;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;


use crate::error::{Error, Result};
use crate::fields::EMField;
use crate::jet::Point;
use crate::linalg::{c64, CVec3};
use crate::provider::{FieldProvider, ReversedProvider};

/// A provider together with the scan geometry.
pub struct Scenario {
    pub provider: Arc<dyn FieldProvider>,
    pub t0: f64,
    pub radii: Vec<f64>,
    pub decay_expected: bool,
}

impl Scenario {
    pub fn new(provider: Arc<dyn FieldProvider>, t0: f64, radii: Vec<f64>) -> Result<Self> {
        if radii.is_empty() || radii.windows(2).any(|w| w[1] <= w[0]) || radii[0] <= 0.0 {
            return Err(Error::Config("radii must be positive and strictly increasing".into()));
        }
        Ok(Scenario { provider, t0, radii, decay_expected: false })
    }
}

/// Time-reversed scenario on (0, t0).
pub fn reverse_process(s: &Scenario, t0: f64) -> Scenario {
    Scenario {
        provider: Arc::new(ReversedProvider { inner: s.provider.clone(), t0 }),
        t0: s.t0,
        radii: s.radii.clone(),
        decay_expected: s.decay_expected,
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1] (Newton iteration on the
/// Legendre recurrence).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0f64, 0.0f64);
            for k in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k as f64 + 1.0) * x * p1 - k as f64 * p2) / (k as f64 + 1.0);
            }
            let dp = n as f64 * (x * p0 - p1) / (x * x - 1.0);
            let dx = p0 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (mut p0, mut p1) = (1.0f64, 0.0f64);
        for k in 0..n {
            let p2 = p1;
            p1 = p0;
            p0 = ((2.0 * k as f64 + 1.0) * x * p1 - k as f64 * p2) / (k as f64 + 1.0);
        }
        let dp = n as f64 * (x * p0 - p1) / (x * x - 1.0);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Product quadrature rule on the unit sphere: Gauss-Legendre in cos(theta)
/// times equally spaced azimuth. Spectrally accurate for smooth integrands.
#[derive(Debug, Clone)]
pub struct SphereRule {
    /// unit directions
    pub points: Vec<[f64; 3]>,
    /// weights summing to 4 pi
    pub weights: Vec<f64>,
}

impl SphereRule {
    pub fn product(n_polar: usize, n_azimuth: usize) -> Self {
        let (nodes, ws) = gauss_legendre(n_polar);
        let mut points = Vec::with_capacity(n_polar * n_azimuth);
        let mut weights = Vec::with_capacity(n_polar * n_azimuth);
        for (ct, w) in nodes.iter().zip(&ws) {
            let st = (1.0 - ct * ct).sqrt();
            for j in 0..n_azimuth {
                let phi = std::f64::consts::TAU * (j as f64 + 0.5) / n_azimuth as f64;
                points.push([st * phi.cos(), st * phi.sin(), *ct]);
                weights.push(w * std::f64::consts::TAU / n_azimuth as f64);
            }
        }
        SphereRule { points, weights }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Quadrature configuration; the default pairs a 648-point sphere rule with
/// a refinement for the error estimate.
#[derive(Debug, Clone)]
pub struct FluxConfig {
    pub base_polar: usize,
    pub base_azimuth: usize,
    pub refined_polar: usize,
    pub refined_azimuth: usize,
    pub radial_points: usize,
    pub radial_points_refined: usize,
    /// quadrature failure threshold: relative disagreement of the refinement
    pub failure_rel: f64,
    pub failure_abs: f64,
}

impl Default for FluxConfig {
    fn default() -> Self {
        FluxConfig {
            base_polar: 18,
            base_azimuth: 36,
            refined_polar: 24,
            refined_azimuth: 48,
            radial_points: 32,
            radial_points_refined: 40,
            failure_rel: 1e-3,
            failure_abs: 1e-3,
        }
    }
}

/// One row of a flux scan.
#[derive(Debug, Clone, Serialize)]
pub struct FluxRow {
    pub r: f64,
    pub volume_integral: f64,
    pub surface_integral: f64,
    pub abs_error_estimate: f64,
    pub volume_integral_im: f64,
    pub surface_integral_im: f64,
}

fn surface_integral(provider: &dyn FieldProvider, rule: &SphereRule, r: f64, t: f64) -> C64 {
    let terms: Vec<C64> = rule
        .points
        .par_iter()
        .zip(rule.weights.par_iter())
        .map(|(n, w)| {
            let p: Point = [c64(r * n[0], 0.0), c64(r * n[1], 0.0), c64(r * n[2], 0.0), c64(t, 0.0)];
            let s = provider.sample(&p);
            let poynting = s.e.cross(&s.b);
            let nv = CVec3::from_real(n[0], n[1], n[2]);
            poynting.cdot(&nv) * c64(w * r * r, 0.0)
        })
        .collect();
    terms.into_iter().sum()
}

fn volume_integral(
    provider: &dyn FieldProvider,
    rule: &SphereRule,
    radial: usize,
    r: f64,
    t: f64,
) -> C64 {
    let (nodes, ws) = gauss_legendre(radial);
    let mut shells: Vec<(f64, f64)> = Vec::with_capacity(radial);
    for (x, w) in nodes.iter().zip(&ws) {
        let rr = 0.5 * r * (x + 1.0);
        let wr = 0.5 * r * w;
        shells.push((rr, wr));
    }
    let terms: Vec<C64> = shells
        .par_iter()
        .map(|(rr, wr)| {
            let mut acc = c64(0.0, 0.0);
            for (n, w) in rule.points.iter().zip(&rule.weights) {
                let p: Point =
                    [c64(rr * n[0], 0.0), c64(rr * n[1], 0.0), c64(rr * n[2], 0.0), c64(t, 0.0)];
                let jet = provider.jet(&p);
                acc += jet.poynting_divergence() * c64(w * rr * rr, 0.0);
            }
            acc * c64(*wr, 0.0)
        })
        .collect();
    terms.into_iter().sum()
}

/// Scan the scenario's radii at time `t`: for each radius compute the volume
/// integral of div(E x B) over the ball and the surface integral of
/// (E x B).n over the sphere, each with a refinement-based error estimate.
pub fn flux_scan(s: &Scenario, t: f64, config: &FluxConfig) -> Result<Vec<FluxRow>> {
    let base = SphereRule::product(config.base_polar, config.base_azimuth);
    let refined = SphereRule::product(config.refined_polar, config.refined_azimuth);
    let mut rows = Vec::with_capacity(s.radii.len());
    for &r in &s.radii {
        let sur0 = surface_integral(s.provider.as_ref(), &base, r, t);
        let sur1 = surface_integral(s.provider.as_ref(), &refined, r, t);
        let vol0 = volume_integral(s.provider.as_ref(), &base, config.radial_points, r, t);
        let vol1 = volume_integral(s.provider.as_ref(), &refined, config.radial_points_refined, r, t);
        let err_s = (sur1 - sur0).norm();
        let err_v = (vol1 - vol0).norm();
        let scale = sur1.norm().max(vol1.norm()).max(1.0);
        if err_s > config.failure_abs + config.failure_rel * scale
            || err_v > config.failure_abs + config.failure_rel * scale
        {
            return Err(Error::QuadratureFailure(format!(
                "refinement disagrees at r = {r}: surface {err_s:.3e}, volume {err_v:.3e}"
            )));
        }
        rows.push(FluxRow {
            r,
            volume_integral: vol1.re,
            surface_integral: sur1.re,
            abs_error_estimate: err_s.max(err_v),
            volume_integral_im: vol1.im,
            surface_integral_im: sur1.im,
        });
    }
    Ok(rows)
}

/// Verdict with declared thresholds: the flux at the largest radius must be
/// below tol_abs + tol_rel * max |flux| over the scan.
pub fn classically_nonradiating(rows: &[FluxRow], tol_abs: f64, tol_rel: f64) -> bool {
    let max_flux = rows.iter().map(|r| r.volume_integral.abs()).fold(0.0, f64::max);
    match rows.last() {
        Some(last) => last.volume_integral.abs() < tol_abs + tol_rel * max_flux,
        None => false,
    }
}

/// Result of the parallel-field extraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParallelExtract {
    Parallel(C64),
    NotParallel,
}

/// If E x B vanishes (relative to |E||B|) and B is nonzero, return the ratio
/// lambda with E = lambda B, read off the largest-magnitude component of B.
pub fn extract_parallel(f: &EMField) -> Result<ParallelExtract> {
    let en = f.e.norm();
    let bn = f.b.norm();
    if bn <= 1e-12 * en.max(1.0) {
        return Err(Error::ZeroB);
    }
    let cross = f.e.cross(&f.b).norm();
    if cross > 1e-10 * (en * bn + f64::MIN_POSITIVE) {
        return Ok(ParallelExtract::NotParallel);
    }
    let mut kmax = 0;
    for k in 1..3 {
        if f.b.comp(k).norm() > f.b.comp(kmax).norm() {
            kmax = k;
        }
    }
    Ok(ParallelExtract::Parallel(f.e.comp(kmax) / f.b.comp(kmax)))
}

/// Per-radius field maxima and a decay verdict.
#[derive(Debug, Clone, Serialize)]
pub struct DecayReport {
    pub rows: Vec<(f64, f64, f64)>,
    pub decaying: bool,
}

/// Sample |E| and |B| maxima over spheres of the given radii; flag the
/// scenario non-decaying when the envelope at the largest radius has not
/// dropped to half the first one, or the envelope grows along the way.
pub fn decay_check(s: &Scenario, t: f64, radii: &[f64]) -> Result<DecayReport> {
    if radii.is_empty() || radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("radii must be strictly increasing".into()));
    }
    let rule = SphereRule::product(12, 24);
    let mut rows = Vec::with_capacity(radii.len());
    for &r in radii {
        let maxima: Vec<(f64, f64)> = rule
            .points
            .par_iter()
            .map(|n| {
                let p: Point =
                    [c64(r * n[0], 0.0), c64(r * n[1], 0.0), c64(r * n[2], 0.0), c64(t, 0.0)];
                let s = s.provider.sample(&p);
                (s.e.norm(), s.b.norm())
            })
            .collect();
        let emax = maxima.iter().map(|m| m.0).fold(0.0, f64::max);
        let bmax = maxima.iter().map(|m| m.1).fold(0.0, f64::max);
        rows.push((r, emax, bmax));
    }
    let env = |row: &(f64, f64, f64)| row.1.max(row.2);
    let first = env(&rows[0]);
    let last = env(rows.last().unwrap());
    let monotone = rows.windows(2).all(|w| env(&w[1]) <= env(&w[0]) * 1.1);
    let decaying = monotone && last <= 0.5 * first;
    Ok(DecayReport { rows, decaying })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::Constants;
    use crate::jet::{FieldJet, Jet1};
    use crate::jet::real_point;
    use crate::provider::{crossed_fields, PlaneWave, PolynomialField};

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(8);
        // integral of x^6 over [-1,1] = 2/7
        let s: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(6)).sum();
        assert!((s - 2.0 / 7.0).abs() < 1e-14);
        let s: f64 = w.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
    }

    #[test]
    fn sphere_rule_weights_sum_to_4pi() {
        let rule = SphereRule::product(18, 36);
        assert_eq!(rule.len(), 648);
        let s: f64 = rule.weights.iter().sum();
        assert!((s - 4.0 * std::f64::consts::PI).abs() < 1e-12);
        // integrates x^2 over the sphere to 4 pi / 3
        let s: f64 = rule
            .points
            .iter()
            .zip(&rule.weights)
            .map(|(p, w)| w * p[0] * p[0])
            .sum();
        assert!((s - 4.0 * std::f64::consts::PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn constant_crossed_fields_have_zero_flux() {
        let s = Scenario::new(Arc::new(crossed_fields(1.0, 1.0)), 0.0, vec![0.5, 1.0, 2.0]).unwrap();
        let rows = flux_scan(&s, 0.0, &FluxConfig::default()).unwrap();
        for row in &rows {
            assert!(row.volume_integral.abs() < 1e-10);
            assert!(row.surface_integral.abs() < 1e-10);
        }
        assert!(classically_nonradiating(&rows, 1e-8, 1e-6));
    }

    #[test]
    fn known_divergence_polynomial_field() {
        // E = (0, d x, 0), B = e3 -> E x B = (d x, 0, 0), div = d
        let d = 0.7;
        let mut jet = FieldJet::zero_at(real_point(0.0, 0.0, 0.0, 0.0));
        jet.e[1] = Jet1::new(c64(0.0, 0.0), [c64(d, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)]);
        jet.b[2] = Jet1::constant(c64(1.0, 0.0));
        let s = Scenario::new(Arc::new(PolynomialField { jet }), 0.0, vec![1.0, 1.7]).unwrap();
        let rows = flux_scan(&s, 0.0, &FluxConfig::default()).unwrap();
        for row in &rows {
            let expect = d * 4.0 / 3.0 * std::f64::consts::PI * row.r.powi(3);
            assert!((row.volume_integral - expect).abs() < 1e-9, "vol {} vs {}", row.volume_integral, expect);
            assert!((row.surface_integral - expect).abs() < 1e-9);
        }
    }

    #[test]
    fn plane_wave_volume_and_surface_agree() {
        let k = Constants::natural();
        let pw = PlaneWave::new(1.0, [1.3, 0.0, 0.0], [0.0, 1.0, 0.0], 0.0, &k).unwrap();
        let s = Scenario::new(Arc::new(pw), 0.0, vec![0.8, 1.5]).unwrap();
        let rows = flux_scan(&s, 0.3, &FluxConfig::default()).unwrap();
        for row in &rows {
            let scale = row.volume_integral.abs().max(row.surface_integral.abs()).max(1e-12);
            let diff = (row.volume_integral - row.surface_integral).abs();
            assert!(
                diff <= row.abs_error_estimate.max(1e-6 * scale) + 1e-9,
                "divergence theorem violated: {diff} vs err {}",
                row.abs_error_estimate
            );
        }
    }

    #[test]
    fn reversal_flips_divergence_sign() {
        let k = Constants::natural();
        let pw: Arc<dyn FieldProvider> =
            Arc::new(PlaneWave::new(1.0, [2.0, 0.0, 0.0], [0.0, 1.0, 0.0], 0.1, &k).unwrap());
        let s = Scenario::new(pw.clone(), 1.0, vec![1.0]).unwrap();
        let rev = reverse_process(&s, 1.0);
        // div(E' x B')(x, t) = -div(E x B)(x, t0 - t)
        let p = real_point(0.3, -0.2, 0.5, 0.4);
        let mirrored = real_point(0.3, -0.2, 0.5, 0.6);
        let a = rev.provider.jet(&p).poynting_divergence();
        let b = pw.jet(&mirrored).poynting_divergence();
        assert!((a + b).norm() < 1e-10);
    }

    #[test]
    fn extract_parallel_cases() {
        // constructed parallel pair
        let b = CVec3::new(c64(1.0, 0.0), c64(0.0, 1.0), c64(0.0, 0.0));
        let f = EMField { e: b.scale(c64(2.0, 0.0)), b };
        match extract_parallel(&f).unwrap() {
            ParallelExtract::Parallel(l) => assert!((l - c64(2.0, 0.0)).norm() < 1e-12),
            _ => panic!("expected parallel"),
        }
        // orthogonal pair rejected
        let f = EMField { e: CVec3::basis(0), b: CVec3::basis(1) };
        assert_eq!(extract_parallel(&f).unwrap(), ParallelExtract::NotParallel);
        // zero B is an error
        let f = EMField { e: CVec3::basis(0), b: CVec3::zero() };
        assert!(matches!(extract_parallel(&f), Err(Error::ZeroB)));
        // noisy parallel pair recovered
        let ll = c64(0.7, -1.3);
        let b = CVec3::new(c64(0.2, 0.5), c64(-0.8, 0.1), c64(0.4, 0.0));
        let mut e = b.scale(ll);
        e.x += c64(1e-13, 0.0);
        match extract_parallel(&EMField { e, b }).unwrap() {
            ParallelExtract::Parallel(l) => assert!((l - ll).norm() < 1e-9),
            _ => panic!("expected parallel"),
        }
    }

    #[test]
    fn decay_check_flags() {
        // 1/(1 + r^2) envelope decays
        struct Envelope;
        impl FieldProvider for Envelope {
            fn sample(&self, p: &Point) -> crate::provider::FieldSample {
                let r2 = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).norm();
                let amp = 1.0 / (1.0 + r2);
                crate::provider::FieldSample::vacuum(
                    CVec3::from_real(amp, 0.0, 0.0),
                    CVec3::from_real(0.0, amp, 0.0),
                )
            }
        }
        let s = Scenario::new(Arc::new(Envelope), 0.0, vec![1.0, 2.0]).unwrap();
        let rep = decay_check(&s, 0.0, &[1.0, 2.0, 4.0, 8.0]).unwrap();
        assert!(rep.decaying);
        // constant fields flagged non-decaying
        let s = Scenario::new(Arc::new(crossed_fields(1.0, 1.0)), 0.0, vec![1.0, 2.0]).unwrap();
        let rep = decay_check(&s, 0.0, &[1.0, 2.0, 4.0]).unwrap();
        assert!(!rep.decaying);
        // plane wave has constant amplitude: non-decaying
        let k = Constants::natural();
        let pw = PlaneWave::new(1.0, [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], 0.0, &k).unwrap();
        let s = Scenario::new(Arc::new(pw), 0.0, vec![1.0, 2.0]).unwrap();
        let rep = decay_check(&s, 0.0, &[1.0, 3.0, 9.0]).unwrap();
        assert!(!rep.decaying);
    }

    #[test]
    fn scenario_validation() {
        let p: Arc<dyn FieldProvider> = Arc::new(crossed_fields(1.0, 1.0));
        assert!(Scenario::new(p.clone(), 0.0, vec![]).is_err());
        assert!(Scenario::new(p.clone(), 0.0, vec![2.0, 1.0]).is_err());
        assert!(Scenario::new(p, 0.0, vec![1.0, 2.0]).is_ok());
    }
}
