//! Seeded, reproducible identity suites. Each check runs a named identity
//! over randomized inputs and reports the worst residual against a declared
//! tolerance; the CLI and the acceptance tests share these runners.

use num_complex::Complex64 as C64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::sync::Arc;

use crate::constants::Constants;
use crate::error::{Error, Result};
use crate::fields::{transform_em_boost, EMField};
use crate::frame::{FrameChain, FrameStep};
use crate::jet::real_point;
use crate::kinematics::{
    boost_matrix, boost_matrix_with_gamma, compose_boosts, compose_gamma, conjugate_boost_residual,
    decompose, gamma, rotation_matrix, rotation_taking_e1_to, thomas_rotation, velocity_compose,
    Branch, BoostSpec, Orthogonal3, TimeConvention,
};
use crate::linalg::{c64, CMat3, CVec3};
use crate::nonradiating::{
    classically_nonradiating, decay_check, extract_parallel, flux_scan, FluxConfig,
    ParallelExtract, Scenario,
};
use crate::nullspace::{nullspace_analysis, RowVariant, SystemKind};
use crate::provider::{crossed_fields, FieldProvider, PlaneWave};
use crate::stress::{
    big_equation_pipeline_row, big_equation_row, build_stress_energy, limit_row, times_u_row,
    unknown_name, corner_det_exact, corner_det_reference, corner_matrix, OrthonormalTriple,
    KNOWN_CLOSED_FORM_DEVIATIONS, N_UNKNOWNS,
};

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub trials: usize,
    pub tolerance: f64,
    pub max_residual: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckResult {
    fn new(name: &str, trials: usize, tolerance: f64, max_residual: f64) -> Self {
        CheckResult {
            name: name.into(),
            trials,
            tolerance,
            max_residual,
            pass: max_residual <= tolerance,
            note: None,
        }
    }

    fn with_note(mut self, note: String) -> Self {
        self.note = Some(note);
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

pub struct CheckCtx {
    pub seed: u64,
    pub trials: usize,
    pub constants: Constants,
    pub tol_override: Option<f64>,
}

impl CheckCtx {
    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    fn tol(&self, default: f64) -> f64 {
        self.tol_override.unwrap_or(default)
    }
}

fn rand_real_vec<R: Rng>(rng: &mut R, max: f64) -> CVec3 {
    CVec3::from_real(
        rng.gen_range(-max..max),
        rng.gen_range(-max..max),
        rng.gen_range(-max..max),
    )
}

fn rand_complex_vec<R: Rng>(rng: &mut R, re: f64, im: f64) -> CVec3 {
    CVec3::new(
        c64(rng.gen_range(-re..re), rng.gen_range(-im..im)),
        c64(rng.gen_range(-re..re), rng.gen_range(-im..im)),
        c64(rng.gen_range(-re..re), rng.gen_range(-im..im)),
    )
}

fn rand_rotation<R: Rng>(rng: &mut R) -> Orthogonal3 {
    loop {
        let a = rand_real_vec(rng, 1.0);
        if a.norm() < 1e-2 {
            continue;
        }
        let a = a.scale(c64(1.0 / a.norm(), 0.0));
        let mut b = rand_real_vec(rng, 1.0);
        b = b.sub(&a.scale(a.cdot(&b)));
        if b.norm() < 1e-2 {
            continue;
        }
        let b = b.scale(c64(1.0 / b.norm(), 0.0));
        let c = a.cross(&b);
        return Orthogonal3::new(CMat3::from_cols(a, b, c)).expect("orthonormal by construction");
    }
}

fn rand_orthogonal<R: Rng>(rng: &mut R) -> Orthogonal3 {
    let g = rand_rotation(rng);
    if rng.gen_bool(0.5) {
        let refl =
            Orthogonal3::from_real([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]]).unwrap();
        g.compose(&refl)
    } else {
        g
    }
}

// --- kinematics checks -----------------------------------------------------

pub fn check_conjugation_real(ctx: &CheckCtx) -> CheckResult {
    let k = &ctx.constants;
    let mut rng = ctx.rng();
    let mut worst = 0.0f64;
    for _ in 0..ctx.trials {
        let g = rand_orthogonal(&mut rng);
        let v = rand_real_vec(&mut rng, 0.99 * k.c / 3f64.sqrt());
        let r = conjugate_boost_residual(&g, &BoostSpec::new(v, Branch::Principal), k)
            .expect("subluminal velocity");
        worst = worst.max(r);
    }
    CheckResult::new("conjugation_real", ctx.trials, ctx.tol(1e-10), worst)
}

pub fn check_conjugation_complex(ctx: &CheckCtx) -> CheckResult {
    let k = &ctx.constants;
    let mut rng = ctx.rng();
    let mut worst = 0.0f64;
    let mut done = 0;
    while done < ctx.trials {
        let target = rand_complex_vec(&mut rng, 1.0, 0.6);
        let Ok(g) = rotation_taking_e1_to(&target) else { continue };
        let v = rand_complex_vec(&mut rng, 0.4, 0.25);
        if (v.csq() - c64(k.c * k.c, 0.0)).norm() < 1e-3 {
            continue;
        }
        let Ok(r) = conjugate_boost_residual(&g, &BoostSpec::new(v, Branch::Principal), k) else {
            continue;
        };
        worst = worst.max(r);
        done += 1;
    }
    CheckResult::new("conjugation_complex", ctx.trials, ctx.tol(1e-9), worst)
}

pub fn check_composition_thomas(ctx: &CheckCtx) -> CheckResult {
    let k = &ctx.constants;
    let mut rng = ctx.rng();
    let mut worst = 0.0f64;
    for _ in 0..ctx.trials {
        let u = rand_real_vec(&mut rng, 0.9 * k.c / 3f64.sqrt());
        let v = rand_real_vec(&mut rng, 0.9 * k.c / 3f64.sqrt());
        if u.norm() < 1e-3 || v.norm() < 1e-3 {
            continue;
        }
        let su = BoostSpec::new(u, Branch::Principal);
        let sv = BoostSpec::new(v, Branch::Principal);
        let (g, wspec, guv) = compose_boosts(&su, &sv, k).expect("admissible");
        let lhs = boost_matrix(&sv, k).unwrap().mul(&boost_matrix(&su, k).unwrap());
        let rhs = rotation_matrix(&g)
            .mul(&boost_matrix_with_gamma(&wspec.v, guv, TimeConvention::TimeCT, k).unwrap());
        worst = worst.max(lhs.sub(&rhs).frobenius());
        let vu = velocity_compose(&v, &u, Branch::Principal, k).unwrap();
        worst = worst.max(g.apply(&wspec.v).sub(&vu).norm());
    }
    CheckResult::new("composition_thomas", ctx.trials, ctx.tol(1e-9), worst)
}

pub fn check_gamma_composition(ctx: &CheckCtx) -> CheckResult {
    let k = &ctx.constants;
    let mut rng = ctx.rng();
    let mut worst = 0.0f64;
    for _ in 0..ctx.trials {
        let u = rand_real_vec(&mut rng, 0.55 * k.c);
        let v = rand_real_vec(&mut rng, 0.55 * k.c);
        if u.norm() < 1e-3 {
            continue;
        }
        let gu = gamma(&u, Branch::Principal, k).unwrap();
        let gv = gamma(&v, Branch::Principal, k).unwrap();
        let w = velocity_compose(&u, &v, Branch::Principal, k).unwrap();
        let guv = compose_gamma(gu, gv, &u, &v, k);
        let direct = gamma(&w, Branch::Principal, k).unwrap();
        let d = (guv - direct).norm().min((guv + direct).norm()) / guv.norm();
        worst = worst.max(d);
    }
    CheckResult::new("gamma_composition", ctx.trials, ctx.tol(1e-12), worst)
}

pub fn check_square_identity(ctx: &CheckCtx) -> CheckResult {
    let k = &ctx.constants;
    let c2 = c64(k.c * k.c, 0.0);
    let mut rng = ctx.rng();
    let mut worst = 0.0f64;
    for trial in 0..ctx.trials {
        let complex = trial % 5 == 0;
        let (u, v) = if complex {
            (rand_complex_vec(&mut rng, 0.4, 0.25), rand_complex_vec(&mut rng, 0.4, 0.25))
        } else {
            (rand_real_vec(&mut rng, 0.55 * k.c), rand_real_vec(&mut rng, 0.55 * k.c))
        };
        if u.csq().norm() < 1e-4 || (u.csq() - c2).norm() < 1e-3 || (v.csq() - c2).norm() < 1e-3 {
            continue;
        }
        let denom = c64(1.0, 0.0) + u.cdot(&v) / c2;
        if denom.norm() < 1e-3 {
            continue;
        }
        let w = velocity_compose(&u, &v, Branch::Principal, k).unwrap();
        let rhs = (u.add(&v).csq() - u.cross(&v).csq() / c2) / (denom * denom);
        let rel = (w.csq() - rhs).norm() / rhs.norm().max(1e-9);
        worst = worst.max(rel);
    }
    CheckResult::new("square_identity", ctx.trials, ctx.tol(1e-10), worst)
}

pub fn check_complex_composition(ctx: &CheckCtx) -> CheckResult {
    let k = &ctx.constants;
    let c2 = c64(k.c * k.c, 0.0);
    let mut rng = ctx.rng();
    let mut worst = 0.0f64;
    let mut done = 0usize;
    let target = ctx.trials.max(100);
    while done < target {
        let u = rand_complex_vec(&mut rng, 0.45, 0.3);
        let v = rand_complex_vec(&mut rng, 0.45, 0.3);
        let dag = {
            let a = c64(1.0, 0.0) + u.cdot(&v) / c2;
            a * a - (c64(1.0, 0.0) - u.csq() / c2) * (c64(1.0, 0.0) - v.csq() / c2)
        };
        if u.csq().norm() < 1e-3
            || v.csq().norm() < 1e-3
            || (u.csq() - c2).norm() < 1e-3
            || (v.csq() - c2).norm() < 1e-3
            || (c64(1.0, 0.0) + u.cdot(&v) / c2).norm() < 1e-3
            || dag.norm() < 1e-3
        {
            continue;
        }
        let bu = if rng.gen_bool(0.5) { Branch::Principal } else { Branch::Negated };
        let bv = if rng.gen_bool(0.5) { Branch::Principal } else { Branch::Negated };
        let gu = gamma(&u, bu, k).unwrap();
        let gv = gamma(&v, bv, k).unwrap();
        let guv = compose_gamma(gu, gv, &u, &v, k);
        let w = velocity_compose(&u, &v, bu, k).unwrap();
        let Ok(g) = thomas_rotation(&u, &v, bu, bv, k) else { continue };
        let Ok(bw) = boost_matrix_with_gamma(&w, guv, TimeConvention::TimeCT, k) else { continue };
        let lhs = boost_matrix(&BoostSpec::new(v, bv), k)
            .unwrap()
            .mul(&boost_matrix(&BoostSpec::new(u, bu), k).unwrap());
        let rhs = rotation_matrix(&g).mul(&bw);
        worst = worst.max(lhs.sub(&rhs).frobenius());
        // gamma of w matches one of the two roots, relative 1e-10
        let direct = gamma(&w, Branch::Principal, k).unwrap();
        let rel = (guv - direct).norm().min((guv + direct).norm()) / guv.norm();
        worst = worst.max(rel.max(0.0));
        done += 1;
    }
    CheckResult::new("complex_composition", target, ctx.tol(1e-8), worst)
}

pub fn check_decompose_roundtrip(ctx: &CheckCtx) -> CheckResult {
    let k = &ctx.constants;
    let mut rng = ctx.rng();
    let mut worst = 0.0f64;
    for _ in 0..ctx.trials {
        let g = rand_orthogonal(&mut rng);
        let v = rand_real_vec(&mut rng, 0.55 * k.c);
        let spec = BoostSpec::new(v, Branch::Principal);
        let l = rotation_matrix(&g).mul(&boost_matrix(&spec, k).unwrap());
        let fm = decompose(&l, k).expect("valid group element");
        worst = worst.max(fm.boost.v.sub(&v).norm() / k.c);
        worst = worst.max(fm.rotation.m.sub(&g.m).frobenius());
        worst = worst.max(fm.recomposition_residual(k).unwrap());
    }
    CheckResult::new("decompose_roundtrip", ctx.trials, ctx.tol(1e-9), worst)
}

pub fn check_negation_identity(ctx: &CheckCtx) -> CheckResult {
    let k = &ctx.constants;
    let mut rng = ctx.rng();
    let mut worst = 0.0f64;
    for _ in 0..ctx.trials {
        let u = rand_real_vec(&mut rng, 0.55 * k.c);
        let v = rand_real_vec(&mut rng, 0.55 * k.c);
        let lhs = velocity_compose(&v, &u, Branch::Principal, k).unwrap().neg();
        let rhs = velocity_compose(&v.neg(), &u.neg(), Branch::Principal, k).unwrap();
        worst = worst.max(lhs.sub(&rhs).norm());
    }
    CheckResult::new("negation_identity", ctx.trials, ctx.tol(1e-11), worst)
}

pub fn check_limit_matrix_convergence(ctx: &CheckCtx) -> CheckResult {
    let k = &ctx.constants;
    let dir = CVec3::basis(0);
    let binf = crate::kinematics::limit_boost(&dir).unwrap();
    let mut pts = Vec::new();
    for exp in [2, 3, 4, 5, 6] {
        let f = 10f64.powi(exp) * k.c;
        let g = gamma(&CVec3::from_real(f, 0.0, 0.0), Branch::Principal, k).unwrap();
        let b = boost_matrix_with_gamma(&CVec3::from_real(f, 0.0, 0.0), g, TimeConvention::TimeCT, k)
            .unwrap();
        pts.push((f.ln(), b.sub(&binf).frobenius().ln()));
    }
    let slope = fit_slope(&pts);
    CheckResult::new("limit_matrix_convergence", pts.len(), ctx.tol(0.1), (slope + 1.0).abs())
        .with_note(format!("log-log slope {slope:.4}"))
}

fn fit_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

// --- field checks ------------------------------------------------------------

fn sample_wave(k: &Constants) -> PlaneWave {
    PlaneWave::new(1.0, [2.0 / k.c, 0.0, 0.0], [0.0, 1.0, 0.0], 0.2, k).expect("valid wave")
}

pub fn check_plane_wave_rest_residual(ctx: &CheckCtx) -> CheckResult {
    let k = &ctx.constants;
    let mut rng = ctx.rng();
    let pw = sample_wave(k);
    let mut worst = 0.0f64;
    for _ in 0..ctx.trials {
        let p = real_point(
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
        );
        worst = worst.max(pw.jet(&p).max_maxwell_residual(k));
    }
    CheckResult::new("plane_wave_rest_residual", ctx.trials, ctx.tol(1e-12), worst)
}

pub fn check_maxwell_frame_invariance(ctx: &CheckCtx) -> CheckResult {
    let k = &ctx.constants;
    let mut rng = ctx.rng();
    let pw = sample_wave(k);
    let mut worst = 0.0f64;
    for trial in 0..ctx.trials.max(100) {
        let step = match trial % 3 {
            0 => FrameStep::Rotation(rand_rotation(&mut rng)),
            1 => FrameStep::Rotation(rand_orthogonal(&mut rng)),
            _ => FrameStep::Boost(BoostSpec::new(
                rand_real_vec(&mut rng, 0.55 * k.c),
                Branch::Principal,
            )),
        };
        let chain = FrameChain::new(vec![step], k).expect("valid step");
        let p = real_point(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let jet = chain.transform_jet(&pw.jet(&p));
        worst = worst.max(jet.max_maxwell_residual(k));
    }
    CheckResult::new("maxwell_frame_invariance", ctx.trials.max(100), ctx.tol(1e-9), worst)
}

pub fn check_em_roundtrip(ctx: &CheckCtx) -> CheckResult {
    let k = &ctx.constants;
    let mut rng = ctx.rng();
    let mut worst = 0.0f64;
    for _ in 0..ctx.trials {
        let f = EMField { e: rand_complex_vec(&mut rng, 1.0, 0.5), b: rand_complex_vec(&mut rng, 1.0, 0.5) };
        let cc = crate::fields::ChargeCurrent {
            rho: c64(rng.gen_range(-1.0..1.0), 0.0),
            j: rand_real_vec(&mut rng, 1.0),
        };
        let spec = BoostSpec::new(rand_real_vec(&mut rng, 0.55 * k.c), Branch::Principal);
        let back = spec.negated_velocity();
        let f2 = transform_em_boost(&transform_em_boost(&f, &spec, k).unwrap(), &back, k).unwrap();
        worst = worst.max(f2.e.sub(&f.e).norm().max(f2.b.sub(&f.b).norm()));
        let cc2 = crate::fields::transform_cc_boost(
            &crate::fields::transform_cc_boost(&cc, &spec, k).unwrap(),
            &back,
            k,
        )
        .unwrap();
        worst = worst.max((cc2.rho - cc.rho).norm().max(cc2.j.sub(&cc.j).norm()));
    }
    CheckResult::new("em_roundtrip", ctx.trials, ctx.tol(1e-11), worst)
}

pub fn check_limit_field_convergence(ctx: &CheckCtx) -> CheckResult {
    let k = &ctx.constants;
    let dir = CVec3::basis(0);
    let f = EMField {
        e: CVec3::from_real(0.3, 0.7, -0.2),
        b: CVec3::from_real(-0.1, 0.4, 0.9),
    };
    let cc = crate::fields::ChargeCurrent { rho: c64(0.8, 0.0), j: CVec3::from_real(0.2, -0.5, 0.3) };
    let fl = crate::fields::transform_em_limit(&f, &dir, k).unwrap();
    let ccl = crate::fields::transform_cc_limit(&cc, &dir, k).unwrap();
    let mut pts = Vec::new();
    for exp in [2, 3, 4, 5, 6] {
        let speed = 10f64.powi(exp) * k.c;
        let spec = BoostSpec::new(CVec3::from_real(speed, 0.0, 0.0), Branch::Principal);
        let ff = transform_em_boost(&f, &spec, k).unwrap();
        let cf = crate::fields::transform_cc_boost(&cc, &spec, k).unwrap();
        let err = ff.e.sub(&fl.e).norm()
            + ff.b.sub(&fl.b).norm()
            + (cf.rho - ccl.rho).norm()
            + cf.j.sub(&ccl.j).norm();
        pts.push((speed.ln(), err.ln()));
    }
    let slope = fit_slope(&pts);
    CheckResult::new("limit_field_convergence", pts.len(), ctx.tol(0.1), (slope + 1.0).abs())
        .with_note(format!("log-log slope {slope:.4}"))
}

pub fn check_path_independence(ctx: &CheckCtx) -> CheckResult {
    let k = &ctx.constants;
    let mut rng = ctx.rng();
    let pw = sample_wave(k);
    let mut worst = 0.0f64;
    for _ in 0..ctx.trials.min(100) {
        let u = BoostSpec::new(rand_real_vec(&mut rng, 0.45 * k.c), Branch::Principal);
        let v = BoostSpec::new(rand_real_vec(&mut rng, 0.45 * k.c), Branch::Principal);
        if u.v.norm() < 1e-3 || v.v.norm() < 1e-3 {
            continue;
        }
        let Ok((g, wspec, _)) = compose_boosts(&u, &v, k) else { continue };
        let chain_a = FrameChain::new(vec![FrameStep::Boost(u), FrameStep::Boost(v)], k).unwrap();
        let chain_b =
            FrameChain::new(vec![FrameStep::Boost(wspec), FrameStep::Rotation(g)], k).unwrap();
        worst = worst.max(chain_a.lambda.sub(&chain_b.lambda).frobenius());
        let jet = pw.jet(&real_point(0.3, -0.2, 0.5, 0.4));
        let ja = chain_a.transform_jet(&jet);
        let jb = chain_b.transform_jet(&jet);
        for comp in 0..3 {
            for axis in 0..4 {
                worst = worst.max((ja.e[comp].grad[axis] - jb.e[comp].grad[axis]).norm());
            }
        }
    }
    CheckResult::new("path_independence", ctx.trials.min(100), ctx.tol(1e-9), worst)
}

pub fn check_twist_square(ctx: &CheckCtx) -> CheckResult {
    let k = &ctx.constants;
    let mut rng = ctx.rng();
    let pw = sample_wave(k);
    let mut worst = 0.0f64;
    for _ in 0..ctx.trials.min(100) {
        let g = rand_orthogonal(&mut rng);
        let v = rand_real_vec(&mut rng, 0.45 * k.c);
        let spec = BoostSpec::new(v, Branch::Principal);
        let gspec = BoostSpec::new(g.apply(&v), Branch::Principal);
        let chain_a =
            FrameChain::new(vec![FrameStep::Boost(spec), FrameStep::Rotation(g)], k).unwrap();
        let chain_b =
            FrameChain::new(vec![FrameStep::Rotation(g), FrameStep::Boost(gspec)], k).unwrap();
        let jet = pw.jet(&real_point(0.2, 0.5, -0.1, 0.7));
        let da = chain_a.transform_jet(&jet).poynting_divergence();
        let db = chain_b.transform_jet(&jet).poynting_divergence();
        worst = worst.max((da - db).norm());
    }
    CheckResult::new("twist_square", ctx.trials.min(100), ctx.tol(1e-9), worst)
}

pub fn check_potential_square(ctx: &CheckCtx) -> CheckResult {
    let k = &ctx.constants;
    let mut rng = ctx.rng();
    let mut worst = 0.0f64;
    for _ in 0..ctx.trials.min(200) {
        let mut grad = || {
            [
                c64(rng.gen_range(-1.0..1.0), 0.0),
                c64(rng.gen_range(-1.0..1.0), 0.0),
                c64(rng.gen_range(-1.0..1.0), 0.0),
                c64(rng.gen_range(-1.0..1.0), 0.0),
            ]
        };
        let pj = crate::fields::PotentialJet {
            point: real_point(0.0, 0.0, 0.0, 0.0),
            v_over_c: crate::jet::Jet1::new(c64(0.2, 0.0), grad()),
            a: [
                crate::jet::Jet1::new(c64(0.1, 0.0), grad()),
                crate::jet::Jet1::new(c64(-0.4, 0.0), grad()),
                crate::jet::Jet1::new(c64(0.3, 0.0), grad()),
            ],
        };
        let spec = BoostSpec::new(rand_real_vec(&mut rng, 0.5 * k.c), Branch::Principal);
        let f_then = transform_em_boost(&crate::fields::fields_from_potential(&pj, k), &spec, k).unwrap();
        let chain = FrameChain::new(vec![FrameStep::Boost(spec)], k).unwrap();
        let pj2 = chain.transform_potential_jet(&pj, k).unwrap();
        let f_after = crate::fields::fields_from_potential(&pj2, k);
        worst = worst.max(f_then.e.sub(&f_after.e).norm().max(f_then.b.sub(&f_after.b).norm()));
    }
    CheckResult::new("potential_square", ctx.trials.min(200), ctx.tol(1e-9), worst)
}

// --- stress checks -----------------------------------------------------------

pub fn check_trace_identity(ctx: &CheckCtx) -> CheckResult {
    let k = &ctx.constants;
    let mut rng = ctx.rng();
    let mut worst = 0.0f64;
    for _ in 0..ctx.trials {
        let f = EMField { e: rand_complex_vec(&mut rng, 1.0, 0.5), b: rand_complex_vec(&mut rng, 1.0, 0.5) };
        worst = worst.max(build_stress_energy(&f, k).trace_residual().norm());
    }
    CheckResult::new("trace_identity", ctx.trials, ctx.tol(1e-10), worst)
}

pub fn check_cross_path_stress(ctx: &CheckCtx) -> CheckResult {
    let k = &ctx.constants;
    let mut rng = ctx.rng();
    let mut worst = 0.0f64;
    for _ in 0..ctx.trials {
        let f = EMField { e: rand_real_vec(&mut rng, 1.0), b: rand_real_vec(&mut rng, 1.0) };
        let v = rng.gen_range(-0.9..0.9) * k.c;
        let spec = BoostSpec::real(v, 0.0, 0.0);
        let lambda = boost_matrix(&spec, k).unwrap();
        let via_tensor =
            crate::stress::transform_stress_energy(&build_stress_energy(&f, k), &lambda, k).unwrap();
        let via_fields = build_stress_energy(&transform_em_boost(&f, &spec, k).unwrap(), k);
        worst = worst.max((via_tensor.sigma - via_fields.sigma).norm());
        worst = worst.max(via_tensor.g.sub(&via_fields.g).norm());
        worst = worst.max(via_tensor.p.sub(&via_fields.p).frobenius());
    }
    CheckResult::new("cross_path_stress", ctx.trials, ctx.tol(1e-9), worst)
}

pub fn check_algebra_identity(ctx: &CheckCtx) -> CheckResult {
    let mut rng = ctx.rng();
    let mut worst = 0.0f64;
    for _ in 0..ctx.trials {
        let t = crate::nullspace::sample_triple(&mut rng);
        worst = worst.max((t.algebra_identity() - c64(1.0, 0.0)).norm());
    }
    CheckResult::new("algebra_identity", ctx.trials, ctx.tol(1e-12), worst)
}

pub fn check_pipeline_cross_check(ctx: &CheckCtx) -> CheckResult {
    let k = &ctx.constants;
    let mut rng = ctx.rng();
    let mut worst = 0.0f64;
    let mut done = 0usize;
    while done < 10 {
        let t = crate::nullspace::sample_triple(&mut rng);
        let u = rng.gen_range(0.1..0.9) * k.c;
        let published = big_equation_row(&t, u, k, crate::stress::RowVariant::Published).unwrap();
        let pipeline = big_equation_pipeline_row(&t, u, k).unwrap();
        for idx in 0..N_UNKNOWNS {
            let name = unknown_name(idx);
            let deviates = KNOWN_CLOSED_FORM_DEVIATIONS
                .iter()
                .any(|(q, d)| name == format!("d {q}/d{d}"));
            if !deviates {
                let scale = pipeline[idx].norm().max(1.0);
                worst = worst.max((published[idx] - pipeline[idx]).norm() / scale);
            }
        }
        done += 1;
    }
    CheckResult::new("pipeline_cross_check", 10, ctx.tol(1e-10), worst).with_note(
        "published closed forms vs substitution pipeline on the 36 agreeing entries".into(),
    )
}

pub fn check_limit_coefficient_match(ctx: &CheckCtx) -> CheckResult {
    // derived rows against a large-u evaluation of the derived closed forms:
    // |row(u) - (limit + times_u/u)| = O(1/u^2)
    let k = &ctx.constants;
    let mut rng = ctx.rng();
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let t = crate::nullspace::sample_triple(&mut rng);
        let lim = limit_row(&t, k, RowVariant::Derived);
        let xu = times_u_row(&t, k, RowVariant::Derived);
        // evaluate through the pipeline at a large complex-branch speed by
        // forming gamma = -ic/u (principal branch continuation)
        let u = 1e7 * k.c;
        let row = pipeline_row_superluminal(&t, u, k);
        for idx in 0..N_UNKNOWNS {
            let approx = lim[idx] + xu[idx] / c64(u, 0.0);
            worst = worst.max((row[idx] - approx).norm());
        }
    }
    CheckResult::new("limit_coefficient_match", 10, ctx.tol(1e-8), worst)
}

fn pipeline_row_superluminal(t: &OrthonormalTriple, u: f64, k: &Constants) -> crate::stress::Row40 {
    // derived closed forms remain valid off the real segment; evaluate them
    // with the principal-branch superluminal gamma by analytic continuation
    // of the pipeline matrices.
    let g = c64(0.0, -1.0) * c64(k.c / u, 0.0) / c64((1.0 - (k.c / u).powi(2)).sqrt(), 0.0);
    pipeline_with_gamma(t, u, g, k)
}

fn pipeline_with_gamma(t: &OrthonormalTriple, u: f64, g: C64, k: &Constants) -> crate::stress::Row40 {
    use crate::stress::{quantity_index, unknown_index};
    let eps = c64(k.eps0, 0.0);
    let c2 = c64(k.c * k.c, 0.0);
    let uu = c64(u, 0.0);
    let g2 = g * g;
    let qi = |name: &str| quantity_index(name).unwrap();
    let pidx = |i: usize, j: usize| -> usize {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        match (a, b) {
            (0, 0) => qi("p11"),
            (0, 1) => qi("p12"),
            (0, 2) => qi("p13"),
            (1, 1) => qi("p22"),
            (1, 2) => qi("p23"),
            (2, 2) => qi("p33"),
            _ => unreachable!(),
        }
    };
    let mut row = [[c64(0.0, 0.0); 4]; 10];
    row[qi("g1")][3] = c64(1.0, 0.0) / eps;
    row[qi("p12")][1] = c64(1.0, 0.0) / eps;
    row[qi("p13")][2] = c64(1.0, 0.0) / eps;
    let q = CMat3::from_cols(t.theta, t.theta_p, t.theta_pp);
    let mut m1 = [[c64(0.0, 0.0); 10]; 10];
    m1[qi("sigma")][qi("sigma")] = c64(1.0, 0.0);
    for i in 0..3 {
        for kk in 0..3 {
            m1[qi(&format!("g{}", i + 1))][qi(&format!("g{}", kk + 1))] = q.m[kk][i];
        }
    }
    for i in 0..3 {
        for j in i..3 {
            for kk in 0..3 {
                for l in 0..3 {
                    m1[pidx(i, j)][pidx(kk, l)] += q.m[kk][i] * q.m[l][j];
                }
            }
        }
    }
    let mut d1 = [[c64(0.0, 0.0); 4]; 4];
    for kk in 0..3 {
        d1[0][kk] = t.theta.comp(kk);
        d1[1][kk] = t.theta_p.comp(kk);
        d1[2][kk] = t.theta_pp.comp(kk);
    }
    d1[3][3] = c64(1.0, 0.0);
    let mut m2 = [[c64(0.0, 0.0); 10]; 10];
    m2[qi("sigma")][qi("sigma")] = g2;
    m2[qi("sigma")][qi("g1")] = -c64(2.0, 0.0) * uu * g2;
    m2[qi("sigma")][qi("p11")] = g2 * uu * uu / c2;
    m2[qi("g1")][qi("sigma")] = -g2 * uu / c2;
    m2[qi("g1")][qi("g1")] = g2 * (c64(1.0, 0.0) + uu * uu / c2);
    m2[qi("g1")][qi("p11")] = -g2 * uu / c2;
    m2[qi("g2")][qi("g2")] = g;
    m2[qi("g2")][qi("p12")] = -g * uu / c2;
    m2[qi("g3")][qi("g3")] = g;
    m2[qi("g3")][qi("p13")] = -g * uu / c2;
    m2[qi("p11")][qi("sigma")] = g2 * uu * uu / c2;
    m2[qi("p11")][qi("g1")] = -c64(2.0, 0.0) * uu * g2;
    m2[qi("p11")][qi("p11")] = g2;
    m2[qi("p12")][qi("g2")] = -g * uu;
    m2[qi("p12")][qi("p12")] = g;
    m2[qi("p13")][qi("g3")] = -g * uu;
    m2[qi("p13")][qi("p13")] = g;
    m2[qi("p22")][qi("p22")] = c64(1.0, 0.0);
    m2[qi("p23")][qi("p23")] = c64(1.0, 0.0);
    m2[qi("p33")][qi("p33")] = c64(1.0, 0.0);
    let mut d2 = [[c64(0.0, 0.0); 4]; 4];
    d2[0][0] = g;
    d2[0][3] = g * uu / c2;
    d2[1][1] = c64(1.0, 0.0);
    d2[2][2] = c64(1.0, 0.0);
    d2[3][3] = g;
    d2[3][0] = g * uu;
    let substitute = |row: &[[C64; 4]; 10], m: &[[C64; 10]; 10], d: &[[C64; 4]; 4]| {
        let mut new = [[c64(0.0, 0.0); 4]; 10];
        for a in 0..10 {
            for muu in 0..4 {
                let coeff = row[a][muu];
                if coeff.norm() == 0.0 {
                    continue;
                }
                for b in 0..10 {
                    if m[a][b].norm() == 0.0 {
                        continue;
                    }
                    for nuu in 0..4 {
                        if d[muu][nuu].norm() == 0.0 {
                            continue;
                        }
                        new[b][nuu] += coeff * m[a][b] * d[muu][nuu];
                    }
                }
            }
        }
        new
    };
    let row = substitute(&row, &m1, &d1);
    let row = substitute(&row, &m2, &d2);
    let mut out = [c64(0.0, 0.0); N_UNKNOWNS];
    for qq in 0..10 {
        for dd in 0..4 {
            out[unknown_index(qq, dd)] = row[qq][dd];
        }
    }
    out
}

pub fn check_permutation_covariance(ctx: &CheckCtx) -> CheckResult {
    let k = &ctx.constants;
    let mut rng = ctx.rng();
    let mut worst = 0.0f64;
    for _ in 0..ctx.trials.min(100) {
        let t = crate::nullspace::sample_triple(&mut rng);
        let swapped = t.swap_yz();
        let a = crate::nullspace::permute_row_yz(&limit_row(&t, k, RowVariant::Derived));
        let b = limit_row(&swapped, k, RowVariant::Derived);
        for idx in 0..N_UNKNOWNS {
            worst = worst.max((a[idx] - b[idx]).norm());
        }
    }
    CheckResult::new("permutation_covariance", ctx.trials.min(100), ctx.tol(1e-10), worst)
}

pub fn check_det_consistency(ctx: &CheckCtx) -> CheckResult {
    use num_traits::ToPrimitive;
    let k = &ctx.constants;
    let exact = corner_det_exact().to_f64().unwrap() / k.eps0.powi(4);
    let float = corner_matrix(k.eps0).det();
    let rel = (float.re - exact).abs() / exact.abs();
    CheckResult::new("det_consistency", 1, ctx.tol(1e-12), rel.max(float.im.abs()))
        .with_note(format!("exact det * eps0^4 = {}", corner_det_exact()))
}

pub fn check_det_reference(ctx: &CheckCtx) -> CheckResult {
    let exact = corner_det_exact();
    let reference = corner_det_reference();
    let matches = exact == reference;
    let ratio = reference.clone() / exact.clone();
    let mut r = CheckResult::new("det_reference", 1, ctx.tol(0.0), if matches { 0.0 } else { 1.0 });
    r.note = Some(format!(
        "computed det(A) eps0^4 = {exact} (exact), reference value {reference}; ratio reference/computed = {ratio}"
    ));
    r
}

pub fn check_nullspace_example(ctx: &CheckCtx) -> CheckResult {
    let k = &ctx.constants;
    let report = match nullspace_analysis(ctx.seed, 80, SystemKind::Limit, RowVariant::Published, k) {
        Ok(r) => r,
        Err(e) => {
            return CheckResult::new("nullspace_example", 80, ctx.tol(0.0), 1.0)
                .with_note(format!("analysis failed: {e}"))
        }
    };
    let forced = report.forced_names();
    let wanted = ["d g2/dy", "d g3/dz", "d g1/dx", "d p22/dt"];
    let missing: Vec<&str> = wanted.iter().copied().filter(|w| !forced.contains(w)).collect();
    let residual = missing.len() as f64;
    CheckResult::new("nullspace_example", 80, ctx.tol(0.0), residual).with_note(format!(
        "forced set: {forced:?}; required subset missing: {missing:?}"
    ))
}

// --- nonradiating checks -------------------------------------------------------

pub fn check_reversal(ctx: &CheckCtx) -> CheckResult {
    let k = &ctx.constants;
    let mut rng = ctx.rng();
    let pw: Arc<dyn FieldProvider> = Arc::new(sample_wave(k));
    let t0 = 1.0;
    let rev = crate::provider::ReversedProvider { inner: pw.clone(), t0 };
    let mut worst = 0.0f64;
    for _ in 0..ctx.trials.min(200) {
        let p = real_point(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(0.0..t0),
        );
        let jr = rev.jet(&p);
        worst = worst.max(jr.max_maxwell_residual(k));
        worst = worst.max(jr.continuity_residual().norm());
        let mirrored = [p[0], p[1], p[2], c64(t0, 0.0) - p[3]];
        let jo = pw.jet(&mirrored);
        worst = worst.max((jr.poynting_divergence() + jo.poynting_divergence()).norm());
        worst = worst.max((jr.max_maxwell_residual(k) - jo.max_maxwell_residual(k)).abs());
    }
    CheckResult::new("reversal", ctx.trials.min(200), ctx.tol(1e-10), worst)
}

pub fn check_flux_divergence_theorem(ctx: &CheckCtx) -> CheckResult {
    let k = &ctx.constants;
    let mut worst = 0.0f64;
    let scenarios: Vec<(Arc<dyn FieldProvider>, &str)> = vec![
        (Arc::new(sample_wave(k)), "plane wave"),
        (Arc::new(crossed_fields(1.0, 1.0)), "crossed"),
    ];
    for (prov, _) in scenarios {
        let s = Scenario::new(prov, 0.0, vec![0.7, 1.4]).expect("valid radii");
        match flux_scan(&s, 0.2, &FluxConfig::default()) {
            Ok(rows) => {
                for row in rows {
                    let scale = row.volume_integral.abs().max(row.surface_integral.abs()).max(1.0);
                    let diff = (row.volume_integral - row.surface_integral).abs();
                    let allowed = row.abs_error_estimate.max(1e-6 * scale);
                    worst = worst.max((diff - allowed).max(0.0));
                }
            }
            Err(_) => worst = worst.max(1.0),
        }
    }
    CheckResult::new("flux_divergence_theorem", 2, ctx.tol(1e-9), worst)
}

pub fn check_constant_flux_zero(ctx: &CheckCtx) -> CheckResult {
    let s = Scenario::new(Arc::new(crossed_fields(1.0, 1.0)), 0.0, vec![0.5, 1.0, 2.0]).unwrap();
    match flux_scan(&s, 0.0, &FluxConfig::default()) {
        Ok(rows) => {
            let worst = rows
                .iter()
                .map(|r| r.volume_integral.abs().max(r.surface_integral.abs()))
                .fold(0.0, f64::max);
            let verdict = classically_nonradiating(&rows, 1e-8, 1e-6);
            CheckResult::new("constant_flux_zero", rows.len(), ctx.tol(1e-8), worst)
                .with_note(format!("classically non-radiating: {verdict}"))
        }
        Err(e) => CheckResult::new("constant_flux_zero", 0, ctx.tol(1e-8), 1.0)
            .with_note(format!("{e}")),
    }
}

pub fn check_extract_parallel(ctx: &CheckCtx) -> CheckResult {
    let mut rng = ctx.rng();
    let trials = ctx.trials.max(1000);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let b = rand_complex_vec(&mut rng, 1.0, 1.0);
        if b.norm() < 1e-3 {
            continue;
        }
        let lambda = c64(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let f = EMField { e: b.scale(lambda), b };
        match extract_parallel(&f) {
            Ok(ParallelExtract::Parallel(l)) => worst = worst.max((l - lambda).norm()),
            _ => worst = worst.max(1.0),
        }
    }
    // orthogonal case must be rejected
    let f = EMField { e: CVec3::basis(0), b: CVec3::basis(1) };
    if extract_parallel(&f) != Ok(ParallelExtract::NotParallel) {
        worst = worst.max(1.0);
    }
    CheckResult::new("extract_parallel", trials, ctx.tol(1e-9), worst)
}

pub fn check_decay_flags(ctx: &CheckCtx) -> CheckResult {
    let k = &ctx.constants;
    let mut failures = 0.0;
    let s = Scenario::new(Arc::new(crossed_fields(1.0, 1.0)), 0.0, vec![1.0, 2.0]).unwrap();
    if decay_check(&s, 0.0, &[1.0, 2.0, 4.0]).unwrap().decaying {
        failures += 1.0;
    }
    let s = Scenario::new(Arc::new(sample_wave(k)), 0.0, vec![1.0, 2.0]).unwrap();
    if decay_check(&s, 0.0, &[1.0, 3.0, 9.0]).unwrap().decaying {
        failures += 1.0;
    }
    CheckResult::new("decay_flags", 2, ctx.tol(0.0), failures)
}

// --- suite assembly ----------------------------------------------------------

type Runner = fn(&CheckCtx) -> CheckResult;

pub struct CheckDef {
    pub name: &'static str,
    pub aliases: &'static [&'static str],
    pub suite: &'static str,
    /// whether the check runs as part of the plain suite invocation
    pub default: bool,
    pub runner: Runner,
}

pub const CHECKS: &[CheckDef] = &[
    CheckDef { name: "conjugation_real", aliases: &[], suite: "kinematics", default: true, runner: check_conjugation_real },
    CheckDef { name: "conjugation_complex", aliases: &[], suite: "kinematics", default: true, runner: check_conjugation_complex },
    CheckDef { name: "composition_thomas", aliases: &[], suite: "kinematics", default: true, runner: check_composition_thomas },
    CheckDef { name: "gamma_composition", aliases: &[], suite: "kinematics", default: true, runner: check_gamma_composition },
    CheckDef { name: "square_identity", aliases: &[], suite: "kinematics", default: true, runner: check_square_identity },
    CheckDef { name: "complex_composition", aliases: &[], suite: "kinematics", default: true, runner: check_complex_composition },
    CheckDef { name: "decompose_roundtrip", aliases: &[], suite: "kinematics", default: true, runner: check_decompose_roundtrip },
    CheckDef { name: "negation_identity", aliases: &[], suite: "kinematics", default: true, runner: check_negation_identity },
    CheckDef { name: "limit_matrix_convergence", aliases: &[], suite: "kinematics", default: true, runner: check_limit_matrix_convergence },
    CheckDef { name: "plane_wave_rest_residual", aliases: &[], suite: "fields", default: true, runner: check_plane_wave_rest_residual },
    CheckDef { name: "maxwell_frame_invariance", aliases: &[], suite: "fields", default: true, runner: check_maxwell_frame_invariance },
    CheckDef { name: "em_roundtrip", aliases: &[], suite: "fields", default: true, runner: check_em_roundtrip },
    CheckDef { name: "limit_field_convergence", aliases: &[], suite: "fields", default: true, runner: check_limit_field_convergence },
    CheckDef { name: "path_independence", aliases: &[], suite: "fields", default: true, runner: check_path_independence },
    CheckDef { name: "twist_square", aliases: &[], suite: "fields", default: true, runner: check_twist_square },
    CheckDef { name: "potential_square", aliases: &[], suite: "fields", default: true, runner: check_potential_square },
    CheckDef { name: "trace_identity", aliases: &[], suite: "stress", default: true, runner: check_trace_identity },
    CheckDef { name: "cross_path_stress", aliases: &[], suite: "stress", default: true, runner: check_cross_path_stress },
    CheckDef { name: "algebra_identity", aliases: &[], suite: "stress", default: true, runner: check_algebra_identity },
    CheckDef { name: "pipeline_cross_check", aliases: &[], suite: "stress", default: true, runner: check_pipeline_cross_check },
    CheckDef { name: "limit_coefficient_match", aliases: &[], suite: "stress", default: true, runner: check_limit_coefficient_match },
    CheckDef { name: "permutation_covariance", aliases: &[], suite: "stress", default: true, runner: check_permutation_covariance },
    CheckDef { name: "det_consistency", aliases: &[], suite: "stress", default: true, runner: check_det_consistency },
    CheckDef { name: "det_reference", aliases: &["detA", "deta"], suite: "stress", default: false, runner: check_det_reference },
    CheckDef { name: "nullspace_example", aliases: &[], suite: "stress", default: true, runner: check_nullspace_example },
    CheckDef { name: "reversal", aliases: &[], suite: "nonradiating", default: true, runner: check_reversal },
    CheckDef { name: "flux_divergence_theorem", aliases: &[], suite: "nonradiating", default: true, runner: check_flux_divergence_theorem },
    CheckDef { name: "constant_flux_zero", aliases: &[], suite: "nonradiating", default: true, runner: check_constant_flux_zero },
    CheckDef { name: "extract_parallel", aliases: &[], suite: "nonradiating", default: true, runner: check_extract_parallel },
    CheckDef { name: "decay_flags", aliases: &[], suite: "nonradiating", default: true, runner: check_decay_flags },
];

pub const SUITES: &[&str] = &["kinematics", "fields", "stress", "nonradiating", "all"];

/// Run a suite (or a single named check when `only` is given).
pub fn run_suite(
    suite: &str,
    seed: u64,
    trials: usize,
    tol_override: Option<f64>,
    only: Option<&str>,
    constants: &Constants,
) -> Result<SuiteReport> {
    if !SUITES.contains(&suite) {
        return Err(Error::Config(format!(
            "unknown suite '{suite}'; expected one of {SUITES:?}"
        )));
    }
    if trials == 0 {
        return Err(Error::Config("trials must be positive".into()));
    }
    let ctx = CheckCtx { seed, trials, constants: *constants, tol_override };
    let selected: Vec<&CheckDef> = CHECKS
        .iter()
        .filter(|c| suite == "all" || c.suite == suite)
        .filter(|c| match only {
            Some(name) => {
                c.name.eq_ignore_ascii_case(name)
                    || c.aliases.iter().any(|a| a.eq_ignore_ascii_case(name))
            }
            None => c.default,
        })
        .collect();
    if selected.is_empty() {
        return Err(Error::Config(match only {
            Some(name) => format!("no check named '{name}' in suite '{suite}'"),
            None => format!("suite '{suite}' has no checks"),
        }));
    }
    let checks: Vec<CheckResult> = selected.iter().map(|c| (c.runner)(&ctx)).collect();
    let pass = checks.iter().all(|c| c.pass);
    Ok(SuiteReport { suite: suite.into(), seed, trials, checks, pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinematics_suite_passes() {
        let k = Constants::natural();
        let r = run_suite("kinematics", 42, 60, None, None, &k).unwrap();
        for c in &r.checks {
            assert!(c.pass, "{}: residual {} vs tol {}", c.name, c.max_residual, c.tolerance);
        }
    }

    #[test]
    fn det_reference_check_reports_the_discrepancy() {
        let k = Constants::natural();
        let r = run_suite("stress", 1, 10, None, Some("detA"), &k).unwrap();
        assert_eq!(r.checks.len(), 1);
        assert!(!r.checks[0].pass);
        assert!(r.checks[0].note.as_ref().unwrap().contains("19/432"));
    }

    #[test]
    fn unknown_suite_and_zero_trials_are_config_errors() {
        let k = Constants::natural();
        assert!(matches!(run_suite("nope", 1, 10, None, None, &k), Err(Error::Config(_))));
        assert!(matches!(run_suite("all", 1, 0, None, None, &k), Err(Error::Config(_))));
    }

    #[test]
    fn reports_are_deterministic() {
        let k = Constants::natural();
        let a = run_suite("kinematics", 7, 30, None, None, &k).unwrap();
        let b = run_suite("kinematics", 7, 30, None, None, &k).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
