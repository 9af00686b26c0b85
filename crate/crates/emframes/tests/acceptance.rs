//! Acceptance suite: one test per criterion, each printing a single
//! "criterion NN name: PASS/FAIL" line with the governing numbers.
//!
//! Criteria 4 and 8 pin reference values that the library's own verified
//! computations contradict (an exact rational determinant that evaluates to
//! 19/432 rather than the referenced 19/72, and forced-zero lists that the
//! sampled constraint systems do not imply). Those two tests are kept
//! faithful to the stated criteria and fail with the measured values; see
//! the notes in each test and the verify-suite checks `det_reference`,
//! `det_consistency`, `pipeline_cross_check` and `nullspace_example`.

use std::sync::Arc;
use std::time::Instant;

use emframes::fields::{
    transform_cc_boost, transform_cc_limit, transform_em_boost, transform_em_limit, ChargeCurrent,
    EMField,
};
use emframes::frame::{FrameChain, FrameStep};
use emframes::jet::real_point;
use emframes::kinematics::{
    boost_matrix, boost_matrix_with_gamma, compose_boosts, compose_gamma, conjugate_boost_residual,
    gamma, limit_boost, rotation_matrix, thomas_rotation, velocity_compose, Branch, BoostSpec,
    Orthogonal3, TimeConvention,
};
use emframes::linalg::{c64, CMat3, CVec3};
use emframes::nonradiating::{
    classically_nonradiating, extract_parallel, flux_scan, FluxConfig, ParallelExtract, Scenario,
};
use emframes::nullspace::{
    nullspace_analysis, RowVariant, SystemKind, REFERENCE_FORCED_19,
};
use emframes::provider::{crossed_fields, FieldProvider, PlaneWave, PolynomialField, ReversedProvider};
use emframes::stress::{build_stress_energy, corner_det_exact, corner_matrix, transform_stress_energy};
use emframes::verify::{run_suite, CheckCtx};
use emframes::{C64, Constants};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn nat() -> Constants {
    Constants::natural()
}

fn rand_vec(rng: &mut StdRng, max: f64) -> CVec3 {
    CVec3::from_real(
        rng.gen_range(-max..max),
        rng.gen_range(-max..max),
        rng.gen_range(-max..max),
    )
}

fn rand_orthogonal(rng: &mut StdRng) -> Orthogonal3 {
    loop {
        let a = rand_vec(rng, 1.0);
        if a.norm() < 1e-2 {
            continue;
        }
        let a = a.scale(c64(1.0 / a.norm(), 0.0));
        let mut b = rand_vec(rng, 1.0);
        b = b.sub(&a.scale(a.cdot(&b)));
        if b.norm() < 1e-2 {
            continue;
        }
        let b = b.scale(c64(1.0 / b.norm(), 0.0));
        let g = Orthogonal3::new(CMat3::from_cols(a, b, a.cross(&b))).unwrap();
        if rng.gen_bool(0.5) {
            let refl = Orthogonal3::from_real([[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]])
                .unwrap();
            return g.compose(&refl);
        }
        return g;
    }
}

#[test]
fn criterion_01_conjugation_identity() {
    let k = nat();
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(1001);
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let g = rand_orthogonal(&mut rng);
        // |v| <= 0.99 c
        let mut v = rand_vec(&mut rng, 1.0);
        let n = v.norm();
        if n > 1e-9 {
            v = v.scale(c64(rng.gen_range(0.0..0.99) / n, 0.0));
        }
        let r = conjugate_boost_residual(&g, &BoostSpec::new(v, Branch::Principal), &k).unwrap();
        worst = worst.max(r);
    }
    let dt = start.elapsed();
    let pass = worst < 1e-10 && dt.as_secs_f64() < 1.0;
    println!(
        "criterion 01 conjugation identity: {} (max residual {worst:.3e} < 1e-10 over 500 frames, {:.2}s < 1s)",
        if pass { "PASS" } else { "FAIL" },
        dt.as_secs_f64()
    );
    assert!(worst < 1e-10, "conjugation residual {worst:.3e}");
    assert!(dt.as_secs_f64() < 1.0, "took {dt:?}");
}

#[test]
fn criterion_02_composition_and_thomas_rotation() {
    let k = nat();
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(1002);
    let mut worst_matrix = 0.0f64;
    let mut worst_vector = 0.0f64;
    let mut done = 0;
    while done < 500 {
        let u = rand_vec(&mut rng, 0.55);
        let v = rand_vec(&mut rng, 0.55);
        if u.norm() < 1e-3 || v.norm() < 1e-3 {
            continue;
        }
        let su = BoostSpec::new(u, Branch::Principal);
        let sv = BoostSpec::new(v, Branch::Principal);
        let (g, wspec, guv) = compose_boosts(&su, &sv, &k).unwrap();
        let lhs = boost_matrix(&sv, &k).unwrap().mul(&boost_matrix(&su, &k).unwrap());
        let rhs = rotation_matrix(&g)
            .mul(&boost_matrix_with_gamma(&wspec.v, guv, TimeConvention::TimeCT, &k).unwrap());
        worst_matrix = worst_matrix.max(lhs.sub(&rhs).frobenius());
        let vu = velocity_compose(&v, &u, Branch::Principal, &k).unwrap();
        worst_vector = worst_vector.max(g.apply(&wspec.v).sub(&vu).norm());
        done += 1;
    }
    let dt = start.elapsed();
    let pass = worst_matrix < 1e-9 && worst_vector < 1e-9 && dt.as_secs_f64() < 2.0;
    println!(
        "criterion 02 composition + Thomas rotation: {} (matrix {worst_matrix:.3e} < 1e-9, rotation map {worst_vector:.3e} < 1e-9, {:.2}s < 2s)",
        if pass { "PASS" } else { "FAIL" },
        dt.as_secs_f64()
    );
    assert!(worst_matrix < 1e-9);
    assert!(worst_vector < 1e-9);
    assert!(dt.as_secs_f64() < 2.0, "took {dt:?}");
}

#[test]
fn criterion_03_gamma_and_square_identities() {
    let k = nat();
    let c2 = c64(1.0, 0.0);
    let mut rng = StdRng::seed_from_u64(1003);
    let mut worst_gamma = 0.0f64;
    let mut worst_square = 0.0f64;
    let mut real_done = 0;
    while real_done < 500 {
        let u = rand_vec(&mut rng, 0.55);
        let v = rand_vec(&mut rng, 0.55);
        if u.norm() < 1e-3 {
            continue;
        }
        let gu = gamma(&u, Branch::Principal, &k).unwrap();
        let gv = gamma(&v, Branch::Principal, &k).unwrap();
        let w = velocity_compose(&u, &v, Branch::Principal, &k).unwrap();
        let guv = compose_gamma(gu, gv, &u, &v, &k);
        let direct = gamma(&w, Branch::Principal, &k).unwrap();
        worst_gamma =
            worst_gamma.max((guv - direct).norm().min((guv + direct).norm()) / guv.norm());
        let denom = c64(1.0, 0.0) + u.cdot(&v);
        let rhs = (u.add(&v).csq() - u.cross(&v).csq()) / (denom * denom);
        worst_square = worst_square.max((w.csq() - rhs).norm() / rhs.norm().max(1e-12));
        real_done += 1;
    }
    // complex pairs satisfying the admissibility condition
    let mut complex_done = 0;
    while complex_done < 100 {
        let u = CVec3::new(
            c64(rng.gen_range(-0.45..0.45), rng.gen_range(-0.3..0.3)),
            c64(rng.gen_range(-0.45..0.45), rng.gen_range(-0.3..0.3)),
            c64(rng.gen_range(-0.45..0.45), rng.gen_range(-0.3..0.3)),
        );
        let v = CVec3::new(
            c64(rng.gen_range(-0.45..0.45), rng.gen_range(-0.3..0.3)),
            c64(rng.gen_range(-0.45..0.45), rng.gen_range(-0.3..0.3)),
            c64(rng.gen_range(-0.45..0.45), rng.gen_range(-0.3..0.3)),
        );
        let dag = {
            let a = c64(1.0, 0.0) + u.cdot(&v);
            a * a - (c64(1.0, 0.0) - u.csq()) * (c64(1.0, 0.0) - v.csq())
        };
        if u.csq().norm() < 1e-3
            || v.csq().norm() < 1e-3
            || (u.csq() - c2).norm() < 1e-3
            || (v.csq() - c2).norm() < 1e-3
            || (c64(1.0, 0.0) + u.cdot(&v)).norm() < 1e-3
            || dag.norm() < 1e-3
        {
            continue;
        }
        let gu = gamma(&u, Branch::Principal, &k).unwrap();
        let gv = gamma(&v, Branch::Principal, &k).unwrap();
        let w = velocity_compose(&u, &v, Branch::Principal, &k).unwrap();
        let guv = compose_gamma(gu, gv, &u, &v, &k);
        let direct = gamma(&w, Branch::Principal, &k).unwrap();
        worst_gamma =
            worst_gamma.max((guv - direct).norm().min((guv + direct).norm()) / guv.norm());
        let denom = c64(1.0, 0.0) + u.cdot(&v);
        let rhs = (u.add(&v).csq() - u.cross(&v).csq()) / (denom * denom);
        worst_square = worst_square.max((w.csq() - rhs).norm() / rhs.norm().max(1e-12));
        complex_done += 1;
    }
    let pass = worst_gamma < 1e-10 && worst_square < 1e-10;
    println!(
        "criterion 03 gamma/square identities: {} (gamma rel {worst_gamma:.3e} < 1e-10, square rel {worst_square:.3e} < 1e-10, 500 real + 100 complex pairs)",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(worst_gamma < 1e-10);
    assert!(worst_square < 1e-10);
}

/// The coefficient matrix is implemented entry-for-entry as printed; its
/// determinant evaluates exactly to 19/(432 eps0^4), not the referenced
/// 19/(72 eps0^4) (the two differ by a factor 6). The float path agrees
/// with the exact rational path to machine precision, so the discrepancy is
/// in the reference value, not the evaluation. The criterion is asserted as
/// stated and therefore fails.
#[test]
fn criterion_04_reference_determinant() {
    use num_traits::ToPrimitive;
    let exact = corner_det_exact();
    let reference = emframes::stress::corner_det_reference();
    let float = corner_matrix(1.0).det();
    let exact_f = exact.to_f64().unwrap();
    let self_consistency = (float.re - exact_f).abs() / exact_f.abs();
    let pass = exact == reference && (float.re - 19.0 / 72.0).abs() / (19.0 / 72.0) < 1e-12;
    println!(
        "criterion 04 det(A) = 19/(72 eps0^4): {} (exact det * eps0^4 = {exact}, float {:.16}, exact-vs-float agreement {self_consistency:.2e}; reference 19/72 differs by the exact factor {})",
        if pass { "PASS" } else { "FAIL" },
        float.re,
        reference / exact.clone(),
    );
    assert!(
        self_consistency < 1e-12,
        "float and exact determinant paths disagree: {self_consistency:.3e}"
    );
    assert_eq!(
        exact,
        reference,
        "exact determinant of the coefficient matrix is {exact} * eps0^-4, not the referenced 19/72 * eps0^-4"
    );
}

#[test]
fn criterion_05_limit_convergence_slopes() {
    let k = nat();
    let dir = CVec3::basis(0);
    let fit = |pts: &[(f64, f64)]| -> f64 {
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        (n * sxy - sx * sy) / (n * sxx - sx * sx)
    };
    // matrices
    let binf = limit_boost(&dir).unwrap();
    let mut pts = Vec::new();
    for exp in [2, 3, 4, 5, 6] {
        let f = 10f64.powi(exp);
        let g = gamma(&CVec3::from_real(f, 0.0, 0.0), Branch::Principal, &k).unwrap();
        let b =
            boost_matrix_with_gamma(&CVec3::from_real(f, 0.0, 0.0), g, TimeConvention::TimeCT, &k)
                .unwrap();
        pts.push((f.ln(), b.sub(&binf).frobenius().ln()));
    }
    let slope_m = fit(&pts);
    // fields and sources
    let f = EMField { e: CVec3::from_real(0.3, 0.7, -0.2), b: CVec3::from_real(-0.1, 0.4, 0.9) };
    let cc = ChargeCurrent { rho: c64(0.8, 0.0), j: CVec3::from_real(0.2, -0.5, 0.3) };
    let fl = transform_em_limit(&f, &dir, &k).unwrap();
    let ccl = transform_cc_limit(&cc, &dir, &k).unwrap();
    let mut pts_f = Vec::new();
    let mut pts_c = Vec::new();
    for exp in [2, 3, 4, 5, 6] {
        let speed = 10f64.powi(exp);
        let spec = BoostSpec::new(CVec3::from_real(speed, 0.0, 0.0), Branch::Principal);
        let ff = transform_em_boost(&f, &spec, &k).unwrap();
        let cf = transform_cc_boost(&cc, &spec, &k).unwrap();
        pts_f.push((speed.ln(), (ff.e.sub(&fl.e).norm() + ff.b.sub(&fl.b).norm()).ln()));
        pts_c.push((speed.ln(), ((cf.rho - ccl.rho).norm() + cf.j.sub(&ccl.j).norm()).ln()));
    }
    let slope_f = fit(&pts_f);
    let slope_c = fit(&pts_c);
    let ok = |s: f64| (s + 1.0).abs() < 0.1;
    let pass = ok(slope_m) && ok(slope_f) && ok(slope_c);
    println!(
        "criterion 05 limit convergence: {} (log-log slopes matrix {slope_m:.3f}, fields {slope_f:.3f}, sources {slope_c:.3f}; all within -1 +/- 0.1)",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(ok(slope_m), "matrix slope {slope_m}");
    assert!(ok(slope_f), "field slope {slope_f}");
    assert!(ok(slope_c), "source slope {slope_c}");
}

#[test]
fn criterion_06_maxwell_invariance() {
    let k = nat();
    let pw = PlaneWave::new(1.0, [2.0, 0.0, 0.0], [0.0, 1.0, 0.0], 0.2, &k).unwrap();
    let mut rng = StdRng::seed_from_u64(1006);
    let mut worst_rest = 0.0f64;
    for _ in 0..50 {
        let p = real_point(
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
        );
        worst_rest = worst_rest.max(pw.jet(&p).max_maxwell_residual(&k));
    }
    let mut worst_frame = 0.0f64;
    for trial in 0..120 {
        let step = if trial % 2 == 0 {
            FrameStep::Rotation(rand_orthogonal(&mut rng))
        } else {
            FrameStep::Boost(BoostSpec::new(rand_vec(&mut rng, 0.55), Branch::Principal))
        };
        let chain = FrameChain::new(vec![step], &k).unwrap();
        let p = real_point(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        worst_frame = worst_frame.max(chain.transform_jet(&pw.jet(&p)).max_maxwell_residual(&k));
    }
    let pass = worst_rest < 1e-12 && worst_frame < 1e-9;
    println!(
        "criterion 06 Maxwell invariance: {} (rest-frame residual {worst_rest:.3e} < 1e-12, after 120 random frames {worst_frame:.3e} < 1e-9)",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(worst_rest < 1e-12);
    assert!(worst_frame < 1e-9);
}

#[test]
fn criterion_07_cross_path_stress_energy() {
    let k = nat();
    let mut rng = StdRng::seed_from_u64(1007);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let f = EMField { e: rand_vec(&mut rng, 1.0), b: rand_vec(&mut rng, 1.0) };
        let v = rng.gen_range(-0.9..0.9);
        let spec = BoostSpec::real(v, 0.0, 0.0);
        let lambda = boost_matrix(&spec, &k).unwrap();
        let via_tensor = transform_stress_energy(&build_stress_energy(&f, &k), &lambda, &k).unwrap();
        let via_fields = build_stress_energy(&transform_em_boost(&f, &spec, &k).unwrap(), &k);
        worst = worst.max((via_tensor.sigma - via_fields.sigma).norm());
        for i in 0..3 {
            worst = worst.max((via_tensor.g.comp(i) - via_fields.g.comp(i)).norm());
            for j in 0..3 {
                worst = worst.max((via_tensor.p.m[i][j] - via_fields.p.m[i][j]).norm());
            }
        }
    }
    let pass = worst < 1e-9;
    println!(
        "criterion 07 cross-path stress-energy: {} (all 10 components, x-boosts |v| <= 0.9c, max delta {worst:.3e} < 1e-9)",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(worst < 1e-9);
}

/// The analysis assembles the published limit rows (plus their y/z-swap
/// images) over >= 60 sampled admissible parameter points and computes the
/// numerical nullspace. The stacked system has stable rank 12, which forces
/// exactly {d g1/dx, d g2/dy, d g3/dz, d p22/dt, d p33/dt} -- five of the
/// nineteen referenced derivatives -- and none of the referenced times-u
/// combinations. The criterion demands all nineteen plus the combination
/// list; it is asserted as stated and therefore fails, with the per-item
/// status printed. The derived (pipeline-checked) rows force strictly less;
/// see the `nullspace` CLI command for both reports.
#[test]
fn criterion_08_nullspace_reproduces_reference_lists() {
    let k = nat();
    let start = Instant::now();
    let report =
        nullspace_analysis(42, 120, SystemKind::Combined, RowVariant::Published, &k).unwrap();
    let dt = start.elapsed();
    let mut failures = Vec::new();
    for check in &report.reference_checks {
        if !check.forced {
            failures.push(format!("{} (projection {:.2e})", check.label, check.projection));
        }
    }
    let n_forced = report.reference_checks.iter().filter(|c| c.forced).count();
    let pass = failures.is_empty() && dt.as_secs_f64() < 30.0;
    println!(
        "criterion 08 nullspace forced-zero lists: {} ({n_forced}/{} reference items forced; rank {} over 40 unknowns; {:.1}s < 30s)",
        if pass { "PASS" } else { "FAIL" },
        report.reference_checks.len(),
        report.rank,
        dt.as_secs_f64()
    );
    for check in &report.reference_checks {
        println!(
            "    {}: {}",
            check.label,
            if check.forced { "forced" } else { "not forced" }
        );
    }
    assert!(dt.as_secs_f64() < 30.0, "took {dt:?}");
    assert!(
        failures.is_empty(),
        "the sampled constraint systems do not force: {}",
        failures.join("; ")
    );
}

#[test]
fn criterion_09_reversal() {
    let k = nat();
    let t0 = 1.0;
    let mut rng = StdRng::seed_from_u64(1009);
    let mut worst = 0.0f64;
    // plane wave and a Maxwell-satisfying polynomial jet
    let wave: Arc<dyn FieldProvider> =
        Arc::new(PlaneWave::new(1.0, [2.0, 0.0, 0.0], [0.0, 1.0, 0.0], 0.1, &k).unwrap());
    let poly: Arc<dyn FieldProvider> = {
        let cc = ChargeCurrent { rho: c64(0.3, 0.0), j: CVec3::from_real(0.1, -0.2, 0.15) };
        let jet = emframes::fields::solve_jet_constraints(
            &real_point(0.0, 0.0, 0.0, 0.5),
            &cc,
            c64(0.2, 0.0),
            1,
            &k,
        )
        .unwrap();
        Arc::new(PolynomialField { jet })
    };
    for provider in [wave, poly] {
        let rev = ReversedProvider { inner: provider.clone(), t0 };
        for _ in 0..60 {
            let p = real_point(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(0.0..t0),
            );
            let mirrored = [p[0], p[1], p[2], c64(t0, 0.0) - p[3]];
            let jr = rev.jet(&p);
            let jo = provider.jet(&mirrored);
            // Maxwell residual preserved across the reversal
            worst = worst.max((jr.max_maxwell_residual(&k) - jo.max_maxwell_residual(&k)).abs());
            worst = worst.max(jr.continuity_residual().norm() - jo.continuity_residual().norm());
            // exact divergence sign flip
            worst = worst.max((jr.poynting_divergence() + jo.poynting_divergence()).norm());
        }
    }
    let pass = worst < 1e-10;
    println!(
        "criterion 09 time reversal: {} (residual preservation and divergence sign flip, max delta {worst:.3e} < 1e-10)",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(worst < 1e-10);
}

#[test]
fn criterion_10_flux_scanner() {
    let k = nat();
    let config = FluxConfig::default();
    let mut worst_disagreement = 0.0f64;
    // plane wave, polynomial with known divergence, constant crossed fields
    let wave: Arc<dyn FieldProvider> =
        Arc::new(PlaneWave::new(1.0, [1.3, 0.0, 0.0], [0.0, 1.0, 0.0], 0.0, &k).unwrap());
    let poly: Arc<dyn FieldProvider> = {
        let mut jet = emframes::jet::FieldJet::zero_at(real_point(0.0, 0.0, 0.0, 0.0));
        jet.e[1] = emframes::jet::Jet1::new(
            c64(0.0, 0.0),
            [c64(0.4, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)],
        );
        jet.b[2] = emframes::jet::Jet1::constant(c64(1.0, 0.0));
        Arc::new(PolynomialField { jet })
    };
    for provider in [wave, poly] {
        let s = Scenario::new(provider, 0.0, vec![0.7, 1.2, 2.0]).unwrap();
        let rows = flux_scan(&s, 0.25, &config).unwrap();
        for row in rows {
            let diff = (row.volume_integral - row.surface_integral).abs();
            let allowed = row.abs_error_estimate.max(
                1e-9 * row.volume_integral.abs().max(row.surface_integral.abs()).max(1.0),
            );
            worst_disagreement = worst_disagreement.max(diff / allowed.max(f64::MIN_POSITIVE));
        }
    }
    let s = Scenario::new(Arc::new(crossed_fields(1.0, 1.0)), 0.0, vec![0.5, 1.0, 2.0]).unwrap();
    let rows = flux_scan(&s, 0.0, &config).unwrap();
    let worst_const =
        rows.iter().map(|r| r.volume_integral.abs().max(r.surface_integral.abs())).fold(0.0, f64::max);
    let verdict = classically_nonradiating(&rows, 1e-8, 1e-6);
    let pass = worst_disagreement <= 1.0 && worst_const < 1e-8 && verdict;
    println!(
        "criterion 10 flux scanner: {} (volume/surface agreement within reported error, worst ratio {worst_disagreement:.3f} <= 1; constant-field |flux| {worst_const:.3e} < 1e-8)",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(worst_disagreement <= 1.0);
    assert!(worst_const < 1e-8);
    assert!(verdict);
}

#[test]
fn criterion_11_parallel_extraction() {
    let mut rng = StdRng::seed_from_u64(1011);
    let mut worst = 0.0f64;
    let mut done = 0;
    while done < 1000 {
        let b = CVec3::new(
            c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        );
        if b.norm() < 1e-3 {
            continue;
        }
        let lambda: C64 = c64(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        match extract_parallel(&EMField { e: b.scale(lambda), b }) {
            Ok(ParallelExtract::Parallel(l)) => worst = worst.max((l - lambda).norm()),
            other => panic!("expected parallel extraction, got {other:?}"),
        }
        done += 1;
    }
    let rejected = matches!(
        extract_parallel(&EMField { e: CVec3::basis(0), b: CVec3::basis(1) }),
        Ok(ParallelExtract::NotParallel)
    );
    let pass = worst < 1e-9 && rejected;
    println!(
        "criterion 11 parallel extraction: {} (1000 trials, max |lambda error| {worst:.3e} < 1e-9; orthogonal pair rejected: {rejected})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(worst < 1e-9);
    assert!(rejected);
}

/// Every reference item of criterion 8 that the honest analysis does
/// support must keep passing: the example subset of forced derivatives.
#[test]
fn criterion_08_supported_subset_is_forced() {
    let k = nat();
    let report =
        nullspace_analysis(42, 80, SystemKind::Limit, RowVariant::Published, &k).unwrap();
    let forced = report.forced_names();
    for name in ["d g1/dx", "d g2/dy", "d g3/dz", "d p22/dt"] {
        assert!(forced.contains(&name), "{name} should be forced; got {forced:?}");
    }
    println!(
        "criterion 08 supported subset: PASS (forced set {:?} contains the reference example subset)",
        forced
    );
    // the full 19-item list context for the failing criterion
    let missing: Vec<&str> = REFERENCE_FORCED_19
        .iter()
        .map(|(q, d)| (*q, *d))
        .filter(|(q, d)| !forced.contains(&format!("d {q}/d{d}").as_str()))
        .map(|(q, _)| q)
        .collect();
    println!("    (items of the 19-element reference list not implied: {} of 19)", missing.len());
}

/// The default verify suites must be green end to end (the reference-value
/// checks excluded from the defaults are covered by criteria 4 and 8).
#[test]
fn default_verify_suites_pass() {
    let k = nat();
    for suite in ["kinematics", "fields", "stress", "nonradiating"] {
        let report = run_suite(suite, 42, 100, None, None, &k).unwrap();
        for check in &report.checks {
            assert!(
                check.pass,
                "{suite}/{}: residual {:.3e} vs tolerance {:.3e}",
                check.name, check.max_residual, check.tolerance
            );
        }
    }
    let _ = CheckCtx { seed: 0, trials: 1, constants: k, tol_override: None };
    println!("default verify suites: PASS");
}
