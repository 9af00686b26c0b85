//! Numerical nullspace analysis of the limit constraint systems: sample
//! admissible orthonormal triples, stack coefficient rows (plus their
//! y/z-swap images, which are valid rows by the permutation covariance of the
//! construction), and decide which of the 40 derivative unknowns -- or which
//! specific combinations -- are forced to vanish.

use num_complex::Complex64 as C64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use serde::Serialize;

use crate::constants::Constants;
use crate::error::{Error, Result};
use crate::linalg::{c64, svd_jacobi, CVec3};
use crate::stress::{
    limit_row, times_u_row, unknown_index, unknown_name, OrthonormalTriple, Row40, N_UNKNOWNS,
};
pub use crate::stress::RowVariant;

/// Which system to stack.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemKind {
    /// The plain-limit rows only.
    Limit,
    /// The times-u rows only.
    TimesU,
    /// Both row families stacked.
    Combined,
}

/// Sample an admissible orthonormal triple: theta uniform on the sphere with
/// theta1 in (0.05, 0.95), theta' uniform on the orthogonal circle.
pub fn sample_triple<R: Rng>(rng: &mut R) -> OrthonormalTriple {
    loop {
        let mut v = [0.0f64; 3];
        for x in v.iter_mut() {
            *x = rng.gen_range(-1.0..1.0);
        }
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if !(0.1..=1.0).contains(&n) {
            continue;
        }
        let theta = CVec3::from_real(v[0] / n, v[1] / n, v[2] / n);
        if !(0.05..0.95).contains(&theta.x.re) {
            continue;
        }
        // orthonormal basis of the plane orthogonal to theta
        let seed = if theta.x.re.abs() < 0.9 { CVec3::basis(0) } else { CVec3::basis(1) };
        let b1 = {
            let h = seed.sub(&theta.scale(theta.cdot(&seed)));
            h.scale(c64(1.0 / h.norm(), 0.0))
        };
        let b2 = theta.cross(&b1);
        let phi = rng.gen_range(0.0..std::f64::consts::TAU);
        let theta_p = b1.scale(c64(phi.cos(), 0.0)).add(&b2.scale(c64(phi.sin(), 0.0)));
        if let Ok(t) = OrthonormalTriple::from_vectors(theta, theta_p) {
            return t;
        }
    }
}

/// Image of a coefficient row under the transposition of the y and z axes
/// (swap g2/g3, p12/p13, p22/p33 and the y/z directions).
pub fn permute_row_yz(row: &Row40) -> Row40 {
    let qmap = [0usize, 1, 3, 2, 4, 6, 5, 9, 8, 7]; // sigma g1 g3 g2 p11 p13 p12 p33 p23 p22
    let dmap = [0usize, 2, 1, 3];
    let mut out: Row40 = [c64(0.0, 0.0); N_UNKNOWNS];
    for q in 0..10 {
        for d in 0..4 {
            out[unknown_index(qmap[q], dmap[d])] = row[unknown_index(q, d)];
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct UnknownStatus {
    pub name: String,
    /// "forced-zero" or "free"
    pub status: String,
    /// largest component of the unknown over the orthonormal nullspace basis
    pub witness: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReferenceCheck {
    pub label: String,
    pub forced: bool,
    /// norm of the projection of the combination onto the nullspace
    /// (zero means the combination is implied by the system)
    pub projection: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct NullspaceReport {
    pub system: SystemKind,
    pub rows: String,
    pub seed: u64,
    pub samples: usize,
    pub rank: usize,
    pub nullity: usize,
    pub singular_value_max: f64,
    pub singular_value_gap: (f64, f64),
    pub unknowns: Vec<UnknownStatus>,
    pub reference_checks: Vec<ReferenceCheck>,
}

impl NullspaceReport {
    pub fn forced_names(&self) -> Vec<&str> {
        self.unknowns
            .iter()
            .filter(|u| u.status == "forced-zero")
            .map(|u| u.name.as_str())
            .collect()
    }

    pub fn all_reference_checks_pass(&self) -> bool {
        self.reference_checks.iter().all(|c| c.forced)
    }
}

/// The nineteen single derivatives claimed forced by the limit system.
pub const REFERENCE_FORCED_19: [(&str, &str); 19] = [
    ("sigma", "y"),
    ("sigma", "z"),
    ("g1", "x"),
    ("g2", "y"),
    ("g2", "z"),
    ("g2", "t"),
    ("g3", "y"),
    ("g3", "z"),
    ("g3", "t"),
    ("p12", "x"),
    ("p13", "x"),
    ("p22", "y"),
    ("p22", "z"),
    ("p22", "t"),
    ("p23", "y"),
    ("p23", "z"),
    ("p33", "y"),
    ("p33", "z"),
    ("p33", "t"),
];

fn qd_index(q: &str, d: &str) -> usize {
    let qi = crate::stress::quantity_index(q).expect("quantity name");
    let di = ["x", "y", "z", "t"].iter().position(|x| *x == d).expect("direction name");
    unknown_index(qi, di)
}

/// The combination list claimed forced by the times-u system.
pub fn reference_combinations(k: &Constants) -> Vec<(String, Vec<(usize, C64)>)> {
    let c = k.c;
    let mut out: Vec<(String, Vec<(usize, C64)>)> = vec![
        (
            "d sigma/dx + 3 d p11/dx".into(),
            vec![(qd_index("sigma", "x"), c64(1.0, 0.0)), (qd_index("p11", "x"), c64(3.0, 0.0))],
        ),
        (
            "d g1/dt + d p11/dx".into(),
            vec![(qd_index("g1", "t"), c64(1.0, 0.0)), (qd_index("p11", "x"), c64(1.0, 0.0))],
        ),
        (
            "d p12/dt - c^2 d g2/dx".into(),
            vec![(qd_index("p12", "t"), c64(1.0, 0.0)), (qd_index("g2", "x"), c64(-c * c, 0.0))],
        ),
        (
            "d p13/dt - c^2 d g3/dx".into(),
            vec![(qd_index("p13", "t"), c64(1.0, 0.0)), (qd_index("g3", "x"), c64(-c * c, 0.0))],
        ),
        (
            "ic d p23/dx + d p23/dt".into(),
            vec![(qd_index("p23", "x"), c64(0.0, c)), (qd_index("p23", "t"), c64(1.0, 0.0))],
        ),
    ];
    for (q, d) in [
        ("g1", "y"),
        ("g1", "z"),
        ("p12", "y"),
        ("p12", "z"),
        ("p13", "y"),
        ("p13", "z"),
        ("p22", "x"),
        ("p33", "x"),
    ] {
        out.push((format!("d {q}/d{d}"), vec![(qd_index(q, d), c64(1.0, 0.0))]));
    }
    out
}

fn stack_rows(
    seed: u64,
    count: usize,
    system: SystemKind,
    variant: RowVariant,
    k: &Constants,
) -> Vec<Vec<C64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows: Vec<Vec<C64>> = Vec::new();
    let mut push = |r: Row40| {
        let norm: f64 = r.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-12 {
            rows.push(r.iter().map(|c| *c / c64(norm, 0.0)).collect());
        }
    };
    for _ in 0..count {
        let t = sample_triple(&mut rng);
        if matches!(system, SystemKind::Limit | SystemKind::Combined) {
            let r = limit_row(&t, k, variant);
            push(r);
            push(permute_row_yz(&r));
        }
        if matches!(system, SystemKind::TimesU | SystemKind::Combined) {
            let r = times_u_row(&t, k, variant);
            push(r);
            push(permute_row_yz(&r));
        }
    }
    rows
}

/// Run the analysis: stack `count` sampled rows of the chosen system
/// (plus y/z-swap images), compute the numerical nullspace and report which
/// unknowns and which reference combinations are forced to vanish.
///
/// Thresholds: singular values below 1e-8 of the largest count as nullspace;
/// an unknown is forced when its component in every nullspace basis vector
/// stays below 1e-6.
pub fn nullspace_analysis(
    seed: u64,
    count: usize,
    system: SystemKind,
    variant: RowVariant,
    k: &Constants,
) -> Result<NullspaceReport> {
    if count < 60 {
        return Err(Error::Config("need at least 60 parameter samples".into()));
    }
    let rows = stack_rows(seed, count, system, variant, k);
    let rows_half = stack_rows(seed.wrapping_add(1), count / 2, system, variant, k);
    let svd = svd_jacobi(&rows);
    let svd_half = svd_jacobi(&rows_half);
    let rank = svd.rank(1e-8);
    if svd_half.rank(1e-8) != rank {
        return Err(Error::RankDeficientSampling);
    }
    let ns = svd.nullspace(1e-8);
    let nullity = ns.len();

    let mut unknowns = Vec::with_capacity(N_UNKNOWNS);
    for idx in 0..N_UNKNOWNS {
        let witness = ns.iter().map(|v| v[idx].norm()).fold(0.0, f64::max);
        let forced = witness < 1e-6;
        unknowns.push(UnknownStatus {
            name: unknown_name(idx),
            status: if forced { "forced-zero".into() } else { "free".into() },
            witness,
        });
    }

    let project = |combo: &[(usize, C64)]| -> f64 {
        let mut v = vec![c64(0.0, 0.0); N_UNKNOWNS];
        for (idx, coef) in combo {
            v[*idx] = *coef;
        }
        let norm: f64 = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let mut proj = 0.0f64;
        for basis in &ns {
            let dot: C64 = basis.iter().zip(&v).map(|(b, x)| b.conj() * *x).sum();
            proj += dot.norm_sqr();
        }
        proj.sqrt() / norm
    };

    let mut reference_checks = Vec::new();
    if matches!(system, SystemKind::Limit | SystemKind::Combined) {
        for (q, d) in REFERENCE_FORCED_19 {
            let combo = vec![(qd_index(q, d), c64(1.0, 0.0))];
            let p = project(&combo);
            reference_checks.push(ReferenceCheck {
                label: format!("d {q}/d{d}"),
                forced: p < 1e-6,
                projection: p,
            });
        }
    }
    if matches!(system, SystemKind::TimesU | SystemKind::Combined) {
        for (label, combo) in reference_combinations(k) {
            let p = project(&combo);
            reference_checks.push(ReferenceCheck { label, forced: p < 1e-6, projection: p });
        }
    }

    let smax = svd.singular_values.first().copied().unwrap_or(0.0);
    let kept = svd.singular_values.get(rank.saturating_sub(1)).copied().unwrap_or(0.0);
    let dropped = svd.singular_values.get(rank).copied().unwrap_or(0.0);
    Ok(NullspaceReport {
        system,
        rows: match variant {
            RowVariant::Published => "published".into(),
            RowVariant::Derived => "derived".into(),
        },
        seed,
        samples: count,
        rank,
        nullity,
        singular_value_max: smax,
        singular_value_gap: (kept / smax.max(f64::MIN_POSITIVE), dropped / smax.max(f64::MIN_POSITIVE)),
        unknowns,
        reference_checks,
    })
}
