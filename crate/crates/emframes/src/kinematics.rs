//! The augmented Lorentz group: boosts with real or complex velocities,
//! rotations and reflections (real O(3) and its complex extension G(3)),
//! Einstein velocity addition, the Thomas rotation, unique R*B decomposition
//! and the limit frame reached as the boost speed grows without bound.
//!
//! Matrices act on (ct, x, y, z) column vectors; index 0 is time.

use num_complex::Complex64 as C64;

use crate::constants::Constants;
use crate::error::{Error, Result};
use crate::linalg::{c64, CMat3, CMat4, CVec3};

/// Choice of square root in gamma = 1/sqrt(1 - v.v/c^2).
///
/// `Principal` uses the principal complex square root (cut along the negative
/// real axis, sqrt of a negative real = +i sqrt|.|), so a real speed v > c
/// gives gamma = -i/sqrt(v^2/c^2 - 1). `Negated` is its negation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Principal,
    Negated,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Principal => 1.0,
            Branch::Negated => -1.0,
        }
    }
}

/// Whether the time coordinate is t or x0 = ct. Internally everything is
/// computed in the x0 = ct convention; `TimeT` matrices are obtained by
/// conjugation with A_c = diag(c, 1, 1, 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeConvention {
    TimeT,
    TimeCT,
}

/// gamma for a (possibly complex) velocity, for the chosen branch.
pub fn gamma(v: &CVec3, branch: Branch, constants: &Constants) -> Result<C64> {
    let c2 = c64(constants.c * constants.c, 0.0);
    let arg = c64(1.0, 0.0) - v.csq() / c2;
    if (v.csq() - c2).norm() <= 1e-10 * c2.norm() {
        return Err(Error::LightSpeedVelocity);
    }
    Ok(c64(branch.sign(), 0.0) / arg.sqrt())
}

/// A boost: velocity plus the branch selecting the sign of gamma.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoostSpec {
    pub v: CVec3,
    pub branch: Branch,
    pub convention: TimeConvention,
}

impl BoostSpec {
    pub fn new(v: CVec3, branch: Branch) -> Self {
        BoostSpec { v, branch, convention: TimeConvention::TimeCT }
    }

    pub fn real(vx: f64, vy: f64, vz: f64) -> Self {
        BoostSpec::new(CVec3::from_real(vx, vy, vz), Branch::Principal)
    }

    pub fn with_convention(mut self, convention: TimeConvention) -> Self {
        self.convention = convention;
        self
    }

    /// Construct from a velocity and a known gamma value; picks the branch
    /// that reproduces `g` and rejects inconsistent pairs.
    pub fn with_gamma(v: CVec3, g: C64, constants: &Constants) -> Result<Self> {
        let gp = gamma(&v, Branch::Principal, constants)?;
        let tol = 1e-9 * gp.norm().max(1.0);
        if (g - gp).norm() <= tol {
            Ok(BoostSpec::new(v, Branch::Principal))
        } else if (g + gp).norm() <= tol {
            Ok(BoostSpec::new(v, Branch::Negated))
        } else {
            Err(Error::DegenerateComposition)
        }
    }

    pub fn gamma(&self, constants: &Constants) -> Result<C64> {
        gamma(&self.v, self.branch, constants)
    }

    pub fn negated_velocity(&self) -> BoostSpec {
        BoostSpec { v: self.v.neg(), branch: self.branch, convention: self.convention }
    }
}

/// Boost matrix for the spec's convention.
///
/// In x0 = ct coordinates:
/// B = [[g, -g v^T/c], [-g v/c, I + g^2 v v^T / (c^2 (g+1))]].
pub fn boost_matrix(spec: &BoostSpec, constants: &Constants) -> Result<CMat4> {
    let g = spec.gamma(constants)?;
    boost_matrix_with_gamma(&spec.v, g, spec.convention, constants)
}

/// Boost matrix with an explicitly supplied gamma (used when composing, where
/// gamma of the composite comes from the product rule rather than a fresh
/// square root).
pub fn boost_matrix_with_gamma(
    v: &CVec3,
    g: C64,
    convention: TimeConvention,
    constants: &Constants,
) -> Result<CMat4> {
    if (g + c64(1.0, 0.0)).norm() <= 1e-12 * g.norm().max(1.0) {
        return Err(Error::DegenerateGamma);
    }
    let c = constants.c;
    let mut b = CMat4::identity();
    b.m[0][0] = g;
    for j in 0..3 {
        let e = -g * v.comp(j) / c64(c, 0.0);
        b.m[0][j + 1] = e;
        b.m[j + 1][0] = e;
    }
    let f = g * g / (c64(c * c, 0.0) * (g + c64(1.0, 0.0)));
    for i in 0..3 {
        for j in 0..3 {
            b.m[i + 1][j + 1] += f * v.comp(i) * v.comp(j);
        }
    }
    Ok(match convention {
        TimeConvention::TimeCT => b,
        TimeConvention::TimeT => {
            // A_c^{-1} B A_c with A_c = diag(c,1,1,1)
            let mut t = b;
            for j in 1..4 {
                t.m[0][j] /= c64(c, 0.0);
                t.m[j][0] *= c64(c, 0.0);
            }
            t
        }
    })
}

/// Element of O(3) or its complex extension G(3): M M^t = I (plain transpose).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Orthogonal3 {
    pub m: CMat3,
    pub det_sign: f64,
}

impl Orthogonal3 {
    pub fn new(m: CMat3) -> Result<Self> {
        let resid = m.orthogonality_residual();
        if resid > 1e-11 {
            return Err(Error::NotOrthogonal { residual: resid });
        }
        let d = m.det();
        let sign = if (d - c64(1.0, 0.0)).norm() <= 1e-11 {
            1.0
        } else if (d + c64(1.0, 0.0)).norm() <= 1e-11 {
            -1.0
        } else {
            return Err(Error::NotOrthogonal { residual: (d.norm() - 1.0).abs() });
        };
        Ok(Orthogonal3 { m, det_sign: sign })
    }

    pub fn identity() -> Self {
        Orthogonal3 { m: CMat3::identity(), det_sign: 1.0 }
    }

    pub fn from_real(r: [[f64; 3]; 3]) -> Result<Self> {
        Orthogonal3::new(CMat3::from_real(r))
    }

    pub fn apply(&self, v: &CVec3) -> CVec3 {
        self.m.apply(v)
    }

    pub fn inverse(&self) -> Orthogonal3 {
        Orthogonal3 { m: self.m.transpose(), det_sign: self.det_sign }
    }

    pub fn compose(&self, other: &Orthogonal3) -> Orthogonal3 {
        Orthogonal3 { m: self.m.mul(&other.m), det_sign: self.det_sign * other.det_sign }
    }
}

/// Block-diagonal spacetime embedding R_g of a spatial rotation/reflection.
pub fn rotation_matrix(g: &Orthogonal3) -> CMat4 {
    let mut r = CMat4::identity();
    for i in 0..3 {
        for j in 0..3 {
            r.m[i + 1][j + 1] = g.m.m[i][j];
        }
    }
    r
}

fn composition_denominator(u: &CVec3, v: &CVec3, constants: &Constants) -> Result<C64> {
    let c2 = constants.c * constants.c;
    let denom = c64(1.0, 0.0) + u.cdot(v) / c64(c2, 0.0);
    if denom.norm() <= 1e-12 {
        return Err(Error::DegenerateComposition);
    }
    Ok(denom)
}

fn check_complex_nonisotropic(u: &CVec3) -> Result<()> {
    let n = u.norm();
    if n == 0.0 {
        return Ok(()); // exactly zero velocity composes as the identity
    }
    let imaginary = !u.is_real(1e-14);
    if imaginary && u.csq().norm() <= 1e-12 * n * n {
        return Err(Error::ZeroVelocity);
    }
    Ok(())
}

/// Einstein velocity addition u*v with the branch of gamma_u made explicit.
pub fn velocity_compose(
    u: &CVec3,
    v: &CVec3,
    branch_u: Branch,
    constants: &Constants,
) -> Result<CVec3> {
    check_complex_nonisotropic(u)?;
    let denom = composition_denominator(u, v, constants)?;
    if u.norm() == 0.0 {
        return Ok(*v);
    }
    let gu = gamma(u, branch_u, constants)?;
    let c2 = c64(constants.c * constants.c, 0.0);
    let first = u.add(v).scale(c64(1.0, 0.0) / denom);
    let second = u
        .cross(&u.cross(v))
        .scale(gu / (c2 * (gu + c64(1.0, 0.0)) * denom));
    Ok(first.add(&second))
}

/// gamma of the composite, from the product rule
/// gamma_{u*v} = gamma_u gamma_v (1 + u.v/c^2).
pub fn compose_gamma(gu: C64, gv: C64, u: &CVec3, v: &CVec3, constants: &Constants) -> C64 {
    let c2 = c64(constants.c * constants.c, 0.0);
    gu * gv * (c64(1.0, 0.0) + u.cdot(v) / c2)
}

/// The skew matrix with Omega x = w cross x.
fn skew(w: &CVec3) -> CMat3 {
    let z = c64(0.0, 0.0);
    CMat3 {
        m: [
            [z, -w.z, w.y],
            [w.z, z, -w.x],
            [-w.y, w.x, z],
        ],
    }
}

/// Thomas rotation g with B_v B_u = R_g B_{u*v}, via the closed form
/// R_g = I - c1 Omega + c2 Omega^2 built from omega = u x v.
pub fn thomas_rotation(
    u: &CVec3,
    v: &CVec3,
    branch_u: Branch,
    branch_v: Branch,
    constants: &Constants,
) -> Result<Orthogonal3> {
    check_complex_nonisotropic(u)?;
    check_complex_nonisotropic(v)?;
    let _ = composition_denominator(u, v, constants)?;
    let gu = gamma(u, branch_u, constants)?;
    let gv = gamma(v, branch_v, constants)?;
    let guv = compose_gamma(gu, gv, u, v, constants);
    // condition (gamma_uv)^2 != 1, equivalently the discriminant of the
    // composition stays away from zero
    if (guv * guv - c64(1.0, 0.0)).norm() <= 1e-12 {
        return Err(Error::DegenerateComposition);
    }
    let one = c64(1.0, 0.0);
    let c2 = c64(constants.c * constants.c, 0.0);
    let denom = c2 * (gu + one) * (gv + one) * (guv + one);
    if denom.norm() <= 1e-12 {
        return Err(Error::DegenerateComposition);
    }
    let c1 = -gu * gv * (gu + gv + guv + one) / denom;
    let c2_coef = gu * gu * gv * gv / (c2 * denom);
    let om = skew(&u.cross(v));
    let om2 = om.mul(&om);
    let r = CMat3::identity()
        .sub(&om.scale(c1))
        .add(&om2.scale(c2_coef));
    Orthogonal3::new(r)
}

/// Composite boost spec for u then v (frame chain S -> S' -> S''), carrying
/// the gamma fixed by the product rule.
pub fn compose_boosts(
    u: &BoostSpec,
    v: &BoostSpec,
    constants: &Constants,
) -> Result<(Orthogonal3, BoostSpec, C64)> {
    let w = velocity_compose(&u.v, &v.v, u.branch, constants)?;
    let gu = u.gamma(constants)?;
    let gv = v.gamma(constants)?;
    let guv = compose_gamma(gu, gv, &u.v, &v.v, constants);
    let g = thomas_rotation(&u.v, &v.v, u.branch, v.branch, constants)?;
    let spec = BoostSpec::with_gamma(w, guv, constants)?;
    Ok((g, spec, guv))
}

/// Frobenius residual of the conjugation identity R_g B_v = B_{g(v)} R_g.
pub fn conjugate_boost_residual(
    g: &Orthogonal3,
    spec: &BoostSpec,
    constants: &Constants,
) -> Result<f64> {
    let b = boost_matrix(spec, constants)?;
    let gv = BoostSpec { v: g.apply(&spec.v), branch: spec.branch, convention: spec.convention };
    let bg = boost_matrix(&gv, constants)?;
    let rg = rotation_matrix(g);
    Ok(rg.mul(&b).sub(&bg.mul(&rg)).frobenius())
}

/// An element of the augmented Lorentz group together with its unique
/// L = R_g B_v factorization.
#[derive(Debug, Clone)]
pub struct FrameMap {
    pub matrix: CMat4,
    pub rotation: Orthogonal3,
    pub boost: BoostSpec,
}

impl FrameMap {
    pub fn recomposition_residual(&self, constants: &Constants) -> Result<f64> {
        let b = boost_matrix(&self.boost, constants)?;
        let r = rotation_matrix(&self.rotation);
        Ok(r.mul(&b).sub(&self.matrix).frobenius())
    }
}

/// Residual of the (complex) Lorentz-group condition L^t eta L = eta in
/// x0 = ct coordinates.
pub fn lorentz_residual(l: &CMat4) -> f64 {
    let eta = CMat4::diag([c64(1.0, 0.0), c64(-1.0, 0.0), c64(-1.0, 0.0), c64(-1.0, 0.0)]);
    l.transpose().mul(&eta).mul(l).sub(&eta).frobenius()
}

/// Unique decomposition L = R_g B_v of an augmented-Lorentz-group element,
/// reading gamma and the velocity off row zero.
pub fn decompose(l: &CMat4, constants: &Constants) -> Result<FrameMap> {
    let scale = l.frobenius().powi(2).max(1.0);
    let resid = lorentz_residual(l);
    if resid > 1e-9 * scale {
        return Err(Error::NotLorentz { residual: resid });
    }
    let g00 = l.m[0][0];
    if g00.norm() <= 1e-12 {
        return Err(Error::LightlikeRow);
    }
    let c = c64(constants.c, 0.0);
    let v = CVec3::new(
        -c * l.m[0][1] / g00,
        -c * l.m[0][2] / g00,
        -c * l.m[0][3] / g00,
    );
    let boost = BoostSpec::with_gamma(v, g00, constants)?;
    let binv = boost_matrix_with_gamma(&v.neg(), g00, TimeConvention::TimeCT, constants)?;
    let prod = l.mul(&binv);
    let rotation = Orthogonal3::new(prod.spatial())?;
    Ok(FrameMap { matrix: *l, rotation, boost })
}

/// Solve B_w B_u = R_g B_{v e1} for w. From the dual composition identity
/// B_u B_{-v e1} = B_{u * (-v e1)} R_g, inverting and cancelling gives
/// w = -(u * (-v e1)) = (-u) * (v e1); this is the order that actually
/// satisfies the defining identity (checked by decomposition).
pub fn solve_w(u: &CVec3, v: f64, constants: &Constants) -> Result<CVec3> {
    let ve1 = CVec3::from_real(v, 0.0, 0.0);
    if u.norm() == 0.0 {
        return Ok(ve1);
    }
    velocity_compose(&u.neg(), &ve1, Branch::Principal, constants)
}

/// Entrywise limit of B_{f vhat} as f -> infinity (principal branch), in
/// x0 = ct coordinates:
/// [[0, i vhat^T], [i vhat, I - vhat vhat^T]].
pub fn limit_boost(direction: &CVec3) -> Result<CMat4> {
    if !direction.is_real(1e-12) {
        return Err(Error::NotUnit);
    }
    let n = direction.norm();
    if (n - 1.0).abs() > 1e-12 {
        return Err(Error::NotUnit);
    }
    let i = c64(0.0, 1.0);
    let mut b = CMat4::zero();
    for j in 0..3 {
        b.m[0][j + 1] = i * direction.comp(j);
        b.m[j + 1][0] = i * direction.comp(j);
    }
    for a in 0..3 {
        for bidx in 0..3 {
            let delta = if a == bidx { c64(1.0, 0.0) } else { c64(0.0, 0.0) };
            b.m[a + 1][bidx + 1] = delta - direction.comp(a) * direction.comp(bidx);
        }
    }
    Ok(b)
}

/// Find g in SG(3) with g(e1) = v / sqrt(v.v), by bilinear Gram-Schmidt.
pub fn rotation_taking_e1_to(v: &CVec3) -> Result<Orthogonal3> {
    let vsq = v.csq();
    if vsq.norm() <= 1e-12 * v.norm().powi(2).max(f64::MIN_POSITIVE) {
        return Err(Error::IsotropicVector);
    }
    let vhat = v.scale(c64(1.0, 0.0) / vsq.sqrt());
    // second column: project a basis vector off vhat, keep the least isotropic
    let mut best: Option<(CVec3, f64)> = None;
    for k in 0..3 {
        let e = CVec3::basis(k);
        let h = e.sub(&vhat.scale(vhat.cdot(&e)));
        let hsq = h.csq();
        let quality = hsq.norm() / h.norm().powi(2).max(f64::MIN_POSITIVE);
        if best.as_ref().map_or(true, |(_, q)| quality > *q) {
            best = Some((h, quality));
        }
    }
    let (h, quality) = best.unwrap();
    if quality <= 1e-10 {
        return Err(Error::IsotropicVector);
    }
    let h = h.scale(c64(1.0, 0.0) / h.csq().sqrt());
    let third = vhat.cross(&h);
    let m = CMat3::from_cols(vhat, h, third);
    // the triple product vhat.(h x (vhat x h)) is +1 by construction, but swap
    // the last two columns if rounding lands the determinant at -1
    let m = if (m.det() + c64(1.0, 0.0)).norm() < 1e-6 {
        CMat3::from_cols(vhat, third, h)
    } else {
        m
    };
    Orthogonal3::new(m)
}
