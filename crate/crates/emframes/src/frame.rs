//! Frame chains: sequences of rotations/reflections, boosts and limit-frame
//! steps, applied to points, field values, sources, jets and whole providers.
//!
//! Coordinates transform as X' = Lambda X with X = (ct, x, y, z); derivative
//! operators transform with the inverse matrix, d'_mu = sum_nu
//! (Lambda^-1)_{nu mu} d_nu, so jets move by mixing components with the
//! value-level maps and chain-ruling the gradients.

use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::constants::Constants;
use crate::error::Result;
use crate::fields::{
    transform_cc_boost, transform_cc_limit, transform_cc_rotation, transform_em_boost,
    transform_em_limit, transform_em_rotation, ChargeCurrent, EMField, PotentialJet,
};
use crate::jet::{FieldJet, Jet1, Point};
use crate::kinematics::{boost_matrix, limit_boost, rotation_matrix, BoostSpec, Orthogonal3};
use crate::linalg::{c64, CMat4, CVec3};
use crate::provider::{FieldProvider, FieldSample};

/// One step of a frame chain.
#[derive(Debug, Clone)]
pub enum FrameStep {
    Rotation(Orthogonal3),
    Boost(BoostSpec),
    /// Limit frame in a real unit direction (entrywise limit of boosts).
    Limit(CVec3),
}

type EmMap = [[C64; 6]; 6];
type CcMap = [[C64; 4]; 4];

fn em_map_of(step: &FrameStep, k: &Constants) -> Result<EmMap> {
    let mut map = [[c64(0.0, 0.0); 6]; 6];
    for col in 0..6 {
        let mut e = CVec3::zero();
        let mut b = CVec3::zero();
        if col < 3 {
            *e.comp_mut(col) = c64(1.0, 0.0);
        } else {
            *b.comp_mut(col - 3) = c64(1.0, 0.0);
        }
        let f = EMField { e, b };
        let out = match step {
            FrameStep::Rotation(g) => transform_em_rotation(&f, g),
            FrameStep::Boost(spec) => transform_em_boost(&f, spec, k)?,
            FrameStep::Limit(dir) => transform_em_limit(&f, dir, k)?,
        };
        for row in 0..3 {
            map[row][col] = out.e.comp(row);
            map[row + 3][col] = out.b.comp(row);
        }
    }
    Ok(map)
}

fn cc_map_of(step: &FrameStep, k: &Constants) -> Result<CcMap> {
    let mut map = [[c64(0.0, 0.0); 4]; 4];
    for col in 0..4 {
        let rho = if col == 0 { c64(1.0, 0.0) } else { c64(0.0, 0.0) };
        let mut j = CVec3::zero();
        if col > 0 {
            *j.comp_mut(col - 1) = c64(1.0, 0.0);
        }
        let cc = ChargeCurrent { rho, j };
        let out = match step {
            FrameStep::Rotation(g) => transform_cc_rotation(&cc, g),
            FrameStep::Boost(spec) => transform_cc_boost(&cc, spec, k)?,
            FrameStep::Limit(dir) => transform_cc_limit(&cc, dir, k)?,
        };
        map[0][col] = out.rho;
        for row in 0..3 {
            map[row + 1][col] = out.j.comp(row);
        }
    }
    Ok(map)
}

fn lambda_of(step: &FrameStep, k: &Constants) -> Result<CMat4> {
    Ok(match step {
        FrameStep::Rotation(g) => rotation_matrix(g),
        FrameStep::Boost(spec) => boost_matrix(spec, k)?,
        FrameStep::Limit(dir) => limit_boost(dir)?,
    })
}

fn mat6_mul(a: &EmMap, b: &EmMap) -> EmMap {
    let mut p = [[c64(0.0, 0.0); 6]; 6];
    for i in 0..6 {
        for j in 0..6 {
            let mut s = c64(0.0, 0.0);
            for kk in 0..6 {
                s += a[i][kk] * b[kk][j];
            }
            p[i][j] = s;
        }
    }
    p
}

fn mat4c_mul(a: &CcMap, b: &CcMap) -> CcMap {
    let mut p = [[c64(0.0, 0.0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut s = c64(0.0, 0.0);
            for kk in 0..4 {
                s += a[i][kk] * b[kk][j];
            }
            p[i][j] = s;
        }
    }
    p
}

/// A composed chain of frame steps applied left-to-right.
#[derive(Clone)]
pub struct FrameChain {
    pub steps: Vec<FrameStep>,
    pub lambda: CMat4,
    pub lambda_inv: CMat4,
    em_map: EmMap,
    cc_map: CcMap,
    c: f64,
}

impl FrameChain {
    pub fn new(steps: Vec<FrameStep>, k: &Constants) -> Result<Self> {
        let mut lambda = CMat4::identity();
        let mut em: EmMap = [[c64(0.0, 0.0); 6]; 6];
        let mut cc: CcMap = [[c64(0.0, 0.0); 4]; 4];
        for i in 0..6 {
            em[i][i] = c64(1.0, 0.0);
        }
        for i in 0..4 {
            cc[i][i] = c64(1.0, 0.0);
        }
        for step in &steps {
            lambda = lambda_of(step, k)?.mul(&lambda);
            em = mat6_mul(&em_map_of(step, k)?, &em);
            cc = mat4c_mul(&cc_map_of(step, k)?, &cc);
        }
        let lambda_inv = lambda.inverse()?;
        Ok(FrameChain { steps, lambda, lambda_inv, em_map: em, cc_map: cc, c: k.c })
    }

    /// Corresponding point in the final frame: X' = Lambda X.
    pub fn map_point(&self, p: &Point) -> Point {
        let x = [p[3] * c64(self.c, 0.0), p[0], p[1], p[2]];
        let xp = self.lambda.apply(&x);
        [xp[1], xp[2], xp[3], xp[0] / c64(self.c, 0.0)]
    }

    /// Preimage of a point in the final frame.
    pub fn pull_point(&self, p: &Point) -> Point {
        let x = [p[3] * c64(self.c, 0.0), p[0], p[1], p[2]];
        let xp = self.lambda_inv.apply(&x);
        [xp[1], xp[2], xp[3], xp[0] / c64(self.c, 0.0)]
    }

    pub fn transform_em(&self, f: &EMField) -> EMField {
        let vin = [f.e.x, f.e.y, f.e.z, f.b.x, f.b.y, f.b.z];
        let mut out = [c64(0.0, 0.0); 6];
        for i in 0..6 {
            for j in 0..6 {
                out[i] += self.em_map[i][j] * vin[j];
            }
        }
        EMField {
            e: CVec3::new(out[0], out[1], out[2]),
            b: CVec3::new(out[3], out[4], out[5]),
        }
    }

    pub fn transform_cc(&self, cc: &ChargeCurrent) -> ChargeCurrent {
        let vin = [cc.rho, cc.j.x, cc.j.y, cc.j.z];
        let mut out = [c64(0.0, 0.0); 4];
        for i in 0..4 {
            for j in 0..4 {
                out[i] += self.cc_map[i][j] * vin[j];
            }
        }
        ChargeCurrent { rho: out[0], j: CVec3::new(out[1], out[2], out[3]) }
    }

    /// Chain rule for a single gradient: stored as (d/dx, d/dy, d/dz, d/dt),
    /// converted through x0 = ct, transformed with the inverse matrix.
    fn transform_grad(&self, g: &[C64; 4]) -> [C64; 4] {
        let cg = [g[3] / c64(self.c, 0.0), g[0], g[1], g[2]];
        let mut out = [c64(0.0, 0.0); 4];
        for mu in 0..4 {
            for nu in 0..4 {
                out[mu] += self.lambda_inv.m[nu][mu] * cg[nu];
            }
        }
        [out[1], out[2], out[3], out[0] * c64(self.c, 0.0)]
    }

    /// Transform a full field jet to the final frame (values mixed with the
    /// field maps, gradients chain-ruled, point mapped).
    pub fn transform_jet(&self, jet: &FieldJet) -> FieldJet {
        let mut out = FieldJet::zero_at(self.map_point(&jet.point));
        let comps: [&Jet1; 6] = [&jet.e[0], &jet.e[1], &jet.e[2], &jet.b[0], &jet.b[1], &jet.b[2]];
        for row in 0..6 {
            let mut mixed = Jet1::zero();
            for col in 0..6 {
                mixed = mixed.add(&comps[col].scale(self.em_map[row][col]));
            }
            let grad = self.transform_grad(&mixed.grad);
            let j = Jet1::new(mixed.value, grad);
            if row < 3 {
                out.e[row] = j;
            } else {
                out.b[row - 3] = j;
            }
        }
        let srcs: [&Jet1; 4] = [&jet.rho, &jet.j[0], &jet.j[1], &jet.j[2]];
        for row in 0..4 {
            let mut mixed = Jet1::zero();
            for col in 0..4 {
                mixed = mixed.add(&srcs[col].scale(self.cc_map[row][col]));
            }
            let grad = self.transform_grad(&mixed.grad);
            let j = Jet1::new(mixed.value, grad);
            if row == 0 {
                out.rho = j;
            } else {
                out.j[row - 1] = j;
            }
        }
        out
    }

    /// Transform a four-potential jet (it moves exactly like (rho, J) with
    /// rho = (V/c)/c).
    pub fn transform_potential_jet(&self, pj: &PotentialJet, k: &Constants) -> Result<PotentialJet> {
        let comps: [Jet1; 4] = [
            pj.v_over_c.scale(c64(1.0 / k.c, 0.0)),
            pj.a[0],
            pj.a[1],
            pj.a[2],
        ];
        let mut out_comps = [Jet1::zero(); 4];
        for row in 0..4 {
            let mut mixed = Jet1::zero();
            for col in 0..4 {
                mixed = mixed.add(&comps[col].scale(self.cc_map[row][col]));
            }
            out_comps[row] = Jet1::new(mixed.value, self.transform_grad(&mixed.grad));
        }
        Ok(PotentialJet {
            point: self.map_point(&pj.point),
            v_over_c: out_comps[0].scale(c64(k.c, 0.0)),
            a: [out_comps[1], out_comps[2], out_comps[3]],
        })
    }
}

/// A provider viewed from the final frame of a chain.
pub struct TransformedProvider {
    pub inner: Arc<dyn FieldProvider>,
    pub chain: FrameChain,
}

impl FieldProvider for TransformedProvider {
    fn sample(&self, p: &Point) -> FieldSample {
        let q = self.chain.pull_point(p);
        let s = self.inner.sample(&q);
        let f = self.chain.transform_em(&EMField { e: s.e, b: s.b });
        let cc = self.chain.transform_cc(&ChargeCurrent { rho: s.rho, j: s.j });
        FieldSample { e: f.e, b: f.b, rho: cc.rho, j: cc.j }
    }

    fn jet(&self, p: &Point) -> FieldJet {
        let q = self.chain.pull_point(p);
        self.chain.transform_jet(&self.inner.jet(&q))
    }
}
