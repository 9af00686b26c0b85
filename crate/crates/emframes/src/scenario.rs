//! Scenario files: a JSON schema describing constants, a field provider, a
//! frame chain and optional analysis defaults. Complex numbers serialize as
//! [re, im] pairs. Loading validates physics-level constraints (velocities
//! away from light speed, orthogonal rotation blocks, unit limit directions).

use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::constants::Constants;
use crate::error::{Error, Result};
use crate::frame::{FrameChain, FrameStep};
use crate::jet::{FieldJet, Jet1};
use crate::kinematics::{Branch, BoostSpec, Orthogonal3};
use crate::linalg::{c64, CMat3, CVec3};
use crate::provider::{crossed_fields, ConstantField, FieldProvider, PlaneWave, PolynomialField};

/// [re, im] pair.
pub type CNum = [f64; 2];

fn to_c(v: &CNum) -> C64 {
    c64(v[0], v[1])
}

fn to_cvec(v: &[CNum; 3]) -> CVec3 {
    CVec3::new(to_c(&v[0]), to_c(&v[1]), to_c(&v[2]))
}

pub fn complex_json(z: C64) -> serde_json::Value {
    serde_json::json!([z.re, z.im])
}

pub fn cvec_json(v: &CVec3) -> serde_json::Value {
    serde_json::json!([complex_json(v.x), complex_json(v.y), complex_json(v.z)])
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ConstantsSpec {
    pub c: f64,
    pub eps0: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProviderSpec {
    PlaneWave {
        amplitude: f64,
        wave_vector: [f64; 3],
        polarization: [f64; 3],
        #[serde(default)]
        phase: f64,
    },
    Constant {
        e: [CNum; 3],
        b: [CNum; 3],
    },
    Crossed {
        e_amplitude: f64,
        b_amplitude: f64,
    },
    PolynomialJet {
        point: [f64; 4],
        e: [JetSpec; 3],
        b: [JetSpec; 3],
        #[serde(default)]
        rho: JetSpec,
        #[serde(default)]
        j: [JetSpec; 3],
    },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct JetSpec {
    pub value: CNum,
    pub grad: [CNum; 4],
}

impl Default for JetSpec {
    fn default() -> Self {
        JetSpec { value: [0.0, 0.0], grad: [[0.0, 0.0]; 4] }
    }
}

impl JetSpec {
    fn to_jet(&self) -> Jet1 {
        Jet1::new(
            to_c(&self.value),
            [to_c(&self.grad[0]), to_c(&self.grad[1]), to_c(&self.grad[2]), to_c(&self.grad[3])],
        )
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum FrameStepSpec {
    Boost {
        velocity: [CNum; 3],
        #[serde(default = "default_branch")]
        branch: String,
    },
    Rotation {
        matrix: [[f64; 3]; 3],
    },
    Limit {
        direction: [f64; 3],
    },
}

fn default_branch() -> String {
    "principal".into()
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Default)]
pub struct AnalysisSpec {
    #[serde(default)]
    pub time: f64,
    #[serde(default)]
    pub radii: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ScenarioFile {
    pub constants: ConstantsSpec,
    pub provider: ProviderSpec,
    #[serde(default)]
    pub frames: Vec<FrameStepSpec>,
    #[serde(default)]
    pub analysis: AnalysisSpec,
}

impl ScenarioFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("scenario parse error: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn constants(&self) -> Result<Constants> {
        Constants::new(self.constants.c, self.constants.eps0)
    }

    pub fn provider(&self, k: &Constants) -> Result<Arc<dyn FieldProvider>> {
        Ok(match &self.provider {
            ProviderSpec::PlaneWave { amplitude, wave_vector, polarization, phase } => {
                Arc::new(PlaneWave::new(*amplitude, *wave_vector, *polarization, *phase, k)?)
            }
            ProviderSpec::Constant { e, b } => {
                Arc::new(ConstantField { e: to_cvec(e), b: to_cvec(b) })
            }
            ProviderSpec::Crossed { e_amplitude, b_amplitude } => {
                Arc::new(crossed_fields(*e_amplitude, *b_amplitude))
            }
            ProviderSpec::PolynomialJet { point, e, b, rho, j } => {
                let mut jet = FieldJet::zero_at([
                    c64(point[0], 0.0),
                    c64(point[1], 0.0),
                    c64(point[2], 0.0),
                    c64(point[3], 0.0),
                ]);
                for i in 0..3 {
                    jet.e[i] = e[i].to_jet();
                    jet.b[i] = b[i].to_jet();
                    jet.j[i] = j[i].to_jet();
                }
                jet.rho = rho.to_jet();
                Arc::new(PolynomialField { jet })
            }
        })
    }

    pub fn frame_chain(&self, k: &Constants) -> Result<FrameChain> {
        let mut steps = Vec::with_capacity(self.frames.len());
        for s in &self.frames {
            steps.push(match s {
                FrameStepSpec::Boost { velocity, branch } => {
                    let v = to_cvec(velocity);
                    let branch = match branch.as_str() {
                        "principal" => Branch::Principal,
                        "negated" => Branch::Negated,
                        other => {
                            return Err(Error::Config(format!("unknown branch '{other}'")))
                        }
                    };
                    let spec = BoostSpec::new(v, branch);
                    // validate the velocity away from light speed
                    spec.gamma(k)?;
                    FrameStep::Boost(spec)
                }
                FrameStepSpec::Rotation { matrix } => {
                    FrameStep::Rotation(Orthogonal3::new(CMat3::from_real(*matrix))?)
                }
                FrameStepSpec::Limit { direction } => {
                    FrameStep::Limit(CVec3::from_real(direction[0], direction[1], direction[2]))
                }
            });
        }
        FrameChain::new(steps, k)
    }
}

/// Parse "x,y,z,t".
pub fn parse_point_arg(text: &str) -> Result<[f64; 4]> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(Error::Config(format!("expected x,y,z,t but got '{text}'")));
    }
    let mut out = [0.0; 4];
    for (i, p) in parts.iter().enumerate() {
        out[i] = p
            .parse::<f64>()
            .map_err(|_| Error::Config(format!("invalid coordinate '{p}'")))?;
        if !out[i].is_finite() {
            return Err(Error::Config(format!("non-finite coordinate '{p}'")));
        }
    }
    Ok(out)
}

/// Parse a comma-separated radii list; must be positive and strictly increasing.
pub fn parse_radii_arg(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let r: f64 = part
            .parse()
            .map_err(|_| Error::Config(format!("invalid radius '{part}'")))?;
        if !r.is_finite() || r <= 0.0 {
            return Err(Error::Config(format!("radius must be positive, got '{part}'")));
        }
        out.push(r);
    }
    if out.is_empty() {
        return Err(Error::Config("no radii given".into()));
    }
    if out.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("radii must be strictly increasing".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"{
        "constants": {"c": 1.0, "eps0": 1.0},
        "provider": {"kind": "plane_wave", "amplitude": 1.0,
                     "wave_vector": [2.0, 0.0, 0.0],
                     "polarization": [0.0, 1.0, 0.0]},
        "frames": [{"boost": {"velocity": [[0.6, 0.0], [0.0, 0.0], [0.0, 0.0]],
                              "branch": "principal"}}],
        "analysis": {"time": 0.5, "radii": [1.0, 2.0]}
    }"#;

    #[test]
    fn parses_and_round_trips() {
        let s = ScenarioFile::from_json(SAMPLE).unwrap();
        let text = s.to_json();
        let s2 = ScenarioFile::from_json(&text).unwrap();
        assert_eq!(s, s2);
        assert_eq!(s2.to_json(), text);
        let k = s.constants().unwrap();
        let _p = s.provider(&k).unwrap();
        let chain = s.frame_chain(&k).unwrap();
        assert_eq!(chain.steps.len(), 1);
    }

    #[test]
    fn light_speed_boost_rejected() {
        let s = ScenarioFile::from_json(
            r#"{
            "constants": {"c": 1.0, "eps0": 1.0},
            "provider": {"kind": "crossed", "e_amplitude": 1.0, "b_amplitude": 1.0},
            "frames": [{"boost": {"velocity": [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]]}}]
        }"#,
        )
        .unwrap();
        let k = s.constants().unwrap();
        assert!(matches!(s.frame_chain(&k), Err(Error::LightSpeedVelocity)));
    }

    #[test]
    fn parse_point_and_radii() {
        assert_eq!(parse_point_arg("1, 2,3 ,4").unwrap(), [1.0, 2.0, 3.0, 4.0]);
        assert!(parse_point_arg("1,2,3").is_err());
        assert!(parse_point_arg("1,2,3,x").is_err());
        assert_eq!(parse_radii_arg("0.5, 1.0, 2").unwrap(), vec![0.5, 1.0, 2.0]);
        assert!(parse_radii_arg("2,1").is_err());
        assert!(parse_radii_arg("-1").is_err());
        assert!(parse_radii_arg("").is_err());
    }
}
